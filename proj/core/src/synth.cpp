#include "densepath/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "densepath/rng.hpp"

namespace densepath {

namespace {

constexpr double kDt = 0.1;  // 10 Hz

std::vector<Vec2> line_pts(Vec2 a, Vec2 b) {
  const double len = dist(a, b);
  const int n = std::max(1, static_cast<int>(std::lround(len)));
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    pts.push_back({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)});
  }
  return pts;
}

// 1 m arclength steps from angle a0 to a1 around center
std::vector<Vec2> arc_pts(Vec2 center, double radius, double a0, double a1) {
  const double sweep = a1 - a0;
  const int n = std::max(1, static_cast<int>(std::lround(std::abs(sweep) * radius)));
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double a = a0 + sweep * static_cast<double>(i) / n;
    pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return pts;
}

std::vector<Vec2> join(std::initializer_list<std::vector<Vec2>> parts) {
  std::vector<Vec2> out;
  for (const auto& part : parts) {
    for (const auto& p : part) {
      if (!out.empty() && dist(out.back(), p) < 1e-9) continue;
      out.push_back(p);
    }
  }
  return out;
}

struct PathSampler {
  std::vector<Vec2> pts;
  std::vector<double> cum;

  explicit PathSampler(std::vector<Vec2> points) : pts(std::move(points)) {
    cum.resize(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + dist(pts[i - 1], pts[i]);
  }

  double length() const { return cum.empty() ? 0.0 : cum.back(); }

  std::size_t segment_at(double s) const {
    std::size_t lo = 0, hi = cum.size() - 1;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cum[mid] <= s) lo = mid;
      else hi = mid;
    }
    return lo;
  }

  Vec2 pos(double s) const {
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_at(s);
    const double seg = cum[i + 1] - cum[i];
    const double u = seg > 0.0 ? (s - cum[i]) / seg : 0.0;
    return pts[i] + (pts[i + 1] - pts[i]) * u;
  }

  Vec2 tangent(double s) const {
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_at(s);
    const Vec2 d = pts[i + 1] - pts[i];
    const double n = d.norm();
    return n > 0.0 ? Vec2{d.x / n, d.y / n} : Vec2{0.0, 1.0};
  }
};

enum class Template { kStraight, kForkLeft, kForkRight, kUturn };

const char* template_name(Template t) {
  switch (t) {
    case Template::kStraight: return "straight";
    case Template::kForkLeft: return "fork_left";
    case Template::kForkRight: return "fork_right";
    case Template::kUturn: return "uturn";
  }
  return "straight";
}

struct TemplateGeometry {
  std::vector<std::vector<Vec2>> lanes;     // all centerlines of the map
  std::vector<std::vector<Vec2>> branches;  // drivable paths the target may take
  double start_arclength = 45.0;            // target position at t = 0
};

TemplateGeometry build_template(Template t, double lane_width) {
  TemplateGeometry g;
  const double w = lane_width;
  switch (t) {
    case Template::kStraight: {
      auto center = line_pts({0, -45}, {0, 125});
      g.lanes = {center, line_pts({-w, -45}, {-w, 125}), line_pts({w, -45}, {w, 125})};
      g.branches = {center};
      break;
    }
    case Template::kForkLeft: {
      auto approach = line_pts({0, -45}, {0, 10});
      auto straight = join({approach, line_pts({0, 10}, {0, 130})});
      // quarter arc turning left, then a straight continuation heading -x
      auto arc = arc_pts({-30, 10}, 30.0, 0.0, std::numbers::pi / 2.0);
      auto left = join({approach, arc, line_pts({-30, 40}, {-105, 40})});
      g.lanes = {straight, left};
      g.branches = {straight, left};
      break;
    }
    case Template::kForkRight: {
      auto approach = line_pts({0, -45}, {0, 10});
      auto straight = join({approach, line_pts({0, 10}, {0, 130})});
      auto arc = arc_pts({30, 10}, 30.0, std::numbers::pi, std::numbers::pi / 2.0);
      auto right = join({approach, arc, line_pts({30, 40}, {105, 40})});
      g.lanes = {straight, right};
      g.branches = {straight, right};
      break;
    }
    case Template::kUturn: {
      auto approach = line_pts({0, -45}, {0, 10});
      auto straight = join({approach, line_pts({0, 10}, {0, 130})});
      auto arc = arc_pts({-6, 10}, 6.0, 0.0, std::numbers::pi);
      auto uturn = join({approach, arc, line_pts({-12, 10}, {-12, -100})});
      g.lanes = {straight, uturn};
      g.branches = {straight, uturn};
      break;
    }
  }
  return g;
}

}  // namespace

void validate_gen_config(const GenConfig& cfg) {
  const double sum = cfg.w_straight + cfg.w_fork_left + cfg.w_fork_right + cfg.w_uturn;
  if (cfg.w_straight < 0 || cfg.w_fork_left < 0 || cfg.w_fork_right < 0 || cfg.w_uturn < 0 ||
      std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("gen: template mix weights must be non-negative and sum to 1");
  }
  if (cfg.noise_sigma < 0) throw std::invalid_argument("gen: noise sigma must be >= 0");
  if (cfg.lane_width <= 0) throw std::invalid_argument("gen: lane width must be positive");
  if (cfg.speed_min <= 0 || cfg.speed_max < cfg.speed_min) {
    throw std::invalid_argument("gen: invalid speed range");
  }
  if (cfg.horizon_s <= 0 || cfg.history_s <= 0) {
    throw std::invalid_argument("gen: horizon and history must be positive");
  }
  if (cfg.n_scenarios < 0) throw std::invalid_argument("gen: n_scenarios must be >= 0");
}

Scenario generate_one(const GenConfig& cfg, std::uint64_t index) {
  validate_gen_config(cfg);
  Rng rng = Rng(cfg.seed).fork(index);

  // template choice by mix weight
  const double u = rng.uniform();
  Template tpl = Template::kUturn;
  if (u < cfg.w_straight) tpl = Template::kStraight;
  else if (u < cfg.w_straight + cfg.w_fork_left) tpl = Template::kForkLeft;
  else if (u < cfg.w_straight + cfg.w_fork_left + cfg.w_fork_right) tpl = Template::kForkRight;

  TemplateGeometry geom = build_template(tpl, cfg.lane_width);

  Scenario s;
  char idbuf[64];
  std::snprintf(idbuf, sizeof(idbuf), "%s-%06llu", template_name(tpl),
                static_cast<unsigned long long>(index));
  s.id = idbuf;
  s.horizon_s = cfg.horizon_s;
  s.target_id = 0;

  for (std::size_t i = 0; i < geom.lanes.size(); ++i) {
    Lane lane;
    lane.id = static_cast<std::int64_t>(i);
    lane.points = geom.lanes[i];
    lane.width = cfg.lane_width;
    if (tpl == Template::kForkLeft && i == 1) lane.turn = "left";
    if (tpl == Template::kForkRight && i == 1) lane.turn = "right";
    if (tpl == Template::kUturn && i == 1) lane.turn = "uturn";
    s.map.lanes.push_back(std::move(lane));
  }
  if (rng.uniform() < cfg.parking_prob) {
    Lane parking;
    parking.id = static_cast<std::int64_t>(s.map.lanes.size());
    parking.points = line_pts({10, 15}, {10, 40});
    parking.width = 8.0;
    parking.parking = true;
    s.map.lanes.push_back(std::move(parking));
  }

  // target track along a uniformly chosen branch
  const int branch = rng.uniform_int(static_cast<int>(geom.branches.size()));
  PathSampler path(geom.branches[static_cast<std::size_t>(branch)]);
  const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
  const double s0 = geom.start_arclength;

  double lateral_end = rng.gaussian() * cfg.noise_sigma;
  const double lateral_max = std::max(0.0, cfg.lane_width / 2.0 - 0.3);
  lateral_end = std::clamp(lateral_end, -lateral_max, lateral_max);

  AgentTrack target;
  target.id = 0;
  target.type = AgentType::kVehicle;
  const int hist_steps = static_cast<int>(std::lround(cfg.history_s / kDt));
  for (int i = -hist_steps; i <= 0; ++i) {
    const double t = i * kDt;
    const double arc = s0 + speed * t;
    ObservedState st;
    const Vec2 p = path.pos(arc);
    const Vec2 tan = path.tangent(arc);
    st.t = t;
    st.x = p.x;
    st.y = p.y;
    st.heading = std::atan2(tan.y, tan.x);
    target.observed.push_back(st);
  }
  s.tracks.push_back(target);

  const int horizon_steps = static_cast<int>(std::lround(cfg.horizon_s / kDt));
  for (int i = 1; i <= horizon_steps; ++i) {
    const double t = i * kDt;
    const double arc = s0 + speed * t;
    const double ramp = (t / cfg.horizon_s) * (t / cfg.horizon_s);
    const Vec2 p = path.pos(arc);
    const Vec2 tan = path.tangent(arc);
    const Vec2 normal{-tan.y, tan.x};
    s.future.push_back(p + normal * (lateral_end * ramp));
  }

  // background agents with 1 s of history on random lanes
  const int n_bg = rng.uniform_int(cfg.max_background + 1);
  for (int b = 0; b < n_bg; ++b) {
    PathSampler lane_path(s.map.lanes[static_cast<std::size_t>(
        rng.uniform_int(static_cast<int>(s.map.lanes.size())))].points);
    if (lane_path.length() < 20.0) continue;
    AgentTrack bg;
    bg.id = b + 1;
    const double tu = rng.uniform();
    bg.type = tu < 0.7 ? AgentType::kVehicle : (tu < 0.85 ? AgentType::kCyclist : AgentType::kPedestrian);
    if (bg.type == AgentType::kPedestrian) {
      bg.length = 0.8;
      bg.width = 0.8;
    } else if (bg.type == AgentType::kCyclist) {
      bg.length = 2.0;
      bg.width = 0.8;
    }
    const double bs0 = rng.uniform(5.0, lane_path.length() - 15.0);
    const double bspeed = bg.type == AgentType::kPedestrian ? rng.uniform(0.5, 2.0)
                                                            : rng.uniform(2.0, cfg.speed_max);
    const double offset = std::clamp(rng.gaussian() * 0.5, -1.0, 1.0);
    for (int i = -hist_steps; i <= 0; ++i) {
      const double t = i * kDt;
      const double arc = bs0 + bspeed * t;
      const Vec2 p = lane_path.pos(arc);
      const Vec2 tan = lane_path.tangent(arc);
      const Vec2 normal{-tan.y, tan.x};
      const Vec2 q = p + normal * offset;
      ObservedState st;
      st.t = t;
      st.x = q.x;
      st.y = q.y;
      st.heading = std::atan2(tan.y, tan.x);
      bg.observed.push_back(st);
    }
    s.tracks.push_back(std::move(bg));
  }

  // random rigid placement in the world frame
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Vec2 shift{rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
  RigidTransform place = RigidTransform::about({0, 0}, angle);
  place.tx += shift.x;
  place.ty += shift.y;
  for (auto& lane : s.map.lanes) {
    for (auto& p : lane.points) p = place.apply(p);
  }
  for (auto& track : s.tracks) {
    for (auto& st : track.observed) {
      const Vec2 p = place.apply(st.pos());
      st.x = p.x;
      st.y = p.y;
      if (st.heading) st.heading = place.apply_heading(*st.heading);
    }
  }
  for (auto& p : s.future) p = place.apply(p);
  return s;
}

std::vector<Scenario> generate(const GenConfig& cfg) {
  validate_gen_config(cfg);
  std::vector<Scenario> out;
  out.reserve(static_cast<std::size_t>(cfg.n_scenarios));
  for (int i = 0; i < cfg.n_scenarios; ++i) {
    out.push_back(generate_one(cfg, static_cast<std::uint64_t>(i)));
  }
  return out;
}

}  // namespace densepath
