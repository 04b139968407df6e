#include "densepath/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace densepath {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return dist(p, a);
  double t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, {a.x + t * ab.x, a.y + t * ab.y});
}

double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts) {
  if (pts.empty()) return std::numeric_limits<double>::infinity();
  if (pts.size() == 1) return dist(p, pts[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    best = std::min(best, point_segment_distance(p, pts[i], pts[i + 1]));
  }
  return best;
}

RigidTransform RigidTransform::about(Vec2 pivot, double angle) {
  RigidTransform t;
  t.c = std::cos(angle);
  t.s = std::sin(angle);
  t.tx = -(t.c * pivot.x - t.s * pivot.y);
  t.ty = -(t.s * pivot.x + t.c * pivot.y);
  return t;
}

double RigidTransform::apply_heading(double h) const { return wrap_angle(h + angle()); }

RigidTransform RigidTransform::inverse() const {
  RigidTransform t;
  t.c = c;
  t.s = -s;
  t.tx = -(c * tx + s * ty);
  t.ty = -(-s * tx + c * ty);
  return t;
}

AgentType agent_type_from_string(const std::string& s) {
  if (s == "vehicle") return AgentType::kVehicle;
  if (s == "pedestrian") return AgentType::kPedestrian;
  if (s == "cyclist") return AgentType::kCyclist;
  throw std::invalid_argument("unknown agent type: " + s);
}

std::string to_string(AgentType t) {
  switch (t) {
    case AgentType::kVehicle: return "vehicle";
    case AgentType::kPedestrian: return "pedestrian";
    case AgentType::kCyclist: return "cyclist";
  }
  return "vehicle";
}

const AgentTrack* Scenario::find_track(std::int64_t tid) const {
  for (const auto& t : tracks) {
    if (t.id == tid) return &t;
  }
  return nullptr;
}

const AgentTrack& Scenario::target() const {
  const AgentTrack* t = find_track(target_id);
  if (t == nullptr) {
    throw std::invalid_argument("scenario " + id + ": target track " + std::to_string(target_id) +
                                " not found");
  }
  return *t;
}

void validate_scenario(const Scenario& s) {
  const AgentTrack& tgt = s.target();
  if (tgt.observed.size() < 2) {
    throw std::invalid_argument("scenario " + s.id + ": target needs >= 2 observations");
  }
  if (!s.future.empty() &&
      static_cast<int>(s.future.size()) != s.horizon_steps()) {
    throw std::invalid_argument("scenario " + s.id + ": future has " +
                                std::to_string(s.future.size()) + " points, expected " +
                                std::to_string(s.horizon_steps()));
  }
  auto check_finite = [&](double v, const char* what) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("scenario " + s.id + ": non-finite " + what);
    }
  };
  for (const auto& t : s.tracks) {
    for (std::size_t i = 0; i < t.observed.size(); ++i) {
      check_finite(t.observed[i].x, "track coordinate");
      check_finite(t.observed[i].y, "track coordinate");
      if (i > 0 && t.observed[i].t <= t.observed[i - 1].t) {
        throw std::invalid_argument("scenario " + s.id + ": track " + std::to_string(t.id) +
                                    " timestamps not strictly increasing");
      }
    }
  }
  for (const auto& l : s.map.lanes) {
    if (l.points.size() < 2) {
      throw std::invalid_argument("scenario " + s.id + ": lane " + std::to_string(l.id) +
                                  " has fewer than 2 points");
    }
    if (l.width <= 0.0) {
      throw std::invalid_argument("scenario " + s.id + ": lane " + std::to_string(l.id) +
                                  " has non-positive width");
    }
    for (const auto& p : l.points) {
      check_finite(p.x, "lane coordinate");
      check_finite(p.y, "lane coordinate");
    }
  }
  for (const auto& p : s.future) {
    check_finite(p.x, "future coordinate");
    check_finite(p.y, "future coordinate");
  }
}

double track_heading(const AgentTrack& t) {
  if (t.observed.size() >= 2) {
    // last displacement over the trailing observations, skipping zero-length steps
    for (std::size_t i = t.observed.size() - 1; i > 0; --i) {
      const Vec2 d = t.observed[i].pos() - t.observed[i - 1].pos();
      if (d.norm() > 1e-9) return std::atan2(d.y, d.x);
    }
  }
  if (!t.observed.empty() && t.observed.back().heading) {
    return *t.observed.back().heading;
  }
  throw std::invalid_argument("track " + std::to_string(t.id) +
                              ": degenerate heading (no displacement, no heading field)");
}

NormalizedScenario normalize_scene(const Scenario& s) {
  const AgentTrack& tgt = s.target();
  if (tgt.observed.size() < 2) {
    throw std::invalid_argument("normalize_scene: target needs >= 2 observations");
  }
  const double heading = track_heading(tgt);
  const Vec2 origin = tgt.observed.back().pos();
  // heading maps to +y
  const RigidTransform tf = RigidTransform::about(origin, std::numbers::pi / 2.0 - heading);

  NormalizedScenario out;
  out.to_local = tf;
  out.scene = s;
  for (auto& lane : out.scene.map.lanes) {
    for (auto& p : lane.points) p = tf.apply(p);
  }
  for (auto& track : out.scene.tracks) {
    for (auto& st : track.observed) {
      const Vec2 p = tf.apply(st.pos());
      st.x = p.x;
      st.y = p.y;
      if (st.heading) st.heading = tf.apply_heading(*st.heading);
    }
  }
  for (auto& p : out.scene.future) p = tf.apply(p);
  return out;
}

MapData crop_submap(const MapData& m, Vec2 center, double radius) {
  MapData out;
  for (const auto& lane : m.lanes) {
    Lane kept = lane;
    kept.points.clear();
    for (const auto& p : lane.points) {
      if (dist(p, center) <= radius) kept.points.push_back(p);
    }
    if (!kept.points.empty()) out.lanes.push_back(std::move(kept));
  }
  return out;
}

namespace {

std::array<double, kVectorAttrs> lane_attrs(const Lane& lane) {
  std::array<double, kVectorAttrs> a{};
  a[0] = lane.width;
  a[1] = lane.parking ? 1.0 : 0.0;
  int turn = 0;  // none
  if (lane.turn == "left") turn = 1;
  else if (lane.turn == "right") turn = 2;
  else if (lane.turn == "uturn") turn = 3;
  a[2 + turn] = 1.0;
  return a;
}

}  // namespace

std::vector<VectorSeq> segment_lanes(const std::vector<Lane>& lanes) {
  std::vector<VectorSeq> out;
  for (const auto& lane : lanes) {
    const int n = static_cast<int>(lane.points.size());
    if (n < 2) continue;
    // chunk boundaries: [start, end) runs of kLaneSegmentPoints
    std::vector<std::pair<int, int>> chunks;
    for (int start = 0; start < n; start += kLaneSegmentPoints) {
      chunks.emplace_back(start, std::min(start + kLaneSegmentPoints, n));
    }
    // a trailing 1-point remainder borrows a point from the previous chunk
    if (chunks.size() >= 2 && chunks.back().second - chunks.back().first < 2) {
      chunks[chunks.size() - 2].second -= 1;
      chunks.back().first -= 1;
    }
    const auto attrs = lane_attrs(lane);
    for (const auto& [start, end] : chunks) {
      VectorSeq seq;
      seq.owner = VectorSeq::Owner::kLane;
      seq.owner_id = lane.id;
      for (int i = start; i + 1 < end; ++i) {
        SceneVector v;
        v.start = lane.points[static_cast<std::size_t>(i)];
        v.end = lane.points[static_cast<std::size_t>(i + 1)];
        v.is_agent = false;
        v.attr = attrs;
        seq.vectors.push_back(v);
      }
      out.push_back(std::move(seq));
    }
  }
  return out;
}

std::vector<VectorSeq> vectorize_agents(const std::vector<AgentTrack>& tracks,
                                        std::int64_t target_id, double history_s,
                                        std::vector<std::int64_t>* skipped) {
  const AgentTrack* tgt = nullptr;
  for (const auto& t : tracks) {
    if (t.id == target_id) tgt = &t;
  }
  if (tgt == nullptr) throw std::invalid_argument("vectorize_agents: target track missing");
  const double t_end = tgt->observed.empty() ? 0.0 : tgt->observed.back().t;
  const double t_min = history_s < 0.0 ? -std::numeric_limits<double>::infinity()
                                       : t_end - history_s - 1e-9;

  std::vector<VectorSeq> out;
  for (const auto& track : tracks) {
    std::vector<const ObservedState*> obs;
    for (const auto& st : track.observed) {
      if (st.t >= t_min) obs.push_back(&st);
    }
    if (obs.size() < 2) {
      if (track.id == target_id) {
        throw std::invalid_argument("vectorize_agents: target track has < 2 observations in window");
      }
      if (skipped) skipped->push_back(track.id);
      continue;
    }
    VectorSeq seq;
    seq.owner = VectorSeq::Owner::kAgent;
    seq.owner_id = track.id;
    std::array<double, kVectorAttrs> attrs{};
    attrs[static_cast<std::size_t>(track.type)] = 1.0;
    attrs[4] = track.length;
    attrs[5] = track.width;
    for (std::size_t i = 0; i + 1 < obs.size(); ++i) {
      SceneVector v;
      v.start = obs[i]->pos();
      v.end = obs[i + 1]->pos();
      v.t_start = obs[i]->t;
      v.t_end = obs[i + 1]->t;
      v.is_agent = true;
      v.attr = attrs;
      const double dt = v.t_end - v.t_start;
      v.attr[3] = dt > 0.0 ? dist(v.start, v.end) / dt : 0.0;  // instantaneous speed
      seq.vectors.push_back(v);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace densepath
