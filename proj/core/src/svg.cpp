#include "densepath/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace densepath {

namespace {

constexpr double kScale = 6.0;  // px per meter
constexpr double kMargin = 5.0;

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(Vec2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  bool empty() const { return !(min_x <= max_x); }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

class Canvas {
 public:
  Canvas(const Bounds& b)
      : min_x_(b.min_x - kMargin),
        max_y_(b.max_y + kMargin),
        width_((b.max_x - b.min_x + 2 * kMargin) * kScale),
        height_((b.max_y - b.min_y + 2 * kMargin) * kScale) {}

  std::string px(Vec2 p) const { return num((p.x - min_x_) * kScale); }
  std::string py(Vec2 p) const { return num((max_y_ - p.y) * kScale); }  // y grows downward

  std::string header() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\""
       << num(height_) << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
  }

  void polyline(std::ostringstream& os, const std::vector<Vec2>& pts, const char* color,
                double width_m, const char* extra = "") const {
    if (pts.size() < 2) return;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
       << num(width_m * kScale) << "\"" << extra << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os << ' ';
      os << px(pts[i]) << ',' << py(pts[i]);
    }
    os << "\"/>\n";
  }

  void circle(std::ostringstream& os, Vec2 p, double r_m, const char* color,
              const std::string& opacity = "") const {
    os << "<circle cx=\"" << px(p) << "\" cy=\"" << py(p) << "\" r=\"" << num(r_m * kScale)
       << "\" fill=\"" << color << "\"";
    if (!opacity.empty()) os << " fill-opacity=\"" << opacity << "\"";
    os << "/>\n";
  }

 private:
  double min_x_;
  double max_y_;
  double width_;
  double height_;
};

}  // namespace

std::string render_scene_svg(const Scenario& scenario, const GoalFieldDump* goals,
                             const PredictionSet* preds) {
  Bounds b;
  for (const auto& lane : scenario.map.lanes) {
    for (const auto& p : lane.points) b.add(p);
  }
  for (const auto& p : scenario.future) b.add(p);
  if (goals) {
    for (const auto& p : goals->coords) b.add(p);
  }
  if (preds) {
    for (const auto& pr : preds->predictions) {
      for (const auto& p : pr.trajectory) b.add(p);
    }
  }
  for (const auto& t : scenario.tracks) {
    for (const auto& st : t.observed) b.add(st.pos());
  }
  if (b.empty()) throw std::invalid_argument("render_scene_svg: nothing to draw");

  Canvas canvas(b);
  std::ostringstream os;
  os << canvas.header();

  // lanes
  for (const auto& lane : scenario.map.lanes) {
    canvas.polyline(os, lane.points, lane.parking ? "#d9d9d9" : "#bdbdbd", lane.width,
                    " stroke-linecap=\"round\" stroke-linejoin=\"round\"");
  }
  for (const auto& lane : scenario.map.lanes) {
    canvas.polyline(os, lane.points, "#8c8c8c", 0.12);
  }

  // observed history (thin dark gray)
  for (const auto& t : scenario.tracks) {
    std::vector<Vec2> pts;
    pts.reserve(t.observed.size());
    for (const auto& st : t.observed) pts.push_back(st.pos());
    canvas.polyline(os, pts, t.id == scenario.target_id ? "#404040" : "#9e9e9e", 0.25);
  }

  // dense goals, opacity monotone in phi
  if (goals && !goals->coords.empty()) {
    double max_phi = 0.0;
    for (double p : goals->phi) max_phi = std::max(max_phi, p);
    for (std::size_t i = 0; i < goals->coords.size(); ++i) {
      const double rel = max_phi > 0.0 ? goals->phi[i] / max_phi : 0.0;
      char op[32];
      std::snprintf(op, sizeof(op), "%.4f", rel);
      canvas.circle(os, goals->coords[i], 0.30, "#d62728", op);
    }
  }

  // predictions and their goals
  if (preds) {
    for (const auto& pr : preds->predictions) {
      canvas.polyline(os, pr.trajectory, "#ff7f0e", 0.30);
    }
    for (const auto& pr : preds->predictions) {
      for (const auto& g : pr.goals) canvas.circle(os, g, 0.55, "#ff7f0e");
    }
  }

  // ground truth
  canvas.polyline(os, scenario.future, "#2ca02c", 0.30);
  if (!scenario.future.empty()) canvas.circle(os, scenario.future.back(), 0.55, "#2ca02c");

  os << "</svg>\n";
  return os.str();
}

}  // namespace densepath
