#pragma once

#include <cmath>
#include <vector>

namespace densepath {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Distance from p to the polyline through pts (single point allowed).
double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts);

// Rigid 2-D transform p' = R p + t, heading' = heading + angle.
struct RigidTransform {
  double c = 1.0;  // cos(angle)
  double s = 0.0;  // sin(angle)
  double tx = 0.0;
  double ty = 0.0;

  static RigidTransform identity() { return {}; }
  // Rotation by `angle` about the origin composed after translation by -pivot.
  static RigidTransform about(Vec2 pivot, double angle);

  Vec2 apply(Vec2 p) const { return {c * p.x - s * p.y + tx, s * p.x + c * p.y + ty}; }
  double apply_heading(double h) const;
  double angle() const { return std::atan2(s, c); }
  RigidTransform inverse() const;
};

// Wraps to (-pi, pi].
double wrap_angle(double a);

}  // namespace densepath
