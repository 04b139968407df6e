#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace densepath {

using Shape = std::vector<int>;

std::int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major float64 tensor. Most of the model works with 2-D shapes
// (vectors are 1xN); the shape itself is unconstrained.
struct Tensor {
  Shape shape;
  std::vector<double> data;
  std::optional<std::vector<double>> grad;

  Tensor() = default;
  Tensor(Shape s, std::vector<double> d);

  static Tensor zeros(Shape s);
  static Tensor full(Shape s, double value);
  static Tensor matrix(int rows, int cols, std::vector<double> d);
  static Tensor row(std::vector<double> d);     // 1xN
  static Tensor column(std::vector<double> d);  // Nx1
  static Tensor scalar(double v);               // 1x1

  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
  bool is_matrix() const { return shape.size() == 2; }
  int rows() const;
  int cols() const;
  double& at(int r, int c);
  double at(int r, int c) const;
  double scalar_value() const;  // requires numel() == 1

  void ensure_grad();
  void zero_grad();
  bool all_finite() const;
};

// 0.5*d^2 for |d| < 1, |d| - 0.5 otherwise, d = a - b.
double smooth_l1(double a, double b);
// d smooth_l1(a, b) / d a
double smooth_l1_derivative(double a, double b);

// Binary cross-entropy with inputs clamped to [kBceEps, 1 - kBceEps].
// p must lie in [0, 1] and y in {0, 1}.
inline constexpr double kBceEps = 1e-12;
double bce(double p, double y);
// d bce(p, y) / d p; zero where the clamp binds.
double bce_derivative(double p, double y);

}  // namespace densepath
