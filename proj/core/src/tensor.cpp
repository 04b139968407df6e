#include "densepath/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace densepath {

std::int64_t shape_numel(const Shape& shape) {
  std::int64_t n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative dimension in shape " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
  if (shape_numel(shape) != static_cast<std::int64_t>(data.size())) {
    throw std::invalid_argument("tensor data length " + std::to_string(data.size()) +
                                " does not match shape " + shape_str(shape));
  }
}

Tensor Tensor::zeros(Shape s) {
  auto n = shape_numel(s);
  return Tensor(std::move(s), std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

Tensor Tensor::full(Shape s, double value) {
  auto n = shape_numel(s);
  return Tensor(std::move(s), std::vector<double>(static_cast<std::size_t>(n), value));
}

Tensor Tensor::matrix(int rows, int cols, std::vector<double> d) {
  return Tensor({rows, cols}, std::move(d));
}

Tensor Tensor::row(std::vector<double> d) {
  int n = static_cast<int>(d.size());
  return Tensor({1, n}, std::move(d));
}

Tensor Tensor::column(std::vector<double> d) {
  int n = static_cast<int>(d.size());
  return Tensor({n, 1}, std::move(d));
}

Tensor Tensor::scalar(double v) { return Tensor({1, 1}, {v}); }

int Tensor::rows() const {
  if (!is_matrix()) throw std::invalid_argument("tensor " + shape_str(shape) + " is not 2-D");
  return shape[0];
}

int Tensor::cols() const {
  if (!is_matrix()) throw std::invalid_argument("tensor " + shape_str(shape) + " is not 2-D");
  return shape[1];
}

double& Tensor::at(int r, int c) {
  return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(c)];
}

double Tensor::at(int r, int c) const {
  return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(c)];
}

double Tensor::scalar_value() const {
  if (numel() != 1) throw std::invalid_argument("tensor " + shape_str(shape) + " is not a scalar");
  return data[0];
}

void Tensor::ensure_grad() {
  if (!grad) grad.emplace(data.size(), 0.0);
}

void Tensor::zero_grad() {
  if (grad) std::fill(grad->begin(), grad->end(), 0.0);
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double smooth_l1(double a, double b) {
  double d = a - b;
  double ad = std::abs(d);
  return ad < 1.0 ? 0.5 * d * d : ad - 0.5;
}

double smooth_l1_derivative(double a, double b) {
  double d = a - b;
  if (d > 1.0) return 1.0;
  if (d < -1.0) return -1.0;
  return d;
}

double bce(double p, double y) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bce: probability " + std::to_string(p) + " outside [0, 1]");
  }
  if (y != 0.0 && y != 1.0) {
    throw std::invalid_argument("bce: label must be 0 or 1");
  }
  double q = std::min(std::max(p, kBceEps), 1.0 - kBceEps);
  return -y * std::log(q) - (1.0 - y) * std::log(1.0 - q);
}

double bce_derivative(double p, double y) {
  if (p <= kBceEps || p >= 1.0 - kBceEps) return 0.0;  // clamp region is flat
  return -y / p + (1.0 - y) / (1.0 - p);
}

}  // namespace densepath
