#include "densepath/params.hpp"

#include <cmath>
#include <stdexcept>

namespace densepath {

int ParamStore::add(const std::string& name, Shape shape) {
  if (index_of(name) >= 0) throw std::invalid_argument("duplicate parameter name: " + name);
  Entry e;
  e.name = name;
  e.shape = std::move(shape);
  e.offset = values_.size();
  e.size = static_cast<std::size_t>(shape_numel(e.shape));
  values_.resize(e.offset + e.size, 0.0);
  entries_.push_back(std::move(e));
  return static_cast<int>(entries_.size()) - 1;
}

int ParamStore::add_uniform(const std::string& name, Shape shape, int fan_in, Rng& rng) {
  if (fan_in <= 0) throw std::invalid_argument("add_uniform: fan_in must be positive");
  int idx = add(name, std::move(shape));
  double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : values_of(idx)) v = rng.uniform(-bound, bound);
  return idx;
}

int ParamStore::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::span<double> ParamStore::values_of(int index) {
  const Entry& e = entry(index);
  return {values_.data() + e.offset, e.size};
}

std::span<const double> ParamStore::values_of(int index) const {
  const Entry& e = entry(index);
  return {values_.data() + e.offset, e.size};
}

Tensor ParamStore::tensor_of(int index) const {
  const Entry& e = entry(index);
  return Tensor(e.shape, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(e.offset),
                                             values_.begin() + static_cast<std::ptrdiff_t>(e.offset + e.size)));
}

AdamState AdamState::init(std::size_t n, AdamConfig cfg) {
  AdamState s;
  s.cfg = cfg;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  return s;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr_override) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw std::invalid_argument("adam_step: parameter/gradient/state sizes disagree");
  }
  const double lr = lr_override >= 0.0 ? lr_override : state.cfg.lr;
  const double b1 = state.cfg.beta1;
  const double b2 = state.cfg.beta2;
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
  }
}

}  // namespace densepath
