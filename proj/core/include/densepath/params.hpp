#pragma once

#include <span>
#include <string>
#include <vector>

#include "densepath/rng.hpp"
#include "densepath/tensor.hpp"

namespace densepath {

// All trainable weights live in one flat float64 buffer; each named entry is
// a shaped view into it. Gradients are accumulated into an equally sized
// external buffer so that batch contributions can be summed in a fixed order.
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Shape shape;
    std::size_t offset = 0;
    std::size_t size = 0;
  };

  // Registers a zero-initialized parameter, returns its index.
  int add(const std::string& name, Shape shape);
  // Registers a parameter initialized uniformly in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  int add_uniform(const std::string& name, Shape shape, int fan_in, Rng& rng);

  int index_of(const std::string& name) const;  // -1 when absent
  const Entry& entry(int index) const { return entries_.at(static_cast<std::size_t>(index)); }
  int count() const { return static_cast<int>(entries_.size()); }
  std::size_t size() const { return values_.size(); }

  std::span<double> values_of(int index);
  std::span<const double> values_of(int index) const;
  Tensor tensor_of(int index) const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::vector<double> values_;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::int64_t step_count = 0;
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment

  static AdamState init(std::size_t n, AdamConfig cfg = {});
};

// Bias-corrected Adam update. `lr_override` < 0 means use state.cfg.lr;
// the schedule in the trainer passes the decayed rate explicitly.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr_override = -1.0);

}  // namespace densepath
