#pragma once

#include <deque>
#include <span>
#include <vector>

#include "densepath/params.hpp"
#include "densepath/tensor.hpp"

namespace densepath {

enum class OpKind {
  kConstant,
  kInput,  // differentiable leaf not bound to a ParamStore
  kParam,
  kMatmul,
  kTranspose,
  kAdd,
  kAddRowVector,
  kScale,
  kRelu,
  kSoftmax,
  kMaxPoolRows,
  kBroadcastRows,
  kConcatCols,
  kConcatRows,
  kSelectRow,
  kSumAll,
  kSmoothL1Loss,
  kBceLoss,
};

// Handle to a node in a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

struct Mlp2Vars {
  Var w1, b1, w2, b2;
};

// Reverse-mode computation record. Ops execute eagerly and append one node
// each, so the node list is topologically ordered by construction. A Tape and
// the tensors it owns are confined to one thread; parameters bound via
// param() are read once at creation and never mutated by the tape.
//
// Every forward op validates that its output is finite and throws
// std::runtime_error otherwise.
class Tape {
 public:
  Var constant(Tensor value);
  Var input(Tensor value);  // leaf whose gradient is wanted (tests, probes)
  Var param(const ParamStore& store, int entry_index);
  Var param(const ParamStore& store, const std::string& name);

  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var add(Var a, Var b);
  Var add_row_vector(Var a, Var b);  // a: m x n, b: 1 x n
  Var scale(Var a, double factor);
  Var relu(Var a);
  Var softmax(Var a, int axis);         // 2-D, axis 0 or 1, stabilized
  Var max_pool_rows(Var a);             // m x n -> 1 x n, ties to lowest row
  Var broadcast_rows(Var a, int rows);  // 1 x n -> rows x n
  Var concat_cols(std::span<const Var> parts);
  Var concat_rows(std::span<const Var> parts);
  Var select_row(Var a, int row);
  Var sum_all(Var a);  // -> 1 x 1
  Var smooth_l1_loss(Var pred, Tensor target);  // sum over elements -> 1 x 1
  Var bce_loss(Var prob, Tensor target);        // sum over elements -> 1 x 1

  // softmax(Q K^T / sqrt(d_k)) V
  Var attention(Var q, Var k, Var v);
  // Linear -> ReLU -> Linear
  Var mlp2(Var x, const Mlp2Vars& m);

  const Tensor& value(Var v) const;

  // Accumulates d loss / d param into `param_grads` (sized like the bound
  // ParamStore) for every kParam leaf. Node gradients stay queryable through
  // grad_of() until the next backward() call. Loss must be scalar.
  void backward(Var loss);
  void backward(Var loss, std::vector<double>& param_grads);

  // d loss / d node from the most recent backward(); zeros if unreached.
  std::vector<double> grad_of(Var v) const;

  int node_count() const { return static_cast<int>(nodes_.size()); }
  // Invariant check used by tests: every input id precedes its consumer.
  bool topologically_ordered() const;

 private:
  struct Node {
    OpKind op;
    std::vector<int> inputs;
    Tensor value;
    bool needs_grad = false;
    // op-specific payload
    double scalar_arg = 0.0;
    int int_arg = 0;
    std::vector<int> aux_ints;   // argmax rows for max-pool
    Tensor aux_tensor;           // loss targets
    std::size_t param_offset = 0;
    std::size_t param_size = 0;
  };

  Var push(Node node);
  const Node& node(Var v) const;
  void check_finite(const Tensor& t, const char* op) const;

  std::deque<Node> nodes_;
  std::vector<std::vector<double>> grads_;  // from the most recent backward
};

}  // namespace densepath
