#include "densepath/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace densepath {

namespace {

void check_2d(const Tensor& t, const char* op) {
  if (!t.is_matrix()) {
    throw std::invalid_argument(std::string(op) + ": expected 2-D tensor, got " + shape_str(t.shape));
  }
}

}  // namespace

Var Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= static_cast<int>(nodes_.size())) {
    throw std::invalid_argument("invalid tape handle");
  }
  return nodes_[static_cast<std::size_t>(v.id)];
}

const Tensor& Tape::value(Var v) const { return node(v).value; }

void Tape::check_finite(const Tensor& t, const char* op) const {
  if (!t.all_finite()) {
    throw std::runtime_error(std::string(op) + " produced non-finite values");
  }
}

Var Tape::constant(Tensor value) {
  Node n;
  n.op = OpKind::kConstant;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::input(Tensor value) {
  Node n;
  n.op = OpKind::kInput;
  n.value = std::move(value);
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::param(const ParamStore& store, int entry_index) {
  Node n;
  n.op = OpKind::kParam;
  n.value = store.tensor_of(entry_index);
  n.needs_grad = true;
  n.param_offset = store.entry(entry_index).offset;
  n.param_size = store.entry(entry_index).size;
  return push(std::move(n));
}

Var Tape::param(const ParamStore& store, const std::string& name) {
  int idx = store.index_of(name);
  if (idx < 0) throw std::invalid_argument("unknown parameter: " + name);
  return param(store, idx);
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  check_2d(A, "matmul");
  check_2d(B, "matmul");
  if (A.cols() != B.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree, " + shape_str(A.shape) + " * " +
                                shape_str(B.shape));
  }
  const int m = A.rows(), k = A.cols(), n = B.cols();
  Tensor C = Tensor::zeros({m, n});
  const double* ad = A.data.data();
  const double* bd = B.data.data();
  double* cd = C.data.data();
  for (int i = 0; i < m; ++i) {
    for (int p = 0; p < k; ++p) {
      const double av = ad[i * k + p];
      const double* brow = bd + p * n;
      double* crow = cd + i * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  check_finite(C, "matmul");
  Node nd;
  nd.op = OpKind::kMatmul;
  nd.inputs = {a.id, b.id};
  nd.value = std::move(C);
  nd.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(nd));
}

Var Tape::transpose(Var a) {
  const Tensor& A = value(a);
  check_2d(A, "transpose");
  const int m = A.rows(), n = A.cols();
  Tensor T = Tensor::zeros({n, m});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) T.data[static_cast<std::size_t>(j) * m + i] = A.data[static_cast<std::size_t>(i) * n + j];
  Node nd;
  nd.op = OpKind::kTranspose;
  nd.inputs = {a.id};
  nd.value = std::move(T);
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::add(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.shape != B.shape) {
    throw std::invalid_argument("add: shapes disagree, " + shape_str(A.shape) + " vs " + shape_str(B.shape));
  }
  Tensor C = A;
  for (std::size_t i = 0; i < C.data.size(); ++i) C.data[i] += B.data[i];
  check_finite(C, "add");
  Node nd;
  nd.op = OpKind::kAdd;
  nd.inputs = {a.id, b.id};
  nd.value = std::move(C);
  nd.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(nd));
}

Var Tape::add_row_vector(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  check_2d(A, "add_row_vector");
  check_2d(B, "add_row_vector");
  if (B.rows() != 1 || B.cols() != A.cols()) {
    throw std::invalid_argument("add_row_vector: bias shape " + shape_str(B.shape) +
                                " does not match " + shape_str(A.shape));
  }
  const int m = A.rows(), n = A.cols();
  Tensor C = A;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) C.data[static_cast<std::size_t>(i) * n + j] += B.data[static_cast<std::size_t>(j)];
  check_finite(C, "add_row_vector");
  Node nd;
  nd.op = OpKind::kAddRowVector;
  nd.inputs = {a.id, b.id};
  nd.value = std::move(C);
  nd.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(nd));
}

Var Tape::scale(Var a, double factor) {
  Tensor C = value(a);
  for (double& v : C.data) v *= factor;
  check_finite(C, "scale");
  Node nd;
  nd.op = OpKind::kScale;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.scalar_arg = factor;
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::relu(Var a) {
  Tensor C = value(a);
  for (double& v : C.data) v = v > 0.0 ? v : 0.0;
  Node nd;
  nd.op = OpKind::kRelu;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::softmax(Var a, int axis) {
  const Tensor& A = value(a);
  check_2d(A, "softmax");
  if (axis != 0 && axis != 1) throw std::invalid_argument("softmax: axis must be 0 or 1");
  if (A.shape[static_cast<std::size_t>(axis)] == 0) throw std::invalid_argument("softmax: empty axis");
  const int m = A.rows(), n = A.cols();
  Tensor C = Tensor::zeros({m, n});
  if (axis == 1) {
    for (int i = 0; i < m; ++i) {
      const double* row = A.data.data() + static_cast<std::size_t>(i) * n;
      double* out = C.data.data() + static_cast<std::size_t>(i) * n;
      double mx = row[0];
      for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        out[j] = std::exp(row[j] - mx);
        sum += out[j];
      }
      for (int j = 0; j < n; ++j) out[j] /= sum;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      double mx = A.at(0, j);
      for (int i = 1; i < m; ++i) mx = std::max(mx, A.at(i, j));
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        C.at(i, j) = std::exp(A.at(i, j) - mx);
        sum += C.at(i, j);
      }
      for (int i = 0; i < m; ++i) C.at(i, j) /= sum;
    }
  }
  check_finite(C, "softmax");
  Node nd;
  nd.op = OpKind::kSoftmax;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.int_arg = axis;
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::max_pool_rows(Var a) {
  const Tensor& A = value(a);
  check_2d(A, "max_pool_rows");
  const int m = A.rows(), n = A.cols();
  if (m == 0) throw std::invalid_argument("max_pool_rows: no rows");
  Tensor C = Tensor::zeros({1, n});
  std::vector<int> argmax(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    double best = A.at(0, j);
    int bi = 0;
    for (int i = 1; i < m; ++i) {
      if (A.at(i, j) > best) {
        best = A.at(i, j);
        bi = i;
      }
    }
    C.data[static_cast<std::size_t>(j)] = best;
    argmax[static_cast<std::size_t>(j)] = bi;
  }
  Node nd;
  nd.op = OpKind::kMaxPoolRows;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.aux_ints = std::move(argmax);
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::broadcast_rows(Var a, int rows) {
  const Tensor& A = value(a);
  check_2d(A, "broadcast_rows");
  if (A.rows() != 1) throw std::invalid_argument("broadcast_rows: expected 1 x n input");
  if (rows < 1) throw std::invalid_argument("broadcast_rows: rows must be positive");
  const int n = A.cols();
  Tensor C = Tensor::zeros({rows, n});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < n; ++j) C.at(i, j) = A.data[static_cast<std::size_t>(j)];
  Node nd;
  nd.op = OpKind::kBroadcastRows;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const int m = value(parts[0]).rows();
  int total = 0;
  for (Var p : parts) {
    check_2d(value(p), "concat_cols");
    if (value(p).rows() != m) throw std::invalid_argument("concat_cols: row counts disagree");
    total += value(p).cols();
  }
  Tensor C = Tensor::zeros({m, total});
  int col = 0;
  for (Var p : parts) {
    const Tensor& P = value(p);
    const int n = P.cols();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) C.at(i, col + j) = P.at(i, j);
    col += n;
  }
  Node nd;
  nd.op = OpKind::kConcatCols;
  nd.value = std::move(C);
  for (Var p : parts) {
    nd.inputs.push_back(p.id);
    nd.needs_grad = nd.needs_grad || node(p).needs_grad;
  }
  return push(std::move(nd));
}

Var Tape::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  const int n = value(parts[0]).cols();
  int total = 0;
  for (Var p : parts) {
    check_2d(value(p), "concat_rows");
    if (value(p).cols() != n) throw std::invalid_argument("concat_rows: column counts disagree");
    total += value(p).rows();
  }
  Tensor C = Tensor::zeros({total, n});
  int row = 0;
  for (Var p : parts) {
    const Tensor& P = value(p);
    for (int i = 0; i < P.rows(); ++i)
      for (int j = 0; j < n; ++j) C.at(row + i, j) = P.at(i, j);
    row += P.rows();
  }
  Node nd;
  nd.op = OpKind::kConcatRows;
  nd.value = std::move(C);
  for (Var p : parts) {
    nd.inputs.push_back(p.id);
    nd.needs_grad = nd.needs_grad || node(p).needs_grad;
  }
  return push(std::move(nd));
}

Var Tape::select_row(Var a, int row) {
  const Tensor& A = value(a);
  check_2d(A, "select_row");
  if (row < 0 || row >= A.rows()) throw std::invalid_argument("select_row: row out of range");
  const int n = A.cols();
  Tensor C = Tensor::zeros({1, n});
  for (int j = 0; j < n; ++j) C.data[static_cast<std::size_t>(j)] = A.at(row, j);
  Node nd;
  nd.op = OpKind::kSelectRow;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.int_arg = row;
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::sum_all(Var a) {
  const Tensor& A = value(a);
  double s = 0.0;
  for (double v : A.data) s += v;
  Tensor C = Tensor::scalar(s);
  check_finite(C, "sum_all");
  Node nd;
  nd.op = OpKind::kSumAll;
  nd.inputs = {a.id};
  nd.value = std::move(C);
  nd.needs_grad = node(a).needs_grad;
  return push(std::move(nd));
}

Var Tape::smooth_l1_loss(Var pred, Tensor target) {
  const Tensor& P = value(pred);
  if (P.shape != target.shape) {
    throw std::invalid_argument("smooth_l1_loss: prediction " + shape_str(P.shape) +
                                " vs target " + shape_str(target.shape));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < P.data.size(); ++i) s += smooth_l1(P.data[i], target.data[i]);
  Tensor C = Tensor::scalar(s);
  check_finite(C, "smooth_l1_loss");
  Node nd;
  nd.op = OpKind::kSmoothL1Loss;
  nd.inputs = {pred.id};
  nd.value = std::move(C);
  nd.aux_tensor = std::move(target);
  nd.needs_grad = node(pred).needs_grad;
  return push(std::move(nd));
}

Var Tape::bce_loss(Var prob, Tensor target) {
  const Tensor& P = value(prob);
  if (P.shape != target.shape) {
    throw std::invalid_argument("bce_loss: prediction " + shape_str(P.shape) + " vs target " +
                                shape_str(target.shape));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < P.data.size(); ++i) s += bce(P.data[i], target.data[i]);
  Tensor C = Tensor::scalar(s);
  check_finite(C, "bce_loss");
  Node nd;
  nd.op = OpKind::kBceLoss;
  nd.inputs = {prob.id};
  nd.value = std::move(C);
  nd.aux_tensor = std::move(target);
  nd.needs_grad = node(prob).needs_grad;
  return push(std::move(nd));
}

Var Tape::attention(Var q, Var k, Var v) {
  const Tensor& Q = value(q);
  const Tensor& K = value(k);
  const Tensor& V = value(v);
  check_2d(Q, "attention");
  check_2d(K, "attention");
  check_2d(V, "attention");
  if (K.rows() == 0) throw std::invalid_argument("attention: no keys");
  if (Q.cols() != K.cols()) {
    throw std::invalid_argument("attention: query dim " + std::to_string(Q.cols()) +
                                " != key dim " + std::to_string(K.cols()));
  }
  if (V.rows() != K.rows()) throw std::invalid_argument("attention: key/value counts disagree");
  Var scores = scale(matmul(q, transpose(k)), 1.0 / std::sqrt(static_cast<double>(Q.cols())));
  Var weights = softmax(scores, 1);
  return matmul(weights, v);
}

Var Tape::mlp2(Var x, const Mlp2Vars& m) {
  Var h = relu(add_row_vector(matmul(x, m.w1), m.b1));
  return add_row_vector(matmul(h, m.w2), m.b2);
}

bool Tape::topologically_ordered() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (int in : nodes_[i].inputs) {
      if (in < 0 || in >= static_cast<int>(i)) return false;
    }
  }
  return true;
}

void Tape::backward(Var loss) {
  std::vector<double> unused;
  backward(loss, unused);
}

void Tape::backward(Var loss, std::vector<double>& param_grads) {
  const Node& ln = node(loss);
  if (ln.value.numel() != 1) {
    throw std::invalid_argument("backward: loss must be scalar, got " + shape_str(ln.value.shape));
  }
  grads_.assign(nodes_.size(), {});
  auto touch = [&](int id) -> std::vector<double>& {
    auto& g = grads_[static_cast<std::size_t>(id)];
    if (g.empty()) g.assign(nodes_[static_cast<std::size_t>(id)].value.data.size(), 0.0);
    return g;
  };
  touch(loss.id)[0] = 1.0;

  for (int id = loss.id; id >= 0; --id) {
    Node& nd = nodes_[static_cast<std::size_t>(id)];
    auto& g = grads_[static_cast<std::size_t>(id)];
    if (g.empty() || !nd.needs_grad) continue;
    auto in_value = [&](int slot) -> const Tensor& {
      return nodes_[static_cast<std::size_t>(nd.inputs[static_cast<std::size_t>(slot)])].value;
    };
    auto in_needs = [&](int slot) {
      return nodes_[static_cast<std::size_t>(nd.inputs[static_cast<std::size_t>(slot)])].needs_grad;
    };
    auto in_grad = [&](int slot) -> std::vector<double>& {
      return touch(nd.inputs[static_cast<std::size_t>(slot)]);
    };

    switch (nd.op) {
      case OpKind::kConstant:
      case OpKind::kInput:
        break;
      case OpKind::kParam:
        if (!param_grads.empty()) {
          if (param_grads.size() < nd.param_offset + nd.param_size) {
            throw std::invalid_argument("backward: gradient sink smaller than parameter store");
          }
          for (std::size_t i = 0; i < nd.param_size; ++i) param_grads[nd.param_offset + i] += g[i];
        }
        break;
      case OpKind::kMatmul: {
        const Tensor& A = in_value(0);
        const Tensor& B = in_value(1);
        const int m = A.rows(), k = A.cols(), n = B.cols();
        if (in_needs(0)) {
          auto& da = in_grad(0);
          // dA = dC * B^T
          for (int i = 0; i < m; ++i) {
            const double* grow = g.data() + static_cast<std::size_t>(i) * n;
            for (int p = 0; p < k; ++p) {
              const double* brow = B.data.data() + static_cast<std::size_t>(p) * n;
              double acc = 0.0;
              for (int j = 0; j < n; ++j) acc += grow[j] * brow[j];
              da[static_cast<std::size_t>(i) * k + p] += acc;
            }
          }
        }
        if (in_needs(1)) {
          auto& db = in_grad(1);
          // dB = A^T * dC
          for (int i = 0; i < m; ++i) {
            const double* grow = g.data() + static_cast<std::size_t>(i) * n;
            for (int p = 0; p < k; ++p) {
              const double av = A.data[static_cast<std::size_t>(i) * k + p];
              double* drow = db.data() + static_cast<std::size_t>(p) * n;
              for (int j = 0; j < n; ++j) drow[j] += av * grow[j];
            }
          }
        }
        break;
      }
      case OpKind::kTranspose: {
        if (in_needs(0)) {
          const Tensor& A = in_value(0);
          auto& da = in_grad(0);
          const int m = A.rows(), n = A.cols();
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
              da[static_cast<std::size_t>(i) * n + j] += g[static_cast<std::size_t>(j) * m + i];
        }
        break;
      }
      case OpKind::kAdd:
        for (int slot = 0; slot < 2; ++slot) {
          if (!in_needs(slot)) continue;
          auto& d = in_grad(slot);
          for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
        }
        break;
      case OpKind::kAddRowVector: {
        const int n = nd.value.cols();
        const int m = nd.value.rows();
        if (in_needs(0)) {
          auto& da = in_grad(0);
          for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (in_needs(1)) {
          auto& db = in_grad(1);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) db[static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(i) * n + j];
        }
        break;
      }
      case OpKind::kScale:
        if (in_needs(0)) {
          auto& da = in_grad(0);
          for (std::size_t i = 0; i < g.size(); ++i) da[i] += nd.scalar_arg * g[i];
        }
        break;
      case OpKind::kRelu:
        if (in_needs(0)) {
          const Tensor& A = in_value(0);
          auto& da = in_grad(0);
          for (std::size_t i = 0; i < g.size(); ++i)
            if (A.data[i] > 0.0) da[i] += g[i];
        }
        break;
      case OpKind::kSoftmax: {
        if (!in_needs(0)) break;
        auto& da = in_grad(0);
        const Tensor& Y = nd.value;
        const int m = Y.rows(), n = Y.cols();
        if (nd.int_arg == 1) {
          for (int i = 0; i < m; ++i) {
            const double* y = Y.data.data() + static_cast<std::size_t>(i) * n;
            const double* gy = g.data() + static_cast<std::size_t>(i) * n;
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += gy[j] * y[j];
            double* d = da.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) d[j] += y[j] * (gy[j] - dot);
          }
        } else {
          for (int j = 0; j < n; ++j) {
            double dot = 0.0;
            for (int i = 0; i < m; ++i)
              dot += g[static_cast<std::size_t>(i) * n + j] * Y.data[static_cast<std::size_t>(i) * n + j];
            for (int i = 0; i < m; ++i) {
              const std::size_t idx = static_cast<std::size_t>(i) * n + j;
              da[idx] += Y.data[idx] * (g[idx] - dot);
            }
          }
        }
        break;
      }
      case OpKind::kMaxPoolRows:
        if (in_needs(0)) {
          auto& da = in_grad(0);
          const int n = nd.value.cols();
          const int cols = in_value(0).cols();
          for (int j = 0; j < n; ++j)
            da[static_cast<std::size_t>(nd.aux_ints[static_cast<std::size_t>(j)]) * cols + j] += g[static_cast<std::size_t>(j)];
        }
        break;
      case OpKind::kBroadcastRows:
        if (in_needs(0)) {
          auto& da = in_grad(0);
          const int m = nd.value.rows(), n = nd.value.cols();
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) da[static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(i) * n + j];
        }
        break;
      case OpKind::kConcatCols: {
        const int m = nd.value.rows(), total = nd.value.cols();
        int col = 0;
        for (std::size_t slot = 0; slot < nd.inputs.size(); ++slot) {
          const Tensor& P = in_value(static_cast<int>(slot));
          const int n = P.cols();
          if (in_needs(static_cast<int>(slot))) {
            auto& d = in_grad(static_cast<int>(slot));
            for (int i = 0; i < m; ++i)
              for (int j = 0; j < n; ++j)
                d[static_cast<std::size_t>(i) * n + j] += g[static_cast<std::size_t>(i) * total + col + j];
          }
          col += n;
        }
        break;
      }
      case OpKind::kConcatRows: {
        const int n = nd.value.cols();
        int row = 0;
        for (std::size_t slot = 0; slot < nd.inputs.size(); ++slot) {
          const Tensor& P = in_value(static_cast<int>(slot));
          if (in_needs(static_cast<int>(slot))) {
            auto& d = in_grad(static_cast<int>(slot));
            for (int i = 0; i < P.rows(); ++i)
              for (int j = 0; j < n; ++j)
                d[static_cast<std::size_t>(i) * n + j] += g[static_cast<std::size_t>(row + i) * n + j];
          }
          row += P.rows();
        }
        break;
      }
      case OpKind::kSelectRow:
        if (in_needs(0)) {
          auto& da = in_grad(0);
          const int n = nd.value.cols();
          for (int j = 0; j < n; ++j) da[static_cast<std::size_t>(nd.int_arg) * n + j] += g[static_cast<std::size_t>(j)];
        }
        break;
      case OpKind::kSumAll:
        if (in_needs(0)) {
          auto& da = in_grad(0);
          for (double& d : da) d += g[0];
        }
        break;
      case OpKind::kSmoothL1Loss:
        if (in_needs(0)) {
          const Tensor& P = in_value(0);
          auto& da = in_grad(0);
          for (std::size_t i = 0; i < P.data.size(); ++i)
            da[i] += g[0] * smooth_l1_derivative(P.data[i], nd.aux_tensor.data[i]);
        }
        break;
      case OpKind::kBceLoss:
        if (in_needs(0)) {
          const Tensor& P = in_value(0);
          auto& da = in_grad(0);
          for (std::size_t i = 0; i < P.data.size(); ++i)
            da[i] += g[0] * bce_derivative(P.data[i], nd.aux_tensor.data[i]);
        }
        break;
    }
  }
}

std::vector<double> Tape::grad_of(Var v) const {
  const Node& nd = node(v);
  if (grads_.size() != nodes_.size()) throw std::runtime_error("grad_of: backward() has not run");
  const auto& g = grads_[static_cast<std::size_t>(v.id)];
  if (g.empty()) return std::vector<double>(nd.value.data.size(), 0.0);
  return g;
}

}  // namespace densepath
