#include "densepath/goal_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace densepath {

namespace {

// grid cell key; coordinates stay well below 2^31 cells
std::int64_t cell_key(std::int64_t i, std::int64_t j) { return (i << 32) ^ (j & 0xffffffffLL); }

struct CellCollector {
  std::unordered_map<std::int64_t, GoalSource> cells;

  void insert(std::int64_t i, std::int64_t j, const GoalSource& src) {
    cells.emplace(cell_key(i, j), src);  // keep-first provenance
  }
};

std::vector<Vec2> collect_sorted(const CellCollector& col, double density,
                                 std::vector<GoalSource>* source) {
  std::vector<std::pair<std::int64_t, std::int64_t>> idx;  // (j, i) row-major
  idx.reserve(col.cells.size());
  for (const auto& [key, src] : col.cells) {
    const std::int64_t i = key >> 32;
    const std::int64_t j = static_cast<std::int32_t>(key & 0xffffffffLL);
    idx.emplace_back(j, i);
  }
  std::sort(idx.begin(), idx.end());
  std::vector<Vec2> out;
  out.reserve(idx.size());
  if (source) source->reserve(idx.size());
  for (const auto& [j, i] : idx) {
    out.push_back({static_cast<double>(i) * density, static_cast<double>(j) * density});
    if (source) source->push_back(col.cells.at(cell_key(i, j)));
  }
  return out;
}

}  // namespace

std::vector<Vec2> sample_dense_goals(const MapData& m, double density, Vec2 center, double radius,
                                     std::vector<GoalSource>* source) {
  if (density <= 0.0) throw std::invalid_argument("sample_dense_goals: density must be positive");
  CellCollector col;
  for (const auto& lane : m.lanes) {
    if (lane.points.empty()) continue;
    const double half = lane.width / 2.0;
    const GoalSource src{lane.id, lane.parking};
    const std::size_t n_seg = std::max<std::size_t>(lane.points.size() - 1, 1);
    for (std::size_t s = 0; s < n_seg; ++s) {
      const Vec2 a = lane.points[s];
      const Vec2 b = lane.points[std::min(s + 1, lane.points.size() - 1)];
      const double margin = half + density;
      const auto i_lo = static_cast<std::int64_t>(std::ceil((std::min(a.x, b.x) - margin) / density));
      const auto i_hi = static_cast<std::int64_t>(std::floor((std::max(a.x, b.x) + margin) / density));
      const auto j_lo = static_cast<std::int64_t>(std::ceil((std::min(a.y, b.y) - margin) / density));
      const auto j_hi = static_cast<std::int64_t>(std::floor((std::max(a.y, b.y) + margin) / density));
      for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        for (std::int64_t i = i_lo; i <= i_hi; ++i) {
          const Vec2 p{static_cast<double>(i) * density, static_cast<double>(j) * density};
          if (point_segment_distance(p, a, b) <= half && dist(p, center) <= radius) {
            col.insert(i, j, src);
          }
        }
      }
    }
  }
  return collect_sorted(col, density, source);
}

std::vector<Vec2> sample_sparse_goals(const MapData& m, double density, Vec2 center, double radius,
                                      std::vector<GoalSource>* source) {
  if (density <= 0.0) throw std::invalid_argument("sample_sparse_goals: density must be positive");
  CellCollector col;
  for (const auto& lane : m.lanes) {
    const GoalSource src{lane.id, lane.parking};
    for (const auto& cp : lane.points) {
      const auto i = static_cast<std::int64_t>(std::llround(cp.x / density));
      const auto j = static_cast<std::int64_t>(std::llround(cp.y / density));
      const Vec2 p{static_cast<double>(i) * density, static_cast<double>(j) * density};
      if (dist(p, center) > radius) continue;
      bool on_road = false;
      for (const auto& other : m.lanes) {
        if (point_polyline_distance(p, other.points) <= other.width / 2.0) {
          on_road = true;
          break;
        }
      }
      if (on_road) col.insert(i, j, src);
    }
  }
  return collect_sorted(col, density, source);
}

int assign_ground_truth(const std::vector<Vec2>& coords, Vec2 gt_endpoint) {
  if (coords.empty()) throw std::invalid_argument("assign_ground_truth: empty candidate set");
  int best = 0;
  double best_d = dist(coords[0], gt_endpoint);
  for (int i = 1; i < static_cast<int>(coords.size()); ++i) {
    const double d = dist(coords[static_cast<std::size_t>(i)], gt_endpoint);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<double> one_hot(int n, int index) {
  if (index < 0 || index >= n) throw std::invalid_argument("one_hot: index out of range");
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(index)] = 1.0;
  return v;
}

Var encode_goals(Tape& tape, const std::vector<Vec2>& coords, Var keys, const Mlp2Ref& goal_mlp,
                 const AttentionRef& goal_attn, const ParamStore& ps) {
  if (coords.empty()) throw std::invalid_argument("encode_goals: no goal candidates");
  if (tape.value(keys).rows() == 0) throw std::invalid_argument("encode_goals: empty scene features");
  Tensor c = Tensor::zeros({static_cast<int>(coords.size()), 2});
  for (std::size_t i = 0; i < coords.size(); ++i) {
    c.data[2 * i] = coords[i].x * kCoordScale;
    c.data[2 * i + 1] = coords[i].y * kCoordScale;
  }
  Var f = tape.mlp2(tape.constant(std::move(c)), bind_mlp2(tape, ps, goal_mlp));
  Var q = tape.matmul(f, tape.param(ps, goal_attn.wq));
  Var k = tape.matmul(keys, tape.param(ps, goal_attn.wk));
  Var v = tape.matmul(keys, tape.param(ps, goal_attn.wv));
  return tape.add(tape.attention(q, k, v), f);
}

Var score_goals(Tape& tape, Var goal_features, const Mlp2Ref& scorer, const ParamStore& ps) {
  Var logits = tape.mlp2(goal_features, bind_mlp2(tape, ps, scorer));  // n x 1
  return tape.softmax(logits, 0);
}

Var goal_loss(Tape& tape, Var phi, const std::vector<double>& psi) {
  const Tensor& p = tape.value(phi);
  if (p.numel() != static_cast<std::int64_t>(psi.size())) {
    throw std::invalid_argument("goal_loss: phi/psi length mismatch");
  }
  return tape.bce_loss(phi, Tensor(p.shape, psi));
}

}  // namespace densepath
