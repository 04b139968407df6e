#pragma once

#include <vector>

#include "densepath/encoder.hpp"
#include "densepath/scene.hpp"

namespace densepath {

struct GoalSource {
  std::int64_t lane_id = 0;
  bool parking = false;
};

// Dense goal candidates with per-candidate probability phi and ground-truth
// indicator psi. phi sums to 1 after scoring; psi is one-hot in training mode.
struct DenseGoalField {
  std::vector<Vec2> coords;
  std::vector<double> phi;
  std::vector<double> psi;
  std::vector<GoalSource> source;

  int size() const { return static_cast<int>(coords.size()); }
};

// Axis-aligned grid with `density` spacing and origin (0,0); a grid point is
// kept when it lies within half a width of some lane centerline (parking
// pseudo-lanes included) and inside the submap disc. Deduplicated, ordered
// row-major by grid cell (y rows, then x).
std::vector<Vec2> sample_dense_goals(const MapData& m, double density = 1.0,
                                     Vec2 center = kSubmapCenter, double radius = kSubmapRadius,
                                     std::vector<GoalSource>* source = nullptr);

// Sparse anchor baseline: lane centerline points snapped to the same grid and
// passed through the same corridor/disc filter, so the result is a subset of
// the dense candidate set.
std::vector<Vec2> sample_sparse_goals(const MapData& m, double density = 1.0,
                                      Vec2 center = kSubmapCenter, double radius = kSubmapRadius,
                                      std::vector<GoalSource>* source = nullptr);

// Index of the candidate nearest to the endpoint; ties resolve to the lowest
// index. Throws on an empty candidate set.
int assign_ground_truth(const std::vector<Vec2>& coords, Vec2 gt_endpoint);

std::vector<double> one_hot(int n, int index);

// F = mlp2(coords); F' = attention(F Wq, keys Wk, keys Wv) + F.
// `keys` is the scene feature matrix (optionally with extra conditioning rows).
Var encode_goals(Tape& tape, const std::vector<Vec2>& coords, Var keys, const Mlp2Ref& goal_mlp,
                 const AttentionRef& goal_attn, const ParamStore& ps);

// phi_i = exp(g(F'_i)) / sum_n exp(g(F'_n)) as an n x 1 column.
Var score_goals(Tape& tape, Var goal_features, const Mlp2Ref& scorer, const ParamStore& ps);

// Sum of per-candidate binary cross-entropy against the one-hot psi.
Var goal_loss(Tape& tape, Var phi, const std::vector<double>& psi);

}  // namespace densepath
