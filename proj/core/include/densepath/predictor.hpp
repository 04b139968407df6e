#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densepath/checkpoint.hpp"
#include "densepath/goal_field.hpp"
#include "densepath/scene.hpp"

namespace densepath {

enum class PredictionMode { kShort, kLong };

PredictionMode mode_from_string(const std::string& s);
std::string to_string(PredictionMode m);

enum class GoalMode { kDense, kSparse };

GoalMode goal_mode_from_string(const std::string& s);
std::string to_string(GoalMode m);

struct ModelConfig {
  int hidden = 64;
  int subgraph_depth = 3;
  PredictionMode mode = PredictionMode::kShort;
  GoalMode goal_mode = GoalMode::kDense;
  double horizon_s = 8.0;        // short mode predicts at this horizon
  double nms_radius = 2.0;
  double goal_density = 1.0;
  double history_s = 1.0;
  bool lanes_only_keys = false;  // restrict goal attention keys to lane elements
  bool feed_goal_coord = false;  // completion consumes goal coordinates, not attended features

  // short: {horizon_s}; long: {3, 5, 8}
  std::vector<double> branch_horizons() const;
  int branch_count() const { return mode == PredictionMode::kLong ? 3 : 1; }
  int trajectory_steps() const;  // points of the completed trajectory

  std::map<std::string, std::string> to_metadata() const;
  static ModelConfig from_metadata(const std::map<std::string, std::string>& meta);
};

// One branch: global interaction graph, dense goal encoder and goal scorer.
struct BranchParams {
  AttentionRef global_graph;
  Mlp2Ref goal_mlp;
  AttentionRef goal_attn;
  Mlp2Ref scorer;
};

// All trainable weights: the subgraph is shared across branches, every branch
// has its own global graph / goal encoder / scorer, and a single completion
// MLP consumes the goal feature(s) plus the target agent feature.
struct ModelParams {
  ModelConfig config;
  ParamStore store;
  SubgraphParams subgraph;
  std::vector<BranchParams> branches;
  Mlp2Ref completion;

  static ModelParams create(const ModelConfig& cfg, std::uint64_t seed);
  static ModelParams from_checkpoint(const LoadedCheckpoint& ck);
};

// Greedy non-maximum suppression: repeatedly take the highest-probability
// candidate (ties to the lowest index) and drop everything within `radius`
// of it. Returns at most k indices; selected goals are pairwise >= radius apart.
std::vector<int> nms_select(const std::vector<Vec2>& coords, const std::vector<double>& phi, int k,
                            double radius);

// Scenario after normalization, cropping, vectorization and goal sampling.
struct PreparedScene {
  std::string scenario_id;
  RigidTransform to_local;
  std::vector<VectorSeq> polylines;  // agents first, lanes after
  std::int64_t target_id = 0;
  std::vector<Vec2> goals;
  std::vector<GoalSource> goal_source;
  std::vector<Vec2> future;  // normalized ground truth (may be empty)
  double horizon_s = 8.0;
};

PreparedScene prepare_scene(const Scenario& s, const ModelConfig& cfg);

struct Prediction {
  std::vector<Vec2> trajectory;
  double score = 0.0;
  std::vector<Vec2> goals;  // one goal, or the 3s/5s/8s triple in long mode
};

struct PredictionSet {
  std::string scenario_id;
  std::vector<Prediction> predictions;  // scores non-increasing
};

struct GoalFieldDump {
  std::string scenario_id;
  std::vector<Vec2> coords;
  std::vector<double> phi;
};

struct PredictOptions {
  int k = 6;
  int n = 6;  // goals per autoregressive step in long mode
};

// normalize -> encode -> score -> NMS -> complete -> denormalize.
// `dump`, when given, receives the scored goal field of the first branch in
// the original (denormalized) frame.
PredictionSet predict_scenario(const Scenario& s, const ModelParams& params,
                               const PredictOptions& opt, GoalFieldDump* dump = nullptr);

struct TrainStepStats {
  double loss = 0.0;
  double goal_loss = 0.0;
  double completion_loss = 0.0;
  int used = 0;
  int skipped = 0;  // ground-truth endpoint outside the sampled field
};

// Forward + backward over the batch with teacher forcing, mean-reduced
// gradients, one Adam update. `lr` is the (already scheduled) learning rate.
TrainStepStats train_step(std::span<const PreparedScene* const> batch, ModelParams& params,
                          AdamState& adam, double lr);

// Per-scenario loss and gradient, exposed for the trainer's accumulation and
// for gradient tests. Returns false when the scenario is skipped.
bool scenario_loss_grad(const PreparedScene& scene, const ModelParams& params,
                        std::vector<double>* grad_sink, TrainStepStats* stats);

}  // namespace densepath
