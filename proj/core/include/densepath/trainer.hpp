#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "densepath/metrics.hpp"
#include "densepath/predictor.hpp"

namespace densepath {

struct TrainConfig {
  int batch_size = 64;
  int epochs = 16;
  double lr = 1e-3;
  double lr_decay = 0.3;
  int lr_decay_every = 5;  // epochs
  int hidden = 64;         // desk-scale default; 128 matches the full-size setup
  std::uint64_t seed = 0;
  std::string agent_type;  // vehicle|pedestrian|cyclist, empty = all
  PredictionMode mode = PredictionMode::kShort;
  GoalMode goal_mode = GoalMode::kDense;
  double nms_radius = 2.0;
  double goal_density = 1.0;
  int subgraph_depth = 3;
  double history_s = 1.0;
  bool lanes_only_keys = false;
  bool feed_goal_coord = false;

  ModelConfig model_config(double horizon_s) const;
};

// Flat `key = value` document mirroring TrainConfig; '#' starts a comment.
TrainConfig load_train_config(const std::string& path);
void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value);

// lr * decay^floor(epoch / every), epoch counted from 0
double lr_for_epoch(const TrainConfig& cfg, int epoch);

struct EpochLog {
  int epoch = 0;  // 1-based in logs
  double lr = 0.0;
  double loss = 0.0;
  double goal_loss = 0.0;
  double completion_loss = 0.0;
  int used = 0;
  int skipped = 0;
};

std::string epoch_log_line(const EpochLog& e);

struct TrainResult {
  ModelParams params;
  AdamState adam;
  std::vector<EpochLog> epochs;
};

using EpochCallback = std::function<void(int epoch, const ModelParams& params)>;

// Deterministic given the seed: init, per-epoch shuffling and every update
// derive from TrainConfig::seed. `log` receives one JSON line per epoch.
// Throws on an empty (post-filter) dataset and on divergence.
TrainResult train(const std::vector<Scenario>& dataset, const TrainConfig& cfg,
                  std::ostream* log = nullptr, const EpochCallback& after_epoch = nullptr);

struct EvalConfig {
  int k = 6;
  int n = 6;
  int expect_hidden = -1;  // >= 0: require the checkpoint hidden size to match
  std::string agent_type;
};

MetricReport evaluate_model(const ModelParams& params, const std::vector<Scenario>& dataset,
                            const EvalConfig& cfg);
MetricReport evaluate_checkpoint(const LoadedCheckpoint& ck, const std::vector<Scenario>& dataset,
                                 const EvalConfig& cfg);

void save_model(const std::string& path, const ModelParams& params, const AdamState* adam);

}  // namespace densepath
