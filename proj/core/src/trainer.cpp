#include "densepath/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "densepath/parallel.hpp"

namespace densepath {

ModelConfig TrainConfig::model_config(double horizon_s) const {
  ModelConfig mc;
  mc.hidden = hidden;
  mc.subgraph_depth = subgraph_depth;
  mc.mode = mode;
  mc.goal_mode = goal_mode;
  mc.horizon_s = horizon_s;
  mc.nms_radius = nms_radius;
  mc.goal_density = goal_density;
  mc.history_s = history_s;
  mc.lanes_only_keys = lanes_only_keys;
  mc.feed_goal_coord = feed_goal_coord;
  return mc;
}

void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "batch_size") cfg.batch_size = std::stoi(value);
    else if (key == "epochs") cfg.epochs = std::stoi(value);
    else if (key == "lr") cfg.lr = std::stod(value);
    else if (key == "lr_decay") cfg.lr_decay = std::stod(value);
    else if (key == "lr_decay_every") cfg.lr_decay_every = std::stoi(value);
    else if (key == "hidden") cfg.hidden = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "agent_type") cfg.agent_type = value;
    else if (key == "mode") cfg.mode = mode_from_string(value);
    else if (key == "goal_mode") cfg.goal_mode = goal_mode_from_string(value);
    else if (key == "nms_radius") cfg.nms_radius = std::stod(value);
    else if (key == "goal_density") cfg.goal_density = std::stod(value);
    else if (key == "subgraph_depth") cfg.subgraph_depth = std::stoi(value);
    else if (key == "history_s") cfg.history_s = std::stod(value);
    else if (key == "lanes_only_keys") cfg.lanes_only_keys = value == "1" || value == "true";
    else if (key == "feed_goal_coord") cfg.feed_goal_coord = value == "1" || value == "true";
    else throw std::invalid_argument("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for config key " + key + ": " + value);
  }
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  TrainConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto sep = line.find('=');
    if (sep == std::string::npos) sep = line.find(':');
    if (sep == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": expected 'key = value'");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, sep));
    const std::string value = trim(line.substr(sep + 1));
    if (key.empty()) continue;
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

double lr_for_epoch(const TrainConfig& cfg, int epoch) {
  return cfg.lr * std::pow(cfg.lr_decay, epoch / cfg.lr_decay_every);
}

std::string epoch_log_line(const EpochLog& e) {
  nlohmann::json j;
  j["epoch"] = e.epoch;
  j["lr"] = e.lr;
  j["loss"] = e.loss;
  j["goal_loss"] = e.goal_loss;
  j["completion_loss"] = e.completion_loss;
  j["used"] = e.used;
  j["skipped"] = e.skipped;
  return j.dump();
}

namespace {

std::vector<const Scenario*> filter_by_type(const std::vector<Scenario>& dataset,
                                            const std::string& agent_type) {
  std::vector<const Scenario*> out;
  for (const auto& s : dataset) {
    if (!agent_type.empty() && to_string(s.target().type) != agent_type) continue;
    out.push_back(&s);
  }
  return out;
}

// Fisher-Yates from our own generator; std::shuffle is implementation-defined.
void deterministic_shuffle(std::vector<int>& v, Rng& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
  }
}

}  // namespace

TrainResult train(const std::vector<Scenario>& dataset, const TrainConfig& cfg, std::ostream* log,
                  const EpochCallback& after_epoch) {
  if (cfg.batch_size < 1 || cfg.epochs < 1 || cfg.lr <= 0.0 || cfg.lr_decay <= 0.0 ||
      cfg.lr_decay >= 1.0 || cfg.lr_decay_every < 1) {
    throw std::invalid_argument("train: invalid configuration");
  }
  const auto selected = filter_by_type(dataset, cfg.agent_type);
  if (selected.empty()) throw std::invalid_argument("train: dataset empty after agent-type filter");

  const double horizon = selected.front()->horizon_s;
  for (const Scenario* s : selected) {
    if (s->horizon_s != horizon) {
      throw std::invalid_argument("train: mixed horizons in dataset (" + std::to_string(horizon) +
                                  " vs " + std::to_string(s->horizon_s) + ")");
    }
    if (s->future.empty()) {
      throw std::invalid_argument("train: scenario " + s->id + " has no ground-truth future");
    }
  }

  TrainResult result{ModelParams::create(cfg.model_config(horizon), cfg.seed),
                     AdamState::init(0, AdamConfig{cfg.lr}), {}};
  result.adam = AdamState::init(result.params.store.size(), AdamConfig{cfg.lr});

  // one-time preparation (normalize, crop, vectorize, sample goals)
  std::vector<PreparedScene> prepared(selected.size());
  parallel_for(static_cast<int>(selected.size()), [&](int i) {
    prepared[static_cast<std::size_t>(i)] =
        prepare_scene(*selected[static_cast<std::size_t>(i)], result.params.config);
  });

  Rng shuffle_rng(cfg.seed ^ 0x5eedu);
  std::vector<int> order(prepared.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_for_epoch(cfg, epoch);
    deterministic_shuffle(order, shuffle_rng);
    EpochLog el;
    el.epoch = epoch + 1;
    el.lr = lr;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<const PreparedScene*> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&prepared[static_cast<std::size_t>(order[i])]);
      }
      TrainStepStats st;
      try {
        st = train_step(batch, result.params, result.adam, lr);
      } catch (const std::exception& e) {
        throw std::runtime_error("train: epoch " + std::to_string(epoch + 1) + ", batch " +
                                 std::to_string(start / static_cast<std::size_t>(cfg.batch_size) + 1) +
                                 ": " + e.what());
      }
      if (st.used > 0 && !std::isfinite(st.loss)) {
        throw std::runtime_error("train: diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch + 1));
      }
      el.loss += st.loss * st.used;
      el.goal_loss += st.goal_loss * st.used;
      el.completion_loss += st.completion_loss * st.used;
      el.used += st.used;
      el.skipped += st.skipped;
    }
    if (el.used > 0) {
      el.loss /= el.used;
      el.goal_loss /= el.used;
      el.completion_loss /= el.used;
    }
    if (log) (*log) << epoch_log_line(el) << '\n' << std::flush;
    result.epochs.push_back(el);
    if (after_epoch) after_epoch(epoch + 1, result.params);
  }
  return result;
}

MetricReport evaluate_model(const ModelParams& params, const std::vector<Scenario>& dataset,
                            const EvalConfig& cfg) {
  const auto selected = filter_by_type(dataset, cfg.agent_type);
  if (selected.empty()) throw std::invalid_argument("evaluate: dataset empty after agent-type filter");
  std::vector<ScenarioMetrics> per(selected.size());
  PredictOptions opt{cfg.k, cfg.n};
  parallel_for(static_cast<int>(selected.size()), [&](int i) {
    const Scenario& s = *selected[static_cast<std::size_t>(i)];
    if (s.future.empty()) {
      throw std::invalid_argument("evaluate: scenario " + s.id + " has no ground-truth future");
    }
    const PredictionSet pred = predict_scenario(s, params, opt);
    std::vector<std::vector<Vec2>> trajs;
    trajs.reserve(pred.predictions.size());
    for (const auto& p : pred.predictions) trajs.push_back(p.trajectory);
    ScenarioMetrics m;
    m.id = s.id;
    m.min_ade = min_ade(trajs, s.future);
    m.min_fde = min_fde(trajs, s.future);
    m.miss = m.min_fde > kMissThreshold;
    per[static_cast<std::size_t>(i)] = std::move(m);
  });
  return aggregate_metrics(per);
}

MetricReport evaluate_checkpoint(const LoadedCheckpoint& ck, const std::vector<Scenario>& dataset,
                                 const EvalConfig& cfg) {
  const ModelConfig mc = ModelConfig::from_metadata(ck.metadata);
  if (cfg.expect_hidden >= 0 && mc.hidden != cfg.expect_hidden) {
    throw std::invalid_argument("evaluate: hidden-size mismatch, checkpoint has " +
                                std::to_string(mc.hidden) + ", config expects " +
                                std::to_string(cfg.expect_hidden));
  }
  return evaluate_model(ModelParams::from_checkpoint(ck), dataset, cfg);
}

void save_model(const std::string& path, const ModelParams& params, const AdamState* adam) {
  save_checkpoint(path, params.store, adam, params.config.to_metadata());
}

}  // namespace densepath
