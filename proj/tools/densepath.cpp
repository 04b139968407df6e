// densepath CLI: gen | train | predict | eval | viz
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "densepath/parallel.hpp"
#include "densepath/prediction_io.hpp"
#include "densepath/scenario_io.hpp"
#include "densepath/svg.hpp"
#include "densepath/synth.hpp"
#include "densepath/trainer.hpp"

namespace {

using namespace densepath;

int cmd_gen(const GenConfig& cfg, const std::string& out) {
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out + " for writing");
  for (int i = 0; i < cfg.n_scenarios; ++i) {
    write_scenario(os, generate_one(cfg, static_cast<std::uint64_t>(i)));
  }
  if (!os) throw std::runtime_error("write to " + out + " failed");
  std::cerr << "wrote " << cfg.n_scenarios << " scenarios to " << out << "\n";
  return 0;
}

int cmd_train(const std::string& data, const std::string& config_path, const std::string& out,
              const std::vector<std::pair<std::string, std::string>>& overrides) {
  TrainConfig cfg = config_path.empty() ? TrainConfig{} : load_train_config(config_path);
  for (const auto& [k, v] : overrides) apply_config_entry(cfg, k, v);
  auto scenarios = load_scenarios(data);
  TrainResult result = train(scenarios, cfg, &std::cout);
  save_model(out, result.params, &result.adam);
  std::cerr << "saved checkpoint to " << out << "\n";
  return 0;
}

int cmd_predict(const std::string& data, const std::string& ckpt, const std::string& out, int k,
                int n, const std::string& mode, const std::string& goal_mode, double nms_radius,
                const std::string& dump_goals) {
  LoadedCheckpoint ck = load_checkpoint(ckpt);
  ModelParams params = ModelParams::from_checkpoint(ck);
  if (!mode.empty() && mode_from_string(mode) != params.config.mode) {
    throw std::invalid_argument("checkpoint was trained in " + to_string(params.config.mode) +
                                " mode; cannot predict in " + mode + " mode");
  }
  if (!goal_mode.empty()) params.config.goal_mode = goal_mode_from_string(goal_mode);
  if (nms_radius > 0.0) params.config.nms_radius = nms_radius;

  auto scenarios = load_scenarios(data);
  std::vector<PredictionSet> results(scenarios.size());
  std::vector<GoalFieldDump> dumps(scenarios.size());
  const bool want_dump = !dump_goals.empty();
  PredictOptions opt{k, n};
  parallel_for(static_cast<int>(scenarios.size()), [&](int i) {
    results[static_cast<std::size_t>(i)] =
        predict_scenario(scenarios[static_cast<std::size_t>(i)], params, opt,
                         want_dump ? &dumps[static_cast<std::size_t>(i)] : nullptr);
  });
  save_predictions(out, results);
  if (want_dump) {
    std::ofstream os(dump_goals);
    if (!os) throw std::runtime_error("cannot open " + dump_goals + " for writing");
    for (const auto& d : dumps) write_goal_dump(os, d);
  }
  std::cerr << "wrote predictions for " << results.size() << " scenarios to " << out << "\n";
  return 0;
}

int cmd_eval(const std::string& data, const std::string& ckpt, const std::string& out,
             const std::string& csv, const EvalConfig& ec) {
  LoadedCheckpoint ck = load_checkpoint(ckpt);
  auto scenarios = load_scenarios(data);
  MetricReport report = evaluate_checkpoint(ck, scenarios, ec);
  write_report_json(out, report);
  if (!csv.empty()) write_report_csv(csv, report);
  std::cout << report_to_json(report) << "\n";
  return 0;
}

int cmd_viz(const std::string& data, const std::string& goals_path, const std::string& preds_path,
            std::string scenario_id, const std::string& out) {
  auto scenarios = load_scenarios(data);
  if (scenarios.empty()) throw std::invalid_argument("viz: no scenarios in " + data);
  if (scenario_id.empty()) scenario_id = scenarios.front().id;
  const Scenario* scenario = nullptr;
  for (const auto& s : scenarios) {
    if (s.id == scenario_id) scenario = &s;
  }
  if (!scenario) throw std::invalid_argument("viz: scenario " + scenario_id + " not in " + data);

  std::optional<GoalFieldDump> goals;
  if (!goals_path.empty()) {
    for (auto& d : load_goal_dumps(goals_path)) {
      if (d.scenario_id == scenario_id) goals = std::move(d);
    }
    if (!goals) {
      throw std::invalid_argument("viz: no goal dump for scenario " + scenario_id + " in " +
                                  goals_path);
    }
  }
  std::optional<PredictionSet> preds;
  if (!preds_path.empty()) {
    for (auto& p : load_predictions(preds_path)) {
      if (p.scenario_id == scenario_id) preds = std::move(p);
    }
    if (!preds) {
      throw std::invalid_argument("viz: no predictions for scenario " + scenario_id + " in " +
                                  preds_path);
    }
  }
  const std::string svg =
      render_scene_svg(*scenario, goals ? &*goals : nullptr, preds ? &*preds : nullptr);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + out + " for writing");
  os << svg;
  std::cerr << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densepath: dense goal-based trajectory prediction on synthetic lane graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic scenarios");
  GenConfig gcfg;
  std::string gen_out;
  gen->add_option("--n", gcfg.n_scenarios, "number of scenarios");
  gen->add_option("--seed", gcfg.seed, "random seed");
  gen->add_option("--out", gen_out, "output JSONL path")->required();
  gen->add_option("--horizon", gcfg.horizon_s, "future horizon, seconds");
  gen->add_option("--history", gcfg.history_s, "history length, seconds");
  gen->add_option("--lane-width", gcfg.lane_width, "lane width, meters");
  gen->add_option("--noise", gcfg.noise_sigma, "lateral endpoint noise sigma, meters");
  gen->add_option("--speed-min", gcfg.speed_min, "minimum target speed, m/s");
  gen->add_option("--speed-max", gcfg.speed_max, "maximum target speed, m/s");
  gen->add_option("--w-straight", gcfg.w_straight, "straight template weight");
  gen->add_option("--w-fork-left", gcfg.w_fork_left, "fork-left template weight");
  gen->add_option("--w-fork-right", gcfg.w_fork_right, "fork-right template weight");
  gen->add_option("--w-uturn", gcfg.w_uturn, "U-turn template weight");
  gen->add_option("--parking-prob", gcfg.parking_prob, "probability of a parking area");
  gen->add_option("--max-background", gcfg.max_background, "max background agents");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model");
  std::string train_data, train_config, train_out;
  train_cmd->add_option("--data", train_data, "training scenarios JSONL")->required();
  train_cmd->add_option("--config", train_config, "flat key=value config file");
  train_cmd->add_option("--out", train_out, "checkpoint output path")->required();
  std::string t_seed, t_hidden, t_mode, t_goal_mode, t_epochs, t_batch, t_nms, t_agent;
  train_cmd->add_option("--seed", t_seed, "override: seed");
  train_cmd->add_option("--hidden", t_hidden, "override: hidden size");
  train_cmd->add_option("--mode", t_mode, "override: short|long");
  train_cmd->add_option("--goal-mode", t_goal_mode, "override: dense|sparse");
  train_cmd->add_option("--epochs", t_epochs, "override: epochs");
  train_cmd->add_option("--batch-size", t_batch, "override: batch size");
  train_cmd->add_option("--nms-radius", t_nms, "override: NMS radius, meters");
  train_cmd->add_option("--agent-type", t_agent, "override: target agent type filter");

  // predict
  auto* predict = app.add_subcommand("predict", "run inference");
  std::string p_data, p_ckpt, p_out, p_mode, p_goal_mode, p_dump;
  int p_k = 6, p_n = 6;
  double p_nms = -1.0;
  predict->add_option("--data", p_data, "scenarios JSONL")->required();
  predict->add_option("--ckpt", p_ckpt, "model checkpoint")->required();
  predict->add_option("--out", p_out, "predictions JSONL output")->required();
  predict->add_option("--k", p_k, "number of predictions per scenario");
  predict->add_option("--n", p_n, "goals per autoregressive step (long mode)");
  predict->add_option("--mode", p_mode, "short|long (must match the checkpoint)");
  predict->add_option("--goal-mode", p_goal_mode, "dense|sparse candidate sampling");
  predict->add_option("--nms-radius", p_nms, "NMS radius, meters");
  predict->add_option("--dump-goals", p_dump, "write the scored goal field JSONL here");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string e_data, e_ckpt, e_out, e_csv, e_agent;
  EvalConfig ecfg;
  eval->add_option("--data", e_data, "scenarios JSONL")->required();
  eval->add_option("--ckpt", e_ckpt, "model checkpoint")->required();
  eval->add_option("--out", e_out, "metric report JSON output")->required();
  eval->add_option("--csv", e_csv, "optional per-scenario CSV output");
  eval->add_option("--k", ecfg.k, "number of predictions per scenario");
  eval->add_option("--n", ecfg.n, "goals per autoregressive step (long mode)");
  eval->add_option("--hidden", ecfg.expect_hidden, "expected hidden size (mismatch is an error)");
  eval->add_option("--agent-type", e_agent, "only evaluate targets of this type");

  // viz
  auto* viz = app.add_subcommand("viz", "render a scenario as SVG");
  std::string v_data, v_goals, v_preds, v_id, v_out;
  viz->add_option("--data", v_data, "scenarios JSONL")->required();
  viz->add_option("--goals", v_goals, "goal field dump JSONL (from predict --dump-goals)");
  viz->add_option("--preds", v_preds, "predictions JSONL");
  viz->add_option("--scenario-id", v_id, "scenario to draw (default: first)");
  viz->add_option("--out", v_out, "SVG output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gcfg, gen_out);
    if (train_cmd->parsed()) {
      std::vector<std::pair<std::string, std::string>> overrides;
      if (!t_seed.empty()) overrides.emplace_back("seed", t_seed);
      if (!t_hidden.empty()) overrides.emplace_back("hidden", t_hidden);
      if (!t_mode.empty()) overrides.emplace_back("mode", t_mode);
      if (!t_goal_mode.empty()) overrides.emplace_back("goal_mode", t_goal_mode);
      if (!t_epochs.empty()) overrides.emplace_back("epochs", t_epochs);
      if (!t_batch.empty()) overrides.emplace_back("batch_size", t_batch);
      if (!t_nms.empty()) overrides.emplace_back("nms_radius", t_nms);
      if (!t_agent.empty()) overrides.emplace_back("agent_type", t_agent);
      return cmd_train(train_data, train_config, train_out, overrides);
    }
    if (predict->parsed()) {
      return cmd_predict(p_data, p_ckpt, p_out, p_k, p_n, p_mode, p_goal_mode, p_nms, p_dump);
    }
    if (eval->parsed()) {
      ecfg.agent_type = e_agent;
      return cmd_eval(e_data, e_ckpt, e_out, e_csv, ecfg);
    }
    if (viz->parsed()) return cmd_viz(v_data, v_goals, v_preds, v_id, v_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
