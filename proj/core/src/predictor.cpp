#include "densepath/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace densepath {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::map<std::string, std::string>& meta, const std::string& key,
                    double fallback) {
  auto it = meta.find(key);
  return it == meta.end() ? fallback : std::stod(it->second);
}

int parse_int(const std::map<std::string, std::string>& meta, const std::string& key, int fallback) {
  auto it = meta.find(key);
  return it == meta.end() ? fallback : std::stoi(it->second);
}

std::string parse_string(const std::map<std::string, std::string>& meta, const std::string& key,
                         const std::string& fallback) {
  auto it = meta.find(key);
  return it == meta.end() ? fallback : it->second;
}

}  // namespace

PredictionMode mode_from_string(const std::string& s) {
  if (s == "short") return PredictionMode::kShort;
  if (s == "long") return PredictionMode::kLong;
  throw std::invalid_argument("unknown prediction mode: " + s + " (expected short|long)");
}

std::string to_string(PredictionMode m) {
  return m == PredictionMode::kShort ? "short" : "long";
}

GoalMode goal_mode_from_string(const std::string& s) {
  if (s == "dense") return GoalMode::kDense;
  if (s == "sparse") return GoalMode::kSparse;
  throw std::invalid_argument("unknown goal mode: " + s + " (expected dense|sparse)");
}

std::string to_string(GoalMode m) { return m == GoalMode::kDense ? "dense" : "sparse"; }

std::vector<double> ModelConfig::branch_horizons() const {
  if (mode == PredictionMode::kLong) return {3.0, 5.0, 8.0};
  return {horizon_s};
}

int ModelConfig::trajectory_steps() const {
  const double h = mode == PredictionMode::kLong ? 8.0 : horizon_s;
  return static_cast<int>(std::lround(h * 10.0));
}

std::map<std::string, std::string> ModelConfig::to_metadata() const {
  return {
      {"format", "densepath-model"},
      {"hidden", std::to_string(hidden)},
      {"subgraph_depth", std::to_string(subgraph_depth)},
      {"mode", to_string(mode)},
      {"goal_mode", to_string(goal_mode)},
      {"horizon_s", fmt_double(horizon_s)},
      {"nms_radius", fmt_double(nms_radius)},
      {"goal_density", fmt_double(goal_density)},
      {"history_s", fmt_double(history_s)},
      {"lanes_only_keys", lanes_only_keys ? "1" : "0"},
      {"feed_goal_coord", feed_goal_coord ? "1" : "0"},
  };
}

ModelConfig ModelConfig::from_metadata(const std::map<std::string, std::string>& meta) {
  ModelConfig cfg;
  cfg.hidden = parse_int(meta, "hidden", cfg.hidden);
  cfg.subgraph_depth = parse_int(meta, "subgraph_depth", cfg.subgraph_depth);
  cfg.mode = mode_from_string(parse_string(meta, "mode", "short"));
  cfg.goal_mode = goal_mode_from_string(parse_string(meta, "goal_mode", "dense"));
  cfg.horizon_s = parse_double(meta, "horizon_s", cfg.horizon_s);
  cfg.nms_radius = parse_double(meta, "nms_radius", cfg.nms_radius);
  cfg.goal_density = parse_double(meta, "goal_density", cfg.goal_density);
  cfg.history_s = parse_double(meta, "history_s", cfg.history_s);
  cfg.lanes_only_keys = parse_string(meta, "lanes_only_keys", "0") == "1";
  cfg.feed_goal_coord = parse_string(meta, "feed_goal_coord", "0") == "1";
  return cfg;
}

ModelParams ModelParams::create(const ModelConfig& cfg, std::uint64_t seed) {
  if (cfg.hidden < 2 || cfg.hidden % 2 != 0) {
    throw std::invalid_argument("hidden size must be a positive even number");
  }
  if (cfg.mode == PredictionMode::kLong && cfg.horizon_s < 8.0) {
    throw std::invalid_argument("long-term mode needs horizon_s >= 8");
  }
  ModelParams p;
  p.config = cfg;
  Rng rng(seed);
  p.subgraph = register_subgraph(p.store, "subgraph", kVectorFeatureDim, cfg.hidden,
                                 cfg.subgraph_depth, rng);
  for (int b = 0; b < cfg.branch_count(); ++b) {
    const std::string prefix = "b" + std::to_string(b);
    BranchParams br;
    br.global_graph = register_attention(p.store, prefix + ".gg", cfg.hidden, cfg.hidden, rng);
    br.goal_mlp = register_mlp2(p.store, prefix + ".goal", 2, cfg.hidden, cfg.hidden, rng);
    br.goal_attn = register_attention(p.store, prefix + ".gattn", cfg.hidden, cfg.hidden, rng);
    br.scorer = register_mlp2(p.store, prefix + ".score", cfg.hidden, cfg.hidden, 1, rng);
    p.branches.push_back(br);
  }
  const int goal_feat_dim = cfg.feed_goal_coord ? 2 : cfg.hidden;
  const int completion_in = cfg.branch_count() * goal_feat_dim + cfg.hidden;
  p.completion = register_mlp2(p.store, "completion", completion_in, cfg.hidden,
                               2 * cfg.trajectory_steps(), rng);
  return p;
}

ModelParams ModelParams::from_checkpoint(const LoadedCheckpoint& ck) {
  ModelParams p = create(ModelConfig::from_metadata(ck.metadata), 0);
  if (ck.params.count() != p.store.count()) {
    throw std::runtime_error("checkpoint has " + std::to_string(ck.params.count()) +
                             " parameters, model expects " + std::to_string(p.store.count()));
  }
  for (int i = 0; i < ck.params.count(); ++i) {
    const auto& e = ck.params.entry(i);
    const int idx = p.store.index_of(e.name);
    if (idx < 0) throw std::runtime_error("checkpoint parameter " + e.name + " is unknown");
    if (p.store.entry(idx).shape != e.shape) {
      throw std::runtime_error("checkpoint parameter " + e.name + " has shape " +
                               shape_str(e.shape) + ", expected " +
                               shape_str(p.store.entry(idx).shape));
    }
    auto dst = p.store.values_of(idx);
    auto src = ck.params.values_of(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return p;
}

std::vector<int> nms_select(const std::vector<Vec2>& coords, const std::vector<double>& phi, int k,
                            double radius) {
  if (coords.empty()) throw std::invalid_argument("nms_select: empty goal field");
  if (coords.size() != phi.size()) throw std::invalid_argument("nms_select: coords/phi mismatch");
  if (k < 1) throw std::invalid_argument("nms_select: k must be >= 1");
  if (radius <= 0.0) throw std::invalid_argument("nms_select: radius must be positive");
  const int n = static_cast<int>(coords.size());
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(k));
  while (static_cast<int>(picked.size()) < k) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (alive[static_cast<std::size_t>(i)] &&
          (best < 0 || phi[static_cast<std::size_t>(i)] > phi[static_cast<std::size_t>(best)])) {
        best = i;
      }
    }
    if (best < 0) break;
    picked.push_back(best);
    for (int i = 0; i < n; ++i) {
      if (alive[static_cast<std::size_t>(i)] &&
          dist(coords[static_cast<std::size_t>(i)], coords[static_cast<std::size_t>(best)]) <= radius) {
        alive[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  return picked;
}

PreparedScene prepare_scene(const Scenario& s, const ModelConfig& cfg) {
  validate_scenario(s);
  NormalizedScenario norm = normalize_scene(s);
  PreparedScene out;
  out.scenario_id = s.id;
  out.to_local = norm.to_local;
  out.target_id = s.target_id;
  out.horizon_s = s.horizon_s;
  out.future = norm.scene.future;

  const MapData cropped = crop_submap(norm.scene.map);
  out.polylines = vectorize_agents(norm.scene.tracks, s.target_id, cfg.history_s);
  auto lane_seqs = segment_lanes(cropped.lanes);
  out.polylines.insert(out.polylines.end(), std::make_move_iterator(lane_seqs.begin()),
                       std::make_move_iterator(lane_seqs.end()));

  if (cfg.goal_mode == GoalMode::kDense) {
    out.goals = sample_dense_goals(cropped, cfg.goal_density, kSubmapCenter, kSubmapRadius,
                                   &out.goal_source);
  } else {
    out.goals = sample_sparse_goals(cropped, cfg.goal_density, kSubmapCenter, kSubmapRadius,
                                    &out.goal_source);
  }
  return out;
}

namespace {

// Shared forward state: subgraph features are computed once and reused by
// every branch, so their gradients accumulate across branches.
struct ForwardContext {
  Tape* tape = nullptr;
  const ModelParams* params = nullptr;
  const PreparedScene* scene = nullptr;
  Var stack;
  std::vector<SceneFeatures> branch_scene;
  std::vector<Var> branch_keys;
};

ForwardContext make_forward(Tape& tape, const PreparedScene& scene, const ModelParams& params) {
  if (scene.polylines.empty()) throw std::invalid_argument("forward: scenario has no polylines");
  ForwardContext ctx;
  ctx.tape = &tape;
  ctx.params = &params;
  ctx.scene = &scene;
  ctx.stack = subgraph_stack(tape, scene.polylines, params.subgraph, params.store);
  for (int b = 0; b < params.config.branch_count(); ++b) {
    SceneFeatures sf = make_scene_features(tape, ctx.stack, scene.polylines, scene.target_id,
                                           params.branches[static_cast<std::size_t>(b)].global_graph,
                                           params.store);
    Var keys = sf.elements;
    if (params.config.lanes_only_keys) {
      std::vector<Var> lane_rows;
      for (std::size_t i = 0; i < sf.index.size(); ++i) {
        if (sf.index[i].kind == VectorSeq::Owner::kLane) {
          lane_rows.push_back(tape.select_row(sf.elements, static_cast<int>(i)));
        }
      }
      if (lane_rows.empty()) throw std::invalid_argument("forward: lanes_only_keys with no lanes");
      keys = tape.concat_rows(lane_rows);
    }
    ctx.branch_scene.push_back(std::move(sf));
    ctx.branch_keys.push_back(keys);
  }
  return ctx;
}

// Goal features of one branch. Conditioning appends the previous goal,
// embedded with the branch's own coordinate MLP, as an extra attention
// key/value row.
Var branch_goal_features(ForwardContext& ctx, int b, const std::optional<Vec2>& condition) {
  Tape& tape = *ctx.tape;
  const ModelParams& mp = *ctx.params;
  const BranchParams& br = mp.branches[static_cast<std::size_t>(b)];
  Var keys = ctx.branch_keys[static_cast<std::size_t>(b)];
  if (condition) {
    Var embed = tape.mlp2(
        tape.constant(Tensor::matrix(1, 2, {condition->x * kCoordScale, condition->y * kCoordScale})),
        bind_mlp2(tape, mp.store, br.goal_mlp));
    std::array<Var, 2> rows{keys, embed};
    keys = tape.concat_rows(rows);
  }
  return encode_goals(tape, ctx.scene->goals, keys, br.goal_mlp, br.goal_attn, mp.store);
}

Var branch_phi(ForwardContext& ctx, int b, Var goal_features) {
  const BranchParams& br = ctx.params->branches[static_cast<std::size_t>(b)];
  return score_goals(*ctx.tape, goal_features, br.scorer, ctx.params->store);
}

Var goal_feature_for_completion(ForwardContext& ctx, Var branch_features, int goal_index) {
  Tape& tape = *ctx.tape;
  if (ctx.params->config.feed_goal_coord) {
    const Vec2 g = ctx.scene->goals[static_cast<std::size_t>(goal_index)];
    return tape.constant(Tensor::matrix(1, 2, {g.x * kCoordScale, g.y * kCoordScale}));
  }
  return tape.select_row(branch_features, goal_index);
}

Var completion_output(ForwardContext& ctx, std::span<const Var> goal_feats, Var target_feat) {
  Tape& tape = *ctx.tape;
  std::vector<Var> parts(goal_feats.begin(), goal_feats.end());
  parts.push_back(target_feat);
  Var input = tape.concat_cols(parts);
  return tape.mlp2(input, bind_mlp2(tape, ctx.params->store, ctx.params->completion));
}

std::vector<Vec2> decode_trajectory(const Tensor& t) {
  std::vector<Vec2> out;
  out.reserve(t.data.size() / 2);
  for (std::size_t i = 0; i + 1 < t.data.size(); i += 2) out.push_back({t.data[i], t.data[i + 1]});
  return out;
}

Var target_feature(ForwardContext& ctx) {
  // taken from the last branch (the one completing the full horizon)
  const auto& sf = ctx.branch_scene.back();
  return ctx.tape->select_row(sf.elements, sf.target_row);
}

std::vector<double> phi_values(const Tape& tape, Var phi) { return tape.value(phi).data; }

}  // namespace

PredictionSet predict_scenario(const Scenario& s, const ModelParams& params,
                               const PredictOptions& opt, GoalFieldDump* dump) {
  const ModelConfig& cfg = params.config;
  if (opt.k < 1) throw std::invalid_argument("predict: k must be >= 1");
  if (cfg.mode == PredictionMode::kLong) {
    if (opt.n < 1) throw std::invalid_argument("predict: n must be >= 1");
    const long max_sets = static_cast<long>(opt.n) * opt.n * opt.n;
    if (opt.k > max_sets) {
      throw std::invalid_argument("predict: k exceeds n^3 = " + std::to_string(max_sets));
    }
  }
  PreparedScene scene = prepare_scene(s, cfg);
  if (scene.goals.empty()) {
    throw std::invalid_argument("predict: scenario " + s.id + " has an empty goal field");
  }
  const RigidTransform to_world = scene.to_local.inverse();

  Tape tape;
  ForwardContext ctx = make_forward(tape, scene, params);
  PredictionSet out;
  out.scenario_id = s.id;

  Var f0 = branch_goal_features(ctx, 0, std::nullopt);
  Var phi0 = branch_phi(ctx, 0, f0);
  const std::vector<double> p0 = phi_values(tape, phi0);
  if (dump) {
    dump->scenario_id = s.id;
    dump->coords.clear();
    dump->phi = p0;
    for (const auto& g : scene.goals) dump->coords.push_back(to_world.apply(g));
  }

  Var tgt = target_feature(ctx);

  if (cfg.mode == PredictionMode::kShort) {
    const std::vector<int> sel = nms_select(scene.goals, p0, opt.k, cfg.nms_radius);
    for (int idx : sel) {
      Prediction pred;
      pred.score = p0[static_cast<std::size_t>(idx)];
      pred.goals = {to_world.apply(scene.goals[static_cast<std::size_t>(idx)])};
      std::array<Var, 1> feats{goal_feature_for_completion(ctx, f0, idx)};
      const Tensor& traj = tape.value(completion_output(ctx, feats, tgt));
      pred.trajectory = decode_trajectory(traj);
      for (auto& p : pred.trajectory) p = to_world.apply(p);
      out.predictions.push_back(std::move(pred));
    }
  } else {
    // autoregressive rollout over the 3s / 5s / 8s branches
    const std::vector<int> sel0 = nms_select(scene.goals, p0, opt.n, cfg.nms_radius);
    struct Step {
      Var features;
      std::vector<double> phi;
      std::vector<int> selected;
    };
    std::vector<Step> step1(sel0.size());
    std::vector<std::vector<Step>> step2(sel0.size());
    for (std::size_t i = 0; i < sel0.size(); ++i) {
      const Vec2 g1 = scene.goals[static_cast<std::size_t>(sel0[i])];
      Step s1;
      s1.features = branch_goal_features(ctx, 1, g1);
      s1.phi = phi_values(tape, branch_phi(ctx, 1, s1.features));
      s1.selected = nms_select(scene.goals, s1.phi, opt.n, cfg.nms_radius);
      step2[i].resize(s1.selected.size());
      for (std::size_t j = 0; j < s1.selected.size(); ++j) {
        const Vec2 g2 = scene.goals[static_cast<std::size_t>(s1.selected[j])];
        Step s2;
        s2.features = branch_goal_features(ctx, 2, g2);
        s2.phi = phi_values(tape, branch_phi(ctx, 2, s2.features));
        s2.selected = nms_select(scene.goals, s2.phi, opt.n, cfg.nms_radius);
        step2[i][j] = std::move(s2);
      }
      step1[i] = std::move(s1);
    }

    struct Triple {
      double score;
      int i, j, l;  // positions within the per-step selections
    };
    std::vector<Triple> triples;
    for (std::size_t i = 0; i < sel0.size(); ++i) {
      const double pa = p0[static_cast<std::size_t>(sel0[i])];
      for (std::size_t j = 0; j < step1[i].selected.size(); ++j) {
        const double pb = step1[i].phi[static_cast<std::size_t>(step1[i].selected[j])];
        const Step& s2 = step2[i][j];
        for (std::size_t l = 0; l < s2.selected.size(); ++l) {
          const double pc = s2.phi[static_cast<std::size_t>(s2.selected[l])];
          triples.push_back({pa * pb * pc, static_cast<int>(i), static_cast<int>(j),
                             static_cast<int>(l)});
        }
      }
    }
    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.i != b.i) return a.i < b.i;
      if (a.j != b.j) return a.j < b.j;
      return a.l < b.l;
    });
    const int keep = std::min<int>(opt.k, static_cast<int>(triples.size()));
    for (int t = 0; t < keep; ++t) {
      const Triple& tr = triples[static_cast<std::size_t>(t)];
      const int a = sel0[static_cast<std::size_t>(tr.i)];
      const Step& s1 = step1[static_cast<std::size_t>(tr.i)];
      const int b = s1.selected[static_cast<std::size_t>(tr.j)];
      const Step& s2 = step2[static_cast<std::size_t>(tr.i)][static_cast<std::size_t>(tr.j)];
      const int c = s2.selected[static_cast<std::size_t>(tr.l)];
      Prediction pred;
      pred.score = tr.score;
      pred.goals = {to_world.apply(scene.goals[static_cast<std::size_t>(a)]),
                    to_world.apply(scene.goals[static_cast<std::size_t>(b)]),
                    to_world.apply(scene.goals[static_cast<std::size_t>(c)])};
      std::array<Var, 3> feats{goal_feature_for_completion(ctx, f0, a),
                               goal_feature_for_completion(ctx, s1.features, b),
                               goal_feature_for_completion(ctx, s2.features, c)};
      const Tensor& traj = tape.value(completion_output(ctx, feats, tgt));
      pred.trajectory = decode_trajectory(traj);
      for (auto& p : pred.trajectory) p = to_world.apply(p);
      out.predictions.push_back(std::move(pred));
    }
  }

  std::stable_sort(out.predictions.begin(), out.predictions.end(),
                   [](const Prediction& a, const Prediction& b) { return a.score > b.score; });
  return out;
}

bool scenario_loss_grad(const PreparedScene& scene, const ModelParams& params,
                        std::vector<double>* grad_sink, TrainStepStats* stats) {
  const ModelConfig& cfg = params.config;
  if (scene.goals.empty()) return false;
  if (scene.future.empty()) return false;
  const int steps = cfg.trajectory_steps();
  if (static_cast<int>(scene.future.size()) < steps) {
    throw std::invalid_argument("train: scenario " + scene.scenario_id + " future shorter than " +
                                std::to_string(steps) + " steps");
  }

  // ground-truth goals per branch; skip when any lies outside the field
  const auto horizons = cfg.branch_horizons();
  std::vector<Vec2> endpoints;
  std::vector<int> psi_index;
  for (double h : horizons) {
    const int idx = static_cast<int>(std::lround(h * 10.0)) - 1;
    if (idx < 0 || idx >= static_cast<int>(scene.future.size())) {
      throw std::invalid_argument("train: branch horizon " + std::to_string(h) +
                                  "s outside scenario future");
    }
    const Vec2 e = scene.future[static_cast<std::size_t>(idx)];
    const int nearest = assign_ground_truth(scene.goals, e);
    if (dist(scene.goals[static_cast<std::size_t>(nearest)], e) > 2.0 * cfg.goal_density) {
      return false;  // endpoint not covered by the sampled field
    }
    endpoints.push_back(e);
    psi_index.push_back(nearest);
  }

  Tape tape;
  ForwardContext ctx = make_forward(tape, scene, params);

  Var total_goal_loss;
  std::vector<Var> completion_feats;
  for (int b = 0; b < cfg.branch_count(); ++b) {
    std::optional<Vec2> condition;
    if (b > 0) condition = endpoints[static_cast<std::size_t>(b - 1)];  // teacher forcing
    Var feats = branch_goal_features(ctx, b, condition);
    Var phi = branch_phi(ctx, b, feats);
    const auto psi = one_hot(static_cast<int>(scene.goals.size()),
                             psi_index[static_cast<std::size_t>(b)]);
    Var loss_b = goal_loss(tape, phi, psi);
    total_goal_loss = b == 0 ? loss_b : tape.add(total_goal_loss, loss_b);
    completion_feats.push_back(
        goal_feature_for_completion(ctx, feats, psi_index[static_cast<std::size_t>(b)]));
  }

  Var tgt = target_feature(ctx);
  Var traj = completion_output(ctx, completion_feats, tgt);
  Tensor target = Tensor::zeros({1, 2 * steps});
  for (int t = 0; t < steps; ++t) {
    target.data[static_cast<std::size_t>(2 * t)] = scene.future[static_cast<std::size_t>(t)].x;
    target.data[static_cast<std::size_t>(2 * t + 1)] = scene.future[static_cast<std::size_t>(t)].y;
  }
  Var comp_loss = tape.smooth_l1_loss(traj, std::move(target));
  Var total = tape.add(total_goal_loss, comp_loss);

  if (grad_sink) {
    tape.backward(total, *grad_sink);
  }
  if (stats) {
    stats->goal_loss += tape.value(total_goal_loss).scalar_value();
    stats->completion_loss += tape.value(comp_loss).scalar_value();
    stats->loss += tape.value(total).scalar_value();
    stats->used += 1;
  }
  return true;
}

TrainStepStats train_step(std::span<const PreparedScene* const> batch, ModelParams& params,
                          AdamState& adam, double lr) {
  TrainStepStats stats;
  std::vector<double> grads(params.store.size(), 0.0);
  for (const PreparedScene* scene : batch) {
    if (!scenario_loss_grad(*scene, params, &grads, &stats)) stats.skipped += 1;
  }
  if (stats.used == 0) return stats;
  const double inv = 1.0 / static_cast<double>(stats.used);
  for (double& g : grads) g *= inv;
  adam_step(params.store.values(), grads, adam, lr);
  stats.loss *= inv;
  stats.goal_loss *= inv;
  stats.completion_loss *= inv;
  return stats;
}

}  // namespace densepath
