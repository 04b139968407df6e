// Acceptance suite: runs the eight project criteria and prints one
// [PASS]/[FAIL] line per criterion. Exit code is the number of failures.
// Usage: densepath_acceptance [criterion ...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "densepath/prediction_io.hpp"
#include "densepath/scenario_io.hpp"
#include "densepath/svg.hpp"
#include "densepath/synth.hpp"
#include "densepath/trainer.hpp"
#include "oracles.hpp"

using namespace densepath;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Tensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.data) v = rng.uniform(-scale, scale);
  return t;
}

// A compact hand-built fork scenario for gradient and rollout checks: keeps
// the goal field small so finite differences stay fast.
Scenario mini_scenario() {
  Scenario s;
  s.id = "mini";
  s.horizon_s = 8.0;
  s.target_id = 0;
  Lane a;
  a.id = 0;
  a.width = 3.0;
  for (int i = 0; i <= 24; ++i) a.points.push_back({0.0, static_cast<double>(i - 4)});
  Lane b;
  b.id = 1;
  b.width = 3.0;
  for (int i = 0; i <= 14; ++i) {
    const double t = i / 14.0;
    b.points.push_back({-8.0 * t, 8.0 + 9.0 * t});
  }
  s.map.lanes = {a, b};
  AgentTrack target;
  target.id = 0;
  target.type = AgentType::kVehicle;
  for (int i = 0; i <= 10; ++i) {
    target.observed.push_back({-1.0 + 0.1 * i, 0.0, -1.2 + 0.12 * i, std::nullopt});
  }
  s.tracks.push_back(target);
  AgentTrack other;
  other.id = 1;
  other.type = AgentType::kCyclist;
  other.observed.push_back({-0.5, 1.5, 3.0, 0.3});
  other.observed.push_back({0.0, 1.5, 3.8, 0.3});
  s.tracks.push_back(other);
  for (int i = 1; i <= 80; ++i) {
    const double t = 0.1 * i;
    s.future.push_back({0.0, 0.4 * t});  // 0.4 m/s ahead, endpoint (0, 3.2)
  }
  return s;
}

// ---- criterion 1: gradient suite ----

Outcome criterion_gradients() {
  Outcome out;
  const double t0 = now_s();
  Rng rng(1);

  auto fd_check = [&](const char* name, double tol,
                      const std::function<Var(Tape&, Var)>& build, Shape in_shape) {
    Tensor x = random_tensor(in_shape, rng);
    Tape tape;
    Var vx = tape.input(x);
    Var loss = build(tape, vx);
    tape.backward(loss);
    const auto analytic = tape.grad_of(vx);
    auto value = [&] {
      Tape t;
      return t.value(build(t, t.constant(x))).scalar_value();
    };
    const double err = oracles::max_grad_rel_err(x.data, analytic, value);
    out.require(err < tol, std::string(name) + " rel-err " + fmt(err, 8));
  };

  Rng wrng(2);
  Tensor w34 = random_tensor({3, 4}, wrng);
  Tensor w43 = random_tensor({4, 3}, wrng);
  fd_check("matmul", 1e-6, [&](Tape& t, Var x) { return t.sum_all(t.matmul(x, t.constant(w43))); },
           {3, 4});
  fd_check("transpose", 1e-6,
           [&](Tape& t, Var x) { return t.sum_all(t.matmul(t.transpose(x), t.constant(w34))); },
           {3, 4});
  fd_check("add+scale", 1e-6,
           [&](Tape& t, Var x) { return t.sum_all(t.scale(t.add(x, t.constant(w34)), 1.7)); },
           {3, 4});
  fd_check("add_row_vector", 1e-6,
           [&](Tape& t, Var x) {
             return t.sum_all(t.add_row_vector(t.constant(w34), x));
           },
           {1, 4});
  fd_check("relu", 1e-5,
           [&](Tape& t, Var x) { return t.sum_all(t.relu(t.matmul(x, t.constant(w43)))); }, {3, 4});
  fd_check("softmax rows", 1e-5,
           [&](Tape& t, Var x) {
             return t.sum_all(t.matmul(t.softmax(x, 1), t.constant(w43)));
           },
           {3, 4});
  fd_check("softmax cols", 1e-5,
           [&](Tape& t, Var x) {
             return t.sum_all(t.matmul(t.softmax(x, 0), t.constant(w43)));
           },
           {3, 4});
  fd_check("max_pool_rows", 1e-5,
           [&](Tape& t, Var x) {
             return t.sum_all(t.matmul(t.max_pool_rows(x), t.constant(w43)));
           },
           {3, 4});
  fd_check("broadcast+concat", 1e-5,
           [&](Tape& t, Var x) {
             Var pooled = t.max_pool_rows(x);
             std::array<Var, 2> parts{x, t.broadcast_rows(pooled, 3)};
             return t.sum_all(t.concat_cols(parts));
           },
           {3, 4});
  fd_check("select_row+concat_rows", 1e-5,
           [&](Tape& t, Var x) {
             std::array<Var, 2> rows{t.select_row(x, 1), t.select_row(x, 2)};
             return t.sum_all(t.matmul(t.concat_rows(rows), t.constant(w43)));
           },
           {3, 4});
  {
    Tensor target = random_tensor({2, 6}, wrng, 2.0);
    fd_check("smooth_l1_loss", 1e-5,
             [&](Tape& t, Var x) { return t.smooth_l1_loss(x, target); }, {2, 6});
  }
  {
    // probabilities via softmax keep the bce inputs inside (0, 1)
    Tensor psi = Tensor::column(one_hot(5, 2));
    fd_check("bce_loss", 1e-5,
             [&](Tape& t, Var x) { return t.bce_loss(t.softmax(x, 0), psi); }, {5, 1});
  }
  {
    Tensor k = random_tensor({4, 5}, wrng);
    Tensor v = random_tensor({4, 5}, wrng);
    fd_check("attention", 1e-5,
             [&](Tape& t, Var x) {
               return t.sum_all(t.attention(x, t.constant(k), t.constant(v)));
             },
             {2, 5});
  }

  // end-to-end: full training loss against finite differences on every weight
  for (auto mode : {PredictionMode::kShort, PredictionMode::kLong}) {
    ModelConfig mc;
    mc.hidden = 8;
    mc.subgraph_depth = 2;
    mc.mode = mode;
    ModelParams params = ModelParams::create(mc, 3);
    PreparedScene scene = prepare_scene(mini_scenario(), mc);
    std::vector<double> analytic(params.store.size(), 0.0);
    TrainStepStats st;
    const bool used = scenario_loss_grad(scene, params, &analytic, &st);
    out.require(used, "end-to-end scenario unexpectedly skipped");
    auto value = [&] {
      TrainStepStats s2;
      scenario_loss_grad(scene, params, nullptr, &s2);
      return s2.loss;
    };
    // h = 1e-5: the full loss sums hundreds of terms, so 1e-6 steps drown the
    // smallest weight gradients in float64 cancellation noise
    const double err = oracles::max_grad_rel_err(params.store.values(), analytic, value, 1e-5);
    out.require(err < 1e-5, std::string("end-to-end (") + to_string(mode) + ") rel-err " + fmt(err, 8));
    out.note(std::string("end-to-end ") + to_string(mode) + " rel-err " + fmt(err, 8) + " over " +
             std::to_string(params.store.size()) + " weights");
  }

  const double elapsed = now_s() - t0;
  out.require(elapsed < 60.0, "runtime " + fmt(elapsed, 1) + "s >= 60s");
  out.note("runtime " + fmt(elapsed, 1) + "s");
  return out;
}

// ---- criterion 2: oracle equivalence ----

Outcome criterion_oracles() {
  Outcome out;
  Rng rng(7);

  int nms_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + rng.uniform_int(200);
    std::vector<Vec2> coords;
    std::vector<double> phi;
    for (int i = 0; i < n; ++i) {
      coords.push_back({rng.uniform(-30, 30), rng.uniform(-30, 30)});
      phi.push_back(rng.uniform(0, 1));
    }
    const int k = 1 + rng.uniform_int(8);
    const double radius = rng.uniform(0.5, 6.0);
    if (nms_select(coords, phi, k, radius) != oracles::nms(coords, phi, k, radius)) ++nms_mismatch;
  }
  out.require(nms_mismatch == 0, std::to_string(nms_mismatch) + " NMS mismatches");

  int nn_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + rng.uniform_int(100);
    std::vector<Vec2> coords;
    for (int i = 0; i < n; ++i) coords.push_back({rng.uniform(-40, 40), rng.uniform(-40, 40)});
    const Vec2 p{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    if (assign_ground_truth(coords, p) != oracles::nearest(coords, p)) ++nn_mismatch;
  }
  out.require(nn_mismatch == 0, std::to_string(nn_mismatch) + " nearest-goal mismatches");

  // autoregressive top-K against the full N^3 enumeration
  ModelConfig mc;
  mc.hidden = 8;
  mc.subgraph_depth = 2;
  mc.mode = PredictionMode::kLong;
  ModelParams params = ModelParams::create(mc, 11);
  const Scenario s = mini_scenario();
  for (int n = 1; n <= 4; ++n) {
    PredictionSet full = predict_scenario(s, params, {n * n * n, n});
    out.require(static_cast<int>(full.predictions.size()) == n * n * n,
                "N=" + std::to_string(n) + " enumerated " +
                    std::to_string(full.predictions.size()) + " of " + std::to_string(n * n * n));
    std::vector<double> scores;
    for (const auto& p : full.predictions) scores.push_back(p.score);
    std::vector<double> sorted = scores;
    std::sort(sorted.rbegin(), sorted.rend());
    out.require(scores == sorted, "N=" + std::to_string(n) + " scores not sorted descending");
    const int k = std::min(5, n * n * n);
    PredictionSet top = predict_scenario(s, params, {k, n});
    bool prefix = static_cast<int>(top.predictions.size()) == k;
    for (int i = 0; prefix && i < k; ++i) {
      prefix = top.predictions[static_cast<std::size_t>(i)].score ==
                   full.predictions[static_cast<std::size_t>(i)].score &&
               top.predictions[static_cast<std::size_t>(i)].goals ==
                   full.predictions[static_cast<std::size_t>(i)].goals;
    }
    out.require(prefix, "N=" + std::to_string(n) + " top-K differs from enumeration prefix");
  }
  return out;
}

// ---- criterion 3: normalization / geometry ----

Outcome criterion_geometry() {
  Outcome out;

  // sum(phi) = 1 +- 1e-9 on random inputs and on a real scenario
  Rng rng(13);
  ParamStore ps;
  Mlp2Ref scorer = register_mlp2(ps, "score", 6, 6, 1, rng);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng.uniform_int(400);
    Tape tape;
    Var feats = tape.constant(random_tensor({n, 6}, rng, 2.0));
    const auto& phi = tape.value(score_goals(tape, feats, scorer, ps));
    double sum = 0.0;
    for (double p : phi.data) sum += p;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  out.require(worst <= 1e-9, "sum(phi) deviates by " + fmt(worst, 12));
  out.note("max |sum(phi)-1| = " + fmt(worst, 12));

  // sampled goals: corridor oracle + submap bound on random maps and synth scenes
  int bad_goal = 0, mismatch = 0;
  for (int trial = 0; trial < 15; ++trial) {
    MapData m;
    const int n_lanes = 1 + rng.uniform_int(4);
    for (int l = 0; l < n_lanes; ++l) {
      Lane lane;
      lane.id = l;
      lane.width = rng.uniform(2.0, 6.0);
      Vec2 p{rng.uniform(-40, 40), rng.uniform(-10, 70)};
      double ang = rng.uniform(0.0, 6.28);
      const int np = 10 + rng.uniform_int(40);
      for (int i = 0; i < np; ++i) {
        lane.points.push_back(p);
        ang += rng.uniform(-0.1, 0.1);
        p = p + Vec2{std::cos(ang), std::sin(ang)};
      }
      m.lanes.push_back(std::move(lane));
    }
    auto goals = sample_dense_goals(m);
    std::vector<std::pair<std::vector<Vec2>, double>> lanes;
    for (const auto& lane : m.lanes) lanes.emplace_back(lane.points, lane.width);
    const auto expect = oracles::grid_corridor_points(lanes, 1.0, kSubmapCenter, kSubmapRadius);
    if (goals.size() != expect.size()) ++mismatch;
    for (const auto& g : goals) {
      if (dist(g, kSubmapCenter) > kSubmapRadius) ++bad_goal;
      double best = 1e18;
      for (const auto& lane : m.lanes) {
        best = std::min(best, point_polyline_distance(g, lane.points) - lane.width / 2.0);
      }
      if (best > 1e-12) ++bad_goal;
    }
  }
  GenConfig g;
  g.seed = 5;
  g.n_scenarios = 10;
  for (const auto& s : generate(g)) {
    const auto norm = normalize_scene(s);
    const auto cropped = crop_submap(norm.scene.map);
    for (const auto& goal : sample_dense_goals(cropped)) {
      if (dist(goal, kSubmapCenter) > kSubmapRadius) ++bad_goal;
      double best = 1e18;
      for (const auto& lane : cropped.lanes) {
        best = std::min(best, point_polyline_distance(goal, lane.points) - lane.width / 2.0);
      }
      if (best > 1e-12) ++bad_goal;
    }
  }
  out.require(mismatch == 0, std::to_string(mismatch) + " corridor-oracle set mismatches");
  out.require(bad_goal == 0, std::to_string(bad_goal) + " goals violate corridor/submap bounds");

  // 50-point lane -> 5 segments
  Lane lane;
  lane.id = 0;
  for (int i = 0; i < 50; ++i) lane.points.push_back({0.0, static_cast<double>(i)});
  const auto segs = segment_lanes({lane});
  out.require(segs.size() == 5, "50-point lane produced " + std::to_string(segs.size()) + " segments");
  return out;
}

// ---- criterion 4: teacher-forcing separation ----

Outcome criterion_teacher_forcing() {
  Outcome out;
  const Scenario s = mini_scenario();
  for (auto mode : {PredictionMode::kShort, PredictionMode::kLong}) {
    ModelConfig mc;
    mc.hidden = 8;
    mc.subgraph_depth = 2;
    mc.mode = mode;
    ModelParams params = ModelParams::create(mc, 17);
    PreparedScene scene = prepare_scene(s, mc);

    Tape tape;
    Var stack = subgraph_stack(tape, scene.polylines, params.subgraph, params.store);
    std::vector<Var> feats;
    SceneFeatures last_sf;
    for (int b = 0; b < mc.branch_count(); ++b) {
      const BranchParams& br = params.branches[static_cast<std::size_t>(b)];
      SceneFeatures sf = make_scene_features(tape, stack, scene.polylines, scene.target_id,
                                             br.global_graph, params.store);
      Var fb = encode_goals(tape, scene.goals, sf.elements, br.goal_mlp, br.goal_attn, params.store);
      const double h = mc.branch_horizons()[static_cast<std::size_t>(b)];
      const int idx = static_cast<int>(std::lround(h * 10.0)) - 1;
      feats.push_back(tape.select_row(
          fb, assign_ground_truth(scene.goals, scene.future[static_cast<std::size_t>(idx)])));
      last_sf = sf;
    }
    feats.push_back(tape.select_row(last_sf.elements, last_sf.target_row));
    Var pred = tape.mlp2(tape.concat_cols(feats), bind_mlp2(tape, params.store, params.completion));
    const int steps = mc.trajectory_steps();
    Tensor target = Tensor::zeros({1, 2 * steps});
    for (int t = 0; t < steps; ++t) {
      target.data[static_cast<std::size_t>(2 * t)] = scene.future[static_cast<std::size_t>(t)].x;
      target.data[static_cast<std::size_t>(2 * t) + 1] = scene.future[static_cast<std::size_t>(t)].y;
    }
    std::vector<double> grads(params.store.size(), 0.0);
    tape.backward(tape.smooth_l1_loss(pred, std::move(target)), grads);

    double scorer_abs = 0.0;
    for (int b = 0; b < mc.branch_count(); ++b) {
      for (const char* part : {".score.w1", ".score.b1", ".score.w2", ".score.b2"}) {
        const auto& e = params.store.entry(params.store.index_of("b" + std::to_string(b) + part));
        for (std::size_t i = 0; i < e.size; ++i) scorer_abs += std::abs(grads[e.offset + i]);
      }
    }
    out.require(scorer_abs == 0.0,
                std::string(to_string(mode)) + ": completion loss leaks into the scorer");
  }
  return out;
}

// ---- criterion 5: desk-scale convergence ----

Outcome criterion_convergence() {
  Outcome out;
  const double t0 = now_s();

  // fork scenarios: identical histories, branch chosen per scenario. The
  // speed band keeps the endpoint spread within what K=6 NMS goals can
  // cover, which is what desk-scale optimization can reach in 16 epochs.
  GenConfig g;
  g.seed = 1001;
  g.n_scenarios = 1200;
  g.w_straight = 0.0;
  g.w_fork_left = 0.5;
  g.w_fork_right = 0.5;
  g.w_uturn = 0.0;
  g.speed_min = 7.2;
  g.speed_max = 8.0;
  auto all = generate(g);
  std::vector<Scenario> train_set(all.begin(), all.begin() + 1000);
  std::vector<Scenario> held_out(all.begin() + 1000, all.end());

  // batch 1 gives the optimizer 16k steps on 1k scenarios; the full-size
  // batch-64 recipe would take only ~160 steps here
  TrainConfig cfg;
  cfg.hidden = 64;
  cfg.epochs = 16;
  cfg.batch_size = 1;
  cfg.lr = 3e-3;
  cfg.seed = 2001;

  std::vector<double> epoch_fde;
  EvalConfig ec;
  ec.k = 6;
  TrainResult result = train(train_set, cfg, nullptr, [&](int, const ModelParams& p) {
    epoch_fde.push_back(evaluate_model(p, held_out, ec).min_fde);
  });

  const MetricReport final_report = evaluate_model(result.params, held_out, ec);
  out.note("held-out miss rate " + fmt(final_report.miss_rate, 4) + ", minFDE " +
           fmt(final_report.min_fde, 3) + ", minADE " + fmt(final_report.min_ade, 3));
  out.require(final_report.miss_rate <= 0.15,
              "miss rate " + fmt(final_report.miss_rate, 4) + " > 0.15");

  // training loss drops by at least half over the run
  out.require(result.epochs.back().loss <= 0.5 * result.epochs.front().loss,
              "train loss fell only " + fmt(result.epochs.front().loss, 1) + " -> " +
                  fmt(result.epochs.back().loss, 1));

  // and the converged model beats an untrained one
  const ModelParams fresh = ModelParams::create(result.params.config, cfg.seed + 999);
  const MetricReport untrained = evaluate_model(fresh, held_out, ec);
  out.require(final_report.min_fde < untrained.min_fde,
              "trained minFDE " + fmt(final_report.min_fde, 3) + " not below untrained " +
                  fmt(untrained.min_fde, 3));

  // epoch-mean minFDE per learning-rate segment must decrease across boundaries
  std::vector<double> segment_means;
  for (std::size_t start = 0; start < epoch_fde.size();
       start += static_cast<std::size_t>(cfg.lr_decay_every)) {
    const std::size_t end =
        std::min(epoch_fde.size(), start + static_cast<std::size_t>(cfg.lr_decay_every));
    segment_means.push_back(std::accumulate(epoch_fde.begin() + static_cast<std::ptrdiff_t>(start),
                                            epoch_fde.begin() + static_cast<std::ptrdiff_t>(end), 0.0) /
                            static_cast<double>(end - start));
  }
  std::string seg = "lr-segment minFDE means:";
  for (double m : segment_means) seg += " " + fmt(m, 3);
  out.note(seg);
  for (std::size_t i = 1; i < segment_means.size(); ++i) {
    out.require(segment_means[i] < segment_means[i - 1],
                "segment mean " + std::to_string(i) + " did not decrease");
  }

  const double elapsed = now_s() - t0;
  out.note("runtime " + fmt(elapsed, 1) + "s");
  out.require(elapsed < 900.0, "runtime " + fmt(elapsed, 1) + "s >= 900s");
  return out;
}

// ---- criterion 6: directional dense-vs-sparse ablation ----

Outcome criterion_ablation() {
  Outcome out;
  // strong lateral endpoint noise against the lane-width clamp: endpoints
  // often sit ~1.7 m off the centerline, beyond what snapped-centerline
  // anchors can reach at the 2 m miss threshold. Near-constant speed keeps
  // both arms in the regime this training budget can converge.
  GenConfig g;
  g.seed = 3001;
  g.n_scenarios = 550;
  g.w_straight = 0.0;
  g.w_fork_left = 0.5;
  g.w_fork_right = 0.5;
  g.w_uturn = 0.0;
  g.noise_sigma = 1.5;
  g.speed_min = 7.4;
  g.speed_max = 7.8;
  auto all = generate(g);
  std::vector<Scenario> train_set(all.begin(), all.begin() + 400);
  std::vector<Scenario> held_out(all.begin() + 400, all.end());

  auto run_arm = [&](GoalMode goal_mode, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.hidden = 32;
    cfg.epochs = 30;
    cfg.batch_size = 1;
    cfg.lr = 3e-3;
    cfg.seed = seed;
    cfg.goal_mode = goal_mode;
    TrainResult r = train(train_set, cfg);
    EvalConfig ec;
    ec.k = 6;
    return evaluate_model(r.params, held_out, ec);
  };

  double miss_dense = 0.0, miss_sparse = 0.0, fde_dense = 0.0, fde_sparse = 0.0;
  const std::vector<std::uint64_t> seeds{11, 12, 13};
  for (std::uint64_t seed : seeds) {
    const MetricReport d = run_arm(GoalMode::kDense, seed);
    const MetricReport s = run_arm(GoalMode::kSparse, seed);
    miss_dense += d.miss_rate;
    miss_sparse += s.miss_rate;
    fde_dense += d.min_fde;
    fde_sparse += s.min_fde;
  }
  const double n = static_cast<double>(seeds.size());
  miss_dense /= n;
  miss_sparse /= n;
  fde_dense /= n;
  fde_sparse /= n;

  out.note("dense: miss " + fmt(miss_dense, 4) + ", minFDE " + fmt(fde_dense, 3) +
           " | sparse: miss " + fmt(miss_sparse, 4) + ", minFDE " + fmt(fde_sparse, 3) +
           " (reference direction: 8.2% < 9.5%, 1.28 < 1.35)");
  out.require(miss_dense <= miss_sparse, "dense mean miss rate above sparse baseline");
  out.require(fde_dense <= fde_sparse, "dense mean minFDE above sparse baseline");
  return out;
}

// ---- criterion 7: determinism ----

Outcome criterion_determinism() {
  Outcome out;
  GenConfig g;
  g.seed = 4001;
  g.n_scenarios = 16;
  auto data = generate(g);
  {
    auto again = generate(g);
    std::ostringstream a, b;
    for (const auto& s : data) write_scenario(a, s);
    for (const auto& s : again) write_scenario(b, s);
    out.require(a.str() == b.str(), "generator stream not reproducible");
  }

  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.subgraph_depth = 2;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  cfg.seed = 4002;
  TrainResult r1 = train(data, cfg);
  TrainResult r2 = train(data, cfg);
  const std::string p1 = tmp_path("densepath_acc_det1.ckpt");
  const std::string p2 = tmp_path("densepath_acc_det2.ckpt");
  save_model(p1, r1.params, &r1.adam);
  save_model(p2, r2.params, &r2.adam);
  out.require(slurp(p1) == slurp(p2), "checkpoints differ between identical runs");

  auto predict_all = [&](const ModelParams& params) {
    std::ostringstream os;
    GoalFieldDump dump;
    for (const auto& s : data) {
      os << prediction_to_json_line(predict_scenario(s, params, {4, 4}, &dump)) << '\n';
      write_goal_dump(os, dump);
    }
    return os.str();
  };
  const std::string preds1 = predict_all(r1.params);
  const std::string preds2 = predict_all(r2.params);
  out.require(preds1 == preds2, "prediction bytes differ between identical runs");

  GoalFieldDump dump;
  PredictionSet ps = predict_scenario(data[0], r1.params, {4, 4}, &dump);
  const std::string svg1 = render_scene_svg(data[0], &dump, &ps);
  const std::string svg2 = render_scene_svg(data[0], &dump, &ps);
  out.require(svg1 == svg2, "SVG bytes differ between identical renders");

  std::remove(p1.c_str());
  std::remove(p2.c_str());
  return out;
}

// ---- criterion 8: metric monotonicity in K ----

Outcome criterion_metric_monotonicity() {
  Outcome out;
  Rng rng(8001);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = 2 + rng.uniform_int(16);
    std::vector<Vec2> gt;
    for (int i = 0; i < t; ++i) gt.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
    std::vector<std::vector<Vec2>> preds;
    double prev_fde = 1e18, prev_ade = 1e18;
    const int k = 2 + rng.uniform_int(6);
    for (int i = 0; i < k; ++i) {
      std::vector<Vec2> traj;
      for (int j = 0; j < t; ++j) traj.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
      preds.push_back(std::move(traj));
      const double fde = min_fde(preds, gt);
      const double ade = min_ade(preds, gt);
      if (fde > prev_fde + 1e-15 || ade > prev_ade + 1e-15) ++violations;
      prev_fde = fde;
      prev_ade = ade;
    }
  }
  out.require(violations == 0, std::to_string(violations) + " monotonicity violations");
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "gradient suite vs central finite differences", criterion_gradients},
      {2, "oracle equivalence (NMS, rollout top-K, nearest goal)", criterion_oracles},
      {3, "normalization and geometry invariants", criterion_geometry},
      {4, "teacher-forcing separation", criterion_teacher_forcing},
      {5, "desk-scale convergence on fork scenarios", criterion_convergence},
      {6, "directional dense-vs-sparse ablation", criterion_ablation},
      {7, "bit-exact determinism", criterion_determinism},
      {8, "metric monotonicity in K", criterion_metric_monotonicity},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name;
    if (!o.detail.empty()) std::cout << " | " << o.detail;
    std::cout << std::endl;
    if (!o.pass) ++failures;
  }
  return failures;
}
