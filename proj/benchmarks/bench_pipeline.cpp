#include <benchmark/benchmark.h>

#include "densepath/predictor.hpp"
#include "densepath/rng.hpp"
#include "densepath/synth.hpp"

using namespace densepath;

namespace {

GenConfig fork_gen() {
  GenConfig g;
  g.seed = 9;
  g.w_straight = 0.0;
  g.w_fork_left = 0.5;
  g.w_fork_right = 0.5;
  g.w_uturn = 0.0;
  return g;
}

void bm_dense_goal_sampling(benchmark::State& state) {
  Scenario s = generate_one(fork_gen(), 0);
  const MapData cropped = crop_submap(normalize_scene(s).scene.map);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_dense_goals(cropped));
  }
}
BENCHMARK(bm_dense_goal_sampling);

void bm_nms(benchmark::State& state) {
  Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  std::vector<Vec2> coords;
  std::vector<double> phi;
  for (int i = 0; i < n; ++i) {
    coords.push_back({rng.uniform(-60, 60), rng.uniform(-60, 60)});
    phi.push_back(rng.uniform(0, 1));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(nms_select(coords, phi, 6, 2.0));
  }
}
BENCHMARK(bm_nms)->Arg(500)->Arg(2000);

void bm_prepare_scene(benchmark::State& state) {
  Scenario s = generate_one(fork_gen(), 1);
  ModelConfig mc;
  mc.hidden = 64;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prepare_scene(s, mc));
  }
}
BENCHMARK(bm_prepare_scene);

void bm_train_step(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  Scenario s = generate_one(fork_gen(), 2);
  ModelConfig mc;
  mc.hidden = hidden;
  ModelParams params = ModelParams::create(mc, 1);
  PreparedScene scene = prepare_scene(s, mc);
  AdamState adam = AdamState::init(params.store.size(), {});
  std::vector<const PreparedScene*> batch{&scene};
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_step(batch, params, adam, 1e-4));
  }
}
BENCHMARK(bm_train_step)->Arg(32)->Arg(64);

void bm_predict_scenario(benchmark::State& state) {
  Scenario s = generate_one(fork_gen(), 3);
  ModelConfig mc;
  mc.hidden = 64;
  ModelParams params = ModelParams::create(mc, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_scenario(s, params, {6, 6}));
  }
}
BENCHMARK(bm_predict_scenario);

}  // namespace

BENCHMARK_MAIN();
