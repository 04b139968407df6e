#include <benchmark/benchmark.h>

#include "densepath/rng.hpp"
#include "densepath/tape.hpp"

using namespace densepath;

namespace {

Tensor random_tensor(int r, int c, Rng& rng) {
  Tensor t = Tensor::zeros({r, c});
  for (double& v : t.data) v = rng.uniform(-1, 1);
  return t;
}

void bm_matmul(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  Tensor a = random_tensor(n, n, rng);
  Tensor b = random_tensor(n, n, rng);
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(tape.value(tape.matmul(tape.constant(a), tape.constant(b))));
  }
  state.SetItemsProcessed(state.iterations() * 2ll * n * n * n);
}
BENCHMARK(bm_matmul)->Arg(32)->Arg(64)->Arg(128);

void bm_attention_forward(benchmark::State& state) {
  const int n_goals = static_cast<int>(state.range(0));
  Rng rng(2);
  Tensor q = random_tensor(n_goals, 64, rng);
  Tensor k = random_tensor(48, 64, rng);
  Tensor v = random_tensor(48, 64, rng);
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(
        tape.value(tape.attention(tape.constant(q), tape.constant(k), tape.constant(v))));
  }
}
BENCHMARK(bm_attention_forward)->Arg(256)->Arg(1024);

void bm_attention_backward(benchmark::State& state) {
  const int n_goals = static_cast<int>(state.range(0));
  Rng rng(3);
  Tensor q = random_tensor(n_goals, 64, rng);
  Tensor k = random_tensor(48, 64, rng);
  Tensor v = random_tensor(48, 64, rng);
  for (auto _ : state) {
    Tape tape;
    Var loss = tape.sum_all(
        tape.attention(tape.input(q), tape.input(k), tape.input(v)));
    tape.backward(loss);
    benchmark::DoNotOptimize(tape.value(loss));
  }
}
BENCHMARK(bm_attention_backward)->Arg(256)->Arg(1024);

}  // namespace
