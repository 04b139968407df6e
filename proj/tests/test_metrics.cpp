#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "densepath/metrics.hpp"
#include "densepath/rng.hpp"
#include "densepath/scene.hpp"

using namespace densepath;

namespace {

std::vector<Vec2> random_traj(Rng& rng, int t) {
  std::vector<Vec2> out;
  for (int i = 0; i < t; ++i) out.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
  return out;
}

}  // namespace

TEST_CASE("min_fde basics") {
  std::vector<Vec2> gt{{0, 0}, {0, 0}};
  CHECK(min_fde({gt}, gt) == 0.0);
  CHECK(min_fde({{{5, 5}, {1, 0}}, {{5, 5}, {0, 3}}}, gt) == doctest::Approx(1.0));
  CHECK_THROWS_AS(min_fde({}, gt), std::invalid_argument);
  CHECK_THROWS_AS(min_fde({{{0, 0}}}, gt), std::invalid_argument);  // horizon mismatch
}

TEST_CASE("min_ade basics") {
  std::vector<Vec2> gt{{0, 0}, {1, 0}, {2, 0}};
  CHECK(min_ade({gt}, gt) == 0.0);
  std::vector<Vec2> off{{0, 1}, {1, 1}, {2, 1}};  // constant 1 m offset
  CHECK(min_ade({off}, gt) == doctest::Approx(1.0));
}

TEST_CASE("metrics match an exhaustive oracle on random sets") {
  Rng rng(50);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + rng.uniform_int(6);
    const int t = 2 + rng.uniform_int(20);
    std::vector<std::vector<Vec2>> preds;
    for (int i = 0; i < k; ++i) preds.push_back(random_traj(rng, t));
    const auto gt = random_traj(rng, t);

    double fde = 1e18, ade = 1e18;
    for (const auto& p : preds) {
      fde = std::min(fde, dist(p.back(), gt.back()));
      double s = 0.0;
      for (int i = 0; i < t; ++i) s += dist(p[static_cast<std::size_t>(i)], gt[static_cast<std::size_t>(i)]);
      ade = std::min(ade, s / t);
    }
    CHECK(min_fde(preds, gt) == doctest::Approx(fde).epsilon(1e-12));
    CHECK(min_ade(preds, gt) == doctest::Approx(ade).epsilon(1e-12));
  }
}

TEST_CASE("metrics are non-increasing in K") {
  Rng rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = 2 + rng.uniform_int(10);
    const auto gt = random_traj(rng, t);
    std::vector<std::vector<Vec2>> preds;
    double prev_fde = 1e18, prev_ade = 1e18;
    const int k = 2 + rng.uniform_int(5);
    for (int i = 0; i < k; ++i) {
      preds.push_back(random_traj(rng, t));
      const double fde = min_fde(preds, gt);
      const double ade = min_ade(preds, gt);
      CHECK(fde <= prev_fde);
      CHECK(ade <= prev_ade);
      prev_fde = fde;
      prev_ade = ade;
    }
  }
}

TEST_CASE("metrics are invariant under a joint rigid transform") {
  Rng rng(52);
  const auto gt = random_traj(rng, 12);
  std::vector<std::vector<Vec2>> preds{random_traj(rng, 12), random_traj(rng, 12)};
  const double fde = min_fde(preds, gt);
  const double ade = min_ade(preds, gt);

  RigidTransform tf = RigidTransform::about({3.0, -2.0}, 1.1);
  auto apply = [&](std::vector<Vec2> pts) {
    for (auto& p : pts) p = tf.apply(p);
    return pts;
  };
  std::vector<std::vector<Vec2>> tp{apply(preds[0]), apply(preds[1])};
  CHECK(min_fde(tp, apply(gt)) == doctest::Approx(fde).epsilon(1e-9));
  CHECK(min_ade(tp, apply(gt)) == doctest::Approx(ade).epsilon(1e-9));
}

TEST_CASE("miss_rate counts scenarios beyond the threshold") {
  std::vector<Vec2> gt{{0, 0}};
  std::vector<std::pair<std::vector<std::vector<Vec2>>, std::vector<Vec2>>> batch;
  batch.push_back({{{{0.5, 0}}}, gt});  // hit
  batch.push_back({{{{5.0, 0}}}, gt});  // miss
  CHECK(miss_rate(batch) == doctest::Approx(0.5));
  batch.pop_back();
  CHECK(miss_rate(batch) == 0.0);
  CHECK_THROWS_AS(miss_rate({}), std::invalid_argument);

  // random batch matches a scalar recount
  Rng rng(53);
  batch.clear();
  int misses = 0;
  for (int i = 0; i < 100; ++i) {
    auto g = random_traj(rng, 5);
    std::vector<std::vector<Vec2>> preds{random_traj(rng, 5)};
    if (min_fde(preds, g) > 2.0) ++misses;
    batch.push_back({preds, g});
  }
  CHECK(miss_rate(batch) == doctest::Approx(misses / 100.0));
}

TEST_CASE("aggregate and report") {
  std::vector<ScenarioMetrics> per{{"a", 1.0, 2.0, false}, {"b", 3.0, 6.0, true}};
  MetricReport r = aggregate_metrics(per);
  CHECK(r.count == 2);
  CHECK(r.min_ade == doctest::Approx(2.0));
  CHECK(r.min_fde == doctest::Approx(4.0));
  CHECK(r.miss_rate == doctest::Approx(0.5));
  const std::string j = report_to_json(r);
  CHECK(j.find("\"min_fde\"") != std::string::npos);
  CHECK(j.find("per_scenario") != std::string::npos);
}
