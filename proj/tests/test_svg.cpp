#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "densepath/predictor.hpp"
#include "densepath/svg.hpp"
#include "densepath/synth.hpp"
#include "densepath/trainer.hpp"

using namespace densepath;

#ifndef DENSEPATH_TESTS_DIR
#define DENSEPATH_TESTS_DIR "."
#endif

namespace {

// fixed fork scenario + a small deterministic model
struct VizFixture {
  Scenario scenario;
  GoalFieldDump goals;
  PredictionSet preds;

  VizFixture() {
    GenConfig g;
    g.seed = 2024;
    g.w_straight = 0.0;
    g.w_fork_left = 1.0;
    g.w_fork_right = 0.0;
    g.w_uturn = 0.0;
    g.noise_sigma = 0.0;
    g.parking_prob = 0.0;
    g.max_background = 0;
    scenario = generate_one(g, 0);
    ModelConfig mc;
    mc.hidden = 8;
    mc.subgraph_depth = 2;
    ModelParams params = ModelParams::create(mc, 1);
    preds = predict_scenario(scenario, params, {3, 3}, &goals);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("svg output is deterministic") {
  VizFixture fx;
  const std::string a = render_scene_svg(fx.scenario, &fx.goals, &fx.preds);
  const std::string b = render_scene_svg(fx.scenario, &fx.goals, &fx.preds);
  CHECK(a == b);
  CHECK(a.find("<svg") == 0);
  CHECK(a.rfind("</svg>\n") == a.size() - 7);
}

TEST_CASE("svg golden file comparison") {
  VizFixture fx;
  const std::string got = render_scene_svg(fx.scenario, &fx.goals, &fx.preds);
  const std::string golden_path = std::string(DENSEPATH_TESTS_DIR) + "/golden/fork_scene.svg";
  if (std::getenv("DENSEPATH_REGEN_GOLDEN")) {
    std::ofstream os(golden_path, std::ios::binary);
    os << got;
  }
  const std::string expect = slurp(golden_path);
  REQUIRE(!expect.empty());
  CHECK(got == expect);
}

TEST_CASE("goal opacity is monotone in phi") {
  VizFixture fx;
  GoalFieldDump two;
  two.scenario_id = fx.scenario.id;
  two.coords = {fx.goals.coords[0], fx.goals.coords[1]};
  two.phi = {0.75, 0.25};
  const std::string svg = render_scene_svg(fx.scenario, &two, nullptr);
  const auto first = svg.find("fill-opacity=\"");
  REQUIRE(first != std::string::npos);
  const auto second = svg.find("fill-opacity=\"", first + 1);
  REQUIRE(second != std::string::npos);
  const double op_a = std::stod(svg.substr(first + 14, 6));
  const double op_b = std::stod(svg.substr(second + 14, 6));
  CHECK(op_a > op_b);
  CHECK(op_a == doctest::Approx(1.0));  // phi / max(phi)
}

TEST_CASE("empty goal field still renders the lanes") {
  VizFixture fx;
  const std::string svg = render_scene_svg(fx.scenario, nullptr, nullptr);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("#d62728") == std::string::npos);  // no goal circles
  CHECK(svg.find("#2ca02c") != std::string::npos);  // ground truth still drawn
}
