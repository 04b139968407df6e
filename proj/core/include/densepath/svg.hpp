#pragma once

#include <string>

#include "densepath/predictor.hpp"
#include "densepath/scene.hpp"

namespace densepath {

// Deterministic SVG: lanes as gray polylines, dense goals as red circles with
// opacity proportional to phi / max(phi), selected goals and predicted
// trajectories in orange, ground truth in green. `goals` and `preds` may be
// null. Byte output is a pure function of the inputs.
std::string render_scene_svg(const Scenario& scenario, const GoalFieldDump* goals,
                             const PredictionSet* preds);

}  // namespace densepath
