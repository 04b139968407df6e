#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "densepath/predictor.hpp"

namespace densepath {

// One set per line:
// {"scenario_id", "trajectories": [[[x,y],...] x K], "scores": [...], "goals": [...]}
// goals holds one [x,y] per prediction in short mode and a [[x,y] x 3] triple
// in long-term mode. Coordinates are in the original (denormalized) frame.
std::string prediction_to_json_line(const PredictionSet& p);
PredictionSet prediction_from_json_line(const std::string& line);

void save_predictions(const std::string& path, const std::vector<PredictionSet>& preds);
std::vector<PredictionSet> load_predictions(const std::string& path);

// Goal-field dump, one goal per line: {"scenario_id", "x", "y", "phi"}.
void write_goal_dump(std::ostream& os, const GoalFieldDump& dump);
std::vector<GoalFieldDump> load_goal_dumps(const std::string& path);

}  // namespace densepath
