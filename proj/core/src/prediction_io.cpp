#include "densepath/prediction_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace densepath {

namespace {

using nlohmann::json;

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

Vec2 point_from(const json& j) {
  if (!j.is_array() || j.size() < 2) throw std::invalid_argument("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string prediction_to_json_line(const PredictionSet& p) {
  json j;
  j["scenario_id"] = p.scenario_id;
  json trajs = json::array();
  json scores = json::array();
  json goals = json::array();
  for (const auto& pred : p.predictions) {
    json t = json::array();
    for (const auto& pt : pred.trajectory) t.push_back(point_json(pt));
    trajs.push_back(std::move(t));
    scores.push_back(pred.score);
    if (pred.goals.size() == 1) {
      goals.push_back(point_json(pred.goals[0]));
    } else {
      json g = json::array();
      for (const auto& pt : pred.goals) g.push_back(point_json(pt));
      goals.push_back(std::move(g));
    }
  }
  j["trajectories"] = std::move(trajs);
  j["scores"] = std::move(scores);
  j["goals"] = std::move(goals);
  return j.dump();
}

PredictionSet prediction_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  PredictionSet out;
  if (!j.contains("scenario_id")) throw std::invalid_argument("missing required field 'scenario_id'");
  out.scenario_id = j["scenario_id"].get<std::string>();
  const json& trajs = j.at("trajectories");
  const json& scores = j.at("scores");
  const json& goals = j.at("goals");
  if (trajs.size() != scores.size() || trajs.size() != goals.size()) {
    throw std::invalid_argument("trajectories/scores/goals lengths disagree");
  }
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    Prediction p;
    for (const auto& pt : trajs[i]) p.trajectory.push_back(point_from(pt));
    p.score = scores[i].get<double>();
    const json& g = goals[i];
    if (!g.empty() && g[0].is_array()) {
      for (const auto& pt : g) p.goals.push_back(point_from(pt));
    } else {
      p.goals.push_back(point_from(g));
    }
    out.predictions.push_back(std::move(p));
  }
  return out;
}

void save_predictions(const std::string& path, const std::vector<PredictionSet>& preds) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& p : preds) os << prediction_to_json_line(p) << '\n';
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

std::vector<PredictionSet> load_predictions(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<PredictionSet> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(prediction_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_goal_dump(std::ostream& os, const GoalFieldDump& dump) {
  for (std::size_t i = 0; i < dump.coords.size(); ++i) {
    json j;
    j["scenario_id"] = dump.scenario_id;
    j["x"] = dump.coords[i].x;
    j["y"] = dump.coords[i].y;
    j["phi"] = dump.phi[i];
    os << j.dump() << '\n';
  }
}

std::vector<GoalFieldDump> load_goal_dumps(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<GoalFieldDump> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string sid = j.value("scenario_id", std::string());
    if (out.empty() || out.back().scenario_id != sid) {
      out.push_back(GoalFieldDump{sid, {}, {}});
    }
    out.back().coords.push_back({j.at("x").get<double>(), j.at("y").get<double>()});
    out.back().phi.push_back(j.at("phi").get<double>());
  }
  return out;
}

}  // namespace densepath
