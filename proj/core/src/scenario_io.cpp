#include "densepath/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace densepath {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field, const std::string& where) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw std::invalid_argument(where + ": missing required field '" + field + "'");
  }
  return *it;
}

json points_to_json(const std::vector<Vec2>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(json::array({p.x, p.y}));
  return arr;
}

std::vector<Vec2> points_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw std::invalid_argument(where + ": expected an array of points");
  std::vector<Vec2> pts;
  pts.reserve(arr.size());
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() < 2) {
      throw std::invalid_argument(where + ": point must be [x, y]");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return pts;
}

}  // namespace

std::string scenario_to_json_line(const Scenario& s) {
  json j;
  j["id"] = s.id;
  j["horizon_s"] = s.horizon_s;
  j["target_id"] = s.target_id;
  json lanes = json::array();
  for (const auto& lane : s.map.lanes) {
    json jl;
    jl["id"] = lane.id;
    jl["points"] = points_to_json(lane.points);
    jl["width"] = lane.width;
    jl["turn"] = lane.turn;
    jl["parking"] = lane.parking;
    lanes.push_back(std::move(jl));
  }
  j["map"] = json{{"lanes", std::move(lanes)}};
  json tracks = json::array();
  for (const auto& t : s.tracks) {
    json jt;
    jt["id"] = t.id;
    jt["type"] = to_string(t.type);
    json states = json::array();
    for (const auto& st : t.observed) {
      json s4 = json::array({st.t, st.x, st.y});
      if (st.heading) s4.push_back(*st.heading);
      states.push_back(std::move(s4));
    }
    jt["states"] = std::move(states);
    jt["length"] = t.length;
    jt["width"] = t.width;
    tracks.push_back(std::move(jt));
  }
  j["tracks"] = std::move(tracks);
  j["future"] = points_to_json(s.future);
  return j.dump();
}

Scenario scenario_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");

  Scenario s;
  const json& jid = require(j, "id", "scenario");
  s.id = jid.is_string() ? jid.get<std::string>() : jid.dump();
  s.horizon_s = require(j, "horizon_s", "scenario").get<double>();
  s.target_id = require(j, "target_id", "scenario").get<std::int64_t>();

  const json& jmap = require(j, "map", "scenario");
  const json& jlanes = require(jmap, "lanes", "map");
  for (const auto& jl : jlanes) {
    Lane lane;
    lane.id = require(jl, "id", "lane").get<std::int64_t>();
    lane.points = points_from_json(require(jl, "points", "lane"), "lane.points");
    lane.width = require(jl, "width", "lane").get<double>();
    lane.turn = jl.value("turn", std::string("none"));
    lane.parking = jl.value("parking", false);
    s.map.lanes.push_back(std::move(lane));
  }

  const json& jtracks = require(j, "tracks", "scenario");
  for (const auto& jt : jtracks) {
    AgentTrack t;
    t.id = require(jt, "id", "track").get<std::int64_t>();
    t.type = agent_type_from_string(require(jt, "type", "track").get<std::string>());
    const json& jstates = require(jt, "states", "track");
    for (const auto& js : jstates) {
      if (!js.is_array() || js.size() < 3) {
        throw std::invalid_argument("track.states: state must be [t, x, y, heading?]");
      }
      ObservedState st;
      st.t = js[0].get<double>();
      st.x = js[1].get<double>();
      st.y = js[2].get<double>();
      if (js.size() >= 4) st.heading = js[3].get<double>();
      t.observed.push_back(st);
    }
    t.length = jt.value("length", 4.5);
    t.width = jt.value("width", 2.0);
    s.tracks.push_back(std::move(t));
  }

  if (auto it = j.find("future"); it != j.end()) {
    s.future = points_from_json(*it, "future");
  }

  validate_scenario(s);
  return s;
}

void write_scenario(std::ostream& os, const Scenario& s) {
  os << scenario_to_json_line(s) << '\n';
}

void save_scenarios(const std::string& path, const std::vector<Scenario>& scenarios) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& s : scenarios) write_scenario(os, s);
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

std::vector<Scenario> load_scenarios(
    const std::string& path, bool strict,
    const std::function<void(int line, const std::string& error)>& on_error) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<Scenario> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(scenario_from_json_line(line));
    } catch (const std::exception& e) {
      const std::string msg = "line " + std::to_string(line_no) + ": " + e.what();
      if (strict) throw std::runtime_error(path + ": " + msg);
      if (on_error) on_error(line_no, msg);
    }
  }
  return out;
}

}  // namespace densepath
