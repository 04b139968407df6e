#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "densepath/scene.hpp"

namespace densepath {

// One scenario per JSONL line:
// {"id", "horizon_s", "target_id",
//  "map": {"lanes": [{"id","points":[[x,y],...],"width","turn","parking"}]},
//  "tracks": [{"id","type","states":[[t,x,y,heading],...],"length","width"}],
//  "future": [[x,y],...]}
// Unknown fields are ignored; missing required fields are hard errors.

std::string scenario_to_json_line(const Scenario& s);
Scenario scenario_from_json_line(const std::string& line);

void save_scenarios(const std::string& path, const std::vector<Scenario>& scenarios);
void write_scenario(std::ostream& os, const Scenario& s);

// strict=true: any malformed record throws with its line number.
// strict=false: malformed records are reported through `on_error` (line number
// + message) and the stream continues.
std::vector<Scenario> load_scenarios(
    const std::string& path, bool strict = true,
    const std::function<void(int line, const std::string& error)>& on_error = nullptr);

}  // namespace densepath
