#pragma once

#include <string>

#include "sdiov/scenario.hpp"

namespace sdiov {

// JSON scenario files. Every key is optional; anything not given keeps its
// default. Unknown keys are rejected.
//
//   {
//     "name": "rush_hour", "scenario": "very_high", "duration_s": 600,
//     "seed": 1, "mode": "proposed",
//     "topology": "default" | {"nodes": [...], "links": [...]},
//     "controller": {...}, "traffic": {...}, "servers": {...},
//     "power": {...}, "qos": {...}, "output": {"dir": "out", "plot": false}
//   }
//
// "scenario" names a preset load level; it sets traffic.vehicle_count and,
// when "name" is absent, the name. An explicit traffic.vehicle_count wins.

// Throws ParseError for malformed text and ValidationError for bad values.
ScenarioConfig parse_config(const std::string& text);

// Throws IoError when the file cannot be read.
ScenarioConfig load_config(const std::string& path);

// A bare {"nodes": [...], "links": [...]} document, as used inside "topology".
Topology parse_topology(const std::string& text);
Topology load_topology(const std::string& path);

// Fully expanded form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace sdiov
