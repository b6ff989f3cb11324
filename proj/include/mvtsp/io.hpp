#pragma once

#include <string>

#include <json.hpp>

#include "mvtsp/instance.hpp"
#include "mvtsp/walk.hpp"

namespace mvtsp {

using Json = nlohmann::json;

// {"n": int, "cost": [["p/q"]], "requests": ["int"], "s": int, "t": int|null}
Json instance_to_json(const Instance& inst);
// Accepts rationals and integers either as strings or JSON integers.
Instance instance_from_json(const Json& j);

// {"edges": [[u, v, "mult"]], "cost": "p/q"}
Json tour_to_json(const CompactMultigraph& g, const Rational& cost);
CompactMultigraph tour_from_json(const Json& j, int n);

Instance read_instance_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace mvtsp
