#pragma once

#include <string>

#include "json.hpp"
#include "nbhd/model.hpp"

namespace nbhd {

using Json = nlohmann::ordered_json;

/// Reads {"states": [...], "neighborhoods": {state: [[...], ...]},
/// "valuation": {atom: [...]}}. Unknown state names, duplicate sets and
/// malformed atoms raise Error(kModelFormat). States missing from
/// "neighborhoods" get an empty family.
NeighborhoodModel model_from_json(const Json& j);
/// Canonical form: states in index order, sets and families ascending.
Json model_to_json(const NeighborhoodModel& model);

/// {"kind": "bullet"|"wrong", "sign": "add"|"remove", "families": {...}},
/// families keyed by the state names of `frame`.
PerturbationMap perturbation_from_json(const Json& j, const NeighborhoodFrame& frame);
Json perturbation_to_json(const PerturbationMap& pmap, const NeighborhoodFrame& frame);

Json set_to_json(const NeighborhoodFrame& frame, StateSet x);
StateSet set_from_json(const Json& j, const NeighborhoodFrame& frame);

NeighborhoodModel read_model_file(const std::string& path);
Json read_json_file(const std::string& path);

}  // namespace nbhd
