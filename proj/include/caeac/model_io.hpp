#pragma once
// JSON serialization for CAEA and CAEAC models. Emission is deterministic:
// fixed key order, floats with 17 significant digits (lossless binary64
// round-trip), edges sorted, classes in class order. Deserialized models
// support prediction and re-serialization; resuming training refills the
// bandwidth window from subsequent inputs (the window itself is not part of
// the schema).

#include <string>

#include "caeac/caea.hpp"
#include "caeac/caeac.hpp"

namespace caeac {

// {"lambda":..., "a_max":..., "variant":"...", "v_threshold":<num|null>,
//  "nodes":[{"weight":[...], "bandwidth":<num|[...]>, "counter":...}, ...],
//  "edges":[[i,j,age],...], "grouping":[[...],...]?}
std::string to_json(const CaeaModel& model);
CaeaModel caea_from_json(const std::string& text);

// {"config":{"lambda":...,"a_max":...,"variant":"...","predict_metric":"..."},
//  "classes":{label: <CaeaModel JSON>, ...}, "class_order":[...]}
std::string to_json(const CaeacModel& model);
CaeacModel caeac_from_json(const std::string& text);

// Formats a double with 17 significant digits (%.17g).
std::string format_double(double value);

}  // namespace caeac
