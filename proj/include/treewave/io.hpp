#pragma once

#include <json.hpp>

#include "treewave/deloc.hpp"
#include "treewave/laurent.hpp"

namespace treewave::io {

using nlohmann::json;

/// {"kind":"rat","num":"..","den":".."} | {"kind":"quad","p":..,"q":..,
/// "a":"n/d",...} | {"kind":"f64","value":..}; exact round trip.
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

/// Human-diffable exact form "a+b√p+c√q+d√pq" with "num/den" components;
/// floats as shortest round-trip decimals.
std::string scalar_to_string(const Scalar& s);

/// Parse the string form back; a single radical √n is read with tag (1, n).
Scalar scalar_from_string(const std::string& text);

/// {"coeffs": {"-2": <scalar>, "0": <scalar>, ...}}
json laurent_to_json(const LaurentPoly& f);
LaurentPoly laurent_from_json(const json& j);

/// Flat site map {"0": 1, "-3": "1/2"}; values may be numbers, strings or
/// scalar objects.
json zfunction_to_json(const LaurentPoly& f);
LaurentPoly zfunction_from_json(const json& j);

json certificate_to_json(const deloc::Certificate& cert);

}  // namespace treewave::io
