// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace varietylab {

using Json = nlohmann::ordered_json;

/// Deterministic rendering of a report document: keys in insertion order,
/// floating-point numbers with 12 significant digits (always carrying a
/// decimal point or exponent), non-finite numbers as null. `pretty` indents
/// by two spaces. The output ends with a newline.
std::string canonical_dump(const Json& doc, bool pretty = false);

/// A double rendered the way canonical_dump renders it.
std::string format_number(double value);

}  // namespace varietylab
