// SPDX-License-Identifier: Apache-2.0
#include "varietylab/canonical_json.hpp"

#include <cmath>
#include <cstdio>

namespace varietylab {

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) value = 0.0;  // drop the sign of -0.0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string out(buf);
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

namespace {

void newline(std::string& out, bool pretty, int depth) {
  if (!pretty) return;
  out += '\n';
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

void render(const Json& j, std::string& out, bool pretty, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(out, pretty, depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        render(value, out, pretty, depth + 1);
      }
      newline(out, pretty, depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        newline(out, pretty, depth + 1);
        render(value, out, pretty, depth + 1);
      }
      newline(out, pretty, depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string canonical_dump(const Json& doc, bool pretty) {
  std::string out;
  render(doc, out, pretty, 0);
  out += '\n';
  return out;
}

}  // namespace varietylab
