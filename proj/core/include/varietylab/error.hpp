// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace varietylab {

/// Validation failure carrying a stable kebab-case error name
/// (e.g. "empty-support", "search-budget") alongside a human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail);

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace varietylab
