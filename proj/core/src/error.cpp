// SPDX-License-Identifier: Apache-2.0
#include "varietylab/error.hpp"

namespace varietylab {

Error::Error(std::string code, const std::string& detail)
    : std::runtime_error(detail.empty() ? code : code + ": " + detail),
      code_(std::move(code)) {}

}  // namespace varietylab
