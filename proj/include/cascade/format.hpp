// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//
// Text output helpers. All numeric output uses the shortest decimal that
// round-trips to the same double, so emitted CSV/JSON is byte-stable and
// lossless.
//

#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "cascade/core.hpp"

namespace cascade {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// One CSV row; no quoting needed for the fixed vocabularies emitted here.
inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) out += ',';
    out += cells[j];
  }
  out += '\n';
  return out;
}

}  // namespace cascade
