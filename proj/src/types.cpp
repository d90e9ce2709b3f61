/*
 * Copyright 2026 The regsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "regsim/types.hpp"

namespace regsim {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::teff: return "teff";
    case Algorithm::teff_modified: return "teff-modified";
    case Algorithm::abd: return "abd";
  }
  return "?";
}

const char* to_string(OpKind k) { return k == OpKind::write ? "write" : "read"; }

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "teff") return Algorithm::teff;
  if (s == "teff-modified") return Algorithm::teff_modified;
  if (s == "abd") return Algorithm::abd;
  throw std::invalid_argument("unknown algorithm: " + s);
}

}  // namespace regsim
