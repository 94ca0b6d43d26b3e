// Copyright 2026 The manifold-jko Authors
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

#include "mjko/error.hpp"

namespace mjko {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain:
      return "domain";
    case ErrorKind::kCutLocus:
      return "cut_locus";
    case ErrorKind::kNondifferentiable:
      return "nondifferentiable";
    case ErrorKind::kStagnation:
      return "stagnation";
    case ErrorKind::kConfig:
      return "config";
    case ErrorKind::kSize:
      return "size";
    case ErrorKind::kInternal:
      return "internal";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace mjko
