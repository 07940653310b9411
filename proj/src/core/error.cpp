// Copyright 2026 The vqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/error.hpp"

namespace vqc {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return "configuration error";
        case ErrorKind::Index: return "index error";
        case ErrorKind::Validation: return "validation error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Io: return "io error";
        case ErrorKind::Calibration: return "calibration error";
        case ErrorKind::Convergence: return "convergence error";
        case ErrorKind::Numerical: return "numerical error";
        case ErrorKind::EmptyResult: return "empty result";
    }
    return "unknown error";
}

}  // namespace vqc
