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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vqc::io {

/// Whole-file read; throws an io error naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);
bool file_exists(const std::string& path);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict finite-number parse; rejects NaN/inf and trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

std::vector<std::string> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

/// "fnv1a64:<16 hex digits>" of the file contents.
std::string file_fingerprint(const std::string& path);
std::string fingerprint(std::string_view bytes);

}  // namespace vqc::io
