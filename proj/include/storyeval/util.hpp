// Copyright 2026 The storyeval Authors.
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

#ifndef STORYEVAL_UTIL_HPP_
#define STORYEVAL_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace storyeval {

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double value);

// 64-bit FNV-1a; stable across platforms, used for ids and config hashes.
std::uint64_t Fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string Hex64(std::uint64_t value);

// RFC 4180 quoting when a field contains ',', '"' or a newline.
std::string CsvField(std::string_view field);
std::string CsvRow(const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> ReadCsv(const std::filesystem::path& path);

void WriteTextFile(const std::filesystem::path& path, std::string_view contents);
std::string ReadTextFile(const std::filesystem::path& path);

// UTC, ISO-8601 with seconds.
std::string UtcTimestamp();

}  // namespace storyeval

#endif  // STORYEVAL_UTIL_HPP_
