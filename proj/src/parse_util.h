/*
 * Copyright 2026 The TemporalAugmenter Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Value parsing shared by the config and checkpoint readers.

#ifndef TEMPORAL_AUGMENTER_SRC_PARSE_UTIL_H_
#define TEMPORAL_AUGMENTER_SRC_PARSE_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ta::internal {

// All of these throw ConfigError naming the key.
int ParseInt(const std::string& key, const std::string& value);
std::uint64_t ParseU64(const std::string& key, const std::string& value);
double ParseDouble(const std::string& key, const std::string& value);
bool ParseBool(const std::string& key, const std::string& value);

std::string Trim(std::string_view s);
// Comma-separated items, trimmed, empty items dropped.
std::vector<std::string> SplitList(const std::string& value);

}  // namespace ta::internal

#endif  // TEMPORAL_AUGMENTER_SRC_PARSE_UTIL_H_
