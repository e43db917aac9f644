/*
 * Copyright 2026 The coagfrag Authors
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

#pragma once

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coagfrag/partitions.hpp"

namespace coagfrag {

using Json = nlohmann::json;

/// "%.17g"; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double x);

/// Serializes with every floating value printed to 17 significant digits.
/// Non-finite floats are written as null.
std::string dump_json(const Json& j);

Json to_json(const MassPartition& p);
Json to_json(const SetPartition& sp);
MassPartition mass_partition_from_json(const Json& j);

/// Reads one MassPartition per nonblank line. Each line is either an object
/// with a "freqs" array or a bare array. Throws ConfigError on bad input.
std::vector<MassPartition> read_mass_partitions_jsonl(std::istream& in);

}  // namespace coagfrag
