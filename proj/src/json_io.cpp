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

#include "coagfrag/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "coagfrag/error.hpp"

namespace coagfrag {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        dump_into(v, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

Json to_json(const MassPartition& p) {
  return Json{{"freqs", p.freqs}, {"dust_bound", p.dust_bound}};
}

Json to_json(const SetPartition& sp) {
  return Json{{"n", sp.n},
              {"k", sp.k},
              {"block_of", sp.block_of},
              {"block_sizes", sp.block_sizes}};
}

MassPartition mass_partition_from_json(const Json& j) {
  try {
    const Json& arr = j.is_array() ? j : j.at("freqs");
    std::vector<double> freqs = arr.get<std::vector<double>>();
    double dust = 0.0;
    if (j.is_object() && j.contains("dust_bound")) {
      dust = j.at("dust_bound").get<double>();
    }
    MassPartition p = MassPartition::ranked(std::move(freqs), dust);
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad mass partition: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bad mass partition: ") + e.what());
  }
}

std::vector<MassPartition> read_mass_partitions_jsonl(std::istream& in) {
  std::vector<MassPartition> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(mass_partition_from_json(j));
  }
  return out;
}

}  // namespace coagfrag
