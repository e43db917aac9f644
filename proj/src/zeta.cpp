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

#include "coagfrag/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

double parse_number(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed number '" + s + "' in zeta spec '" +
                      context + "'");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

ZetaSpec ZetaSpec::constant(double b) {
  ZetaSpec z;
  z.kind = Kind::constant;
  z.param = b;
  z.validate();
  return z;
}

ZetaSpec ZetaSpec::gamma(double shape) {
  ZetaSpec z;
  z.kind = Kind::gamma;
  z.param = shape;
  z.validate();
  return z;
}

ZetaSpec ZetaSpec::empirical(std::vector<std::pair<double, double>> table) {
  ZetaSpec z;
  z.kind = Kind::empirical;
  z.table = std::move(table);
  z.validate();
  return z;
}

ZetaSpec ZetaSpec::plus_gamma(double shape) const {
  if (!(shape > 0.0)) throw ConfigError("gamma shift must be positive");
  ZetaSpec z = *this;
  z.gamma_shift += shape;
  return z;
}

bool ZetaSpec::is_zero() const {
  return kind == Kind::zero && gamma_shift == 0.0;
}

void ZetaSpec::validate() const {
  switch (kind) {
    case Kind::zero:
      break;
    case Kind::constant:
      if (!(param > 0.0) || !std::isfinite(param)) {
        throw ConfigError("constant zeta must be positive and finite");
      }
      break;
    case Kind::gamma:
      if (!(param > 0.0) || !std::isfinite(param)) {
        throw ConfigError("gamma zeta shape must be positive and finite");
      }
      break;
    case Kind::empirical: {
      if (table.empty()) throw ConfigError("empirical zeta table is empty");
      double total = 0.0;
      for (const auto& [value, weight] : table) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
          throw ConfigError("empirical zeta values must be nonnegative");
        }
        if (!(weight >= 0.0)) {
          throw ConfigError("empirical zeta weights must be nonnegative");
        }
        total += weight;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("empirical zeta weights must sum to 1, got " +
                          fmt(total));
      }
      break;
    }
  }
  if (!(gamma_shift >= 0.0) || !std::isfinite(gamma_shift)) {
    throw ConfigError("gamma shift must be nonnegative");
  }
}

std::string ZetaSpec::to_string() const {
  std::string out;
  switch (kind) {
    case Kind::zero: out = "zero"; break;
    case Kind::constant: out = "const:" + fmt(param); break;
    case Kind::gamma: out = "gamma:" + fmt(param); break;
    case Kind::empirical:
      out = "empirical:";
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (i) out += ",";
        out += fmt(table[i].first) + "/" + fmt(table[i].second);
      }
      break;
  }
  if (gamma_shift > 0.0) out += "+gamma:" + fmt(gamma_shift);
  return out;
}

ZetaSpec ZetaSpec::parse(const std::string& text) {
  std::string base = text;
  double shift = 0.0;
  if (const auto plus = text.find("+gamma:"); plus != std::string::npos) {
    base = text.substr(0, plus);
    shift = parse_number(text.substr(plus + 7), text);
    if (!(shift > 0.0)) throw ConfigError("gamma shift must be positive");
  }
  ZetaSpec z;
  if (base == "zero") {
    z = zero();
  } else if (base.rfind("const:", 0) == 0) {
    const double b = parse_number(base.substr(6), text);
    z = (b == 0.0) ? zero() : constant(b);
  } else if (base.rfind("gamma:", 0) == 0) {
    z = gamma(parse_number(base.substr(6), text));
  } else if (base.rfind("empirical:", 0) == 0) {
    std::vector<std::pair<double, double>> table;
    std::stringstream ss(base.substr(10));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto slash = item.find('/');
      if (slash == std::string::npos) {
        throw ConfigError("empirical zeta entries must be value/weight: '" +
                          item + "'");
      }
      table.emplace_back(parse_number(item.substr(0, slash), text),
                         parse_number(item.substr(slash + 1), text));
    }
    z = empirical(std::move(table));
  } else {
    throw ConfigError("unknown zeta spec '" + text +
                      "' (expected zero, const:B, gamma:K or empirical:...)");
  }
  z.gamma_shift = shift;
  z.validate();
  return z;
}

double sample_zeta(const ZetaSpec& zeta, Rng& rng) {
  double z = 0.0;
  switch (zeta.kind) {
    case ZetaSpec::Kind::zero: break;
    case ZetaSpec::Kind::constant: z = zeta.param; break;
    case ZetaSpec::Kind::gamma: z = rng.gamma(zeta.param); break;
    case ZetaSpec::Kind::empirical: {
      double u = rng.uniform();
      z = zeta.table.back().first;
      for (const auto& [value, weight] : zeta.table) {
        if (u < weight) {
          z = value;
          break;
        }
        u -= weight;
      }
      break;
    }
  }
  if (zeta.gamma_shift > 0.0) z += rng.gamma(zeta.gamma_shift);
  return z;
}

double log_expect_exp_zeta_minus_power(const ZetaSpec& zeta, double c,
                                       double p) {
  if (zeta.gamma_shift > 0.0) {
    throw ConfigError("no closed form for a gamma-shifted zeta: " +
                      zeta.to_string());
  }
  switch (zeta.kind) {
    case ZetaSpec::Kind::zero:
      return 0.0;
    case ZetaSpec::Kind::constant:
      return zeta.param - c * std::pow(zeta.param, p);
    case ZetaSpec::Kind::gamma: {
      // int y^(k-1) e^(-c y^p) dy / Gamma(k) = Gamma(k/p) / (p c^(k/p) Gamma(k))
      const double k = zeta.param;
      return std::lgamma(k / p) - std::log(p) - (k / p) * std::log(c) -
             std::lgamma(k);
    }
    case ZetaSpec::Kind::empirical: {
      std::vector<double> terms;
      for (const auto& [value, weight] : zeta.table) {
        if (weight > 0.0) {
          terms.push_back(std::log(weight) + value - c * std::pow(value, p));
        }
      }
      return log_sum_exp(terms);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace coagfrag
