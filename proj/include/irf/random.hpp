/*
   Copyright 2026 The irf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "irf/error.hpp"

namespace irf {

// ---------------------------------------------------------------------------
// Philox4x32-10 counter-based generator.
// ---------------------------------------------------------------------------
namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr Counter round(const Counter& c, const Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr Counter block(Counter c, Key k) noexcept {
  for (int r = 0; r < 10; ++r) {
    c = round(c, k);
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

}  // namespace philox

inline constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// (master_seed, replica, purpose) fully determines a stream.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t replica = 0;
  std::string purpose;

  // Key for a nested stream, e.g. the inner loop of a nested Monte Carlo.
  StreamKey child(std::uint64_t sub, std::string_view label) const {
    return {splitmix64(master_seed ^ splitmix64(replica ^ fnv1a64(purpose))), sub,
            std::string(label)};
  }
};

// A reproducible random stream; a value type owned by one worker.
class Stream {
 public:
  using result_type = std::uint32_t;

  explicit Stream(const StreamKey& key) {
    const std::uint64_t k = splitmix64(key.master_seed ^ splitmix64(fnv1a64(key.purpose)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    ctr_ = {0u, 0u, static_cast<std::uint32_t>(key.replica),
            static_cast<std::uint32_t>(key.replica >> 32)};
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xffffffffu; }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential() noexcept { return -std::log(uniform()); }

 private:
  void refill() noexcept {
    buf_ = philox::block(ctr_, key_);
    if (++ctr_[0] == 0) ++ctr_[1];
    pos_ = 0;
  }

  philox::Key key_{};
  philox::Counter ctr_{};
  philox::Counter buf_{};
  int pos_ = 4;
};

// ---------------------------------------------------------------------------
// Parameter laws.
// ---------------------------------------------------------------------------
namespace dist {
struct Constant {
  double value = 0.0;
};
struct DiscreteTable {
  std::vector<double> values;
  std::vector<double> probabilities;
};
struct LogNormal {
  double meanlog = 0.0;
  double sdlog = 1.0;
};
struct Uniform {
  double a = 0.0;
  double b = 1.0;
};
struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};
}  // namespace dist

using DistributionSpec =
    std::variant<dist::Constant, dist::DiscreteTable, dist::LogNormal, dist::Uniform, dist::Normal>;

inline void validate(const DistributionSpec& d) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  auto finite = [&](double v, const char* what) {
    if (!std::isfinite(v)) fail(std::string(what) + " must be finite");
  };
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Constant>) {
          finite(law.value, "value");
        } else if constexpr (std::is_same_v<T, dist::DiscreteTable>) {
          if (law.values.empty()) fail("discrete table needs at least one value");
          if (law.values.size() != law.probabilities.size())
            fail("values and probabilities must have the same length");
          double total = 0.0;
          for (std::size_t i = 0; i < law.values.size(); ++i) {
            finite(law.values[i], "value");
            finite(law.probabilities[i], "probability");
            if (law.probabilities[i] < 0.0) fail("probabilities must be nonnegative");
            total += law.probabilities[i];
          }
          if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("probabilities must sum to 1", ConfigIssue::kProbabilities);
        } else if constexpr (std::is_same_v<T, dist::LogNormal>) {
          finite(law.meanlog, "meanlog");
          finite(law.sdlog, "sdlog");
          if (!(law.sdlog > 0.0)) fail("sdlog must be > 0");
        } else if constexpr (std::is_same_v<T, dist::Uniform>) {
          finite(law.a, "a");
          finite(law.b, "b");
          if (!(law.b > law.a)) fail("uniform needs b > a");
        } else {
          finite(law.mean, "mean");
          finite(law.sd, "sd");
          if (!(law.sd > 0.0)) fail("sd must be > 0");
        }
      },
      d);
}

inline double sample(const DistributionSpec& d, Stream& stream) {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Constant>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, dist::DiscreteTable>) {
          const double u = stream.uniform();
          double acc = 0.0;
          for (std::size_t i = 0; i + 1 < law.values.size(); ++i) {
            acc += law.probabilities[i];
            if (u < acc) return law.values[i];
          }
          return law.values.back();
        } else if constexpr (std::is_same_v<T, dist::LogNormal>) {
          return std::exp(law.meanlog + law.sdlog * stream.normal());
        } else if constexpr (std::is_same_v<T, dist::Uniform>) {
          return law.a + (law.b - law.a) * stream.uniform();
        } else {
          return law.mean + law.sd * stream.normal();
        }
      },
      d);
}

// E|X|^s when a closed form exists.
inline std::optional<double> closed_form_moment(const DistributionSpec& d, double s) {
  return std::visit(
      [&](const auto& law) -> std::optional<double> {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Constant>) {
          return std::pow(std::fabs(law.value), s);
        } else if constexpr (std::is_same_v<T, dist::DiscreteTable>) {
          double acc = 0.0;
          for (std::size_t i = 0; i < law.values.size(); ++i)
            acc += law.probabilities[i] * std::pow(std::fabs(law.values[i]), s);
          return acc;
        } else if constexpr (std::is_same_v<T, dist::LogNormal>) {
          return std::exp(s * law.meanlog + 0.5 * s * s * law.sdlog * law.sdlog);
        } else {
          return std::nullopt;
        }
      },
      d);
}

// Finite atom list for Constant / DiscreteTable laws, empty otherwise.
inline std::optional<std::vector<std::pair<double, double>>> atoms(const DistributionSpec& d) {
  if (const auto* c = std::get_if<dist::Constant>(&d))
    return std::vector<std::pair<double, double>>{{c->value, 1.0}};
  if (const auto* t = std::get_if<dist::DiscreteTable>(&d)) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < t->values.size(); ++i)
      if (t->probabilities[i] > 0.0) out.emplace_back(t->values[i], t->probabilities[i]);
    return out;
  }
  return std::nullopt;
}

// log|M| is lattice-valued whenever the law has one or two atoms; such laws
// cannot be certified non-arithmetic.
inline bool arithmetic_risk(const DistributionSpec& d) {
  const auto a = atoms(d);
  return a && a->size() <= 2;
}

inline std::string describe(const DistributionSpec& d) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Constant>) {
          os << "constant(" << law.value << ")";
        } else if constexpr (std::is_same_v<T, dist::DiscreteTable>) {
          os << "discrete([";
          for (std::size_t i = 0; i < law.values.size(); ++i) os << (i ? "," : "") << law.values[i];
          os << "],[";
          for (std::size_t i = 0; i < law.values.size(); ++i)
            os << (i ? "," : "") << law.probabilities[i];
          os << "])";
        } else if constexpr (std::is_same_v<T, dist::LogNormal>) {
          os << "lognormal(" << law.meanlog << "," << law.sdlog << ")";
        } else if constexpr (std::is_same_v<T, dist::Uniform>) {
          os << "uniform(" << law.a << "," << law.b << ")";
        } else {
          os << "normal(" << law.mean << "," << law.sd << ")";
        }
      },
      d);
  return os.str();
}

}  // namespace irf
