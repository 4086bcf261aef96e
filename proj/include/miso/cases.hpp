// SPDX-License-Identifier: Apache-2.0
//
// Partition of channel realizations for a fixed rate point:
//   A  - neither rate reaches its SU rate
//   B  - the pair is jointly achievable
//   C1 - only link 1 can be served (r2 above R2^SU)
//   C2 - only link 2 can be served (r1 above R1^SU)
//   D  - each rate alone is achievable, the pair is not

#ifndef MISO_CASES_HPP
#define MISO_CASES_HPP

#include <array>
#include <cstdint>
#include <string_view>

#include "miso/rate_core.hpp"

namespace miso {

enum class Case : int { A = 0, B = 1, C1 = 2, C2 = 3, D = 4 };

inline constexpr std::array<Case, 5> kAllCases{Case::A, Case::B, Case::C1,
                                               Case::C2, Case::D};

constexpr std::string_view to_string(Case c) noexcept {
  switch (c) {
    case Case::A: return "A";
    case Case::B: return "B";
    case Case::C1: return "C1";
    case Case::C2: return "C2";
    case Case::D: return "D";
  }
  return "?";
}

/// Applies the ordered checks given the SU exceedance flags and the joint
/// achievability decision.
constexpr Case resolve_case(bool exceeds1, bool exceeds2,
                            bool achievable) noexcept {
  if (exceeds1 && exceeds2) return Case::A;
  if (achievable) return Case::B;
  if (exceeds2) return Case::C1;
  if (exceeds1) return Case::C2;
  return Case::D;
}

/// Classifies from the scalar geometry (runs the oracle only when needed).
inline Case classify(const SampleGeometry& g, RatePoint point,
                     const Noise& noise) {
  const bool e1 = point.r1 > g.su1;
  const bool e2 = point.r2 > g.su2;
  if (e1 && e2) return Case::A;
  return resolve_case(e1, e2, achievability(g, point, noise).achievable);
}

/// Integer tallies over a sample stream; merging is exact and
/// order-independent.
struct CaseCounts {
  std::array<std::uint64_t, 5> by_case{};
  std::uint64_t exceed1 = 0;  ///< samples with r1 > R1^SU
  std::uint64_t exceed2 = 0;  ///< samples with r2 > R2^SU
  std::uint64_t n = 0;

  void add(Case c, bool e1, bool e2) noexcept {
    ++by_case[static_cast<int>(c)];
    exceed1 += e1;
    exceed2 += e2;
    ++n;
  }
  CaseCounts& operator+=(const CaseCounts& o) noexcept {
    for (int i = 0; i < 5; ++i) by_case[i] += o.by_case[i];
    exceed1 += o.exceed1;
    exceed2 += o.exceed2;
    n += o.n;
    return *this;
  }
  std::uint64_t operator[](Case c) const noexcept {
    return by_case[static_cast<int>(c)];
  }
  bool operator==(const CaseCounts&) const = default;
};

/// Tallies of the stochastic on/off policy.
struct PolicyCounts {
  CaseCounts cases;
  std::uint64_t d1 = 0;  ///< D realizations resolved in favor of link 1
  std::uint64_t d2 = 0;
  std::uint64_t success1 = 0;
  std::uint64_t success2 = 0;

  PolicyCounts& operator+=(const PolicyCounts& o) noexcept {
    cases += o.cases;
    d1 += o.d1;
    d2 += o.d2;
    success1 += o.success1;
    success2 += o.success2;
    return *this;
  }
  bool operator==(const PolicyCounts&) const = default;
};

}  // namespace miso

#endif  // MISO_CASES_HPP
