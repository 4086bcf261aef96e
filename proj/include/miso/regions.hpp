// SPDX-License-Identifier: Apache-2.0
//
// Membership of a rate point in the outage rate regions, the admissible
// interval of the coin bias, and grid tracing of region boundaries.

#ifndef MISO_REGIONS_HPP
#define MISO_REGIONS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "miso/outage_mc.hpp"

namespace miso {

/// Slack for comparisons between probabilities.
inline constexpr double kProbTol = 1e-12;

enum class Scenario {
  common_inst,
  individual_inst,
  individual_inst_fixed1,
  individual_inst_fixed2,
  common_stat,
  individual_stat,
};

std::string_view to_string(Scenario s) noexcept;
std::optional<Scenario> parse_scenario(std::string_view name) noexcept;
bool is_statistical(Scenario s) noexcept;
bool is_common(Scenario s) noexcept;

struct OutageSpec {
  enum class Mode { common, individual };
  Mode mode = Mode::individual;
  double eps1 = 0.1;
  double eps2 = 0.1;

  static OutageSpec common(double eps) { return {Mode::common, eps, eps}; }
  static OutageSpec individual(double e1, double e2) {
    return {Mode::individual, e1, e2};
  }
  double eps(Link link) const noexcept { return link == Link::one ? eps1 : eps2; }
  /// Throws unless every probability lies in (0, 1) and common specs carry
  /// one value.
  void validate() const;
};

struct Membership {
  bool member = false;
  double margin = 0.0;
};

/// member iff P_B >= 1 - eps; margin = P_B - (1 - eps).
Membership common_inst_member(const CaseProbabilities& probs, double eps);

struct IndividualMembership {
  bool member = false;
  /// eps1 - (P_A + P_C2), eps2 - (P_A + P_C1), eps1 + eps2 - (1 + P_A - P_B).
  std::array<double, 3> margins{};
};

/// The three conditions under which a coin bias exists. On estimates,
/// P_A + P_C2 equals the empirical Pr{r1 > R1^SU} exactly.
IndividualMembership individual_inst_member(const CaseProbabilities& probs,
                                            double eps1, double eps2);

struct BiasInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool nonempty = false;

  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Coin biases p in [0, 1] with
///   1 - eps1 - P_B - P_C1 <= P_D p <= P_B + P_C2 + P_D - 1 + eps2.
BiasInterval bias_interval(const CaseProbabilities& probs, double eps1,
                           double eps2);

/// Individual outage when case D always goes to `choice`.
Membership fixed_choice_member(const CaseProbabilities& probs, double eps1,
                               double eps2, Link choice);

/// Dispatch for the instantaneous scenarios; margin is the smallest one.
Membership inst_member(Scenario scenario, const CaseProbabilities& probs,
                       const OutageSpec& spec);
/// All margins of the scenario's conditions, in a fixed order.
std::vector<double> inst_margins(Scenario scenario,
                                 const CaseProbabilities& probs,
                                 const OutageSpec& spec);

struct GridConfig {
  int columns = 50;
  double r1_cap = 1.0;
  double r2_cap = 1.0;

  double r1_at(int k) const noexcept {
    return columns > 1 ? r1_cap * k / (columns - 1) : 0.0;
  }
  double r2_at(int k) const noexcept {
    return columns > 1 ? r2_cap * k / (columns - 1) : 0.0;
  }
  /// Bisection tolerance on r2: a tenth of the grid step.
  double tolerance() const noexcept {
    return (columns > 1 ? r2_cap / (columns - 1) : r2_cap) / 10.0;
  }
  void validate() const;
};

/// Caps at 1.1 times the eps-quantile of each SU rate in the ensemble.
GridConfig default_grid(const Ensemble& ensemble, const OutageSpec& spec,
                        int columns);

struct BoundaryColumn {
  double r1 = 0.0;
  std::optional<double> r2;  ///< empty when (r1, 0) is not a member
};

struct BoundaryPoint {
  RatePoint point;
  std::optional<CaseProbabilities> probs;
  std::vector<double> margins;
};

struct RegionBoundary {
  std::string scenario;
  std::vector<BoundaryColumn> columns;  ///< one per grid r1, ascending
  std::vector<BoundaryPoint> points;    ///< non-dominated, ascending r1
  GridConfig grid;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::vector<std::string> warnings;
};

/// Membership restricted to one r1 column; may hold expensive per-column
/// state (e.g. per-sample r2*(r1) curves).
class ColumnOracle {
 public:
  virtual ~ColumnOracle() = default;
  virtual bool member(double r2) const = 0;
  virtual std::optional<CaseProbabilities> probs(double) const {
    return std::nullopt;
  }
  virtual std::vector<double> margins(double) const { return {}; }
};

using ColumnFactory =
    std::function<std::unique_ptr<ColumnOracle>(int index, double r1)>;

/// For each grid r1, bisects on r2 for the largest member. Reports
/// non-monotone behaviour in RegionBoundary::warnings.
RegionBoundary trace_boundary(const ColumnFactory& factory,
                              const GridConfig& grid);
RegionBoundary trace_boundary(std::function<bool(RatePoint)> oracle,
                              const GridConfig& grid);

/// Keeps the points not weakly dominated by another point, ascending r1.
std::vector<BoundaryPoint> non_dominated(std::vector<BoundaryPoint> points);

/// Per-column r2*(r1) curves of an ensemble over a grid, shared by every
/// instantaneous scenario.
class InstantaneousColumns {
 public:
  InstantaneousColumns(const Ensemble& ensemble, const GridConfig& grid,
                       Exec exec = {});

  const GridConfig& grid() const noexcept { return grid_; }
  const RateColumn& column(int index) const { return columns_->at(static_cast<std::size_t>(index)); }
  ColumnFactory factory(Scenario scenario, const OutageSpec& spec) const;
  RegionBoundary trace(Scenario scenario, const OutageSpec& spec) const;

 private:
  GridConfig grid_;
  std::shared_ptr<const std::vector<RateColumn>> columns_;
};

}  // namespace miso

#endif  // MISO_REGIONS_HPP
