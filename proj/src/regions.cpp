// SPDX-License-Identifier: Apache-2.0

#include "miso/regions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "miso/detail/search.hpp"

namespace miso {

namespace {

constexpr std::pair<Scenario, std::string_view> kScenarioNames[] = {
    {Scenario::common_inst, "common-inst"},
    {Scenario::individual_inst, "individual-inst"},
    {Scenario::individual_inst_fixed1, "individual-inst-fixed1"},
    {Scenario::individual_inst_fixed2, "individual-inst-fixed2"},
    {Scenario::common_stat, "common-stat"},
    {Scenario::individual_stat, "individual-stat"},
};

class InstColumnOracle final : public ColumnOracle {
 public:
  InstColumnOracle(std::shared_ptr<const std::vector<RateColumn>> columns,
                   std::size_t index, Scenario scenario, OutageSpec spec)
      : columns_(std::move(columns)),
        column_(columns_->at(index)),
        scenario_(scenario),
        spec_(spec) {}

  bool member(double r2) const override {
    return inst_member(scenario_, column_.case_probs(r2), spec_).member;
  }
  std::optional<CaseProbabilities> probs(double r2) const override {
    return column_.case_probs(r2);
  }
  std::vector<double> margins(double r2) const override {
    return inst_margins(scenario_, column_.case_probs(r2), spec_);
  }

 private:
  std::shared_ptr<const std::vector<RateColumn>> columns_;
  const RateColumn& column_;
  Scenario scenario_;
  OutageSpec spec_;
};

class PointColumnOracle final : public ColumnOracle {
 public:
  PointColumnOracle(std::function<bool(RatePoint)> oracle, double r1)
      : oracle_(std::move(oracle)), r1_(r1) {}
  bool member(double r2) const override { return oracle_({r1_, r2}); }

 private:
  std::function<bool(RatePoint)> oracle_;
  double r1_;
};

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  for (const auto& [value, name] : kScenarioNames)
    if (value == s) return name;
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) noexcept {
  for (const auto& [value, text] : kScenarioNames)
    if (text == name) return value;
  return std::nullopt;
}

bool is_statistical(Scenario s) noexcept {
  return s == Scenario::common_stat || s == Scenario::individual_stat;
}

bool is_common(Scenario s) noexcept {
  return s == Scenario::common_inst || s == Scenario::common_stat;
}

void OutageSpec::validate() const {
  auto in_open_unit = [](double e) { return e > 0.0 && e < 1.0; };
  if (!in_open_unit(eps1) || !in_open_unit(eps2))
    throw Error("outage probabilities must lie in (0, 1)");
  if (mode == Mode::common && eps1 != eps2)
    throw Error("a common outage specification carries a single epsilon");
}

Membership common_inst_member(const CaseProbabilities& probs, double eps) {
  const double margin = probs.p_b - (1.0 - eps);
  return {margin >= -kProbTol, margin};
}

IndividualMembership individual_inst_member(const CaseProbabilities& probs,
                                            double eps1, double eps2) {
  IndividualMembership out;
  out.margins[0] = eps1 - (probs.p_a + probs.p_c2);
  out.margins[1] = eps2 - (probs.p_a + probs.p_c1);
  out.margins[2] = eps1 + eps2 - (1.0 + probs.p_a - probs.p_b);
  out.member = std::all_of(out.margins.begin(), out.margins.end(),
                           [](double m) { return m >= -kProbTol; });
  return out;
}

BiasInterval bias_interval(const CaseProbabilities& probs, double eps1,
                           double eps2) {
  // Scaled bounds: lower <= P_D p <= upper.
  const double lower = 1.0 - eps1 - probs.p_b - probs.p_c1;
  const double upper = probs.p_b + probs.p_c2 + probs.p_d - 1.0 + eps2;
  const double pd = probs.p_d;

  BiasInterval out;
  out.nonempty = lower <= pd + kProbTol && upper >= -kProbTol &&
                 lower <= upper + kProbTol;
  if (pd > 0.0) {
    out.lo = std::clamp(lower / pd, 0.0, 1.0);
    out.hi = std::clamp(upper / pd, 0.0, 1.0);
    if (out.nonempty && out.lo > out.hi) out.hi = out.lo;
  } else {
    out.lo = out.nonempty ? 0.0 : 1.0;
    out.hi = out.nonempty ? 1.0 : 0.0;
  }
  return out;
}

Membership fixed_choice_member(const CaseProbabilities& probs, double eps1,
                               double eps2, Link choice) {
  const double d1 = choice == Link::one ? probs.p_d : 0.0;
  const double d2 = choice == Link::two ? probs.p_d : 0.0;
  const double m1 = probs.p_b + probs.p_c1 + d1 - (1.0 - eps1);
  const double m2 = probs.p_b + probs.p_c2 + d2 - (1.0 - eps2);
  const double margin = std::min(m1, m2);
  return {margin >= -kProbTol, margin};
}

std::vector<double> inst_margins(Scenario scenario,
                                 const CaseProbabilities& probs,
                                 const OutageSpec& spec) {
  switch (scenario) {
    case Scenario::common_inst:
      return {common_inst_member(probs, spec.eps1).margin};
    case Scenario::individual_inst: {
      const auto m = individual_inst_member(probs, spec.eps1, spec.eps2);
      return {m.margins.begin(), m.margins.end()};
    }
    case Scenario::individual_inst_fixed1:
    case Scenario::individual_inst_fixed2: {
      const bool one = scenario == Scenario::individual_inst_fixed1;
      const double d1 = one ? probs.p_d : 0.0;
      const double d2 = one ? 0.0 : probs.p_d;
      return {probs.p_b + probs.p_c1 + d1 - (1.0 - spec.eps1),
              probs.p_b + probs.p_c2 + d2 - (1.0 - spec.eps2)};
    }
    default:
      throw Error("scenario " + std::string(to_string(scenario)) +
                  " is not an instantaneous-CSI scenario");
  }
}

Membership inst_member(Scenario scenario, const CaseProbabilities& probs,
                       const OutageSpec& spec) {
  switch (scenario) {
    case Scenario::common_inst:
      return common_inst_member(probs, spec.eps1);
    case Scenario::individual_inst: {
      const auto m = individual_inst_member(probs, spec.eps1, spec.eps2);
      return {m.member, *std::min_element(m.margins.begin(), m.margins.end())};
    }
    case Scenario::individual_inst_fixed1:
      return fixed_choice_member(probs, spec.eps1, spec.eps2, Link::one);
    case Scenario::individual_inst_fixed2:
      return fixed_choice_member(probs, spec.eps1, spec.eps2, Link::two);
    default:
      throw Error("scenario " + std::string(to_string(scenario)) +
                  " is not an instantaneous-CSI scenario");
  }
}

void GridConfig::validate() const {
  if (columns < 2) throw Error("grid needs at least two columns");
  if (!(r1_cap > 0.0) || !(r2_cap > 0.0) || !std::isfinite(r1_cap) ||
      !std::isfinite(r2_cap))
    throw Error("grid caps must be positive and finite");
}

GridConfig default_grid(const Ensemble& ensemble, const OutageSpec& spec,
                        int columns) {
  GridConfig grid;
  grid.columns = columns;
  grid.r1_cap = 1.1 * ensemble.su_quantile(Link::one, spec.eps1);
  grid.r2_cap = 1.1 * ensemble.su_quantile(Link::two, spec.eps2);
  // A zero quantile leaves no room for a grid; fall back to one bit.
  if (!(grid.r1_cap > 0.0)) grid.r1_cap = 1.0;
  if (!(grid.r2_cap > 0.0)) grid.r2_cap = 1.0;
  return grid;
}

std::vector<BoundaryPoint> non_dominated(std::vector<BoundaryPoint> points) {
  std::sort(points.begin(), points.end(),
            [](const BoundaryPoint& a, const BoundaryPoint& b) {
              if (a.point.r1 != b.point.r1) return a.point.r1 > b.point.r1;
              return a.point.r2 > b.point.r2;
            });
  std::vector<BoundaryPoint> kept;
  double best_r2 = -1.0;
  for (auto& p : points) {
    if (p.point.r2 > best_r2) {
      best_r2 = p.point.r2;
      kept.push_back(std::move(p));
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

RegionBoundary trace_boundary(const ColumnFactory& factory,
                              const GridConfig& grid) {
  grid.validate();
  RegionBoundary out;
  out.grid = grid;
  const double tol = grid.tolerance();
  std::vector<BoundaryPoint> points;
  double previous = -1.0;
  bool seen_empty = false;

  auto warn = [&](int k, const std::string& what) {
    std::ostringstream os;
    os << "column " << k << " (r1=" << grid.r1_at(k) << "): " << what;
    out.warnings.push_back(os.str());
  };

  for (int k = 0; k < grid.columns; ++k) {
    const double r1 = grid.r1_at(k);
    const auto column = factory(k, r1);
    auto member = [&](double r2) { return column->member(r2); };

    if (!member(0.0)) {
      out.columns.push_back({r1, std::nullopt});
      seen_empty = true;
      previous = -1.0;
      continue;
    }
    if (seen_empty) warn(k, "member column after an empty one (non-monotone oracle)");

    const double r2 = detail::bisect_last_true(member, 0.0, grid.r2_cap, tol);
    if (r2 >= grid.r2_cap) warn(k, "boundary reaches the r2 cap");
    for (int j = 1; j <= 3; ++j)
      if (!member(r2 * j / 4.0)) {
        warn(k, "non-member below the traced boundary (non-monotone oracle)");
        break;
      }
    if (previous >= 0.0 && r2 > previous + tol)
      warn(k, "boundary rises with r1 (non-monotone oracle)");
    previous = r2;

    out.columns.push_back({r1, r2});
    points.push_back({{r1, r2}, column->probs(r2), column->margins(r2)});
  }
  out.points = non_dominated(std::move(points));
  return out;
}

RegionBoundary trace_boundary(std::function<bool(RatePoint)> oracle,
                              const GridConfig& grid) {
  auto shared = std::make_shared<std::function<bool(RatePoint)>>(std::move(oracle));
  return trace_boundary(
      [shared](int, double r1) -> std::unique_ptr<ColumnOracle> {
        return std::make_unique<PointColumnOracle>(*shared, r1);
      },
      grid);
}

InstantaneousColumns::InstantaneousColumns(const Ensemble& ensemble,
                                           const GridConfig& grid, Exec exec)
    : grid_(grid) {
  grid_.validate();
  auto columns = std::make_shared<std::vector<RateColumn>>();
  columns->reserve(static_cast<std::size_t>(grid_.columns));
  for (int k = 0; k < grid_.columns; ++k)
    columns->push_back(ensemble.column(grid_.r1_at(k), exec));
  columns_ = std::move(columns);
}

ColumnFactory InstantaneousColumns::factory(Scenario scenario,
                                            const OutageSpec& spec) const {
  if (is_statistical(scenario))
    throw Error("statistical scenarios are not traced from sample columns");
  auto columns = columns_;
  return [columns, scenario, spec](int k, double) -> std::unique_ptr<ColumnOracle> {
    return std::make_unique<InstColumnOracle>(columns, static_cast<std::size_t>(k),
                                              scenario, spec);
  };
}

RegionBoundary InstantaneousColumns::trace(Scenario scenario,
                                           const OutageSpec& spec) const {
  auto boundary = trace_boundary(factory(scenario, spec), grid_);
  boundary.scenario = std::string(to_string(scenario));
  return boundary;
}

}  // namespace miso
