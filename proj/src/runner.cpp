// SPDX-License-Identifier: Apache-2.0

#include "miso/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace miso {

namespace {

using nlohmann::json;

OutageSpec spec_for(const RunConfig& config, Scenario scenario) {
  if (is_common(scenario)) return OutageSpec::common(config.outage.eps1);
  return OutageSpec::individual(config.outage.eps1, config.outage.eps2);
}

bool single_eps(const RunConfig& config) {
  return config.outage.eps1 == config.outage.eps2;
}

json probs_json(const CaseProbabilities& p) {
  return {{"A", p.p_a}, {"B", p.p_b}, {"C1", p.p_c1}, {"C2", p.p_c2},
          {"D", p.p_d}};
}

json counts_json(const CaseCounts& c) {
  json j;
  for (auto cs : kAllCases) j[std::string(to_string(cs))] = c[cs];
  j["n"] = c.n;
  return j;
}

json errors_json(const CaseProbabilities& p) {
  json j;
  for (auto cs : kAllCases) j[std::string(to_string(cs))] = p.standard_error(cs);
  return j;
}

json interval_json(const BiasInterval& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"nonempty", b.nonempty}};
}

json frontier_json(const PowerFrontier& f) {
  return {{"c", f.c},         {"d", f.d},         {"b_norm_sq", f.b_norm_sq},
          {"p_max", f.p_max}, {"q_mrt", f.q_mrt}, {"degenerate", f.degenerate}};
}

std::string file_name(const RunConfig& config, const std::string& stem) {
  return config.output_prefix + stem;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string boundary_csv(const RegionBoundary& boundary) {
  std::ostringstream os;
  os << kBoundaryHeader << '\n';
  for (const auto& p : boundary.points) {
    os << format_number(p.point.r1) << ',' << format_number(p.point.r2);
    for (auto c : kAllCases) {
      os << ',';
      if (p.probs) os << format_number(p.probs->prob(c));
    }
    for (std::size_t i = 0; i < 3; ++i) {
      os << ',';
      if (i < p.margins.size()) os << format_number(p.margins[i]);
    }
    os << '\n';
  }
  return os.str();
}

std::string columns_csv(const RegionBoundary& boundary) {
  std::ostringstream os;
  os << "r1,r2\n";
  for (const auto& c : boundary.columns) {
    os << format_number(c.r1) << ',';
    if (c.r2) os << format_number(*c.r2);
    os << '\n';
  }
  return os.str();
}

std::vector<Scenario> region_scenarios(const RunConfig& config) {
  if (config.scenario != Scenario::individual_inst) return {config.scenario};
  std::vector<Scenario> out{Scenario::individual_inst,
                            Scenario::individual_inst_fixed1,
                            Scenario::individual_inst_fixed2};
  if (single_eps(config)) out.push_back(Scenario::common_inst);
  return out;
}

GridConfig resolve_grid(const RunConfig& config, const Ensemble* ensemble) {
  GridConfig grid;
  grid.columns = config.grid_columns;
  if (!config.r1_cap || !config.r2_cap) {
    if (!ensemble) throw Error("grid caps need the sample ensemble");
    grid = default_grid(*ensemble, spec_for(config, config.scenario),
                        config.grid_columns);
  }
  if (config.r1_cap) grid.r1_cap = *config.r1_cap;
  if (config.r2_cap) grid.r2_cap = *config.r2_cap;
  grid.validate();
  return grid;
}

RegionRun compute_region(const RunConfig& config, Exec exec) {
  RegionRun run;
  const bool need_samples = !is_statistical(config.scenario) ||
                            !config.r1_cap || !config.r2_cap;
  std::optional<Ensemble> ensemble;
  if (need_samples) ensemble.emplace(make_source(config), exec);
  run.grid = resolve_grid(config, ensemble ? &*ensemble : nullptr);

  if (is_statistical(config.scenario)) {
    auto b = search_stat_boundary(*config.statistics,
                                  spec_for(config, config.scenario),
                                  *config.search, run.grid, exec);
    run.boundaries.push_back(std::move(b));
    return run;
  }

  const InstantaneousColumns columns(*ensemble, run.grid, exec);
  for (auto s : region_scenarios(config)) {
    auto b = columns.trace(s, spec_for(config, s));
    b.seed = config.seed;
    b.samples = ensemble->size();
    run.boundaries.push_back(std::move(b));
  }
  return run;
}

json region_manifest(const RunConfig& config, const RegionRun& run) {
  json outputs = json::array();
  json warnings = json::array();
  for (const auto& b : run.boundaries) {
    outputs.push_back({{"scenario", b.scenario},
                       {"boundary", file_name(config, b.scenario + ".csv")},
                       {"columns", file_name(config, b.scenario + "_columns.csv")},
                       {"points", b.points.size()},
                       {"warnings", b.warnings}});
    for (const auto& w : b.warnings) warnings.push_back(b.scenario + ": " + w);
  }
  json j;
  j["tool"] = "miso_outage";
  j["version"] = kToolVersion;
  j["scenario"] = std::string(to_string(config.scenario));
  j["seed"] = config.seed;
  j["samples"] = config.sample_count();
  if (config.search)
    j["search"] = {{"beamformer_pairs", config.search->pairs},
                   {"seed", config.search->seed}};
  j["grid"] = {{"columns", run.grid.columns},
               {"r1_cap", run.grid.r1_cap},
               {"r2_cap", run.grid.r2_cap}};
  j["csv_columns"] = kBoundaryHeader;
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  j["config"] = to_json(config);
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  os.close();
  if (!os) throw Error("failed writing " + path.string());
}

std::vector<std::filesystem::path> run_region(const RunConfig& config,
                                              const std::filesystem::path& out,
                                              Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  const auto run = compute_region(config, exec);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error("cannot create " + out.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = out / name;
    write_file(path, text);
    written.push_back(path);
  };
  for (const auto& b : run.boundaries) {
    emit(file_name(config, b.scenario + ".csv"), boundary_csv(b));
    emit(file_name(config, b.scenario + "_columns.csv"), columns_csv(b));
  }
  emit(file_name(config, "manifest.json"),
       region_manifest(config, run).dump(2) + "\n");
  const json timing = {{"wall_seconds", seconds}, {"threads", exec.resolved()}};
  emit(file_name(config, "timing.json"), timing.dump(2) + "\n");
  return written;
}

json run_point(const RunConfig& config, RatePoint point, Exec exec) {
  point.validate();
  const auto source = make_source(config);
  const auto probs = estimate_case_probs(source, point, exec);
  const auto& spec = config.outage;

  json membership;
  if (single_eps(config)) {
    const auto m = common_inst_member(probs, spec.eps1);
    membership["common-inst"] = {{"member", m.member}, {"margins", {m.margin}}};
  }
  const auto ind = individual_inst_member(probs, spec.eps1, spec.eps2);
  membership["individual-inst"] = {{"member", ind.member},
                                   {"margins", ind.margins}};
  const auto ispec = OutageSpec::individual(spec.eps1, spec.eps2);
  for (auto s : {Scenario::individual_inst_fixed1, Scenario::individual_inst_fixed2}) {
    membership[std::string(to_string(s))] = {
        {"member", inst_member(s, probs, ispec).member},
        {"margins", inst_margins(s, probs, ispec)}};
  }
  if (config.statistics && config.search) {
    std::vector<std::pair<Scenario, OutageSpec>> stat{
        {Scenario::individual_stat, ispec}};
    if (single_eps(config))
      stat.insert(stat.begin(), {Scenario::common_stat, OutageSpec::common(spec.eps1)});
    for (const auto& [s, sspec] : stat) {
      const StatisticalRegion region(*config.statistics, sspec, *config.search, exec);
      membership[std::string(to_string(s))] = {{"member", region.member(point)}};
    }
  }

  json j;
  j["point"] = {{"r1", point.r1}, {"r2", point.r2}};
  j["seed"] = config.seed;
  j["samples"] = probs.n;
  j["case_probabilities"] = probs_json(probs);
  j["probability_sum"] = probs.sum();
  j["counts"] = counts_json(probs.counts);
  j["standard_errors"] = errors_json(probs);
  j["su_exceedance"] = {{"link1", probs.p_exceed1}, {"link2", probs.p_exceed2}};
  j["membership"] = membership;
  j["bias_interval"] = interval_json(bias_interval(probs, spec.eps1, spec.eps2));
  return j;
}

std::string frontier_csv(const PowerFrontier& frontier, int points) {
  if (points < 2) throw Error("frontier dump needs at least two points");
  std::ostringstream os;
  os << "q,p\n";
  for (int k = 0; k < points; ++k) {
    const double q = frontier.q_mrt * k / (points - 1);
    os << format_number(q) << ',' << format_number(frontier.power(q)) << '\n';
  }
  return os.str();
}

json run_frontier(const RunConfig& config, std::size_t sample) {
  const auto source = make_source(config);
  if (sample >= source.size()) throw Error("frontier sample index out of range");
  const auto h = source.at(sample);
  const auto g = SampleGeometry::from(h, source.noise());
  json j;
  j["sample"] = sample;
  j["seed"] = config.seed;
  j["tx1"] = frontier_json(g.f1);
  j["tx1"]["su_rate"] = g.su1;
  j["tx2"] = frontier_json(g.f2);
  j["tx2"]["su_rate"] = g.su2;
  j["realization"] = {{"h11", complex_vector_to_json(h.h11)},
                      {"h12", complex_vector_to_json(h.h12)},
                      {"h21", complex_vector_to_json(h.h21)},
                      {"h22", complex_vector_to_json(h.h22)}};
  return j;
}

json run_simulate(const RunConfig& config, RatePoint point, double bias,
                  Exec exec) {
  point.validate();
  if (!(bias >= 0.0 && bias <= 1.0)) throw Error("bias must lie in [0, 1]");
  const auto source = make_source(config);
  const auto coin = config.coin_seed.value_or(config.seed);
  const auto outcome = simulate_policy(source, point, bias, coin, exec);
  const auto probs = CaseProbabilities::from_counts(outcome.counts.cases);
  const double n = static_cast<double>(outcome.n);
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };

  json j;
  j["point"] = {{"r1", point.r1}, {"r2", point.r2}};
  j["bias"] = bias;
  j["seed"] = config.seed;
  j["coin_seed"] = coin;
  j["samples"] = outcome.n;
  j["outage"] = {{"link1", outcome.outage1()}, {"link2", outcome.outage2()}};
  j["outage_standard_errors"] = {{"link1", se(outcome.outage1())},
                                 {"link2", se(outcome.outage2())}};
  j["epsilon"] = {{"link1", config.outage.eps1}, {"link2", config.outage.eps2}};
  j["case_probabilities"] = probs_json(probs);
  j["counts"] = counts_json(outcome.counts.cases);
  j["coin"] = {{"link1", outcome.counts.d1}, {"link2", outcome.counts.d2}};
  j["bias_interval"] =
      interval_json(bias_interval(probs, config.outage.eps1, config.outage.eps2));
  return j;
}

}  // namespace miso
