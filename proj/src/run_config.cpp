// SPDX-License-Identifier: Apache-2.0

#include "miso/run_config.hpp"

#include <cmath>
#include <set>

namespace miso {

namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}
std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw ConfigError(child(path, key), "unknown field");
}

const json& field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(child(path, key), "required field missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::uint64_t unsigned_int(const json& j, const std::string& path) {
  if (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)
    throw ConfigError(path, "must be nonnegative");
  if (!j.is_number_unsigned())
    throw ConfigError(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::uint64_t positive_int(const json& j, const std::string& path) {
  const auto v = unsigned_int(j, path);
  if (v == 0) throw ConfigError(path, "must be positive");
  return v;
}

double probability(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(path, "must lie in (0, 1)");
  return v;
}

std::complex<double> complex_number(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(path, "expected a [re, im] pair");
  return {number(j[0], child(path, 0)), number(j[1], child(path, 1))};
}

CVector complex_vector(const json& j, const std::string& path, Eigen::Index n) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of [re, im] pairs");
  if (static_cast<Eigen::Index>(j.size()) != n)
    throw ConfigError(path, "expected " + std::to_string(n) + " entries");
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    v[i] = complex_number(j[k], child(path, k));
  }
  return v;
}

CMatrix complex_matrix(const json& j, const std::string& path, Eigen::Index n) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != n)
    throw ConfigError(path, "expected " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto k = static_cast<std::size_t>(r);
    m.row(r) = complex_vector(j[k], child(path, k), n).transpose();
  }
  return m;
}

Noise parse_noise(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"sigma1_sq", "sigma2_sq"});
  Noise noise;
  noise.sigma1_sq = number(field(j, path, "sigma1_sq"), child(path, "sigma1_sq"));
  noise.sigma2_sq = number(field(j, path, "sigma2_sq"), child(path, "sigma2_sq"));
  if (!(noise.sigma1_sq > 0.0)) throw ConfigError(child(path, "sigma1_sq"), "must be positive");
  if (!(noise.sigma2_sq > 0.0)) throw ConfigError(child(path, "sigma2_sq"), "must be positive");
  return noise;
}

ChannelStatistics parse_covariances(const json& j, const std::string& path,
                                    Eigen::Index n, const Noise& noise) {
  require_object(j, path);
  reject_unknown(j, path, {"Q11", "Q12", "Q21", "Q22"});
  ChannelStatistics stats;
  stats.n = n;
  stats.noise = noise;
  auto read = [&](const char* key, CMatrix& out) {
    const auto p = child(path, key);
    out = complex_matrix(field(j, path, key), p, n);
    try {
      validate_covariance(out, key);
    } catch (const Error& e) {
      throw ConfigError(p, e.what());
    }
  };
  read("Q11", stats.q11);
  read("Q12", stats.q12);
  read("Q21", stats.q21);
  read("Q22", stats.q22);
  return stats;
}

ChannelRealization parse_realization(const json& j, const std::string& path,
                                     Eigen::Index n) {
  require_object(j, path);
  reject_unknown(j, path, {"h11", "h12", "h21", "h22"});
  auto read = [&](const char* key) {
    return complex_vector(field(j, path, key), child(path, key), n);
  };
  return ChannelRealization(read("h11"), read("h12"), read("h21"), read("h22"));
}

}  // namespace

std::size_t RunConfig::sample_count() const {
  if (mc_samples) return *mc_samples;
  return realizations.size();
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed document: ") + e.what());
  }
  const std::string root;
  require_object(doc, root);
  reject_unknown(doc, root,
                 {"scenario", "n", "covariances", "realizations", "noise",
                  "epsilon", "epsilon1", "epsilon2", "mc_samples", "seed",
                  "grid", "search", "coin_seed", "point", "bias",
                  "frontier_sample", "output"});

  RunConfig c;
  const auto& scen = field(doc, root, "scenario");
  if (!scen.is_string()) throw ConfigError("/scenario", "expected a string");
  const auto parsed = parse_scenario(scen.get<std::string>());
  if (!parsed) throw ConfigError("/scenario", "unknown scenario '" + scen.get<std::string>() + "'");
  c.scenario = *parsed;

  c.n = static_cast<Eigen::Index>(positive_int(field(doc, root, "n"), "/n"));
  c.noise = parse_noise(field(doc, root, "noise"), "/noise");
  c.seed = unsigned_int(field(doc, root, "seed"), "/seed");

  const bool has_cov = doc.contains("covariances");
  const bool has_list = doc.contains("realizations");
  if (has_cov == has_list)
    throw ConfigError("/covariances", "exactly one of 'covariances' and 'realizations' is required");
  if (has_cov) {
    c.statistics = parse_covariances(doc["covariances"], "/covariances", c.n, c.noise);
  } else {
    if (is_statistical(c.scenario))
      throw ConfigError("/realizations", "statistical scenarios need 'covariances'");
    const auto& list = doc["realizations"];
    if (!list.is_array() || list.empty())
      throw ConfigError("/realizations", "expected a nonempty array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto p = child("/realizations", k);
      try {
        c.realizations.push_back(parse_realization(list[k], p, c.n));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(p, e.what());
      }
    }
  }

  if (doc.contains("mc_samples"))
    c.mc_samples = positive_int(doc["mc_samples"], "/mc_samples");
  else if (has_cov)
    throw ConfigError("/mc_samples", "required field missing");

  const bool common = is_common(c.scenario);
  if (doc.contains("epsilon")) {
    if (doc.contains("epsilon1") || doc.contains("epsilon2"))
      throw ConfigError("/epsilon", "give either 'epsilon' or 'epsilon1'/'epsilon2'");
    const double e = probability(doc["epsilon"], "/epsilon");
    c.outage = common ? OutageSpec::common(e) : OutageSpec::individual(e, e);
    c.single_epsilon = true;
  } else if (doc.contains("epsilon1") || doc.contains("epsilon2")) {
    if (common) throw ConfigError("/epsilon1", "common outage takes a single 'epsilon'");
    const double e1 = probability(field(doc, root, "epsilon1"), "/epsilon1");
    const double e2 = probability(field(doc, root, "epsilon2"), "/epsilon2");
    c.outage = OutageSpec::individual(e1, e2);
    c.single_epsilon = false;
  } else {
    throw ConfigError("/epsilon", "required field missing");
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    require_object(g, "/grid");
    reject_unknown(g, "/grid", {"columns", "r1_cap", "r2_cap"});
    if (g.contains("columns")) {
      const auto cols = unsigned_int(g["columns"], "/grid/columns");
      if (cols < 2 || cols > 100000) throw ConfigError("/grid/columns", "must lie in [2, 100000]");
      c.grid_columns = static_cast<int>(cols);
    }
    auto cap = [&](const char* key, std::optional<double>& out) {
      if (!g.contains(key)) return;
      const auto p = child("/grid", key);
      out = number(g[key], p);
      if (!(*out > 0.0)) throw ConfigError(p, "must be positive");
    };
    cap("r1_cap", c.r1_cap);
    cap("r2_cap", c.r2_cap);
  }

  if (doc.contains("search")) {
    const auto& s = doc["search"];
    require_object(s, "/search");
    reject_unknown(s, "/search", {"beamformer_pairs", "seed"});
    SearchConfig search;
    search.pairs = positive_int(field(s, "/search", "beamformer_pairs"), "/search/beamformer_pairs");
    search.seed = unsigned_int(field(s, "/search", "seed"), "/search/seed");
    c.search = search;
  } else if (is_statistical(c.scenario)) {
    throw ConfigError("/search", "required field missing");
  }

  if (doc.contains("coin_seed")) c.coin_seed = unsigned_int(doc["coin_seed"], "/coin_seed");
  if (doc.contains("point")) {
    const auto& p = doc["point"];
    require_object(p, "/point");
    reject_unknown(p, "/point", {"r1", "r2"});
    RatePoint rp{number(field(p, "/point", "r1"), "/point/r1"),
                 number(field(p, "/point", "r2"), "/point/r2")};
    if (rp.r1 < 0.0) throw ConfigError("/point/r1", "must be nonnegative");
    if (rp.r2 < 0.0) throw ConfigError("/point/r2", "must be nonnegative");
    c.point = rp;
  }
  if (doc.contains("bias")) {
    const double b = number(doc["bias"], "/bias");
    if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("/bias", "must lie in [0, 1]");
    c.bias = b;
  }
  if (doc.contains("frontier_sample")) {
    c.frontier_sample = unsigned_int(doc["frontier_sample"], "/frontier_sample");
    if (*c.frontier_sample >= c.sample_count())
      throw ConfigError("/frontier_sample", "exceeds the number of samples");
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    require_object(o, "/output");
    reject_unknown(o, "/output", {"prefix"});
    if (o.contains("prefix")) {
      if (!o["prefix"].is_string()) throw ConfigError("/output/prefix", "expected a string");
      c.output_prefix = o["prefix"].get<std::string>();
      if (c.output_prefix.find('/') != std::string::npos)
        throw ConfigError("/output/prefix", "must not contain '/'");
    }
  }
  return c;
}

nlohmann::json complex_vector_to_json(const CVector& v) {
  auto out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v[i].real(), v[i].imag()});
  return out;
}

nlohmann::json complex_matrix_to_json(const CMatrix& m) {
  auto out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    out.push_back(complex_vector_to_json(m.row(r).transpose()));
  return out;
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["scenario"] = std::string(to_string(c.scenario));
  j["n"] = c.n;
  if (c.statistics) {
    j["covariances"] = {{"Q11", complex_matrix_to_json(c.statistics->q11)},
                        {"Q12", complex_matrix_to_json(c.statistics->q12)},
                        {"Q21", complex_matrix_to_json(c.statistics->q21)},
                        {"Q22", complex_matrix_to_json(c.statistics->q22)}};
  } else {
    auto list = json::array();
    for (const auto& h : c.realizations)
      list.push_back({{"h11", complex_vector_to_json(h.h11)},
                      {"h12", complex_vector_to_json(h.h12)},
                      {"h21", complex_vector_to_json(h.h21)},
                      {"h22", complex_vector_to_json(h.h22)}});
    j["realizations"] = list;
  }
  j["noise"] = {{"sigma1_sq", c.noise.sigma1_sq}, {"sigma2_sq", c.noise.sigma2_sq}};
  if (c.single_epsilon) {
    j["epsilon"] = c.outage.eps1;
  } else {
    j["epsilon1"] = c.outage.eps1;
    j["epsilon2"] = c.outage.eps2;
  }
  if (c.mc_samples) j["mc_samples"] = *c.mc_samples;
  j["seed"] = c.seed;
  json grid = {{"columns", c.grid_columns}};
  if (c.r1_cap) grid["r1_cap"] = *c.r1_cap;
  if (c.r2_cap) grid["r2_cap"] = *c.r2_cap;
  j["grid"] = grid;
  if (c.search)
    j["search"] = {{"beamformer_pairs", c.search->pairs}, {"seed", c.search->seed}};
  if (c.coin_seed) j["coin_seed"] = *c.coin_seed;
  if (c.point) j["point"] = {{"r1", c.point->r1}, {"r2", c.point->r2}};
  if (c.bias) j["bias"] = *c.bias;
  if (c.frontier_sample) j["frontier_sample"] = *c.frontier_sample;
  if (!c.output_prefix.empty()) j["output"] = {{"prefix", c.output_prefix}};
  return j;
}

SampleSource make_source(const RunConfig& c) {
  if (c.statistics)
    return SampleSource::from_statistics(*c.statistics, c.seed, c.sample_count());
  std::vector<ChannelRealization> list;
  const auto count = c.sample_count();
  list.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    list.push_back(c.realizations[k % c.realizations.size()]);
  return SampleSource::from_list(std::move(list), c.noise);
}

}  // namespace miso
