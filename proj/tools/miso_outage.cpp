// SPDX-License-Identifier: Apache-2.0
//
// miso_outage <subcommand> <config.json> [out_dir] [--threads N]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "miso/runner.hpp"

namespace {

miso::RunConfig load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw miso::Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return miso::parse_config(ss.str());
}

void emit(const std::string& out_dir, const std::string& name,
          const nlohmann::json& report) {
  const auto text = report.dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(out_dir);
  miso::write_file(std::filesystem::path(out_dir) / name, text);
  std::cout << (std::filesystem::path(out_dir) / name).string() << "\n";
}

template <class T>
T need(const std::optional<T>& v, const char* field, const char* command) {
  if (!v)
    throw miso::ConfigError(std::string("/") + field,
                            std::string("required by '") + command + "'");
  return *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage rate regions of the two-user MISO interference channel"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (0 = OpenMP default, 1 = serial reference)")
      ->check(CLI::NonNegativeNumber);

  std::string config_path, out_dir;
  auto add = [&](const char* name, const char* help, bool needs_out) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "Run-config file")->required();
    auto* out = sub->add_option("out_dir", out_dir, "Output directory");
    if (needs_out) out->required();
    return sub;
  };
  auto* region = add("region", "Trace region boundaries; writes CSV + manifest", true);
  auto* point = add("point", "Case probabilities and verdicts at config 'point'", false);
  auto* frontier = add("frontier", "Power frontiers of realization 'frontier_sample'", false);
  auto* simulate = add("simulate", "Run the policy at 'point' with coin 'bias'", false);
  auto* validate = add("validate", "Check a config file", false);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = load(config_path);
    const miso::Exec exec{threads};
    if (region->parsed()) {
      for (const auto& p : miso::run_region(config, out_dir, exec))
        std::cout << p.string() << "\n";
    } else if (point->parsed()) {
      const auto rp = need(config.point, "point", "point");
      emit(out_dir, config.output_prefix + "point.json",
           miso::run_point(config, rp, exec));
    } else if (frontier->parsed()) {
      const auto k = need(config.frontier_sample, "frontier_sample", "frontier");
      const auto report = miso::run_frontier(config, k);
      if (!out_dir.empty()) {
        const auto source = miso::make_source(config);
        const auto g = miso::SampleGeometry::from(source.at(k), source.noise());
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        miso::write_file(dir / (config.output_prefix + "frontier_tx1.csv"),
                         miso::frontier_csv(g.f1));
        miso::write_file(dir / (config.output_prefix + "frontier_tx2.csv"),
                         miso::frontier_csv(g.f2));
      }
      emit(out_dir, config.output_prefix + "frontier.json", report);
    } else if (simulate->parsed()) {
      const auto rp = need(config.point, "point", "simulate");
      const auto bias = need(config.bias, "bias", "simulate");
      emit(out_dir, config.output_prefix + "simulate.json",
           miso::run_simulate(config, rp, bias, exec));
    } else if (validate->parsed()) {
      if (config.statistics) miso::validate_statistics(*config.statistics);
      std::cout << "ok: " << miso::to_string(config.scenario) << ", n="
                << config.n << ", " << config.sample_count() << " samples\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "miso_outage: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
