// Command-line front end: figure-style experiments (cdf-se, sweep-taup,
// sweep-aps) plus free-form runs from a JSON spec file.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cfmimo/experiment.hpp"

namespace {

using cfmimo::ApScheme;
using cfmimo::ApSchemeSpec;
using cfmimo::EmitMode;
using cfmimo::ExperimentSpec;
using cfmimo::PilotScheme;

struct CommonFlags {
  int aps = 25;
  int ues = 20;
  int antennas = 2;
  int pilot_length = 5;
  int setups = 50;
  int realizations = 300;
  std::uint64_t seed = 1;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::string out;
  std::string ap_scheme = "all";
  std::string layout = "uniform";
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--aps", flags.aps, "Number of APs (L)");
  cmd->add_option("--ues", flags.ues, "Number of UEs (K)");
  cmd->add_option("--antennas", flags.antennas, "Antennas per AP (N)");
  cmd->add_option("--pilot-length", flags.pilot_length,
                  "Pilot sequence length (symbols)");
  cmd->add_option("--setups", flags.setups, "Independent UE placements");
  cmd->add_option("--realizations", flags.realizations,
                  "Channel realizations per setup");
  cmd->add_option("--seed", flags.seed, "Master RNG seed")
      ->default_val(std::uint64_t{1});
  cmd->add_option("--threads", flags.threads,
                  "Worker threads (1 = sequential)");
  cmd->add_option("--ap-scheme", flags.ap_scheme,
                  "AP selection: all | capa | top<M>");
  cmd->add_option("--layout", flags.layout, "AP layout: uniform | grid");
}

ExperimentSpec spec_from_flags(const CommonFlags& flags) {
  ExperimentSpec spec;
  spec.base.ap_count = flags.aps;
  spec.base.ue_count = flags.ues;
  spec.base.antennas_per_ap = flags.antennas;
  spec.base.pilot_length = flags.pilot_length;
  spec.base.n_setups = flags.setups;
  spec.base.n_realizations = flags.realizations;
  spec.base.seed = flags.seed;
  spec.base.ap_layout = flags.layout == "grid" ? cfmimo::ApLayout::kGrid
                                               : cfmimo::ApLayout::kUniformRandom;
  spec.threads = flags.threads > 0 ? flags.threads : 1;

  spec.pilot_schemes = {PilotScheme::kCapa, PilotScheme::kRandom};
  ApSchemeSpec ap;
  if (flags.ap_scheme == "all") {
    ap = {ApScheme::kAllAps, 1};
  } else if (flags.ap_scheme == "capa") {
    ap = {ApScheme::kCapaSelect, 1};
  } else if (flags.ap_scheme.rfind("top", 0) == 0) {
    ap = {ApScheme::kTopM, std::atoi(flags.ap_scheme.c_str() + 3)};
  } else {
    throw std::runtime_error("unknown --ap-scheme: " + flags.ap_scheme);
  }
  spec.ap_schemes = {ap};
  return spec;
}

void report(const std::vector<cfmimo::ResultRecord>& records,
            const ExperimentSpec& spec) {
  cfmimo::emit_results(records, spec);
  std::cout << "wrote " << spec.output_path << " and "
            << spec.output_path + ".summary.json" << "\n";

  std::vector<std::pair<std::string, double>> groups;
  for (const auto& record : records) {
    const std::pair<std::string, double> key{record.scheme,
                                             record.sweep_value};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) {
      groups.push_back(key);
    }
  }
  for (const auto& [scheme, value] : groups) {
    try {
      const double p05 = cfmimo::likely_95(records, scheme, value);
      std::cout << "  " << scheme;
      if (spec.sweep) std::cout << " @ " << spec.sweep->param << "=" << value;
      std::cout << ": 95%-likely SE = " << p05 << " bits/s/Hz\n";
    } catch (const std::domain_error&) {
      std::cout << "  " << scheme << ": no valid samples\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO uplink simulator"};
  app.require_subcommand(1);

  // run: free-form experiment from a JSON spec file.
  auto* run_cmd = app.add_subcommand("run", "Run an experiment spec file");
  std::string spec_path;
  std::string run_out;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  int run_threads = 0;
  run_cmd->add_option("--spec", spec_path, "Experiment spec (JSON)")
      ->required();
  run_cmd->add_option("--out", run_out, "Override output path");
  run_cmd->add_option("--seed", run_seed, "Override master seed")
      ->each([&](const std::string&) { run_seed_set = true; });
  run_cmd->add_option("--threads", run_threads, "Override worker threads");

  // cdf-se: per-UE SE distribution for CAPA vs random pilots.
  auto* cdf_cmd =
      app.add_subcommand("cdf-se", "Emit the per-UE SE distribution");
  CommonFlags cdf_flags;
  cdf_flags.out = "cdf_se.csv";
  add_common_flags(cdf_cmd, cdf_flags);
  cdf_cmd->add_option("--out", cdf_flags.out, "Output path");

  // sweep-taup: 95%-likely SE against the pilot length.
  auto* taup_cmd =
      app.add_subcommand("sweep-taup", "Sweep the pilot sequence length");
  CommonFlags taup_flags;
  taup_flags.out = "sweep_taup.csv";
  std::vector<int> taup_values{2, 5, 10, 50, 90};
  add_common_flags(taup_cmd, taup_flags);
  taup_cmd->add_option("--out", taup_flags.out, "Output path");
  taup_cmd->add_option("--values", taup_values, "Pilot lengths to sweep");

  // sweep-aps: 95%-likely SE against the number of APs.
  auto* aps_cmd = app.add_subcommand("sweep-aps", "Sweep the AP count");
  CommonFlags aps_flags;
  aps_flags.out = "sweep_aps.csv";
  std::vector<int> aps_values{16, 25, 36};
  add_common_flags(aps_cmd, aps_flags);
  aps_cmd->add_option("--out", aps_flags.out, "Output path");
  aps_cmd->add_option("--values", aps_values, "AP counts to sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentSpec spec;
    if (run_cmd->parsed()) {
      spec = cfmimo::load_spec_file(spec_path);
      if (!run_out.empty()) spec.output_path = run_out;
      if (run_seed_set) spec.base.seed = run_seed;
      if (run_threads > 0) spec.threads = run_threads;
    } else if (cdf_cmd->parsed()) {
      spec = spec_from_flags(cdf_flags);
      spec.output_path = cdf_flags.out;
      spec.emit_mode = EmitMode::kCdf;
    } else if (taup_cmd->parsed()) {
      spec = spec_from_flags(taup_flags);
      spec.output_path = taup_flags.out;
      spec.emit_mode = EmitMode::kPercentileSummary;
      cfmimo::SweepSpec sweep;
      sweep.param = "pilot_length";
      for (int v : taup_values) sweep.values.push_back(v);
      spec.sweep = sweep;
    } else if (aps_cmd->parsed()) {
      spec = spec_from_flags(aps_flags);
      spec.output_path = aps_flags.out;
      spec.emit_mode = EmitMode::kPercentileSummary;
      cfmimo::SweepSpec sweep;
      sweep.param = "ap_count";
      for (int v : aps_values) sweep.values.push_back(v);
      spec.sweep = sweep;
    }

    const auto records = cfmimo::run_experiment(spec);
    report(records, spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
