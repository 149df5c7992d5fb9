#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfmimo/ap_selection.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/pilot_assignment.hpp"
#include "cfmimo/similarity.hpp"
#include "cfmimo/uplink_se.hpp"

namespace cfmimo {

struct ApSchemeSpec {
  ApScheme kind = ApScheme::kAllAps;
  int top_m = 1;  // only for kTopM
};

// One pilot-scheme / AP-scheme pair, e.g. "capa+all".
struct SchemePair {
  PilotScheme pilot = PilotScheme::kCapa;
  ApSchemeSpec ap;
};

std::string scheme_label(const SchemePair& pair);

struct SweepSpec {
  std::string param;  // pilot_length | ue_count | ap_count | antennas_per_ap
  std::vector<double> values;
};

enum class EmitMode { kPerUeSamples, kCdf, kPercentileSummary };

struct ExperimentOptions {
  SimilarityMetric similarity = SimilarityMetric::kStatistical;
  CapaOptions capa;
  double ap_threshold_quantile = 0.5;
  bool ap_literal_gain_threshold = false;
  bool ap_assign_complement = false;
  SeWeighting weighting = SeWeighting::kLsfd;
};

struct ExperimentSpec {
  NetworkConfig base;
  std::vector<PilotScheme> pilot_schemes{PilotScheme::kCapa,
                                         PilotScheme::kRandom};
  std::vector<ApSchemeSpec> ap_schemes{{ApScheme::kAllAps, 1}};
  std::optional<SweepSpec> sweep;
  ExperimentOptions options;
  EmitMode emit_mode = EmitMode::kPerUeSamples;
  std::string output_path = "results.csv";
  int threads = 1;

  // Validates the base config, every swept config and the scheme lists.
  void validate() const;
};

// One (scheme, sweep value, setup, UE) sample. Missing SE marks a
// per-record computation failure or undersampled statistics.
struct ResultRecord {
  std::string scheme;
  std::string sweep_param;  // "none" when the spec has no sweep
  double sweep_value = 0.0;
  int setup = 0;
  int ue = 0;
  std::optional<double> se;  // bits/s/Hz
  std::uint64_t seed = 0;
};

// Substream tags under RngKey(seed).child(tag, sweep_index, setup).
namespace streams {
inline constexpr std::uint64_t kLayout = 11;
inline constexpr std::uint64_t kShadow = 12;
inline constexpr std::uint64_t kSimRealization = 13;
inline constexpr std::uint64_t kPilotDraw = 14;
inline constexpr std::uint64_t kRealizations = 15;
}  // namespace streams

// Runs every sweep value x setup x scheme pair. Schemes within a setup
// share geometry, covariances and channel realizations (paired design).
// Setups run in parallel when spec.threads > 1; records land in
// preallocated slots, so output is byte-identical to a sequential run.
// Per-record computation errors leave missing SE values and the run
// continues.
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec);

// Empirical CDF over the non-missing SE samples matching the filter:
// sorted (se, rank/n) pairs. Throws std::domain_error on an empty match.
std::vector<std::pair<double, double>> empirical_cdf(
    const std::vector<ResultRecord>& records, const std::string& scheme,
    std::optional<double> sweep_value = std::nullopt);

// 95%-likely SE: the 5th percentile (linear interpolation between order
// statistics) of the matching samples. Throws on an empty match.
double likely_95(const std::vector<ResultRecord>& records,
                 const std::string& scheme,
                 std::optional<double> sweep_value = std::nullopt);

// Delimited-text emission. All files share fixed formatting ("%.17g"
// floats), so identical records produce identical bytes.
std::string format_records_csv(const std::vector<ResultRecord>& records);
std::string format_cdf_csv(const std::vector<ResultRecord>& records,
                           const ExperimentSpec& spec);
std::string format_percentiles_csv(const std::vector<ResultRecord>& records,
                                   const ExperimentSpec& spec);
std::string format_summary_json(const std::vector<ResultRecord>& records,
                                const ExperimentSpec& spec);

// Round-trips format_records_csv exactly (missing SE included). Throws
// std::runtime_error on malformed input.
std::vector<ResultRecord> parse_records_csv(const std::string& text);

// Writes content to path; throws std::runtime_error with the path on
// failure.
void write_file(const std::string& path, const std::string& content);

// Emits the mode-selected main file at spec.output_path plus the
// "<output>.summary.json" percentile summary.
void emit_results(const std::vector<ResultRecord>& records,
                  const ExperimentSpec& spec);

// Spec-file (JSON) round trip for the CLI.
ExperimentSpec load_spec_file(const std::string& path);

}  // namespace cfmimo
