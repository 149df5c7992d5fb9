#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cfmimo/experiment.hpp"

using cfmimo::EmitMode;
using cfmimo::ExperimentSpec;
using cfmimo::ResultRecord;
using cfmimo::run_experiment;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.base.ap_count = 6;
  spec.base.ue_count = 4;
  spec.base.antennas_per_ap = 2;
  spec.base.pilot_length = 2;
  spec.base.n_setups = 2;
  spec.base.n_realizations = 20;
  spec.base.seed = 77;
  return spec;
}

}  // namespace

TEST_CASE("record count and paired metadata") {
  auto spec = tiny_spec();
  const auto records = run_experiment(spec);
  // 2 schemes x 2 setups x 4 UEs
  REQUIRE(records.size() == 16);
  int with_se = 0;
  for (const auto& r : records) {
    CHECK((r.scheme == "capa+all" || r.scheme == "rpa+all"));
    CHECK(r.sweep_param == "none");
    CHECK(r.seed == 77);
    if (r.se) {
      ++with_se;
      CHECK(*r.se >= 0.0);
    }
  }
  CHECK(with_se == 16);
}

TEST_CASE("single scheme, single setup gives K records") {
  auto spec = tiny_spec();
  spec.base.n_setups = 1;
  spec.base.ue_count = 2;
  spec.pilot_schemes = {cfmimo::PilotScheme::kCapa};
  const auto records = run_experiment(spec);
  CHECK(records.size() == 2);
}

TEST_CASE("experiment is deterministic, sequential equals parallel") {
  auto spec = tiny_spec();
  spec.sweep = cfmimo::SweepSpec{"pilot_length", {2, 3}};
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  ExperimentSpec par = spec;
  par.threads = 2;
  const auto c = run_experiment(par);

  const auto csv_a = cfmimo::format_records_csv(a);
  CHECK(csv_a == cfmimo::format_records_csv(b));
  CHECK(csv_a == cfmimo::format_records_csv(c));
  CHECK(cfmimo::format_summary_json(a, spec) ==
        cfmimo::format_summary_json(c, par));
}

TEST_CASE("all AP schemes run end to end") {
  auto spec = tiny_spec();
  spec.base.n_setups = 1;
  spec.ap_schemes = {{cfmimo::ApScheme::kAllAps, 1},
                     {cfmimo::ApScheme::kCapaSelect, 1},
                     {cfmimo::ApScheme::kTopM, 3}};
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 2 * 3 * 4);
  for (const auto& r : records) {
    REQUIRE(r.se.has_value());
    CHECK(*r.se >= 0.0);
  }
}

TEST_CASE("empirical cdf and 95%-likely") {
  std::vector<ResultRecord> records;
  for (double v : {3.0, 1.0, 2.0}) {
    ResultRecord r;
    r.scheme = "capa+all";
    r.sweep_param = "none";
    r.se = v;
    records.push_back(r);
  }
  const auto cdf = cfmimo::empirical_cdf(records, "capa+all");
  REQUIRE(cdf.size() == 3);
  CHECK(cdf[0] == std::pair<double, double>{1.0, 1.0 / 3});
  CHECK(cdf[1] == std::pair<double, double>{2.0, 2.0 / 3});
  CHECK(cdf[2] == std::pair<double, double>{3.0, 1.0});

  CHECK_THROWS_AS(cfmimo::empirical_cdf(records, "nope"), std::domain_error);

  // constant samples: the 95%-likely value is that constant
  std::vector<ResultRecord> constant;
  for (int i = 0; i < 30; ++i) {
    ResultRecord r;
    r.scheme = "s";
    r.se = 1.25;
    constant.push_back(r);
  }
  CHECK(cfmimo::likely_95(constant, "s") == doctest::Approx(1.25));

  // permutation invariance and the interpolated rank
  std::vector<ResultRecord> ramp;
  for (int i = 100; i >= 1; --i) {
    ResultRecord r;
    r.scheme = "s";
    r.se = static_cast<double>(i);
    ramp.push_back(r);
  }
  CHECK(cfmimo::likely_95(ramp, "s") == doctest::Approx(5.95));
}

TEST_CASE("records CSV round trip, missing marker included") {
  std::vector<ResultRecord> records;
  ResultRecord a;
  a.scheme = "capa+all";
  a.sweep_param = "pilot_length";
  a.sweep_value = 5;
  a.setup = 3;
  a.ue = 7;
  a.se = 1.234567890123456789;
  records.push_back(a);
  ResultRecord b = a;
  b.scheme = "rpa+all";
  b.se = std::nullopt;
  records.push_back(b);

  const auto csv = cfmimo::format_records_csv(records);
  const auto parsed = cfmimo::parse_records_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].scheme == "capa+all");
  CHECK(parsed[0].sweep_param == "pilot_length");
  CHECK(parsed[0].sweep_value == 5.0);
  CHECK(parsed[0].setup == 3);
  CHECK(parsed[0].ue == 7);
  REQUIRE(parsed[0].se.has_value());
  CHECK(*parsed[0].se == *a.se);  // %.17g round-trips doubles exactly
  CHECK(!parsed[1].se.has_value());
  // byte-identical re-emission
  CHECK(cfmimo::format_records_csv(parsed) == csv);

  CHECK(cfmimo::format_records_csv({}) ==
        "schema_version,scheme,sweep_param,sweep_value,setup,ue,se_bits_per_hz\n");
  CHECK_THROWS_AS(cfmimo::parse_records_csv("bogus,header\n1,2\n"),
                  std::runtime_error);
}

TEST_CASE("cdf emission is monotone in both columns") {
  auto spec = tiny_spec();
  spec.emit_mode = EmitMode::kCdf;
  const auto records = run_experiment(spec);
  const auto csv = cfmimo::format_cdf_csv(records, spec);

  // parse back the (se, prob) columns per scheme and check monotonicity
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "scheme,sweep_param,sweep_value,se_bits_per_hz,cum_prob");
  std::string prev_scheme;
  double prev_se = -1, prev_p = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto scheme = line.substr(0, c1);
    const auto c3 = line.find(',', line.find(',', c1 + 1) + 1);
    const auto c4 = line.find(',', c3 + 1);
    const double se = std::strtod(line.substr(c3 + 1, c4 - c3 - 1).c_str(), nullptr);
    const double p = std::strtod(line.substr(c4 + 1).c_str(), nullptr);
    if (scheme == prev_scheme) {
      CHECK(se >= prev_se);
      CHECK(p >= prev_p);
    }
    prev_scheme = scheme;
    prev_se = se;
    prev_p = p;
    CHECK(p <= 1.0 + 1e-15);
    CHECK(p > 0.0);
  }
  CHECK(rows == 16);
}

TEST_CASE("emitted files land on disk and the summary is well formed") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cfmimo_test_emit";
  fs::create_directories(dir);
  auto spec = tiny_spec();
  spec.base.n_setups = 1;
  spec.output_path = (dir / "out.csv").string();
  spec.emit_mode = EmitMode::kPerUeSamples;
  const auto records = run_experiment(spec);
  cfmimo::emit_results(records, spec);

  CHECK(fs::exists(dir / "out.csv"));
  CHECK(fs::exists(dir / "out.csv.summary.json"));
  std::ifstream summary(dir / "out.csv.summary.json");
  std::string text((std::istreambuf_iterator<char>(summary)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("\"schema_version\": 1") != std::string::npos);
  CHECK(text.find("\"p05\"") != std::string::npos);
  CHECK(text.find("capa+all") != std::string::npos);
  fs::remove_all(dir);

  ExperimentSpec bad = spec;
  bad.output_path = "/nonexistent-dir-xyz/out.csv";
  CHECK_THROWS_AS(cfmimo::emit_results(records, bad), std::runtime_error);
}

TEST_CASE("spec file loading and validation") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cfmimo_test_spec";
  fs::create_directories(dir);
  const auto path = (dir / "spec.json").string();
  {
    std::ofstream out(path);
    out << R"({
      "version": 1,
      "config": {"ap_count": 9, "ue_count": 5, "antennas_per_ap": 2,
                 "pilot_length": 3, "n_setups": 2, "n_realizations": 10,
                 "seed": 5, "ap_layout": "grid"},
      "pilot_schemes": ["capa", "rpa"],
      "ap_schemes": ["all", "top2"],
      "sweep": {"param": "pilot_length", "values": [2, 3]},
      "emit": "percentile-summary",
      "output": "x.csv"
    })";
  }
  const auto spec = cfmimo::load_spec_file(path);
  CHECK(spec.base.ap_count == 9);
  CHECK(spec.base.ap_layout == cfmimo::ApLayout::kGrid);
  CHECK(spec.pilot_schemes.size() == 2);
  REQUIRE(spec.ap_schemes.size() == 2);
  CHECK(spec.ap_schemes[1].kind == cfmimo::ApScheme::kTopM);
  CHECK(spec.ap_schemes[1].top_m == 2);
  REQUIRE(spec.sweep.has_value());
  CHECK(spec.sweep->values == std::vector<double>{2, 3});
  CHECK(spec.emit_mode == EmitMode::kPercentileSummary);
  CHECK_NOTHROW(spec.validate());

  ExperimentSpec invalid = spec;
  invalid.sweep->values = {500};  // pilot_length must stay below the coherence block
  CHECK_THROWS_AS(invalid.validate(), std::invalid_argument);

  ExperimentSpec no_schemes = spec;
  no_schemes.pilot_schemes.clear();
  CHECK_THROWS_AS(no_schemes.validate(), std::invalid_argument);

  CHECK_THROWS_AS(cfmimo::load_spec_file((dir / "missing.json").string()),
                  std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("cdf matches a sort oracle on random inputs") {
  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<ResultRecord> records;
  std::vector<double> values;
  for (int i = 0; i < 57; ++i) {
    ResultRecord r;
    r.scheme = "s";
    r.se = u(eng);
    values.push_back(*r.se);
    records.push_back(r);
  }
  const auto cdf = cfmimo::empirical_cdf(records, "s");
  std::sort(values.begin(), values.end());
  REQUIRE(cdf.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(cdf[i].first == values[i]);
    CHECK(cdf[i].second == doctest::Approx((i + 1.0) / values.size()));
  }
  // 95%-likely <= median <= max
  const double p05 = cfmimo::likely_95(records, "s");
  const double median = cfmimo::quantile(values, 0.5);
  CHECK(p05 <= median);
  CHECK(median <= values.back());
}

TEST_CASE("per-scheme results do not depend on which other schemes run") {
  auto base = tiny_spec();
  const auto both = run_experiment(base);

  auto rpa_only = base;
  rpa_only.pilot_schemes = {cfmimo::PilotScheme::kRandom};
  const auto solo = run_experiment(rpa_only);

  for (const auto& s : solo) {
    REQUIRE(s.se.has_value());
    bool found = false;
    for (const auto& b : both) {
      if (b.scheme == s.scheme && b.setup == s.setup && b.ue == s.ue) {
        CHECK(*b.se == *s.se);  // bitwise: paired streams are scheme-blind
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("schemes share channel realizations within a setup") {
  // In the orthogonal regime the paired design makes CAPA and the
  // distinct-pilot random baseline coincide UE by UE, bit for bit.
  ExperimentSpec spec;
  spec.base.ap_count = 5;
  spec.base.ue_count = 3;
  spec.base.antennas_per_ap = 2;
  spec.base.pilot_length = 3;
  spec.base.n_setups = 2;
  spec.base.n_realizations = 15;
  spec.base.seed = 123;
  const auto records = run_experiment(spec);

  for (int setup = 0; setup < 2; ++setup) {
    for (int ue = 0; ue < 3; ++ue) {
      std::optional<double> capa, rpa;
      for (const auto& r : records) {
        if (r.setup != setup || r.ue != ue) continue;
        if (r.scheme == "capa+all") capa = r.se;
        if (r.scheme == "rpa+all") rpa = r.se;
      }
      REQUIRE(capa.has_value());
      REQUIRE(rpa.has_value());
      CHECK(*capa == *rpa);
    }
  }
}
