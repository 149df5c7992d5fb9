#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

#include "cfmimo/channel.hpp"
#include "cfmimo/covariance.hpp"
#include "cfmimo/geometry.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

namespace {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string ap_scheme_label(const ApSchemeSpec& ap) {
  switch (ap.kind) {
    case ApScheme::kAllAps:
      return "all";
    case ApScheme::kCapaSelect:
      return "capa";
    case ApScheme::kTopM:
      return "top" + std::to_string(ap.top_m);
  }
  return "?";
}

std::string pilot_scheme_label(PilotScheme pilot) {
  return pilot == PilotScheme::kCapa ? "capa" : "rpa";
}

NetworkConfig apply_sweep(NetworkConfig cfg, const std::string& param,
                          double value) {
  const int as_int = static_cast<int>(std::llround(value));
  if (param == "pilot_length") {
    cfg.pilot_length = as_int;
  } else if (param == "ue_count") {
    cfg.ue_count = as_int;
  } else if (param == "ap_count") {
    cfg.ap_count = as_int;
  } else if (param == "antennas_per_ap") {
    cfg.antennas_per_ap = as_int;
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + param);
  }
  return cfg;
}

struct SweepPoint {
  NetworkConfig cfg;
  std::string param;
  double value = 0.0;
  std::size_t record_base = 0;
};

std::vector<SchemePair> scheme_pairs(const ExperimentSpec& spec) {
  std::vector<SchemePair> pairs;
  for (PilotScheme pilot : spec.pilot_schemes) {
    for (const ApSchemeSpec& ap : spec.ap_schemes) {
      pairs.push_back({pilot, ap});
    }
  }
  return pairs;
}

std::vector<SweepPoint> sweep_points(const ExperimentSpec& spec,
                                     std::size_t n_pairs) {
  std::vector<SweepPoint> points;
  if (spec.sweep) {
    for (double value : spec.sweep->values) {
      points.push_back(
          {apply_sweep(spec.base, spec.sweep->param, value),
           spec.sweep->param, value, 0});
    }
  } else {
    points.push_back({spec.base, "none", 0.0, 0});
  }
  std::size_t base = 0;
  for (auto& point : points) {
    point.record_base = base;
    base += static_cast<std::size_t>(point.cfg.n_setups) * n_pairs *
            point.cfg.ue_count;
  }
  return points;
}

ServingMap make_serving(const ApSchemeSpec& ap, const CovarianceSet& cov,
                        const APSimilarityMatrix* ap_sim,
                        const ChannelRealization* threshold_real,
                        const ExperimentOptions& options) {
  switch (ap.kind) {
    case ApScheme::kAllAps:
      return select_all(cov.ue_count(), cov.ap_count());
    case ApScheme::kTopM:
      return select_top_m(cov.beta(), ap.top_m);
    case ApScheme::kCapaSelect: {
      const double threshold =
          options.ap_literal_gain_threshold
              ? literal_gain_threshold(*threshold_real)
              : default_similarity_threshold(*ap_sim,
                                             options.ap_threshold_quantile);
      const APGroups groups = group_aps(*ap_sim, threshold);
      return select_capa_aps(groups, cov.beta(), options.ap_assign_complement);
    }
  }
  throw std::logic_error("unreachable AP scheme");
}

struct Grouping {
  std::string scheme;
  std::string param;
  double value = 0.0;
  std::vector<double> samples;  // non-missing SE values, record order
  int n_missing = 0;
};

// Groups in deterministic (sweep point, scheme pair) order.
std::vector<Grouping> group_records(const std::vector<ResultRecord>& records,
                                    const ExperimentSpec& spec) {
  const auto pairs = scheme_pairs(spec);
  const auto points = sweep_points(spec, pairs.size());

  std::vector<Grouping> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& point : points) {
    for (const auto& pair : pairs) {
      Grouping g;
      g.scheme = scheme_label(pair);
      g.param = point.param;
      g.value = point.value;
      index[g.scheme + "|" + format_double(g.value)] = groups.size();
      groups.push_back(std::move(g));
    }
  }
  for (const auto& record : records) {
    const auto it =
        index.find(record.scheme + "|" + format_double(record.sweep_value));
    if (it == index.end()) continue;
    Grouping& g = groups[it->second];
    if (record.se.has_value()) {
      g.samples.push_back(*record.se);
    } else {
      ++g.n_missing;
    }
  }
  return groups;
}

json config_to_json(const NetworkConfig& cfg) {
  json j;
  j["ap_count"] = cfg.ap_count;
  j["ue_count"] = cfg.ue_count;
  j["antennas_per_ap"] = cfg.antennas_per_ap;
  j["pilot_length"] = cfg.pilot_length;
  j["coherence_block"] = cfg.coherence_block;
  j["area_side_m"] = cfg.area_side;
  j["ap_layout"] = cfg.ap_layout == ApLayout::kGrid ? "grid" : "uniform";
  j["uplink_power_w"] = cfg.uplink_power;
  j["noise_power_w"] = cfg.noise_power;
  j["asd_deg"] = cfg.asd_deg;
  j["antenna_spacing"] = cfg.antenna_spacing;
  j["ap_height_delta_m"] = cfg.ap_height_delta;
  j["shadow_std_db"] = cfg.shadow_std_db;
  j["pathloss_const_db"] = cfg.pathloss_const_db;
  j["pathloss_slope_db"] = cfg.pathloss_slope_db;
  j["seed"] = cfg.seed;
  j["n_setups"] = cfg.n_setups;
  j["n_realizations"] = cfg.n_realizations;
  return j;
}

void config_from_json(const json& j, NetworkConfig& cfg) {
  if (j.contains("ap_count")) cfg.ap_count = j["ap_count"].get<int>();
  if (j.contains("ue_count")) cfg.ue_count = j["ue_count"].get<int>();
  if (j.contains("antennas_per_ap"))
    cfg.antennas_per_ap = j["antennas_per_ap"].get<int>();
  if (j.contains("pilot_length"))
    cfg.pilot_length = j["pilot_length"].get<int>();
  if (j.contains("coherence_block"))
    cfg.coherence_block = j["coherence_block"].get<int>();
  if (j.contains("area_side_m")) cfg.area_side = j["area_side_m"].get<double>();
  if (j.contains("ap_layout")) {
    const auto name = j["ap_layout"].get<std::string>();
    if (name == "grid") {
      cfg.ap_layout = ApLayout::kGrid;
    } else if (name == "uniform") {
      cfg.ap_layout = ApLayout::kUniformRandom;
    } else {
      throw std::runtime_error("spec: unknown ap_layout '" + name + "'");
    }
  }
  if (j.contains("uplink_power_w"))
    cfg.uplink_power = j["uplink_power_w"].get<double>();
  if (j.contains("noise_power_w"))
    cfg.noise_power = j["noise_power_w"].get<double>();
  if (j.contains("asd_deg")) cfg.asd_deg = j["asd_deg"].get<double>();
  if (j.contains("antenna_spacing"))
    cfg.antenna_spacing = j["antenna_spacing"].get<double>();
  if (j.contains("ap_height_delta_m"))
    cfg.ap_height_delta = j["ap_height_delta_m"].get<double>();
  if (j.contains("shadow_std_db"))
    cfg.shadow_std_db = j["shadow_std_db"].get<double>();
  if (j.contains("pathloss_const_db"))
    cfg.pathloss_const_db = j["pathloss_const_db"].get<double>();
  if (j.contains("pathloss_slope_db"))
    cfg.pathloss_slope_db = j["pathloss_slope_db"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("n_setups")) cfg.n_setups = j["n_setups"].get<int>();
  if (j.contains("n_realizations"))
    cfg.n_realizations = j["n_realizations"].get<int>();
}

ApSchemeSpec parse_ap_scheme(const std::string& name) {
  if (name == "all") return {ApScheme::kAllAps, 1};
  if (name == "capa") return {ApScheme::kCapaSelect, 1};
  if (name.rfind("top", 0) == 0 && name.size() > 3) {
    const int m = std::atoi(name.c_str() + 3);
    if (m >= 1) return {ApScheme::kTopM, m};
  }
  throw std::runtime_error("spec: unknown ap scheme '" + name + "'");
}

PilotScheme parse_pilot_scheme(const std::string& name) {
  if (name == "capa") return PilotScheme::kCapa;
  if (name == "rpa" || name == "random") return PilotScheme::kRandom;
  throw std::runtime_error("spec: unknown pilot scheme '" + name + "'");
}

}  // namespace

std::string scheme_label(const SchemePair& pair) {
  return pilot_scheme_label(pair.pilot) + "+" + ap_scheme_label(pair.ap);
}

void ExperimentSpec::validate() const {
  base.validate();
  if (pilot_schemes.empty() || ap_schemes.empty()) {
    throw std::invalid_argument("spec: need at least one scheme pair");
  }
  if (threads < 1) throw std::invalid_argument("spec: threads must be >= 1");
  if (output_path.empty()) {
    throw std::invalid_argument("spec: output path must be nonempty");
  }
  if (sweep) {
    if (sweep->values.empty()) {
      throw std::invalid_argument("spec: sweep needs at least one value");
    }
    for (double value : sweep->values) {
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw std::invalid_argument(
            "spec: sweep values must be positive integers");
      }
      apply_sweep(base, sweep->param, value).validate();
    }
  }
  for (const ApSchemeSpec& ap : ap_schemes) {
    if (ap.kind == ApScheme::kTopM) {
      const int max_aps =
          (sweep && sweep->param == "ap_count")
              ? static_cast<int>(*std::min_element(sweep->values.begin(),
                                                   sweep->values.end()))
              : base.ap_count;
      if (ap.top_m < 1 || ap.top_m > max_aps) {
        throw std::invalid_argument("spec: top_m out of range");
      }
    }
  }
}

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto pairs = scheme_pairs(spec);
  const auto points = sweep_points(spec, pairs.size());

  std::size_t total = 0;
  for (const auto& point : points) {
    total += static_cast<std::size_t>(point.cfg.n_setups) * pairs.size() *
             point.cfg.ue_count;
  }
  std::vector<ResultRecord> records(total);

  struct Task {
    std::size_t point;
    int setup;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (int s = 0; s < points[p].cfg.n_setups; ++s) tasks.push_back({p, s});
  }

  const bool need_ue_sim =
      std::any_of(spec.pilot_schemes.begin(), spec.pilot_schemes.end(),
                  [](PilotScheme p) { return p == PilotScheme::kCapa; });
  const bool need_rpa =
      std::any_of(spec.pilot_schemes.begin(), spec.pilot_schemes.end(),
                  [](PilotScheme p) { return p == PilotScheme::kRandom; });
  const bool need_ap_sim =
      std::any_of(spec.ap_schemes.begin(), spec.ap_schemes.end(),
                  [](const ApSchemeSpec& a) {
                    return a.kind == ApScheme::kCapaSelect;
                  });
  const bool need_sim_realization =
      (need_ue_sim &&
       spec.options.similarity == SimilarityMetric::kInstantaneous) ||
      (need_ap_sim && spec.options.ap_literal_gain_threshold);

  auto run_task = [&](const Task& task) {
    const SweepPoint& point = points[task.point];
    const NetworkConfig& cfg = point.cfg;
    const int ue_count = cfg.ue_count;

    // Fill metadata first so records are complete even if computation
    // fails below.
    const auto slot = [&](std::size_t pair_idx, int ue) {
      return point.record_base +
             (static_cast<std::size_t>(task.setup) * pairs.size() + pair_idx) *
                 ue_count +
             ue;
    };
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      for (int ue = 0; ue < ue_count; ++ue) {
        ResultRecord& rec = records[slot(pi, ue)];
        rec.scheme = scheme_label(pairs[pi]);
        rec.sweep_param = point.param;
        rec.sweep_value = point.value;
        rec.setup = task.setup;
        rec.ue = ue;
        rec.se = std::nullopt;
        rec.seed = cfg.seed;
      }
    }

    const RngKey root(cfg.seed);
    const auto point_id = static_cast<std::uint64_t>(task.point);
    const auto setup_id = static_cast<std::uint64_t>(task.setup);

    try {
      auto layout_eng =
          root.child(streams::kLayout, point_id, setup_id).engine();
      const Layout layout = place_network(cfg, layout_eng);
      auto shadow_eng =
          root.child(streams::kShadow, point_id, setup_id).engine();
      const CovarianceSet cov = build_covariance_set(layout, cfg, shadow_eng);

      ChannelRealization sim_real;
      if (need_sim_realization) {
        auto eng =
            root.child(streams::kSimRealization, point_id, setup_id).engine();
        sim_real = sample_channels(cov, eng);
      }

      UESimilarityMatrix ue_sim;
      if (need_ue_sim) {
        ue_sim = spec.options.similarity == SimilarityMetric::kStatistical
                     ? ue_similarity_matrix(cov)
                     : ue_similarity_matrix(sim_real);
      }
      APSimilarityMatrix ap_sim;
      if (need_ap_sim) ap_sim = ap_similarity_matrix(cov);

      PilotAssignment rpa;
      if (need_rpa) {
        auto eng = root.child(streams::kPilotDraw, point_id, setup_id).engine();
        rpa = assign_random(ue_count, cfg.pilot_length, eng);
      }

      PilotTraining training;
      training.pilot_len = cfg.pilot_length;
      training.ue_power = Eigen::VectorXd::Constant(ue_count, cfg.uplink_power);
      training.noise_power = cfg.noise_power;

      const RngKey realization_root =
          root.child(streams::kRealizations, point_id, setup_id);

      for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        try {
          const PilotAssignment assignment =
              pairs[pi].pilot == PilotScheme::kCapa
                  ? assign_capa(ue_sim.s, cfg.pilot_length, spec.options.capa)
                  : rpa;
          const ServingMap serving =
              make_serving(pairs[pi].ap, cov, need_ap_sim ? &ap_sim : nullptr,
                           need_sim_realization ? &sim_real : nullptr,
                           spec.options);
          const auto stats =
              accumulate_uatf(cov, assignment, serving, training,
                              realization_root, cfg.n_realizations);
          for (int ue = 0; ue < ue_count; ++ue) {
            records[slot(pi, ue)].se = spectral_efficiency(
                stats[ue], ue, training.ue_power, cfg.noise_power,
                cfg.pilot_length, cfg.coherence_block, spec.options.weighting);
          }
        } catch (const std::exception&) {
          // Missing SE already marks every record of this pair.
        }
      }
    } catch (const std::exception&) {
      // Setup-level failure: records keep missing SE.
    }
  };

  const int threads =
      std::min<int>(spec.threads, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    for (const Task& task : tasks) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          run_task(tasks[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<std::pair<double, double>> empirical_cdf(
    const std::vector<ResultRecord>& records, const std::string& scheme,
    std::optional<double> sweep_value) {
  std::vector<double> samples;
  for (const auto& record : records) {
    if (record.scheme != scheme) continue;
    if (sweep_value && record.sweep_value != *sweep_value) continue;
    if (record.se) samples.push_back(*record.se);
  }
  if (samples.empty()) {
    throw std::domain_error("empirical_cdf: no samples match the filter");
  }
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(samples.size());
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    cdf.emplace_back(samples[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

double likely_95(const std::vector<ResultRecord>& records,
                 const std::string& scheme,
                 std::optional<double> sweep_value) {
  std::vector<double> samples;
  for (const auto& record : records) {
    if (record.scheme != scheme) continue;
    if (sweep_value && record.sweep_value != *sweep_value) continue;
    if (record.se) samples.push_back(*record.se);
  }
  if (samples.empty()) {
    throw std::domain_error("likely_95: no samples match the filter");
  }
  return quantile(std::move(samples), 0.05);
}

std::string format_records_csv(const std::vector<ResultRecord>& records) {
  std::string out =
      "schema_version,scheme,sweep_param,sweep_value,setup,ue,se_bits_per_hz\n";
  for (const auto& r : records) {
    out += "1,";
    out += r.scheme;
    out += ',';
    out += r.sweep_param;
    out += ',';
    out += format_double(r.sweep_value);
    out += ',';
    out += std::to_string(r.setup);
    out += ',';
    out += std::to_string(r.ue);
    out += ',';
    out += r.se ? format_double(*r.se) : "nan";
    out += '\n';
  }
  return out;
}

std::vector<ResultRecord> parse_records_csv(const std::string& text) {
  std::vector<ResultRecord> records;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      if (line !=
          "schema_version,scheme,sweep_param,sweep_value,setup,ue,se_bits_per_hz") {
        throw std::runtime_error("parse_records_csv: unexpected header");
      }
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t fpos = 0;
    while (true) {
      const std::size_t comma = line.find(',', fpos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(fpos));
        break;
      }
      fields.push_back(line.substr(fpos, comma - fpos));
      fpos = comma + 1;
    }
    if (fields.size() != 7 || fields[0] != "1") {
      throw std::runtime_error("parse_records_csv: malformed line: " + line);
    }
    ResultRecord r;
    r.scheme = fields[1];
    r.sweep_param = fields[2];
    r.sweep_value = std::strtod(fields[3].c_str(), nullptr);
    r.setup = std::atoi(fields[4].c_str());
    r.ue = std::atoi(fields[5].c_str());
    if (fields[6] == "nan") {
      r.se = std::nullopt;
    } else {
      r.se = std::strtod(fields[6].c_str(), nullptr);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string format_cdf_csv(const std::vector<ResultRecord>& records,
                           const ExperimentSpec& spec) {
  std::string out = "scheme,sweep_param,sweep_value,se_bits_per_hz,cum_prob\n";
  for (const auto& group : group_records(records, spec)) {
    if (group.samples.empty()) continue;
    std::vector<double> sorted = group.samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      out += group.scheme;
      out += ',';
      out += group.param;
      out += ',';
      out += format_double(group.value);
      out += ',';
      out += format_double(sorted[i]);
      out += ',';
      out += format_double(static_cast<double>(i + 1) / n);
      out += '\n';
    }
  }
  return out;
}

std::string format_percentiles_csv(const std::vector<ResultRecord>& records,
                                   const ExperimentSpec& spec) {
  std::string out = "scheme,sweep_param,sweep_value,n_samples,p05,p50,p95,mean_se\n";
  for (const auto& group : group_records(records, spec)) {
    out += group.scheme;
    out += ',';
    out += group.param;
    out += ',';
    out += format_double(group.value);
    out += ',';
    out += std::to_string(group.samples.size());
    if (group.samples.empty()) {
      out += ",nan,nan,nan,nan\n";
      continue;
    }
    double mean = 0.0;
    for (double v : group.samples) mean += v;
    mean /= static_cast<double>(group.samples.size());
    out += ',';
    out += format_double(quantile(group.samples, 0.05));
    out += ',';
    out += format_double(quantile(group.samples, 0.50));
    out += ',';
    out += format_double(quantile(group.samples, 0.95));
    out += ',';
    out += format_double(mean);
    out += '\n';
  }
  return out;
}

std::string format_summary_json(const std::vector<ResultRecord>& records,
                                const ExperimentSpec& spec) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = spec.base.seed;
  j["config"] = config_to_json(spec.base);
  j["groups"] = json::array();
  for (const auto& group : group_records(records, spec)) {
    json g;
    g["scheme"] = group.scheme;
    g["sweep_param"] = group.param;
    g["sweep_value"] = group.value;
    g["n_samples"] = group.samples.size();
    g["n_missing"] = group.n_missing;
    if (group.samples.empty()) {
      g["p05"] = nullptr;
      g["p50"] = nullptr;
      g["p95"] = nullptr;
      g["mean"] = nullptr;
    } else {
      double mean = 0.0;
      for (double v : group.samples) mean += v;
      mean /= static_cast<double>(group.samples.size());
      g["p05"] = quantile(group.samples, 0.05);
      g["p50"] = quantile(group.samples, 0.50);
      g["p95"] = quantile(group.samples, 0.95);
      g["mean"] = mean;
    }
    j["groups"].push_back(std::move(g));
  }
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

void emit_results(const std::vector<ResultRecord>& records,
                  const ExperimentSpec& spec) {
  std::string main_content;
  switch (spec.emit_mode) {
    case EmitMode::kPerUeSamples:
      main_content = format_records_csv(records);
      break;
    case EmitMode::kCdf:
      main_content = format_cdf_csv(records, spec);
      break;
    case EmitMode::kPercentileSummary:
      main_content = format_percentiles_csv(records, spec);
      break;
  }
  write_file(spec.output_path, main_content);
  write_file(spec.output_path + ".summary.json",
             format_summary_json(records, spec));
}

ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("spec parse error in " + path + ": " + e.what());
  }

  if (!j.contains("version") || j["version"].get<int>() != 1) {
    throw std::runtime_error("spec: missing or unsupported version");
  }

  ExperimentSpec spec;
  if (j.contains("config")) config_from_json(j["config"], spec.base);

  if (j.contains("pilot_schemes")) {
    spec.pilot_schemes.clear();
    for (const auto& name : j["pilot_schemes"]) {
      spec.pilot_schemes.push_back(parse_pilot_scheme(name.get<std::string>()));
    }
  }
  if (j.contains("ap_schemes")) {
    spec.ap_schemes.clear();
    for (const auto& name : j["ap_schemes"]) {
      spec.ap_schemes.push_back(parse_ap_scheme(name.get<std::string>()));
    }
  }
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    SweepSpec sweep;
    sweep.param = j["sweep"]["param"].get<std::string>();
    for (const auto& v : j["sweep"]["values"]) {
      sweep.values.push_back(v.get<double>());
    }
    spec.sweep = std::move(sweep);
  }
  if (j.contains("similarity")) {
    const auto name = j["similarity"].get<std::string>();
    if (name == "statistical") {
      spec.options.similarity = SimilarityMetric::kStatistical;
    } else if (name == "instantaneous") {
      spec.options.similarity = SimilarityMetric::kInstantaneous;
    } else {
      throw std::runtime_error("spec: unknown similarity metric '" + name +
                               "'");
    }
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    if (o.contains("capa_literal_pilot_pool")) {
      spec.options.capa.literal_pilot_pool =
          o["capa_literal_pilot_pool"].get<bool>();
    }
    if (o.contains("ap_threshold_quantile")) {
      spec.options.ap_threshold_quantile =
          o["ap_threshold_quantile"].get<double>();
    }
    if (o.contains("ap_literal_gain_threshold")) {
      spec.options.ap_literal_gain_threshold =
          o["ap_literal_gain_threshold"].get<bool>();
    }
    if (o.contains("ap_assign_complement")) {
      spec.options.ap_assign_complement =
          o["ap_assign_complement"].get<bool>();
    }
    if (o.contains("se_weighting")) {
      const auto name = o["se_weighting"].get<std::string>();
      if (name == "lsfd") {
        spec.options.weighting = SeWeighting::kLsfd;
      } else if (name == "equal") {
        spec.options.weighting = SeWeighting::kEqual;
      } else {
        throw std::runtime_error("spec: unknown se_weighting '" + name + "'");
      }
    }
  }
  if (j.contains("emit")) {
    const auto name = j["emit"].get<std::string>();
    if (name == "per-ue-samples") {
      spec.emit_mode = EmitMode::kPerUeSamples;
    } else if (name == "cdf") {
      spec.emit_mode = EmitMode::kCdf;
    } else if (name == "percentile-summary") {
      spec.emit_mode = EmitMode::kPercentileSummary;
    } else {
      throw std::runtime_error("spec: unknown emit mode '" + name + "'");
    }
  }
  if (j.contains("output")) spec.output_path = j["output"].get<std::string>();
  if (j.contains("threads")) spec.threads = j["threads"].get<int>();
  return spec;
}

}  // namespace cfmimo
