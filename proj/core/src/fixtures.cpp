#include "flash/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "flash/io.hpp"
#include "flash/random.hpp"
#include "flash/topology.hpp"

namespace flash {

namespace {

double dot6(const std::vector<double>& w, const FeatureSet& f) {
  return w[0] * f.comp[0] + w[1] * f.comp[1] + w[2] * f.comp[2] +
         w[3] * f.comp[3] + w[4] * f.noc[0] + w[5] * f.noc[1];
}

double dot7(const std::vector<double>& w, const FeatureSet& f) {
  double acc = 0.0;
  for (int i = 0; i < 7; ++i) acc += w[std::size_t(i)] * f.energy[std::size_t(i)];
  return acc;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double FixtureTruth::latency_of(const ArchConfig& config, const SpaceSpec& spec,
                                const HwConfig& hw) const {
  return dot6(latency_weights, features(config, spec, hw));
}

double FixtureTruth::energy_of(const ArchConfig& config, const SpaceSpec& spec,
                               const HwConfig& hw) const {
  const FeatureSet f = features(config, spec, hw);
  return dot7(energy_weights, f) * double(f.n_tiles);
}

double FixtureTruth::area_of(const ArchConfig& config, const SpaceSpec& spec,
                             const HwConfig& hw) const {
  return area_per_tile * double(total_tiles(config, spec, hw)) + area_rest;
}

std::string truth_to_json(const FixtureTruth& truth) {
  nlohmann::json j;
  j["accuracy"] = {{"a", truth.accuracy.a},
                   {"b", truth.accuracy.b},
                   {"c", truth.accuracy.c}};
  j["latency_weights"] = truth.latency_weights;
  j["energy_weights"] = truth.energy_weights;
  j["area"] = {truth.area_per_tile, truth.area_rest};
  j["schema_version"] = kSchemaVersion;
  return j.dump(2) + "\n";
}

void write_fixture_files(const std::filesystem::path& dir, const SpaceSpec& spec,
                         const HwConfig& hw, const FixtureTruth& truth,
                         const FixtureOptions& options) {
  std::filesystem::create_directories(dir);

  Rng noise_rng(options.seed ^ 0x5eedf00dULL);
  auto noise = [&]() {
    if (options.noise_sigma <= 0.0) return 1.0;
    return std::max(0.01, 1.0 + options.noise_sigma * normal(noise_rng));
  };

  auto write_csv = [&](const char* name, const char* column,
                       const std::vector<ArchConfig>& configs, auto&& target) {
    std::string text = "w_m,n_c,d_c,t," + std::string(column) + "\n";
    for (const ArchConfig& config : configs) {
      text += std::to_string(config.w_m) + "," + std::to_string(config.n_c) +
              "," + std::to_string(config.d_c) + "," + join_t(config.t) + "," +
              format_double(target(config)) + "\n";
    }
    write_file(dir / name, text);
  };

  const auto acc_configs = sample_uniform(spec, options.seed + 11, options.n_accuracy);
  write_csv("accuracy.csv", "accuracy", acc_configs, [&](const ArchConfig& c) {
    const double g = nn_degree(c, spec).g.to_double();
    const double theta = predict_accuracy(truth.accuracy, g) * noise();
    return std::clamp(theta, 1e-6, 1.0 - 1e-6);
  });

  const auto lat_configs = sample_uniform(spec, options.seed + 22, options.n_hw);
  write_csv("latency.csv", "latency_ms", lat_configs, [&](const ArchConfig& c) {
    return truth.latency_of(c, spec, hw) * noise();
  });

  const auto en_configs = sample_uniform(spec, options.seed + 33, options.n_hw);
  write_csv("energy.csv", "energy_mj", en_configs, [&](const ArchConfig& c) {
    return truth.energy_of(c, spec, hw) * noise();
  });

  const auto area_configs = sample_uniform(spec, options.seed + 44, options.n_hw);
  write_csv("area.csv", "area_mm2", area_configs, [&](const ArchConfig& c) {
    return truth.area_of(c, spec, hw) * noise();
  });

  write_file(dir / "hw.json", hw_to_json(hw) + "\n");
  write_file(dir / "spec.json", spec_to_json(spec) + "\n");
  write_file(dir / "truth.json", truth_to_json(truth));
}

}  // namespace flash
