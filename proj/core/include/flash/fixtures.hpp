#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "flash/arch_space.hpp"
#include "flash/hw_model.hpp"
#include "flash/predictor.hpp"

namespace flash {

// Ground-truth models behind the synthetic sample generator. The generator
// exists so the full fit-and-search pipeline is testable without a circuit
// simulator or a device power meter.
struct FixtureTruth {
  AccuracyModel accuracy{1.02, 8.0, -2.0, 0, 0.0};
  // 4 computation + 2 NoC latency weights (ms), 7 per-tile energy weights (mJ).
  std::vector<double> latency_weights{0.05, 0.02, 0.10, 0.003, 2e-4, 5e-7};
  std::vector<double> energy_weights{0.002, 0.001,  0.004, 1e-5,
                                     2e-8,  1.5e-9, 3e-7};
  double area_per_tile = 0.065;  // A_T + A_R, mm^2
  double area_rest = 5.0;        // mm^2

  double latency_of(const ArchConfig&, const SpaceSpec&, const HwConfig&) const;
  double energy_of(const ArchConfig&, const SpaceSpec&, const HwConfig&) const;
  double area_of(const ArchConfig&, const SpaceSpec&, const HwConfig&) const;
};

struct FixtureOptions {
  std::size_t n_accuracy = 25;
  std::size_t n_hw = 180;
  double noise_sigma = 0.0;  // multiplicative gaussian noise on measurements
  std::uint64_t seed = 1;
};

// Writes accuracy.csv, latency.csv, energy.csv, area.csv, hw.json, spec.json,
// and truth.json into dir. Deterministic per seed.
void write_fixture_files(const std::filesystem::path& dir, const SpaceSpec& spec,
                         const HwConfig& hw, const FixtureTruth& truth,
                         const FixtureOptions& options);

std::string truth_to_json(const FixtureTruth& truth);

}  // namespace flash
