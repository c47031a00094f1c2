#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flash/arch_space.hpp"

namespace flash {

// In-memory-computing fabric description plus the fixed area constants of the
// closed-form area model A = N_T*(A_T + A_R) + A_rest.
struct HwConfig {
  int pe_x = 128;  // imPE crossbar rows
  int pe_y = 128;  // imPE crossbar columns
  int n_bits = 8;  // weight precision
  int ce_per_tile = 4;
  int impe_per_ce = 4;
  int kx = 3;
  int ky = 3;
  int h0 = 32;
  int w0 = 32;
  int c0 = 3;
  double a_tile = 0.05;     // mm^2
  double a_router = 0.015;  // mm^2
  double a_rest = 5.0;      // mm^2, peripherals + remaining NoC

  InputSpec input() const { return {h0, w0, c0, kx, ky}; }
};

struct TileRequirement {
  std::int64_t rows = 0;   // imPE array rows for the layer
  std::int64_t cols = 0;   // imPE array columns for the layer
  std::int64_t tiles = 0;  // tiles after packing rows*cols into c*p imPEs
};

struct TileCount {
  std::vector<TileRequirement> per_layer;
  std::int64_t total = 0;  // N_T
};

// imPE demand of a single layer:
//   rows  = ceil(Kx*Ky*N_if / PE_x)
//   cols  = ceil(N_of*N_bits / PE_y)
//   tiles = ceil(rows*cols / (c*p))
TileRequirement tile_requirements(const LayerDescriptor& layer, const HwConfig& hw);

TileCount tile_count(const ArchConfig& config, const SpaceSpec& spec,
                     const HwConfig& hw);

std::int64_t total_tiles(const ArchConfig& config, const SpaceSpec& spec,
                         const HwConfig& hw);

// Closed-form chip area from the HwConfig constants.
double area(const ArchConfig& config, const SpaceSpec& spec, const HwConfig& hw);

// Feature vectors feeding the linear cost models. Per-cell quantities are
// summed across cells so the vector lengths do not depend on n_c.
struct FeatureSet {
  std::array<double, 4> comp{};    // [w_m, d_c, n_c, n_c*d_c*w_m^2]
  std::array<double, 2> noc{};     // [sum SC_c, sum Comm_c]
  std::array<double, 7> energy{};  // [w_m, d_c, n_c, SC, Comm, FLOP, FM]
  std::int64_t n_tiles = 0;        // N_T
};

FeatureSet features(const ArchConfig& config, const SpaceSpec& spec,
                    const HwConfig& hw);

// A fitted linear model: weights aligned to one of the feature vectors above.
struct LinearModel {
  std::vector<double> weights;
  double rmse = 0.0;
  std::size_t n_samples = 0;

  bool fitted() const { return !weights.empty(); }
};

struct CostModels {
  LinearModel lat_comp;  // 4 weights against FeatureSet::comp
  LinearModel lat_noc;   // 2 weights against FeatureSet::noc
  LinearModel energy;    // 7 weights against FeatureSet::energy (per tile)
  LinearModel area;      // optional; [per-tile slope, offset] against [N_T, 1]

  bool latency_fitted() const { return lat_comp.fitted() && lat_noc.fitted(); }
};

// Latency in ms: dot(lat_comp, F_comp) + dot(lat_noc, F_NoC).
double predict_latency(const CostModels& models, const FeatureSet& f);
double predict_latency(const CostModels& models, const ArchConfig& config,
                       const SpaceSpec& spec, const HwConfig& hw);

// Energy in mJ: dot(energy, F_E) * N_T.
double predict_energy(const CostModels& models, const FeatureSet& f);
double predict_energy(const CostModels& models, const ArchConfig& config,
                      const SpaceSpec& spec, const HwConfig& hw);

// Area in mm^2 from the fitted [slope, offset] model when present, otherwise
// from the HwConfig constants.
double predict_area(const CostModels& models, const FeatureSet& f,
                    const HwConfig& hw);
double predict_area(const CostModels& models, const ArchConfig& config,
                    const SpaceSpec& spec, const HwConfig& hw);

// Ordinary least squares: returns the weight vector minimizing ||X w - y||.
// Requires rows >= columns and a full-column-rank X; rank deficiency raises
// FitError naming the dependent columns.
std::vector<double> fit_linear(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& targets);

}  // namespace flash
