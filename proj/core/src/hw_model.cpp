#include "flash/hw_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>

#include "flash/errors.hpp"
#include "flash/topology.hpp"

namespace flash {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

TileRequirement tile_requirements(const LayerDescriptor& layer, const HwConfig& hw) {
  if (layer.n_if <= 0 || layer.n_of <= 0 || hw.pe_x <= 0 || hw.pe_y <= 0 ||
      hw.n_bits <= 0 || hw.ce_per_tile <= 0 || hw.impe_per_ce <= 0) {
    throw std::domain_error("tile_requirements needs positive dimensions");
  }
  TileRequirement req;
  req.rows = ceil_div(std::int64_t(layer.kx) * layer.ky * layer.n_if, hw.pe_x);
  req.cols = ceil_div(std::int64_t(layer.n_of) * hw.n_bits, hw.pe_y);
  req.tiles = ceil_div(req.rows * req.cols,
                       std::int64_t(hw.ce_per_tile) * hw.impe_per_ce);
  return req;
}

TileCount tile_count(const ArchConfig& config, const SpaceSpec& spec,
                     const HwConfig& hw) {
  TileCount count;
  for (const LayerDescriptor& layer : realize_layers(config, spec, hw.input())) {
    count.per_layer.push_back(tile_requirements(layer, hw));
    count.total += count.per_layer.back().tiles;
  }
  return count;
}

std::int64_t total_tiles(const ArchConfig& config, const SpaceSpec& spec,
                         const HwConfig& hw) {
  return tile_count(config, spec, hw).total;
}

double area(const ArchConfig& config, const SpaceSpec& spec, const HwConfig& hw) {
  return double(total_tiles(config, spec, hw)) * (hw.a_tile + hw.a_router) +
         hw.a_rest;
}

FeatureSet features(const ArchConfig& config, const SpaceSpec& spec,
                    const HwConfig& hw) {
  const auto layers = realize_layers(config, spec, hw.input());
  const auto degree = nn_degree(config, spec, /*enforce_constraints=*/false);

  std::int64_t sc_sum = 0;
  std::int64_t comm_sum = 0;  // sum_c SC_c * H_c * W_c, in elements
  std::int64_t fm_sum = 0;    // sum_c d_c * w_c * H_c * W_c
  std::int64_t flop_sum = 0;  // 2 * multiply-accumulates over all layers
  std::int64_t n_tiles = 0;

  for (int c = 0; c < config.n_c; ++c) {
    const CellDegree& cell = degree.cells[c];
    // Cell output map size: all layers of a cell share H, W.
    const LayerDescriptor& first = layers[std::size_t(c) * config.d_c];
    const std::int64_t hw_elems = std::int64_t(first.h) * first.w;
    sc_sum += cell.sc;
    comm_sum += cell.sc * hw_elems;
    fm_sum += std::int64_t(config.d_c) * cell.w_c * hw_elems;
  }
  for (const LayerDescriptor& layer : layers) {
    flop_sum += 2 * std::int64_t(layer.kx) * layer.ky * layer.n_if *
                layer.n_of * layer.h * layer.w;
    n_tiles += tile_requirements(layer, hw).tiles;
  }

  FeatureSet f;
  const double w_m = config.w_m;
  const double d_c = config.d_c;
  const double n_c = config.n_c;
  f.comp = {w_m, d_c, n_c, n_c * d_c * w_m * w_m};
  f.noc = {double(sc_sum), double(comm_sum)};
  f.energy = {w_m,
              d_c,
              n_c,
              double(sc_sum),
              double(comm_sum),
              double(flop_sum),
              double(fm_sum)};
  f.n_tiles = n_tiles;
  return f;
}

namespace {

double dot(std::span<const double> weights, std::span<const double> values) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * values[i];
  return acc;
}

void require_fitted(const LinearModel& model, std::size_t expect,
                    const char* name) {
  if (!model.fitted()) {
    throw DataError(std::string(name) + " model is not fitted");
  }
  if (model.weights.size() != expect) {
    throw DataError(std::string(name) + " model has " +
                    std::to_string(model.weights.size()) + " weights, expected " +
                    std::to_string(expect));
  }
}

}  // namespace

double predict_latency(const CostModels& models, const FeatureSet& f) {
  require_fitted(models.lat_comp, 4, "latency (computation)");
  require_fitted(models.lat_noc, 2, "latency (NoC)");
  return dot(models.lat_comp.weights, f.comp) + dot(models.lat_noc.weights, f.noc);
}

double predict_latency(const CostModels& models, const ArchConfig& config,
                       const SpaceSpec& spec, const HwConfig& hw) {
  return predict_latency(models, features(config, spec, hw));
}

double predict_energy(const CostModels& models, const FeatureSet& f) {
  require_fitted(models.energy, 7, "energy");
  return dot(models.energy.weights, f.energy) * double(f.n_tiles);
}

double predict_energy(const CostModels& models, const ArchConfig& config,
                      const SpaceSpec& spec, const HwConfig& hw) {
  return predict_energy(models, features(config, spec, hw));
}

double predict_area(const CostModels& models, const FeatureSet& f,
                    const HwConfig& hw) {
  if (models.area.fitted()) {
    require_fitted(models.area, 2, "area");
    return models.area.weights[0] * double(f.n_tiles) + models.area.weights[1];
  }
  return double(f.n_tiles) * (hw.a_tile + hw.a_router) + hw.a_rest;
}

double predict_area(const CostModels& models, const ArchConfig& config,
                    const SpaceSpec& spec, const HwConfig& hw) {
  return predict_area(models, features(config, spec, hw), hw);
}

std::vector<double> fit_linear(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& targets) {
  if (rows.empty() || rows.size() != targets.size()) {
    throw FitError("fit_linear needs matching, non-empty rows and targets");
  }
  const std::size_t n = rows.size();
  const std::size_t k = rows.front().size();
  if (k == 0) throw FitError("fit_linear needs at least one feature");
  if (n < k) {
    throw FitError("fit_linear needs at least " + std::to_string(k) +
                   " rows for " + std::to_string(k) + " features, got " +
                   std::to_string(n));
  }

  Eigen::MatrixXd x(n, k);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != k) {
      throw FitError("fit_linear row " + std::to_string(i) +
                     " has inconsistent width");
    }
    for (std::size_t j = 0; j < k; ++j) x(i, j) = rows[i][j];
    y(i) = targets[i];
  }

  // Feature magnitudes span many orders (w_m vs FLOP counts); equilibrate
  // columns to unit max-abs so the QR sees a well-scaled matrix.
  Eigen::VectorXd scale(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double m = x.col(j).cwiseAbs().maxCoeff();
    scale(j) = m > 0.0 ? m : 1.0;
    x.col(j) /= scale(j);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (std::size_t(qr.rank()) < k) {
    // The columns pivoted past the numerical rank are the dependent ones.
    const auto& perm = qr.colsPermutation().indices();
    std::string cols;
    for (Eigen::Index i = qr.rank(); i < Eigen::Index(k); ++i) {
      if (!cols.empty()) cols += ", ";
      cols += std::to_string(perm[i]);
    }
    throw FitError("design matrix is rank deficient; dependent columns: " + cols);
  }

  const Eigen::VectorXd w = qr.solve(y);
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = w(Eigen::Index(j)) / scale(j);
  return out;
}

}  // namespace flash
