#include "flash/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace flash {

DegreeReport nn_degree(const ArchConfig& config, const SpaceSpec& spec,
                       bool enforce_constraints) {
  if (int(config.t.size()) != config.n_c || config.n_c <= 0 ||
      config.d_c <= 0 || config.w_m <= 0) {
    throw std::domain_error("malformed config: needs w_m,d_c,n_c > 0 and one t per cell");
  }
  for (int t_c : config.t) {
    if (t_c < 0) throw std::domain_error("negative skip budget");
  }
  if (enforce_constraints) {
    const ValidationReport report = validate(config, spec);
    if (!report.ok()) {
      throw std::domain_error("config outside search space: " +
                              report.violations.front());
    }
  }

  DegreeReport out;
  for (int c = 0; c < config.n_c; ++c) {
    const int w_c = spec.cell_width(c, config.w_m);
    const int t_c = config.t[c];
    std::int64_t budget_sum = 0;  // sum_{i=2}^{d_c-1} min{(i-1) w_c, t_c}
    for (int i = 2; i < config.d_c; ++i) {
      budget_sum += std::min<std::int64_t>(std::int64_t(i - 1) * w_c, t_c);
    }
    CellDegree cell;
    cell.cell = c;
    cell.w_c = w_c;
    cell.d_c = config.d_c;
    cell.sc = budget_sum * w_c;
    cell.g_lattice = Rational(w_c);
    cell.g_random = Rational(cell.sc, std::int64_t(w_c) * config.d_c);
    out.g_lattice = out.g_lattice + cell.g_lattice;
    out.g_random = out.g_random + cell.g_random;
    out.cells.push_back(cell);
  }
  out.g = out.g_lattice + out.g_random;
  return out;
}

std::vector<CellKernelCount> count_kernels_oracle(
    std::span<const LayerDescriptor> layers) {
  std::vector<CellKernelCount> cells;
  for (const LayerDescriptor& layer : layers) {
    if (cells.empty() || cells.back().cell != layer.cell) {
      cells.push_back({layer.cell, 0, 0, 0});
    }
    CellKernelCount& cell = cells.back();
    // Convention from the closed form: every layer contributes w_c*w_c
    // short-range kernels, so the cell-boundary layer counts as if it read
    // the cell's own width.
    cell.lattice_kernels += std::int64_t(layer.n_of) * layer.n_of;
    cell.skip_kernels += std::int64_t(layer.concat_count) * layer.n_of;
    cell.nodes += layer.n_of;
  }
  return cells;
}

Rational degree_from_kernel_counts(std::span<const CellKernelCount> cells) {
  Rational g;
  for (const CellKernelCount& cell : cells) {
    g = g + Rational(cell.lattice_kernels + cell.skip_kernels, cell.nodes);
  }
  return g;
}

}  // namespace flash
