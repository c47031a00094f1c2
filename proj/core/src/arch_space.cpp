#include "flash/arch_space.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "flash/errors.hpp"
#include "flash/random.hpp"

namespace flash {

namespace {

std::string fmt(const char* prefix, long long v) {
  return std::string(prefix) + std::to_string(v);
}

using u128 = unsigned __int128;

}  // namespace

int SpaceSpec::base_width(int cell) const {
  if (cell < int(base_widths.size())) return base_widths[cell];
  return 16 << cell;
}

int SpaceSpec::t_ceiling(int cell, int w_m, int d_c) const {
  return std::max(0, cell_width(cell, w_m) * (d_c - 2));
}

std::vector<int> cell_widths(int w_m, const SpaceSpec& spec) {
  if (w_m < spec.w_m_min || w_m > spec.w_m_max) {
    throw std::domain_error("w_m=" + std::to_string(w_m) + " outside [" +
                            std::to_string(spec.w_m_min) + "," +
                            std::to_string(spec.w_m_max) + "]");
  }
  std::vector<int> widths(spec.n_c_max);
  for (int c = 0; c < spec.n_c_max; ++c) widths[c] = spec.cell_width(c, w_m);
  return widths;
}

ValidationReport validate(const ArchConfig& config, const SpaceSpec& spec) {
  ValidationReport report;
  auto flag = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (config.w_m < spec.w_m_min) flag(fmt("w_m < ", spec.w_m_min));
  if (config.w_m > spec.w_m_max) flag(fmt("w_m > ", spec.w_m_max));
  if (config.d_c < spec.d_c_min) flag(fmt("d_c < ", spec.d_c_min));
  if (config.d_c > spec.d_c_max) flag(fmt("d_c > ", spec.d_c_max));
  if (config.n_c < spec.n_c_min) flag(fmt("n_c < ", spec.n_c_min));
  if (config.n_c > spec.n_c_max) flag(fmt("n_c > ", spec.n_c_max));
  if (int(config.t.size()) != config.n_c) {
    flag("len(t)=" + std::to_string(config.t.size()) + " != n_c=" +
         std::to_string(config.n_c));
    return report;  // per-cell checks below assume one budget per cell
  }

  for (int c = 0; c < config.n_c; ++c) {
    const int t_c = config.t[c];
    const std::string name = "t_" + std::to_string(c + 1);
    if (t_c < 0) {
      flag(name + " < 0");
      continue;
    }
    if (c == 0) {
      if (t_c < spec.t1_min) flag(name + " < " + std::to_string(spec.t1_min));
    } else if (t_c < 2 * config.t[c - 1]) {
      flag(name + " < 2*t_" + std::to_string(c) + "=" +
           std::to_string(2 * config.t[c - 1]));
    }
    // Only meaningful against in-range (w_m, d_c); out-of-range values were
    // already flagged above.
    const int w_m = std::clamp(config.w_m, spec.w_m_min, spec.w_m_max);
    const int d_c = std::clamp(config.d_c, spec.d_c_min, spec.d_c_max);
    const int ceiling = spec.t_ceiling(c, w_m, d_c);
    if (config.w_m >= spec.w_m_min && config.w_m <= spec.w_m_max &&
        config.d_c >= spec.d_c_min && config.d_c <= spec.d_c_max &&
        t_c > ceiling) {
      flag(name + " > " + std::to_string(spec.cell_width(c, w_m)) + "*(" +
           std::to_string(d_c) + "-2)=" + std::to_string(ceiling));
    }
  }
  return report;
}

namespace {

// Number of valid t vectors for one (w_m, d_c, n_c) slice: a suffix-count
// recursion over the coupled ranges t_1 in [t1_min, ceil_1],
// t_{c+1} in [2 t_c, ceil_{c+1}]. Exact integers throughout.
u128 count_t_vectors(const SpaceSpec& spec, int w_m, int d_c, int n_c) {
  if (n_c <= 0) return 0;
  // g[v] = number of valid (t_{c}, ..., t_{n_c-1}) given t_c >= v.
  // Last cell first; then fold leftwards.
  const int last = n_c - 1;
  int ceil_c = spec.t_ceiling(last, w_m, d_c);
  if (ceil_c < 0) return 0;
  std::vector<u128> g(std::size_t(ceil_c) + 2, 0);
  for (int v = ceil_c; v >= 0; --v) g[v] = u128(ceil_c - v + 1);

  for (int c = last - 1; c >= 1; --c) {
    const int ceil_prev = ceil_c;
    ceil_c = spec.t_ceiling(c, w_m, d_c);
    std::vector<u128> h(std::size_t(ceil_c) + 2, 0);
    for (int v = ceil_c; v >= 0; --v) {
      const u128 tail = (2 * v <= ceil_prev) ? g[2 * v] : u128(0);
      h[v] = h[v + 1] + tail;
    }
    g = std::move(h);
  }

  const int ceil_first = (n_c == 1) ? ceil_c : spec.t_ceiling(0, w_m, d_c);
  if (n_c == 1) {
    if (spec.t1_min > ceil_first) return 0;
    return u128(ceil_first - std::max(spec.t1_min, 0) + 1);
  }
  u128 total = 0;
  for (int t1 = std::max(spec.t1_min, 0); t1 <= ceil_first; ++t1) {
    if (2 * t1 <= ceil_c + 0) {
      total += g[std::min(2 * t1, int(g.size()) - 1)];
    }
  }
  return total;
}

}  // namespace

std::uint64_t search_space_size(const SpaceSpec& spec) {
  u128 total = 0;
  for (int n_c = spec.n_c_min; n_c <= spec.n_c_max; ++n_c) {
    for (int w_m = spec.w_m_min; w_m <= spec.w_m_max; ++w_m) {
      for (int d_c = spec.d_c_min; d_c <= spec.d_c_max; ++d_c) {
        total += count_t_vectors(spec, w_m, d_c, n_c);
      }
    }
  }
  if (total > u128(std::numeric_limits<std::uint64_t>::max())) {
    throw DataError("search space size exceeds 2^64");
  }
  return std::uint64_t(total);
}

namespace {

// Size of the axis-aligned t bounding box for one (w_m, d_c, n_c) slice:
// t_1 in [t1_min, ceil_1], t_c in [0, ceil_c]. Contains every valid vector.
u128 box_size(const SpaceSpec& spec, int w_m, int d_c, int n_c) {
  u128 size = 1;
  for (int c = 0; c < n_c; ++c) {
    const int lo = (c == 0) ? std::max(spec.t1_min, 0) : 0;
    const int hi = spec.t_ceiling(c, w_m, d_c);
    if (hi < lo) return 0;
    const u128 extent = u128(hi - lo + 1);
    if (size > u128(-1) / extent) {
      throw DataError("sampling box exceeds 128-bit range");
    }
    size *= extent;
  }
  return size;
}

}  // namespace

std::vector<ArchConfig> sample_uniform(const SpaceSpec& spec,
                                       std::uint64_t seed, std::size_t n) {
  // Slice the box by (n_c, w_m, d_c) and weight the discrete choice by slice
  // volume so rejection from the union stays exactly uniform.
  struct Slice {
    int n_c, w_m, d_c;
    u128 box;
  };
  std::vector<Slice> slices;
  u128 total_box = 0;
  bool any_valid = false;
  for (int n_c = spec.n_c_min; n_c <= spec.n_c_max; ++n_c) {
    for (int w_m = spec.w_m_min; w_m <= spec.w_m_max; ++w_m) {
      for (int d_c = spec.d_c_min; d_c <= spec.d_c_max; ++d_c) {
        const u128 box = box_size(spec, w_m, d_c, n_c);
        if (box == 0) continue;
        slices.push_back({n_c, w_m, d_c, box});
        total_box += box;
        any_valid = any_valid || count_t_vectors(spec, w_m, d_c, n_c) > 0;
      }
    }
  }
  if (!any_valid) {
    throw InfeasibleError("spec admits no valid configuration");
  }

  Rng rng(seed);
  // Draw a u128 uniform in [0, total_box) from two 64-bit words.
  auto draw_slice = [&]() -> const Slice& {
    u128 r;
    do {
      r = (u128(rng()) << 64) | u128(rng());
    } while (r >= (u128(-1) / total_box) * total_box);
    r %= total_box;
    for (const Slice& s : slices) {
      if (r < s.box) return s;
      r -= s.box;
    }
    return slices.back();  // unreachable
  };

  std::vector<ArchConfig> out;
  out.reserve(n);
  while (out.size() < n) {
    const Slice& s = draw_slice();
    ArchConfig c;
    c.n_c = s.n_c;
    c.w_m = s.w_m;
    c.d_c = s.d_c;
    c.t.resize(s.n_c);
    for (int cell = 0; cell < s.n_c; ++cell) {
      const int lo = (cell == 0) ? std::max(spec.t1_min, 0) : 0;
      const int hi = spec.t_ceiling(cell, s.w_m, s.d_c);
      c.t[cell] = uniform_int(rng, lo, hi);
    }
    if (validate(c, spec).ok()) out.push_back(std::move(c));
  }
  return out;
}

std::vector<LayerDescriptor> realize_layers(const ArchConfig& config,
                                            const SpaceSpec& spec,
                                            const InputSpec& input) {
  std::vector<LayerDescriptor> layers;
  layers.reserve(std::size_t(config.n_c) * std::size_t(config.d_c));
  int h = input.h0;
  int w = input.w0;
  int prev_channels = input.c0;
  for (int cell = 0; cell < config.n_c; ++cell) {
    if (cell > 0) {
      h = (h + 1) / 2;
      w = (w + 1) / 2;
    }
    const int w_c = spec.cell_width(cell, config.w_m);
    const int t_c = config.t[cell];
    for (int i = 0; i < config.d_c; ++i) {
      LayerDescriptor layer;
      layer.cell = cell;
      layer.layer = i;
      layer.kx = input.kx;
      layer.ky = input.ky;
      layer.n_of = w_c;
      layer.h = h;
      layer.w = w;
      if (i >= 2) {
        layer.concat_count = std::min((i - 1) * w_c, t_c);
      }
      layer.n_if = (i == 0) ? prev_channels : w_c + layer.concat_count;
      layers.push_back(layer);
    }
    prev_channels = w_c;
  }
  return layers;
}

}  // namespace flash
