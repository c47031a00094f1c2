#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace flash {

// One candidate architecture: a chain of n_c cells, each d_c convolutional
// layers wide w_c = base_width_c * w_m, with per-cell skip budget t[c] capping
// how many earlier channels a layer may concatenate.
struct ArchConfig {
  int w_m = 1;
  int n_c = 3;
  int d_c = 5;
  std::vector<int> t;  // length n_c

  // Lexicographic (w_m, n_c, d_c, t...) order; used for deterministic
  // tie-breaking in searches.
  friend auto operator<=>(const ArchConfig&, const ArchConfig&) = default;
};

// Bounds and coupling constraints defining the searchable set.
//
// The default instance is the CIFAR-scale space: w_m in [1,3], d_c in [5,30],
// three cells with base widths [16,32,64], t_1 >= 5 and t_{c+1} >= 2*t_c,
// each t_c <= w_c*(d_c-2).
struct SpaceSpec {
  int w_m_min = 1;
  int w_m_max = 3;
  int d_c_min = 5;
  int d_c_max = 30;
  int n_c_min = 3;
  int n_c_max = 3;
  std::vector<int> base_widths{16, 32, 64};
  int t1_min = 5;

  bool n_c_fixed() const { return n_c_min == n_c_max; }

  // Base channel count of a cell (zero-based). Cells beyond the configured
  // list extend as 16*2^cell so a spec with a wider n_c range stays usable.
  int base_width(int cell) const;

  // w_c of a cell for a given multiplier.
  int cell_width(int cell, int w_m) const { return base_width(cell) * w_m; }

  // Upper bound for t[cell]: w_c * (d_c - 2), clamped at zero.
  int t_ceiling(int cell, int w_m, int d_c) const;

  // Coupling lower bound for t[cell]: t1_min for the first cell, 2*t_prev
  // after that.
  int t_floor(int cell, int t_prev) const {
    return cell == 0 ? t1_min : 2 * t_prev;
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Per-cell channel counts [base_width_c * w_m]. Throws std::domain_error when
// w_m is outside the spec range.
std::vector<int> cell_widths(int w_m, const SpaceSpec& spec);

// Lists every violated constraint; an empty report means the config is a
// member of the search space. Never throws.
ValidationReport validate(const ArchConfig& config, const SpaceSpec& spec);

// Exact cardinality of the valid set. Evaluated by an exact integer recursion
// over the coupled t ranges (no floating point), so it agrees with exhaustive
// enumeration on any spec. Throws DataError if the count exceeds uint64.
std::uint64_t search_space_size(const SpaceSpec& spec);

// n configs drawn uniformly from the valid set (rejection sampling from the
// bounding box). Deterministic for a fixed seed. Throws InfeasibleError when
// the spec admits no valid config.
std::vector<ArchConfig> sample_uniform(const SpaceSpec& spec,
                                       std::uint64_t seed, std::size_t n);

// Input tensor and kernel geometry needed to expand a config into layers.
// Mirrors the corresponding HwConfig fields (see HwConfig::input()).
struct InputSpec {
  int h0 = 32;
  int w0 = 32;
  int c0 = 3;
  int kx = 3;
  int ky = 3;
};

// One convolutional layer of a realized network.
struct LayerDescriptor {
  int cell = 0;   // zero-based cell index
  int layer = 0;  // zero-based layer index within the cell
  int kx = 3;
  int ky = 3;
  int n_if = 0;  // input channels, including concatenated skip channels
  int n_of = 0;  // output channels (= w_c)
  int h = 0;     // output feature-map height
  int w = 0;     // output feature-map width
  int concat_count = 0;  // skip channels concatenated at this layer
};

// Expands a config into its n_c*d_c layer descriptors. Feature maps halve
// (ceiling division) at each cell boundary; layer i (zero-based) of a cell
// concatenates min{(i-1)*w_c, t_c} skip channels for i in {2,...,d_c-1}.
std::vector<LayerDescriptor> realize_layers(const ArchConfig& config,
                                            const SpaceSpec& spec,
                                            const InputSpec& input);

}  // namespace flash
