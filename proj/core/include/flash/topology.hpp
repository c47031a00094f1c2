#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "flash/arch_space.hpp"

namespace flash {

// Exact rational on int64. Degree values divide small kernel counts by small
// node counts, so normalized operands stay far from overflow; the tests rely
// on exact equality, which floating point cannot provide across platforms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double to_double() const { return double(num) / double(den); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den, b.den);
    const std::int64_t scale_a = b.den / g;
    const std::int64_t scale_b = a.den / g;
    return Rational(a.num * scale_a + b.num * scale_b, a.den * scale_a);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num, b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

// Per-cell degree decomposition. The cell graph has w_c*d_c nodes; each
// convolution kernel is one undirected link, split into the short-range
// lattice part (w_c*w_c per layer) and the skip part (concat_count*w_c).
struct CellDegree {
  int cell = 0;
  int w_c = 0;
  int d_c = 0;
  std::int64_t sc = 0;  // skip kernels SC_c = w_c * sum_i min{(i-1)w_c, t_c}
  Rational g_lattice;   // = w_c
  Rational g_random;    // = SC_c / (w_c * d_c)
};

struct DegreeReport {
  Rational g;          // g_lattice + g_random
  Rational g_lattice;  // sum of cell widths
  Rational g_random;   // sum of per-cell skip degrees
  std::vector<CellDegree> cells;
};

// NN-Degree of a config: sum over cells of w_c + SC_c/(w_c*d_c). Exact
// rational arithmetic. With enforce_constraints the config must be a member
// of the search space (std::domain_error otherwise); without it only the
// structural shape is required, which supports metric-only use such as
// `flash degree` on out-of-space points.
DegreeReport nn_degree(const ArchConfig& config, const SpaceSpec& spec,
                       bool enforce_constraints = true);

struct CellKernelCount {
  int cell = 0;
  std::int64_t lattice_kernels = 0;
  std::int64_t skip_kernels = 0;
  std::int64_t nodes = 0;
};

// Brute-force link counting over realized layers, used as the test oracle for
// nn_degree: walks every layer and accumulates kernels instead of evaluating
// the closed form.
std::vector<CellKernelCount> count_kernels_oracle(
    std::span<const LayerDescriptor> layers);

// Average-degree sum implied by per-cell kernel counts (links/nodes per cell).
Rational degree_from_kernel_counts(std::span<const CellKernelCount> cells);

}  // namespace flash
