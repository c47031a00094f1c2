#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "flash/arch_space.hpp"
#include "flash/errors.hpp"
#include "flash/hw_model.hpp"
#include "flash/predictor.hpp"

namespace flash {

// Hard bounds of the constrained search; absent fields are inactive.
struct Constraints {
  std::optional<double> theta_min;
  std::optional<double> area_max;
  std::optional<double> latency_max;
  std::optional<double> energy_max;

  bool any() const {
    return theta_min || area_max || latency_max || energy_max;
  }
};

enum class ObjectiveMode {
  full,       // theta / (area * latency * energy)
  device,     // theta / (latency * energy); fixed-silicon targets
  nn_degree,  // g itself, the training-free proxy
};

// The objective plus the fitted models it draws from. Non-owning: callers
// keep the models alive for the duration of a search.
struct Objective {
  ObjectiveMode mode = ObjectiveMode::full;
  const SpaceSpec* space = nullptr;
  const HwConfig* hw = nullptr;
  const AccuracyModel* accuracy = nullptr;
  const CostModels* cost = nullptr;
};

struct Metrics {
  double theta = std::numeric_limits<double>::quiet_NaN();
  double area_mm2 = std::numeric_limits<double>::quiet_NaN();
  double latency_ms = std::numeric_limits<double>::quiet_NaN();
  double energy_mj = std::numeric_limits<double>::quiet_NaN();
  double g = std::numeric_limits<double>::quiet_NaN();
};

struct Evaluation {
  double value = 0.0;
  bool feasible = false;
  double violation = 0.0;  // sum of relative constraint excesses; 0 if feasible
  Metrics metrics;
};

// Scores one config: predicted metrics, constraint feasibility, and the mode
// formula. Infeasible points still report their value. Throws DataError when
// a model required by the mode or by an active constraint is missing.
Evaluation evaluate(const ArchConfig& config, const Objective& objective,
                    const Constraints& constraints);

// ---------------------------------------------------------------------------
// Lattice global minimizer.
//
// The step-lambda lattice of an integer box is evaluated exhaustively, every
// lattice-local minimizer (no neighbor better under feasibility-first
// comparison) is refined by greedy coordinate descent at step lambda, and the
// best point wins, ties going to the lexicographically smallest point.
// Deterministic for fixed inputs. When the lattice would exceed max_points,
// per-dimension steps are doubled (widest dimension first) until it fits;
// acceptance-scale boxes never trigger this.

struct LatticeBox {
  std::vector<int> lo;
  std::vector<int> hi;  // inclusive
};

struct PointEval {
  double value = 0.0;  // minimized
  bool feasible = false;
  double violation = 0.0;
};

using LatticeFn = std::function<PointEval(std::span<const int>)>;

struct LatticeResult {
  std::vector<int> point;
  PointEval eval;
  std::size_t evaluations = 0;  // unique objective calls
  std::vector<int> steps;       // effective per-dimension grid steps
};

inline constexpr std::size_t kDefaultLatticeBudget = 200'000;

// Thrown when no lattice point is feasible; carries the least-violating point.
class InfeasibleLatticeError : public InfeasibleError {
 public:
  InfeasibleLatticeError(std::string what, LatticeResult best)
      : InfeasibleError(std::move(what)), best_(std::move(best)) {}
  const LatticeResult& best() const { return best_; }

 private:
  LatticeResult best_;
};

LatticeResult shgo_minimize(const LatticeFn& f, const LatticeBox& box, int step,
                            std::size_t max_points = kDefaultLatticeBudget);

// ---------------------------------------------------------------------------
// Search drivers.

struct TraceEntry {
  int w_m = 0;
  ArchConfig coarse;
  double coarse_value = 0.0;
  ArchConfig fine;
  double fine_value = 0.0;
  bool feasible = false;
  std::size_t evaluations = 0;
};

struct SearchResult {
  ArchConfig best;
  double value = 0.0;
  Metrics metrics;
  std::size_t evaluations = 0;
  bool feasible = false;
  std::vector<TraceEntry> trace;  // per-w_m candidate set; empty for
                                  // sampling/exhaustive modes
};

// Three-level search: enumerate w_m; per w_m a coarse step-lambda lattice
// pass over (n_c if ranged, d_c, t slack variables), then a step-1 pass over
// the +/-2*lambda neighborhood of the coarse winner; best candidate across
// w_m wins. Maximization runs through the lattice engine as minimizing
// -f_obj. The t dimensions are searched as slacks (t_1 - t1_min,
// t_{c+1} - 2 t_c) so every lattice point honors the coupling chain.
SearchResult hierarchical_search(const SpaceSpec& spec, const Objective& objective,
                                 const Constraints& constraints, int lambda = 4);

// Draws n configs uniformly, keeps those meeting the active hardware
// constraints, and returns the one with the highest NN-Degree (exact rational
// comparison; ties to the lexicographically smallest config).
SearchResult training_free_search(const SpaceSpec& spec, const Objective& objective,
                                  const Constraints& constraints, std::size_t n,
                                  std::uint64_t seed);

// Exhaustive ground truth for reduced spaces. Refuses (DataError) when the
// space exceeds max_size. evaluations equals the space size exactly.
SearchResult brute_force_search(const SpaceSpec& spec, const Objective& objective,
                                const Constraints& constraints,
                                std::uint64_t max_size = 10'000'000);

}  // namespace flash
