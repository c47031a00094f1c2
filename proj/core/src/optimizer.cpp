#include "flash/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "flash/topology.hpp"

namespace flash {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DataError(what);
}

double relative_excess(double value, double bound) {
  const double scale = std::max(std::abs(bound), 1e-12);
  return std::max(0.0, (value - bound) / scale);
}

double relative_shortfall(double value, double bound) {
  const double scale = std::max(std::abs(bound), 1e-12);
  return std::max(0.0, (bound - value) / scale);
}

}  // namespace

Evaluation evaluate(const ArchConfig& config, const Objective& objective,
                    const Constraints& constraints) {
  require(objective.space != nullptr, "objective has no search space attached");
  const SpaceSpec& spec = *objective.space;
  const bool wants_theta = objective.mode != ObjectiveMode::nn_degree ||
                           constraints.theta_min.has_value();
  const bool wants_latency = objective.mode != ObjectiveMode::nn_degree ||
                             constraints.latency_max.has_value();
  const bool wants_energy = objective.mode != ObjectiveMode::nn_degree ||
                            constraints.energy_max.has_value();
  const bool wants_area = objective.mode == ObjectiveMode::full ||
                          constraints.area_max.has_value();

  Evaluation out;
  const DegreeReport degree = nn_degree(config, spec, /*enforce_constraints=*/false);
  out.metrics.g = degree.g.to_double();

  if (wants_theta) {
    require(objective.accuracy != nullptr,
            "accuracy model required but not loaded");
    out.metrics.theta = predict_accuracy(*objective.accuracy, out.metrics.g);
  }
  if (wants_latency || wants_energy || wants_area) {
    require(objective.hw != nullptr, "hardware config required but not loaded");
    const FeatureSet f = features(config, spec, *objective.hw);
    if (wants_latency) {
      require(objective.cost != nullptr, "cost models required but not loaded");
      out.metrics.latency_ms = predict_latency(*objective.cost, f);
    }
    if (wants_energy) {
      require(objective.cost != nullptr, "cost models required but not loaded");
      out.metrics.energy_mj = predict_energy(*objective.cost, f);
    }
    if (wants_area) {
      static const CostModels kNoModels;
      const CostModels& cost = objective.cost ? *objective.cost : kNoModels;
      out.metrics.area_mm2 = predict_area(cost, f, *objective.hw);
    }
  }

  out.feasible = true;
  out.violation = 0.0;
  if (constraints.theta_min) {
    out.violation += relative_shortfall(out.metrics.theta, *constraints.theta_min);
    out.feasible = out.feasible && out.metrics.theta >= *constraints.theta_min;
  }
  if (constraints.area_max) {
    out.violation += relative_excess(out.metrics.area_mm2, *constraints.area_max);
    out.feasible = out.feasible && out.metrics.area_mm2 <= *constraints.area_max;
  }
  if (constraints.latency_max) {
    out.violation += relative_excess(out.metrics.latency_ms, *constraints.latency_max);
    out.feasible = out.feasible && out.metrics.latency_ms <= *constraints.latency_max;
  }
  if (constraints.energy_max) {
    out.violation += relative_excess(out.metrics.energy_mj, *constraints.energy_max);
    out.feasible = out.feasible && out.metrics.energy_mj <= *constraints.energy_max;
  }

  switch (objective.mode) {
    case ObjectiveMode::full:
      out.value = out.metrics.theta / (out.metrics.area_mm2 *
                                       out.metrics.latency_ms *
                                       out.metrics.energy_mj);
      break;
    case ObjectiveMode::device:
      out.value = out.metrics.theta /
                  (out.metrics.latency_ms * out.metrics.energy_mj);
      break;
    case ObjectiveMode::nn_degree:
      out.value = out.metrics.g;
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lattice engine.

namespace {

// Feasibility-first "a is strictly better than b" for minimization.
bool better(const PointEval& a, const PointEval& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) return a.value < b.value;
  return a.violation < b.violation;
}

bool better_or_lex(const PointEval& a, std::span<const int> pa,
                   const PointEval& b, std::span<const int> pb) {
  if (better(a, b)) return true;
  if (better(b, a)) return false;
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

class EvalCache {
 public:
  explicit EvalCache(const LatticeFn& f) : f_(f) {}

  const PointEval& at(const std::vector<int>& p) {
    auto it = cache_.find(p);
    if (it == cache_.end()) it = cache_.emplace(p, f_(p)).first;
    return it->second;
  }

  std::size_t size() const { return cache_.size(); }

 private:
  const LatticeFn& f_;
  std::map<std::vector<int>, PointEval> cache_;
};

}  // namespace

LatticeResult shgo_minimize(const LatticeFn& f, const LatticeBox& box, int step,
                            std::size_t max_points) {
  const std::size_t dims = box.lo.size();
  if (dims == 0 || box.hi.size() != dims) {
    throw std::invalid_argument("lattice box must be non-empty and consistent");
  }
  if (step < 1) throw std::invalid_argument("lattice step must be >= 1");
  for (std::size_t d = 0; d < dims; ++d) {
    if (box.lo[d] > box.hi[d]) {
      throw std::invalid_argument("lattice box dimension " + std::to_string(d) +
                                  " is empty");
    }
  }

  std::vector<int> grid_step(dims, step);
  auto axis_points = [&](std::size_t d) {
    return std::size_t((box.hi[d] - box.lo[d]) / grid_step[d]) + 1;
  };
  // Budget: double the step of the widest axis until the grid fits.
  for (;;) {
    std::size_t total = 1;
    bool overflow = false;
    for (std::size_t d = 0; d < dims; ++d) {
      const std::size_t pts = axis_points(d);
      if (total > max_points / pts) {
        overflow = true;
        break;
      }
      total *= pts;
    }
    if (!overflow && total <= max_points) break;
    std::size_t widest = 0;
    for (std::size_t d = 1; d < dims; ++d) {
      if (axis_points(d) > axis_points(widest)) widest = d;
    }
    grid_step[widest] *= 2;
  }

  EvalCache cache(f);

  // Enumerate the grid in lexicographic index order.
  std::vector<std::size_t> sizes(dims);
  for (std::size_t d = 0; d < dims; ++d) sizes[d] = axis_points(d);
  std::vector<std::size_t> idx(dims, 0);
  auto point_at = [&](const std::vector<std::size_t>& index) {
    std::vector<int> p(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      p[d] = box.lo[d] + int(index[d]) * grid_step[d];
    }
    return p;
  };

  std::vector<std::vector<int>> minimizers;
  std::vector<int> best_point;
  PointEval best_eval;
  bool have_best = false;

  for (;;) {
    const std::vector<int> p = point_at(idx);
    const PointEval ep = cache.at(p);
    if (!have_best || better_or_lex(ep, p, best_eval, best_point)) {
      best_eval = ep;
      best_point = p;
      have_best = true;
    }
    bool is_local_min = true;
    for (std::size_t d = 0; d < dims && is_local_min; ++d) {
      for (int dir : {-1, +1}) {
        const long long ni = (long long)(idx[d]) + dir;
        if (ni < 0 || ni >= (long long)sizes[d]) continue;
        auto nidx = idx;
        nidx[d] = std::size_t(ni);
        const std::vector<int> q = point_at(nidx);
        if (better(cache.at(q), ep)) {
          is_local_min = false;
          break;
        }
      }
    }
    if (is_local_min) minimizers.push_back(p);

    // advance
    std::size_t d = dims;
    while (d > 0) {
      --d;
      if (++idx[d] < sizes[d]) break;
      idx[d] = 0;
      if (d == 0) goto grid_done;
    }
  }
grid_done:

  // Coordinate descent at the requested step from every local minimizer.
  for (std::vector<int> p : minimizers) {
    PointEval ep = cache.at(p);
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t d = 0; d < dims; ++d) {
        for (int dir : {-1, +1}) {
          std::vector<int> q = p;
          q[d] += dir * step;
          if (q[d] < box.lo[d] || q[d] > box.hi[d]) continue;
          const PointEval eq = cache.at(q);
          if (better(eq, ep)) {
            p = std::move(q);
            ep = eq;
            moved = true;
          }
        }
      }
    }
    if (better_or_lex(ep, p, best_eval, best_point)) {
      best_eval = ep;
      best_point = p;
    }
  }

  LatticeResult result{best_point, best_eval, cache.size(), grid_step};
  if (!best_eval.feasible) {
    throw InfeasibleLatticeError("no feasible lattice point", std::move(result));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Hierarchical search.

namespace {

// Encoding of (n_c?, d_c, slack...) boxes for one fixed w_m.
struct SlackCodec {
  const SpaceSpec* spec;
  int w_m;
  bool has_nc_dim;

  LatticeBox box() const {
    LatticeBox b;
    if (has_nc_dim) {
      b.lo.push_back(spec->n_c_min);
      b.hi.push_back(spec->n_c_max);
    }
    b.lo.push_back(spec->d_c_min);
    b.hi.push_back(spec->d_c_max);
    int min_t = 0;
    for (int c = 0; c < spec->n_c_max; ++c) {
      min_t = spec->t_floor(c, min_t);
      const int ceiling = spec->t_ceiling(c, w_m, spec->d_c_max);
      b.lo.push_back(0);
      b.hi.push_back(std::max(0, ceiling - min_t));
    }
    return b;
  }

  ArchConfig decode(std::span<const int> x) const {
    ArchConfig config;
    std::size_t i = 0;
    config.w_m = w_m;
    config.n_c = has_nc_dim ? x[i++] : spec->n_c_min;
    config.d_c = int(x[i++]);
    config.t.resize(config.n_c);
    int prev = 0;
    for (int c = 0; c < config.n_c; ++c) {
      config.t[c] = spec->t_floor(c, prev) + int(x[i + std::size_t(c)]);
      prev = config.t[c];
    }
    return config;
  }
};

// Relative excesses over the ceiling and coupling constraints: the ways a
// decoded point can fall outside the space. (Slack decodes only ever break
// ceilings; raw decodes can break the coupling chain too.)
double membership_violation(const ArchConfig& config, const SpaceSpec& spec) {
  double v = 0.0;
  int prev = 0;
  for (int c = 0; c < config.n_c; ++c) {
    const int ceiling = spec.t_ceiling(c, config.w_m, config.d_c);
    if (config.t[c] > ceiling) {
      v += ceiling > 0 ? double(config.t[c] - ceiling) / double(ceiling)
                       : 1.0 + double(config.t[c]);
    }
    const int floor = spec.t_floor(c, prev);
    if (config.t[c] < floor) {
      v += double(floor - config.t[c]) / double(std::max(floor, 1));
    }
    prev = config.t[c];
  }
  return v;
}

PointEval score(const ArchConfig& config, const SpaceSpec& spec,
                const Objective& objective, const Constraints& constraints) {
  const double invalid = membership_violation(config, spec);
  const Evaluation eval = evaluate(config, objective, constraints);
  PointEval pe;
  pe.value = -eval.value;  // engine minimizes
  pe.violation = eval.violation + invalid;
  pe.feasible = eval.feasible && invalid == 0.0;
  return pe;
}

}  // namespace

SearchResult hierarchical_search(const SpaceSpec& spec, const Objective& objective,
                                 const Constraints& constraints, int lambda) {
  if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");

  SearchResult result;
  bool have_best = false;
  ArchConfig best_config;
  PointEval best_eval;

  for (int w_m = spec.w_m_min; w_m <= spec.w_m_max; ++w_m) {
    const SlackCodec codec{&spec, w_m, !spec.n_c_fixed()};
    const LatticeBox global_box = codec.box();
    const LatticeFn coarse_fn = [&](std::span<const int> x) {
      return score(codec.decode(x), spec, objective, constraints);
    };

    TraceEntry entry;
    entry.w_m = w_m;
    LatticeResult coarse;
    try {
      coarse = shgo_minimize(coarse_fn, global_box, lambda);
    } catch (const InfeasibleLatticeError& e) {
      coarse = e.best();  // keep refining around the least-violating point
    }
    const ArchConfig coarse_config = codec.decode(coarse.point);
    entry.coarse = coarse_config;
    entry.coarse_value = -coarse.eval.value;
    entry.evaluations = coarse.evaluations;

    // Fine pass: +/- 2 steps around the coarse winner in plain architecture
    // coordinates (n_c, d_c, t_1..), per-dimension step being the effective
    // coarse grid step (the budget may have widened it past lambda). The
    // coupling chain is enforced by rejection here; the box is small.
    const bool has_nc_dim = !spec.n_c_fixed();
    std::vector<int> center;
    if (has_nc_dim) center.push_back(coarse_config.n_c);
    center.push_back(coarse_config.d_c);
    center.insert(center.end(), coarse_config.t.begin(), coarse_config.t.end());
    // t entries beyond n_c (when n_c is ranged) keep the slack-box layout.
    for (std::size_t d = center.size(); d < global_box.lo.size(); ++d) {
      center.push_back(0);
    }

    const std::size_t t_base = has_nc_dim ? 2 : 1;  // first t dimension
    LatticeBox local;
    local.lo.resize(global_box.lo.size());
    local.hi.resize(global_box.hi.size());
    for (std::size_t d = 0; d < global_box.lo.size(); ++d) {
      const int step = std::max(lambda, coarse.steps.empty() ? lambda
                                                             : coarse.steps[d]);
      int lo_bound = 0;
      int hi_bound = 0;
      if (has_nc_dim && d == 0) {
        lo_bound = spec.n_c_min;
        hi_bound = spec.n_c_max;
      } else if (d == t_base - 1) {
        lo_bound = spec.d_c_min;
        hi_bound = spec.d_c_max;
      } else {
        lo_bound = 0;
        hi_bound = spec.t_ceiling(int(d - t_base), w_m, spec.d_c_max);
      }
      local.lo[d] = std::max(lo_bound, center[d] - 2 * step);
      local.hi[d] = std::min(hi_bound, center[d] + 2 * step);
      if (local.hi[d] < local.lo[d]) local.hi[d] = local.lo[d];
    }

    auto decode_raw = [&](std::span<const int> x) {
      ArchConfig config;
      config.w_m = w_m;
      config.n_c = has_nc_dim ? x[0] : spec.n_c_min;
      config.d_c = x[t_base - 1];
      config.t.assign(x.begin() + long(t_base),
                      x.begin() + long(t_base) + config.n_c);
      return config;
    };
    const LatticeFn fine_fn = [&](std::span<const int> x) {
      return score(decode_raw(x), spec, objective, constraints);
    };

    LatticeResult fine;
    bool fine_feasible = true;
    try {
      fine = shgo_minimize(fine_fn, local, 1);
    } catch (const InfeasibleLatticeError& e) {
      fine = e.best();
      fine_feasible = false;
    }
    entry.fine = decode_raw(fine.point);
    entry.fine_value = -fine.eval.value;
    entry.feasible = fine_feasible;
    entry.evaluations += fine.evaluations;
    result.evaluations += entry.evaluations;
    result.trace.push_back(entry);

    const ArchConfig& candidate = entry.fine;
    if (!have_best || better(fine.eval, best_eval) ||
        (!better(best_eval, fine.eval) && candidate < best_config)) {
      have_best = true;
      best_config = candidate;
      best_eval = fine.eval;
    }
  }

  if (!have_best || !best_eval.feasible) {
    throw InfeasibleError("hierarchical search found no feasible architecture");
  }

  const Evaluation eval = evaluate(best_config, objective, constraints);
  result.best = best_config;
  result.value = eval.value;
  result.metrics = eval.metrics;
  result.feasible = eval.feasible;
  return result;
}

SearchResult training_free_search(const SpaceSpec& spec, const Objective& objective,
                                  const Constraints& constraints, std::size_t n,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  Objective proxy = objective;
  proxy.mode = ObjectiveMode::nn_degree;

  const std::vector<ArchConfig> samples = sample_uniform(spec, seed, n);
  bool have_best = false;
  ArchConfig best_config;
  Rational best_g;

  for (const ArchConfig& config : samples) {
    const Evaluation eval = evaluate(config, proxy, constraints);
    if (!eval.feasible) continue;
    const Rational g = nn_degree(config, spec).g;
    if (!have_best || best_g < g || (g == best_g && config < best_config)) {
      have_best = true;
      best_config = config;
      best_g = g;
    }
  }

  if (!have_best) {
    throw InfeasibleError("no feasible sample among " + std::to_string(n) +
                          " (feasibility rate 0/" + std::to_string(n) + ")");
  }

  const Evaluation eval = evaluate(best_config, proxy, constraints);
  SearchResult result;
  result.best = best_config;
  result.value = eval.value;
  result.metrics = eval.metrics;
  result.evaluations = n;
  result.feasible = true;
  return result;
}

namespace {

template <typename Fn>
void enumerate_t(const SpaceSpec& spec, ArchConfig& config, int cell, int prev,
                 const Fn& fn) {
  if (cell == config.n_c) {
    fn(config);
    return;
  }
  const int lo = std::max(spec.t_floor(cell, prev), 0);
  const int hi = spec.t_ceiling(cell, config.w_m, config.d_c);
  for (int t = lo; t <= hi; ++t) {
    config.t[cell] = t;
    enumerate_t(spec, config, cell + 1, t, fn);
  }
}

}  // namespace

SearchResult brute_force_search(const SpaceSpec& spec, const Objective& objective,
                                const Constraints& constraints,
                                std::uint64_t max_size) {
  const std::uint64_t size = search_space_size(spec);
  if (size > max_size) {
    throw DataError("refusing exhaustive search: space has " +
                    std::to_string(size) + " configurations (limit " +
                    std::to_string(max_size) + ")");
  }
  if (size == 0) {
    throw InfeasibleError("search space is empty");
  }

  bool have_best = false;
  ArchConfig best_config;
  PointEval best_eval;
  std::uint64_t evaluated = 0;

  for (int w_m = spec.w_m_min; w_m <= spec.w_m_max; ++w_m) {
    for (int n_c = spec.n_c_min; n_c <= spec.n_c_max; ++n_c) {
      for (int d_c = spec.d_c_min; d_c <= spec.d_c_max; ++d_c) {
        ArchConfig config;
        config.w_m = w_m;
        config.n_c = n_c;
        config.d_c = d_c;
        config.t.assign(std::size_t(n_c), 0);
        enumerate_t(spec, config, 0, 0, [&](const ArchConfig& c) {
          ++evaluated;
          const Evaluation eval = evaluate(c, objective, constraints);
          PointEval pe{-eval.value, eval.feasible, eval.violation};
          if (!have_best || better(pe, best_eval) ||
              (!better(best_eval, pe) && c < best_config)) {
            have_best = true;
            best_config = c;
            best_eval = pe;
          }
        });
      }
    }
  }

  if (evaluated != size) {
    throw DataError("enumeration count " + std::to_string(evaluated) +
                    " disagrees with closed-form size " + std::to_string(size));
  }
  if (!best_eval.feasible) {
    throw InfeasibleError("no feasible architecture in the space");
  }

  const Evaluation eval = evaluate(best_config, objective, constraints);
  SearchResult result;
  result.best = best_config;
  result.value = eval.value;
  result.metrics = eval.metrics;
  result.evaluations = evaluated;
  result.feasible = true;
  return result;
}

}  // namespace flash
