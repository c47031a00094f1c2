#include "flash/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "flash/errors.hpp"

namespace flash {

double predict_accuracy(const AccuracyModel& model, double g) {
  if (!(g > 0.0)) {
    throw std::domain_error("NN-Degree must be positive");
  }
  return 1.0 / (model.a + std::exp(model.b / g + model.c));
}

double rmse(const AccuracyModel& model, std::span<const AccuracySample> samples) {
  if (samples.empty()) {
    throw std::domain_error("rmse over empty sample set");
  }
  double acc = 0.0;
  for (const AccuracySample& s : samples) {
    const double e = predict_accuracy(model, s.g) - s.theta;
    acc += e * e;
  }
  return std::sqrt(acc / double(samples.size()));
}

namespace {

// Least-squares (b, c) for fixed a in the transformed space
// ln(1/theta - a) = b * (1/g) + c, then RMSE scored back in theta space.
struct InnerFit {
  double b = 0.0;
  double c = 0.0;
  double rmse = std::numeric_limits<double>::infinity();
};

InnerFit solve_at(double a, std::span<const AccuracySample> samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(samples.size());
  for (const AccuracySample& s : samples) {
    const double x = 1.0 / s.g;
    const double y = std::log(1.0 / s.theta - a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  InnerFit fit;
  if (det == 0.0) return fit;  // distinct-g precondition makes this unreachable
  fit.b = (n * sxy - sx * sy) / det;
  fit.c = (sy * sxx - sx * sxy) / det;
  AccuracyModel candidate{a, fit.b, fit.c, samples.size(), 0.0};
  fit.rmse = rmse(candidate, samples);
  return fit;
}

}  // namespace

AccuracyModel fit_accuracy(std::span<const AccuracySample> samples) {
  if (samples.size() < 3) {
    throw FitError("accuracy fit needs at least 3 samples, got " +
                   std::to_string(samples.size()));
  }
  std::set<double> distinct_g;
  double theta_max = 0.0;
  for (const AccuracySample& s : samples) {
    if (!(s.g > 0.0) || !std::isfinite(s.g)) {
      throw DataError("sample with non-positive NN-Degree");
    }
    if (!(s.theta > 0.0) || !(s.theta < 1.0)) {
      throw DataError("accuracy outside (0,1)");
    }
    distinct_g.insert(s.g);
    theta_max = std::max(theta_max, s.theta);
  }
  if (distinct_g.size() < 2) {
    throw FitError("accuracy fit needs at least 2 distinct NN-Degree values");
  }

  // a must stay below min_i(1/theta_i) = 1/theta_max for the log transform.
  const double a_hi = (1.0 / theta_max) * (1.0 - 1e-12);
  const double a_lo = 1e-12;
  constexpr int kGridPoints = 400;

  double best_a = a_lo;
  InnerFit best = solve_at(a_lo, samples);
  for (int i = 1; i <= kGridPoints; ++i) {
    const double a = a_lo + (a_hi - a_lo) * double(i) / double(kGridPoints);
    const InnerFit fit = solve_at(a, samples);
    if (fit.rmse < best.rmse) {
      best = fit;
      best_a = a;
    }
  }

  // Golden-section refinement inside the bracketing grid cells.
  const double step = (a_hi - a_lo) / double(kGridPoints);
  double lo = std::max(a_lo, best_a - step);
  double hi = std::min(a_hi, best_a + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  InnerFit f1 = solve_at(x1, samples);
  InnerFit f2 = solve_at(x2, samples);
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++iter) {
    if (f1.rmse <= f2.rmse) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = solve_at(x1, samples);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = solve_at(x2, samples);
    }
  }
  const double a_refined = (f1.rmse <= f2.rmse) ? x1 : x2;
  const InnerFit refined = solve_at(a_refined, samples);
  if (refined.rmse < best.rmse) {
    best = refined;
    best_a = a_refined;
  }

  AccuracyModel model{best_a, best.b, best.c, samples.size(), best.rmse};
  return model;
}

}  // namespace flash
