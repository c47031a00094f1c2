#pragma once

#include <cstddef>
#include <span>

namespace flash {

// Three-parameter accuracy model: theta(g) = 1 / (a + exp(b/g + c)).
struct AccuracyModel {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  std::size_t n_samples = 0;
  double rmse = 0.0;
};

// One observation: the NN-Degree of a trained network and its measured test
// accuracy as a fraction in (0,1).
struct AccuracySample {
  double g = 0.0;
  double theta = 0.0;
};

// Evaluates the model. Throws std::domain_error for g <= 0.
double predict_accuracy(const AccuracyModel& model, double g);

// Fits (a, b, c) by minimizing RMSE in accuracy space. The model is linear in
// (b, c) once a is fixed, via ln(1/theta - a) = b/g + c, so the fit is a scan
// plus golden-section refinement over a in (0, min_i 1/theta_i) with a
// closed-form least-squares solve at each a. Deterministic and derivative
// free. Requires >= 3 samples, >= 2 distinct g values, every theta in (0,1);
// violations raise FitError / DataError.
AccuracyModel fit_accuracy(std::span<const AccuracySample> samples);

// Root mean squared prediction error over samples (domain_error when empty).
double rmse(const AccuracyModel& model, std::span<const AccuracySample> samples);

}  // namespace flash
