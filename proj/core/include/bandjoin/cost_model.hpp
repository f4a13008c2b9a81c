// Linear running-time model M(I, I_m, O_m) = beta0 + beta1*I + beta2m*I_m +
// beta3m*O_m and its least-squares calibration.

#pragma once

#include <string>
#include <vector>

namespace bandjoin {

struct CostModel {
  double beta0 = 0.0;   // fixed cost
  double beta1 = 1.0;   // per tuple of total input I
  double beta2m = 4.0;  // per tuple of max-worker input I_m
  double beta3m = 1.0;  // per tuple of max-worker output O_m

  double estimate(double I, double Im, double Om) const {
    return beta0 + beta1 * I + beta2m * Im + beta3m * Om;
  }
};

struct Observation {
  double I = 0.0;
  double Im = 0.0;
  double Om = 0.0;
  double seconds = 0.0;
};

/// Ordinary least squares on the four model terms. Negative fitted
/// coefficients (other than beta0) are clamped to zero and the remaining
/// terms refit. Throws on fewer than 4 observations or a rank-deficient
/// design matrix.
CostModel calibrate(const std::vector<Observation>& observations);

std::string to_json(const CostModel& m);
CostModel cost_model_from_json(const std::string& text);

}  // namespace bandjoin
