#include "bandjoin/cost_model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace bandjoin {

namespace {

// Solves the normal equations for the selected model terms.
// Returns false when the design matrix is rank deficient.
bool ols(const std::vector<Observation>& obs, const std::vector<int>& terms,
         std::vector<double>& coef) {
  const size_t m = terms.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  auto term = [](const Observation& o, int t) {
    switch (t) {
      case 0: return 1.0;
      case 1: return o.I;
      case 2: return o.Im;
      default: return o.Om;
    }
  };
  for (const Observation& o : obs) {
    for (size_t i = 0; i < m; ++i) {
      double xi = term(o, terms[i]);
      for (size_t j = 0; j < m; ++j) a[i][j] += xi * term(o, terms[j]);
      a[i][m] += xi * o.seconds;
    }
  }
  // Gaussian elimination with partial pivoting.
  double scale = 0.0;
  for (size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(a[i][i]));
  if (scale == 0.0) return false;
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-12 * scale) return false;
    std::swap(a[col], a[piv]);
    for (size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  coef.resize(m);
  for (size_t i = 0; i < m; ++i) coef[i] = a[i][m] / a[i][i];
  return true;
}

}  // namespace

CostModel calibrate(const std::vector<Observation>& observations) {
  if (observations.size() < 4)
    throw std::invalid_argument("calibrate: need at least 4 observations");

  std::vector<int> terms{0, 1, 2, 3};
  std::vector<double> coef;
  while (true) {
    if (!ols(observations, terms, coef))
      throw std::runtime_error("calibrate: rank-deficient design matrix");
    // Drop the most negative slope term and refit; beta0 may be negative.
    int worst = -1;
    double worstVal = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
      if (terms[i] == 0) continue;
      if (coef[i] < worstVal) {
        worstVal = coef[i];
        worst = static_cast<int>(i);
      }
    }
    if (worst < 0) break;
    terms.erase(terms.begin() + worst);
  }

  CostModel m;
  m.beta1 = m.beta2m = m.beta3m = 0.0;
  for (size_t i = 0; i < terms.size(); ++i) {
    switch (terms[i]) {
      case 0: m.beta0 = coef[i]; break;
      case 1: m.beta1 = coef[i]; break;
      case 2: m.beta2m = coef[i]; break;
      default: m.beta3m = coef[i]; break;
    }
  }
  return m;
}

std::string to_json(const CostModel& m) {
  nlohmann::json j;
  j["beta0"] = m.beta0;
  j["beta1"] = m.beta1;
  j["beta2m"] = m.beta2m;
  j["beta3m"] = m.beta3m;
  return j.dump(2);
}

CostModel cost_model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CostModel m;
  m.beta0 = j.at("beta0").get<double>();
  m.beta1 = j.at("beta1").get<double>();
  m.beta2m = j.at("beta2m").get<double>();
  m.beta3m = j.at("beta3m").get<double>();
  if (m.beta1 < 0 || m.beta2m < 0 || m.beta3m < 0)
    throw std::runtime_error("cost model: slope coefficients must be >= 0");
  return m;
}

}  // namespace bandjoin
