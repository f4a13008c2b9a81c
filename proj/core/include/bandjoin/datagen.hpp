// Seeded synthetic data generators and CSV ingestion.

#pragma once

#include <string>
#include <vector>

#include "bandjoin/geometry.hpp"

namespace bandjoin {

struct GenSpec {
  enum class Kind { Pareto, ReversePareto, Uniform, Adversarial };

  Kind kind = Kind::Pareto;
  size_t n = 0;
  int d = 1;
  uint64_t seed = 0;

  // Pareto / ReversePareto: PDF z / x^(z+1) on [1, inf).
  double z = 1.5;
  // ReversePareto maps each draw y to offset - y.
  double offset = 1e6;
  // Uniform range per coordinate.
  double lo = 0.0, hi = 1.0;
  // Adversarial: all tuples uniform in [corner_i, corner_i + spread_i).
  std::vector<double> corner;
  std::vector<double> spread;
};

Relation gen(const GenSpec& spec);

/// Reads numeric columns from a CSV file; the 1-based line number is reported
/// on parse failure. limit = 0 means no limit. Tuple ids are row numbers
/// (0-based over accepted rows).
Relation load_csv(const std::string& path, const std::vector<int>& columns,
                  size_t limit = 0);

void write_csv(const Relation& rel, const std::string& path);

}  // namespace bandjoin
