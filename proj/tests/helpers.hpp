// Shared builders for the test suite.

#pragma once

#include <vector>

#include "bandjoin/geometry.hpp"

namespace bandjoin::testing {

inline Relation rel1d(const std::vector<double>& values, uint64_t idBase = 0) {
  Relation r;
  r.d = 1;
  for (size_t i = 0; i < values.size(); ++i)
    r.tuples.push_back({{values[i]}, idBase + i});
  return r;
}

inline Relation relNd(const std::vector<std::vector<double>>& rows,
                      uint64_t idBase = 0) {
  Relation r;
  r.d = rows.empty() ? 1 : static_cast<int>(rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    r.tuples.push_back({rows[i], idBase + i});
  return r;
}

inline Tuple tup(std::vector<double> coords, uint64_t id = 0) {
  return {std::move(coords), id};
}

inline BandSpec spec1(double eps, double b2 = 4.0, double b3 = 1.0) {
  return BandSpec(1, {eps}, b2, b3);
}

}  // namespace bandjoin::testing
