#include "bandjoin/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bandjoin/rng.hpp"

namespace bandjoin {

namespace {

double pareto_draw(Rng& rng, double z) {
  // Inverse CDF of PDF z / x^(z+1) on [1, inf).
  double u = rng.next_double();
  return std::pow(1.0 - u, -1.0 / z);
}

}  // namespace

Relation gen(const GenSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("gen: n must be >= 1");
  if (spec.d < 1) throw std::invalid_argument("gen: d must be >= 1");
  if ((spec.kind == GenSpec::Kind::Pareto ||
       spec.kind == GenSpec::Kind::ReversePareto) &&
      !(spec.z > 0.0))
    throw std::invalid_argument("gen: z must be > 0");

  Relation rel;
  rel.d = spec.d;
  rel.tuples.resize(spec.n);
  Rng rng(spec.seed);

  for (size_t i = 0; i < spec.n; ++i) {
    Tuple& t = rel.tuples[i];
    t.id = i;
    t.coords.resize(spec.d);
    for (int j = 0; j < spec.d; ++j) {
      switch (spec.kind) {
        case GenSpec::Kind::Pareto:
          t.coords[j] = pareto_draw(rng, spec.z);
          break;
        case GenSpec::Kind::ReversePareto:
          t.coords[j] = spec.offset - pareto_draw(rng, spec.z);
          break;
        case GenSpec::Kind::Uniform:
          t.coords[j] = spec.lo + (spec.hi - spec.lo) * rng.next_double();
          break;
        case GenSpec::Kind::Adversarial: {
          if (spec.corner.size() != static_cast<size_t>(spec.d) ||
              spec.spread.size() != static_cast<size_t>(spec.d))
            throw std::invalid_argument(
                "gen: adversarial corner/spread must have d entries");
          t.coords[j] = spec.corner[j] + spec.spread[j] * rng.next_double();
          break;
        }
      }
    }
  }
  return rel;
}

Relation load_csv(const std::string& path, const std::vector<int>& columns,
                  size_t limit) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  Relation rel;
  rel.d = static_cast<int>(columns.size());
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);

    Tuple t;
    t.id = rel.tuples.size();
    t.coords.reserve(columns.size());
    for (int c : columns) {
      if (c < 0 || static_cast<size_t>(c) >= cells.size())
        throw std::runtime_error("load_csv: line " + std::to_string(lineno) +
                                 ": missing column " + std::to_string(c));
      try {
        size_t pos = 0;
        double v = std::stod(cells[c], &pos);
        t.coords.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error("load_csv: line " + std::to_string(lineno) +
                                 ": non-numeric cell in column " +
                                 std::to_string(c));
      }
    }
    rel.tuples.push_back(std::move(t));
    if (limit > 0 && rel.tuples.size() >= limit) break;
  }
  return rel;
}

void write_csv(const Relation& rel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  char buf[64];
  for (const Tuple& t : rel.tuples) {
    for (int j = 0; j < rel.d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", t.coords[j]);
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace bandjoin
