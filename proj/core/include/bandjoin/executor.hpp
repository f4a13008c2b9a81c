// Simulated distributed execution: assign destination partitions to w
// workers, run the local band join per destination, and report exact metrics
// against the lower bounds I >= nS + nT and
// L0 = (beta2*(nS+nT) + beta3*|output|) / w.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bandjoin/geometry.hpp"
#include "bandjoin/plan.hpp"
#include "bandjoin/routing.hpp"

namespace bandjoin {

enum class AssignStrategy { LPT, Random };

struct DestLoad {
  double load = 0.0;
  double input = 0.0;
  double output = 0.0;
};

struct WorkerAssignment {
  std::vector<int> workerOf;  // destination index -> worker
  std::vector<double> load;   // per worker
  std::vector<double> input;
  std::vector<double> output;
  int maxWorker = 0;  // worker with the greatest load (lowest index on ties)
};

/// LPT: sort by load descending (stable), place each on the currently
/// least-loaded worker. Random: uniform seeded choice per destination.
WorkerAssignment assign_workers(const std::vector<DestLoad>& dests, int w,
                                AssignStrategy strategy, uint64_t seed = 0);

/// Local band join of one partition: bucket Tp by A_1 into eps_1-width ranges
/// (exact-value hash buckets when eps_1 = 0), probe the three adjacent
/// buckets per s, verify the full d-dimensional predicate. Returns index
/// pairs into (Sp, Tp); multiset-equal to the nested-loop join.
std::vector<std::pair<uint32_t, uint32_t>> local_band_join(
    const std::vector<Tuple>& Sp, const std::vector<Tuple>& Tp,
    const BandSpec& spec);

struct JoinMetrics {
  size_t I = 0;   // total input tuple copies
  size_t Im = 0;  // input of the max-load worker
  size_t Om = 0;  // output of the max-load worker
  double Lm = 0.0;
  double L0 = 0.0;
  size_t outputSize = 0;
  double dupOverhead = 0.0;   // (I - (nS+nT)) / (nS+nT)
  double loadOverhead = 0.0;  // (Lm - L0) / L0
  std::vector<double> workerLoads;
};

struct RunResult {
  std::vector<std::pair<uint64_t, uint64_t>> output;  // (s id, t id)
  JoinMetrics metrics;
};

/// Routes S and T per the plan, LPT-assigns destinations on exact loads
/// (realized output from the per-destination local join), and reports exact
/// metrics. Output pair order is deterministic (destination order).
RunResult run_plan(const Relation& S, const Relation& T, const Plan& plan,
                   const BandSpec& spec, int w, uint64_t seed);

/// Exact nested loop; rejects |S|*|T| > 1e8.
std::vector<std::pair<uint64_t, uint64_t>> oracle_join(const Relation& S,
                                                       const Relation& T,
                                                       const BandSpec& spec);

/// Approximate max number of rel-tuples inside any closed eps-range
/// (the box [x - eps, x + eps] per dimension), anchored at `budget` sampled
/// tuples; exact when budget >= |rel|.
size_t densest_eps_region(const Relation& rel, const BandSpec& spec,
                          size_t budget, uint64_t seed);

std::string metrics_to_json(const std::string& planKind, const JoinMetrics& m,
                            const std::vector<double>& wallTimes = {});
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& planKind, const JoinMetrics& m);

}  // namespace bandjoin
