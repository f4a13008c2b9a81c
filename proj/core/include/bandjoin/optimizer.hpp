// Recursive-partitioning optimizer: grows the split tree by repeatedly
// applying the highest-scoring split, where a split's score is the ratio of
// load-variance reduction to the input duplication it adds. Zero-duplication
// candidates form a tier above all positive-duplication ones and are ordered
// by variance reduction among themselves.

#pragma once

#include <optional>
#include <vector>

#include "bandjoin/cost_model.hpp"
#include "bandjoin/geometry.hpp"
#include "bandjoin/sampling.hpp"
#include "bandjoin/split_tree.hpp"

namespace bandjoin {

struct SplitCandidate {
  bool forSmall = false;
  // Regular-leaf candidate.
  int dim = 0;
  double value = 0.0;
  SplitKind kind = SplitKind::TSplit;
  // Small-leaf candidate: grow rows (r+1) or columns (c+1).
  bool growRow = true;

  double deltaVar = 0.0;  // V(before) - V(after), accepted only when > 0
  double deltaDup = 0.0;  // estimated extra input tuples (scaled)
};

/// Split score with an explicit zero-duplication tier above all ratio scores.
struct Score {
  int tier = 0;        // 1 when deltaDup == 0
  double value = 0.0;  // deltaVar in tier 1, deltaVar/deltaDup in tier 0

  bool positive() const { return value > 0.0; }
  friend bool operator<(const Score& a, const Score& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    return a.value < b.value;
  }
};

enum class Termination { Theoretical, Applied };

struct OptimizerConfig {
  int w = 1;
  Termination termination = Termination::Applied;
  CostModel model;                 // applied termination only
  double windowFraction = 1.0;     // window = max(1, windowFraction * w)
  double minImprovement = 0.01;
  int maxIterations = 0;           // safety cap; 0 means 50 * w
  bool allowSSplits = true;        // false gives the T-split-only variant
  int maxCandidatesPerDim = 4096;
  uint64_t seed = 0;
};

struct IterationRecord {
  int iter = 0;
  double inputEst = 0.0;    // estimated total input incl. duplication
  double maxLoadEst = 0.0;  // LPT estimate of max worker load
  double maxInputEst = 0.0;
  double maxOutputEst = 0.0;
  double variance = 0.0;
  double dupOverhead = 0.0;
  double loadOverhead = 0.0;
  double objective = 0.0;  // theoretical overhead max, or predicted time
};

struct OptimizeResult {
  SplitTree tree;  // best partitioning seen, leaf ids renumbered in DFS order
  std::vector<IterationRecord> trace;  // [0] is the initial single-leaf plan
  int iterations = 0;
  int bestIteration = 0;
};

/// Variance of per-worker load under uniform random assignment of the given
/// partitions to w workers: ((w-1)/w^2) * sum of squared loads.
double load_variance(const std::vector<double>& leafLoads, int w);

/// max{(I - (nS+nT))/(nS+nT); (L_m - L0)/L0} with
/// L0 = (beta2*(nS+nT) + beta3*estOut) / w.
double theoretical_objective(double I, double Lm, size_t nS, size_t nT,
                             double estOut, const BandSpec& spec, int w);

struct PlanEstimate {
  double I = 0.0;
  double Lm = 0.0;
  double Im = 0.0;
  double Om = 0.0;
};

/// Sample-based estimates for a structural tree: total input from routing the
/// samples, max worker load / input / output from LPT assignment of all
/// (sub-)partition loads.
PlanEstimate estimate_plan_metrics(const SplitTree& tree,
                                   const SampleSet& samples,
                                   const BandSpec& spec, int w);

OptimizeResult optimize(const SampleSet& samples, const BandSpec& spec,
                        const OptimizerConfig& cfg);

// Building blocks, exposed for direct testing.

struct LeafState {
  int id = 0;
  Rect rect;
  bool small = false;
  int rows = 1;
  int cols = 1;
  std::vector<uint32_t> sIdx;  // sample indices routed to this leaf
  std::vector<uint32_t> tIdx;
  std::vector<uint32_t> oIdx;  // output pairs, localized at the T-side tuple
  bool active = true;
};

LeafState make_root_leaf(const SampleSet& samples, const BandSpec& spec);
PartitionStats leaf_stats(const LeafState& leaf, const SampleSet& samples,
                          const BandSpec& spec);
double leaf_input_estimate(const LeafState& leaf, const SampleSet& samples);
/// Sum of squared sub-partition loads (one term for a regular leaf, r*c cell
/// terms for a small leaf).
double leaf_squared_load_sum(const LeafState& leaf, const SampleSet& samples,
                             const BandSpec& spec);

/// Smallness for optimizer leaves: the partition rect is bounded with extent
/// < 2*eps_dim in every dimension.
bool leaf_is_small(const LeafState& leaf, const SampleSet& samples,
                   const BandSpec& spec);

double delta_dup(const LeafState& leaf, const SplitCandidate& cand,
                 const SampleSet& samples, const BandSpec& spec);

std::pair<std::optional<SplitCandidate>, Score> best_split_regular(
    const LeafState& leaf, const SampleSet& samples, const BandSpec& spec,
    int w, bool allowSSplits = true, int maxCandidatesPerDim = 4096);

std::pair<SplitCandidate, Score> best_split_small(const LeafState& leaf,
                                                  const SampleSet& samples,
                                                  const BandSpec& spec, int w);

std::pair<LeafState, LeafState> apply_regular_split(const LeafState& leaf,
                                                    const SplitCandidate& cand,
                                                    const SampleSet& samples,
                                                    const BandSpec& spec);

}  // namespace bandjoin
