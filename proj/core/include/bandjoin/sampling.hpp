// Seeded input samples and a weighted output-pair sample (a sample-join of
// the two input samples), plus per-partition input/output/load estimates.

#pragma once

#include <utility>
#include <vector>

#include "bandjoin/geometry.hpp"
#include "bandjoin/rng.hpp"

namespace bandjoin {

struct SampleSet {
  std::vector<Tuple> sS;
  std::vector<Tuple> sT;
  double wS = 1.0;  // |S| / len(sS)
  double wT = 1.0;
  // Endpoints of sampled joining pairs (parallel vectors), drawn from a
  // sample-join of two input samples and possibly thinned. These may come
  // from larger auxiliary input samples than sS/sT.
  std::vector<Tuple> oS;
  std::vector<Tuple> oT;
  double wO = 1.0;  // scale-up so E[wO * count-in-region] = true count
  size_t nS = 0;
  size_t nT = 0;

  double est_output() const { return wO * static_cast<double>(oT.size()); }
};

/// Estimated content of one partition, derived from a SampleSet.
/// S is counted by half-open containment; T is counted duplication-aware
/// (eps-range intersects the rect); output pairs are localized at their
/// T-side tuple.
struct PartitionStats {
  double estS = 0.0;
  double estT = 0.0;
  double estO = 0.0;
  double load = 0.0;
};

/// Uniform sample of k tuples without replacement; deterministic per seed.
std::pair<std::vector<Tuple>, double> draw_input_sample(const Relation& rel,
                                                        size_t k,
                                                        uint64_t seed);

/// All joining pairs of the two samples, uniformly thinned to at most `cap`
/// with the weight rescaled. Returns index pairs into (sSp, sTp) and the
/// weight for scaling regional counts to full-relation output counts.
std::pair<std::vector<std::pair<uint32_t, uint32_t>>, double>
build_output_sample(const std::vector<Tuple>& sSp, const std::vector<Tuple>& sTp,
                    size_t nS, size_t nT, const BandSpec& spec, size_t cap,
                    uint64_t seed);

/// Convenience: draw both input samples (k split evenly) and the output-pair
/// sample. The output sample joins auxiliary input samples of outputK/2
/// tuples each (outputK = 0 reuses the input samples); a larger outputK gives
/// finer per-partition output resolution for selective joins.
SampleSet make_sample_set(const Relation& S, const Relation& T,
                          const BandSpec& spec, size_t k, size_t outputCap,
                          uint64_t seed, size_t outputK = 0);

PartitionStats partition_stats(const Rect& p, const SampleSet& samples,
                               const BandSpec& spec);

}  // namespace bandjoin
