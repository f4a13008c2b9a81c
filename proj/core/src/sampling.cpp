#include "bandjoin/sampling.hpp"

#include <stdexcept>

#include "bandjoin/executor.hpp"

namespace bandjoin {

std::pair<std::vector<Tuple>, double> draw_input_sample(const Relation& rel,
                                                        size_t k,
                                                        uint64_t seed) {
  if (k == 0 || k > rel.size())
    throw std::invalid_argument("draw_input_sample: need 0 < k <= |rel|");
  Rng rng(seed);
  std::vector<Tuple> out;
  out.reserve(k);
  for (size_t idx : sample_without_replacement(rel.size(), k, rng))
    out.push_back(rel.tuples[idx]);
  double weight = static_cast<double>(rel.size()) / static_cast<double>(k);
  return {std::move(out), weight};
}

std::pair<std::vector<std::pair<uint32_t, uint32_t>>, double>
build_output_sample(const std::vector<Tuple>& sSp, const std::vector<Tuple>& sTp,
                    size_t nS, size_t nT, const BandSpec& spec, size_t cap,
                    uint64_t seed) {
  if (cap == 0) throw std::invalid_argument("build_output_sample: cap must be > 0");
  auto pairs = local_band_join(sSp, sTp, spec);
  double weight = (static_cast<double>(nS) * static_cast<double>(nT)) /
                  (static_cast<double>(sSp.size()) * static_cast<double>(sTp.size()));
  if (pairs.size() > cap) {
    Rng rng(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
    std::vector<std::pair<uint32_t, uint32_t>> kept;
    kept.reserve(cap);
    for (size_t idx : sample_without_replacement(pairs.size(), cap, rng))
      kept.push_back(pairs[idx]);
    weight *= static_cast<double>(pairs.size()) / static_cast<double>(cap);
    pairs = std::move(kept);
  }
  return {std::move(pairs), weight};
}

SampleSet make_sample_set(const Relation& S, const Relation& T,
                          const BandSpec& spec, size_t k, size_t outputCap,
                          uint64_t seed, size_t outputK) {
  SampleSet out;
  out.nS = S.size();
  out.nT = T.size();
  size_t kS = std::min(k / 2, S.size());
  size_t kT = std::min(k / 2, T.size());
  std::tie(out.sS, out.wS) = draw_input_sample(S, kS, seed);
  std::tie(out.sT, out.wT) = draw_input_sample(T, kT, seed + 1);

  std::vector<Tuple> auxS, auxT;
  const std::vector<Tuple>* oFromS = &out.sS;
  const std::vector<Tuple>* oFromT = &out.sT;
  if (outputK > 0) {
    auxS = draw_input_sample(S, std::min(outputK / 2, S.size()), seed + 2).first;
    auxT = draw_input_sample(T, std::min(outputK / 2, T.size()), seed + 3).first;
    oFromS = &auxS;
    oFromT = &auxT;
  }
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  std::tie(pairs, out.wO) = build_output_sample(*oFromS, *oFromT, out.nS,
                                                out.nT, spec, outputCap, seed);
  out.oS.reserve(pairs.size());
  out.oT.reserve(pairs.size());
  for (const auto& [si, ti] : pairs) {
    out.oS.push_back((*oFromS)[si]);
    out.oT.push_back((*oFromT)[ti]);
  }
  return out;
}

PartitionStats partition_stats(const Rect& p, const SampleSet& samples,
                               const BandSpec& spec) {
  PartitionStats st;
  size_t cS = 0, cT = 0, cO = 0;
  for (const Tuple& s : samples.sS)
    if (p.contains(s.coords)) ++cS;
  for (const Tuple& t : samples.sT)
    if (rect_intersects(p, eps_range(t, spec))) ++cT;
  for (const Tuple& t : samples.oT)
    if (p.contains(t.coords)) ++cO;
  st.estS = samples.wS * static_cast<double>(cS);
  st.estT = samples.wT * static_cast<double>(cT);
  st.estO = samples.wO * static_cast<double>(cO);
  st.load = spec.beta2 * (st.estS + st.estT) + spec.beta3 * st.estO;
  return st;
}

}  // namespace bandjoin
