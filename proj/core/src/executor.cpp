#include "bandjoin/executor.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "bandjoin/rng.hpp"

namespace bandjoin {

WorkerAssignment assign_workers(const std::vector<DestLoad>& dests, int w,
                                AssignStrategy strategy, uint64_t seed) {
  if (w < 1) throw std::invalid_argument("assign_workers: w >= 1");
  WorkerAssignment wa;
  wa.workerOf.resize(dests.size());
  wa.load.assign(static_cast<size_t>(w), 0.0);
  wa.input.assign(static_cast<size_t>(w), 0.0);
  wa.output.assign(static_cast<size_t>(w), 0.0);

  auto place = [&](size_t destIdx, int worker) {
    wa.workerOf[destIdx] = worker;
    wa.load[worker] += dests[destIdx].load;
    wa.input[worker] += dests[destIdx].input;
    wa.output[worker] += dests[destIdx].output;
  };

  if (strategy == AssignStrategy::LPT) {
    std::vector<size_t> order(dests.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (dests[a].load != dests[b].load) return dests[a].load > dests[b].load;
      return a < b;
    });
    for (size_t i : order) {
      int best = 0;
      for (int j = 1; j < w; ++j)
        if (wa.load[j] < wa.load[best]) best = j;
      place(i, best);
    }
  } else {
    Rng rng(seed);
    for (size_t i = 0; i < dests.size(); ++i)
      place(i, static_cast<int>(rng.next_below(static_cast<uint64_t>(w))));
  }
  for (int j = 0; j < w; ++j)
    if (wa.load[j] > wa.load[wa.maxWorker]) wa.maxWorker = j;
  return wa;
}

std::vector<std::pair<uint32_t, uint32_t>> local_band_join(
    const std::vector<Tuple>& Sp, const std::vector<Tuple>& Tp,
    const BandSpec& spec) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  if (Sp.empty() || Tp.empty()) return out;
  const double e1 = spec.eps[0];

  if (e1 == 0.0) {
    // Degenerate band on A_1: exact-value hash buckets.
    auto key = [](double x) { return x == 0.0 ? 0.0 : x; };
    std::unordered_map<double, std::vector<uint32_t>> buckets;
    for (uint32_t i = 0; i < Tp.size(); ++i)
      buckets[key(Tp[i].coords[0])].push_back(i);
    for (uint32_t si = 0; si < Sp.size(); ++si) {
      auto it = buckets.find(key(Sp[si].coords[0]));
      if (it == buckets.end()) continue;
      for (uint32_t ti : it->second)
        if (joins(Sp[si], Tp[ti], spec)) out.emplace_back(si, ti);
    }
    return out;
  }

  double anchor = std::numeric_limits<double>::infinity();
  for (const Tuple& t : Tp) anchor = std::min(anchor, t.coords[0]);
  auto bucket_of = [&](double x) {
    return static_cast<int64_t>(std::floor((x - anchor) / e1));
  };
  std::unordered_map<int64_t, std::vector<uint32_t>> buckets;
  for (uint32_t i = 0; i < Tp.size(); ++i)
    buckets[bucket_of(Tp[i].coords[0])].push_back(i);
  for (uint32_t si = 0; si < Sp.size(); ++si) {
    int64_t b = bucket_of(Sp[si].coords[0]);
    for (int64_t probe = b - 1; probe <= b + 1; ++probe) {
      auto it = buckets.find(probe);
      if (it == buckets.end()) continue;
      for (uint32_t ti : it->second)
        if (joins(Sp[si], Tp[ti], spec)) out.emplace_back(si, ti);
    }
  }
  return out;
}

RunResult run_plan(const Relation& S, const Relation& T, const Plan& plan,
                   const BandSpec& spec, int w, uint64_t seed) {
  spec.validate();
  if (w < 1) throw std::invalid_argument("run_plan: w >= 1");

  RoutedInput routed;
  switch (plan.kind) {
    case Plan::Kind::RecPart:
      routed = route_all(S, T, plan.tree, spec, seed);
      break;
    case Plan::Kind::OneBucket:
      routed = one_bucket_route_all(S, T, plan.oneBucket, seed);
      break;
    case Plan::Kind::Grid:
      routed = grid_route_all(S, T, plan.grid, spec);
      break;
    case Plan::Kind::Quantile:
      routed = quantile_route_all(
          S, T, quantile_partition(S, T, spec, plan.sizePerBlock));
      break;
  }

  RunResult res;
  std::vector<DestLoad> loads(routed.destinations.size());
  std::vector<size_t> outCount(routed.destinations.size(), 0);
  std::vector<Tuple> Sp, Tp;
  for (size_t i = 0; i < routed.destinations.size(); ++i) {
    const DestinationInput& dst = routed.destinations[i];
    Sp.clear();
    Tp.clear();
    for (uint32_t si : dst.sIdx) Sp.push_back(S.tuples[si]);
    for (uint32_t ti : dst.tIdx) Tp.push_back(T.tuples[ti]);
    auto pairs = local_band_join(Sp, Tp, spec);
    outCount[i] = pairs.size();
    double in = static_cast<double>(dst.sIdx.size() + dst.tIdx.size());
    loads[i] = {spec.beta2 * in + spec.beta3 * static_cast<double>(pairs.size()),
                in, static_cast<double>(pairs.size())};
    for (const auto& [si, ti] : pairs)
      res.output.emplace_back(S.tuples[dst.sIdx[si]].id,
                              T.tuples[dst.tIdx[ti]].id);
  }

  WorkerAssignment wa = assign_workers(loads, w, AssignStrategy::LPT);

  JoinMetrics& m = res.metrics;
  m.I = routed.totalInput;
  m.outputSize = res.output.size();
  // Exact per-worker tallies, recomputed as integers.
  std::vector<size_t> wIn(static_cast<size_t>(w), 0);
  std::vector<size_t> wOut(static_cast<size_t>(w), 0);
  for (size_t i = 0; i < loads.size(); ++i) {
    int wk = wa.workerOf[i];
    wIn[wk] += routed.destinations[i].sIdx.size() +
               routed.destinations[i].tIdx.size();
    wOut[wk] += outCount[i];
  }
  m.workerLoads.resize(static_cast<size_t>(w));
  for (int j = 0; j < w; ++j) {
    m.workerLoads[j] = spec.beta2 * static_cast<double>(wIn[j]) +
                       spec.beta3 * static_cast<double>(wOut[j]);
    if (m.workerLoads[j] > m.Lm) {
      m.Lm = m.workerLoads[j];
      m.Im = wIn[j];
      m.Om = wOut[j];
    }
  }
  double nTotal = static_cast<double>(S.size() + T.size());
  m.L0 = (spec.beta2 * nTotal +
          spec.beta3 * static_cast<double>(m.outputSize)) /
         w;
  m.dupOverhead = (static_cast<double>(m.I) - nTotal) / nTotal;
  m.loadOverhead = m.L0 > 0.0 ? (m.Lm - m.L0) / m.L0 : 0.0;
  return res;
}

std::vector<std::pair<uint64_t, uint64_t>> oracle_join(const Relation& S,
                                                       const Relation& T,
                                                       const BandSpec& spec) {
  spec.validate();
  if (static_cast<double>(S.size()) * static_cast<double>(T.size()) > 1e8)
    throw std::invalid_argument("oracle_join: |S|*|T| exceeds the 1e8 bound");
  std::vector<std::pair<uint64_t, uint64_t>> out;
  for (const Tuple& s : S.tuples)
    for (const Tuple& t : T.tuples)
      if (joins(s, t, spec)) out.emplace_back(s.id, t.id);
  return out;
}

size_t densest_eps_region(const Relation& rel, const BandSpec& spec,
                          size_t budget, uint64_t seed) {
  spec.validate();
  if (rel.size() == 0) return 0;
  // Sort once on the first dimension so each anchor only scans a slab.
  std::vector<uint32_t> order(rel.size());
  for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return rel.tuples[a].coords[0] < rel.tuples[b].coords[0];
  });
  std::vector<double> firstCoord(order.size());
  for (size_t i = 0; i < order.size(); ++i)
    firstCoord[i] = rel.tuples[order[i]].coords[0];

  std::vector<size_t> anchors;
  if (budget >= rel.size()) {
    anchors.resize(rel.size());
    for (size_t i = 0; i < anchors.size(); ++i) anchors[i] = i;
  } else {
    Rng rng(seed);
    anchors = sample_without_replacement(rel.size(), budget, rng);
  }

  size_t best = 0;
  const double e0 = spec.eps[0];
  for (size_t a : anchors) {
    const Tuple& anchor = rel.tuples[a];
    size_t lo = 0, hi = firstCoord.size();
    if (std::isfinite(e0)) {
      lo = static_cast<size_t>(
          std::lower_bound(firstCoord.begin(), firstCoord.end(),
                           anchor.coords[0] - e0) -
          firstCoord.begin());
      hi = static_cast<size_t>(
          std::upper_bound(firstCoord.begin(), firstCoord.end(),
                           anchor.coords[0] + e0) -
          firstCoord.begin());
    }
    size_t count = 0;
    for (size_t i = lo; i < hi; ++i) {
      const Tuple& t = rel.tuples[order[i]];
      bool inside = true;
      for (int dim = 0; inside && dim < spec.d; ++dim)
        inside = std::abs(t.coords[dim] - anchor.coords[dim]) <= spec.eps[dim];
      if (inside) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

std::string metrics_to_json(const std::string& planKind, const JoinMetrics& m,
                            const std::vector<double>& wallTimes) {
  nlohmann::ordered_json j;
  j["plan"] = planKind;
  j["I"] = m.I;
  j["I_m"] = m.Im;
  j["O_m"] = m.Om;
  j["L_m"] = m.Lm;
  j["L0"] = m.L0;
  j["output"] = m.outputSize;
  j["dupOverhead"] = m.dupOverhead;
  j["loadOverhead"] = m.loadOverhead;
  j["wallTimes"] = wallTimes.empty() ? m.workerLoads : wallTimes;
  return j.dump(2);
}

std::string metrics_csv_header() {
  return "plan,I,I_m,O_m,L_m,L0,output,dupOverhead,loadOverhead";
}

std::string metrics_csv_row(const std::string& planKind, const JoinMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%zu,%.17g,%.17g,%zu,%.17g,%.17g",
                planKind.c_str(), m.I, m.Im, m.Om, m.Lm, m.L0, m.outputSize,
                m.dupOverhead, m.loadOverhead);
  return buf;
}

}  // namespace bandjoin
