#include "cohsplit/coherent_split.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace cohsplit {

bool SplitCertificate::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::size_t distinct_star_points(std::span<const GroupElement> elements) {
  std::set<Point> stars;
  for (const auto& a : elements) {
    for (const Point& x : a) {
      if (x.is_star()) stars.insert(x);
    }
  }
  return stars.size();
}

std::size_t default_auto_threshold(std::size_t cutoff) {
  auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(cutoff)));
  while (root * root < cutoff) ++root;
  while (root > 0 && (root - 1) * (root - 1) >= cutoff) --root;
  return root;
}

PartitionReport clopen_certificate(const CoherentMap& map,
                                   std::span<const GroupElement> elements) {
  PartitionReport report;
  report.values.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Bit v = hom_eval(map, elements[i]);
    report.values.push_back(v);
    (v ? report.u1 : report.u0).push_back(i);
  }
  return report;
}

namespace {

std::span<const GroupElement> prefix_of(std::span<const GroupElement> stream,
                                        std::size_t cutoff) {
  if (cutoff == 0 || cutoff > stream.size()) cutoff = stream.size();
  return stream.first(cutoff);
}

void require_distinct(std::span<const GroupElement> elements) {
  std::unordered_set<GroupElement, GroupElementHash> seen;
  for (const auto& a : elements) {
    if (!seen.insert(a).second) throw DuplicateElement(to_string(a));
  }
}

// Classifies the elements and fills the bookkeeping shared by both paths.
void finish(SplitCertificate& cert, std::span<const GroupElement> elements, OracleBank& oracles,
            const std::map<UltrafilterId, std::size_t>& mark) {
  cert.elements.assign(elements.begin(), elements.end());
  const auto report = clopen_certificate(cert.map, elements);
  cert.values = report.values;
  cert.class0 = report.u0;
  cert.class1 = report.u1;
  cert.star_points = distinct_star_points(elements);
  cert.transcripts = oracles.transcripts_since(mark);
  if (cert.class0.empty() || cert.class1.empty()) cert.flags.push_back(kFlagInsufficientPrefix);
}

std::map<UltrafilterId, std::vector<PeriodicSet>> initial_commitments(const OracleBank& oracles) {
  return oracles.commitments();
}

}  // namespace

SplitCertificate split_finite_trace(std::span<const GroupElement> stream, std::size_t cutoff,
                                    OracleBank& oracles) {
  const auto elements = prefix_of(stream, cutoff);
  if (elements.empty()) throw EmptyInput();
  require_distinct(elements);

  SplitCertificate cert;
  cert.path = SplitPath::finite;
  cert.initial_commitments = initial_commitments(oracles);
  const auto mark = oracles.mark();

  std::map<GroupElement, std::vector<std::size_t>> by_trace;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    by_trace[star_trace(elements[i])].push_back(i);
  }
  // Largest bucket; std::map order makes the least trace win ties.
  auto best = by_trace.begin();
  for (auto it = by_trace.begin(); it != by_trace.end(); ++it) {
    if (it->second.size() > best->second.size()) best = it;
  }

  FiniteTraceRecord record;
  record.trace = best->first;
  record.dominant = best->second;
  for (const auto& [trace, members] : by_trace) {
    record.buckets.push_back(TraceBucket{trace, members.size()});
  }

  SplitterState splitter;
  for (std::size_t i : record.dominant) {
    GroupElement rest = set_minus(elements[i], record.trace);
    if (rest.empty()) continue;  // a == I; its class is f~(I)
    splitter.feed(rest);
  }
  record.reports = splitter.log();
  record.steered = splitter.steered();

  // One column per occurring pair, holding {n : g(p, k, n) = 1}.
  std::map<ColumnKey, std::vector<Nat>> ones;
  for (const auto& a : elements) {
    for (const Point& x : a) ones[x.column()];
  }
  for (const auto& [x, value] : splitter.partial().assignments()) {
    if (value == 1 && !x.is_star()) ones[x.column()].push_back(x.n.value());
  }
  std::vector<ColumnSpec> specs;
  specs.reserve(ones.size());
  for (auto& [key, members] : ones) {
    specs.push_back(ColumnSpec{key.first, key.second, PeriodicSet::finite(std::move(members))});
  }
  for (auto& column : extend_coherently(specs, oracles)) cert.map.set_column(std::move(column));

  record.trace_value = hom_eval(cert.map, record.trace);
  cert.guarantee = record.steered;
  if (by_trace.size() > default_auto_threshold(elements.size())) {
    cert.flags.push_back(kFlagManyStarTraces);
  }
  cert.finite_trace = std::move(record);
  finish(cert, elements, oracles, mark);
  return cert;
}

std::size_t witness_guarantee(std::span<const ChainStep> steps) {
  std::set<std::size_t> by_parity[2];
  for (const auto& step : steps) {
    const auto* hit = std::get_if<Hit>(&step.goal);
    if (hit && step.witness) by_parity[hit->parity & 1].insert(step.witness->index);
  }
  return 2 * std::min(by_parity[0].size(), by_parity[1].size());
}

namespace {

SplitCertificate from_chain(const ForcingChain& chain, std::span<const GroupElement> elements,
                            OracleBank& oracles,
                            std::map<UltrafilterId, std::vector<PeriodicSet>> initial,
                            const std::map<UltrafilterId, std::size_t>& mark) {
  SplitCertificate cert;
  cert.path = SplitPath::infinite;
  cert.initial_commitments = std::move(initial);
  cert.map = chain.current().as_map();
  cert.chain = chain.steps();
  cert.guarantee = witness_guarantee(chain.steps());
  finish(cert, elements, oracles, mark);
  return cert;
}

}  // namespace

SplitCertificate forcing_split(std::span<const GroupElement> stream,
                               std::span<const DenseGoal> schedule, OracleBank& oracles) {
  auto initial = initial_commitments(oracles);
  const auto mark = oracles.mark();
  ForcingChain chain(stream, oracles);
  for (const auto& goal : schedule) chain.meet(goal);
  return from_chain(chain, stream, oracles, std::move(initial), mark);
}

SplitCertificate coherent_split(std::span<const GroupElement> stream, const SplitParams& params,
                                OracleBank& oracles) {
  const auto elements = prefix_of(stream, params.cutoff);
  if (elements.empty()) throw EmptyInput();
  require_distinct(elements);

  const std::size_t threshold =
      params.auto_threshold.value_or(default_auto_threshold(elements.size()));
  bool infinite = params.mode == StarMode::infinite;
  if (params.mode == StarMode::automatic) infinite = distinct_star_points(elements) > threshold;

  SplitCertificate cert;
  if (!infinite) {
    cert = split_finite_trace(elements, 0, oracles);
  } else {
    auto initial = initial_commitments(oracles);
    const auto mark = oracles.mark();
    ForcingChain chain(elements, oracles);
    std::vector<GroupElement> witnesses;
    const std::size_t limit = params.hit_goals.value_or(elements.size());
    for (std::size_t t = 0; t < limit; ++t) {
      try {
        const auto& step = chain.meet(Hit{witnesses, static_cast<Bit>(t % 2)});
        witnesses.push_back(elements[step.witness->index]);
      } catch (const NoWitness&) {
        if (params.hit_goals) throw;
        break;
      }
    }
    std::set<UltrafilterId> ultrafilters;
    std::set<GeneratorId> generators;
    for (const auto& a : elements) {
      for (const Point& x : a) {
        ultrafilters.insert(x.p);
        generators.insert(x.k);
      }
    }
    for (const auto& p : ultrafilters) chain.meet(AddUltrafilter{p});
    for (const auto& k : generators) chain.meet(AddGenerator{k});
    cert = from_chain(chain, elements, oracles, std::move(initial), mark);
  }
  SplitParams recorded = params;
  recorded.cutoff = elements.size();
  recorded.auto_threshold = threshold;
  cert.params = recorded;
  return cert;
}

}  // namespace cohsplit
