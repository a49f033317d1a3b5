#include "amrkit/selection.hpp"

#include <set>

#include "amrkit/penman.hpp"
#include "amrkit/triples.hpp"

namespace amrkit {

void CandidateSet::validate() const {
  if (candidates.empty()) throw SelectionError("candidate set " + id + " is empty");
  std::set<std::string> ids;
  for (const auto& c : candidates)
    if (!ids.insert(c.system_id).second)
      throw SelectionError("candidate set " + id + " repeats system id " + c.system_id);
}

namespace {

std::size_t argmax(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best] + kTieTolerance) best = i;
  return best;
}

std::size_t argmin(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] < scores[best] - kTieTolerance) best = i;
  return best;
}

void require_sentence(const CandidateSet& set) {
  if (!set.sentence) throw SelectionError("candidate set " + set.id + " has no sentence; perplexity selection needs one");
}

std::vector<double> checked(std::vector<double> values, const std::vector<ScorerRequest>& requests,
                            const PerplexityScorer& scorer) {
  if (values.size() != requests.size())
    throw ScorerError("scorer '" + scorer.name() + "' returned " + std::to_string(values.size()) +
                      " values for " + std::to_string(requests.size()) + " requests");
  for (std::size_t i = 0; i < values.size(); ++i) checked_perplexity(values[i], requests[i].request_id);
  return values;
}

}  // namespace

SelectionResult select_smatch_avg(const CandidateSet& set, const SmatchOptions& options) {
  set.validate();
  const auto l = set.candidates.size();
  if (l == 1) return {0, {1.0}, "smatch-avg"};

  std::vector<TripleSet> triples;
  triples.reserve(l);
  for (const auto& c : set.candidates) triples.push_back(extract_triples(c.graph));

  std::vector<double> scores(l, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < l; ++j)
      if (j != i) total += compute_smatch(triples[i], triples[j], options).f1();
    scores[i] = total / static_cast<double>(l - 1);
  }
  return {argmax(scores), std::move(scores), "smatch-avg"};
}

std::vector<ScorerRequest> zero_requests(const CandidateSet& set) {
  std::vector<std::string> context;
  context.reserve(set.candidates.size());
  for (const auto& c : set.candidates) context.push_back(serialize_penman(c.graph));
  std::vector<ScorerRequest> requests;
  for (std::size_t s = 0; s < set.candidates.size(); ++s)
    requests.push_back({request_key(set.id, set.candidates[s].system_id), set.sentence.value_or(""),
                        context, context[s]});
  return requests;
}

std::vector<ScorerRequest> avg_requests(const CandidateSet& set) {
  std::vector<ScorerRequest> requests;
  for (const auto& c : set.candidates)
    requests.push_back({request_key(set.id, c.system_id), set.sentence.value_or(""), {},
                        serialize_penman(c.graph)});
  return requests;
}

SelectionResult select_ppl_zero(const CandidateSet& set, PerplexityScorer& scorer) {
  set.validate();
  require_sentence(set);
  const auto requests = zero_requests(set);
  auto values = checked(scorer.score(requests), requests, scorer);
  const auto chosen = argmin(values);
  return {chosen, std::move(values), "ppl-zero"};
}

SelectionResult select_ppl_avg(const CandidateSet& set, std::span<PerplexityScorer* const> scorers) {
  set.validate();
  require_sentence(set);
  if (scorers.empty()) throw SelectionError("ppl-avg needs at least one scorer");
  const auto requests = avg_requests(set);
  std::vector<double> mean(requests.size(), 0.0);
  for (auto* scorer : scorers) {
    const auto values = checked(scorer->score(requests), requests, *scorer);
    for (std::size_t s = 0; s < values.size(); ++s) mean[s] += values[s];
  }
  for (auto& m : mean) m /= static_cast<double>(scorers.size());
  const auto chosen = argmin(mean);
  return {chosen, std::move(mean), "ppl-avg"};
}

SelectionResult select_oracle_best(const CandidateSet& set, const AmrGraph& gold,
                                   const SmatchOptions& options) {
  set.validate();
  const auto reference = extract_triples(gold);
  std::vector<double> scores;
  for (const auto& c : set.candidates)
    scores.push_back(compute_smatch(extract_triples(c.graph), reference, options).f1());
  return {argmax(scores), std::move(scores), "oracle-best"};
}

}  // namespace amrkit
