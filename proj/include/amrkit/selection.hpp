#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "amrkit/graph.hpp"
#include "amrkit/scorer.hpp"
#include "amrkit/smatch.hpp"

namespace amrkit {

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Candidate {
  std::string system_id;
  AmrGraph graph;
};

/// A sentence with l >= 1 system predictions. `id` names the set in scorer
/// request ids.
struct CandidateSet {
  std::string id = "0";
  std::optional<std::string> sentence;
  std::vector<Candidate> candidates;

  /// Throws SelectionError when empty or when system ids repeat.
  void validate() const;
};

struct SelectionResult {
  std::size_t chosen_index = 0;
  std::vector<double> scores;  // per candidate: mean SMATCH or perplexity
  std::string strategy;
};

/// Ties on a score within this distance resolve to the lower index.
inline constexpr double kTieTolerance = 1e-12;

/// argmax of the mean SMATCH F1 against the other candidates.
SelectionResult select_smatch_avg(const CandidateSet& set, const SmatchOptions& options = {});

/// argmin of perplexity(sentence + all candidates -> candidate s).
SelectionResult select_ppl_zero(const CandidateSet& set, PerplexityScorer& scorer);

/// argmin over candidates of the mean perplexity across scorers, each scoring
/// the candidate given the sentence only.
SelectionResult select_ppl_avg(const CandidateSet& set, std::span<PerplexityScorer* const> scorers);

/// argmax of SMATCH F1 against the gold graph.
SelectionResult select_oracle_best(const CandidateSet& set, const AmrGraph& gold,
                                   const SmatchOptions& options = {});

/// Requests select_ppl_zero / select_ppl_avg would send.
std::vector<ScorerRequest> zero_requests(const CandidateSet& set);
std::vector<ScorerRequest> avg_requests(const CandidateSet& set);

}  // namespace amrkit
