#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "amrkit/graph.hpp"
#include "amrkit/smatch.hpp"

namespace amrkit {

class MergeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MergeConfig {
  /// Minimum fraction of voters (pivot included) an element needs, in (0, 1].
  double vote_threshold = 0.5;
  /// Keep every competing label that reaches the threshold instead of only
  /// the best supported one.
  bool keep_ties = true;
  /// With a single candidate, return it unchanged instead of failing.
  bool pass_through_single = true;
  SmatchOptions smatch;

  void validate() const;
};

/// Support collected for one pivot-space element.
struct VoteTally {
  std::string element;  // printable triple, e.g. "(z3, :mod, z4)"
  std::size_t support = 0;
  std::size_t total_voters = 0;
  bool retained = false;
};

struct MergeResult {
  AmrGraph graph;
  std::size_t support_sum = 0;    // summed support of retained elements
  std::size_t element_count = 0;  // retained instances + relations + attributes
  std::size_t voters = 0;
  std::vector<VoteTally> tallies;

  /// Mean vote fraction of retained elements.
  double support_score() const;
};

/// Alignment from `other`'s variables to `pivot`'s, found by the SMATCH search.
Alignment align_to_pivot(const AmrGraph& pivot, const AmrGraph& other, const MergeConfig& config);

/// Corrects `pivot` by majority vote of itself and `others`.
///
/// Every pivot instance, relation and attribute is kept iff its support
/// fraction reaches the threshold; aligned elements missing from the pivot
/// are added on the same rule. Relation labels competing for one node pair
/// (and values competing for one (node, role)) all survive when each reaches
/// the threshold, which is how a two-candidate disagreement keeps both edges.
/// Deletions that would disconnect the graph are skipped.
MergeResult merge_with_pivot(const AmrGraph& pivot, std::span<const AmrGraph> others,
                             const MergeConfig& config = {});

struct EnsembleResult {
  AmrGraph graph;
  std::size_t pivot_index = 0;
  std::vector<double> pivot_scores;  // support score or mean SMATCH per pivot
  std::vector<std::string> warnings;
};

/// Every candidate is the pivot once; returns the modified pivot with the
/// highest support score (lowest index on ties).
EnsembleResult graphene_base(std::span<const AmrGraph> candidates, const MergeConfig& config = {});

/// As graphene_base, but picks the modified pivot with the highest mean SMATCH
/// F1 against all original candidates.
EnsembleResult graphene_smatch(std::span<const AmrGraph> candidates, const MergeConfig& config = {});

}  // namespace amrkit
