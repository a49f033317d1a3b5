#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>

#include "amrkit/graph.hpp"
#include "amrkit/triples.hpp"

namespace amrkit {

/// Partial injective map from candidate variables to reference variables.
class Alignment {
 public:
  /// Adds candidate -> reference. Returns false (and changes nothing) when
  /// either side is already mapped.
  bool assign(const Variable& candidate, const Variable& reference);
  std::optional<Variable> lookup(const Variable& candidate) const;
  std::size_t size() const noexcept { return forward_.size(); }
  bool empty() const noexcept { return forward_.empty(); }
  const std::map<Variable, Variable>& pairs() const noexcept { return forward_; }
  Alignment inverse() const;

  bool operator==(const Alignment& other) const { return forward_ == other.forward_; }

 private:
  std::map<Variable, Variable> forward_;
  std::map<Variable, Variable> backward_;
};

/// Triple overlap counts. Ratios are derived; when both totals are zero every
/// ratio is 1.0, otherwise a zero denominator gives 0.
struct SmatchScore {
  std::size_t matched = 0;
  std::size_t candidate_total = 0;
  std::size_t reference_total = 0;

  double precision() const;
  double recall() const;
  double f1() const;

  SmatchScore& operator+=(const SmatchScore& other);
  bool operator==(const SmatchScore&) const = default;
};

/// Exact comparison of F1 values by cross-multiplication.
int compare_f1(const SmatchScore& a, const SmatchScore& b);

struct SmatchOptions {
  unsigned restarts = 8;
  std::uint64_t seed = 0x5eed;
};

inline constexpr std::size_t kDefaultExactBound = 10;

class AlignmentBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlignmentResult {
  Alignment alignment;
  SmatchScore score;
};

/// Number of candidate triples whose image under the alignment is a reference
/// triple. Triples with an unmapped variable never match.
std::size_t matched_count(const TripleSet& candidate, const TripleSet& reference,
                          const Alignment& alignment);

/// Maximum overlap over all injective alignments (branch and bound).
/// Throws AlignmentBoundExceeded when the smaller side has more than
/// `max_variables` variables.
AlignmentResult best_alignment_exact(const TripleSet& candidate, const TripleSet& reference,
                                     std::size_t max_variables = kDefaultExactBound);
AlignmentResult best_alignment_exact(const AmrGraph& candidate, const AmrGraph& reference,
                                     std::size_t max_variables = kDefaultExactBound);

/// Restarted steepest-ascent hill climbing. The first climb starts from a
/// greedy concept-match assignment, the remaining `restarts - 1` from random
/// ones drawn from a generator seeded with options.seed. Moves are single
/// reassignment to a free reference variable and pairwise swap; ties go to
/// the first move in (variable, target) order.
AlignmentResult align_smatch(const TripleSet& candidate, const TripleSet& reference,
                             const SmatchOptions& options = {});

SmatchScore compute_smatch(const TripleSet& candidate, const TripleSet& reference,
                           const SmatchOptions& options = {});
SmatchScore compute_smatch(const AmrGraph& candidate, const AmrGraph& reference,
                           const SmatchOptions& options = {});

/// Derives a per-call seed from a global seed and a pair/entry id (splitmix64).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id);

}  // namespace amrkit
