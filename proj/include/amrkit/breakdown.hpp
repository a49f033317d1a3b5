#pragma once

#include <array>
#include <string_view>

#include "amrkit/graph.hpp"
#include "amrkit/smatch.hpp"
#include "amrkit/triples.hpp"

namespace amrkit {

/// Fine-grained sub-metrics, each SMATCH over a transformed triple set.
enum class SubMetric {
  Smatch,
  Unlabeled,
  NoWsd,
  Concepts,
  Ner,
  Negations,
  Wiki,
  Reentrancies,
  Srl,
};

inline constexpr std::array<SubMetric, 9> kSubMetrics = {
    SubMetric::Smatch, SubMetric::Unlabeled, SubMetric::NoWsd,        SubMetric::Concepts,
    SubMetric::Ner,    SubMetric::Negations, SubMetric::Wiki,         SubMetric::Reentrancies,
    SubMetric::Srl,
};

std::string_view name(SubMetric metric);

struct BreakdownScores {
  SmatchScore smatch;
  SmatchScore unlabeled;
  SmatchScore no_wsd;
  SmatchScore concepts;
  SmatchScore ner;
  SmatchScore negations;
  SmatchScore wiki;
  SmatchScore reentrancies;
  SmatchScore srl;

  SmatchScore& operator[](SubMetric metric);
  const SmatchScore& operator[](SubMetric metric) const;
  BreakdownScores& operator+=(const BreakdownScores& other);
};

/// Triples a sub-metric scores for one graph:
///   Unlabeled     relation roles replaced by ":label"
///   NoWsd         sense suffixes stripped from concepts
///   Concepts      root + instance triples
///   Ner           "name" instances, :name relations, :opN attributes of name nodes
///   Negations     :polarity triples
///   Wiki          :wiki attributes
///   Reentrancies  relations into a node of in-degree >= 2, plus endpoint instances
///   Srl           :ARGn / :ARGn-of relations, plus endpoint instances
/// The role-filtered views (Ner, Negations, Wiki, Reentrancies, Srl) drop the
/// root triple.
TripleSet transform_triples(const AmrGraph& graph, SubMetric metric);

BreakdownScores compute_breakdown(const AmrGraph& candidate, const AmrGraph& reference,
                                  const SmatchOptions& options = {});

bool is_arg_role(std::string_view role);
bool is_numbered_role(std::string_view role, std::string_view prefix);

}  // namespace amrkit
