#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amrkit/graph.hpp"

namespace amrkit {

enum class ViolationKind {
  ArgOnNonPredicate,
  OpOrSntOnPredicate,
  EntityStructure,
  ConnectorStructure,
};

std::string_view name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  Variable variable;
  std::optional<Role> role;
  std::string message;
};

/// Violations ordered by the source variable's depth-first position, then by
/// role label (violations without a role first).
struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const noexcept { return violations.empty(); }
  std::size_t size() const noexcept { return violations.size(); }
};

/// Runs the four structural checks:
///  - ArgOnNonPredicate: :ARGn / :ARGn-of leaving a node whose concept is not a frame.
///  - OpOrSntOnPredicate: :opN / :sntN leaving a frame node.
///  - EntityStructure: a "name" node must carry only :opN constants numbered
///    1..k (k >= 1) and be the target of a :name edge; :wiki only on nodes
///    with an outgoing :name edge.
///  - ConnectorStructure: and/or/either/neither need >= 2 :opN numbered 1..k
///    and nothing but modifier roles besides; multi-sentence needs :sntN
///    numbered 1..k (k >= 1) likewise.
ValidationReport validate_graph(const AmrGraph& graph);

bool is_corrupted(const AmrGraph& graph);

std::size_t count_corrupted(std::span<const AmrGraph> graphs);

}  // namespace amrkit
