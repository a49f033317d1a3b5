#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "amrkit/graph.hpp"

namespace amrkit {

enum class TripleKind { Root, Instance, Relation, Attribute };

/// One SMATCH unit. Which fields hold variables depends on kind:
///   Root       target = variable, source/role unused
///   Instance   source = variable, target = concept label
///   Relation   source, target = variables
///   Attribute  source = variable, target = constant
struct Triple {
  TripleKind kind;
  std::string source;
  std::string role;
  std::string target;

  auto operator<=>(const Triple&) const = default;

  static Triple root(const Variable& v) { return {TripleKind::Root, "", ":root", v.name()}; }
  static Triple instance(const Variable& v, const Concept& c) {
    return {TripleKind::Instance, v.name(), ":instance", c.label()};
  }
  static Triple relation(const Relation& r) {
    return {TripleKind::Relation, r.source.name(), r.role.label(), r.target.name()};
  }
  static Triple attribute(const Attribute& a) {
    return {TripleKind::Attribute, a.source.name(), a.role.label(), a.value.value()};
  }
};

/// "(empty, :root, z0)", "(z0, :instance, schedule-01)", "(z2, :op1, \"Antonio\")".
std::string to_string(const Triple& triple);

/// A set of triples in traversal order. Duplicates are not stored.
class TripleSet {
 public:
  TripleSet() = default;
  explicit TripleSet(std::vector<Triple> triples);

  void add(Triple triple);
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }
  bool contains(const Triple& t) const;

 private:
  std::vector<Triple> triples_;
  std::set<Triple> index_;
};

/// Root triple, then per node in depth-first order: its instance triple, each
/// outgoing relation followed by the target's subtree on first visit, then its
/// attributes. Size is always 1 + |instances| + |relations| + |attributes|.
TripleSet extract_triples(const AmrGraph& graph);

}  // namespace amrkit
