#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace amrkit {

/// Raised when a graph would violate one of the AmrGraph invariants.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Node identifier, e.g. "z0". No whitespace, parentheses or slashes.
class Variable {
 public:
  Variable() = default;
  explicit Variable(std::string name);

  const std::string& name() const noexcept { return name_; }
  auto operator<=>(const Variable&) const = default;

 private:
  std::string name_;
};

/// Node label such as "schedule-01" or "person". Never quoted.
class Concept {
 public:
  Concept() = default;
  explicit Concept(std::string label);

  const std::string& label() const noexcept { return label_; }
  auto operator<=>(const Concept&) const = default;

 private:
  std::string label_;
};

/// Literal attribute value. Quoted strings keep their quotes ("\"Antonio\"").
class Constant {
 public:
  Constant() = default;
  explicit Constant(std::string value);

  const std::string& value() const noexcept { return value_; }
  auto operator<=>(const Constant&) const = default;

 private:
  std::string value_;
};

/// Edge label starting with ':'.
class Role {
 public:
  Role() = default;
  explicit Role(std::string label);

  const std::string& label() const noexcept { return label_; }
  auto operator<=>(const Role&) const = default;

 private:
  std::string label_;
};

struct Instance {
  Variable variable;
  Concept instance_of;
  bool operator==(const Instance&) const = default;
};

struct Relation {
  Variable source;
  Role role;
  Variable target;
  bool operator==(const Relation&) const = default;
};

struct Attribute {
  Variable source;
  Role role;
  Constant value;
  bool operator==(const Attribute&) const = default;
};

/// True iff the label carries a frame sense suffix: '-' followed by 2 or 3
/// decimal digits ("schedule-01", "have-org-role-91").
bool is_predicate(const Concept& c);
bool is_predicate(std::string_view label);

/// Removes a trailing frame sense suffix ("duck-01" -> "duck").
std::string strip_sense(std::string_view label);

/// Rooted, labeled, possibly reentrant directed graph.
///
/// Immutable once constructed. Construction checks that every variable used
/// by the root, relations and attributes has exactly one instance, that there
/// are no duplicate relation or attribute entries, and that every variable is
/// reachable from the root by following relations from source to target.
class AmrGraph {
 public:
  AmrGraph(Variable root, std::vector<Instance> instances,
           std::vector<Relation> relations, std::vector<Attribute> attributes);

  const Variable& root() const noexcept { return root_; }
  std::span<const Instance> instances() const noexcept { return instances_; }
  std::span<const Relation> relations() const noexcept { return relations_; }
  std::span<const Attribute> attributes() const noexcept { return attributes_; }

  std::size_t variable_count() const noexcept { return instances_.size(); }
  bool has_variable(const Variable& v) const;
  std::optional<std::size_t> index_of(const Variable& v) const;
  const Concept& concept_of(const Variable& v) const;

  /// Indices into relations() whose source is the variable at instance index.
  std::span<const std::size_t> outgoing_relations(std::size_t var_index) const {
    return out_relations_[var_index];
  }
  std::span<const std::size_t> outgoing_attributes(std::size_t var_index) const {
    return out_attributes_[var_index];
  }
  /// Number of relations whose target is the variable at instance index.
  std::size_t in_degree(std::size_t var_index) const { return in_degree_[var_index]; }

  /// Instance indices in depth-first discovery order from the root, children
  /// visited in stored relation order.
  const std::vector<std::size_t>& dfs_order() const noexcept { return dfs_order_; }

 private:
  Variable root_;
  std::vector<Instance> instances_;
  std::vector<Relation> relations_;
  std::vector<Attribute> attributes_;

  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_relations_;
  std::vector<std::vector<std::size_t>> out_attributes_;
  std::vector<std::size_t> in_degree_;
  std::vector<std::size_t> dfs_order_;
};

/// Renames variables to z0, z1, ... in depth-first discovery order.
AmrGraph rename_variables(const AmrGraph& graph);

/// Structural equality including variable names and stored order.
bool identical(const AmrGraph& a, const AmrGraph& b);

}  // namespace amrkit

template <>
struct std::hash<amrkit::Variable> {
  std::size_t operator()(const amrkit::Variable& v) const noexcept {
    return std::hash<std::string>{}(v.name());
  }
};
