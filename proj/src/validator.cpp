#include "amrkit/validator.hpp"

#include <algorithm>
#include <array>

#include "amrkit/breakdown.hpp"

namespace amrkit {

std::string_view name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ArgOnNonPredicate: return "ArgOnNonPredicate";
    case ViolationKind::OpOrSntOnPredicate: return "OpOrSntOnPredicate";
    case ViolationKind::EntityStructure: return "EntityStructure";
    case ViolationKind::ConnectorStructure: return "ConnectorStructure";
  }
  return "Unknown";
}

namespace {

constexpr std::array<std::string_view, 4> kConnectors = {"and", "or", "either", "neither"};

constexpr std::array<std::string_view, 15> kModifierRoles = {
    ":mod",      ":polarity",  ":time",      ":location", ":manner",
    ":purpose",  ":cause",     ":condition", ":concession", ":frequency",
    ":duration", ":degree",    ":quant",     ":li",       ":wiki",
};

bool contains(auto const& list, std::string_view value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

struct Outgoing {
  const Role* role;
  bool is_relation;
};

unsigned long role_number(std::string_view role, std::string_view prefix) {
  return std::stoul(std::string(role.substr(prefix.size())));
}

class Checker {
 public:
  explicit Checker(const AmrGraph& graph) : graph_(graph) {
    has_name_edge_into_.assign(graph.variable_count(), false);
    for (const auto& rel : graph.relations())
      if (rel.role.label() == ":name") has_name_edge_into_[*graph.index_of(rel.target)] = true;
  }

  ValidationReport run() {
    for (const auto v : graph_.dfs_order()) check_node(v);
    std::stable_sort(report_.violations.begin(), report_.violations.end(),
                     [this](const Violation& a, const Violation& b) {
                       const auto pa = position(a.variable);
                       const auto pb = position(b.variable);
                       if (pa != pb) return pa < pb;
                       if (a.role.has_value() != b.role.has_value()) return !a.role.has_value();
                       if (a.role && b.role && a.role->label() != b.role->label())
                         return a.role->label() < b.role->label();
                       return false;
                     });
    return std::move(report_);
  }

 private:
  std::size_t position(const Variable& v) const {
    const auto idx = *graph_.index_of(v);
    const auto& order = graph_.dfs_order();
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), idx) - order.begin());
  }

  void flag(ViolationKind kind, const Variable& v, const Role* role, std::string message) {
    report_.violations.push_back(
        {kind, v, role ? std::optional<Role>(*role) : std::nullopt, std::move(message)});
  }

  /// Flags a missing or out-of-sequence member of 1..k among numbered roles.
  void check_sequence(ViolationKind kind, const Variable& v, std::vector<const Role*> roles,
                      std::string_view prefix) {
    std::stable_sort(roles.begin(), roles.end(), [prefix](const Role* a, const Role* b) {
      return role_number(a->label(), prefix) < role_number(b->label(), prefix);
    });
    for (std::size_t k = 0; k < roles.size(); ++k) {
      if (role_number(roles[k]->label(), prefix) != k + 1) {
        flag(kind, v, roles[k],
             std::string(prefix.substr(1)) + " roles of " + v.name() + " are not numbered 1.." +
                 std::to_string(roles.size()) + " (found " + roles[k]->label() + ")");
        return;
      }
    }
  }

  void check_node(std::size_t v) {
    const auto& inst = graph_.instances()[v];
    const auto& var = inst.variable;
    const auto& label = inst.instance_of.label();
    const bool predicate = is_predicate(inst.instance_of);

    std::vector<Outgoing> out;
    for (const auto r : graph_.outgoing_relations(v)) out.push_back({&graph_.relations()[r].role, true});
    for (const auto a : graph_.outgoing_attributes(v)) out.push_back({&graph_.attributes()[a].role, false});

    bool has_name_edge = false;
    for (const auto& o : out) {
      const auto& role = o.role->label();
      if (o.is_relation && role == ":name") has_name_edge = true;
      if (!predicate && is_arg_role(role))
        flag(ViolationKind::ArgOnNonPredicate, var, o.role,
             "non-predicate " + label + " (" + var.name() + ") has argument role " + role);
      if (predicate && (is_numbered_role(role, ":op") || is_numbered_role(role, ":snt")))
        flag(ViolationKind::OpOrSntOnPredicate, var, o.role,
             "predicate " + label + " (" + var.name() + ") has role " + role);
    }

    // Entity structures.
    for (const auto& o : out) {
      if (o.is_relation || o.role->label() != ":wiki" || has_name_edge) continue;
      flag(ViolationKind::EntityStructure, var, o.role,
           ":wiki on " + var.name() + " which has no :name edge");
    }
    if (label == "name") {
      std::vector<const Role*> ops;
      for (const auto& o : out) {
        if (!o.is_relation && is_numbered_role(o.role->label(), ":op")) {
          ops.push_back(o.role);
        } else {
          flag(ViolationKind::EntityStructure, var, o.role,
               "name node " + var.name() + " has " + (o.is_relation ? "relation " : "attribute ") +
                   o.role->label() + "; only :opN constants are allowed");
        }
      }
      if (ops.empty())
        flag(ViolationKind::EntityStructure, var, nullptr, "name node " + var.name() + " has no :opN");
      else
        check_sequence(ViolationKind::EntityStructure, var, ops, ":op");
      if (!has_name_edge_into_[v])
        flag(ViolationKind::EntityStructure, var, nullptr,
             "name node " + var.name() + " is not the target of a :name edge");
    }

    // Connector structures.
    const bool connector = contains(kConnectors, label);
    const bool multi_sentence = label == "multi-sentence";
    if (connector || multi_sentence) {
      const std::string_view prefix = connector ? ":op" : ":snt";
      const std::size_t minimum = connector ? 2 : 1;
      std::vector<const Role*> members;
      for (const auto& o : out) {
        const auto& role = o.role->label();
        if (is_numbered_role(role, prefix)) {
          members.push_back(o.role);
        } else if (!contains(kModifierRoles, role)) {
          flag(ViolationKind::ConnectorStructure, var, o.role,
               label + " (" + var.name() + ") has non-modifier role " + role);
        }
      }
      if (members.size() < minimum)
        flag(ViolationKind::ConnectorStructure, var, nullptr,
             label + " (" + var.name() + ") needs at least " + std::to_string(minimum) + " " +
                 std::string(prefix) + "N roles, found " + std::to_string(members.size()));
      check_sequence(ViolationKind::ConnectorStructure, var, members, prefix);
    }
  }

  const AmrGraph& graph_;
  std::vector<bool> has_name_edge_into_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_graph(const AmrGraph& graph) { return Checker(graph).run(); }

bool is_corrupted(const AmrGraph& graph) { return !validate_graph(graph).empty(); }

std::size_t count_corrupted(std::span<const AmrGraph> graphs) {
  return static_cast<std::size_t>(
      std::count_if(graphs.begin(), graphs.end(), [](const AmrGraph& g) { return is_corrupted(g); }));
}

}  // namespace amrkit
