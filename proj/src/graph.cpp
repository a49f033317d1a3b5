#include "amrkit/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

namespace amrkit {

namespace {

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '/' ||
         c == '"';
}

/// A token the Penman reader accepts as one bare symbol.
bool is_bare_symbol(std::string_view s) {
  return !s.empty() && s.front() != ':' && std::none_of(s.begin(), s.end(), is_delimiter);
}

bool is_quoted_literal(std::string_view s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return false;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      if (i + 1 >= s.size()) return false;
    } else if (s[i] == '"') {
      return false;
    }
  }
  return true;
}

}  // namespace

Variable::Variable(std::string name) : name_(std::move(name)) {
  if (!is_bare_symbol(name_)) throw GraphError("invalid variable name '" + name_ + "'");
}

Concept::Concept(std::string label) : label_(std::move(label)) {
  if (!is_bare_symbol(label_)) throw GraphError("invalid concept label '" + label_ + "'");
}

Constant::Constant(std::string value) : value_(std::move(value)) {
  if (!is_bare_symbol(value_) && !is_quoted_literal(value_))
    throw GraphError("invalid constant '" + value_ + "'");
}

Role::Role(std::string label) : label_(std::move(label)) {
  if (label_.size() < 2 || label_.front() != ':')
    throw GraphError("role must start with ':' and be non-empty: '" + label_ + "'");
  if (std::any_of(label_.begin() + 1, label_.end(), is_delimiter))
    throw GraphError("invalid role '" + label_ + "'");
}

bool is_predicate(std::string_view label) {
  const auto dash = label.rfind('-');
  if (dash == std::string_view::npos || dash == 0) return false;
  const auto suffix = label.substr(dash + 1);
  if (suffix.size() < 2 || suffix.size() > 3) return false;
  return std::all_of(suffix.begin(), suffix.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

bool is_predicate(const Concept& c) { return is_predicate(c.label()); }

std::string strip_sense(std::string_view label) {
  if (!is_predicate(label)) return std::string(label);
  return std::string(label.substr(0, label.rfind('-')));
}

AmrGraph::AmrGraph(Variable root, std::vector<Instance> instances,
                   std::vector<Relation> relations, std::vector<Attribute> attributes)
    : root_(std::move(root)),
      instances_(std::move(instances)),
      relations_(std::move(relations)),
      attributes_(std::move(attributes)) {
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    if (!index_.emplace(instances_[i].variable.name(), i).second)
      throw GraphError("duplicate instance for variable " + instances_[i].variable.name());
  }
  const auto require = [this](const Variable& v, const char* where) {
    auto it = index_.find(v.name());
    if (it == index_.end())
      throw GraphError(std::string(where) + " references undeclared variable " + v.name());
    return it->second;
  };
  require(root_, "root");

  const std::size_t n = instances_.size();
  out_relations_.assign(n, {});
  out_attributes_.assign(n, {});
  in_degree_.assign(n, 0);

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const auto& rel = relations_[r];
    const auto s = require(rel.source, "relation");
    const auto t = require(rel.target, "relation");
    if (!seen.emplace(rel.source.name(), rel.role.label(), rel.target.name()).second)
      throw GraphError("duplicate relation (" + rel.source.name() + ", " + rel.role.label() +
                       ", " + rel.target.name() + ")");
    out_relations_[s].push_back(r);
    ++in_degree_[t];
  }
  seen.clear();
  for (std::size_t a = 0; a < attributes_.size(); ++a) {
    const auto& attr = attributes_[a];
    const auto s = require(attr.source, "attribute");
    if (!seen.emplace(attr.source.name(), attr.role.label(), attr.value.value()).second)
      throw GraphError("duplicate attribute (" + attr.source.name() + ", " +
                       attr.role.label() + ", " + attr.value.value() + ")");
    if (attr.value.value().front() != '"' && index_.contains(attr.value.value()))
      throw GraphError("constant " + attr.value.value() + " collides with a variable name");
    out_attributes_[s].push_back(a);
  }

  // Iterative DFS; children pushed in reverse so stored order is preserved.
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> stack{index_.at(root_.name())};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (visited[v]) continue;
    visited[v] = true;
    dfs_order_.push_back(v);
    const auto& out = out_relations_[v];
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      const auto t = index_.at(relations_[*it].target.name());
      if (!visited[t]) stack.push_back(t);
    }
  }
  if (dfs_order_.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (!visited[i])
        throw GraphError("variable " + instances_[i].variable.name() +
                         " is not reachable from root " + root_.name());
  }
}

bool AmrGraph::has_variable(const Variable& v) const { return index_.contains(v.name()); }

std::optional<std::size_t> AmrGraph::index_of(const Variable& v) const {
  auto it = index_.find(v.name());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Concept& AmrGraph::concept_of(const Variable& v) const {
  auto it = index_.find(v.name());
  if (it == index_.end()) throw GraphError("unknown variable " + v.name());
  return instances_[it->second].instance_of;
}

AmrGraph rename_variables(const AmrGraph& graph) {
  std::unordered_map<std::string, Variable> renamed;
  std::vector<Instance> instances;
  instances.reserve(graph.variable_count());
  std::size_t next = 0;
  for (const auto i : graph.dfs_order()) {
    const auto& inst = graph.instances()[i];
    Variable fresh("z" + std::to_string(next++));
    renamed.emplace(inst.variable.name(), fresh);
    instances.push_back({fresh, inst.instance_of});
  }
  const auto map = [&](const Variable& v) { return renamed.at(v.name()); };

  std::vector<Relation> relations;
  relations.reserve(graph.relations().size());
  for (const auto& r : graph.relations()) relations.push_back({map(r.source), r.role, map(r.target)});
  std::vector<Attribute> attributes;
  attributes.reserve(graph.attributes().size());
  for (const auto& a : graph.attributes()) attributes.push_back({map(a.source), a.role, a.value});
  return AmrGraph(map(graph.root()), std::move(instances), std::move(relations),
                  std::move(attributes));
}

bool identical(const AmrGraph& a, const AmrGraph& b) {
  return a.root() == b.root() && std::ranges::equal(a.instances(), b.instances()) &&
         std::ranges::equal(a.relations(), b.relations()) &&
         std::ranges::equal(a.attributes(), b.attributes());
}

}  // namespace amrkit
