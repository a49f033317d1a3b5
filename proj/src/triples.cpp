#include "amrkit/triples.hpp"

#include <functional>

namespace amrkit {

std::string to_string(const Triple& triple) {
  const std::string source = triple.kind == TripleKind::Root ? "empty" : triple.source;
  return "(" + source + ", " + triple.role + ", " + triple.target + ")";
}

TripleSet::TripleSet(std::vector<Triple> triples) {
  triples_.reserve(triples.size());
  for (auto& t : triples) add(std::move(t));
}

void TripleSet::add(Triple triple) {
  if (index_.insert(triple).second) triples_.push_back(std::move(triple));
}

bool TripleSet::contains(const Triple& t) const { return index_.contains(t); }

TripleSet extract_triples(const AmrGraph& graph) {
  std::vector<Triple> out;
  out.reserve(1 + graph.instances().size() + graph.relations().size() + graph.attributes().size());
  out.push_back(Triple::root(graph.root()));

  std::vector<bool> visited(graph.variable_count(), false);
  const std::function<void(std::size_t)> walk = [&](std::size_t v) {
    visited[v] = true;
    const auto& inst = graph.instances()[v];
    out.push_back(Triple::instance(inst.variable, inst.instance_of));
    for (const auto r : graph.outgoing_relations(v)) {
      const auto& rel = graph.relations()[r];
      out.push_back(Triple::relation(rel));
      const auto t = *graph.index_of(rel.target);
      if (!visited[t]) walk(t);
    }
    for (const auto a : graph.outgoing_attributes(v)) out.push_back(Triple::attribute(graph.attributes()[a]));
  };
  walk(*graph.index_of(graph.root()));

  return TripleSet(std::move(out));
}

}  // namespace amrkit
