#include "amrkit/breakdown.hpp"

#include <algorithm>
#include <unordered_set>

namespace amrkit {

std::string_view name(SubMetric metric) {
  switch (metric) {
    case SubMetric::Smatch: return "smatch";
    case SubMetric::Unlabeled: return "unlabeled";
    case SubMetric::NoWsd: return "no_wsd";
    case SubMetric::Concepts: return "concepts";
    case SubMetric::Ner: return "ner";
    case SubMetric::Negations: return "negations";
    case SubMetric::Wiki: return "wikification";
    case SubMetric::Reentrancies: return "reentrancies";
    case SubMetric::Srl: return "srl";
  }
  return "unknown";
}

SmatchScore& BreakdownScores::operator[](SubMetric metric) {
  switch (metric) {
    case SubMetric::Smatch: return smatch;
    case SubMetric::Unlabeled: return unlabeled;
    case SubMetric::NoWsd: return no_wsd;
    case SubMetric::Concepts: return concepts;
    case SubMetric::Ner: return ner;
    case SubMetric::Negations: return negations;
    case SubMetric::Wiki: return wiki;
    case SubMetric::Reentrancies: return reentrancies;
    case SubMetric::Srl: return srl;
  }
  return smatch;
}

const SmatchScore& BreakdownScores::operator[](SubMetric metric) const {
  return const_cast<BreakdownScores&>(*this)[metric];
}

BreakdownScores& BreakdownScores::operator+=(const BreakdownScores& other) {
  for (const auto m : kSubMetrics) (*this)[m] += other[m];
  return *this;
}

bool is_numbered_role(std::string_view role, std::string_view prefix) {
  if (!role.starts_with(prefix)) return false;
  const auto digits = role.substr(prefix.size());
  return !digits.empty() &&
         std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_arg_role(std::string_view role) {
  if (role.ends_with("-of")) role.remove_suffix(3);
  return is_numbered_role(role, ":ARG");
}

namespace {

void add_endpoint_instances(const AmrGraph& graph, const Relation& rel, TripleSet& out) {
  out.add(Triple::instance(rel.source, graph.concept_of(rel.source)));
  out.add(Triple::instance(rel.target, graph.concept_of(rel.target)));
}

}  // namespace

TripleSet transform_triples(const AmrGraph& graph, SubMetric metric) {
  const auto all = extract_triples(graph);
  TripleSet out;
  switch (metric) {
    case SubMetric::Smatch:
      return all;
    case SubMetric::Unlabeled:
      for (auto t : all) {
        if (t.kind == TripleKind::Relation) t.role = ":label";
        out.add(std::move(t));
      }
      return out;
    case SubMetric::NoWsd:
      for (auto t : all) {
        if (t.kind == TripleKind::Instance) t.target = strip_sense(t.target);
        out.add(std::move(t));
      }
      return out;
    case SubMetric::Concepts:
      for (const auto& t : all)
        if (t.kind == TripleKind::Root || t.kind == TripleKind::Instance) out.add(t);
      return out;
    case SubMetric::Ner: {
      std::unordered_set<std::string> name_nodes;
      for (const auto& inst : graph.instances())
        if (inst.instance_of.label() == "name") name_nodes.insert(inst.variable.name());
      for (const auto& t : all) {
        switch (t.kind) {
          case TripleKind::Instance:
            if (t.target == "name") out.add(t);
            break;
          case TripleKind::Relation:
            if (t.role == ":name") out.add(t);
            break;
          case TripleKind::Attribute:
            if (name_nodes.contains(t.source) && is_numbered_role(t.role, ":op")) out.add(t);
            break;
          case TripleKind::Root:
            break;
        }
      }
      return out;
    }
    case SubMetric::Negations:
      for (const auto& t : all)
        if (t.kind != TripleKind::Root && t.role == ":polarity") out.add(t);
      return out;
    case SubMetric::Wiki:
      for (const auto& t : all)
        if (t.kind == TripleKind::Attribute && t.role == ":wiki") out.add(t);
      return out;
    case SubMetric::Reentrancies:
      for (const auto& t : all) {
        if (t.kind != TripleKind::Relation) continue;
        const Variable target(t.target);
        if (graph.in_degree(*graph.index_of(target)) < 2) continue;
        out.add(t);
        add_endpoint_instances(graph, {Variable(t.source), Role(t.role), target}, out);
      }
      return out;
    case SubMetric::Srl:
      for (const auto& t : all) {
        if (t.kind != TripleKind::Relation || !is_arg_role(t.role)) continue;
        out.add(t);
        add_endpoint_instances(graph, {Variable(t.source), Role(t.role), Variable(t.target)}, out);
      }
      return out;
  }
  return out;
}

BreakdownScores compute_breakdown(const AmrGraph& candidate, const AmrGraph& reference,
                                  const SmatchOptions& options) {
  BreakdownScores scores;
  for (const auto m : kSubMetrics)
    scores[m] = compute_smatch(transform_triples(candidate, m), transform_triples(reference, m), options);
  return scores;
}

}  // namespace amrkit
