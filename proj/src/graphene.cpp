#include "amrkit/graphene.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "amrkit/triples.hpp"

namespace amrkit {

void MergeConfig::validate() const {
  if (!(vote_threshold > 0.0 && vote_threshold <= 1.0))
    throw MergeError("vote_threshold must lie in (0, 1], got " + std::to_string(vote_threshold));
}

double MergeResult::support_score() const {
  if (element_count == 0 || voters == 0) return 0.0;
  return static_cast<double>(support_sum) / static_cast<double>(element_count * voters);
}

Alignment align_to_pivot(const AmrGraph& pivot, const AmrGraph& other, const MergeConfig& config) {
  return align_smatch(extract_triples(other), extract_triples(pivot), config.smatch).alignment;
}

namespace {

using Key = std::tuple<std::string, std::string, std::string>;

struct Tally {
  Key key;  // (source, role, target-or-value) in pivot variable space
  std::size_t support = 0;
  bool in_pivot = false;
  bool keep = false;
};

/// Ordered tally table: first-seen order is preserved.
struct TallyTable {
  std::vector<Tally> rows;
  std::map<Key, std::size_t> index;

  void vote(const Key& key, bool from_pivot) {
    auto [it, inserted] = index.emplace(key, rows.size());
    if (inserted) rows.push_back({key, 0, from_pivot, false});
    ++rows[it->second].support;
  }
};

/// With keep_ties off, only the best-supported kept row per group survives;
/// the pivot's own row wins support ties, then first-seen order.
template <typename GroupOf>
void resolve_competition(TallyTable& table, GroupOf group_of) {
  std::map<Key, std::size_t> best;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (!row.keep) continue;
    const auto group = group_of(row.key);
    auto it = best.find(group);
    if (it == best.end()) {
      best.emplace(group, i);
      continue;
    }
    const auto& cur = table.rows[it->second];
    if (row.support > cur.support || (row.support == cur.support && row.in_pivot && !cur.in_pivot))
      it->second = i;
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    if (row.keep && best.at(group_of(row.key)) != i) row.keep = false;
  }
}

class Assembler {
 public:
  Assembler(const AmrGraph& pivot, std::span<const AmrGraph> others, const MergeConfig& config)
      : pivot_(pivot), others_(others), voters_(1 + others.size()) {
    needed_ = config.vote_threshold * static_cast<double>(voters_) - 1e-9;
    keep_ties_ = config.keep_ties;
    for (const auto& other : others_) {
      std::unordered_map<std::string, std::string> map;
      const auto alignment = align_to_pivot(pivot, other, config);
      for (const auto& [c, r] : alignment.pairs()) map.emplace(c.name(), r.name());
      aligned_.push_back(std::move(map));
    }
  }

  MergeResult run() {
    collect();
    decide();
    prune();
    return build();
  }

 private:
  bool meets(std::size_t support) const { return static_cast<double>(support) >= needed_; }

  std::size_t pivot_index(const std::string& name) const { return *pivot_.index_of(Variable(name)); }

  void collect() {
    const auto n = pivot_.variable_count();
    node_support_.assign(n, 1);
    concept_votes_.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) concept_votes_[v].emplace_back(pivot_.instances()[v].instance_of.label(), 1);

    for (const auto& rel : pivot_.relations())
      relations_.vote({rel.source.name(), rel.role.label(), rel.target.name()}, true);
    for (const auto& attr : pivot_.attributes())
      attributes_.vote({attr.source.name(), attr.role.label(), attr.value.value()}, true);

    for (std::size_t k = 0; k < others_.size(); ++k) {
      const auto& other = others_[k];
      const auto& map = aligned_[k];
      const auto lookup = [&map](const Variable& v) -> const std::string* {
        auto it = map.find(v.name());
        return it == map.end() ? nullptr : &it->second;
      };
      for (const auto& inst : other.instances()) {
        const auto* p = lookup(inst.variable);
        if (!p) continue;
        const auto v = pivot_index(*p);
        ++node_support_[v];
        auto& votes = concept_votes_[v];
        auto it = std::find_if(votes.begin(), votes.end(),
                               [&](const auto& e) { return e.first == inst.instance_of.label(); });
        if (it == votes.end())
          votes.emplace_back(inst.instance_of.label(), 1);
        else
          ++it->second;
      }
      std::set<Key> new_node_keys;
      for (const auto& rel : other.relations()) {
        const auto* s = lookup(rel.source);
        const auto* t = lookup(rel.target);
        if (s && t) {
          relations_.vote({*s, rel.role.label(), *t}, false);
        } else if (s && !t) {
          new_node_keys.insert({*s, rel.role.label(), other.concept_of(rel.target).label()});
        }
      }
      for (const auto& key : new_node_keys) new_nodes_.vote(key, false);
      for (const auto& attr : other.attributes())
        if (const auto* s = lookup(attr.source)) attributes_.vote({*s, attr.role.label(), attr.value.value()}, false);
    }
  }

  void decide() {
    chosen_concept_.resize(pivot_.variable_count());
    for (std::size_t v = 0; v < pivot_.variable_count(); ++v) {
      // votes[0] is the pivot's label, so strict '>' keeps it on ties.
      const auto& votes = concept_votes_[v];
      std::size_t best = 0;
      for (std::size_t i = 1; i < votes.size(); ++i)
        if (votes[i].second > votes[best].second) best = i;
      chosen_concept_[v] = best;
    }
    for (auto* table : {&relations_, &attributes_, &new_nodes_})
      for (auto& row : table->rows) row.keep = meets(row.support);
    if (!keep_ties_) {
      resolve_competition(relations_, [](const Key& k) { return Key{std::get<0>(k), "", std::get<2>(k)}; });
      resolve_competition(attributes_, [](const Key& k) { return Key{std::get<0>(k), std::get<1>(k), ""}; });
    }
  }

  /// Every alive node reachable from the root over `present` relations.
  bool connected(const std::vector<bool>& alive, const std::vector<bool>& present) const {
    const auto n = pivot_.variable_count();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < relations_.rows.size(); ++i) {
      if (!present[i]) continue;
      const auto s = pivot_index(std::get<0>(relations_.rows[i].key));
      const auto t = pivot_index(std::get<2>(relations_.rows[i].key));
      if (alive[s] && alive[t]) adj[s].push_back(t);
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{pivot_index(pivot_.root().name())};
    seen[stack.back()] = true;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (const auto t : adj[v])
        if (!seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && !seen[v]) return false;
    return true;
  }

  void prune() {
    const auto n = pivot_.variable_count();
    alive_.assign(n, true);
    present_.assign(relations_.rows.size(), false);
    for (std::size_t i = 0; i < relations_.rows.size(); ++i)
      present_[i] = relations_.rows[i].in_pivot || relations_.rows[i].keep;

    const auto root = pivot_index(pivot_.root().name());
    for (std::size_t v = 0; v < n; ++v) {
      if (v == root || meets(node_support_[v])) continue;
      alive_[v] = false;
      if (!connected(alive_, present_)) alive_[v] = true;
    }
    for (std::size_t i = 0; i < relations_.rows.size(); ++i) {
      auto& row = relations_.rows[i];
      if (!row.in_pivot || row.keep) continue;
      present_[i] = false;
      if (!connected(alive_, present_)) {
        present_[i] = true;
        row.keep = true;  // deletion suppressed
      }
    }
  }

  MergeResult build() {
    MergeResult result{pivot_, 0, 0, voters_, {}};
    std::vector<Instance> instances;
    std::vector<Relation> relations;
    std::vector<Attribute> attributes;
    const auto record = [&](std::string element, std::size_t support, bool retained) {
      result.tallies.push_back({std::move(element), support, voters_, retained});
      if (retained) {
        result.support_sum += support;
        ++result.element_count;
      }
    };

    std::unordered_set<std::string> used;
    for (std::size_t v = 0; v < pivot_.variable_count(); ++v) {
      const auto& var = pivot_.instances()[v].variable;
      used.insert(var.name());
      const auto& [label, support] = concept_votes_[v][chosen_concept_[v]];
      record(to_string(Triple::instance(var, Concept(label))), support, alive_[v]);
      if (alive_[v]) instances.push_back({var, Concept(label)});
    }
    for (const auto& attr : pivot_.attributes()) used.insert(attr.value.value());
    for (const auto& row : attributes_.rows) used.insert(std::get<2>(row.key));

    const auto alive = [&](const std::string& name) { return alive_[pivot_index(name)]; };
    for (std::size_t i = 0; i < relations_.rows.size(); ++i) {
      const auto& row = relations_.rows[i];
      const auto& [s, role, t] = row.key;
      const bool retained = present_[i] && alive(s) && alive(t);
      record("(" + s + ", " + role + ", " + t + ")", row.support, retained);
      if (retained) relations.push_back({Variable(s), Role(role), Variable(t)});
    }
    for (const auto& row : attributes_.rows) {
      const auto& [s, role, value] = row.key;
      const bool retained = row.keep && alive(s);
      record("(" + s + ", " + role + ", " + value + ")", row.support, retained);
      if (retained) attributes.push_back({Variable(s), Role(role), Constant(value)});
    }

    std::size_t next = 0;
    for (const auto& row : new_nodes_.rows) {
      const auto& [parent, role, label] = row.key;
      const bool retained = row.keep && alive(parent);
      std::string fresh;
      if (retained) {
        do fresh = "z" + std::to_string(next++);
        while (used.contains(fresh));
        used.insert(fresh);
      }
      const std::string shown = retained ? fresh : "?";
      record("(" + shown + ", :instance, " + label + ")", row.support, retained);
      record("(" + parent + ", " + role + ", " + shown + ")", row.support, retained);
      if (retained) {
        instances.push_back({Variable(fresh), Concept(label)});
        relations.push_back({Variable(parent), Role(role), Variable(fresh)});
      }
    }

    result.graph = AmrGraph(pivot_.root(), std::move(instances), std::move(relations),
                            std::move(attributes));
    return result;
  }

  const AmrGraph& pivot_;
  std::span<const AmrGraph> others_;
  std::size_t voters_;
  double needed_ = 0.0;
  bool keep_ties_ = true;
  std::vector<std::unordered_map<std::string, std::string>> aligned_;

  std::vector<std::size_t> node_support_;
  std::vector<std::vector<std::pair<std::string, std::size_t>>> concept_votes_;
  std::vector<std::size_t> chosen_concept_;
  TallyTable relations_;
  TallyTable attributes_;
  TallyTable new_nodes_;  // (aligned parent, role, concept)
  std::vector<bool> alive_;
  std::vector<bool> present_;
};

std::vector<MergeResult> merge_each_pivot(std::span<const AmrGraph> candidates, const MergeConfig& config) {
  std::vector<MergeResult> merged;
  merged.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<AmrGraph> others;
    for (std::size_t j = 0; j < candidates.size(); ++j)
      if (j != i) others.push_back(candidates[j]);
    merged.push_back(merge_with_pivot(candidates[i], others, config));
  }
  return merged;
}

/// Handles the fewer-than-two-candidates case; returns true when done.
bool degenerate(std::span<const AmrGraph> candidates, const MergeConfig& config,
                std::optional<EnsembleResult>& out) {
  if (candidates.size() >= 2) return false;
  if (candidates.empty()) throw MergeError("ensemble needs at least one candidate");
  if (!config.pass_through_single) throw MergeError("ensemble needs at least two candidates");
  out = EnsembleResult{candidates[0], 0, {1.0}, {"single candidate passed through unchanged"}};
  return true;
}

}  // namespace

MergeResult merge_with_pivot(const AmrGraph& pivot, std::span<const AmrGraph> others,
                             const MergeConfig& config) {
  config.validate();
  if (others.empty()) throw MergeError("merge_with_pivot needs at least one other graph");
  return Assembler(pivot, others, config).run();
}

EnsembleResult graphene_base(std::span<const AmrGraph> candidates, const MergeConfig& config) {
  config.validate();
  std::optional<EnsembleResult> passthrough;
  if (degenerate(candidates, config, passthrough)) return *passthrough;

  auto merged = merge_each_pivot(candidates, config);
  std::size_t best = 0;
  std::vector<double> scores;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    scores.push_back(merged[i].support_score());
    // Exact comparison of support_sum / element_count (voters is shared).
    const auto lhs = merged[i].support_sum * merged[best].element_count;
    const auto rhs = merged[best].support_sum * merged[i].element_count;
    if (lhs > rhs) best = i;
  }
  return {std::move(merged[best].graph), best, std::move(scores), {}};
}

EnsembleResult graphene_smatch(std::span<const AmrGraph> candidates, const MergeConfig& config) {
  config.validate();
  std::optional<EnsembleResult> passthrough;
  if (degenerate(candidates, config, passthrough)) return *passthrough;

  auto merged = merge_each_pivot(candidates, config);
  std::vector<TripleSet> originals;
  for (const auto& c : candidates) originals.push_back(extract_triples(c));

  std::size_t best = 0;
  std::vector<double> scores;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto triples = extract_triples(merged[i].graph);
    double total = 0.0;
    for (const auto& original : originals) total += compute_smatch(triples, original, config.smatch).f1();
    scores.push_back(total / static_cast<double>(originals.size()));
    if (scores[i] > scores[best] + 1e-12) best = i;
  }
  return {std::move(merged[best].graph), best, std::move(scores), {}};
}

}  // namespace amrkit
