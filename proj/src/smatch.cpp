#include "amrkit/smatch.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace amrkit {

bool Alignment::assign(const Variable& candidate, const Variable& reference) {
  if (forward_.contains(candidate) || backward_.contains(reference)) return false;
  forward_.emplace(candidate, reference);
  backward_.emplace(reference, candidate);
  return true;
}

std::optional<Variable> Alignment::lookup(const Variable& candidate) const {
  auto it = forward_.find(candidate);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

Alignment Alignment::inverse() const {
  Alignment inv;
  for (const auto& [c, r] : forward_) inv.assign(r, c);
  return inv;
}

double SmatchScore::precision() const {
  if (candidate_total == 0) return reference_total == 0 ? 1.0 : 0.0;
  return static_cast<double>(matched) / static_cast<double>(candidate_total);
}

double SmatchScore::recall() const {
  if (reference_total == 0) return candidate_total == 0 ? 1.0 : 0.0;
  return static_cast<double>(matched) / static_cast<double>(reference_total);
}

double SmatchScore::f1() const {
  if (candidate_total == 0 && reference_total == 0) return 1.0;
  // 2PR/(P+R) simplifies to 2m/(c+r).
  return 2.0 * static_cast<double>(matched) /
         static_cast<double>(candidate_total + reference_total);
}

SmatchScore& SmatchScore::operator+=(const SmatchScore& other) {
  matched += other.matched;
  candidate_total += other.candidate_total;
  reference_total += other.reference_total;
  return *this;
}

int compare_f1(const SmatchScore& a, const SmatchScore& b) {
  const auto da = a.candidate_total + a.reference_total;
  const auto db = b.candidate_total + b.reference_total;
  // Empty-vs-empty is 1/1.
  const std::uint64_t na = da == 0 ? 1 : 2 * a.matched;
  const std::uint64_t nb = db == 0 ? 1 : 2 * b.matched;
  const std::uint64_t lhs = na * (db == 0 ? 1 : db);
  const std::uint64_t rhs = nb * (da == 0 ? 1 : da);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct VariableIndex {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> ids;

  int intern(const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  }
  int size() const { return static_cast<int>(names.size()); }
};

VariableIndex collect_variables(const TripleSet& set) {
  VariableIndex index;
  for (const auto& t : set) {
    switch (t.kind) {
      case TripleKind::Root:
        index.intern(t.target);
        break;
      case TripleKind::Instance:
      case TripleKind::Attribute:
        index.intern(t.source);
        break;
      case TripleKind::Relation:
        index.intern(t.source);
        index.intern(t.target);
        break;
    }
  }
  return index;
}

/// Alignment scoring decomposed into per-pair (unary) and per-edge terms.
/// A mapping is a vector: candidate index -> reference index or -1.
class Problem {
 public:
  struct Edge {
    int a;
    int b;
    int role;
  };

  Problem(const TripleSet& candidate, const TripleSet& reference)
      : cand_(collect_variables(candidate)), ref_(collect_variables(reference)) {
    n_ = cand_.size();
    m_ = ref_.size();
    unary_.assign(static_cast<std::size_t>(n_) * m_, 0);

    std::unordered_map<std::string, std::vector<int>> ref_concepts;
    std::unordered_map<std::string, std::vector<int>> ref_attrs;
    std::unordered_map<std::string, int> roles;
    std::vector<int> ref_roots;
    for (const auto& t : reference) {
      switch (t.kind) {
        case TripleKind::Root:
          ref_roots.push_back(ref_.ids.at(t.target));
          break;
        case TripleKind::Instance:
          ref_concepts[t.target].push_back(ref_.ids.at(t.source));
          break;
        case TripleKind::Attribute:
          ref_attrs[t.role + '\x1f' + t.target].push_back(ref_.ids.at(t.source));
          break;
        case TripleKind::Relation: {
          const auto role = roles.emplace(t.role, static_cast<int>(roles.size())).first->second;
          ref_edges_.insert(key(ref_.ids.at(t.source), ref_.ids.at(t.target), role));
          break;
        }
      }
    }
    for (const auto& t : candidate) {
      switch (t.kind) {
        case TripleKind::Root:
          for (const int r : ref_roots) ++unary(cand_.ids.at(t.target), r);
          break;
        case TripleKind::Instance:
          if (auto it = ref_concepts.find(t.target); it != ref_concepts.end())
            for (const int r : it->second) ++unary(cand_.ids.at(t.source), r);
          break;
        case TripleKind::Attribute:
          if (auto it = ref_attrs.find(t.role + '\x1f' + t.target); it != ref_attrs.end())
            for (const int r : it->second) ++unary(cand_.ids.at(t.source), r);
          break;
        case TripleKind::Relation:
          if (auto it = roles.find(t.role); it != roles.end())
            edges_.push_back({cand_.ids.at(t.source), cand_.ids.at(t.target), it->second});
          break;
      }
    }
    incident_.assign(n_, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      incident_[edges_[e].a].push_back(e);
      if (edges_[e].b != edges_[e].a) incident_[edges_[e].b].push_back(e);
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  const VariableIndex& candidate_vars() const { return cand_; }
  const VariableIndex& reference_vars() const { return ref_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(int i) const { return incident_[i]; }

  int unary(int i, int r) const { return unary_[static_cast<std::size_t>(i) * m_ + r]; }

  bool edge_matches(const Edge& e, const std::vector<int>& map) const {
    const int ra = map[e.a];
    const int rb = map[e.b];
    return ra >= 0 && rb >= 0 && ref_edges_.contains(key(ra, rb, e.role));
  }

  int total(const std::vector<int>& map) const {
    int score = 0;
    for (int i = 0; i < n_; ++i)
      if (map[i] >= 0) score += unary(i, map[i]);
    for (const auto& e : edges_) score += edge_matches(e, map);
    return score;
  }

  /// Contribution of the unary terms of `vars` and every edge touching them.
  int local(std::initializer_list<int> vars, const std::vector<int>& map) const {
    int score = 0;
    for (const int i : vars)
      if (map[i] >= 0) score += unary(i, map[i]);
    const int first = *vars.begin();
    for (const int e : incident_[first]) score += edge_matches(edges_[e], map);
    if (vars.size() == 2) {
      const int second = *(vars.begin() + 1);
      for (const int e : incident_[second]) {
        const auto& edge = edges_[e];
        if (edge.a == first || edge.b == first) continue;
        score += edge_matches(edge, map);
      }
    }
    return score;
  }

 private:
  static std::uint64_t key(int a, int b, int role) {
    return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) |
           static_cast<std::uint64_t>(role);
  }
  int& unary(int i, int r) { return unary_[static_cast<std::size_t>(i) * m_ + r]; }

  VariableIndex cand_;
  VariableIndex ref_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> unary_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::unordered_set<std::uint64_t> ref_edges_;
};

Alignment to_alignment(const Problem& p, const std::vector<int>& map) {
  Alignment alignment;
  for (int i = 0; i < p.n(); ++i)
    if (map[i] >= 0)
      alignment.assign(Variable(p.candidate_vars().names[i]), Variable(p.reference_vars().names[map[i]]));
  return alignment;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::vector<int> greedy_start(const Problem& p) {
  std::vector<int> map(p.n(), -1);
  std::vector<bool> used(p.m(), false);
  for (int i = 0; i < p.n(); ++i) {
    int best = -1;
    int best_score = 0;
    for (int r = 0; r < p.m(); ++r) {
      if (!used[r] && p.unary(i, r) > best_score) {
        best = r;
        best_score = p.unary(i, r);
      }
    }
    if (best >= 0) {
      map[i] = best;
      used[best] = true;
    }
  }
  int next_free = 0;
  for (int i = 0; i < p.n(); ++i) {
    if (map[i] >= 0) continue;
    while (next_free < p.m() && used[next_free]) ++next_free;
    if (next_free == p.m()) break;
    map[i] = next_free;
    used[next_free] = true;
  }
  return map;
}

std::vector<int> random_start(const Problem& p, std::mt19937_64& rng) {
  std::vector<int> refs(p.m());
  std::iota(refs.begin(), refs.end(), 0);
  for (int k = p.m() - 1; k > 0; --k) std::swap(refs[k], refs[bounded(rng, k + 1)]);
  std::vector<int> cands(p.n());
  std::iota(cands.begin(), cands.end(), 0);
  for (int k = p.n() - 1; k > 0; --k) std::swap(cands[k], cands[bounded(rng, k + 1)]);

  std::vector<int> map(p.n(), -1);
  const int pairs = std::min(p.n(), p.m());
  for (int k = 0; k < pairs; ++k) map[cands[k]] = refs[k];
  return map;
}

/// Steepest ascent from `map`; returns the final score.
int climb(const Problem& p, std::vector<int>& map) {
  std::vector<int> owner(p.m(), -1);
  for (int i = 0; i < p.n(); ++i)
    if (map[i] >= 0) owner[map[i]] = i;
  int score = p.total(map);

  while (true) {
    int best_gain = 0;
    int move_i = -1, move_r = -1, move_j = -1;

    for (int i = 0; i < p.n(); ++i) {
      const int before_local = p.local({i}, map);
      const int old = map[i];
      for (int r = 0; r < p.m(); ++r) {
        if (owner[r] >= 0) continue;
        map[i] = r;
        const int gain = p.local({i}, map) - before_local;
        if (gain > best_gain) {
          best_gain = gain;
          move_i = i;
          move_r = r;
          move_j = -1;
        }
      }
      map[i] = old;
    }
    for (int i = 0; i < p.n(); ++i) {
      for (int j = i + 1; j < p.n(); ++j) {
        if (map[i] == map[j]) continue;  // both unmapped
        const int before_local = p.local({i, j}, map);
        std::swap(map[i], map[j]);
        const int gain = p.local({i, j}, map) - before_local;
        std::swap(map[i], map[j]);
        if (gain > best_gain) {
          best_gain = gain;
          move_i = i;
          move_j = j;
          move_r = -1;
        }
      }
    }
    if (best_gain <= 0) return score;

    if (move_j < 0) {
      if (map[move_i] >= 0) owner[map[move_i]] = -1;
      map[move_i] = move_r;
      owner[move_r] = move_i;
    } else {
      std::swap(map[move_i], map[move_j]);
      if (map[move_i] >= 0) owner[map[move_i]] = move_i;
      if (map[move_j] >= 0) owner[map[move_j]] = move_j;
    }
    score += best_gain;
  }
}

/// Branch and bound over injections of candidate variables into reference
/// variables; requires n <= m.
class ExactSearch {
 public:
  explicit ExactSearch(const Problem& p) : p_(p), map_(p.n(), -1), used_(p.m(), false) {
    const int n = p.n();
    closing_.assign(n, {});
    remaining_edges_.assign(n + 1, 0);
    for (int e = 0; e < static_cast<int>(p.edges().size()); ++e) {
      const int last = std::max(p.edges()[e].a, p.edges()[e].b);
      closing_[last].push_back(e);
      for (int k = 0; k < last; ++k) ++remaining_edges_[k];
    }
    suffix_unary_.assign(n + 1, 0);
    for (int i = n - 1; i >= 0; --i) {
      int best = 0;
      for (int r = 0; r < p.m(); ++r) best = std::max(best, p.unary(i, r));
      suffix_unary_[i] = suffix_unary_[i + 1] + best;
    }
  }

  std::vector<int> run(int& best_score) {
    best_ = -1;
    best_map_ = map_;
    if (p_.n() == 0) {
      best_ = 0;
    } else {
      search(0, 0);
    }
    best_score = best_;
    return best_map_;
  }

 private:
  void search(int i, int score) {
    for (int r = 0; r < p_.m(); ++r) {
      if (used_[r]) continue;
      map_[i] = r;
      used_[r] = true;
      int next = score + p_.unary(i, r);
      for (const int e : closing_[i]) next += p_.edge_matches(p_.edges()[e], map_);
      if (i + 1 == p_.n()) {
        if (next > best_) {
          best_ = next;
          best_map_ = map_;
        }
      } else if (next + suffix_unary_[i + 1] + remaining_edges_[i] > best_) {
        search(i + 1, next);
      }
      used_[r] = false;
      map_[i] = -1;
    }
  }

  const Problem& p_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<std::vector<int>> closing_;
  std::vector<int> remaining_edges_;
  std::vector<int> suffix_unary_;
  int best_ = -1;
  std::vector<int> best_map_;
};

}  // namespace

std::size_t matched_count(const TripleSet& candidate, const TripleSet& reference,
                          const Alignment& alignment) {
  std::size_t matched = 0;
  const auto map = [&](const std::string& v) -> std::optional<std::string> {
    auto mapped = alignment.lookup(Variable(v));
    if (!mapped) return std::nullopt;
    return mapped->name();
  };
  for (const auto& t : candidate) {
    Triple image = t;
    bool ok = true;
    switch (t.kind) {
      case TripleKind::Root:
        if (auto v = map(t.target)) image.target = *v; else ok = false;
        break;
      case TripleKind::Instance:
      case TripleKind::Attribute:
        if (auto v = map(t.source)) image.source = *v; else ok = false;
        break;
      case TripleKind::Relation: {
        auto s = map(t.source);
        auto d = map(t.target);
        if (s && d) {
          image.source = *s;
          image.target = *d;
        } else {
          ok = false;
        }
        break;
      }
    }
    if (ok && reference.contains(image)) ++matched;
  }
  return matched;
}

AlignmentResult best_alignment_exact(const TripleSet& candidate, const TripleSet& reference,
                                     std::size_t max_variables) {
  Problem forward(candidate, reference);
  const auto smaller = static_cast<std::size_t>(std::min(forward.n(), forward.m()));
  if (smaller > max_variables)
    throw AlignmentBoundExceeded("exact alignment needs " + std::to_string(smaller) +
                                 " variables on the smaller side; bound is " +
                                 std::to_string(max_variables));

  AlignmentResult result;
  int best = 0;
  if (forward.n() <= forward.m()) {
    ExactSearch search(forward);
    const auto map = search.run(best);
    result.alignment = to_alignment(forward, map);
  } else {
    // Overlap is symmetric under inverting the alignment.
    Problem backward(reference, candidate);
    ExactSearch search(backward);
    const auto map = search.run(best);
    result.alignment = to_alignment(backward, map).inverse();
  }
  result.score = {static_cast<std::size_t>(best), candidate.size(), reference.size()};
  return result;
}

AlignmentResult best_alignment_exact(const AmrGraph& candidate, const AmrGraph& reference,
                                     std::size_t max_variables) {
  return best_alignment_exact(extract_triples(candidate), extract_triples(reference), max_variables);
}

AlignmentResult align_smatch(const TripleSet& candidate, const TripleSet& reference,
                             const SmatchOptions& options) {
  const Problem p(candidate, reference);
  const auto ceiling = static_cast<int>(std::min(candidate.size(), reference.size()));
  std::mt19937_64 rng(options.seed);

  std::vector<int> best_map = greedy_start(p);
  int best = climb(p, best_map);
  for (unsigned restart = 1; restart < std::max(1u, options.restarts) && best < ceiling; ++restart) {
    auto map = random_start(p, rng);
    const int score = climb(p, map);
    if (score > best) {
      best = score;
      best_map = std::move(map);
    }
  }
  return {to_alignment(p, best_map),
          {static_cast<std::size_t>(best), candidate.size(), reference.size()}};
}

SmatchScore compute_smatch(const TripleSet& candidate, const TripleSet& reference,
                           const SmatchOptions& options) {
  return align_smatch(candidate, reference, options).score;
}

SmatchScore compute_smatch(const AmrGraph& candidate, const AmrGraph& reference,
                           const SmatchOptions& options) {
  return compute_smatch(extract_triples(candidate), extract_triples(reference), options);
}

}  // namespace amrkit
