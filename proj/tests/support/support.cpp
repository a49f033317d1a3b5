#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "amrkit/penman.hpp"

namespace amrkit::testing {

const char* const kGoldPenman = R"((z0 / schedule-01
    :ARG0 (z1 / person
        :name (z2 / name
            :op1 "Antonio"
            :op2 "Banderas"))
    :ARG1 (z3 / premiere-01
        :ARG0 z1
        :ARG1 (z4 / movie
            :poss z1))
    :ARG3 (z5 / date-entity
        :time "15:00")))";

const char* const kPred1Penman = R"((z0 / schedule-01
    :ARG0 (z1 / person
        :name (z2 / name
            :op1 "Antonio"
            :op2 "Banderas"))
    :ARG1 (z3 / premiere
        :mod (z4 / movie)
        :poss z1)
    :ARG3 (z5 / date-entity
        :time "15:00")))";

const char* const kPred2Penman = R"((z0 / schedule-01
    :ARG0 (z1 / person
        :name (z2 / name
            :op1 "Antonio"
            :op2 "Banderas"))
    :ARG1 (z3 / premiere-01
        :ARG0 z1
        :ARG1 (z4 / movie
            :poss z1))
    :ARG3 (z5 / date-entity
        :time "3:00")))";

const char* const kMergedPenman = R"((z0 / schedule-01
    :ARG0 (z1 / person
        :name (z2 / name
            :op1 "Antonio"
            :op2 "Banderas"))
    :ARG1 (z3 / premiere
        :mod (z4 / movie
            :poss z1)
        :poss z1
        :ARG0 z1
        :ARG1 z4)
    :ARG3 (z5 / date-entity
        :time "15:00"
        :time "3:00")))";

const char* const kListingPenman = R"((z0 / schedule-01
    :ARG0 (z1 / person
        :name (z2 / name
            :op1 "Antonio"
            :op2 "Banderas"))
    :ARG1 (z3 / premiere-01
        :ARG0 z1
        :ARG1 (z4 / movie
            :poss z1)
    :time (z5 / date-entity
        :time "15:00"))))";

AmrGraph gold() { return parse_penman(kGoldPenman); }
AmrGraph pred1() { return parse_penman(kPred1Penman); }
AmrGraph pred2() { return parse_penman(kPred2Penman); }
AmrGraph merged() { return parse_penman(kMergedPenman); }

std::vector<std::string> gold_triple_listing() {
  return {
      "(empty, :root, z0)",
      "(z0, :instance, schedule-01)",
      "(z0, :ARG0, z1)",
      "(z1, :instance, person)",
      "(z1, :name, z2)",
      "(z2, :instance, name)",
      "(z2, :op1, \"Antonio\")",
      "(z2, :op2, \"Banderas\")",
      "(z0, :ARG1, z3)",
      "(z3, :instance, premiere-01)",
      "(z3, :ARG0, z1)",
      "(z3, :ARG1, z4)",
      "(z4, :instance, movie)",
      "(z4, :poss, z1)",
      "(z0, :ARG3, z5)",
      "(z5, :instance, date-entity)",
      "(z5, :time, \"15:00\")",
  };
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> variables_of(const TripleSet& triples) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  const auto add = [&](const std::string& v) {
    if (seen.insert(v).second) out.push_back(v);
  };
  for (const auto& t : triples) {
    if (t.kind != TripleKind::Root) add(t.source);
    if (t.kind == TripleKind::Root || t.kind == TripleKind::Relation) add(t.target);
  }
  return out;
}

/// Per-triple match tables: for a triple of the enumerated side, whether its
/// image under a given choice of target variables is in the other side.
struct Slot {
  std::size_t last = 0;            // highest enumerated variable index it uses
  std::vector<std::size_t> vars;   // enumerated variable indices, in field order
  std::vector<char> hit;           // indexed by image choice, row-major
};

}  // namespace

std::size_t brute_force_matched(const TripleSet& candidate, const TripleSet& reference) {
  const auto cv = variables_of(candidate);
  const auto rv = variables_of(reference);
  const bool flip = cv.size() > rv.size();
  const auto& small = flip ? rv : cv;
  const auto& large = flip ? cv : rv;
  const auto& from = flip ? reference : candidate;
  const auto& to = flip ? candidate : reference;
  const std::size_t k = small.size(), m = large.size();

  std::set<std::tuple<int, std::string, std::string, std::string>> into;
  for (const auto& t : to) into.insert({static_cast<int>(t.kind), t.source, t.role, t.target});
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[small[i]] = i;

  // Triples that mention a variable of neither side never match; those with
  // no enumerated variable match or not regardless of the injection.
  std::size_t fixed = 0;
  std::vector<std::vector<Slot>> by_last(k);
  for (const auto& t : from) {
    const bool source_var = t.kind != TripleKind::Root;
    const bool target_var = t.kind == TripleKind::Root || t.kind == TripleKind::Relation;
    Slot slot;
    bool unknown = false;
    for (const auto& [is_var, field] : {std::pair{source_var, &t.source}, std::pair{target_var, &t.target}}) {
      if (!is_var) continue;
      const auto it = index.find(*field);
      if (it == index.end()) unknown = true;
      else slot.vars.push_back(it->second);
    }
    if (unknown) continue;
    if (slot.vars.empty()) {
      fixed += into.contains({static_cast<int>(t.kind), t.source, t.role, t.target}) ? 1 : 0;
      continue;
    }
    const std::size_t choices = slot.vars.size() == 1 ? m : m * m;
    slot.hit.assign(choices, 0);
    for (std::size_t c = 0; c < choices; ++c) {
      const std::size_t first = slot.vars.size() == 1 ? c : c / m;
      std::string source = t.source, target = t.target;
      if (source_var) source = large[first];
      if (target_var) target = large[slot.vars.size() == 1 ? first : c % m];
      slot.hit[c] = into.contains({static_cast<int>(t.kind), source, t.role, target}) ? 1 : 0;
    }
    slot.last = *std::max_element(slot.vars.begin(), slot.vars.end());
    by_last[slot.last].push_back(std::move(slot));
  }
  if (k == 0) return fixed;

  // Every injection small -> large, enumerated depth first without pruning.
  std::vector<std::size_t> image(k, 0);
  std::vector<char> used(m, 0);
  std::size_t best = 0;
  const std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t depth, std::size_t count) {
    if (depth == k) {
      best = std::max(best, count);
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      image[depth] = j;
      std::size_t gained = 0;
      for (const auto& slot : by_last[depth]) {
        const std::size_t c =
            slot.vars.size() == 1 ? image[slot.vars[0]] : image[slot.vars[0]] * m + image[slot.vars[1]];
        gained += static_cast<std::size_t>(slot.hit[c]);
      }
      visit(depth + 1, count + gained);
      used[j] = 0;
    }
  };
  visit(0, 0);
  return best + fixed;
}

SmatchScore brute_force_smatch(const TripleSet& candidate, const TripleSet& reference) {
  return {brute_force_matched(candidate, reference), candidate.size(), reference.size()};
}

// ---------------------------------------------------------------------------

std::size_t uniform(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

namespace {

const std::vector<std::string> kPredicates = {"want-01", "go-02", "see-01", "schedule-01",
                                              "premiere-01", "believe-01", "have-org-role-91"};
const std::vector<std::string> kNouns = {"person", "movie", "boy", "girl", "dog", "thing", "date-entity", "city"};
const std::vector<std::string> kEntities = {"person", "city", "country", "organization"};
const std::vector<std::string> kWords = {"\"Antonio\"", "\"Banderas\"", "\"New\"", "\"York\"", "\"Ada\""};
const std::vector<std::string> kPredicateRoles = {":ARG0", ":ARG1", ":ARG2", ":ARG1-of", ":time", ":location", ":manner"};
const std::vector<std::string> kNounRoles = {":mod", ":poss", ":location", ":part", ":topic", ":consist-of"};

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[uniform(rng, items.size())];
}

bool chance(std::mt19937_64& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

struct Builder {
  std::vector<Instance> instances;
  std::vector<Relation> relations;
  std::vector<Attribute> attributes;
  std::set<std::tuple<std::string, std::string, std::string>> keys;

  explicit Builder(const AmrGraph& g)
      : instances(g.instances().begin(), g.instances().end()),
        relations(g.relations().begin(), g.relations().end()),
        attributes(g.attributes().begin(), g.attributes().end()) {
    for (const auto& r : relations) keys.insert({r.source.name(), r.role.label(), r.target.name()});
    for (const auto& a : attributes) keys.insert({a.source.name(), a.role.label(), a.value.value()});
  }
  Builder() = default;

  std::size_t size() const { return instances.size(); }
  const std::string& label(std::size_t i) const { return instances[i].instance_of.label(); }
  const Variable& var(std::size_t i) const { return instances[i].variable; }

  std::string fresh_name() const {
    std::set<std::string> used;
    for (const auto& in : instances) used.insert(in.variable.name());
    for (std::size_t k = instances.size();; ++k)
      if (!used.contains("z" + std::to_string(k))) return "z" + std::to_string(k);
  }

  std::size_t add_node(const std::string& label) {
    instances.push_back({Variable(fresh_name()), Concept(label)});
    return instances.size() - 1;
  }
  bool add_relation(std::size_t s, const std::string& role, std::size_t t) {
    if (!keys.insert({var(s).name(), role, var(t).name()}).second) return false;
    relations.push_back({var(s), Role(role), var(t)});
    return true;
  }
  bool add_attribute(std::size_t s, const std::string& role, const std::string& value) {
    if (!keys.insert({var(s).name(), role, value}).second) return false;
    attributes.push_back({var(s), Role(role), Constant(value)});
    return true;
  }
  std::optional<std::size_t> find(const Variable& v) const {
    for (std::size_t i = 0; i < instances.size(); ++i)
      if (instances[i].variable == v) return i;
    return std::nullopt;
  }

  AmrGraph build(const Variable& root) const { return AmrGraph(root, instances, relations, attributes); }
};

bool is_connector(const std::string& label) {
  return label == "and" || label == "or" || label == "either" || label == "neither" || label == "multi-sentence";
}

/// A node that can take ordinary children and attributes.
bool plain(const std::string& label) { return label != "name" && !is_connector(label); }

std::string child_role(const std::string& parent, std::mt19937_64& rng) {
  return is_predicate(parent) ? pick(kPredicateRoles, rng) : pick(kNounRoles, rng);
}

std::string random_label(std::mt19937_64& rng) {
  return chance(rng, 0.5) ? pick(kPredicates, rng) : pick(kNouns, rng);
}

std::vector<std::size_t> plain_nodes(const Builder& b) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (plain(b.label(i))) out.push_back(i);
  return out;
}

}  // namespace

AmrGraph random_graph(std::mt19937_64& rng, const GeneratorOptions& options) {
  const auto span = options.max_variables - options.min_variables + 1;
  const auto target = options.min_variables + uniform(rng, span);

  Builder b;
  const auto root = b.add_node(random_label(rng));
  while (b.size() < target) {
    const auto parents = plain_nodes(b);
    const auto p = pick(parents, rng);
    const auto remaining = target - b.size();
    const auto roll = uniform(rng, 10);

    if (options.named_entities && remaining >= 2 && roll < 2) {
      const auto entity = b.add_node(pick(kEntities, rng));
      b.add_relation(p, child_role(b.label(p), rng), entity);
      const auto name = b.add_node("name");
      b.add_relation(entity, ":name", name);
      const auto ops = 1 + uniform(rng, 3);
      for (std::size_t k = 1; k <= ops; ++k) b.add_attribute(name, ":op" + std::to_string(k), pick(kWords, rng));
      if (chance(rng, 0.5)) b.add_attribute(entity, ":wiki", chance(rng, 0.5) ? "-" : "\"Q42\"");
    } else if (options.connectors && remaining >= 3 && roll < 4) {
      const auto c = b.add_node(chance(rng, 0.5) ? "and" : "or");
      b.add_relation(p, child_role(b.label(p), rng), c);
      const auto k = 2 + uniform(rng, std::min<std::size_t>(2, remaining - 2));
      for (std::size_t i = 1; i <= k; ++i) b.add_relation(c, ":op" + std::to_string(i), b.add_node(random_label(rng)));
      if (chance(rng, 0.2)) b.add_attribute(c, ":polarity", "-");
    } else {
      const auto child = b.add_node(random_label(rng));
      b.add_relation(p, child_role(b.label(p), rng), child);
    }
  }

  const auto sources = plain_nodes(b);
  for (const auto s : sources) {
    if (chance(rng, options.reentrancy) && b.size() > 1) {
      auto t = uniform(rng, b.size());
      if (t != s && b.label(t) != "name") b.add_relation(s, child_role(b.label(s), rng), t);
    }
    if (chance(rng, options.attribute)) {
      if (chance(rng, 0.5))
        b.add_attribute(s, ":polarity", "-");
      else
        b.add_attribute(s, ":quant", std::to_string(1 + uniform(rng, 9)));
    }
  }
  return b.build(b.var(root));
}

AmrGraph mutate(const AmrGraph& graph, std::mt19937_64& rng, int edits) {
  AmrGraph current = graph;
  for (int e = 0; e < edits; ++e) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      Builder b(current);
      const auto n = b.size();
      switch (uniform(rng, 7)) {
        case 0:
          b.instances[uniform(rng, n)].instance_of = Concept(random_label(rng));
          break;
        case 1: {
          if (b.relations.empty()) continue;
          auto& r = b.relations[uniform(rng, b.relations.size())];
          r.role = Role(chance(rng, 0.5) ? pick(kPredicateRoles, rng) : pick(kNounRoles, rng));
          break;
        }
        case 2: {
          if (b.attributes.empty()) continue;
          b.attributes[uniform(rng, b.attributes.size())].value = Constant(pick(kWords, rng));
          break;
        }
        case 3: {
          if (b.relations.empty()) continue;
          b.relations.erase(b.relations.begin() + static_cast<std::ptrdiff_t>(uniform(rng, b.relations.size())));
          break;
        }
        case 4:
          b.add_relation(uniform(rng, n), pick(kNounRoles, rng), uniform(rng, n));
          break;
        case 5:
          b.add_attribute(uniform(rng, n), ":polarity", "-");
          break;
        case 6: {
          if (b.attributes.empty()) continue;
          b.attributes.erase(b.attributes.begin() + static_cast<std::ptrdiff_t>(uniform(rng, b.attributes.size())));
          break;
        }
      }
      try {
        current = b.build(current.root());
        break;
      } catch (const GraphError&) {
        continue;  // dropped a bridge or duplicated an edge
      }
    }
  }
  return current;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t other_node(const Builder& b, std::size_t v, std::mt19937_64& rng) {
  if (b.size() == 1) return v;
  auto t = uniform(rng, b.size() - 1);
  return t >= v ? t + 1 : t;
}

std::size_t count_ops(const Builder& b, std::size_t v, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& r : b.relations)
    if (r.source == b.var(v) && r.role.label().starts_with(prefix)) ++n;
  for (const auto& a : b.attributes)
    if (a.source == b.var(v) && a.role.label().starts_with(prefix)) ++n;
  return n;
}

bool has_name_edge(const Builder& b, std::size_t v) {
  for (const auto& r : b.relations)
    if (r.source == b.var(v) && r.role.label() == ":name") return true;
  return false;
}

}  // namespace

Injection inject(const AmrGraph& clean, ViolationKind kind, std::mt19937_64& rng) {
  Builder b(clean);
  const auto root = *b.find(clean.root());
  const auto filter = [&b](auto pred) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (pred(i)) out.push_back(i);
    return out;
  };
  std::size_t v = 0;
  std::optional<Role> role;

  switch (kind) {
    case ViolationKind::ArgOnNonPredicate: {
      auto nodes = filter([&](std::size_t i) { return plain(b.label(i)) && !is_predicate(b.label(i)); });
      if (nodes.empty()) {
        const auto n = b.add_node("thing");
        b.add_relation(root, is_predicate(b.label(root)) ? ":ARG2" : ":mod", n);
        nodes.push_back(n);
      }
      v = pick(nodes, rng);
      const std::string r = pick(std::vector<std::string>{":ARG0", ":ARG1", ":ARG2-of"}, rng);
      if (b.size() > 1 && chance(rng, 0.7))
        b.add_relation(v, r, other_node(b, v, rng));
      else
        b.add_attribute(v, r, "\"x\"");
      role = Role(r);
      break;
    }
    case ViolationKind::OpOrSntOnPredicate: {
      auto nodes = filter([&](std::size_t i) { return is_predicate(b.label(i)); });
      if (nodes.empty()) {
        const auto n = b.add_node("want-01");
        b.add_relation(root, is_predicate(b.label(root)) ? ":ARG2" : ":mod", n);
        nodes.push_back(n);
      }
      v = pick(nodes, rng);
      const std::string r = pick(std::vector<std::string>{":op1", ":op2", ":snt1"}, rng);
      if (r == ":snt1" && b.size() > 1)
        b.add_relation(v, r, other_node(b, v, rng));
      else
        b.add_attribute(v, r, "\"x\"");
      role = Role(r);
      break;
    }
    case ViolationKind::EntityStructure: {
      const auto names = filter([&](std::size_t i) { return b.label(i) == "name"; });
      const auto variant = names.empty() ? 0 : uniform(rng, 3);
      if (variant == 0) {
        const auto nodes = filter([&](std::size_t i) { return plain(b.label(i)) && !has_name_edge(b, i); });
        if (nodes.empty()) {
          v = b.add_node("thing");
          b.add_relation(root, is_predicate(b.label(root)) ? ":ARG2" : ":mod", v);
        } else {
          v = pick(nodes, rng);
        }
        b.add_attribute(v, ":wiki", "\"Q1\"");
        role = Role(":wiki");
      } else if (variant == 1) {
        v = pick(names, rng);
        const auto gap = ":op" + std::to_string(count_ops(b, v, ":op") + 2);
        b.add_attribute(v, gap, "\"Extra\"");
        role = Role(gap);
      } else {
        v = pick(names, rng);
        b.add_relation(v, ":mod", other_node(b, v, rng));
        role = Role(":mod");
      }
      break;
    }
    case ViolationKind::ConnectorStructure: {
      const auto connectors = filter([&](std::size_t i) { return b.label(i) == "and" || b.label(i) == "or"; });
      if (!connectors.empty() && chance(rng, 0.7)) {
        v = pick(connectors, rng);
        if (chance(rng, 0.5)) {
          b.add_relation(v, ":poss", other_node(b, v, rng));
          role = Role(":poss");
        } else {
          const auto gap = ":op" + std::to_string(count_ops(b, v, ":op") + 2);
          b.add_attribute(v, gap, "\"x\"");
          role = Role(gap);
        }
      } else {
        const auto parents = filter([&](std::size_t i) { return plain(b.label(i)); });
        const auto p = pick(parents, rng);
        v = b.add_node("and");
        b.add_relation(p, is_predicate(b.label(p)) ? ":ARG1" : ":mod", v);
        b.add_relation(v, ":op1", b.add_node("thing"));
      }
      break;
    }
  }
  return {b.build(clean.root()), kind, b.var(v), role};
}

}  // namespace amrkit::testing
