#include "amrkit/validator.hpp"

#include <random>

#include "amrkit/penman.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace amrkit;

namespace {

std::vector<std::string> kinds(const char* text) {
  std::vector<std::string> out;
  for (const auto& v : validate_graph(parse_penman(text)).violations) out.emplace_back(name(v.kind));
  return out;
}

using K = std::vector<std::string>;

}  // namespace

TEST_CASE("example graphs") {
  CHECK(validate_graph(testing::gold()).empty());
  CHECK(validate_graph(testing::pred1()).empty());
  CHECK(validate_graph(testing::pred2()).empty());

  const auto report = validate_graph(testing::merged());
  REQUIRE(report.size() == 2);
  for (const auto& v : report.violations) {
    CHECK(v.kind == ViolationKind::ArgOnNonPredicate);
    CHECK(v.variable.name() == "z3");
  }
  CHECK(report.violations[0].role->label() == ":ARG0");
  CHECK(report.violations[1].role->label() == ":ARG1");
  CHECK(is_corrupted(testing::merged()));

  const std::vector<AmrGraph> all = {testing::gold(), testing::merged(), testing::pred1()};
  CHECK(count_corrupted(all) == 1);
}

TEST_CASE("arguments on non-predicates") {
  CHECK(kinds("(p / person :ARG0 (b / boy))") == K{"ArgOnNonPredicate"});
  CHECK(kinds("(p / person :ARG0-of (b / bake-01))") == K{"ArgOnNonPredicate"});
  CHECK(kinds("(p / person :ARG1 \"x\")") == K{"ArgOnNonPredicate"});
  CHECK(kinds("(b / bake-01 :ARG0 (p / person))").empty());
}

TEST_CASE("op and snt on predicates") {
  CHECK(kinds("(w / want-01 :op1 \"x\")") == K{"OpOrSntOnPredicate"});
  CHECK(kinds("(w / want-01 :snt1 (b / boy))") == K{"OpOrSntOnPredicate"});
  CHECK(kinds("(d / date-entity :op1 \"x\")").empty());
}

TEST_CASE("entity structures") {
  CHECK(kinds("(p / person :name (n / name :op1 \"A\" :op2 \"B\") :wiki \"Q1\")").empty());
  CHECK(kinds("(p / person :wiki \"Q1\")") == K{"EntityStructure"});
  CHECK(kinds("(p / person :name (n / name :op1 \"A\" :op3 \"B\"))") == K{"EntityStructure"});
  CHECK(kinds("(p / person :name (n / name :op2 \"A\"))") == K{"EntityStructure"});
  CHECK(kinds("(p / person :name (n / name :op1 \"A\" :mod (x / thing)))") == K{"EntityStructure"});
  CHECK(kinds("(p / person :name (n / name :op1 \"A\" :quant 1))") == K{"EntityStructure"});
  CHECK(kinds("(p / person :name (n / name))") == K{"EntityStructure"});
  CHECK(kinds("(p / person :mod (n / name :op1 \"A\"))") == K{"EntityStructure"});
}

TEST_CASE("connector structures") {
  CHECK(kinds("(a / and :op1 (b / boy) :op2 (g / girl))").empty());
  CHECK(kinds("(a / and :op1 (b / boy) :op2 (g / girl) :mod (x / also) :polarity -)").empty());
  CHECK(kinds("(a / and :op1 (b / boy))") == K{"ConnectorStructure"});
  CHECK(kinds("(a / or :op1 (b / boy) :op3 (g / girl))") == K{"ConnectorStructure"});
  CHECK(kinds("(a / either :op1 (b / boy) :op2 (g / girl) :poss (x / it))") == K{"ConnectorStructure"});
  CHECK(kinds("(m / multi-sentence :snt1 (b / boy) :snt2 (g / girl))").empty());
  CHECK(kinds("(m / multi-sentence :snt2 (b / boy))") == K{"ConnectorStructure"});
  CHECK(kinds("(m / multi-sentence :mod (b / boy))") == K{"ConnectorStructure"});
}

TEST_CASE("violations are ordered by traversal position") {
  const auto report = validate_graph(parse_penman(
      "(w / want-01 :op1 \"x\" :ARG0 (p / person :ARG1 (b / boy) :wiki \"Q\"))"));
  REQUIRE(report.size() == 3);
  CHECK(report.violations[0].variable.name() == "w");
  CHECK(report.violations[1].variable.name() == "p");
  CHECK(report.violations[1].role->label() == ":ARG1");
  CHECK(report.violations[2].role->label() == ":wiki");
}

TEST_CASE("generated graphs are clean and injections are found") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const auto clean = testing::random_graph(rng, {1, 12});
    CHECK(validate_graph(clean).empty());
    for (const auto kind : {ViolationKind::ArgOnNonPredicate, ViolationKind::OpOrSntOnPredicate,
                            ViolationKind::EntityStructure, ViolationKind::ConnectorStructure}) {
      const auto inj = testing::inject(clean, kind, rng);
      const auto report = validate_graph(inj.graph);
      REQUIRE_FALSE(report.empty());
      bool located = false;
      for (const auto& v : report.violations) {
        CHECK(v.kind == kind);
        located |= v.variable == inj.variable && v.role == inj.role;
      }
      CHECK(located);
    }
  }
}
