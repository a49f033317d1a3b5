#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "amrkit/graph.hpp"
#include "amrkit/smatch.hpp"
#include "amrkit/triples.hpp"
#include "amrkit/validator.hpp"

namespace amrkit::testing {

// Example graphs for "Antonio Banderas scheduled the premiere of his movie at 3 pm".
extern const char* const kGoldPenman;      // gold
extern const char* const kPred1Penman;     // premiere, :mod movie, :poss person
extern const char* const kPred2Penman;     // gold with "3:00"
extern const char* const kMergedPenman;    // the merged graph with both edge labels
extern const char* const kListingPenman;   // linearization example, z5 under z3

AmrGraph gold();
AmrGraph pred1();
AmrGraph pred2();
AmrGraph merged();

/// The 17 gold triples in listing order.
std::vector<std::string> gold_triple_listing();

/// Exhaustive maximum over injective alignments, written without the library
/// search code: every injection of the smaller variable set is enumerated.
std::size_t brute_force_matched(const TripleSet& candidate, const TripleSet& reference);
SmatchScore brute_force_smatch(const TripleSet& candidate, const TripleSet& reference);

struct GeneratorOptions {
  std::size_t min_variables = 1;
  std::size_t max_variables = 8;
  double reentrancy = 0.2;
  double attribute = 0.3;
  bool named_entities = true;
  bool connectors = true;
};

/// Random graph that passes every structural check.
AmrGraph random_graph(std::mt19937_64& rng, const GeneratorOptions& options = {});

/// Small random edit: relabel a concept, change a role or constant, drop or
/// add an edge or attribute. Result is a valid AmrGraph but may fail checks.
AmrGraph mutate(const AmrGraph& graph, std::mt19937_64& rng, int edits = 2);

struct Injection {
  AmrGraph graph;
  ViolationKind kind;
  Variable variable;
  std::optional<Role> role;
};

/// Adds exactly one defect of the given kind to a clean graph.
Injection inject(const AmrGraph& clean, ViolationKind kind, std::mt19937_64& rng);

std::size_t uniform(std::mt19937_64& rng, std::size_t n);

}  // namespace amrkit::testing
