#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrkit/breakdown.hpp"
#include "amrkit/corpus.hpp"
#include "amrkit/graphene.hpp"
#include "amrkit/scorer.hpp"

namespace amrkit {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { GrapheneBase, GrapheneSmatch, SmatchAvg, PplZero, PplAvg, OracleBest };

std::string_view name(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view text);
/// Comma separated names, e.g. "graphene-base,smatch-avg". Throws on unknown
/// names; duplicates are dropped.
std::vector<Strategy> parse_strategy_list(std::string_view text);

/// Per-entry randomness comes from mix_seed(smatch.seed, entry index), so
/// results do not depend on `jobs`.
struct StrategyConfig {
  MergeConfig merge;
  SmatchOptions smatch;
  /// ppl-zero uses the first scorer, ppl-avg all of them.
  std::vector<PerplexityScorer*> scorers;
  /// 0 means one worker per hardware thread.
  unsigned jobs = 0;
};

/// Runs `strategy` on every entry. `gold` is needed only for oracle-best.
std::vector<AmrGraph> run_strategy(Strategy strategy, const MultiSystemCorpus& corpus,
                                   const StrategyConfig& config,
                                   std::span<const AmrGraph> gold = {});

struct EvaluationConfig {
  std::vector<Strategy> strategies;
  StrategyConfig strategy;
};

struct EvaluationRow {
  std::string model;
  bool is_strategy = false;
  std::optional<double> time_seconds;  // strategy phase only; empty for systems
  std::size_t corrupted = 0;
  BreakdownScores scores;  // micro-averaged over the corpus
};

/// One row per system, then one per strategy in the given order.
std::vector<EvaluationRow> evaluate(const MultiSystemCorpus& corpus, std::span<const CorpusEntry> gold,
                                    const EvaluationConfig& config);

/// Corpus-level scores against gold, summing counts before taking ratios.
BreakdownScores corpus_breakdown(std::span<const AmrGraph> predictions, std::span<const AmrGraph> gold,
                                 const SmatchOptions& options, unsigned jobs = 0);

/// Display value: 100 * x rounded to one decimal.
double percent(double x);

/// Machine-readable report (JSON) and the plain-text table.
std::string report_json(std::span<const EvaluationRow> rows, std::size_t entries, std::uint64_t seed);
std::string report_table(std::span<const EvaluationRow> rows);

}  // namespace amrkit
