#include "amrkit/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "amrkit/selection.hpp"
#include "amrkit/validator.hpp"
#include "json.hpp"

namespace amrkit {

namespace {

constexpr std::pair<Strategy, std::string_view> kStrategyNames[] = {
    {Strategy::GrapheneBase, "graphene-base"}, {Strategy::GrapheneSmatch, "graphene-smatch"},
    {Strategy::SmatchAvg, "smatch-avg"},       {Strategy::PplZero, "ppl-zero"},
    {Strategy::PplAvg, "ppl-avg"},             {Strategy::OracleBest, "oracle-best"},
};

unsigned worker_count(unsigned jobs, std::size_t n) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
}

/// Calls fn(i) for i in [0, n). The failure with the lowest index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  const auto workers = worker_count(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SmatchOptions entry_options(const SmatchOptions& base, std::size_t i) {
  return {base.restarts, mix_seed(base.seed, i)};
}

CandidateSet candidate_set(const MultiSystemCorpus& corpus, std::size_t i) {
  CandidateSet set;
  set.id = corpus.ids[i];
  if (!corpus.sentences[i].empty()) set.sentence = corpus.sentences[i];
  for (std::size_t s = 0; s < corpus.systems.size(); ++s)
    set.candidates.push_back({corpus.systems[s], corpus.graphs[i][s]});
  return set;
}

std::string with_entry(const std::string& id, const char* what) { return "entry " + id + ": " + what; }

}  // namespace

std::string_view name(Strategy strategy) {
  for (const auto& [s, n] : kStrategyNames)
    if (s == strategy) return n;
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  for (const auto& [s, n] : kStrategyNames)
    if (n == text) return s;
  return std::nullopt;
}

std::vector<Strategy> parse_strategy_list(std::string_view text) {
  std::vector<Strategy> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const auto s = parse_strategy(item);
      if (!s) throw EvaluationError("unknown strategy '" + std::string(item) + "'");
      if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<AmrGraph> run_strategy(Strategy strategy, const MultiSystemCorpus& corpus,
                                   const StrategyConfig& config, std::span<const AmrGraph> gold) {
  const auto n = corpus.size();
  if ((strategy == Strategy::PplZero || strategy == Strategy::PplAvg) && config.scorers.empty())
    throw EvaluationError(std::string(name(strategy)) + " needs a perplexity scorer");
  if (strategy == Strategy::OracleBest && gold.size() != n)
    throw EvaluationError("oracle-best needs one gold graph per entry");
  config.merge.validate();

  std::vector<std::optional<AmrGraph>> out(n);
  parallel_for(n, config.jobs, [&](std::size_t i) {
    const auto options = entry_options(config.smatch, i);
    const auto& graphs = corpus.graphs[i];
    try {
      switch (strategy) {
        case Strategy::GrapheneBase:
        case Strategy::GrapheneSmatch: {
          auto merge = config.merge;
          merge.smatch = options;
          auto result = strategy == Strategy::GrapheneBase ? graphene_base(graphs, merge)
                                                           : graphene_smatch(graphs, merge);
          out[i].emplace(std::move(result.graph));
          return;
        }
        case Strategy::SmatchAvg:
          out[i].emplace(graphs[select_smatch_avg(candidate_set(corpus, i), options).chosen_index]);
          return;
        case Strategy::PplZero:
          out[i].emplace(graphs[select_ppl_zero(candidate_set(corpus, i), *config.scorers.front()).chosen_index]);
          return;
        case Strategy::PplAvg:
          out[i].emplace(graphs[select_ppl_avg(candidate_set(corpus, i), config.scorers).chosen_index]);
          return;
        case Strategy::OracleBest:
          out[i].emplace(graphs[select_oracle_best(candidate_set(corpus, i), gold[i], options).chosen_index]);
          return;
      }
    } catch (const ScorerError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(with_entry(corpus.ids[i], e.what()));
    }
  });

  std::vector<AmrGraph> graphs;
  graphs.reserve(n);
  for (auto& g : out) graphs.push_back(std::move(*g));
  return graphs;
}

BreakdownScores corpus_breakdown(std::span<const AmrGraph> predictions, std::span<const AmrGraph> gold,
                                 const SmatchOptions& options, unsigned jobs) {
  if (predictions.size() != gold.size())
    throw EvaluationError("prediction count " + std::to_string(predictions.size()) + " differs from gold count " +
                          std::to_string(gold.size()));
  std::vector<BreakdownScores> per_entry(predictions.size());
  parallel_for(predictions.size(), jobs, [&](std::size_t i) {
    per_entry[i] = compute_breakdown(predictions[i], gold[i], entry_options(options, i));
  });
  BreakdownScores total;
  for (const auto& s : per_entry) total += s;
  return total;
}

std::vector<EvaluationRow> evaluate(const MultiSystemCorpus& corpus, std::span<const CorpusEntry> gold,
                                    const EvaluationConfig& config) {
  std::unordered_map<std::string, const CorpusEntry*> by_id;
  for (const auto& e : gold) by_id.emplace(e.id, &e);
  std::vector<AmrGraph> gold_graphs;
  gold_graphs.reserve(corpus.size());
  for (const auto& id : corpus.ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw EvaluationError("gold has no entry with id " + id);
    gold_graphs.push_back(it->second->graph);
  }
  for (const auto s : config.strategies)
    if ((s == Strategy::PplZero || s == Strategy::PplAvg) && config.strategy.scorers.empty())
      throw EvaluationError(std::string(name(s)) + " is enabled but no scorer was given");

  const auto& smatch = config.strategy.smatch;
  const auto jobs = config.strategy.jobs;
  std::vector<EvaluationRow> rows;

  for (std::size_t s = 0; s < corpus.systems.size(); ++s) {
    std::vector<AmrGraph> outputs;
    outputs.reserve(corpus.size());
    for (const auto& graphs : corpus.graphs) outputs.push_back(graphs[s]);
    EvaluationRow row;
    row.model = corpus.systems[s];
    row.corrupted = count_corrupted(outputs);
    row.scores = corpus_breakdown(outputs, gold_graphs, smatch, jobs);
    rows.push_back(std::move(row));
  }

  for (const auto strategy : config.strategies) {
    const auto start = std::chrono::steady_clock::now();
    const auto outputs = run_strategy(strategy, corpus, config.strategy, gold_graphs);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    EvaluationRow row;
    row.model = std::string(name(strategy));
    row.is_strategy = true;
    row.time_seconds = elapsed.count();
    row.corrupted = count_corrupted(outputs);
    row.scores = corpus_breakdown(outputs, gold_graphs, smatch, jobs);
    rows.push_back(std::move(row));
  }
  return rows;
}

double percent(double x) { return std::round(x * 1000.0) / 10.0; }

namespace {

constexpr std::pair<SubMetric, std::string_view> kColumns[] = {
    {SubMetric::Unlabeled, "Unlab."}, {SubMetric::NoWsd, "NoWSD"},     {SubMetric::Concepts, "Conc."},
    {SubMetric::Ner, "NER"},          {SubMetric::Negations, "Neg."},  {SubMetric::Wiki, "Wiki"},
    {SubMetric::Reentrancies, "Reent."}, {SubMetric::Srl, "SRL"},
};

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace

std::string report_json(std::span<const EvaluationRow> rows, std::size_t entries, std::uint64_t seed) {
  using nlohmann::ordered_json;
  ordered_json columns = ordered_json::array({"Model", "Time (s)", "Corrupt.", "SMATCH"});
  for (const auto& [m, label] : kColumns) columns.push_back(label);

  ordered_json out_rows = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["model"] = row.model;
    r["kind"] = row.is_strategy ? "strategy" : "system";
    r["time_seconds"] = row.time_seconds ? ordered_json(std::round(*row.time_seconds * 1000.0) / 1000.0)
                                         : ordered_json(nullptr);
    r["corrupted"] = row.corrupted;
    r["smatch"] = percent(row.scores.smatch.f1());
    r["precision"] = percent(row.scores.smatch.precision());
    r["recall"] = percent(row.scores.smatch.recall());
    ordered_json breakdown;
    for (const auto& [m, label] : kColumns) breakdown[std::string(name(m))] = percent(row.scores[m].f1());
    r["breakdown"] = std::move(breakdown);
    out_rows.push_back(std::move(r));
  }

  ordered_json doc;
  doc["aggregation"] = "micro";
  doc["scale"] = "percent, one decimal";
  doc["entries"] = entries;
  doc["seed"] = seed;
  doc["columns"] = std::move(columns);
  doc["rows"] = std::move(out_rows);
  return doc.dump(2) + "\n";
}

std::string report_table(std::span<const EvaluationRow> rows) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"Model", "Time (s)", "Corrupt.", "SMATCH"};
  for (const auto& [m, label] : kColumns) header.emplace_back(label);
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line = {row.model, row.time_seconds ? fixed(*row.time_seconds, 2) : "-",
                                     std::to_string(row.corrupted), fixed(percent(row.scores.smatch.f1()), 1)};
    for (const auto& [m, label] : kColumns) line.push_back(fixed(percent(row.scores[m].f1()), 1));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const auto& line = cells[r];
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c == 0) {
        out += line[c] + std::string(width[c] - line[c].size(), ' ');
      } else {
        out += "  " + std::string(width[c] - line[c].size(), ' ') + line[c];
      }
    }
    out += '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (const auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + '\n';
    }
  }
  return out;
}

}  // namespace amrkit
