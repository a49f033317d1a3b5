#include "amrkit/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amrkit/corpus.hpp"
#include "amrkit/evaluate.hpp"
#include "amrkit/penman.hpp"
#include "amrkit/validator.hpp"
#include "json.hpp"

namespace amrkit {

namespace {

namespace fs = std::filesystem;

struct Scorers {
  std::vector<std::unique_ptr<PerplexityScorer>> owned;
  std::vector<PerplexityScorer*> pointers;
};

Scorers make_scorers(std::vector<std::string> commands, const std::string& score_file) {
  Scorers s;
  if (commands.empty() && score_file.empty())
    if (const char* env = std::getenv(kScorerEnv); env && *env) commands.emplace_back(env);
  for (const auto& cmd : commands) s.owned.push_back(std::make_unique<SubprocessScorer>(cmd));
  if (!score_file.empty())
    for (auto& table : load_score_file(score_file)) s.owned.push_back(std::move(table));
  for (auto& p : s.owned) s.pointers.push_back(p.get());
  return s;
}

std::string one_decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", percent(x));
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw CorpusError("write failed for " + path.string());
}

std::vector<CorpusEntry> as_entries(const MultiSystemCorpus& corpus, std::vector<AmrGraph> graphs) {
  std::vector<CorpusEntry> entries;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    entries.push_back({corpus.ids[i], corpus.sentences[i], std::move(graphs[i]), {}});
  return entries;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string file;
  std::string report;
  bool strict = false;
};

int run_validate(const ValidateArgs& a, std::ostream& out) {
  const auto entries = read_corpus(a.file);
  nlohmann::ordered_json graphs = nlohmann::ordered_json::array();
  std::size_t corrupted = 0;
  for (const auto& e : entries) {
    const auto report = validate_graph(e.graph);
    if (report.empty()) continue;
    ++corrupted;
    nlohmann::ordered_json violations = nlohmann::ordered_json::array();
    for (const auto& v : report.violations) {
      out << e.id << '\t' << name(v.kind) << '\t' << v.variable.name() << '\t'
          << (v.role ? v.role->label() : std::string("-")) << '\t' << v.message << '\n';
      violations.push_back({{"kind", name(v.kind)},
                            {"variable", v.variable.name()},
                            {"role", v.role ? nlohmann::ordered_json(v.role->label()) : nlohmann::ordered_json(nullptr)},
                            {"message", v.message}});
    }
    graphs.push_back({{"id", e.id}, {"violations", std::move(violations)}});
  }
  out << entries.size() << " graphs, " << corrupted << " corrupted\n";
  if (!a.report.empty()) {
    nlohmann::ordered_json doc;
    doc["file"] = fs::path(a.file).filename().string();
    doc["entries"] = entries.size();
    doc["corrupted"] = corrupted;
    doc["graphs"] = std::move(graphs);
    write_text(a.report, doc.dump(2) + "\n");
  }
  return a.strict && corrupted > 0 ? 1 : 0;
}

struct SmatchArgs {
  std::string pred;
  std::string gold;
  bool breakdown = false;
  bool exact = false;
  unsigned restarts = SmatchOptions{}.restarts;
  std::uint64_t seed = SmatchOptions{}.seed;
  unsigned jobs = 0;
};

int run_smatch(const SmatchArgs& a, std::ostream& out) {
  std::vector<std::pair<std::string, std::vector<CorpusEntry>>> both;
  both.emplace_back("pred", read_corpus(a.pred));
  both.emplace_back("gold", read_corpus(a.gold));
  const auto corpus = align_systems(std::move(both));
  std::vector<AmrGraph> pred;
  std::vector<AmrGraph> gold;
  for (const auto& g : corpus.graphs) {
    pred.push_back(g[0]);
    gold.push_back(g[1]);
  }

  BreakdownScores scores;
  if (a.exact) {
    for (std::size_t i = 0; i < pred.size(); ++i)
      for (const auto m : kSubMetrics)
        scores[m] += best_alignment_exact(transform_triples(pred[i], m), transform_triples(gold[i], m)).score;
  } else {
    scores = corpus_breakdown(pred, gold, {a.restarts, a.seed}, a.jobs);
  }

  out << "Precision " << one_decimal(scores.smatch.precision()) << '\n';
  out << "Recall " << one_decimal(scores.smatch.recall()) << '\n';
  out << "F1 " << one_decimal(scores.smatch.f1()) << '\n';
  if (a.breakdown)
    for (const auto m : kSubMetrics)
      if (m != SubMetric::Smatch) out << name(m) << ' ' << one_decimal(scores[m].f1()) << '\n';
  return 0;
}

struct MergeArgs {
  std::string strategy;
  std::string out;
  std::vector<std::string> files;
  double threshold = MergeConfig{}.vote_threshold;
  std::uint64_t seed = SmatchOptions{}.seed;
  unsigned jobs = 0;
};

int run_merge(const MergeArgs& a, std::ostream& out) {
  const auto strategy = *parse_strategy(a.strategy);
  const std::vector<fs::path> paths(a.files.begin(), a.files.end());
  const auto corpus = read_systems(paths);
  StrategyConfig config;
  config.merge.vote_threshold = a.threshold;
  config.smatch.seed = a.seed;
  config.jobs = a.jobs;
  const auto entries = as_entries(corpus, run_strategy(strategy, corpus, config));
  write_corpus(entries, a.out);
  out << "merged " << entries.size() << " entries from " << corpus.systems.size() << " systems into " << a.out
      << '\n';
  return 0;
}

struct SelectArgs {
  std::string strategy;
  std::string out;
  std::vector<std::string> files;
  std::vector<std::string> scorer_cmds;
  std::string scores;
  std::uint64_t seed = SmatchOptions{}.seed;
  unsigned jobs = 0;
};

int run_select(const SelectArgs& a, std::ostream& out) {
  const auto strategy = *parse_strategy(a.strategy);
  const std::vector<fs::path> paths(a.files.begin(), a.files.end());
  const auto corpus = read_systems(paths);
  Scorers scorers;
  if (strategy != Strategy::SmatchAvg) scorers = make_scorers(a.scorer_cmds, a.scores);
  StrategyConfig config;
  config.smatch.seed = a.seed;
  config.jobs = a.jobs;
  config.scorers = scorers.pointers;
  const auto entries = as_entries(corpus, run_strategy(strategy, corpus, config));
  write_corpus(entries, a.out);
  out << "selected " << entries.size() << " graphs with " << a.strategy << " into " << a.out << '\n';
  return 0;
}

struct EvaluateArgs {
  std::string gold;
  std::string strategies;
  std::vector<std::string> files;
  std::vector<std::string> scorer_cmds;
  std::string scores;
  std::string report;
  std::uint64_t seed = SmatchOptions{}.seed;
  unsigned jobs = 0;
};

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  EvaluationConfig config;
  config.strategies = parse_strategy_list(a.strategies);
  const std::vector<fs::path> paths(a.files.begin(), a.files.end());
  const auto corpus = read_systems(paths);
  const auto gold = read_corpus(a.gold);

  Scorers scorers;
  bool wants_scorer = false;
  for (const auto s : config.strategies) wants_scorer |= s == Strategy::PplZero || s == Strategy::PplAvg;
  if (wants_scorer) scorers = make_scorers(a.scorer_cmds, a.scores);
  config.strategy.smatch.seed = a.seed;
  config.strategy.jobs = a.jobs;
  config.strategy.scorers = scorers.pointers;

  const auto rows = evaluate(corpus, gold, config);
  out << report_table(rows);
  if (!a.report.empty()) write_text(a.report, report_json(rows, corpus.size(), a.seed));
  return 0;
}

struct SplitArgs {
  std::string file;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_split(const SplitArgs& a, std::ostream& out) {
  const auto entries = read_corpus(a.file);
  const auto folds = kfold_split(entries.size(), a.folds, a.seed);
  const auto stem = fs::path(a.file).stem().string();
  fs::create_directories(a.out_dir);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (const auto* part : {"train", "test"}) {
      const auto& indices = std::string(part) == "train" ? folds[f].train : folds[f].test;
      std::vector<CorpusEntry> subset;
      subset.reserve(indices.size());
      for (const auto i : indices) subset.push_back(entries[i]);
      const auto path = fs::path(a.out_dir) / (stem + ".fold" + std::to_string(f + 1) + "." + part + ".amr");
      write_corpus(subset, path);
    }
    out << "fold " << f + 1 << ": " << folds[f].train.size() << " train, " << folds[f].test.size() << " test\n";
  }
  return 0;
}

std::vector<std::string> strategy_names(std::initializer_list<Strategy> list) {
  std::vector<std::string> out;
  for (const auto s : list) out.emplace_back(name(s));
  return out;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"AMR graph scoring, validation, merging and selection", "amrkit"};
  app.require_subcommand(1);

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check every graph for structural violations");
  v->add_option("file", validate.file, "AMR corpus file")->required()->check(CLI::ExistingFile);
  v->add_option("--report", validate.report, "Write violations as JSON");
  v->add_flag("--strict", validate.strict, "Exit 1 if any graph is corrupted");

  SmatchArgs smatch;
  auto* s = app.add_subcommand("smatch", "Corpus SMATCH of predictions against gold");
  s->add_option("pred", smatch.pred, "Predicted corpus")->required()->check(CLI::ExistingFile);
  s->add_option("gold", smatch.gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  s->add_flag("--breakdown", smatch.breakdown, "Also print the fine-grained scores");
  s->add_option("--restarts", smatch.restarts, "Hill-climbing restarts")->check(CLI::PositiveNumber);
  s->add_flag("--exact", smatch.exact, "Exhaustive alignment search (small graphs only)");
  s->add_option("--seed", smatch.seed, "Random seed");
  s->add_option("--jobs", smatch.jobs, "Worker threads (0: all cores)");

  MergeArgs merge;
  auto* m = app.add_subcommand("merge", "Merge system outputs by pivot voting");
  m->add_option("--strategy", merge.strategy, "graphene-base or graphene-smatch")
      ->required()
      ->check(CLI::IsMember(strategy_names({Strategy::GrapheneBase, Strategy::GrapheneSmatch})));
  m->add_option("--out", merge.out, "Output corpus")->required();
  m->add_option("--threshold", merge.threshold, "Vote fraction needed to keep an element");
  m->add_option("--seed", merge.seed, "Random seed");
  m->add_option("--jobs", merge.jobs, "Worker threads (0: all cores)");
  m->add_option("files", merge.files, "One corpus per system")->required()->check(CLI::ExistingFile);

  SelectArgs select;
  auto* sel = app.add_subcommand("select", "Pick one system output per sentence");
  sel->add_option("--strategy", select.strategy, "smatch-avg, ppl-zero or ppl-avg")
      ->required()
      ->check(CLI::IsMember(strategy_names({Strategy::SmatchAvg, Strategy::PplZero, Strategy::PplAvg})));
  sel->add_option("--out", select.out, "Output corpus")->required();
  auto* sel_cmd = sel->add_option("--scorer-cmd", select.scorer_cmds, "Perplexity scorer command (repeatable)");
  sel->add_option("--scores", select.scores, "Precomputed perplexities (JSON lines)")
      ->check(CLI::ExistingFile)
      ->excludes(sel_cmd);
  sel->add_option("--seed", select.seed, "Random seed");
  sel->add_option("--jobs", select.jobs, "Worker threads (0: all cores)");
  sel->add_option("files", select.files, "One corpus per system")->required()->check(CLI::ExistingFile);

  EvaluateArgs evaluate_args;
  auto* e = app.add_subcommand("evaluate", "Score systems and ensembles against gold");
  e->add_option("--gold", evaluate_args.gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  e->add_option("--strategies", evaluate_args.strategies,
                "Comma separated: graphene-base,graphene-smatch,smatch-avg,ppl-zero,ppl-avg,oracle-best")
      ->required();
  auto* e_cmd = e->add_option("--scorer-cmd", evaluate_args.scorer_cmds, "Perplexity scorer command (repeatable)");
  e->add_option("--scores", evaluate_args.scores, "Precomputed perplexities (JSON lines)")
      ->check(CLI::ExistingFile)
      ->excludes(e_cmd);
  e->add_option("--report", evaluate_args.report, "Write the report as JSON");
  e->add_option("--seed", evaluate_args.seed, "Random seed");
  e->add_option("--jobs", evaluate_args.jobs, "Worker threads (0: all cores)");
  e->add_option("files", evaluate_args.files, "One corpus per system")->required()->check(CLI::ExistingFile);

  SplitArgs split;
  auto* sp = app.add_subcommand("split", "Write k train/test fold files");
  sp->add_option("--folds", split.folds, "Number of folds")->required();
  sp->add_option("--seed", split.seed, "Shuffle seed")->required();
  sp->add_option("--out-dir", split.out_dir, "Output directory")->required();
  sp->add_option("file", split.file, "AMR corpus file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "amrkit: " << ex.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (v->parsed()) return run_validate(validate, out);
    if (s->parsed()) return run_smatch(smatch, out);
    if (m->parsed()) return run_merge(merge, out);
    if (sel->parsed()) return run_select(select, out);
    if (e->parsed()) return run_evaluate(evaluate_args, out);
    if (sp->parsed()) return run_split(split, out);
  } catch (const std::exception& ex) {
    err << "amrkit: error: " << ex.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace amrkit
