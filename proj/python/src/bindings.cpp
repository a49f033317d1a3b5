#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amrkit/breakdown.hpp"
#include "amrkit/corpus.hpp"
#include "amrkit/graphene.hpp"
#include "amrkit/penman.hpp"
#include "amrkit/selection.hpp"
#include "amrkit/smatch.hpp"
#include "amrkit/triples.hpp"
#include "amrkit/validator.hpp"

namespace py = pybind11;
using namespace amrkit;

namespace {

std::vector<AmrGraph> parse_all(const std::vector<std::string>& texts) {
  std::vector<AmrGraph> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_penman(t));
  return out;
}

py::dict score_dict(const SmatchScore& s) {
  py::dict d;
  d["matched"] = s.matched;
  d["candidate_total"] = s.candidate_total;
  d["reference_total"] = s.reference_total;
  d["precision"] = s.precision();
  d["recall"] = s.recall();
  d["f1"] = s.f1();
  return d;
}

CandidateSet candidate_set(const std::vector<std::string>& texts, std::optional<std::string> sentence) {
  CandidateSet set;
  set.sentence = std::move(sentence);
  for (std::size_t i = 0; i < texts.size(); ++i) set.candidates.push_back({std::to_string(i), parse_penman(texts[i])});
  return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "AMR graph scoring, validation, merging and selection";

  py::register_exception<PenmanError>(m, "PenmanError", PyExc_ValueError);
  py::register_exception<MergeError>(m, "MergeError", PyExc_ValueError);
  py::register_exception<SelectionError>(m, "SelectionError", PyExc_ValueError);
  py::register_exception<ScorerError>(m, "ScorerError", PyExc_RuntimeError);
  py::register_exception<AlignmentBoundExceeded>(m, "AlignmentBoundExceeded", PyExc_ValueError);

  m.def("normalize", [](const std::string& text) { return serialize_penman(parse_penman(text)); },
        "Parse and re-serialize one Penman graph.", py::arg("text"));

  m.def(
      "triples",
      [](const std::string& text) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& t : extract_triples(parse_penman(text)))
          out.emplace_back(t.kind == TripleKind::Root ? "" : t.source, t.role, t.target);
        return out;
      },
      "(source, role, target) triples; the root triple has an empty source.", py::arg("text"));

  m.def(
      "smatch",
      [](const std::string& pred, const std::string& gold, std::size_t restarts, std::uint64_t seed, bool exact) {
        const auto p = parse_penman(pred), g = parse_penman(gold);
        if (exact) return score_dict(best_alignment_exact(p, g).score);
        return score_dict(compute_smatch(p, g, {restarts, seed}));
      },
      py::arg("pred"), py::arg("gold"), py::arg("restarts") = SmatchOptions{}.restarts,
      py::arg("seed") = SmatchOptions{}.seed, py::arg("exact") = false);

  m.def(
      "breakdown",
      [](const std::string& pred, const std::string& gold) {
        const auto b = compute_breakdown(parse_penman(pred), parse_penman(gold));
        py::dict d;
        for (const auto metric : kSubMetrics) d[py::str(std::string(name(metric)))] = score_dict(b[metric]);
        return d;
      },
      py::arg("pred"), py::arg("gold"));

  m.def(
      "validate",
      [](const std::string& text) {
        py::list out;
        for (const auto& v : validate_graph(parse_penman(text)).violations) {
          py::dict d;
          d["kind"] = std::string(name(v.kind));
          d["variable"] = v.variable.name();
          d["role"] = v.role ? py::object(py::str(v.role->label())) : py::object(py::none());
          d["message"] = v.message;
          out.append(d);
        }
        return out;
      },
      "Structural violations of one graph, in traversal order.", py::arg("text"));

  m.def(
      "merge",
      [](const std::vector<std::string>& graphs, const std::string& pivot, double threshold, std::uint64_t seed) {
        MergeConfig config;
        config.vote_threshold = threshold;
        config.smatch.seed = seed;
        const auto inputs = parse_all(graphs);
        if (pivot != "base" && pivot != "smatch") throw py::value_error("pivot must be 'base' or 'smatch'");
        const auto r = pivot == "base" ? graphene_base(inputs, config) : graphene_smatch(inputs, config);
        return py::make_tuple(serialize_penman(r.graph), r.pivot_index);
      },
      "Pivot-voting merge. Returns (graph, pivot index).", py::arg("graphs"), py::arg("pivot") = "base",
      py::arg("threshold") = 0.5, py::arg("seed") = SmatchOptions{}.seed);

  m.def(
      "select_smatch_avg",
      [](const std::vector<std::string>& graphs, std::uint64_t seed) {
        return select_smatch_avg(candidate_set(graphs, std::nullopt), {SmatchOptions{}.restarts, seed}).chosen_index;
      },
      py::arg("graphs"), py::arg("seed") = SmatchOptions{}.seed);

  m.def(
      "select_ppl_zero",
      [](const std::vector<std::string>& graphs, const std::string& sentence,
         std::function<double(const std::string&, const std::vector<std::string>&, const std::string&)> scorer) {
        FunctionScorer fn("python", [&](const ScorerRequest& r) {
          py::gil_scoped_acquire gil;
          return scorer(r.sentence, r.context_graphs, r.target_graph);
        });
        return select_ppl_zero(candidate_set(graphs, sentence), fn).chosen_index;
      },
      "scorer(sentence, context_graphs, target_graph) -> perplexity.", py::arg("graphs"), py::arg("sentence"),
      py::arg("scorer"));

  m.def(
      "mock_perplexity",
      [](const std::string& sentence, const std::vector<std::string>& context, const std::string& target) {
        return mock_perplexity({"", sentence, context, target});
      },
      py::arg("sentence"), py::arg("context_graphs"), py::arg("target_graph"));

  m.def(
      "kfold",
      [](std::size_t n, std::size_t k, std::uint64_t seed) {
        std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out;
        for (auto& f : kfold_split(n, k, seed)) out.emplace_back(std::move(f.train), std::move(f.test));
        return out;
      },
      "Seeded k-fold split of range(n) into (train, test) index lists.", py::arg("n"), py::arg("k"),
      py::arg("seed"));
}
