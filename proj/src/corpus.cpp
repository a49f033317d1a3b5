#include "amrkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "amrkit/penman.hpp"

namespace amrkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Line {
  std::string_view text;
  std::size_t number;  // 1-based
};

struct Block {
  std::vector<Line> metadata;
  std::vector<Line> graph;
  std::size_t first_line = 0;
};

std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks;
  Block current;
  bool open = false;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    if (trim(line).empty()) {
      if (open && !current.graph.empty()) {
        blocks.push_back(std::move(current));
        current = {};
        open = false;
      }
      if (end == text.size()) break;
      continue;
    }
    if (!open) {
      current.first_line = number;
      open = true;
    }
    const auto t = trim(line);
    if (t.starts_with("#")) {
      if (trim(t.substr(1)).starts_with("::")) current.metadata.push_back({t, number});
    } else {
      current.graph.push_back({line, number});
    }
    if (end == text.size()) break;
  }
  if (open && (!current.graph.empty() || !current.metadata.empty())) blocks.push_back(std::move(current));
  return blocks;
}

/// Splits "# ::id a ::date b" into (id, a), (date, b).
void parse_metadata(std::string_view line, std::vector<std::pair<std::string, std::string>>& out) {
  auto rest = trim(line.substr(1));
  while (rest.starts_with("::")) {
    rest.remove_prefix(2);
    const auto key_end = rest.find_first_of(" \t");
    const auto key = rest.substr(0, key_end);
    rest = key_end == std::string_view::npos ? std::string_view{} : trim(rest.substr(key_end));
    if (key == "snt" || key == "tok") {
      out.emplace_back(std::string(key), std::string(rest));
      return;
    }
    auto next = rest.find(" ::");
    const auto value = trim(rest.substr(0, next));
    out.emplace_back(std::string(key), std::string(value));
    rest = next == std::string_view::npos ? std::string_view{} : trim(rest.substr(next));
  }
}

std::string context(const std::string& source, std::size_t line, std::size_t block) {
  return source + ":" + std::to_string(line) + " (block " + std::to_string(block + 1) + ")";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::string_view text, const std::string& source) {
  std::vector<CorpusEntry> entries;
  std::unordered_map<std::string, std::size_t> seen;
  const auto blocks = split_blocks(text);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (block.graph.empty())
      throw CorpusError(context(source, block.first_line, b) + ": metadata without a graph");

    std::vector<std::pair<std::string, std::string>> metadata;
    for (const auto& line : block.metadata) parse_metadata(line.text, metadata);

    std::string graph_text;
    for (const auto& line : block.graph) {
      graph_text += line.text;
      graph_text += '\n';
    }
    std::optional<AmrGraph> graph;
    try {
      graph.emplace(parse_penman(graph_text));
    } catch (const PenmanError& e) {
      const auto line = e.line() >= 1 && e.line() <= block.graph.size() ? block.graph[e.line() - 1].number
                                                                         : block.first_line;
      throw CorpusError(context(source, line, b) + ": column " + std::to_string(e.column()) + ": " + e.reason());
    }

    std::optional<std::string> id;
    std::string sentence;
    std::vector<std::pair<std::string, std::string>> rest;
    for (auto& [key, value] : metadata) {
      if (key == "id" && !id) {
        id = value;
      } else if (key == "snt" && sentence.empty()) {
        sentence = value;
      } else {
        rest.emplace_back(std::move(key), std::move(value));
      }
    }
    if (!id) id = std::to_string(b);
    if (id->empty()) throw CorpusError(context(source, block.first_line, b) + ": empty ::id");
    if (auto [it, inserted] = seen.emplace(*id, b); !inserted)
      throw CorpusError(context(source, block.first_line, b) + ": duplicate id '" + *id +
                        "' (first used in block " + std::to_string(it->second) + ")");
    entries.push_back({std::move(*id), std::move(sentence), std::move(*graph), std::move(rest)});
  }
  return entries;
}

std::vector<CorpusEntry> read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path), path.string());
}

std::string format_corpus(std::span<const CorpusEntry> entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (i > 0) out += '\n';
    out += "# ::id " + e.id + '\n';
    if (!e.sentence.empty()) out += "# ::snt " + e.sentence + '\n';
    for (const auto& [key, value] : e.metadata) {
      out += "# ::" + key;
      if (!value.empty()) out += ' ' + value;
      out += '\n';
    }
    out += serialize_penman(e.graph);
    out += '\n';
  }
  return out;
}

void write_corpus(std::span<const CorpusEntry> entries, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot write " + path.string());
  out << format_corpus(entries);
  if (!out.flush()) throw CorpusError("write failed for " + path.string());
}

std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw CorpusError("fold count must be at least 2, got " + std::to_string(k));
  if (n < k)
    throw CorpusError("cannot split " + std::to_string(n) + " entries into " + std::to_string(k) + " folds");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);

  std::vector<Fold> folds(k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const auto size = n / k + (f < n % k ? 1 : 0);
    auto& test = folds[f].test;
    test.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                order.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::sort(test.begin(), test.end());
    start += size;

    auto& train = folds[f].train;
    train.reserve(n - size);
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (t < test.size() && test[t] == i)
        ++t;
      else
        train.push_back(i);
    }
  }
  return folds;
}

MultiSystemCorpus align_systems(std::vector<std::pair<std::string, std::vector<CorpusEntry>>> systems) {
  if (systems.empty()) throw CorpusError("no system files given");
  MultiSystemCorpus corpus;
  const auto& first = systems.front().second;
  for (const auto& [name, entries] : systems) {
    if (std::find(corpus.systems.begin(), corpus.systems.end(), name) != corpus.systems.end())
      throw CorpusError("system name '" + name + "' given twice");
    corpus.systems.push_back(name);
    if (entries.size() != first.size())
      throw CorpusError("system '" + name + "' has " + std::to_string(entries.size()) + " entries, system '" +
                        systems.front().first + "' has " + std::to_string(first.size()));
  }

  std::vector<std::unordered_map<std::string, std::size_t>> index(systems.size());
  for (std::size_t s = 0; s < systems.size(); ++s)
    for (std::size_t i = 0; i < systems[s].second.size(); ++i) index[s].emplace(systems[s].second[i].id, i);

  for (std::size_t s = 1; s < systems.size(); ++s) {
    std::vector<std::string> missing;
    for (const auto& e : first)
      if (!index[s].contains(e.id)) missing.push_back(e.id);
    if (!missing.empty()) {
      std::string list;
      for (std::size_t i = 0; i < missing.size() && i < 10; ++i) list += (i ? ", " : "") + missing[i];
      if (missing.size() > 10) list += ", ...";
      throw CorpusError("system '" + systems[s].first + "' has no prediction for ids: " + list);
    }
  }

  for (const auto& e : first) {
    corpus.ids.push_back(e.id);
    std::string sentence;
    std::vector<AmrGraph> graphs;
    for (std::size_t s = 0; s < systems.size(); ++s) {
      auto& entry = systems[s].second[index[s].at(e.id)];
      if (sentence.empty()) sentence = entry.sentence;
      graphs.push_back(std::move(entry.graph));
    }
    corpus.sentences.push_back(std::move(sentence));
    corpus.graphs.push_back(std::move(graphs));
  }
  return corpus;
}

MultiSystemCorpus read_systems(std::span<const std::filesystem::path> paths) {
  std::vector<std::pair<std::string, std::vector<CorpusEntry>>> systems;
  std::set<std::string> names;
  for (const auto& path : paths) {
    auto name = path.stem().string();
    for (int n = 2; names.contains(name); ++n) name = path.stem().string() + "-" + std::to_string(n);
    names.insert(name);
    systems.emplace_back(name, read_corpus(path));
  }
  return align_systems(std::move(systems));
}

}  // namespace amrkit
