#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amrkit/graph.hpp"

namespace amrkit {

/// Load or alignment failure. The message carries file/line/block context.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusEntry {
  std::string id;
  std::string sentence;  // "::snt", empty when absent
  AmrGraph graph;
  /// Every other "::key value" pair, in file order.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Blocks are separated by blank lines. "# ::key value" lines are metadata
/// ("::snt" and "::tok" take the rest of the line, other keys split at " ::"),
/// other '#' lines are comments, the rest is one Penman graph. Entries without
/// "::id" get their 0-based block index.
std::vector<CorpusEntry> parse_corpus(std::string_view text, const std::string& source = "<input>");
std::vector<CorpusEntry> read_corpus(const std::filesystem::path& path);

/// "# ::id", "# ::snt" (if non-empty), other metadata, the graph; blocks are
/// separated by one blank line and the text ends with a newline.
std::string format_corpus(std::span<const CorpusEntry> entries);
void write_corpus(std::span<const CorpusEntry> entries, const std::filesystem::path& path);

struct Fold {
  std::vector<std::size_t> train;  // ascending indices
  std::vector<std::size_t> test;   // ascending indices
};

/// Seeded shuffle cut into k contiguous parts; the first n % k parts get one
/// extra index. Requires 2 <= k <= n.
std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// Predictions of several systems for the same sentences.
struct MultiSystemCorpus {
  std::vector<std::string> systems;
  std::vector<std::string> ids;
  std::vector<std::string> sentences;
  std::vector<std::vector<AmrGraph>> graphs;  // [entry][system]

  std::size_t size() const noexcept { return ids.size(); }
};

/// Aligns per-system corpora by id, in the order of the first system. Entry
/// counts and id sets must agree.
MultiSystemCorpus align_systems(std::vector<std::pair<std::string, std::vector<CorpusEntry>>> systems);

/// Reads one corpus per file; systems are named after the file stem.
MultiSystemCorpus read_systems(std::span<const std::filesystem::path> paths);

}  // namespace amrkit
