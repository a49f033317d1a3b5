#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amrkit/smatch.hpp"

namespace amrkit {

/// One perplexity query: the target graph scored given a sentence and,
/// optionally, the full set of candidate graphs as context.
struct ScorerRequest {
  std::string request_id;
  std::string sentence;
  std::vector<std::string> context_graphs;
  std::string target_graph;
};

struct ScorerResponse {
  std::string request_id;
  double perplexity = 0.0;
};

/// Transport or protocol failure; names the offending request when known.
class ScorerError : public std::runtime_error {
 public:
  ScorerError(const std::string& what, std::string request_id = {});
  const std::string& request_id() const noexcept { return request_id_; }

 private:
  std::string request_id_;
};

/// Line-delimited JSON wire format.
///   request:  {"request_id": ..., "sentence": ..., "context_graphs": [...], "target_graph": ...}
///   response: {"request_id": ..., "perplexity": <positive number>}
std::string encode_request(const ScorerRequest& request);
ScorerRequest decode_request(std::string_view line);
std::string encode_response(const ScorerResponse& response);
ScorerResponse decode_response(std::string_view line);

/// Key used for request ids and score-file lookups.
std::string request_key(std::string_view entry_id, std::string_view system_id);

/// Returns one perplexity per request, in request order. Throws ScorerError on
/// any failure; implementations must reject non-positive or non-finite values.
class PerplexityScorer {
 public:
  virtual ~PerplexityScorer() = default;
  virtual std::vector<double> score(std::span<const ScorerRequest> requests) = 0;
  virtual std::string name() const = 0;
};

/// Checks a perplexity value; throws ScorerError naming the request.
double checked_perplexity(double value, const std::string& request_id);

/// Talks to a child process (`/bin/sh -c command`) over its standard streams.
/// Requests are written as they fit and responses matched by request_id in any
/// order. Thread-safe; calls are serialized.
class SubprocessScorer final : public PerplexityScorer {
 public:
  explicit SubprocessScorer(std::string command,
                            std::chrono::milliseconds timeout = std::chrono::seconds(60));
  ~SubprocessScorer() override;
  SubprocessScorer(const SubprocessScorer&) = delete;
  SubprocessScorer& operator=(const SubprocessScorer&) = delete;

  std::vector<double> score(std::span<const ScorerRequest> requests) override;
  std::string name() const override { return command_; }

 private:
  void start();
  void stop();

  std::string command_;
  std::chrono::milliseconds timeout_;
  std::mutex mutex_;
  int fd_ = -1;
  int pid_ = -1;
  std::string pending_;
};

/// Precomputed perplexities keyed by request_key(entry id, system id).
class ScoreTableScorer final : public PerplexityScorer {
 public:
  explicit ScoreTableScorer(std::string name) : name_(std::move(name)) {}
  void set(const std::string& key, double perplexity);
  std::vector<double> score(std::span<const ScorerRequest> requests) override;
  std::string name() const override { return name_; }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::string name_;
  std::unordered_map<std::string, double> table_;
};

/// Reads a JSON-lines score file with records
///   {"id": ..., "system": ..., "perplexity": ..., "scorer": ...}
/// ("scorer" optional, default "default"). One table per scorer name, in
/// first-seen order.
std::vector<std::unique_ptr<ScoreTableScorer>> load_score_file(const std::filesystem::path& path);

/// Perplexity computed by a callback; for tests and embedding.
class FunctionScorer final : public PerplexityScorer {
 public:
  using Fn = std::function<double(const ScorerRequest&)>;
  FunctionScorer(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::vector<double> score(std::span<const ScorerRequest> requests) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

/// Deterministic offline stand-in: 1 / (1 + mean SMATCH F1 of the target
/// against the context graphs, one copy of the target removed). With no other
/// context graphs the mean is taken as 1.
double mock_perplexity(const ScorerRequest& request, const SmatchOptions& options = {});

class MockScorer final : public PerplexityScorer {
 public:
  explicit MockScorer(SmatchOptions options = {}) : options_(options) {}
  std::vector<double> score(std::span<const ScorerRequest> requests) override;
  std::string name() const override { return "mock"; }

 private:
  SmatchOptions options_;
};

}  // namespace amrkit
