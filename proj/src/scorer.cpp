#include "amrkit/scorer.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "amrkit/penman.hpp"
#include "json.hpp"

namespace amrkit {

using nlohmann::json;

ScorerError::ScorerError(const std::string& what, std::string request_id)
    : std::runtime_error(request_id.empty() ? what : what + " [request " + request_id + "]"),
      request_id_(std::move(request_id)) {}

std::string encode_request(const ScorerRequest& request) {
  json j = {{"request_id", request.request_id},
            {"sentence", request.sentence},
            {"context_graphs", request.context_graphs},
            {"target_graph", request.target_graph}};
  return j.dump();
}

ScorerRequest decode_request(std::string_view line) {
  try {
    const auto j = json::parse(line);
    ScorerRequest r;
    r.request_id = j.at("request_id").get<std::string>();
    r.sentence = j.value("sentence", "");
    r.context_graphs = j.value("context_graphs", std::vector<std::string>{});
    r.target_graph = j.at("target_graph").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ScorerError(std::string("malformed request: ") + e.what());
  }
}

std::string encode_response(const ScorerResponse& response) {
  return json{{"request_id", response.request_id}, {"perplexity", response.perplexity}}.dump();
}

ScorerResponse decode_response(std::string_view line) {
  try {
    const auto j = json::parse(line);
    ScorerResponse r;
    r.request_id = j.at("request_id").get<std::string>();
    const auto& p = j.at("perplexity");
    if (!p.is_number()) throw ScorerError("perplexity is not a number", r.request_id);
    r.perplexity = p.get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ScorerError(std::string("malformed response: ") + e.what());
  }
}

std::string request_key(std::string_view entry_id, std::string_view system_id) {
  std::string key(entry_id);
  key += '\t';
  key += system_id;
  return key;
}

double checked_perplexity(double value, const std::string& request_id) {
  if (!std::isfinite(value) || value <= 0.0)
    throw ScorerError("perplexity must be positive and finite, got " + std::to_string(value), request_id);
  return value;
}

// ---------------------------------------------------------------------------

SubprocessScorer::SubprocessScorer(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

SubprocessScorer::~SubprocessScorer() { stop(); }

void SubprocessScorer::start() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0)
    throw ScorerError(std::string("socketpair failed: ") + std::strerror(errno));
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw ScorerError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  fd_ = fds[0];
  pid_ = pid;
  pending_.clear();
}

void SubprocessScorer::stop() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_WR);
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    // Give the child a moment to exit on EOF before killing it.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      ::usleep(10000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::vector<double> SubprocessScorer::score(std::span<const ScorerRequest> requests) {
  std::lock_guard lock(mutex_);
  if (fd_ < 0) start();

  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (!slot.emplace(requests[i].request_id, i).second)
      throw ScorerError("duplicate request id in batch", requests[i].request_id);

  std::string outgoing;
  for (const auto& r : requests) outgoing += encode_request(r) + '\n';
  std::size_t written = 0;

  std::vector<double> values(requests.size(), 0.0);
  std::vector<bool> answered(requests.size(), false);
  std::size_t remaining = requests.size();
  const auto fail = [this](const std::string& what, const std::string& id = {}) {
    stop();
    throw ScorerError("scorer '" + command_ + "': " + what, id);
  };

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  char buffer[65536];
  while (remaining > 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) fail("timed out waiting for responses");

    pollfd pfd{fd_, static_cast<short>(POLLIN | (written < outgoing.size() ? POLLOUT : 0)), 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;

    if ((pfd.revents & POLLOUT) && written < outgoing.size()) {
      const auto n = ::send(fd_, outgoing.data() + written, outgoing.size() - written,
                            MSG_NOSIGNAL | MSG_DONTWAIT);
      if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) fail("write failed: " + std::string(std::strerror(errno)));
      if (n > 0) written += static_cast<std::size_t>(n);
    }
    if (pfd.revents & (POLLIN | POLLHUP | POLLERR)) {
      const auto n = ::recv(fd_, buffer, sizeof buffer, MSG_DONTWAIT);
      if (n == 0) fail("process closed its output with " + std::to_string(remaining) + " responses missing");
      if (n < 0) {
        if (errno == EAGAIN || errno == EWOULDBLOCK) continue;
        fail("read failed: " + std::string(std::strerror(errno)));
      }
      pending_.append(buffer, static_cast<std::size_t>(n));
      std::size_t newline;
      while ((newline = pending_.find('\n')) != std::string::npos) {
        const std::string line = pending_.substr(0, newline);
        pending_.erase(0, newline + 1);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ScorerResponse response;
        try {
          response = decode_response(line);
        } catch (const ScorerError& e) {
          fail(e.what(), e.request_id());
        }
        auto it = slot.find(response.request_id);
        if (it == slot.end()) fail("response for unknown request id", response.request_id);
        if (answered[it->second]) fail("duplicate response", response.request_id);
        try {
          values[it->second] = checked_perplexity(response.perplexity, response.request_id);
        } catch (const ScorerError& e) {
          fail(e.what(), e.request_id());
        }
        answered[it->second] = true;
        --remaining;
      }
    }
  }
  return values;
}

// ---------------------------------------------------------------------------

void ScoreTableScorer::set(const std::string& key, double perplexity) { table_[key] = perplexity; }

std::vector<double> ScoreTableScorer::score(std::span<const ScorerRequest> requests) {
  std::vector<double> values;
  values.reserve(requests.size());
  for (const auto& r : requests) {
    auto it = table_.find(r.request_id);
    if (it == table_.end()) throw ScorerError("score table '" + name_ + "' has no entry", r.request_id);
    values.push_back(checked_perplexity(it->second, r.request_id));
  }
  return values;
}

std::vector<std::unique_ptr<ScoreTableScorer>> load_score_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScorerError("cannot open score file " + path.string());
  std::vector<std::unique_ptr<ScoreTableScorer>> tables;
  std::unordered_map<std::string, ScoreTableScorer*> by_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      const auto scorer = j.value("scorer", std::string("default"));
      auto it = by_name.find(scorer);
      if (it == by_name.end()) {
        tables.push_back(std::make_unique<ScoreTableScorer>(scorer));
        it = by_name.emplace(scorer, tables.back().get()).first;
      }
      const auto id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      it->second->set(request_key(id, j.at("system").get<std::string>()), j.at("perplexity").get<double>());
    } catch (const json::exception& e) {
      throw ScorerError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return tables;
}

// ---------------------------------------------------------------------------

std::vector<double> FunctionScorer::score(std::span<const ScorerRequest> requests) {
  std::vector<double> values;
  values.reserve(requests.size());
  for (const auto& r : requests) values.push_back(checked_perplexity(fn_(r), r.request_id));
  return values;
}

double mock_perplexity(const ScorerRequest& request, const SmatchOptions& options) {
  const auto target = extract_triples(parse_penman(request.target_graph));
  bool skipped = false;
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& context : request.context_graphs) {
    if (!skipped && context == request.target_graph) {
      skipped = true;
      continue;
    }
    total += compute_smatch(target, extract_triples(parse_penman(context)), options).f1();
    ++count;
  }
  const double mean = count == 0 ? 1.0 : total / static_cast<double>(count);
  return 1.0 / (1.0 + mean);
}

std::vector<double> MockScorer::score(std::span<const ScorerRequest> requests) {
  std::vector<double> values;
  values.reserve(requests.size());
  for (const auto& r : requests) {
    try {
      values.push_back(mock_perplexity(r, options_));
    } catch (const std::exception& e) {
      throw ScorerError(std::string("mock scorer: ") + e.what(), r.request_id);
    }
  }
  return values;
}

}  // namespace amrkit
