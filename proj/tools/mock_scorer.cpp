// Line-delimited perplexity server for tests and offline runs. Reads requests
// on stdin and answers each with mock_perplexity. The --mode flag produces
// specific protocol faults.
#include <poll.h>
#include <unistd.h>

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amrkit/scorer.hpp"

namespace {

void emit(const amrkit::ScorerResponse& response) {
  std::cout << amrkit::encode_response(response) << '\n' << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock perplexity scorer", "mock_scorer"};
  std::string mode = "ok";
  app.add_option("--mode", mode, "ok, reverse (answers each burst in reverse order), unknown-id, negative, "
                                 "garbage, exit")
      ->check(CLI::IsMember({"ok", "reverse", "unknown-id", "negative", "garbage", "exit"}));
  CLI11_PARSE(app, argc, argv);

  std::vector<amrkit::ScorerResponse> held;
  std::string pending;
  char buffer[65536];
  while (true) {
    if (!held.empty()) {
      pollfd pfd{STDIN_FILENO, POLLIN, 0};
      if (::poll(&pfd, 1, 50) == 0) {
        for (auto it = held.rbegin(); it != held.rend(); ++it) emit(*it);
        held.clear();
      }
    }
    const auto n = ::read(STDIN_FILENO, buffer, sizeof buffer);
    if (n <= 0) break;
    pending.append(buffer, static_cast<std::size_t>(n));
    std::size_t newline;
    while ((newline = pending.find('\n')) != std::string::npos) {
      const auto line = pending.substr(0, newline);
      pending.erase(0, newline + 1);
      if (line.empty()) continue;
      amrkit::ScorerResponse response;
      try {
        const auto request = amrkit::decode_request(line);
        response = {request.request_id, amrkit::mock_perplexity(request)};
      } catch (const std::exception& e) {
        std::cerr << "mock_scorer: " << e.what() << '\n';
        return 1;
      }
      if (mode == "exit") return 0;
      if (mode == "garbage") {
        std::cout << "not json\n" << std::flush;
        continue;
      }
      if (mode == "unknown-id") response.request_id += "#x";
      if (mode == "negative") response.perplexity = -1.0;
      if (mode == "reverse")
        held.push_back(response);
      else
        emit(response);
    }
  }
  for (auto it = held.rbegin(); it != held.rend(); ++it) emit(*it);
  return 0;
}
