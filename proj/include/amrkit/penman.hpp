#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amrkit/graph.hpp"

namespace amrkit {

/// Penman syntax error. line/column are 1-based; offset is 0-based.
class PenmanError : public std::runtime_error {
 public:
  /// what() is "line L, column C: reason".
  PenmanError(const std::string& reason, std::size_t offset, std::size_t line, std::size_t column);

  const std::string& reason() const noexcept { return reason_; }

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

/// Parses a single Penman graph.
///
/// A bare target token is a Variable iff that name is declared with
/// "/ concept" somewhere in the graph; otherwise it is a Constant. Quoted
/// tokens are always Constants. Exact duplicate relations or attributes are
/// collapsed; a message is appended to `warnings` when it is non-null.
AmrGraph parse_penman(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Serializes with four-space indentation per depth. Each node emits its
/// relations (stored order) then its attributes; revisited variables are bare.
std::string serialize_penman(const AmrGraph& graph);

/// Token sequence of serialize_penman's output.
std::vector<std::string> linearize(const AmrGraph& graph);

/// Joins tokens with single spaces.
std::string detokenize(const std::vector<std::string>& tokens);

}  // namespace amrkit
