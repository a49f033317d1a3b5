#include "amrkit/penman.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace amrkit {

namespace {

void locate(std::string_view text, std::size_t offset, std::size_t& line, std::size_t& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

enum class TokenKind { LParen, RParen, Slash, Role, Quoted, Symbol, End };

struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        tokens.push_back({TokenKind::End, {}, pos_});
        return tokens;
      }
      const char c = text_[pos_];
      const auto start = pos_;
      if (c == '(') {
        tokens.push_back({TokenKind::LParen, text_.substr(pos_++, 1), start});
      } else if (c == ')') {
        tokens.push_back({TokenKind::RParen, text_.substr(pos_++, 1), start});
      } else if (c == '/') {
        tokens.push_back({TokenKind::Slash, text_.substr(pos_++, 1), start});
      } else if (c == '"') {
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') pos_ += text_[pos_] == '\\' ? 2 : 1;
        if (pos_ >= text_.size()) fail("unterminated string literal", start);
        ++pos_;
        tokens.push_back({TokenKind::Quoted, text_.substr(start, pos_ - start), start});
      } else {
        while (pos_ < text_.size() && !is_break(text_[pos_])) ++pos_;
        const auto word = text_.substr(start, pos_ - start);
        const auto kind = word.front() == ':' ? TokenKind::Role : TokenKind::Symbol;
        if (kind == TokenKind::Role && word.size() < 2) fail("empty role", start);
        tokens.push_back({kind, word, start});
      }
    }
  }

  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    std::size_t line = 0, column = 0;
    locate(text_, offset, line, column);
    throw PenmanError(what, offset, line, column);
  }

 private:
  static bool is_break(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '/' ||
           c == '"';
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct RawEdge {
  std::string role;
  std::size_t role_offset;
  std::optional<std::size_t> node;  // index into nodes when the target is a nested node
  std::string token;                // bare or quoted target otherwise
  bool quoted = false;
};

struct RawNode {
  std::string variable;
  std::string instance_of;
  std::size_t offset;
  std::vector<RawEdge> edges;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : lexer_(text), tokens_(lexer_.run()) {}

  std::vector<RawNode> read() {
    if (peek().kind != TokenKind::LParen) lexer_.fail("expected '(' at start of graph", peek().offset);
    read_node();
    if (peek().kind != TokenKind::End) lexer_.fail("unexpected content after graph", peek().offset);
    return std::move(nodes_);
  }

  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    lexer_.fail(what, offset);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  std::size_t read_node() {
    const auto& open = next();  // '('
    const auto& var = next();
    if (var.kind != TokenKind::Symbol)
      fail("expected variable after '(' (reference to undeclared variable)", var.offset);
    const auto index = nodes_.size();
    nodes_.push_back({std::string(var.text), {}, open.offset, {}});

    if (peek().kind != TokenKind::Slash)
      fail("missing concept for variable " + std::string(var.text), peek().offset);
    const auto& slash = next();
    const auto& label_tok = next();
    if (label_tok.kind != TokenKind::Symbol)
      fail("missing concept after '/'", label_tok.kind == TokenKind::End ? slash.offset : label_tok.offset);
    nodes_[index].instance_of = std::string(label_tok.text);

    while (true) {
      const auto& tok = peek();
      if (tok.kind == TokenKind::RParen) {
        next();
        return index;
      }
      if (tok.kind == TokenKind::End) fail("unbalanced parentheses: missing ')'", nodes_[index].offset);
      if (tok.kind != TokenKind::Role) fail("expected role or ')'", tok.offset);
      const auto& role = next();
      RawEdge edge{std::string(role.text), role.offset, std::nullopt, {}, false};
      const auto& target = peek();
      switch (target.kind) {
        case TokenKind::LParen:
          edge.node = read_node();
          break;
        case TokenKind::Quoted:
          edge.token = std::string(next().text);
          edge.quoted = true;
          break;
        case TokenKind::Symbol:
          edge.token = std::string(next().text);
          break;
        default:
          fail("missing target for role " + edge.role, target.offset);
      }
      nodes_[index].edges.push_back(std::move(edge));
    }
  }

  Lexer lexer_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<RawNode> nodes_;
};

}  // namespace

PenmanError::PenmanError(const std::string& reason, std::size_t offset, std::size_t line,
                         std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
      offset_(offset),
      line_(line),
      column_(column),
      reason_(reason) {}

AmrGraph parse_penman(std::string_view text, std::vector<std::string>* warnings) {
  Reader reader(text);
  auto nodes = reader.read();

  std::unordered_set<std::string> declared;
  for (const auto& node : nodes)
    if (!declared.insert(node.variable).second)
      reader.fail("duplicate declaration of variable " + node.variable, node.offset);

  try {
    std::vector<Instance> instances;
    std::vector<Relation> relations;
    std::vector<Attribute> attributes;
    std::set<std::tuple<std::string, std::string, std::string>> seen_rel, seen_attr;

    // Preorder walk so relations keep textual order.
    const std::function<void(std::size_t)> visit = [&](std::size_t i) {
      const auto& node = nodes[i];
      instances.push_back({Variable(node.variable), Concept(node.instance_of)});
      for (const auto& edge : node.edges) {
        std::string target = edge.node ? nodes[*edge.node].variable : edge.token;
        const bool is_var = edge.node.has_value() || (!edge.quoted && declared.contains(target));
        auto& seen = is_var ? seen_rel : seen_attr;
        if (!seen.emplace(node.variable, edge.role, target).second) {
          if (warnings)
            warnings->push_back("collapsed duplicate " + std::string(is_var ? "relation" : "attribute") +
                                " (" + node.variable + ", " + edge.role + ", " + target + ")");
        } else if (is_var) {
          relations.push_back({Variable(node.variable), Role(edge.role), Variable(target)});
        } else {
          attributes.push_back({Variable(node.variable), Role(edge.role), Constant(target)});
        }
        if (edge.node) visit(*edge.node);
      }
    };
    visit(0);
    return AmrGraph(Variable(nodes[0].variable), std::move(instances), std::move(relations),
                    std::move(attributes));
  } catch (const GraphError& e) {
    reader.fail(e.what(), 0);
  }
}

std::vector<std::string> linearize(const AmrGraph& graph) {
  std::vector<std::string> tokens;
  std::vector<bool> visited(graph.variable_count(), false);
  const std::function<void(std::size_t)> emit = [&](std::size_t v) {
    visited[v] = true;
    const auto& inst = graph.instances()[v];
    tokens.insert(tokens.end(), {"(", inst.variable.name(), "/", inst.instance_of.label()});
    for (const auto r : graph.outgoing_relations(v)) {
      const auto& rel = graph.relations()[r];
      tokens.push_back(rel.role.label());
      const auto t = *graph.index_of(rel.target);
      if (visited[t])
        tokens.push_back(rel.target.name());
      else
        emit(t);
    }
    for (const auto a : graph.outgoing_attributes(v)) {
      const auto& attr = graph.attributes()[a];
      tokens.push_back(attr.role.label());
      tokens.push_back(attr.value.value());
    }
    tokens.emplace_back(")");
  };
  emit(*graph.index_of(graph.root()));
  return tokens;
}

std::string serialize_penman(const AmrGraph& graph) {
  const auto tokens = linearize(graph);
  std::string out;
  std::size_t depth = 0;
  bool after_open = false;
  for (const auto& tok : tokens) {
    if (tok == "(") {
      if (!out.empty()) out += ' ';
      out += '(';
      ++depth;
      after_open = true;
      continue;
    }
    if (tok == ")") {
      out += ')';
      --depth;
    } else if (tok.front() == ':') {
      out += '\n';
      out.append(depth * 4, ' ');
      out += tok;
    } else {
      if (!after_open) out += ' ';
      out += tok;
    }
    after_open = false;
  }
  return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

}  // namespace amrkit
