#include "ndg/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "ndg/error.hpp"
#include "ndg/simulator.hpp"

namespace ndg {

namespace {

enum class TokenKind { kWord, kInt, kAt, kArrow };

struct Token {
  TokenKind kind;
  std::string text;
  SourcePosition pos;
};

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "identifier";
    case TokenKind::kInt: return "integer";
    case TokenKind::kAt: return "'@'";
    case TokenKind::kArrow: return "'->'";
  }
  return "token";
}

std::vector<Token> lex_line(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto at = [&](std::size_t col) { return SourcePosition{line_no, static_cast<int>(col) + 1}; };
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    auto start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      while (i < line.size() &&
             std::isalnum(static_cast<unsigned char>(line[i])) != 0) {
        ++i;
      }
      out.push_back({TokenKind::kWord, std::string(line.substr(start, i - start)), at(start)});
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      while (i < line.size() &&
             std::isdigit(static_cast<unsigned char>(line[i])) != 0) {
        ++i;
      }
      out.push_back({TokenKind::kInt, std::string(line.substr(start, i - start)), at(start)});
    } else if (c == '@') {
      out.push_back({TokenKind::kAt, "@", at(start)});
      ++i;
    } else if (line.substr(i, 2) == "->") {
      out.push_back({TokenKind::kArrow, "->", at(start)});
      i += 2;
    } else {
      throw ParseError(at(start), std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Problem run() {
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      auto end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      auto tokens = lex_line(text_.substr(start, end - start), line_no);
      last_line_ = line_no;
      if (!tokens.empty()) statement(tokens, line_no);
      if (end == text_.size()) break;
      start = end + 1;
    }
    return finish();
  }

 private:
  void statement(const std::vector<Token>& tokens, int line_no) {
    tokens_ = &tokens;
    next_ = 0;
    line_end_ = SourcePosition{line_no, static_cast<int>(tokens.back().pos.column + tokens.back().text.size())};
    const auto& head = tokens.front();
    if (head.kind != TokenKind::kWord) {
      throw ParseError(head.pos, "expected a statement keyword, found " +
                                     std::string(describe(head.kind)));
    }
    if (!id_) {
      if (head.text != "diagram") {
        throw ParseError(head.pos, "missing diagram header (expected 'diagram')");
      }
      take();
      id_ = expect(TokenKind::kWord, "diagram id").text;
      done();
      return;
    }
    if (!columns_) {
      if (head.text != "times") {
        throw ParseError(head.pos, "expected 'times' after the diagram header");
      }
      take();
      columns_ = integer("column count");
      done();
      return;
    }

    take();
    if (head.text == "neuron") {
      neuron();
    } else if (head.text == "stim") {
      edge(EdgeKind::kStimulatory);
    } else if (head.text == "inhib") {
      edge(EdgeKind::kInhibitory);
    } else if (head.text == "fire") {
      fire();
    } else if (head.text == "ask") {
      if (target_) throw ParseError(head.pos, "duplicate 'ask' statement");
      const auto& tok = expect(TokenKind::kWord, "neuron id");
      target_ = reference(tok);
      done();
    } else if (head.text == "diagram" || head.text == "times") {
      throw ParseError(head.pos, "duplicate '" + head.text + "' statement");
    } else {
      throw ParseError(head.pos,
                       "unknown statement '" + head.text +
                           "' (expected neuron, stim, inhib, fire or ask)");
    }
  }

  void neuron() {
    const auto& name = expect(TokenKind::kWord, "neuron id");
    if (declared_.count(name.text) != 0) {
      throw ParseError(name.pos, "duplicate declaration of neuron '" + name.text + "'");
    }
    expect(TokenKind::kAt, "'@'");
    SourcePosition time_pos = peek_pos();
    Neuron n{name.text, integer("column"), 1, 1};
    if (n.time > *columns_) {
      throw ParseError(time_pos, "column " + std::to_string(n.time) +
                                     " exceeds 'times " +
                                     std::to_string(*columns_) + "'");
    }
    bool seen_row = false;
    bool seen_threshold = false;
    while (next_ < tokens_->size()) {
      const auto& kw = expect(TokenKind::kWord, "'row' or 'threshold'");
      if (kw.text == "row" && !seen_row) {
        seen_row = true;
        n.row = integer("row");
      } else if (kw.text == "threshold" && !seen_threshold) {
        seen_threshold = true;
        n.threshold = integer("threshold");
      } else {
        throw ParseError(kw.pos, "unexpected '" + kw.text + "' (expected 'row' or 'threshold')");
      }
    }
    declared_[n.id] = name.pos;
    neurons_.push_back(std::move(n));
  }

  void edge(EdgeKind kind) {
    const auto& src = expect(TokenKind::kWord, "source neuron id");
    reference(src);
    expect(TokenKind::kArrow, "'->'");
    const auto& dst = expect(TokenKind::kWord, "target neuron id");
    reference(dst);
    done();
    Edge e{src.text, dst.text, kind};
    if (std::find(edges_.begin(), edges_.end(), e) != edges_.end()) {
      throw ParseError(src.pos, "duplicate edge " + src.text + " -> " + dst.text);
    }
    const auto& ns = *std::find_if(neurons_.begin(), neurons_.end(), [&](auto& n) { return n.id == src.text; });
    const auto& nd = *std::find_if(neurons_.begin(), neurons_.end(), [&](auto& n) { return n.id == dst.text; });
    if (ns.time >= nd.time) {
      throw ParseError(dst.pos, "edge " + src.text + " -> " + dst.text +
                                    " must point forward in time (t" +
                                    std::to_string(ns.time) + " -> t" +
                                    std::to_string(nd.time) + ")");
    }
    edges_.push_back(std::move(e));
  }

  void fire() {
    if (next_ >= tokens_->size()) {
      throw ParseError(line_end_, "expected at least one neuron id after 'fire'");
    }
    while (next_ < tokens_->size()) {
      const auto& tok = expect(TokenKind::kWord, "neuron id");
      fired_.emplace_back(reference(tok), tok.pos);
    }
  }

  Problem finish() {
    if (!id_) throw ParseError({1, 1}, "missing diagram header");
    if (!columns_) throw ParseError({last_line_, 1}, "missing 'times' statement");
    if (!target_) throw ParseError({last_line_, 1}, "missing 'ask' statement");

    Problem out;
    out.diagram = Diagram(*id_, *columns_, neurons_, edges_);
    for (const auto& [id, pos] : fired_) {
      if (!out.diagram.is_source(out.diagram.index_of(id))) {
        throw ParseError(pos, "stipulated neuron '" + id +
                                  "' has a stimulatory parent and is not a source");
      }
      out.stipulation.firing_sources.insert(id);
    }
    out.target = *target_;
    for (const auto& v : validate(out.diagram, out.stipulation)) {
      if (v.severity != Severity::kError) continue;
      auto it = declared_.find(v.element);
      throw ParseError(it != declared_.end() ? it->second : SourcePosition{1, 1}, v.message);
    }
    return out;
  }

  const std::string& reference(const Token& tok) {
    if (declared_.count(tok.text) == 0) {
      throw ParseError(tok.pos, "unknown neuron '" + tok.text + "'");
    }
    return tok.text;
  }

  const Token& take() { return (*tokens_)[next_++]; }

  SourcePosition peek_pos() const {
    return next_ < tokens_->size() ? (*tokens_)[next_].pos : line_end_;
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (next_ >= tokens_->size()) {
      throw ParseError(line_end_, "expected " + std::string(what) + " before end of line");
    }
    const auto& tok = (*tokens_)[next_];
    if (tok.kind != kind) {
      throw ParseError(tok.pos, "expected " + std::string(what) + ", found '" + tok.text + "'");
    }
    ++next_;
    return tok;
  }

  int integer(std::string_view what) {
    const auto& tok = expect(TokenKind::kInt, what);
    if (tok.text.size() > 9) throw ParseError(tok.pos, std::string(what) + " is too large");
    int value = std::stoi(tok.text);
    if (value < 1) throw ParseError(tok.pos, std::string(what) + " must be positive");
    return value;
  }

  void done() {
    if (next_ < tokens_->size()) {
      const auto& tok = (*tokens_)[next_];
      throw ParseError(tok.pos, "unexpected '" + tok.text + "' at end of statement");
    }
  }

  std::string_view text_;
  const std::vector<Token>* tokens_ = nullptr;
  std::size_t next_ = 0;
  SourcePosition line_end_;
  int last_line_ = 1;

  std::optional<std::string> id_;
  std::optional<int> columns_;
  std::vector<Neuron> neurons_;
  std::vector<Edge> edges_;
  std::map<std::string, SourcePosition> declared_;
  std::vector<std::pair<std::string, SourcePosition>> fired_;
  std::optional<std::string> target_;
};

}  // namespace

Problem parse_diagram(std::string_view text) { return Parser(text).run(); }

std::string serialize_diagram(const Problem& problem) {
  const auto& d = problem.diagram;
  require_valid(d, problem.stipulation);
  d.index_of(problem.target);

  std::ostringstream out;
  out << "diagram " << d.id() << "\n";
  out << "times " << d.columns() << "\n";
  for (const auto& n : d.neurons()) {
    out << "neuron " << n.id << " @ " << n.time << " row " << n.row;
    if (n.threshold != 1) out << " threshold " << n.threshold;
    out << "\n";
  }
  for (const auto& e : d.edges()) {
    out << to_string(e.kind) << " " << e.src << " -> " << e.dst << "\n";
  }
  if (!problem.stipulation.firing_sources.empty()) {
    out << "fire";
    // Storage order is (time, id).
    for (const auto& n : d.neurons()) {
      if (problem.stipulation.firing_sources.count(n.id) != 0) out << " " << n.id;
    }
    out << "\n";
  }
  out << "ask " << problem.target << "\n";
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

Problem load_problem(const std::filesystem::path& path) {
  auto text = read_file(path);
  try {
    return parse_diagram(text);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), e.detail() + " (in " + path.string() + ")");
  }
}

void save_problem(const std::filesystem::path& path, const Problem& problem) {
  write_file(path, serialize_diagram(problem));
}

Event target_event(const Problem& problem) {
  auto factual = simulate(problem.diagram, problem.stipulation);
  return factual_event(problem.diagram, factual,
                       problem.diagram.index_of(problem.target));
}

}  // namespace ndg
