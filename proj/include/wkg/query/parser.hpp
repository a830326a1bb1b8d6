#pragma once
// Lexer and recursive-descent parser for the Cypher subset.
//
//   query    := clause+
//   clause   := match | where | with | unwind | call | return | orderby | limit
//   match    := MATCH pattern ("," pattern)*
//   pattern  := node (rel node){0,2}
//   node     := "(" ident? (":" LABEL)? props? ")"
//   rel      := "-" ("[" ident? (":" TYPE)? props? "]")? "-" ">"?
//             | "<" "-" ("[" ... "]")? "-"
//   where    := WHERE expr
//   with     := WITH DISTINCT? proj ("," proj)*
//   return   := RETURN DISTINCT? proj ("," proj)*
//   proj     := expr (AS ident)?
//   unwind   := UNWIND expr AS ident
//   call     := CALL "{" (WITH ident ("," ident)*)? query "}"
//   orderby  := ORDER BY expr (ASC|DESC)? ("," expr (ASC|DESC)?)*
//   limit    := LIMIT expr
//
// Keywords are case-insensitive, identifiers case-sensitive. Positions are
// 1-based lines and 0-based columns.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wkg/error.hpp"
#include "wkg/query/ast.hpp"

namespace wkg::query {

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected, std::string found)
      : Error(ErrorCode::SyntaxError, render(line, column, expected, found)),
        line_(line),
        column_(column),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  static std::string render(int line, int column, const std::vector<std::string>& expected,
                            const std::string& found) {
    std::string out = "line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": expected ";
    if (expected.size() > 1) out += "one of ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    return out + " but found " + found;
  }

  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string found_;
};

struct Token {
  enum class Kind { Ident, Int, Float, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;  // identifier / symbol / decoded string
  bool quoted = false;
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 0;

  std::string describe() const {
    switch (kind) {
      case Kind::End: return "end of input";
      case Kind::String: return "string '" + text + "'";
      default: return "'" + text + "'";
    }
  }
};

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;
  auto make = [&](Token::Kind kind, std::size_t begin, std::string text) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.begin = begin;
    t.end = i;
    t.line = line;
    t.column = static_cast<int>(begin - line_start);
    return t;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t begin = i;
    const int col = static_cast<int>(begin - line_start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back(make(Token::Kind::Ident, begin, std::string(src.substr(begin, i - begin))));
      continue;
    }
    if (c == '`') {
      ++i;
      while (i < src.size() && src[i] != '`') ++i;
      if (i >= src.size()) throw SyntaxError(line, col, {"closing '`'"}, "end of input");
      ++i;
      auto t = make(Token::Kind::Ident, begin, std::string(src.substr(begin + 1, i - begin - 2)));
      t.quoted = true;
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      bool is_float = false;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        is_float = true;
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          is_float = true;
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      out.push_back(make(is_float ? Token::Kind::Float : Token::Kind::Int, begin,
                         std::string(src.substr(begin, i - begin))));
      continue;
    }
    if (c == '\'' || c == '"') {
      std::string text;
      ++i;
      while (true) {
        if (i >= src.size() || src[i] == '\n')
          throw SyntaxError(line, col, {std::string("closing ") + c}, "end of input");
        if (src[i] == c) break;
        if (src[i] == '\\' && i + 1 < src.size()) {
          const char e = src[i + 1];
          text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          i += 2;
          continue;
        }
        text += src[i++];
      }
      ++i;
      out.push_back(make(Token::Kind::String, begin, std::move(text)));
      continue;
    }
    static const char* two[] = {"<=", ">=", "<>", "!="};
    bool matched = false;
    for (const char* op : two)
      if (src.substr(i, 2) == op) {
        i += 2;
        out.push_back(make(Token::Kind::Symbol, begin, op));
        matched = true;
        break;
      }
    if (matched) continue;
    if (std::string_view("()[]{},:.;-+*/%=<>|").find(c) != std::string_view::npos) {
      ++i;
      out.push_back(make(Token::Kind::Symbol, begin, std::string(1, c)));
      continue;
    }
    throw SyntaxError(line, col, {"token"}, std::string("character '") + c + "'");
  }
  Token end;
  end.kind = Token::Kind::End;
  end.begin = end.end = src.size();
  end.line = line;
  end.column = static_cast<int>(src.size() - line_start);
  out.push_back(end);
  return out;
}

namespace detail {

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{
      "MATCH", "WHERE", "WITH",  "UNWIND", "CALL", "RETURN", "ORDER", "BY",   "ASC",
      "ASCENDING", "DESC", "DESCENDING", "LIMIT", "AS", "DISTINCT", "AND", "OR", "XOR",
      "NOT", "IN", "IS", "NULL", "TRUE", "FALSE", "CASE", "WHEN", "THEN", "ELSE", "END",
      "OPTIONAL", "MERGE", "CREATE", "SET", "DELETE", "SKIP", "UNION"};
  return words;
}

inline const std::vector<std::string>& clause_keywords() {
  static const std::vector<std::string> kws{"MATCH",  "WHERE",    "WITH",  "UNWIND",
                                            "CALL",   "RETURN",   "ORDER BY", "LIMIT"};
  return kws;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(tokenize(src)) {}

  Query parse() {
    Query q = parse_clauses(false);
    if (peek().kind != Token::Kind::End) fail(clause_keywords());
    q.text = std::string(src_);
    return q;
  }

 private:
  // ---- token helpers ----
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_kw(const Token& t, std::string_view kw) const {
    return t.kind == Token::Kind::Ident && !t.quoted && upper(t.text) == kw;
  }
  bool at_kw(std::string_view kw) const { return is_kw(peek(), kw); }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    next();
    return true;
  }
  bool at_sym(std::string_view s) const {
    return peek().kind == Token::Kind::Symbol && peek().text == s;
  }
  bool accept_sym(std::string_view s) {
    if (!at_sym(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw SyntaxError(t.line, t.column, std::move(expected), t.describe());
  }
  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) fail({"'" + std::string(s) + "'"});
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail({std::string(kw)});
  }
  std::string expect_ident(const char* what = "identifier") {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || (!t.quoted && reserved_words().count(upper(t.text))))
      fail({what});
    return next().text;
  }
  std::string text_between(std::size_t begin, std::size_t end) const {
    return std::string(src_.substr(begin, end - begin));
  }
  std::size_t last_end() const { return toks_[pos_ == 0 ? 0 : pos_ - 1].end; }

  // ---- clauses ----
  Query parse_clauses(bool in_subquery) {
    Query q;
    while (true) {
      const Token& t = peek();
      if (t.kind == Token::Kind::End || (in_subquery && at_sym("}"))) break;
      Clause c;
      c.line = t.line;
      c.column = t.column;
      if (accept_kw("MATCH")) {
        c.kind = Clause::Kind::Match;
        do c.patterns.push_back(parse_pattern());
        while (accept_sym(","));
      } else if (accept_kw("WHERE")) {
        c.kind = Clause::Kind::Where;
        c.expr = parse_expr();
        no_aggregate(*c.expr, "WHERE");
      } else if (accept_kw("WITH")) {
        c.kind = Clause::Kind::With;
        c.distinct = accept_kw("DISTINCT");
        c.projections = parse_projections(true);
      } else if (accept_kw("RETURN")) {
        c.kind = Clause::Kind::Return;
        c.distinct = accept_kw("DISTINCT");
        c.projections = parse_projections(false);
      } else if (accept_kw("UNWIND")) {
        c.kind = Clause::Kind::Unwind;
        c.expr = parse_expr();
        no_aggregate(*c.expr, "UNWIND");
        expect_kw("AS");
        c.alias = expect_ident();
      } else if (accept_kw("CALL")) {
        c.kind = Clause::Kind::Call;
        expect_sym("{");
        if (accept_kw("WITH")) {
          do c.imports.push_back(expect_ident());
          while (accept_sym(","));
        }
        auto sub = std::make_shared<Query>(parse_clauses(true));
        expect_sym("}");
        c.subquery = std::move(sub);
      } else if (at_kw("ORDER")) {
        next();
        expect_kw("BY");
        c.kind = Clause::Kind::OrderBy;
        do {
          SortKey k;
          k.expr = parse_expr();
          no_aggregate(*k.expr, "ORDER BY");
          if (accept_kw("DESC") || accept_kw("DESCENDING"))
            k.descending = true;
          else if (!accept_kw("ASC"))
            accept_kw("ASCENDING");
          c.keys.push_back(std::move(k));
        } while (accept_sym(","));
      } else if (accept_kw("LIMIT")) {
        c.kind = Clause::Kind::Limit;
        c.expr = parse_expr();
      } else {
        fail(in_subquery && !q.clauses.empty()
                 ? [] {
                     auto v = clause_keywords();
                     v.push_back("'}'");
                     return v;
                   }()
                 : clause_keywords());
      }
      check_order(q, c, t);
      q.clauses.push_back(std::move(c));
    }
    if (q.clauses.empty()) fail(clause_keywords());
    const bool ends_with_return =
        std::any_of(q.clauses.begin(), q.clauses.end(),
                    [](const Clause& c) { return c.kind == Clause::Kind::Return; });
    if (!ends_with_return) fail({"RETURN"});
    return q;
  }

  void check_order(const Query& q, const Clause& c, const Token& at) const {
    using K = Clause::Kind;
    const K prev = q.clauses.empty() ? K::Match : q.clauses.back().kind;
    const bool first = q.clauses.empty();
    auto reject = [&](std::vector<std::string> expected) {
      throw SyntaxError(at.line, at.column, std::move(expected), at.describe());
    };
    bool after_return = false;
    for (const auto& x : q.clauses) after_return |= x.kind == K::Return;
    if (after_return && c.kind != K::OrderBy && c.kind != K::Limit)
      reject({"ORDER BY", "LIMIT", "end of query"});
    switch (c.kind) {
      case K::Where:
        if (first || !(prev == K::Match || prev == K::With || prev == K::OrderBy || prev == K::Limit))
          reject({"MATCH", "WITH", "UNWIND", "CALL", "RETURN"});
        break;
      case K::OrderBy:
        if (first || !(prev == K::With || prev == K::Return)) reject({"WITH", "RETURN"});
        break;
      case K::Limit:
        if (first || !(prev == K::With || prev == K::Return || prev == K::OrderBy))
          reject({"WITH", "RETURN", "ORDER BY"});
        break;
      default: break;
    }
  }

  void no_aggregate(const Expr& e, const char* where) const {
    if (contains_aggregate(e))
      throw SyntaxError(e.line, e.column, {"non-aggregate expression in " + std::string(where)},
                        "'" + e.text + "'");
  }

  std::vector<Projection> parse_projections(bool require_alias) {
    std::vector<Projection> out;
    do {
      Projection p;
      p.expr = parse_expr();
      if (accept_kw("AS")) {
        p.alias = expect_ident("alias");
        p.aliased = true;
      } else if (p.expr->kind == ExprKind::Variable) {
        p.alias = p.expr->name;
      } else {
        if (require_alias) fail({"AS"});
        p.alias = p.expr->text;
      }
      out.push_back(std::move(p));
    } while (accept_sym(","));
    return out;
  }

  // ---- patterns ----
  std::vector<std::pair<std::string, ExprPtr>> parse_prop_map() {
    std::vector<std::pair<std::string, ExprPtr>> out;
    expect_sym("{");
    if (accept_sym("}")) return out;
    do {
      const Token& t = peek();
      if (t.kind != Token::Kind::Ident) fail({"property key"});
      std::string key = next().text;
      expect_sym(":");
      out.emplace_back(std::move(key), parse_expr());
    } while (accept_sym(","));
    expect_sym("}");
    return out;
  }

  NodePattern parse_node() {
    NodePattern n;
    expect_sym("(");
    if (peek().kind == Token::Kind::Ident && !(at_sym(":"))) n.var = expect_ident("variable");
    if (n.var.empty()) {
      n.anonymous = true;
      n.var = " anon" + std::to_string(anon_++);
    }
    if (accept_sym(":")) n.label = expect_ident("label");
    if (at_sym("{")) n.props = parse_prop_map();
    if (!accept_sym(")")) {
      std::vector<std::string> expected{"')'"};
      if (!n.label) expected.insert(expected.begin(), "':'");
      if (n.props.empty()) expected.insert(expected.end() - 1, "'{'");
      fail(expected);
    }
    return n;
  }

  void parse_rel_detail(RelPattern& r) {
    if (!accept_sym("[")) return;
    if (peek().kind == Token::Kind::Ident) r.var = expect_ident("variable");
    if (accept_sym(":")) r.type = expect_ident("relationship type");
    if (at_sym("{")) r.props = parse_prop_map();
    expect_sym("]");
  }

  RelPattern parse_rel() {
    RelPattern r;
    if (accept_sym("<")) {
      expect_sym("-");
      parse_rel_detail(r);
      expect_sym("-");
      r.dir = Direction::In;
    } else {
      expect_sym("-");
      parse_rel_detail(r);
      expect_sym("-");
      r.dir = accept_sym(">") ? Direction::Out : Direction::Either;
    }
    if (r.var.empty()) {
      r.anonymous = true;
      r.var = " anon" + std::to_string(anon_++);
    }
    return r;
  }

  Pattern parse_pattern() {
    Pattern p;
    p.nodes.push_back(parse_node());
    while (at_sym("-") || at_sym("<")) {
      if (p.rels.size() == 2) fail({"','", "clause keyword (patterns have at most 2 relationships)"});
      p.rels.push_back(parse_rel());
      p.nodes.push_back(parse_node());
    }
    return p;
  }

  // ---- expressions ----
  std::shared_ptr<Expr> start(ExprKind kind, const Token& t) const {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->line = t.line;
    e->column = t.column;
    return e;
  }

  ExprPtr finish(std::shared_ptr<Expr> e, std::size_t begin) const {
    e->text = text_between(begin, last_end());
    return e;
  }

  ExprPtr binary(const std::string& op, ExprPtr lhs, ExprPtr rhs, const Token& first) const {
    auto e = start(ExprKind::Binary, first);
    e->op = op;
    e->args = {std::move(lhs), std::move(rhs)};
    return finish(e, first.begin);
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    const Token first = peek();
    auto lhs = parse_xor();
    while (accept_kw("OR")) lhs = binary("OR", lhs, parse_xor(), first);
    return lhs;
  }

  ExprPtr parse_xor() {
    const Token first = peek();
    auto lhs = parse_and();
    while (accept_kw("XOR")) lhs = binary("XOR", lhs, parse_and(), first);
    return lhs;
  }

  ExprPtr parse_and() {
    const Token first = peek();
    auto lhs = parse_not();
    while (accept_kw("AND")) lhs = binary("AND", lhs, parse_not(), first);
    return lhs;
  }

  ExprPtr parse_not() {
    const Token first = peek();
    if (accept_kw("NOT")) {
      auto e = start(ExprKind::Unary, first);
      e->op = "NOT";
      e->args = {parse_not()};
      return finish(e, first.begin);
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    const Token first = peek();
    auto lhs = parse_additive();
    while (true) {
      static const char* ops[] = {"=", "<>", "!=", "<", "<=", ">", ">="};
      bool done = true;
      for (const char* op : ops)
        if (accept_sym(op)) {
          lhs = binary(std::string(op) == "!=" ? "<>" : op, lhs, parse_additive(), first);
          done = false;
          break;
        }
      if (!done) continue;
      if (accept_kw("IN")) {
        lhs = binary("IN", lhs, parse_additive(), first);
        continue;
      }
      if (accept_kw("IS")) {
        auto e = start(ExprKind::Unary, first);
        e->op = accept_kw("NOT") ? "IS NOT NULL" : "IS NULL";
        expect_kw("NULL");
        e->args = {lhs};
        lhs = finish(e, first.begin);
        continue;
      }
      return lhs;
    }
  }

  ExprPtr parse_additive() {
    const Token first = peek();
    auto lhs = parse_multiplicative();
    while (true) {
      if (accept_sym("+"))
        lhs = binary("+", lhs, parse_multiplicative(), first);
      else if (at_sym("-") && !arrow_ahead())
        next(), lhs = binary("-", lhs, parse_multiplicative(), first);
      else
        return lhs;
    }
  }

  // A '-' followed by '[' or '>' belongs to a pattern, not arithmetic.
  bool arrow_ahead() const {
    const Token& n = peek(1);
    return n.kind == Token::Kind::Symbol && (n.text == "[" || n.text == ">");
  }

  ExprPtr parse_multiplicative() {
    const Token first = peek();
    auto lhs = parse_unary();
    while (true) {
      if (accept_sym("*"))
        lhs = binary("*", lhs, parse_unary(), first);
      else if (accept_sym("/"))
        lhs = binary("/", lhs, parse_unary(), first);
      else if (accept_sym("%"))
        lhs = binary("%", lhs, parse_unary(), first);
      else
        return lhs;
    }
  }

  ExprPtr parse_unary() {
    const Token first = peek();
    if (accept_sym("-")) {
      auto e = start(ExprKind::Unary, first);
      e->op = "-";
      e->args = {parse_unary()};
      return finish(e, first.begin);
    }
    if (accept_sym("+")) return parse_unary();
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    const Token first = peek();
    auto e = parse_primary();
    while (accept_sym(".")) {
      const Token& key = peek();
      if (key.kind != Token::Kind::Ident) fail({"property key"});
      auto p = start(ExprKind::Property, first);
      p->name = next().text;
      p->args = {e};
      e = finish(p, first.begin);
    }
    return e;
  }

  ExprPtr parse_primary() {
    const Token t = peek();
    switch (t.kind) {
      case Token::Kind::Int: {
        next();
        auto e = start(ExprKind::Literal, t);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw SyntaxError(t.line, t.column, {"integer in range"}, t.describe());
        e->literal = v;
        return finish(e, t.begin);
      }
      case Token::Kind::Float: {
        next();
        auto e = start(ExprKind::Literal, t);
        e->literal = std::stod(t.text);
        return finish(e, t.begin);
      }
      case Token::Kind::String: {
        next();
        auto e = start(ExprKind::Literal, t);
        e->literal = t.text;
        return finish(e, t.begin);
      }
      case Token::Kind::Symbol:
        if (t.text == "(") {
          next();
          auto inner = parse_expr();
          expect_sym(")");
          return inner;
        }
        if (t.text == "[") {
          next();
          auto e = start(ExprKind::ListLiteral, t);
          if (!accept_sym("]")) {
            do e->args.push_back(parse_expr());
            while (accept_sym(","));
            expect_sym("]");
          }
          return finish(e, t.begin);
        }
        break;
      case Token::Kind::Ident: {
        if (!t.quoted) {
          const std::string kw = upper(t.text);
          if (kw == "TRUE" || kw == "FALSE" || kw == "NULL") {
            next();
            auto e = start(ExprKind::Literal, t);
            if (kw != "NULL") e->literal = (kw == "TRUE");
            return finish(e, t.begin);
          }
          if (kw == "CASE") return parse_case();
        }
        if (peek(1).kind == Token::Kind::Symbol && peek(1).text == "(" && !t.quoted)
          return parse_call();
        auto e = start(ExprKind::Variable, t);
        e->name = expect_ident("expression");
        return finish(e, t.begin);
      }
      case Token::Kind::End: break;
    }
    fail({"expression"});
  }

  ExprPtr parse_case() {
    const Token t = next();
    auto e = start(ExprKind::Case, t);
    if (!at_kw("WHEN")) e->subject = parse_expr();
    if (!at_kw("WHEN")) fail({"WHEN"});
    while (accept_kw("WHEN")) {
      auto cond = parse_expr();
      expect_kw("THEN");
      e->whens.emplace_back(cond, parse_expr());
    }
    if (accept_kw("ELSE")) e->otherwise = parse_expr();
    if (!accept_kw("END")) fail(e->otherwise ? std::vector<std::string>{"END"}
                                             : std::vector<std::string>{"WHEN", "ELSE", "END"});
    return finish(e, t.begin);
  }

  ExprPtr parse_call() {
    const Token t = next();
    const std::string name = lower(t.text);
    const bool aggregate = is_aggregate_name(name);
    const auto& scalars = scalar_functions();
    if (!aggregate && std::find(scalars.begin(), scalars.end(), name) == scalars.end()) {
      std::vector<std::string> expected;
      for (const auto& n : aggregate_functions()) expected.push_back(n);
      for (const auto& n : scalars) expected.push_back(n);
      throw SyntaxError(t.line, t.column, expected, "function '" + t.text + "'");
    }
    auto e = start(ExprKind::Function, t);
    e->name = name;
    expect_sym("(");
    if (name == "count" && accept_sym("*")) {
      e->star = true;
    } else {
      if (aggregate) e->distinct = accept_kw("DISTINCT");
      if (!at_sym(")")) {
        do {
          auto arg = parse_expr();
          if (aggregate) no_aggregate(*arg, "an aggregate argument");
          e->args.push_back(arg);
        } while (accept_sym(","));
      }
    }
    expect_sym(")");
    const std::size_t arity = e->args.size();
    const bool ok = e->star || (name == "coalesce"           ? arity >= 1
                                : name == "duration_seconds" ? arity == 2
                                : name == "round"            ? arity == 1 || arity == 2
                                                             : arity == 1);
    if (!ok)
      throw SyntaxError(t.line, t.column,
                        {name == "duration_seconds" ? "2 arguments"
                         : name == "coalesce"       ? "at least 1 argument"
                         : name == "round"          ? "1 or 2 arguments"
                                                    : "1 argument"},
                        std::to_string(arity) + " arguments to " + name);
    return finish(e, t.begin);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int anon_ = 0;
};

}  // namespace detail

inline Query parse_query(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace wkg::query
