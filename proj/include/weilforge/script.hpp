#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weilforge/json_io.hpp"

namespace weilforge {

// ---------------------------------------------------------------------------
// Source locations and tokens
// ---------------------------------------------------------------------------

struct SourceLoc {
  int line = 1;
  int col = 1;

  std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

namespace script {

struct Token {
  enum class Kind { ident, integer, string, sym, eof };
  Kind kind = Kind::eof;
  std::string text;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space();
    current_.loc = loc_;
    if (pos_ >= src_.size()) {
      current_ = {Token::Kind::eof, "", loc_};
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                    src_[pos_] == '.')) {
        text += src_[pos_];
        bump();
      }
      current_ = {Token::Kind::ident, std::move(text), current_.loc};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        text += src_[pos_];
        bump();
      }
      current_ = {Token::Kind::integer, std::move(text), current_.loc};
      return;
    }
    if (c == '"') {
      bump();
      std::string text;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        text += src_[pos_];
        bump();
      }
      require(pos_ < src_.size(), errc::syntax_error, "unterminated string at " + current_.loc.str());
      bump();
      current_ = {Token::Kind::string, std::move(text), current_.loc};
      return;
    }
    if (c == '<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      bump();
      bump();
      current_ = {Token::Kind::sym, "<=", current_.loc};
      return;
    }
    static const std::string singles = "=;,()^*+-/";
    if (singles.find(c) != std::string::npos) {
      bump();
      current_ = {Token::Kind::sym, std::string(1, c), current_.loc};
      return;
    }
    fail(errc::syntax_error, std::string("unexpected character '") + c + "' at " + loc_.str());
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++loc_.line;
      loc_.col = 1;
    } else {
      ++loc_.col;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  SourceLoc loc_;
  Token current_;
};

}  // namespace script

// ---------------------------------------------------------------------------
// Abstract syntax
// ---------------------------------------------------------------------------

/// Polynomial expression over the generator labels of an algebra.
struct PolyExpr;
using PolyExprPtr = std::shared_ptr<PolyExpr>;
struct PolyExpr {
  enum class Kind { number, var, add, sub, mul, pow, neg };
  Kind kind;
  Rat number;
  std::string var;
  PolyExprPtr lhs, rhs;  // add/sub/mul; neg uses lhs; pow uses lhs + exponent
  int exponent = 0;
  SourceLoc loc;
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;
struct Expr {
  enum class Kind { truncated, quotient, mpow, ideal_span, ann, point, jet, name };
  Kind kind;
  SourceLoc loc;
  int m = 0, l = 0;
  bool named_args = false;          // truncated(m=..., l=...) vs truncated(..., ...)
  std::vector<ExprPtr> args;
  int power = 0;                    // mpow
  std::vector<PolyExprPtr> polys;   // ideal_span, point
  std::string name;                 // name
};

enum class CheckKind { weil, regular, aut, jet };

inline const char* check_kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::weil: return "weil";
    case CheckKind::regular: return "regular";
    case CheckKind::aut: return "aut";
    case CheckKind::jet: return "jet";
  }
  return "?";
}

struct Stmt {
  enum class Kind { define, check, scan, export_binding };
  Kind kind;
  SourceLoc loc;
  std::string name;           // define target / export binding
  ExprPtr expr;               // define
  CheckKind check_kind = CheckKind::weil;
  ExprPtr first, second;      // check
  int m_max = 0, l_max = 0;   // scan
  std::string path;           // export
};

struct Program {
  std::vector<Stmt> statements;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace script {

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Program parse() {
    Program prog;
    while (lex_.peek().kind != Token::Kind::eof) prog.statements.push_back(statement());
    return prog;
  }

  ExprPtr parse_single_expression() {
    ExprPtr e = expression();
    if (lex_.peek().kind != Token::Kind::eof) error_at(lex_.peek().loc, "end of input");
    return e;
  }

 private:
  [[noreturn]] void error_at(const SourceLoc& loc, const std::string& expected) {
    const Token& t = lex_.peek();
    std::string got = t.kind == Token::Kind::eof ? "end of input" : "'" + t.text + "'";
    fail(errc::syntax_error, "at " + loc.str() + ": expected " + expected + ", found " + got);
  }

  Token expect_sym(const std::string& sym) {
    if (lex_.peek().kind != Token::Kind::sym || lex_.peek().text != sym) error_at(lex_.peek().loc, "'" + sym + "'");
    return lex_.next();
  }

  Token expect_ident() {
    if (lex_.peek().kind != Token::Kind::ident) error_at(lex_.peek().loc, "an identifier");
    return lex_.next();
  }

  int expect_int() {
    if (lex_.peek().kind != Token::Kind::integer) error_at(lex_.peek().loc, "an integer");
    Token t = lex_.next();
    try {
      return std::stoi(t.text);
    } catch (const std::exception&) {
      fail(errc::syntax_error, "at " + t.loc.str() + ": integer literal out of range");
    }
  }

  bool peek_sym(const std::string& sym) {
    return lex_.peek().kind == Token::Kind::sym && lex_.peek().text == sym;
  }

  Stmt statement() {
    Token head = expect_ident();
    if (head.text == "check") return check_statement(head.loc);
    if (head.text == "scan") return scan_statement(head.loc);
    if (head.text == "export") return export_statement(head.loc);
    Stmt s;
    s.kind = Stmt::Kind::define;
    s.loc = head.loc;
    s.name = head.text;
    expect_sym("=");
    s.expr = expression();
    expect_sym(";");
    return s;
  }

  Stmt check_statement(SourceLoc loc) {
    Stmt s;
    s.kind = Stmt::Kind::check;
    s.loc = loc;
    Token kind = expect_ident();
    if (kind.text == "weil")
      s.check_kind = CheckKind::weil;
    else if (kind.text == "regular")
      s.check_kind = CheckKind::regular;
    else if (kind.text == "aut")
      s.check_kind = CheckKind::aut;
    else if (kind.text == "jet")
      s.check_kind = CheckKind::jet;
    else
      fail(errc::syntax_error,
           "at " + kind.loc.str() + ": expected one of weil|regular|aut|jet, found '" + kind.text + "'");
    s.first = expression();
    s.second = expression();
    expect_sym(";");
    return s;
  }

  Stmt scan_statement(SourceLoc loc) {
    Stmt s;
    s.kind = Stmt::Kind::scan;
    s.loc = loc;
    Token what = expect_ident();
    if (what.text != "truncated")
      fail(errc::syntax_error, "at " + what.loc.str() + ": expected 'truncated', found '" + what.text + "'");
    Token m = expect_ident();
    if (m.text != "m") fail(errc::syntax_error, "at " + m.loc.str() + ": expected 'm'");
    expect_sym("<=");
    s.m_max = expect_int();
    Token l = expect_ident();
    if (l.text != "l") fail(errc::syntax_error, "at " + l.loc.str() + ": expected 'l'");
    expect_sym("<=");
    s.l_max = expect_int();
    expect_sym(";");
    return s;
  }

  Stmt export_statement(SourceLoc loc) {
    Stmt s;
    s.kind = Stmt::Kind::export_binding;
    s.loc = loc;
    s.name = expect_ident().text;
    if (lex_.peek().kind == Token::Kind::string)
      s.path = lex_.next().text;
    else if (lex_.peek().kind == Token::Kind::ident)
      s.path = lex_.next().text;
    else
      error_at(lex_.peek().loc, "a path (quoted string or bare name)");
    expect_sym(";");
    return s;
  }

  ExprPtr expression() {
    if (lex_.peek().kind != Token::Kind::ident) error_at(lex_.peek().loc, "an expression");
    Token head = lex_.next();
    auto node = std::make_shared<Expr>();
    node->loc = head.loc;
    if (head.text == "truncated") {
      node->kind = Expr::Kind::truncated;
      expect_sym("(");
      if (lex_.peek().kind == Token::Kind::ident) {
        node->named_args = true;
        Token m = expect_ident();
        if (m.text != "m") fail(errc::syntax_error, "at " + m.loc.str() + ": expected 'm='");
        expect_sym("=");
        node->m = expect_int();
        expect_sym(",");
        Token l = expect_ident();
        if (l.text != "l") fail(errc::syntax_error, "at " + l.loc.str() + ": expected 'l='");
        expect_sym("=");
        node->l = expect_int();
      } else {
        node->m = expect_int();
        expect_sym(",");
        node->l = expect_int();
      }
      expect_sym(")");
      return node;
    }
    if (head.text == "quotient" || head.text == "ann") {
      node->kind = head.text == "quotient" ? Expr::Kind::quotient : Expr::Kind::ann;
      expect_sym("(");
      node->args.push_back(expression());
      expect_sym(",");
      node->args.push_back(expression());
      expect_sym(")");
      return node;
    }
    if (head.text == "mpow") {
      node->kind = Expr::Kind::mpow;
      expect_sym("(");
      node->args.push_back(expression());
      expect_sym(",");
      node->power = expect_int();
      expect_sym(")");
      return node;
    }
    if (head.text == "ideal" || head.text == "point") {
      node->kind = head.text == "ideal" ? Expr::Kind::ideal_span : Expr::Kind::point;
      expect_sym("(");
      node->args.push_back(expression());
      expect_sym(";");
      if (!peek_sym(")")) {
        node->polys.push_back(poly());
        while (peek_sym(",")) {
          lex_.next();
          node->polys.push_back(poly());
        }
      }
      expect_sym(")");
      return node;
    }
    if (head.text == "jet") {
      node->kind = Expr::Kind::jet;
      expect_sym("(");
      node->args.push_back(expression());
      expect_sym(")");
      return node;
    }
    node->kind = Expr::Kind::name;
    node->name = head.text;
    if (peek_sym("("))
      fail(errc::syntax_error, "at " + head.loc.str() + ": unknown function '" + head.text +
                                   "' (expected truncated|quotient|mpow|ideal|ann|point|jet)");
    return node;
  }

  PolyExprPtr poly() {
    SourceLoc loc = lex_.peek().loc;
    bool negate = false;
    if (peek_sym("-")) {
      lex_.next();
      negate = true;
    }
    PolyExprPtr node = term();
    if (negate) {
      auto neg = std::make_shared<PolyExpr>();
      neg->kind = PolyExpr::Kind::neg;
      neg->lhs = node;
      neg->loc = loc;
      node = neg;
    }
    while (peek_sym("+") || peek_sym("-")) {
      bool add = lex_.next().text == "+";
      auto bin = std::make_shared<PolyExpr>();
      bin->kind = add ? PolyExpr::Kind::add : PolyExpr::Kind::sub;
      bin->lhs = node;
      bin->rhs = term();
      bin->loc = loc;
      node = bin;
    }
    return node;
  }

  PolyExprPtr term() {
    PolyExprPtr node = factor();
    while (peek_sym("*")) {
      SourceLoc loc = lex_.next().loc;
      auto bin = std::make_shared<PolyExpr>();
      bin->kind = PolyExpr::Kind::mul;
      bin->lhs = node;
      bin->rhs = factor();
      bin->loc = loc;
      node = bin;
    }
    return node;
  }

  PolyExprPtr factor() {
    PolyExprPtr node = atom();
    if (peek_sym("^")) {
      SourceLoc loc = lex_.next().loc;
      auto pow = std::make_shared<PolyExpr>();
      pow->kind = PolyExpr::Kind::pow;
      pow->lhs = node;
      pow->exponent = expect_int();
      pow->loc = loc;
      node = pow;
    }
    return node;
  }

  PolyExprPtr atom() {
    auto node = std::make_shared<PolyExpr>();
    node->loc = lex_.peek().loc;
    if (lex_.peek().kind == Token::Kind::integer) {
      long num = expect_int();
      long den = 1;
      if (peek_sym("/")) {
        lex_.next();
        den = expect_int();
        require(den != 0, errc::syntax_error, "at " + node->loc.str() + ": zero denominator");
      }
      node->kind = PolyExpr::Kind::number;
      node->number = Rat(num, den);
      node->number.canonicalize();
      return node;
    }
    if (lex_.peek().kind == Token::Kind::ident) {
      node->kind = PolyExpr::Kind::var;
      node->var = lex_.next().text;
      return node;
    }
    if (peek_sym("(")) {
      lex_.next();
      PolyExprPtr inner = poly();
      expect_sym(")");
      return inner;
    }
    error_at(node->loc, "a number, a generator name or '('");
  }

  Lexer lex_;
};

}  // namespace script

inline Program parse_program(std::string_view text) { return script::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Pretty printer (parse . print is the identity on syntax trees)
// ---------------------------------------------------------------------------

namespace script {

inline void print_poly(std::ostringstream& out, const PolyExprPtr& p, int parent_prec) {
  // precedence: sum = 0, product = 1, power/atom = 2
  switch (p->kind) {
    case PolyExpr::Kind::number:
      out << rat_to_string(p->number);
      return;
    case PolyExpr::Kind::var:
      out << p->var;
      return;
    case PolyExpr::Kind::neg: {
      if (parent_prec > 0) out << "(";
      out << "-";
      print_poly(out, p->lhs, 1);
      if (parent_prec > 0) out << ")";
      return;
    }
    case PolyExpr::Kind::add:
    case PolyExpr::Kind::sub: {
      if (parent_prec > 0) out << "(";
      print_poly(out, p->lhs, 0);
      out << (p->kind == PolyExpr::Kind::add ? " + " : " - ");
      print_poly(out, p->rhs, 1);  // right operand of '-' must bind tighter
      if (parent_prec > 0) out << ")";
      return;
    }
    case PolyExpr::Kind::mul: {
      if (parent_prec > 1) out << "(";
      print_poly(out, p->lhs, 1);
      out << "*";
      print_poly(out, p->rhs, 2);
      if (parent_prec > 1) out << ")";
      return;
    }
    case PolyExpr::Kind::pow: {
      bool atom = p->lhs->kind == PolyExpr::Kind::number || p->lhs->kind == PolyExpr::Kind::var;
      if (!atom) out << "(";
      print_poly(out, p->lhs, 0);
      if (!atom) out << ")";
      out << "^" << p->exponent;
      return;
    }
  }
}

inline void print_expr(std::ostringstream& out, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::truncated:
      if (e->named_args)
        out << "truncated(m=" << e->m << ", l=" << e->l << ")";
      else
        out << "truncated(" << e->m << ", " << e->l << ")";
      return;
    case Expr::Kind::quotient:
    case Expr::Kind::ann:
      out << (e->kind == Expr::Kind::quotient ? "quotient(" : "ann(");
      print_expr(out, e->args[0]);
      out << ", ";
      print_expr(out, e->args[1]);
      out << ")";
      return;
    case Expr::Kind::mpow:
      out << "mpow(";
      print_expr(out, e->args[0]);
      out << ", " << e->power << ")";
      return;
    case Expr::Kind::ideal_span:
    case Expr::Kind::point: {
      out << (e->kind == Expr::Kind::ideal_span ? "ideal(" : "point(");
      print_expr(out, e->args[0]);
      out << "; ";
      for (std::size_t i = 0; i < e->polys.size(); ++i) {
        if (i) out << ", ";
        print_poly(out, e->polys[i], 0);
      }
      out << ")";
      return;
    }
    case Expr::Kind::jet:
      out << "jet(";
      print_expr(out, e->args[0]);
      out << ")";
      return;
    case Expr::Kind::name:
      out << e->name;
      return;
  }
}

}  // namespace script

inline std::string print_program(const Program& prog) {
  std::ostringstream out;
  for (const Stmt& s : prog.statements) {
    switch (s.kind) {
      case Stmt::Kind::define:
        out << s.name << " = ";
        script::print_expr(out, s.expr);
        out << ";\n";
        break;
      case Stmt::Kind::check:
        out << "check " << check_kind_name(s.check_kind) << " ";
        script::print_expr(out, s.first);
        out << " ";
        script::print_expr(out, s.second);
        out << ";\n";
        break;
      case Stmt::Kind::scan:
        out << "scan truncated m <= " << s.m_max << " l <= " << s.l_max << ";\n";
        break;
      case Stmt::Kind::export_binding:
        out << "export " << s.name << " \"" << s.path << "\";\n";
        break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Structural equality (locations ignored)
// ---------------------------------------------------------------------------

inline bool equal(const PolyExprPtr& a, const PolyExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PolyExpr::Kind::number: return a->number == b->number;
    case PolyExpr::Kind::var: return a->var == b->var;
    case PolyExpr::Kind::neg: return equal(a->lhs, b->lhs);
    case PolyExpr::Kind::add:
    case PolyExpr::Kind::sub:
    case PolyExpr::Kind::mul: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case PolyExpr::Kind::pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
  }
  return false;
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->args.size() != b->args.size() || a->polys.size() != b->polys.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  for (std::size_t i = 0; i < a->polys.size(); ++i)
    if (!equal(a->polys[i], b->polys[i])) return false;
  switch (a->kind) {
    case Expr::Kind::truncated: return a->m == b->m && a->l == b->l && a->named_args == b->named_args;
    case Expr::Kind::mpow: return a->power == b->power;
    case Expr::Kind::name: return a->name == b->name;
    default: return true;
  }
}

inline bool equal(const Program& a, const Program& b) {
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    const Stmt& x = a.statements[i];
    const Stmt& y = b.statements[i];
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case Stmt::Kind::define:
        if (x.name != y.name || !equal(x.expr, y.expr)) return false;
        break;
      case Stmt::Kind::check:
        if (x.check_kind != y.check_kind || !equal(x.first, y.first) || !equal(x.second, y.second)) return false;
        break;
      case Stmt::Kind::scan:
        if (x.m_max != y.m_max || x.l_max != y.l_max) return false;
        break;
      case Stmt::Kind::export_binding:
        if (x.name != y.name || x.path != y.path) return false;
        break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

using ScriptValue = std::variant<AlgebraPtr, Ideal, NearPoint, Jet>;

inline const char* value_kind_name(const ScriptValue& v) {
  if (std::holds_alternative<AlgebraPtr>(v)) return "algebra";
  if (std::holds_alternative<Ideal>(v)) return "ideal";
  if (std::holds_alternative<NearPoint>(v)) return "point";
  return "jet";
}

struct ExecOptions {
  enum class Format { text, json };
  Format format = Format::text;
};

struct ExecResult {
  int exit_code = 0;  // 0: all checks hold, 1: some check failed, 2: evaluation error
  std::string text;
  Json output = Json::array();
};

namespace script {

class Interpreter {
 public:
  Interpreter() = default;
  explicit Interpreter(std::map<std::string, ScriptValue> bindings) : env_(std::move(bindings)) {}

  ScriptValue evaluate(const ExprPtr& e) { return eval(e); }

  ExecResult run(const Program& prog) {
    ExecResult result;
    bool any_failed = false;
    for (const Stmt& s : prog.statements) {
      try {
        switch (s.kind) {
          case Stmt::Kind::define: {
            ScriptValue v = eval(s.expr);
            env_.erase(s.name);
            env_.emplace(s.name, v);
            Json entry{{"kind", "define"}, {"name", s.name}, {"type", value_kind_name(v)}};
            result.output.push_back(entry);
            break;
          }
          case Stmt::Kind::check: {
            AlgebraPtr A = expect_algebra(s.first);
            Ideal I = expect_ideal(s.second, A);
            AffineReport report = run_check(s.check_kind, A, I);
            if (!report.holds) any_failed = true;
            result.text += "check " + std::string(check_kind_name(s.check_kind)) + ": " + report_to_text(report);
            result.output.push_back(Json{{"kind", "check"},
                                         {"check", check_kind_name(s.check_kind)},
                                         {"report", report_to_json(report)}});
            break;
          }
          case Stmt::Kind::scan: {
            ScanResult scan = scan_truncated(s.m_max, s.l_max);
            if (scan.disagreements > 0) any_failed = true;
            result.text += scan_to_text(scan);
            result.output.push_back(Json{{"kind", "scan"}, {"scan", scan_to_json(scan)}});
            break;
          }
          case Stmt::Kind::export_binding: {
            auto it = env_.find(s.name);
            require(it != env_.end(), errc::name_error,
                    "at " + s.loc.str() + ": undefined name '" + s.name + "'");
            Json doc = serialize(it->second);
            std::ofstream out(s.path);
            require(out.good(), errc::io_error, "cannot open '" + s.path + "' for writing");
            out << doc.dump(2) << "\n";
            result.text += "exported " + s.name + " to " + s.path + "\n";
            result.output.push_back(Json{{"kind", "export"}, {"name", s.name}, {"path", s.path}});
            break;
          }
        }
      } catch (const Error& e) {
        result.text += std::string("error: statement at ") + s.loc.str() + ": " + e.what() + "\n";
        result.output.push_back(Json{{"kind", "error"}, {"at", s.loc.str()}, {"message", e.what()}});
        result.exit_code = 2;
        return result;
      }
    }
    result.exit_code = any_failed ? 1 : 0;
    return result;
  }

 private:
  static AffineReport run_check(CheckKind kind, const AlgebraPtr& A, const Ideal& I) {
    switch (kind) {
      case CheckKind::weil: return weil_affine(A, I);
      case CheckKind::regular: return regular_affine(A, I);
      case CheckKind::aut: return aut_affine(A, I);
      case CheckKind::jet: return jet_affine(A, I);
    }
    fail(errc::type_error, "unreachable check kind");
  }

  static Json serialize(const ScriptValue& v) {
    if (const auto* A = std::get_if<AlgebraPtr>(&v)) return algebra_to_json(*A);
    if (const auto* I = std::get_if<Ideal>(&v)) return ideal_to_json(*I);
    if (const auto* p = std::get_if<NearPoint>(&v)) return near_point_to_json(*p);
    return jet_to_json(std::get<Jet>(v));
  }

  ScriptValue eval(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::truncated:
        return truncated_algebra(e->m, e->l);
      case Expr::Kind::quotient: {
        AlgebraPtr A = expect_algebra(e->args[0]);
        Ideal I = expect_ideal(e->args[1], A);
        return quotient_algebra(A, I).algebra;
      }
      case Expr::Kind::mpow: {
        AlgebraPtr A = expect_algebra(e->args[0]);
        return maximal_power(A, e->power);
      }
      case Expr::Kind::ann: {
        AlgebraPtr A = expect_algebra(e->args[0]);
        Ideal I = expect_ideal(e->args[1], A);
        return annihilator(A, I);
      }
      case Expr::Kind::ideal_span: {
        AlgebraPtr A = expect_algebra(e->args[0]);
        std::vector<Element> gens;
        for (const PolyExprPtr& p : e->polys) gens.push_back(eval_poly(p, A));
        return ideal_span(A, gens);
      }
      case Expr::Kind::point: {
        AlgebraPtr A = expect_algebra(e->args[0]);
        std::vector<Element> images;
        for (const PolyExprPtr& p : e->polys) images.push_back(eval_poly(p, A));
        int n = static_cast<int>(images.size());
        return make_near_point(A, n, std::move(images));
      }
      case Expr::Kind::jet: {
        ScriptValue v = eval(e->args[0]);
        require(std::holds_alternative<NearPoint>(v), errc::type_error,
                "at " + e->loc.str() + ": point expected, " + value_kind_name(v) + " given");
        return jet_of(std::get<NearPoint>(v));
      }
      case Expr::Kind::name: {
        auto it = env_.find(e->name);
        require(it != env_.end(), errc::name_error, "at " + e->loc.str() + ": undefined name '" + e->name + "'");
        return it->second;
      }
    }
    fail(errc::type_error, "unreachable expression kind");
  }

  AlgebraPtr expect_algebra(const ExprPtr& e) {
    ScriptValue v = eval(e);
    require(std::holds_alternative<AlgebraPtr>(v), errc::type_error,
            "at " + e->loc.str() + ": algebra expected, " + value_kind_name(v) + " given");
    return std::get<AlgebraPtr>(v);
  }

  Ideal expect_ideal(const ExprPtr& e, const AlgebraPtr& A) {
    ScriptValue v = eval(e);
    require(std::holds_alternative<Ideal>(v), errc::type_error,
            "at " + e->loc.str() + ": ideal expected, " + value_kind_name(v) + " given");
    Ideal I = std::get<Ideal>(v);
    require(same_algebra(I.algebra, A), errc::algebra_mismatch,
            "at " + e->loc.str() + ": ideal belongs to a different algebra");
    return I;
  }

  Element eval_poly(const PolyExprPtr& p, const AlgebraPtr& A) {
    switch (p->kind) {
      case PolyExpr::Kind::number:
        return el_scalar(A, p->number);
      case PolyExpr::Kind::var: {
        const auto& names = A->presentation.gen_names;
        for (std::size_t g = 0; g < names.size(); ++g)
          if (names[g] == p->var) return {A, A->presentation.generators[g]};
        fail(errc::name_error, "at " + p->loc.str() + ": '" + p->var + "' is not a generator of the algebra");
      }
      case PolyExpr::Kind::neg:
        return Rat(-1) * eval_poly(p->lhs, A);
      case PolyExpr::Kind::add:
        return eval_poly(p->lhs, A) + eval_poly(p->rhs, A);
      case PolyExpr::Kind::sub:
        return eval_poly(p->lhs, A) - eval_poly(p->rhs, A);
      case PolyExpr::Kind::mul:
        return eval_poly(p->lhs, A) * eval_poly(p->rhs, A);
      case PolyExpr::Kind::pow:
        return el_pow(eval_poly(p->lhs, A), p->exponent);
    }
    fail(errc::type_error, "unreachable polynomial kind");
  }

  std::map<std::string, ScriptValue> env_;
};

}  // namespace script

inline ExecResult execute(const Program& prog, const ExecOptions& options = {}) {
  (void)options;
  return script::Interpreter().run(prog);
}

/// Parses a single expression (the CLI's --algebra / --ideal mini-language).
inline ExprPtr parse_expression(std::string_view text) { return script::Parser(text).parse_single_expression(); }

/// Evaluates an expression against pre-bound names.
inline ScriptValue evaluate_expression(const ExprPtr& e, std::map<std::string, ScriptValue> bindings = {}) {
  return script::Interpreter(std::move(bindings)).evaluate(e);
}

}  // namespace weilforge
