#pragma once

// Deterministic random script corpus shared by the unit and acceptance
// suites: round-trip material for the parser and printer.

#include <memory>
#include <string>
#include <vector>

#include "weilforge/script.hpp"

namespace weilforge::testing {

inline PolyExprPtr corpus_num(const Rat& r) {
  auto p = std::make_shared<PolyExpr>();
  p->kind = PolyExpr::Kind::number;
  p->number = r;
  return p;
}

inline PolyExprPtr corpus_var(const std::string& v) {
  auto p = std::make_shared<PolyExpr>();
  p->kind = PolyExpr::Kind::var;
  p->var = v;
  return p;
}

inline PolyExprPtr random_poly_expr(Rng& rng, int depth) {
  if (depth == 0 || rng.chance(1, 3)) {
    if (rng.chance(1, 2)) return corpus_var(rng.chance(1, 2) ? "xi" : "xi1");
    Rat q(rng.range(0, 7), rng.range(1, 3));
    q.canonicalize();
    return corpus_num(q);
  }
  auto p = std::make_shared<PolyExpr>();
  switch (rng.below(5)) {
    case 0:
    case 1:
    case 2:
      p->kind = rng.below(2) == 0 ? PolyExpr::Kind::add : (rng.below(2) == 0 ? PolyExpr::Kind::sub : PolyExpr::Kind::mul);
      p->lhs = random_poly_expr(rng, depth - 1);
      p->rhs = random_poly_expr(rng, depth - 1);
      return p;
    case 3:
      p->kind = PolyExpr::Kind::pow;
      p->lhs = random_poly_expr(rng, depth - 1);
      p->exponent = rng.range(0, 4);
      return p;
    default:
      p->kind = PolyExpr::Kind::neg;
      p->lhs = random_poly_expr(rng, depth - 1);
      return p;
  }
}

inline ExprPtr corpus_name(const std::string& n) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::name;
  e->name = n;
  return e;
}

inline ExprPtr random_script_expr(Rng& rng, int depth, const std::vector<std::string>& names) {
  auto e = std::make_shared<Expr>();
  if (depth == 0) {
    if (!names.empty() && rng.chance(1, 2)) return corpus_name(names[rng.below(names.size())]);
    e->kind = Expr::Kind::truncated;
    e->named_args = rng.chance(1, 2);
    e->m = rng.range(1, 3);
    e->l = rng.range(0, 4);
    return e;
  }
  switch (rng.below(7)) {
    case 0:
      e->kind = Expr::Kind::truncated;
      e->named_args = rng.chance(1, 2);
      e->m = rng.range(1, 3);
      e->l = rng.range(0, 4);
      return e;
    case 1:
      e->kind = Expr::Kind::quotient;
      e->args = {random_script_expr(rng, depth - 1, names), random_script_expr(rng, depth - 1, names)};
      return e;
    case 2:
      e->kind = Expr::Kind::mpow;
      e->args = {random_script_expr(rng, depth - 1, names)};
      e->power = rng.range(0, 5);
      return e;
    case 3: {
      e->kind = Expr::Kind::ideal_span;
      e->args = {random_script_expr(rng, depth - 1, names)};
      int count = rng.range(0, 3);
      for (int i = 0; i < count; ++i) e->polys.push_back(random_poly_expr(rng, 3));
      return e;
    }
    case 4:
      e->kind = Expr::Kind::ann;
      e->args = {random_script_expr(rng, depth - 1, names), random_script_expr(rng, depth - 1, names)};
      return e;
    case 5: {
      e->kind = Expr::Kind::point;
      e->args = {random_script_expr(rng, depth - 1, names)};
      int count = rng.range(1, 3);
      for (int i = 0; i < count; ++i) e->polys.push_back(random_poly_expr(rng, 2));
      return e;
    }
    default:
      e->kind = Expr::Kind::jet;
      e->args = {random_script_expr(rng, depth - 1, names)};
      return e;
  }
}

inline Program random_script_program(Rng& rng) {
  Program prog;
  std::vector<std::string> names;
  int count = rng.range(1, 6);
  for (int i = 0; i < count; ++i) {
    Stmt s;
    switch (rng.below(4)) {
      case 0:
      case 1: {
        s.kind = Stmt::Kind::define;
        s.name = "v" + std::to_string(i);
        s.expr = random_script_expr(rng, 2, names);
        names.push_back(s.name);
        break;
      }
      case 2: {
        s.kind = Stmt::Kind::check;
        s.check_kind = static_cast<CheckKind>(rng.below(4));
        s.first = random_script_expr(rng, 1, names);
        s.second = random_script_expr(rng, 1, names);
        break;
      }
      default: {
        if (rng.chance(1, 2)) {
          s.kind = Stmt::Kind::scan;
          s.m_max = rng.range(1, 3);
          s.l_max = rng.range(1, 4);
        } else if (!names.empty()) {
          s.kind = Stmt::Kind::export_binding;
          s.name = names[rng.below(names.size())];
          s.path = "out_" + std::to_string(i) + ".json";
        } else {
          s.kind = Stmt::Kind::scan;
          s.m_max = 1;
          s.l_max = 2;
        }
        break;
      }
    }
    prog.statements.push_back(std::move(s));
  }
  return prog;
}

}  // namespace weilforge::testing
