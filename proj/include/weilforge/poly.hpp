#pragma once

#include <map>
#include <string>
#include <vector>

#include "weilforge/algebra.hpp"
#include "weilforge/monomial.hpp"

namespace weilforge {

/// Sparse multivariate polynomial over Q in a fixed number of variables,
/// terms kept in grlex order. This models the function algebra of R^n at desk
/// scale: near-point evaluation only ever sees the height-truncated Taylor
/// data, so polynomials are lossless for everything the library computes.
struct Poly {
  int nvars = 0;
  std::map<Expo, Rat, GrlexLess> terms;

  static Poly zero(int n) { return {n, {}}; }
  static Poly constant(int n, const Rat& c) {
    Poly p{n, {}};
    if (!is_zero(c)) p.terms[Expo(static_cast<std::size_t>(n), 0)] = c;
    return p;
  }
  static Poly variable(int n, int i) {
    Poly p{n, {}};
    Expo e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.terms[e] = 1;
    return p;
  }
  static Poly monomial(int n, Expo e, const Rat& c) {
    Poly p{n, {}};
    if (!is_zero(c)) p.terms[std::move(e)] = c;
    return p;
  }

  bool is_zero_poly() const { return terms.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, total_degree(e));
    return d;
  }

  void add_term(const Expo& e, const Rat& c) {
    if (is_zero(c)) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(e, c);
    } else {
      it->second += c;
      if (is_zero(it->second)) terms.erase(it);
    }
  }
};

inline bool operator==(const Poly& a, const Poly& b) { return a.nvars == b.nvars && a.terms == b.terms; }

inline Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [e, c] : b.terms) out.add_term(e, c);
  return out;
}

inline Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [e, c] : b.terms) out.add_term(e, -c);
  return out;
}

inline Poly operator*(const Rat& s, const Poly& a) {
  Poly out{a.nvars, {}};
  if (is_zero(s)) return out;
  for (const auto& [e, c] : a.terms) out.terms[e] = s * c;
  return out;
}

inline Poly operator*(const Poly& a, const Poly& b) {
  Poly out{a.nvars, {}};
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      Expo e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

inline Poly poly_pow(const Poly& a, int n) {
  Poly out = Poly::constant(a.nvars, 1);
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

/// Formal partial derivative.
inline Poly derivative(const Poly& p, int var) {
  Poly out{p.nvars, {}};
  for (const auto& [e, c] : p.terms) {
    int exp = e[static_cast<std::size_t>(var)];
    if (exp == 0) continue;
    Expo d = e;
    d[static_cast<std::size_t>(var)] -= 1;
    out.add_term(d, Rat(exp) * c);
  }
  return out;
}

/// Substitution of algebra elements for the variables; the algebra morphism
/// Poly(R^n) -> A attached to a tuple of images.
inline Element poly_eval(const Poly& p, const AlgebraPtr& A, const std::vector<Element>& images) {
  require(static_cast<int>(images.size()) == p.nvars, errc::algebra_mismatch,
          "wrong number of images for polynomial evaluation");
  Element out = el_zero(A);
  for (const auto& [e, c] : p.terms) {
    Element term = el_scalar(A, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int rep = 0; rep < e[i]; ++rep) term = term * images[i];
    out = out + term;
  }
  return out;
}

inline Rat poly_eval_rational(const Poly& p, const QVec& point) {
  Rat out(0);
  for (const auto& [e, c] : p.terms) {
    Rat term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int rep = 0; rep < e[i]; ++rep) term *= point[i];
    out += term;
  }
  return out;
}

inline std::string to_string(const Poly& p, const std::vector<std::string>& names) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms) {
    Rat abs = c < 0 ? Rat(-c) : c;
    std::string mono = monomial_label(e, names);
    std::string term;
    if (mono == "1")
      term = rat_to_string(abs);
    else if (abs == 1)
      term = mono;
    else
      term = rat_to_string(abs) + "*" + mono;
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out;
}

inline std::vector<std::string> default_var_names(int n) {
  static const char* few[] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(n <= 3 ? few[i] : "x" + std::to_string(i + 1));
  return names;
}

}  // namespace weilforge
