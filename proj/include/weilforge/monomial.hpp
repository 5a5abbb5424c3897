#pragma once

#include <string>
#include <vector>

namespace weilforge {

/// Exponent vector of a monomial.
using Expo = std::vector<int>;

inline int total_degree(const Expo& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

/// Graded lexicographic order: lower total degree first; within a degree the
/// variable-1-heavy monomials come first (x1^2, x1*x2, x2^2, ...). This is the
/// canonical basis order of the whole library.
inline bool grlex_less(const Expo& a, const Expo& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

struct GrlexLess {
  bool operator()(const Expo& a, const Expo& b) const { return grlex_less(a, b); }
};

/// All monomials in `nvars` variables of total degree <= `max_degree`,
/// in grlex order.
inline std::vector<Expo> enumerate_monomials(int nvars, int max_degree) {
  std::vector<Expo> out;
  Expo cur(static_cast<std::size_t>(nvars), 0);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == nvars - 1) {
      cur[static_cast<std::size_t>(var)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(var)] = e;
      self(self, var + 1, remaining - e);
    }
  };
  for (int d = 0; d <= max_degree; ++d) {
    if (nvars == 0) {
      if (d == 0) out.push_back({});
      continue;
    }
    rec(rec, 0, d);
  }
  return out;
}

inline std::string monomial_label(const Expo& e, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

/// Number of monomials of degree <= l in m variables; small exact binomial.
inline long long monomial_count(int m, int l) {
  long long n = 1;
  for (int i = 1; i <= m; ++i) n = n * (l + i) / i;
  return n;
}

}  // namespace weilforge
