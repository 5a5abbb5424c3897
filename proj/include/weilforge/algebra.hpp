#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weilforge/error.hpp"
#include "weilforge/linalg.hpp"
#include "weilforge/monomial.hpp"
#include "weilforge/rational.hpp"

namespace weilforge {

class WeilAlgebra;
using AlgebraPtr = std::shared_ptr<const WeilAlgebra>;

/// Sparse coordinate vector, sorted by index.
using SparseVec = std::vector<std::pair<int, Rat>>;

inline QVec sparse_to_dense(const SparseVec& s, int n) {
  QVec v = vec_zero(n);
  for (const auto& [k, c] : s) v[static_cast<std::size_t>(k)] = c;
  return v;
}

/// Deterministic polynomial-style rendering of a coordinate vector over the
/// given basis labels, e.g. "2 + 3*xi - 1/2*xi^2".
inline std::string poly_string(const QVec& coords, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const Rat& c = coords[i];
    if (is_zero(c)) continue;
    Rat abs = c < 0 ? Rat(-c) : c;
    std::string term;
    if (i == 0) {
      term = rat_to_string(abs);
    } else if (abs == 1) {
      term = labels[i];
    } else {
      term = rat_to_string(abs) + "*" + labels[i];
    }
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

/// Constructions refuse algebras above this dimension; every verdict the
/// library produces is checkable far below it.
inline constexpr int kDimCap = 5000;

/// Distinguished generating set, plus (when available) an expression of each
/// basis element as a monomial in the generators. Truncated algebras and
/// their quotients carry the monomial form; algebras loaded from raw tables
/// only carry the generating set.
struct Presentation {
  std::vector<std::string> gen_names;
  std::vector<QVec> generators;     // coordinates in the ambient algebra
  std::vector<Expo> basis_monomials;  // empty when no monomial form is known

  bool has_monomial_basis() const { return !basis_monomials.empty(); }
};

/// Finite-dimensional local commutative unital algebra over Q, represented by
/// structure constants on a fixed basis. Invariants established at
/// construction time and relied on everywhere:
///   - basis element 0 is the unit;
///   - basis elements 1..dim-1 span the maximal ideal (so the coordinate at
///     index 0 of an element is its augmentation);
///   - mpowers[k] is the reduced echelon basis of m^k, with m^0 = A and
///     m^(height+1) = 0.
/// Values are immutable after construction and shared through AlgebraPtr.
class WeilAlgebra {
 public:
  std::vector<std::string> labels;
  std::vector<SparseVec> mul;  // dim*dim entries, mul[i*dim+j] = e_i * e_j
  std::vector<int> maximal_basis;
  std::vector<RowSpace> mpowers;  // size height + 2
  int height = 0;
  int width = 0;
  Presentation presentation;
  std::optional<std::pair<int, int>> truncated_params;  // (width m, height l) for R^l_m
  std::uint64_t hash = 0;

  int dim() const { return static_cast<int>(labels.size()); }

  const SparseVec& basis_product(int i, int j) const {
    return mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(labels.size()) + static_cast<std::size_t>(j)];
  }

  /// Echelon basis of m^k (k >= 0); empty space above the height.
  const RowSpace& maximal_power_space(int k) const {
    int idx = k > height + 1 ? height + 1 : k;
    return mpowers[static_cast<std::size_t>(idx)];
  }
};

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && a->hash == b->hash);
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

struct Element {
  AlgebraPtr algebra;
  QVec coords;

  bool is_zero_element() const { return vec_is_zero(coords); }
  /// Value of the unique morphism A -> R on this element.
  const Rat& augmentation() const { return coords[0]; }
  bool in_maximal_ideal() const { return is_zero(coords[0]); }
};

inline void require_same_algebra(const Element& a, const Element& b) {
  require(same_algebra(a.algebra, b.algebra), errc::algebra_mismatch, "elements live in different algebras");
}

inline Element el_zero(const AlgebraPtr& A) { return {A, vec_zero(A->dim())}; }
inline Element el_basis(const AlgebraPtr& A, int i) { return {A, vec_unit(A->dim(), i)}; }
inline Element el_unit(const AlgebraPtr& A) { return el_basis(A, 0); }
inline Element el_scalar(const AlgebraPtr& A, const Rat& c) {
  Element e = el_zero(A);
  e.coords[0] = c;
  return e;
}

inline Element operator+(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  Element out = a;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += b.coords[i];
  return out;
}

inline Element operator-(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  Element out = a;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] -= b.coords[i];
  return out;
}

inline Element operator*(const Rat& c, const Element& a) {
  Element out = a;
  for (Rat& x : out.coords) x *= c;
  return out;
}

inline Element operator*(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  const WeilAlgebra& A = *a.algebra;
  Element out = el_zero(a.algebra);
  int d = A.dim();
  for (int i = 0; i < d; ++i) {
    const Rat& ai = a.coords[static_cast<std::size_t>(i)];
    if (is_zero(ai)) continue;
    for (int j = 0; j < d; ++j) {
      const Rat& bj = b.coords[static_cast<std::size_t>(j)];
      if (is_zero(bj)) continue;
      Rat f = ai * bj;
      for (const auto& [k, c] : A.basis_product(i, j)) out.coords[static_cast<std::size_t>(k)] += f * c;
    }
  }
  return out;
}

inline bool operator==(const Element& a, const Element& b) {
  return same_algebra(a.algebra, b.algebra) && a.coords == b.coords;
}

inline Element el_pow(const Element& a, int n) {
  Element out = el_unit(a.algebra);
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

inline std::string to_string(const Element& e) { return poly_string(e.coords, e.algebra->labels); }

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

struct Morphism {
  AlgebraPtr source;
  AlgebraPtr target;
  QMat matrix;  // target-dim x source-dim

  Element apply(const Element& e) const {
    require(same_algebra(e.algebra, source), errc::algebra_mismatch, "morphism applied outside its source");
    return {target, matrix.apply(e.coords)};
  }
};

inline Morphism identity_morphism(const AlgebraPtr& A) { return {A, A, QMat::identity(A->dim())}; }

inline Morphism compose(const Morphism& g, const Morphism& f) {
  require(same_algebra(f.target, g.source), errc::algebra_mismatch, "morphism composition mismatch");
  return {f.source, g.target, g.matrix.mul(f.matrix)};
}

/// Unit to unit and multiplicative on all basis pairs.
inline bool is_algebra_morphism(const Morphism& phi) {
  int ds = phi.source->dim();
  if (phi.matrix.apply(vec_unit(ds, 0)) != vec_unit(phi.target->dim(), 0)) return false;
  std::vector<Element> images;
  images.reserve(static_cast<std::size_t>(ds));
  for (int i = 0; i < ds; ++i) images.push_back(phi.apply(el_basis(phi.source, i)));
  for (int i = 0; i < ds; ++i)
    for (int j = i; j < ds; ++j) {
      Element lhs = phi.apply({phi.source, sparse_to_dense(phi.source->basis_product(i, j), ds)});
      if (!(lhs == images[static_cast<std::size_t>(i)] * images[static_cast<std::size_t>(j)])) return false;
    }
  return true;
}

inline bool is_surjective(const Morphism& phi) { return rank(phi.matrix) == phi.target->dim(); }

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

namespace detail {

inline SparseVec dense_to_sparse(const QVec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_zero(v[i])) s.emplace_back(static_cast<int>(i), v[i]);
  return s;
}

inline QVec sparse_product(const std::vector<SparseVec>& mul, int d, const QVec& a, const QVec& b) {
  QVec out = vec_zero(d);
  for (int i = 0; i < d; ++i) {
    if (is_zero(a[static_cast<std::size_t>(i)])) continue;
    for (int j = 0; j < d; ++j) {
      if (is_zero(b[static_cast<std::size_t>(j)])) continue;
      Rat f = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
      for (const auto& [k, c] : mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)])
        out[static_cast<std::size_t>(k)] += f * c;
    }
  }
  return out;
}

/// x * e_k through the multiplication table, skipping the dense zero scans.
inline QVec sparse_product_basis(const std::vector<SparseVec>& mul, int d, const QVec& x, int k) {
  QVec out = vec_zero(d);
  for (int i = 0; i < d; ++i) {
    const Rat& xi = x[static_cast<std::size_t>(i)];
    if (is_zero(xi)) continue;
    for (const auto& [t, c] : mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)])
      out[static_cast<std::size_t>(t)] += xi * c;
  }
  return out;
}

/// Powers of the span of `max_basis` under the given multiplication:
/// result[k] = basis of m^k, result[0] = all of Q^d, trailing entry empty.
/// Throws NotLocal if the chain does not reach zero.
inline std::vector<RowSpace> power_filtration(const std::vector<SparseVec>& mul, int d,
                                              const std::vector<QVec>& max_basis) {
  std::vector<RowSpace> powers;
  RowSpace full(d);
  for (int i = 0; i < d; ++i) full.insert(vec_unit(d, i));
  powers.push_back(std::move(full));
  RowSpace m1(d);
  m1.insert_all(max_basis);
  RowSpace current = m1;
  while (current.dim() > 0) {
    powers.push_back(current);
    RowSpace next(d);
    for (const QVec& x : current.rows())
      for (const QVec& g : m1.rows()) next.insert(sparse_product(mul, d, x, g));
    require(next.dim() < current.dim(), errc::not_local, "maximal-ideal candidate is not nilpotent");
    current = std::move(next);
  }
  powers.push_back(RowSpace(d));  // the zero space m^(height+1)
  return powers;
}

inline std::uint64_t content_hash(const std::vector<std::string>& labels, const std::vector<SparseVec>& mul) {
  Fnv1a h;
  h.feed("weil-algebra");
  h.feed(std::to_string(labels.size()));
  for (const auto& s : labels) h.feed(s);
  for (std::size_t e = 0; e < mul.size(); ++e)
    for (const auto& [k, c] : mul[e]) {
      h.feed(std::to_string(e));
      h.feed(std::to_string(k));
      h.feed(rat_to_string(c));
    }
  return h.value();
}

inline AlgebraPtr finish_algebra(WeilAlgebra A) {
  A.maximal_basis.clear();
  for (int i = 1; i < A.dim(); ++i) A.maximal_basis.push_back(i);
  std::vector<QVec> mb;
  for (int i : A.maximal_basis) mb.push_back(vec_unit(A.dim(), i));
  A.mpowers = power_filtration(A.mul, A.dim(), mb);
  A.height = static_cast<int>(A.mpowers.size()) - 2;
  A.width = A.height >= 1 ? A.mpowers[1].dim() - A.mpowers[2].dim() : 0;
  A.hash = content_hash(A.labels, A.mul);
  return std::make_shared<const WeilAlgebra>(std::move(A));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Truncated polynomial algebras R^l_m
// ---------------------------------------------------------------------------

/// R^l_m = Q[xi_1..xi_m]/m^(l+1) on the grlex monomial basis. Degenerate
/// parameters (m = 0 or l = 0) produce R.
inline AlgebraPtr truncated_algebra(int m, int l) {
  require(m >= 0 && l >= 0, errc::io_error, "truncated_algebra expects non-negative width and height");
  require(monomial_count(m, l) <= kDimCap, errc::dim_cap_exceeded,
          "truncated algebra of width " + std::to_string(m) + " and height " + std::to_string(l) +
              " exceeds the dimension cap");
  std::vector<std::string> names;
  if (m == 1)
    names.push_back("xi");
  else
    for (int i = 1; i <= m; ++i) names.push_back("xi" + std::to_string(i));

  std::vector<Expo> monos = enumerate_monomials(m, l);
  int d = static_cast<int>(monos.size());
  std::map<Expo, int> index;
  for (int i = 0; i < d; ++i) index[monos[static_cast<std::size_t>(i)]] = i;

  WeilAlgebra A;
  for (const Expo& e : monos) A.labels.push_back(monomial_label(e, names));
  A.mul.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), {});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Expo sum = monos[static_cast<std::size_t>(i)];
      for (std::size_t v = 0; v < sum.size(); ++v) sum[v] += monos[static_cast<std::size_t>(j)][v];
      if (total_degree(sum) <= l)
        A.mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] = {
            {index.at(sum), Rat(1)}};
    }

  A.presentation.gen_names = names;
  if (l >= 1)
    for (int g = 0; g < m; ++g) A.presentation.generators.push_back(vec_unit(d, 1 + g));
  else
    A.presentation.gen_names.clear();  // R carries no generators
  A.presentation.basis_monomials = monos;
  A.truncated_params = {m, l};
  return detail::finish_algebra(std::move(A));
}

/// The base field as a Weil algebra.
inline AlgebraPtr rationals_algebra() { return truncated_algebra(0, 0); }

// ---------------------------------------------------------------------------
// User-supplied multiplication tables
// ---------------------------------------------------------------------------

/// Validates a structure-constant table and produces a Weil algebra: checks
/// commutativity, associativity and that basis element 0 is the unit, then
/// computes the maximal ideal as the nilradical (nullspace of the trace form,
/// exact over Q in characteristic 0) and rejects non-local tables. If the
/// nilradical is not spanned by basis elements 1..d-1, the basis is changed so
/// that the canonical splitting A = Q*1 (+) m_A holds.
inline AlgebraPtr algebra_from_table(const std::vector<std::string>& labels,
                                     const std::vector<std::vector<QVec>>& table) {
  int d = static_cast<int>(labels.size());
  require(d >= 1, errc::io_error, "empty basis");
  require(d <= kDimCap, errc::dim_cap_exceeded, "table exceeds the dimension cap");
  require(static_cast<int>(table.size()) == d, errc::io_error, "structure-constant table has wrong shape");
  for (const auto& row : table) {
    require(static_cast<int>(row.size()) == d, errc::io_error, "structure-constant table has wrong shape");
    for (const auto& v : row)
      require(static_cast<int>(v.size()) == d, errc::io_error, "structure-constant table has wrong shape");
  }

  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      require(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
              errc::not_commutative,
              "products " + labels[static_cast<std::size_t>(i)] + "*" + labels[static_cast<std::size_t>(j)] +
                  " and " + labels[static_cast<std::size_t>(j)] + "*" + labels[static_cast<std::size_t>(i)] +
                  " disagree");
  for (int j = 0; j < d; ++j)
    require(table[0][static_cast<std::size_t>(j)] == vec_unit(d, j), errc::no_unit,
            "basis element 0 does not act as the unit");

  std::vector<SparseVec> mul(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
          detail::dense_to_sparse(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);

  // (e_i e_j) e_k versus e_i (e_j e_k) = (e_j e_k) e_i (commutativity already
  // checked); accumulated sparsely so large sparse tables validate quickly
  auto basis_product_sparse = [&](const QVec& x, int k) {
    SparseRow row;
    for (int i = 0; i < d; ++i) {
      const Rat& xi = x[static_cast<std::size_t>(i)];
      if (is_zero(xi)) continue;
      for (const auto& [t, c] : mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)])
        row.terms.emplace_back(t, xi * c);
    }
    row.normalize();
    return row;
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const QVec& ij = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      for (int k = 0; k < d; ++k) {
        SparseRow lhs = basis_product_sparse(ij, k);
        SparseRow rhs = basis_product_sparse(table[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)], i);
        require(lhs.terms == rhs.terms, errc::not_associative,
                "associativity fails on basis triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                    std::to_string(k) + ")");
      }
    }

  // Nilradical = radical of the trace form T(x, y) = tr(L_{xy}).
  QVec ltrace(static_cast<std::size_t>(d), Rat(0));
  for (int k = 0; k < d; ++k) {
    Rat t(0);
    for (int r = 0; r < d; ++r) t += table[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    ltrace[static_cast<std::size_t>(k)] = t;
  }
  SparseRREF trace_form(d);
  for (int i = 0; i < d; ++i) {
    SparseRow row;
    for (int j = 0; j < d; ++j) {
      Rat t(0);
      for (int k = 0; k < d; ++k) {
        const Rat& c = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        if (!is_zero(c)) t += c * ltrace[static_cast<std::size_t>(k)];
      }
      if (!is_zero(t)) row.terms.emplace_back(j, t);
    }
    trace_form.add_row(std::move(row));
  }
  std::vector<QVec> nilradical = trace_form.nullspace();
  require(static_cast<int>(nilradical.size()) == d - 1, errc::not_local,
          "algebra is not local with residue field Q (nilradical has dimension " +
              std::to_string(nilradical.size()) + ", expected " + std::to_string(d - 1) + ")");

  RowSpace nil(d);
  nil.insert_all(nilradical);
  require(!nil.contains(vec_unit(d, 0)), errc::not_local, "unit lies in the nilradical candidate");

  bool canonical = true;
  for (const QVec& row : nil.rows())
    if (!is_zero(row[0])) canonical = false;
  for (std::size_t i = 0; i < nil.rows().size() && canonical; ++i)
    if (nil.pivots()[i] != static_cast<int>(i) + 1) canonical = false;

  WeilAlgebra A;
  if (canonical) {
    A.labels = labels;
    A.mul = std::move(mul);
  } else {
    // Rebase to {1, n_1, .., n_{d-1}} with n_i the echelon nilradical basis.
    QMat P(d, d);
    P.at(0, 0) = 1;
    for (int i = 1; i < d; ++i)
      for (int r = 0; r < d; ++r) P.at(r, i) = nil.rows()[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(r)];
    QMat Pinv = inverse(P);
    A.labels.push_back(labels[0]);
    for (int i = 1; i < d; ++i)
      A.labels.push_back(poly_string(nil.rows()[static_cast<std::size_t>(i - 1)], labels));
    A.mul.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), {});
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        QVec bi = P.apply(vec_unit(d, i));
        QVec bj = P.apply(vec_unit(d, j));
        QVec prod = Pinv.apply(detail::sparse_product(mul, d, bi, bj));
        A.mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
            detail::dense_to_sparse(prod);
      }
  }

  A.presentation.gen_names.assign(A.labels.begin() + 1, A.labels.end());
  for (int i = 1; i < d; ++i) A.presentation.generators.push_back(vec_unit(d, i));
  return detail::finish_algebra(std::move(A));
}

// ---------------------------------------------------------------------------
// Invariants of an algebra
// ---------------------------------------------------------------------------

/// (height, width): largest h with m^h != 0 and dim(m/m^2).
inline std::pair<int, int> height_width(const AlgebraPtr& A) { return {A->height, A->width}; }

/// The unique algebra morphism A -> Q: the augmentation (coordinate 0 in the
/// canonical splitting).
inline Morphism augmentation_morphism(const AlgebraPtr& A) {
  QMat m(1, A->dim());
  m.at(0, 0) = 1;
  return {A, rationals_algebra(), std::move(m)};
}

/// True iff the classes of `elems` span m/m^2: by the generator criterion this
/// is equivalent to them generating A. Throws if some element is outside m.
inline bool is_generating_set(const AlgebraPtr& A, const std::vector<Element>& elems) {
  RowSpace span = A->maximal_power_space(2);
  for (const Element& e : elems) {
    require(same_algebra(e.algebra, A), errc::algebra_mismatch, "element from another algebra");
    require(e.in_maximal_ideal(), errc::element_not_in_maximal,
            "element " + to_string(e) + " is not in the maximal ideal");
  }
  int base = span.dim();
  for (const Element& e : elems) span.insert(e.coords);
  return span.dim() - base == A->width;
}

// ---------------------------------------------------------------------------
// Subalgebras
// ---------------------------------------------------------------------------

struct SubalgebraResult {
  AlgebraPtr algebra;
  Morphism inclusion;  // S -> A
};

/// Smallest unital subalgebra Q[gens]: the span of 1 and all monomials in the
/// generators, obtained by closing under multiplication by the generators.
inline SubalgebraResult subalgebra_generated(const AlgebraPtr& A, const std::vector<Element>& gens) {
  int d = A->dim();
  for (const Element& g : gens) {
    require(same_algebra(g.algebra, A), errc::algebra_mismatch, "generator from another algebra");
    require(g.in_maximal_ideal(), errc::generator_not_nilpotent,
            "generator " + to_string(g) + " is not in the maximal ideal");
  }

  RowSpace ms(d);  // maximal ideal of S: span of all products of >= 1 generators
  for (const Element& g : gens) ms.insert(g.coords);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<QVec> current = ms.rows();
    for (const QVec& v : current)
      for (const Element& g : gens)
        if (ms.insert(detail::sparse_product(A->mul, d, v, g.coords))) grew = true;
  }

  std::vector<QVec> sbasis;
  sbasis.push_back(vec_unit(d, 0));
  for (const QVec& v : ms.rows()) sbasis.push_back(v);
  int ds = static_cast<int>(sbasis.size());

  RowSpace sspan(d);
  sspan.insert_all(sbasis);

  WeilAlgebra S;
  S.labels.push_back("1");
  for (int i = 1; i < ds; ++i) S.labels.push_back(to_string(Element{A, sbasis[static_cast<std::size_t>(i)]}));
  S.mul.assign(static_cast<std::size_t>(ds) * static_cast<std::size_t>(ds), {});
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j) {
      QVec prod = detail::sparse_product(A->mul, d, sbasis[static_cast<std::size_t>(i)], sbasis[static_cast<std::size_t>(j)]);
      auto coords = sspan.coordinates(prod);
      require(coords.has_value(), errc::not_local, "subalgebra closure failed");  // cannot happen
      // coordinates() is relative to sspan.rows(); re-express over sbasis.
      // sspan rows are {e_0} followed by ms rows in echelon order, which is
      // exactly sbasis, so the coordinates transfer directly.
      S.mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(ds) + static_cast<std::size_t>(j)] =
          detail::dense_to_sparse(*coords);
    }

  S.presentation.gen_names.assign(S.labels.begin() + 1, S.labels.end());
  for (int i = 1; i < ds; ++i) S.presentation.generators.push_back(vec_unit(ds, i));

  AlgebraPtr Sp = detail::finish_algebra(std::move(S));
  QMat incl(d, ds);
  for (int u = 0; u < ds; ++u)
    for (int r = 0; r < d; ++r) incl.at(r, u) = sbasis[static_cast<std::size_t>(u)][static_cast<std::size_t>(r)];
  return {Sp, Morphism{Sp, A, std::move(incl)}};
}

}  // namespace weilforge
