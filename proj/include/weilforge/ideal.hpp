#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weilforge/algebra.hpp"

namespace weilforge {

/// Ideal of a Weil algebra, held as a reduced echelon basis. The echelon rows
/// are a canonical form: two ideals are equal iff their bases coincide.
/// `invariant_by_construction` tracks ideals built from powers of the maximal
/// ideal by operations that preserve invariance (products, sums,
/// annihilators); for such ideals automorphism invariance is a certainty
/// rather than an infinitesimally tested property.
struct Ideal {
  AlgebraPtr algebra;
  RowSpace basis;
  bool invariant_by_construction = false;
  std::optional<int> power_of_maximal;  // set when the ideal is exactly m^k

  int dim() const { return basis.dim(); }
  bool is_zero_ideal() const { return basis.dim() == 0; }
  bool is_whole_algebra() const { return basis.dim() == algebra->dim(); }
  bool is_proper() const { return !is_whole_algebra(); }
  bool contains(const Element& e) const { return basis.contains(e.coords); }

  std::vector<Element> basis_elements() const {
    std::vector<Element> out;
    for (const QVec& r : basis.rows()) out.push_back({algebra, r});
    return out;
  }
};

inline bool operator==(const Ideal& a, const Ideal& b) {
  return same_algebra(a.algebra, b.algebra) && a.basis == b.basis;
}

inline void require_same_algebra(const Ideal& a, const Ideal& b) {
  require(same_algebra(a.algebra, b.algebra), errc::algebra_mismatch, "ideals live in different algebras");
}

inline Ideal zero_ideal(const AlgebraPtr& A) { return {A, RowSpace(A->dim()), true, std::nullopt}; }

// ---------------------------------------------------------------------------
// Ideal arithmetic
// ---------------------------------------------------------------------------

/// Smallest ideal containing `gens`: span closure under multiplication by the
/// algebra basis.
inline Ideal ideal_span(const AlgebraPtr& A, const std::vector<Element>& gens) {
  int d = A->dim();
  RowSpace basis(d);
  for (const Element& g : gens) {
    require(same_algebra(g.algebra, A), errc::algebra_mismatch, "generator from another algebra");
    basis.insert(g.coords);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<QVec> current = basis.rows();
    for (const QVec& v : current)
      for (int i = 1; i < d; ++i) {  // multiplying by the unit changes nothing
        QVec prod = detail::sparse_product_basis(A->mul, d, v, i);
        if (basis.insert(std::move(prod))) grew = true;
      }
  }
  return {A, std::move(basis), false, std::nullopt};
}

/// Ideal spanned by all products of basis elements of I and J. (This span is
/// already an ideal, so no further closure is required.)
inline Ideal ideal_product(const Ideal& I, const Ideal& J) {
  require_same_algebra(I, J);
  const AlgebraPtr& A = I.algebra;
  int d = A->dim();
  RowSpace basis(d);
  for (const QVec& x : I.basis.rows())
    for (const QVec& y : J.basis.rows()) basis.insert(detail::sparse_product(A->mul, d, x, y));
  return {A, std::move(basis), I.invariant_by_construction && J.invariant_by_construction, std::nullopt};
}

inline Ideal ideal_square(const Ideal& I) { return ideal_product(I, I); }

inline Ideal ideal_power(const Ideal& I, int k) {
  require(k >= 1, errc::io_error, "ideal_power expects a positive exponent");
  Ideal out = I;
  for (int i = 1; i < k; ++i) out = ideal_product(out, I);
  return out;
}

/// Sum of ideals (span of the union of the bases).
inline Ideal ideal_sum(const Ideal& I, const Ideal& J) {
  require_same_algebra(I, J);
  RowSpace basis = I.basis;
  for (const QVec& y : J.basis.rows()) basis.insert(y);
  return {I.algebra, std::move(basis), I.invariant_by_construction && J.invariant_by_construction, std::nullopt};
}

/// m_A^k, read from the precomputed filtration; m^0 = A.
inline Ideal maximal_power(const AlgebraPtr& A, int k) {
  require(k >= 0, errc::io_error, "maximal_power expects a non-negative exponent");
  return {A, A->maximal_power_space(k), true, k};
}

/// Ann(I) = { a : a*I = 0 }, the nullspace of the stacked multiplication maps
/// a -> a*x_j over the ideal basis. Annihilators of invariant ideals are
/// invariant.
inline Ideal annihilator(const AlgebraPtr& A, const Ideal& I) {
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  int d = A->dim();
  SparseRREF sys(d);
  for (const QVec& x : I.basis.rows()) {
    // constraint rows: for each output coordinate r, sum_i a_i (e_i * x)_r = 0
    std::vector<SparseRow> rows(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      QVec col = detail::sparse_product_basis(A->mul, d, x, i);
      for (int r = 0; r < d; ++r)
        if (!is_zero(col[static_cast<std::size_t>(r)])) rows[static_cast<std::size_t>(r)].terms.emplace_back(i, col[static_cast<std::size_t>(r)]);
    }
    for (SparseRow& row : rows)
      if (!row.terms.empty()) sys.add_row(std::move(row));
  }
  RowSpace basis(d);
  basis.insert_all(sys.nullspace());
  return {A, std::move(basis), I.invariant_by_construction, std::nullopt};
}

/// I^2 = 0. Over Q this is equivalent to x^2 = 0 for all x in I.
inline bool is_null_square(const Ideal& I) { return ideal_square(I).is_zero_ideal(); }

/// First pair of ideal basis elements with a nonzero product, if any.
inline std::optional<std::pair<Element, Element>> null_square_witness(const Ideal& I) {
  const AlgebraPtr& A = I.algebra;
  int d = A->dim();
  for (const QVec& x : I.basis.rows())
    for (const QVec& y : I.basis.rows()) {
      QVec p = detail::sparse_product(A->mul, d, x, y);
      if (!vec_is_zero(p)) return std::make_pair(Element{A, x}, Element{A, y});
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Quotient algebras
// ---------------------------------------------------------------------------

struct QuotientResult {
  AlgebraPtr algebra;    // B = A/I
  Morphism projection;   // A -> B, surjective
  QMat section;          // dim A x dim B; right inverse of the projection
};

/// B = A/I on the complement basis of the ideal's echelon pivots. The pivot
/// complement is chosen greedily in basis order, which makes the quotient
/// basis (and hence all downstream reports) deterministic. For a truncated
/// algebra and I = m^(k+1) the result coincides bit for bit with
/// truncated_algebra(m, k).
inline QuotientResult quotient_algebra(const AlgebraPtr& A, const Ideal& I) {
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  require(I.is_proper(), errc::improper_ideal, "cannot form the quotient by the whole algebra");
  int d = A->dim();
  // A proper ideal of a local algebra consists of non-units, so column 0 is
  // never a pivot and the unit class survives as basis element 0 of B.
  for (int p : I.basis.pivots()) require(p != 0, errc::improper_ideal, "ideal contains the unit");

  std::vector<int> comp = I.basis.complement_columns();
  int db = static_cast<int>(comp.size());

  WeilAlgebra B;
  for (int c : comp) B.labels.push_back(A->labels[static_cast<std::size_t>(c)]);

  auto project = [&](const QVec& v) {
    QVec red = I.basis.reduce(v);
    QVec out(static_cast<std::size_t>(db));
    for (int u = 0; u < db; ++u) out[static_cast<std::size_t>(u)] = red[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])];
    return out;
  };

  B.mul.assign(static_cast<std::size_t>(db) * static_cast<std::size_t>(db), {});
  for (int u = 0; u < db; ++u)
    for (int v = 0; v < db; ++v) {
      QVec prod = sparse_to_dense(
          A->basis_product(comp[static_cast<std::size_t>(u)], comp[static_cast<std::size_t>(v)]), d);
      B.mul[static_cast<std::size_t>(u) * static_cast<std::size_t>(db) + static_cast<std::size_t>(v)] =
          detail::dense_to_sparse(project(prod));
    }

  if (!A->presentation.generators.empty() || A->dim() == 1) {
    B.presentation.gen_names = A->presentation.gen_names;
    for (const QVec& g : A->presentation.generators) B.presentation.generators.push_back(project(g));
    if (A->presentation.has_monomial_basis())
      for (int c : comp) B.presentation.basis_monomials.push_back(A->presentation.basis_monomials[static_cast<std::size_t>(c)]);
  }
  if (A->truncated_params && I.power_of_maximal && *I.power_of_maximal >= 1 &&
      *I.power_of_maximal <= A->height)
    B.truncated_params = {A->truncated_params->first, *I.power_of_maximal - 1};
  else if (I.is_zero_ideal())
    B.truncated_params = A->truncated_params;

  AlgebraPtr Bp = detail::finish_algebra(std::move(B));

  QMat proj(db, d);
  for (int j = 0; j < d; ++j) {
    QVec col = project(vec_unit(d, j));
    for (int u = 0; u < db; ++u) proj.at(u, j) = col[static_cast<std::size_t>(u)];
  }
  QMat section(d, db);
  for (int u = 0; u < db; ++u) section.at(comp[static_cast<std::size_t>(u)], u) = 1;

  return {Bp, Morphism{A, Bp, std::move(proj)}, std::move(section)};
}

/// Image of an ideal under a surjective morphism (used to push ideals into
/// quotients).
inline Ideal ideal_image(const Morphism& phi, const Ideal& I) {
  RowSpace basis(phi.target->dim());
  for (const QVec& x : I.basis.rows()) basis.insert(phi.matrix.apply(x));
  return {phi.target, std::move(basis), I.invariant_by_construction, std::nullopt};
}

}  // namespace weilforge
