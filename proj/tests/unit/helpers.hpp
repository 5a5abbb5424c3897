#pragma once

#include <vector>

#include "weilforge/points.hpp"

namespace weilforge::testing {

/// A (x) Q[eps]/(eps^2) on the basis {e_0..e_{d-1}, eps e_0..eps e_{d-1}}.
/// Tensoring with the dual numbers is the tangent functor; it gives an
/// independent route to pushforwards of tangent vectors.
inline AlgebraPtr tensor_with_dual(const AlgebraPtr& A) {
  int d = A->dim();
  int dd = 2 * d;
  std::vector<std::string> labels;
  for (const auto& s : A->labels) labels.push_back(s);
  for (const auto& s : A->labels) labels.push_back("eps*" + s);
  std::vector<std::vector<QVec>> table(static_cast<std::size_t>(dd),
                                       std::vector<QVec>(static_cast<std::size_t>(dd), vec_zero(dd)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      QVec prod = sparse_to_dense(A->basis_product(i, j), d);
      for (int k = 0; k < d; ++k) {
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = prod[static_cast<std::size_t>(k)];
        // e_i * (eps e_j) = eps (e_i e_j); (eps e_i)(eps e_j) = 0
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(d + j)][static_cast<std::size_t>(d + k)] =
            prod[static_cast<std::size_t>(k)];
        table[static_cast<std::size_t>(d + i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(d + k)] =
            prod[static_cast<std::size_t>(k)];
      }
    }
  return algebra_from_table(labels, table);
}

/// Lift a + eps b of algebra elements into the tensor extension.
inline Element eps_lift(const AlgebraPtr& Aeps, const Element& a, const Element& b) {
  int d = a.algebra->dim();
  Element out = el_zero(Aeps);
  for (int i = 0; i < d; ++i) {
    out.coords[static_cast<std::size_t>(i)] = a.coords[static_cast<std::size_t>(i)];
    out.coords[static_cast<std::size_t>(d + i)] = b.coords[static_cast<std::size_t>(i)];
  }
  return out;
}

/// Extension of phi to the tensor algebras, phi(a + eps b) = phi(a) + eps phi(b).
inline Morphism eps_extend(const Morphism& phi, const AlgebraPtr& Aeps, const AlgebraPtr& Beps) {
  int ds = phi.source->dim(), dt = phi.target->dim();
  QMat m(2 * dt, 2 * ds);
  for (int r = 0; r < dt; ++r)
    for (int c = 0; c < ds; ++c) {
      m.at(r, c) = phi.matrix.at(r, c);
      m.at(dt + r, ds + c) = phi.matrix.at(r, c);
    }
  return {Aeps, Beps, std::move(m)};
}

/// The eps-coordinate part of an element of the tensor extension.
inline Element eps_part(const AlgebraPtr& A, const Element& e) {
  int d = A->dim();
  Element out = el_zero(A);
  for (int i = 0; i < d; ++i) out.coords[static_cast<std::size_t>(i)] = e.coords[static_cast<std::size_t>(d + i)];
  return out;
}

inline Element unit_part(const AlgebraPtr& A, const Element& e) {
  int d = A->dim();
  Element out = el_zero(A);
  for (int i = 0; i < d; ++i) out.coords[static_cast<std::size_t>(i)] = e.coords[static_cast<std::size_t>(i)];
  return out;
}

/// Pushforward computed through the tangent-functor route: extend everything
/// by eps, move the extended point, and read off the eps part.
inline std::vector<Element> pushforward_via_eps(const PolyMap& f, const Morphism& phi, const PointDerivation& D) {
  AlgebraPtr Aeps = tensor_with_dual(D.at.algebra);
  AlgebraPtr Beps = tensor_with_dual(phi.target);
  std::vector<Element> images;
  for (int i = 0; i < D.at.n; ++i)
    images.push_back(eps_lift(Aeps, D.at.images[static_cast<std::size_t>(i)], D.values[static_cast<std::size_t>(i)]));
  NearPoint p_eps = make_near_point(Aeps, D.at.n, std::move(images));
  Morphism phi_eps = eps_extend(phi, Aeps, Beps);
  NearPoint q_eps = apply_map(f, phi_eps, p_eps);
  std::vector<Element> values;
  for (const Element& im : q_eps.images) values.push_back(eps_part(phi.target, im));
  return values;
}

inline Poly random_poly(int nvars, int max_degree, Rng& rng, int density_num = 1, int density_den = 3) {
  Poly p = Poly::zero(nvars);
  for (const Expo& e : enumerate_monomials(nvars, max_degree))
    if (rng.chance(density_num, density_den)) p.add_term(e, rng.small_rational(2, 1));
  return p;
}

inline Element random_element(const AlgebraPtr& A, Rng& rng, bool in_maximal = false) {
  Element e = el_zero(A);
  for (int j = in_maximal ? 1 : 0; j < A->dim(); ++j) e.coords[static_cast<std::size_t>(j)] = rng.small_rational(2, 2);
  return e;
}

}  // namespace weilforge::testing
