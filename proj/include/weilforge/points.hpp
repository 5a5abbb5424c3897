#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weilforge/derivation.hpp"
#include "weilforge/poly.hpp"

namespace weilforge {

// ---------------------------------------------------------------------------
// Near-points of R^n
// ---------------------------------------------------------------------------

/// Algebra morphism Poly(R^n) -> A, given by the images of the coordinate
/// functions. The base point is the augmentation of the images; evaluation of
/// any polynomial is exact because everything above the height dies.
struct NearPoint {
  AlgebraPtr algebra;
  int n = 0;
  std::vector<Element> images;
  QVec base;
};

inline NearPoint make_near_point(const AlgebraPtr& A, int n, std::vector<Element> images) {
  require(static_cast<int>(images.size()) == n, errc::algebra_mismatch, "expected one image per coordinate");
  QVec base;
  for (const Element& im : images) {
    require(same_algebra(im.algebra, A), errc::algebra_mismatch, "image from another algebra");
    base.push_back(im.augmentation());
  }
  return {A, n, std::move(images), std::move(base)};
}

inline bool operator==(const NearPoint& p, const NearPoint& q) {
  if (!same_algebra(p.algebra, q.algebra) || p.n != q.n) return false;
  for (int i = 0; i < p.n; ++i)
    if (!(p.images[static_cast<std::size_t>(i)] == q.images[static_cast<std::size_t>(i)])) return false;
  return true;
}

inline Element near_eval(const NearPoint& p, const Poly& f) { return poly_eval(f, p.algebra, p.images); }

/// Surjectivity of the morphism, decided by the generator criterion: the
/// classes of image_i - base_i in m/m^2 must span it.
inline bool is_regular_point(const NearPoint& p) {
  RowSpace span = p.algebra->maximal_power_space(2);
  int before = span.dim();
  for (int i = 0; i < p.n; ++i) {
    Element shifted = p.images[static_cast<std::size_t>(i)] - el_scalar(p.algebra, p.base[static_cast<std::size_t>(i)]);
    span.insert(shifted.coords);
  }
  return span.dim() - before == p.algebra->width;
}

// ---------------------------------------------------------------------------
// Tangent vectors at a near-point
// ---------------------------------------------------------------------------

/// Derivation Poly(R^n) -> A over the point p, determined by its values on
/// the coordinates and extended by the Leibniz rule at p.
struct PointDerivation {
  NearPoint at;
  std::vector<Element> values;
};

inline PointDerivation make_point_derivation(const NearPoint& p, std::vector<Element> values) {
  require(static_cast<int>(values.size()) == p.n, errc::algebra_mismatch, "expected one value per coordinate");
  for (const Element& v : values)
    require(same_algebra(v.algebra, p.algebra), errc::algebra_mismatch, "value from another algebra");
  return {p, std::move(values)};
}

inline Element derivation_eval(const PointDerivation& D, const Poly& f) {
  Element out = el_zero(D.at.algebra);
  for (int i = 0; i < D.at.n; ++i)
    out = out + near_eval(D.at, derivative(f, i)) * D.values[static_cast<std::size_t>(i)];
  return out;
}

inline PointDerivation zero_derivation(const NearPoint& p) {
  std::vector<Element> values(static_cast<std::size_t>(p.n), el_zero(p.algebra));
  return {p, std::move(values)};
}

/// Concrete pair of functions whose images multiply to something nonzero;
/// produced when a sum or difference fails to be a morphism or a derivation.
struct ObstructionWitness {
  Poly f, g;
  Element value_f, value_g, product;

  std::string describe() const {
    auto names = default_var_names(f.nvars);
    return "D(" + weilforge::to_string(f, names) + ") * D(" + weilforge::to_string(g, names) +
           ") = " + weilforge::to_string(value_f) + " * " + weilforge::to_string(value_g) + " = " +
           weilforge::to_string(product) + " != 0";
  }
};

namespace detail {

/// First pair of coordinate values with nonzero product, if any. The image of
/// a point derivation has null square exactly when all these products vanish.
inline std::optional<ObstructionWitness> image_square_witness(int n, const std::vector<Element>& values) {
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Element prod = values[static_cast<std::size_t>(i)] * values[static_cast<std::size_t>(j)];
      if (!prod.is_zero_element())
        return ObstructionWitness{Poly::variable(n, i), Poly::variable(n, j), values[static_cast<std::size_t>(i)],
                                  values[static_cast<std::size_t>(j)], std::move(prod)};
    }
  return std::nullopt;
}

inline void require_same_point(const NearPoint& p, const NearPoint& q, const char* what) {
  require(same_algebra(p.algebra, q.algebra) && p.n == q.n, errc::algebra_mismatch, what);
  require(p == q, errc::base_mismatch, what);
}

}  // namespace detail

/// p + D is a near-point iff the ideal generated by the values of D has null
/// square; otherwise the witness pair from the product defect is returned.
/// The new point's multiplicativity is verified on a deterministic sample of
/// polynomial pairs.
inline std::variant<NearPoint, ObstructionWitness> add_derivation_to_point(const NearPoint& p,
                                                                           const PointDerivation& D) {
  detail::require_same_point(p, D.at, "derivation is not based at the point");
  Ideal image_ideal = ideal_span(p.algebra, D.values);
  if (!is_null_square(image_ideal)) {
    auto witness = detail::image_square_witness(p.n, D.values);
    require(witness.has_value(), errc::hypothesis_violated, "null-square bookkeeping disagrees");  // cannot happen
    return *witness;
  }
  std::vector<Element> images;
  for (int i = 0; i < p.n; ++i)
    images.push_back(p.images[static_cast<std::size_t>(i)] + D.values[static_cast<std::size_t>(i)]);
  NearPoint q = make_near_point(p.algebra, p.n, std::move(images));

  Rng rng(default_seed());
  int h = p.algebra->height;
  for (int trial = 0; trial < 10; ++trial) {
    Poly f = Poly::zero(p.n), g = Poly::zero(p.n);
    for (const Expo& e : enumerate_monomials(p.n, h + 1)) {
      if (rng.chance(1, 3)) f.add_term(e, rng.small_rational(2, 1));
      if (rng.chance(1, 3)) g.add_term(e, rng.small_rational(2, 1));
    }
    require(near_eval(q, f * g) == near_eval(q, f) * near_eval(q, g), errc::hypothesis_violated,
            "sum of point and derivation failed multiplicativity sampling");  // cannot happen
  }
  return q;
}

/// q - p is a tangent vector at p iff its image has null square (same product
/// defect as the sum); the bases must agree.
inline std::variant<PointDerivation, ObstructionWitness> point_difference(const NearPoint& p, const NearPoint& q) {
  require(same_algebra(p.algebra, q.algebra) && p.n == q.n, errc::algebra_mismatch,
          "points live on different bundles");
  require(p.base == q.base, errc::base_mismatch, "points have different base points");
  std::vector<Element> values;
  for (int i = 0; i < p.n; ++i)
    values.push_back(q.images[static_cast<std::size_t>(i)] - p.images[static_cast<std::size_t>(i)]);
  if (auto witness = detail::image_square_witness(p.n, values)) return *witness;
  return PointDerivation{p, std::move(values)};
}

// ---------------------------------------------------------------------------
// Fibre verification for the Weil-bundle affine structure
// ---------------------------------------------------------------------------

struct FiberAxiom {
  std::string name;
  bool holds = false;
  std::string witness;
};

struct FiberAffineCheck {
  bool hypothesis_ok = false;
  std::vector<FiberAxiom> axioms;
  bool all_pass = false;
};

/// Verifies, on the supplied fibre sample, that differences are vertical
/// tangent vectors, that adding them back recovers the points, and that the
/// action is free and associative. If I^2 != 0 the report carries the
/// null-square obstruction instead.
inline FiberAffineCheck fiber_affine_check(const AlgebraPtr& A, const Ideal& I,
                                           const std::vector<NearPoint>& points,
                                           std::uint64_t seed = default_seed()) {
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  require(I.is_proper(), errc::improper_ideal, "fibre check needs a proper ideal");
  FiberAffineCheck out;
  if (!is_null_square(I)) {
    auto witness = null_square_witness(I);
    out.hypothesis_ok = false;
    out.axioms.push_back({"hypothesis_null_square", false,
                          "x = " + to_string(witness->first) + ", y = " + to_string(witness->second) +
                              ", x*y = " + to_string(witness->first * witness->second)});
    out.all_pass = false;
    return out;
  }
  out.hypothesis_ok = true;
  if (points.empty()) {
    out.all_pass = true;
    return out;
  }

  QuotientResult quo = quotient_algebra(A, I);
  const NearPoint& p0 = points.front();
  for (const NearPoint& p : points) {
    require(same_algebra(p.algebra, A) && p.n == p0.n, errc::algebra_mismatch, "points live on different bundles");
    for (int i = 0; i < p.n; ++i)
      require(quo.projection.apply(p.images[static_cast<std::size_t>(i)]) ==
                  quo.projection.apply(p0.images[static_cast<std::size_t>(i)]),
              errc::base_mismatch, "points do not lie in one fibre of the quotient projection");
  }

  FiberAxiom vertical{"differences_are_vertical_derivations", true, ""};
  FiberAxiom recovers{"difference_then_add_recovers", true, ""};
  for (std::size_t i = 1; i < points.size(); ++i) {
    auto diff = point_difference(p0, points[i]);
    if (std::holds_alternative<ObstructionWitness>(diff)) {
      vertical.holds = false;
      vertical.witness = std::get<ObstructionWitness>(diff).describe();
      break;
    }
    const PointDerivation& D = std::get<PointDerivation>(diff);
    for (const Element& v : D.values)
      if (!I.contains(v)) {
        vertical.holds = false;
        vertical.witness = "difference value " + to_string(v) + " is not in I";
      }
    auto sum = add_derivation_to_point(p0, D);
    if (!std::holds_alternative<NearPoint>(sum) || !(std::get<NearPoint>(sum) == points[i])) {
      recovers.holds = false;
      recovers.witness = "p0 + (p_" + std::to_string(i) + " - p0) != p_" + std::to_string(i);
    }
  }

  Rng rng(seed);
  auto random_vertical = [&]() {
    std::vector<Element> values;
    for (int i = 0; i < p0.n; ++i) {
      Element v = el_zero(A);
      for (const QVec& row : I.basis.rows()) vec_axpy(v.coords, rng.small_rational(2, 1), row);
      values.push_back(std::move(v));
    }
    return PointDerivation{p0, std::move(values)};
  };

  FiberAxiom assoc{"action_associativity", true, ""};
  FiberAxiom free_action{"action_free", true, ""};
  for (int trial = 0; trial < 25; ++trial) {
    PointDerivation D = random_vertical(), E = random_vertical();
    auto pD = add_derivation_to_point(p0, D);
    if (!std::holds_alternative<NearPoint>(pD)) {
      assoc.holds = false;
      assoc.witness = "p + D left the bundle";
      break;
    }
    PointDerivation E_at_pD = make_point_derivation(std::get<NearPoint>(pD), E.values);
    auto lhs = add_derivation_to_point(std::get<NearPoint>(pD), E_at_pD);
    std::vector<Element> sum_values;
    for (int i = 0; i < p0.n; ++i)
      sum_values.push_back(D.values[static_cast<std::size_t>(i)] + E.values[static_cast<std::size_t>(i)]);
    auto rhs = add_derivation_to_point(p0, make_point_derivation(p0, sum_values));
    if (!std::holds_alternative<NearPoint>(lhs) || !std::holds_alternative<NearPoint>(rhs) ||
        !(std::get<NearPoint>(lhs) == std::get<NearPoint>(rhs))) {
      assoc.holds = false;
      assoc.witness = "(p + D) + D' != p + (D + D') on sampled vertical derivations";
    }
    bool values_differ = false;
    for (int i = 0; i < p0.n; ++i)
      if (!(D.values[static_cast<std::size_t>(i)] == E.values[static_cast<std::size_t>(i)])) values_differ = true;
    if (values_differ) {
      auto pE = add_derivation_to_point(p0, E);
      if (std::holds_alternative<NearPoint>(pE) && std::get<NearPoint>(pD) == std::get<NearPoint>(pE)) {
        free_action.holds = false;
        free_action.witness = "distinct vertical derivations produced the same point";
      }
    }
  }

  out.axioms = {vertical, recovers, assoc, free_action};
  out.all_pass = true;
  for (const FiberAxiom& a : out.axioms)
    if (!a.holds) out.all_pass = false;
  return out;
}

// ---------------------------------------------------------------------------
// Jets
// ---------------------------------------------------------------------------

/// Jet of type A over a base point of R^n, held as the kernel of a regular
/// near-point on polynomials of degree <= height(A) centered at the base.
/// The kernel's echelon basis is a canonical form: two jets are equal iff the
/// bases (and base points) coincide.
struct Jet {
  NearPoint representative;
  int degree = 0;               // height of the algebra
  std::vector<Expo> monomials;  // centered monomials of degree <= `degree`, grlex
  RowSpace kernel;              // coefficient vectors over `monomials`
};

inline bool operator==(const Jet& a, const Jet& b) {
  return same_algebra(a.representative.algebra, b.representative.algebra) && a.representative.n == b.representative.n &&
         a.representative.base == b.representative.base && a.degree == b.degree && a.kernel == b.kernel;
}

/// Kernel ideal of a regular near-point, computed on the centered polynomial
/// model.
inline Jet jet_of(const NearPoint& p) {
  require(is_regular_point(p), errc::not_regular, "the near-point is not regular; its kernel is not a jet");
  const AlgebraPtr& A = p.algebra;
  int h = A->height;
  std::vector<Expo> monos = enumerate_monomials(p.n, h);

  // powers of the shifted images (x_i - base_i evaluates into m_A)
  std::vector<std::vector<Element>> powers(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    Element shifted = p.images[static_cast<std::size_t>(i)] - el_scalar(A, p.base[static_cast<std::size_t>(i)]);
    powers[static_cast<std::size_t>(i)].push_back(el_unit(A));
    for (int e = 1; e <= h; ++e)
      powers[static_cast<std::size_t>(i)].push_back(powers[static_cast<std::size_t>(i)].back() * shifted);
  }

  int N = static_cast<int>(monos.size());
  std::vector<QVec> values;
  values.reserve(static_cast<std::size_t>(N));
  for (const Expo& e : monos) {
    Element val = el_unit(A);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) val = val * powers[i][static_cast<std::size_t>(e[i])];
    values.push_back(val.coords);
  }

  SparseRREF sys(N);
  for (int r = 0; r < A->dim(); ++r) {
    SparseRow row;
    for (int c = 0; c < N; ++c)
      if (!is_zero(values[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]))
        row.terms.emplace_back(c, values[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]);
    sys.add_row(std::move(row));
  }
  RowSpace kernel(N);
  kernel.insert_all(sys.nullspace());
  return {p, h, std::move(monos), std::move(kernel)};
}

/// Canonical projection of jets under an invariant ideal: the jet of the
/// composed point phi . p, the unique B-jet containing the given one.
inline Jet jet_project(const Jet& j, const Ideal& I) {
  const AlgebraPtr& A = j.representative.algebra;
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  require(is_infinitesimally_invariant(A, I), errc::not_invariant,
          "jet projection needs an invariant ideal");
  QuotientResult quo = quotient_algebra(A, I);
  std::vector<Element> images;
  for (const Element& im : j.representative.images) images.push_back(quo.projection.apply(im));
  return jet_of(make_near_point(quo.algebra, j.representative.n, std::move(images)));
}

struct JetAddResult {
  Jet jet;
  bool exact_sequence = false;
  std::vector<std::string> warnings;
};

/// Jet addition: the kernel of representative + D, for a vertical tangent
/// class realized as a derivation with values in I. Requires the standing
/// hypothesis I <= Ann(I) /\ m^2 (so the sum is automatically a regular
/// point). When the affine sequence of I is not exact a warning is attached:
/// the result can then depend on the representative and on the class
/// representative.
inline JetAddResult jet_add(const Jet& j, const PointDerivation& D, const Ideal& I) {
  const AlgebraPtr& A = j.representative.algebra;
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  detail::require_same_point(j.representative, D.at, "derivation is not based at the jet's representative");

  Ideal ann = annihilator(A, I);
  const RowSpace& m2 = A->maximal_power_space(2);
  for (const QVec& x : I.basis.rows())
    require(ann.basis.contains(x) && m2.contains(x), errc::hypothesis_violated,
            "jet addition requires I <= Ann(I) and I <= m^2");
  for (const Element& v : D.values)
    require(I.contains(v), errc::hypothesis_violated,
            "derivation value " + to_string(v) + " does not lie in I (the model of pbar/p)");

  auto sum = add_derivation_to_point(j.representative, D);
  require(std::holds_alternative<NearPoint>(sum), errc::hypothesis_violated,
          "sum left the bundle although I^2 = 0");  // cannot happen
  JetAddResult out{jet_of(std::get<NearPoint>(sum)), false, {}};

  bool left = left_exactness_test(A, I).holds;
  bool right = detail::cached_induced_map(A, I)->surjective();
  out.exact_sequence = left && right;
  if (!out.exact_sequence)
    out.warnings.push_back(std::string("affine sequence of I is not exact (left ") + (left ? "holds" : "fails") +
                           ", right " + (right ? "holds" : "fails") +
                           "): the sum may depend on the chosen representatives");
  return out;
}

// ---------------------------------------------------------------------------
// Tangent-space bookkeeping
// ---------------------------------------------------------------------------

struct TangentDims {
  long long point_tangent = 0;  // dim T_p(M^A) = n * dim A
  long long der_AA = 0;         // dim Der(A, A)
  long long jet_tangent = 0;    // dim T(J^A M) = n * dim A - dim Der(A, A)
};

inline TangentDims tangent_dimensions(const AlgebraPtr& A, int n) {
  require(n >= 1, errc::io_error, "ambient dimension must be positive");
  long long d = A->dim();
  long long der = detail::cached_der_algebra(A)->dim();
  return {n * d, der, n * d - der};
}

// ---------------------------------------------------------------------------
// The functor on polynomial maps and algebra morphisms
// ---------------------------------------------------------------------------

/// Polynomial map R^n_in -> R^n_out.
struct PolyMap {
  int n_in = 0, n_out = 0;
  std::vector<Poly> components;
};

inline PolyMap make_poly_map(int n_in, std::vector<Poly> components) {
  for (const Poly& c : components)
    require(c.nvars == n_in, errc::algebra_mismatch, "component has wrong variable count");
  int n_out = static_cast<int>(components.size());
  return {n_in, n_out, std::move(components)};
}

/// w(f, phi): near-points transform by p -> phi . p . f^*.
inline NearPoint apply_map(const PolyMap& f, const Morphism& phi, const NearPoint& p) {
  require(f.n_in == p.n, errc::algebra_mismatch, "map domain does not match the point");
  require(same_algebra(phi.source, p.algebra), errc::algebra_mismatch, "morphism source does not match the point");
  std::vector<Element> images;
  for (const Poly& comp : f.components) images.push_back(phi.apply(near_eval(p, comp)));
  return make_near_point(phi.target, f.n_out, std::move(images));
}

/// Pushforward of a tangent vector under w(f, phi): delta -> phi . delta . f^*.
inline PointDerivation pushforward(const PolyMap& f, const Morphism& phi, const PointDerivation& D) {
  NearPoint target = apply_map(f, phi, D.at);
  std::vector<Element> values;
  for (const Poly& comp : f.components) values.push_back(phi.apply(derivation_eval(D, comp)));
  return {std::move(target), std::move(values)};
}

}  // namespace weilforge
