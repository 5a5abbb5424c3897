#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weilforge/ideal.hpp"

namespace weilforge {

// ---------------------------------------------------------------------------
// Coefficient modules for derivation spaces
// ---------------------------------------------------------------------------

/// Coefficient module of a derivation space. Covers the four shapes the
/// theory needs: A itself, an ideal I of A, an ideal I viewed as a module
/// over B = A/J (legal when J*I = 0), and a quotient algebra B = A/I.
struct ModuleSpec {
  enum class Kind { algebra, ideal_in_algebra, ideal_over_quotient, quotient_algebra };

  Kind kind;
  AlgebraPtr base;            // the algebra owning the raw data
  AlgebraPtr source;          // derivations map source -> module
  AlgebraPtr ambient;         // algebra in which module values are read
  std::optional<Ideal> module_ideal;
  int mdim = 0;
  std::vector<QMat> action;   // per source basis element, mdim x mdim
  QMat embed;                 // ambient-dim x mdim, module coords -> ambient coords

  std::string describe() const {
    switch (kind) {
      case Kind::algebra: return "Der(A,A)";
      case Kind::ideal_in_algebra: return "Der(A,I)";
      case Kind::ideal_over_quotient: return "Der(B,I)";
      case Kind::quotient_algebra: return "Der(B,B)";
    }
    return "Der(?)";
  }
};

namespace detail {

inline QMat embed_from_rowspace(const RowSpace& basis) {
  QMat m(basis.ambient(), basis.dim());
  for (int j = 0; j < basis.dim(); ++j)
    for (int r = 0; r < basis.ambient(); ++r) m.at(r, j) = basis.rows()[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
  return m;
}

/// Action of multiplication by `element` on the subspace spanned by `basis`,
/// in basis coordinates. Requires the subspace to be stable.
inline QMat restricted_multiplication(const AlgebraPtr& A, const QVec& element, const RowSpace& basis) {
  int k = basis.dim();
  QMat out(k, k);
  for (int j = 0; j < k; ++j) {
    QVec prod = sparse_product(A->mul, A->dim(), element, basis.rows()[static_cast<std::size_t>(j)]);
    auto coords = basis.coordinates(std::move(prod));
    require(coords.has_value(), errc::incompatible_module, "module is not stable under the action");
    for (int r = 0; r < k; ++r) out.at(r, j) = (*coords)[static_cast<std::size_t>(r)];
  }
  return out;
}

}  // namespace detail

inline ModuleSpec module_algebra(const AlgebraPtr& A) {
  ModuleSpec M;
  M.kind = ModuleSpec::Kind::algebra;
  M.base = M.source = M.ambient = A;
  M.mdim = A->dim();
  M.action.reserve(static_cast<std::size_t>(A->dim()));
  for (int i = 0; i < A->dim(); ++i) {
    QMat L(A->dim(), A->dim());
    for (int j = 0; j < A->dim(); ++j)
      for (const auto& [k, c] : A->basis_product(i, j)) L.at(k, j) = c;
    M.action.push_back(std::move(L));
  }
  M.embed = QMat::identity(A->dim());
  return M;
}

/// I as an A-module: Der(A, I).
inline ModuleSpec module_ideal(const AlgebraPtr& A, const Ideal& I) {
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  ModuleSpec M;
  M.kind = ModuleSpec::Kind::ideal_in_algebra;
  M.base = M.source = M.ambient = A;
  M.module_ideal = I;
  M.mdim = I.dim();
  for (int i = 0; i < A->dim(); ++i)
    M.action.push_back(detail::restricted_multiplication(A, vec_unit(A->dim(), i), I.basis));
  M.embed = detail::embed_from_rowspace(I.basis);
  return M;
}

/// I as a module over B = A/J, via lifts through a given quotient. Requires
/// J*I = 0 so the action is independent of the lift.
inline ModuleSpec module_ideal_over_quotient(const AlgebraPtr& A, const Ideal& I, const Ideal& J,
                                             const QuotientResult& quo) {
  require(same_algebra(I.algebra, A) && same_algebra(J.algebra, A), errc::algebra_mismatch,
          "ideals from another algebra");
  require(ideal_product(J, I).is_zero_ideal(), errc::incompatible_module,
          "J*I != 0: the ideal is not a module over the quotient");
  ModuleSpec M;
  M.kind = ModuleSpec::Kind::ideal_over_quotient;
  M.base = A;
  M.source = quo.algebra;
  M.ambient = A;
  M.module_ideal = I;
  M.mdim = I.dim();
  for (int u = 0; u < quo.algebra->dim(); ++u) {
    QVec lift = quo.section.apply(vec_unit(quo.algebra->dim(), u));
    M.action.push_back(detail::restricted_multiplication(A, lift, I.basis));
  }
  M.embed = detail::embed_from_rowspace(I.basis);
  return M;
}

/// B = A/I as a module over itself: Der(B, B).
inline ModuleSpec module_quotient_algebra(const QuotientResult& quo) {
  ModuleSpec M = module_algebra(quo.algebra);
  M.kind = ModuleSpec::Kind::quotient_algebra;
  return M;
}

// ---------------------------------------------------------------------------
// Derivation spaces
// ---------------------------------------------------------------------------

/// Echelonized basis of the space of derivations source -> module. Each basis
/// entry is an (mdim x source-dim) matrix; `span` is the canonical reduced
/// echelon form of the vectorized basis (row-major), so dimension and
/// membership tests are deterministic.
struct DerivationSpace {
  ModuleSpec module;
  std::vector<QMat> basis;
  RowSpace span;

  int dim() const { return static_cast<int>(basis.size()); }
  bool contains(const QMat& D) const { return span.contains(D.vectorized()); }
  std::optional<QVec> coordinates(const QMat& D) const { return span.coordinates(D.vectorized()); }

  /// Value of a derivation matrix on a source element, read in the ambient
  /// algebra.
  Element value(const QMat& D, const Element& x) const {
    require(same_algebra(x.algebra, module.source), errc::algebra_mismatch, "element outside the source algebra");
    return {module.ambient, module.embed.apply(D.apply(x.coords))};
  }

  /// Derivation matrix embedded as a map source -> ambient.
  QMat embedded(const QMat& D) const { return module.embed.mul(D); }
};

/// Solves the full Leibniz system { d(e_i e_j) = e_i d(e_j) + e_j d(e_i),
/// d(1) = 0 } by sparse elimination. Unknowns are laid out so that columns
/// for high-index (high-degree) source basis arguments are eliminated first,
/// which keeps the elimination sparse: images of composite basis elements
/// resolve into images of generators.
inline DerivationSpace derivation_space(const ModuleSpec& M) {
  const int sdim = M.source->dim();
  const int mdim = M.mdim;
  auto col = [&](int r, int k) { return (sdim - 1 - k) * mdim + r; };

  SparseRREF sys(sdim * mdim);
  // d(1) = 0
  for (int r = 0; r < mdim; ++r) {
    SparseRow row;
    row.terms.emplace_back(col(r, 0), Rat(1));
    sys.add_row(std::move(row));
  }
  for (int i = 0; i < sdim; ++i)
    for (int j = i; j < sdim; ++j) {
      const SparseVec& prod = M.source->basis_product(i, j);
      const QMat& Li = M.action[static_cast<std::size_t>(i)];
      const QMat& Lj = M.action[static_cast<std::size_t>(j)];
      for (int r = 0; r < mdim; ++r) {
        SparseRow row;
        for (const auto& [k, c] : prod) row.terms.emplace_back(col(r, k), c);
        for (int t = 0; t < mdim; ++t) {
          if (!is_zero(Li.at(r, t))) row.terms.emplace_back(col(t, j), -Li.at(r, t));
          if (!is_zero(Lj.at(r, t))) row.terms.emplace_back(col(t, i), -Lj.at(r, t));
        }
        sys.add_row(std::move(row));
      }
    }

  DerivationSpace out{M, {}, RowSpace(sdim * mdim)};
  for (const QVec& v : sys.nullspace()) {
    QVec flat(static_cast<std::size_t>(sdim) * static_cast<std::size_t>(mdim));
    for (int r = 0; r < mdim; ++r)
      for (int k = 0; k < sdim; ++k)
        flat[static_cast<std::size_t>(r) * static_cast<std::size_t>(sdim) + static_cast<std::size_t>(k)] =
            v[static_cast<std::size_t>(col(r, k))];
    out.span.insert(std::move(flat));
  }
  for (const QVec& row : out.span.rows()) {
    QMat D(mdim, sdim);
    D.a = row;
    out.basis.push_back(std::move(D));
  }
  return out;
}

namespace detail {

/// Der(A, A) is requested repeatedly by the affine criteria; memoize per
/// algebra content hash. Entries are immutable once stored.
inline std::shared_ptr<const DerivationSpace> cached_der_algebra(const AlgebraPtr& A) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const DerivationSpace>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(A->hash);
    if (it != cache.end()) return it->second;
  }
  auto space = std::make_shared<const DerivationSpace>(derivation_space(module_algebra(A)));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(A->hash, std::move(space)).first->second;
}

}  // namespace detail

/// D(I) <= I for every derivation D of A. Powers of the maximal ideal are
/// invariant by construction; this check certifies arbitrary ideals at the
/// infinitesimal (Lie algebra) level.
inline bool is_infinitesimally_invariant(const AlgebraPtr& A, const Ideal& I) {
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  auto der = detail::cached_der_algebra(A);
  for (const QMat& D : der->basis)
    for (const QVec& x : I.basis.rows())
      if (!I.basis.contains(D.apply(x))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// The induced map psi : Der(A,A) -> Der(B,B)
// ---------------------------------------------------------------------------

struct InducedDerivationMap {
  AlgebraPtr A;
  QuotientResult quotient;
  std::shared_ptr<const DerivationSpace> der_A;
  std::shared_ptr<const DerivationSpace> der_B;
  QMat psi;                   // der_B->dim() x der_A->dim()
  std::vector<QMat> kernel;   // derivations of A spanning ker(psi)
  int dim_kernel = 0;
  int dim_cokernel = 0;

  bool surjective() const { return dim_cokernel == 0; }
};

/// Matrix of the natural map sending a derivation of A to the induced
/// derivation of B = A/I, with kernel and cokernel bookkeeping. Every
/// derivation must preserve I for the map to be defined.
inline InducedDerivationMap induced_derivation_map(const AlgebraPtr& A, const Ideal& I) {
  require(I.is_proper(), errc::improper_ideal, "quotient by the whole algebra");
  InducedDerivationMap out{A, quotient_algebra(A, I), detail::cached_der_algebra(A), nullptr, {}, {}, 0, 0};
  for (const QMat& D : out.der_A->basis)
    for (const QVec& x : I.basis.rows())
      require(I.basis.contains(D.apply(x)), errc::not_invariant,
              "a derivation of the algebra does not preserve the ideal");

  out.der_B = detail::cached_der_algebra(out.quotient.algebra);
  int na = out.der_A->dim();
  int nb = out.der_B->dim();
  out.psi = QMat(nb, na);
  for (int t = 0; t < na; ++t) {
    QMat induced = out.quotient.projection.matrix.mul(out.der_A->basis[static_cast<std::size_t>(t)]).mul(out.quotient.section);
    auto coords = out.der_B->coordinates(induced);
    require(coords.has_value(), errc::incompatible_module, "induced map left the derivation space");  // cannot happen
    for (int s = 0; s < nb; ++s) out.psi.at(s, t) = (*coords)[static_cast<std::size_t>(s)];
  }

  SparseRREF sys(na);
  for (int s = 0; s < nb; ++s) {
    SparseRow row;
    for (int t = 0; t < na; ++t)
      if (!is_zero(out.psi.at(s, t))) row.terms.emplace_back(t, out.psi.at(s, t));
    sys.add_row(std::move(row));
  }
  int rk = sys.rank();
  out.dim_cokernel = nb - rk;
  for (const QVec& v : sys.nullspace()) {
    QMat D(A->dim(), A->dim());
    for (int t = 0; t < na; ++t)
      if (!is_zero(v[static_cast<std::size_t>(t)]))
        D = D.add(out.der_A->basis[static_cast<std::size_t>(t)].scaled(v[static_cast<std::size_t>(t)]));
    out.kernel.push_back(std::move(D));
  }
  out.dim_kernel = static_cast<int>(out.kernel.size());
  return out;
}

namespace detail {

inline std::uint64_t ideal_content_hash(const Ideal& I) {
  Fnv1a h;
  h.feed("ideal");
  h.feed(std::to_string(I.algebra->hash));
  for (const QVec& row : I.basis.rows())
    for (const Rat& x : row) h.feed(rat_to_string(x));
  return h.value();
}

/// The affine criteria and jet addition query the same induced maps
/// repeatedly; memoize per (algebra, ideal) content.
inline std::shared_ptr<const InducedDerivationMap> cached_induced_map(const AlgebraPtr& A, const Ideal& I) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const InducedDerivationMap>> cache;
  std::uint64_t key = ideal_content_hash(I);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto value = std::make_shared<const InducedDerivationMap>(induced_derivation_map(A, I));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(value)).first->second;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Left exactness of the affine sequence (kernel criterion)
// ---------------------------------------------------------------------------

struct LeftExactness {
  bool holds = false;
  enum class Via { fast_path, full_check } via = Via::full_check;
  std::optional<QMat> witness_derivation;  // map A -> A with values in I
  std::optional<Element> witness_element;  // x in I with D(x) != 0
  std::optional<Element> witness_value;    // D(x)

  std::string via_name() const { return via == Via::fast_path ? "Ann(I)^2 fast path" : "full derivation-space check"; }
};

/// Decides whether every derivation A -> I vanishes on I (equivalently
/// Der(B,I) = Der(A,I), the kernel condition of the affine sequence). If
/// I <= Ann(I)^2 the answer is yes with no system to solve; otherwise the
/// derivation space is computed and a violating derivation is reported on
/// failure. Precondition: I <= Ann(I).
inline LeftExactness left_exactness_test(const AlgebraPtr& A, const Ideal& I) {
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  Ideal ann = annihilator(A, I);
  for (const QVec& x : I.basis.rows())
    require(ann.basis.contains(x), errc::hypothesis_violated,
            "I is not contained in Ann(I); the kernel criterion does not apply");

  LeftExactness out;
  Ideal ann2 = ideal_square(ann);
  bool fast = true;
  for (const QVec& x : I.basis.rows())
    if (!ann2.basis.contains(x)) {
      fast = false;
      break;
    }
  if (fast) {
    out.holds = true;
    out.via = LeftExactness::Via::fast_path;
    return out;
  }

  out.via = LeftExactness::Via::full_check;
  DerivationSpace derAI = derivation_space(module_ideal(A, I));
  for (const QMat& D : derAI.basis)
    for (const QVec& x : I.basis.rows()) {
      QVec val = D.apply(x);
      if (!vec_is_zero(val)) {
        out.holds = false;
        out.witness_derivation = derAI.embedded(D);
        out.witness_element = Element{A, x};
        out.witness_value = Element{A, derAI.module.embed.apply(val)};
        return out;
      }
    }
  out.holds = true;
  return out;
}

// ---------------------------------------------------------------------------
// Automorphisms
// ---------------------------------------------------------------------------

struct Automorphism {
  AlgebraPtr algebra;
  QMat matrix;

  Element apply(const Element& e) const {
    require(same_algebra(e.algebra, algebra), errc::algebra_mismatch, "element from another algebra");
    return {algebra, matrix.apply(e.coords)};
  }
};

inline Automorphism identity_automorphism(const AlgebraPtr& A) { return {A, QMat::identity(A->dim())}; }

inline Automorphism compose(const Automorphism& a, const Automorphism& b) {
  require(same_algebra(a.algebra, b.algebra), errc::algebra_mismatch, "automorphisms of different algebras");
  return {a.algebra, a.matrix.mul(b.matrix)};
}

inline Automorphism inverse(const Automorphism& a) { return {a.algebra, inverse(a.matrix)}; }

inline bool operator==(const Automorphism& a, const Automorphism& b) {
  return same_algebra(a.algebra, b.algebra) && a.matrix == b.matrix;
}

/// Multiplicative, fixes the unit, invertible, and preserves the maximal
/// ideal (no unit component in the image of any maximal basis element).
inline bool verify_automorphism(const AlgebraPtr& A, const QMat& matrix) {
  if (matrix.rows != A->dim() || matrix.cols != A->dim()) return false;
  for (int j = 1; j < A->dim(); ++j)
    if (!is_zero(matrix.at(0, j))) return false;
  if (!try_inverse(matrix).has_value()) return false;
  return is_algebra_morphism(Morphism{A, A, matrix});
}

/// The unique endomorphism extending generator -> image, for algebras that
/// carry a monomial presentation (truncated algebras and their quotients).
/// Substitution is followed by a post-hoc multiplicativity check (the images
/// must satisfy the defining relations) and an invertibility check.
inline Automorphism automorphism_from_generator_images(const AlgebraPtr& A, const std::vector<Element>& images) {
  require(A->presentation.has_monomial_basis(), errc::presentation_missing,
          "algebra carries no monomial presentation of its basis");
  require(images.size() == A->presentation.generators.size(), errc::relations_violated,
          "expected one image per generator");
  for (const Element& im : images) {
    require(same_algebra(im.algebra, A), errc::algebra_mismatch, "image from another algebra");
    require(im.in_maximal_ideal(), errc::element_not_in_maximal,
            "generator image " + to_string(im) + " is not in the maximal ideal");
  }

  int d = A->dim();
  QMat T(d, d);
  for (int j = 0; j < d; ++j) {
    const Expo& mono = A->presentation.basis_monomials[static_cast<std::size_t>(j)];
    Element val = el_unit(A);
    for (std::size_t g = 0; g < mono.size(); ++g)
      for (int e = 0; e < mono[g]; ++e) val = val * images[g];
    for (int r = 0; r < d; ++r) T.at(r, j) = val.coords[static_cast<std::size_t>(r)];
  }

  require(is_algebra_morphism(Morphism{A, A, T}), errc::relations_violated,
          "generator images do not satisfy the defining relations");
  require(try_inverse(T).has_value(), errc::not_invertible,
          "generator images do not span m/m^2 (substitution is not invertible)");
  return {A, std::move(T)};
}

// ---------------------------------------------------------------------------
// The affine addition law on automorphisms
// ---------------------------------------------------------------------------

/// True iff D (a map A -> A) is a derivation with values in I.
inline bool is_derivation_into(const AlgebraPtr& A, const QMat& D, const Ideal& I) {
  int d = A->dim();
  if (D.rows != d || D.cols != d) return false;
  for (int j = 0; j < d; ++j) {
    if (!I.basis.contains(D.apply(vec_unit(d, j)))) return false;
  }
  if (!vec_is_zero(D.apply(vec_unit(d, 0)))) return false;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      QVec lhs = D.apply(sparse_to_dense(A->basis_product(i, j), d));
      QVec rhs = detail::sparse_product(A->mul, d, vec_unit(d, i), D.apply(vec_unit(d, j)));
      vec_axpy(rhs, Rat(1), detail::sparse_product(A->mul, d, vec_unit(d, j), D.apply(vec_unit(d, i))));
      if (lhs != rhs) return false;
    }
  return true;
}

/// sigma (+) D = sigma + sigma.D, the affine action of Der(A, I) on the fibre
/// of automorphisms over B = A/I. Requires I <= Ann(I) and I <= m^2 and
/// D in Der(A, I); the result is verified to be an automorphism projecting to
/// the same automorphism of B as sigma.
inline Automorphism aut_oplus(const Automorphism& sigma, const QMat& D, const Ideal& I) {
  const AlgebraPtr& A = sigma.algebra;
  require(same_algebra(I.algebra, A), errc::algebra_mismatch, "ideal from another algebra");
  Ideal ann = annihilator(A, I);
  const RowSpace& m2 = A->maximal_power_space(2);
  for (const QVec& x : I.basis.rows())
    require(ann.basis.contains(x) && m2.contains(x), errc::hypothesis_violated,
            "aut_oplus requires I <= Ann(I) and I <= m^2");
  require(is_derivation_into(A, D, I), errc::hypothesis_violated, "D is not a derivation with values in I");

  QMat tau = sigma.matrix.add(sigma.matrix.mul(D));
  require(verify_automorphism(A, tau), errc::not_automorphism,
          "sigma + sigma.D failed the automorphism check");
  // columns of sigma.D must stay in I, so tau and sigma agree modulo I
  QMat delta = sigma.matrix.mul(D);
  for (int j = 0; j < A->dim(); ++j)
    require(I.basis.contains(delta.apply(vec_unit(A->dim(), j))), errc::not_automorphism,
            "sigma does not preserve I; the projection to B changed");
  return {A, std::move(tau)};
}

/// Deterministic random automorphism: random invertible linear part on the
/// generators plus random higher-order terms, resampled until the
/// substitution verifies.
inline Automorphism random_automorphism(const AlgebraPtr& A, Rng& rng) {
  int g = static_cast<int>(A->presentation.generators.size());
  require(A->presentation.has_monomial_basis(), errc::presentation_missing,
          "sampling needs a monomial presentation");
  const RowSpace& m2 = A->maximal_power_space(2);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Element> images;
    for (int i = 0; i < g; ++i) {
      Element im = el_zero(A);
      for (int h = 0; h < g; ++h) {
        Rat c = rng.small_rational(2, 1);
        if (i == h && is_zero(c)) c = 1;
        im = im + c * Element{A, A->presentation.generators[static_cast<std::size_t>(h)]};
      }
      for (const QVec& row : m2.rows())
        if (rng.chance(1, 3)) im = im + rng.small_rational(2, 2) * Element{A, row};
      images.push_back(std::move(im));
    }
    try {
      return automorphism_from_generator_images(A, images);
    } catch (const Error&) {
      continue;  // resample
    }
  }
  fail(errc::not_invertible, "automorphism sampling failed to converge");
}

}  // namespace weilforge
