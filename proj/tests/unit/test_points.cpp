#include <doctest.h>

#include <variant>

#include "helpers.hpp"
#include "weilforge/points.hpp"

using namespace weilforge;
using weilforge::testing::pushforward_via_eps;
using weilforge::testing::random_element;
using weilforge::testing::random_poly;

namespace {

Element gen(const AlgebraPtr& A, int g = 0) { return {A, A->presentation.generators[static_cast<std::size_t>(g)]}; }

}  // namespace

TEST_CASE("near-points evaluate polynomials by substitution") {
  // A = R: an ordinary point of R^n
  auto R = rationals_algebra();
  NearPoint p = make_near_point(R, 2, {el_scalar(R, Rat(3)), el_scalar(R, Rat(-1))});
  CHECK(p.base == QVec{Rat(3), Rat(-1)});
  Poly f = Poly::variable(2, 0) * Poly::variable(2, 1);  // x*y
  CHECK(near_eval(p, f) == el_scalar(R, Rat(-3)));

  // dual numbers, image 2 + 3 xi: x^2 evaluates to 4 + 12 xi
  auto D = truncated_algebra(1, 1);
  NearPoint q = make_near_point(D, 1, {el_scalar(D, Rat(2)) + Rat(3) * gen(D)});
  Element val = near_eval(q, poly_pow(Poly::variable(1, 0), 2));
  CHECK(val == el_scalar(D, Rat(4)) + Rat(12) * gen(D));

  // R^2_1, image xi: x^3 evaluates to zero
  auto A = truncated_algebra(1, 2);
  NearPoint r = make_near_point(A, 1, {gen(A)});
  CHECK(near_eval(r, poly_pow(Poly::variable(1, 0), 3)).is_zero_element());
}

TEST_CASE("regularity of near-points") {
  auto A = truncated_algebra(2, 2);
  NearPoint std_pt = make_near_point(A, 2, {gen(A, 0) + el_scalar(A, Rat(5)), gen(A, 1)});
  CHECK(is_regular_point(std_pt));

  auto B = truncated_algebra(1, 2);
  NearPoint degenerate = make_near_point(B, 1, {gen(B) * gen(B)});
  CHECK_FALSE(is_regular_point(degenerate));

  auto R = rationals_algebra();
  CHECK(is_regular_point(make_near_point(R, 1, {el_scalar(R, Rat(7))})));
}

TEST_CASE("adding a derivation to a point (product obstruction)") {
  // dual numbers: any derivation value works
  auto D = truncated_algebra(1, 1);
  NearPoint p = make_near_point(D, 1, {Rat(2) * gen(D)});
  PointDerivation v = make_point_derivation(p, {Rat(5) * gen(D)});
  auto sum = add_derivation_to_point(p, v);
  REQUIRE(std::holds_alternative<NearPoint>(sum));
  CHECK(std::get<NearPoint>(sum).images[0] == Rat(7) * gen(D));

  // R^2_1 with D(x) = xi: xi * xi != 0 obstructs
  auto A = truncated_algebra(1, 2);
  NearPoint q = make_near_point(A, 1, {el_zero(A)});
  auto blocked = add_derivation_to_point(q, make_point_derivation(q, {gen(A)}));
  REQUIRE(std::holds_alternative<ObstructionWitness>(blocked));
  CHECK_FALSE(std::get<ObstructionWitness>(blocked).product.is_zero_element());

  // R^3_1 with D(x) = xi^2: m^2 * m^2 = 0, a genuine point
  auto A3 = truncated_algebra(1, 3);
  NearPoint r = make_near_point(A3, 1, {gen(A3)});
  auto fine = add_derivation_to_point(r, make_point_derivation(r, {gen(A3) * gen(A3)}));
  CHECK(std::holds_alternative<NearPoint>(fine));
}

TEST_CASE("point differences") {
  auto D = truncated_algebra(1, 1);
  NearPoint p = make_near_point(D, 1, {el_scalar(D, Rat(2)) + Rat(3) * gen(D)});
  NearPoint q = make_near_point(D, 1, {el_scalar(D, Rat(2)) + Rat(5) * gen(D)});

  auto self_diff = point_difference(p, p);
  REQUIRE(std::holds_alternative<PointDerivation>(self_diff));
  CHECK(std::get<PointDerivation>(self_diff).values[0].is_zero_element());

  auto diff = point_difference(p, q);
  REQUIRE(std::holds_alternative<PointDerivation>(diff));
  CHECK(std::get<PointDerivation>(diff).values[0] == Rat(2) * gen(D));

  auto A = truncated_algebra(1, 2);
  auto bad = point_difference(make_near_point(A, 1, {el_zero(A)}), make_near_point(A, 1, {gen(A)}));
  CHECK(std::holds_alternative<ObstructionWitness>(bad));

  NearPoint other_base = make_near_point(D, 1, {el_scalar(D, Rat(9))});
  CHECK_THROWS_AS(point_difference(p, other_base), Error);
}

TEST_CASE("sum succeeds exactly when the image ideal has null square") {
  Rng rng(303);
  for (auto A : {truncated_algebra(1, 2), truncated_algebra(1, 3), truncated_algebra(2, 2)}) {
    for (int trial = 0; trial < 60; ++trial) {
      NearPoint p = make_near_point(A, 2, {random_element(A, rng), random_element(A, rng)});
      PointDerivation D = make_point_derivation(p, {random_element(A, rng), random_element(A, rng)});
      bool added = std::holds_alternative<NearPoint>(add_derivation_to_point(p, D));
      bool ideal_null = is_null_square(ideal_span(A, D.values));
      bool pairs_null = !weilforge::detail::image_square_witness(p.n, D.values).has_value();
      CHECK(added == ideal_null);
      CHECK(added == pairs_null);
    }
  }
}

TEST_CASE("fibre affine check") {
  // two points in one fibre of M^3_1 -> M^1_1 (I = m^2)
  auto A = truncated_algebra(1, 3);
  Ideal I = maximal_power(A, 2);
  NearPoint p = make_near_point(A, 1, {gen(A)});
  NearPoint q = make_near_point(A, 1, {gen(A) + Rat(2) * (gen(A) * gen(A))});
  FiberAffineCheck rec = fiber_affine_check(A, I, {p, q});
  CHECK(rec.hypothesis_ok);
  CHECK(rec.all_pass);

  // single point and D = 0
  FiberAffineCheck single = fiber_affine_check(A, I, {p});
  CHECK(single.all_pass);

  // R^4_1 with I = m^2: hypothesis fails with the xi^4 obstruction
  auto A4 = truncated_algebra(1, 4);
  FiberAffineCheck obstructed =
      fiber_affine_check(A4, maximal_power(A4, 2), {make_near_point(A4, 1, {gen(A4)})});
  CHECK_FALSE(obstructed.hypothesis_ok);
  REQUIRE_FALSE(obstructed.axioms.empty());
  CHECK(obstructed.axioms[0].witness.find("xi^4") != std::string::npos);

  // points in different fibres are rejected
  NearPoint far = make_near_point(A, 1, {Rat(2) * gen(A)});
  CHECK_THROWS_AS(fiber_affine_check(A, I, {p, far}), Error);
}

TEST_CASE("jets of ordinary points") {
  auto R = rationals_algebra();
  Jet j0 = jet_of(make_near_point(R, 2, {el_scalar(R, Rat(1)), el_scalar(R, Rat(2))}));
  Jet j0_again = jet_of(make_near_point(R, 2, {el_scalar(R, Rat(1)), el_scalar(R, Rat(2))}));
  Jet other = jet_of(make_near_point(R, 2, {el_scalar(R, Rat(1)), el_scalar(R, Rat(3))}));
  CHECK(j0 == j0_again);
  CHECK_FALSE(j0 == other);
}

TEST_CASE("jets identify points up to automorphism") {
  auto D = truncated_algebra(1, 1);
  // (xi, 2 xi) and (2 xi, 4 xi) describe the same line direction
  Jet a = jet_of(make_near_point(D, 2, {gen(D), Rat(2) * gen(D)}));
  Jet b = jet_of(make_near_point(D, 2, {Rat(2) * gen(D), Rat(4) * gen(D)}));
  CHECK(a == b);
  CHECK(a.kernel.dim() == 1);  // span{2x - y} among degree-<=1 centered polynomials

  Jet c = jet_of(make_near_point(D, 2, {gen(D), Rat(3) * gen(D)}));
  CHECK_FALSE(a == c);

  // non-regular points have no jet
  auto A = truncated_algebra(1, 2);
  CHECK_THROWS_AS(jet_of(make_near_point(A, 1, {gen(A) * gen(A)})), Error);
}

TEST_CASE("jets are invariant under composition with automorphisms") {
  auto A = truncated_algebra(1, 3);
  Rng rng(77);
  NearPoint p = make_near_point(A, 2, {gen(A), gen(A) * gen(A)});
  Jet base = jet_of(p);
  for (int trial = 0; trial < 10; ++trial) {
    Automorphism sigma = random_automorphism(A, rng);
    std::vector<Element> images;
    for (const Element& im : p.images) images.push_back(sigma.apply(im));
    Jet moved = jet_of(make_near_point(A, 2, std::move(images)));
    CHECK(base == moved);
  }
}

TEST_CASE("jet projection") {
  auto A = truncated_algebra(1, 2);
  Ideal I = maximal_power(A, 2);

  // jet of the parabola (xi, xi^2) projects to the jet of its tangent line
  Jet parabola = jet_of(make_near_point(A, 2, {gen(A), gen(A) * gen(A)}));
  Jet projected = jet_project(parabola, I);
  auto D = truncated_algebra(1, 1);
  Jet line = jet_of(make_near_point(D, 2, {gen(D), el_zero(D)}));
  CHECK(projected == line);

  // projecting along the zero ideal changes nothing
  Jet same = jet_project(parabola, zero_ideal(A));
  CHECK(same == parabola);

  // projecting to B = R lands on the base point's jet
  Jet pt = jet_project(parabola, maximal_power(A, 1));
  Jet expected = jet_of(make_near_point(rationals_algebra(), 2,
                                        {el_scalar(rationals_algebra(), Rat(0)),
                                         el_scalar(rationals_algebra(), Rat(0))}));
  CHECK(pt == expected);

  // representative independence: project after moving by an automorphism
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Automorphism sigma = random_automorphism(A, rng);
    std::vector<Element> images;
    for (const Element& im : parabola.representative.images) images.push_back(sigma.apply(im));
    Jet moved = jet_of(make_near_point(A, 2, std::move(images)));
    CHECK(jet_project(moved, I) == projected);
  }
}

TEST_CASE("jet addition moves jets inside one projection fibre") {
  auto A = truncated_algebra(1, 2);  // l=2, k=1: affine sequence exact (4 >= 4)
  Ideal I = maximal_power(A, 2);
  NearPoint p = make_near_point(A, 2, {gen(A), el_zero(A)});
  Jet j = jet_of(p);

  JetAddResult unchanged = jet_add(j, zero_derivation(p), I);
  CHECK(unchanged.jet == j);
  CHECK(unchanged.exact_sequence);
  CHECK(unchanged.warnings.empty());

  PointDerivation D = make_point_derivation(p, {el_zero(A), gen(A) * gen(A)});
  JetAddResult shifted = jet_add(j, D, I);
  CHECK_FALSE(shifted.jet == j);
  CHECK(jet_project(shifted.jet, I) == jet_project(j, I));

  // values must lie in I
  CHECK_THROWS_AS(jet_add(j, make_point_derivation(p, {gen(A), el_zero(A)}), I), Error);

  // hypothesis violations are rejected
  auto A4 = truncated_algebra(1, 4);
  NearPoint p4 = make_near_point(A4, 1, {gen(A4)});
  CHECK_THROWS_AS(jet_add(jet_of(p4), zero_derivation(p4), maximal_power(A4, 2)), Error);
}

TEST_CASE("jet addition flags inexact sequences and exhibits class dependence") {
  auto A = truncated_algebra(1, 3);  // l=3, k=1: 3k+1 = 4 < 6 = 2l, not exact
  Ideal I = maximal_power(A, 2);
  NearPoint p = make_near_point(A, 2, {gen(A), el_zero(A)});
  Jet j = jet_of(p);

  Element xi2 = gen(A) * gen(A);
  // D' and D = D' + (left-exactness witness applied to p) define the same
  // tangent class at the jet, but different jets
  PointDerivation Dp = make_point_derivation(p, {el_zero(A), xi2});
  PointDerivation D = make_point_derivation(p, {xi2, xi2});

  JetAddResult r1 = jet_add(j, Dp, I);
  JetAddResult r2 = jet_add(j, D, I);
  CHECK_FALSE(r1.exact_sequence);
  CHECK_FALSE(r1.warnings.empty());
  CHECK_FALSE(r1.jet == r2.jet);  // same class, different jets: condition (1) fails

  // the difference D - D' kills the kernel of p (it factors through a
  // derivation of A applied after p), so the classes really agree
  PointDerivation delta = make_point_derivation(p, {xi2, el_zero(A)});
  for (const QVec& kv : j.kernel.rows()) {
    Poly f = Poly::zero(2);
    for (std::size_t c = 0; c < kv.size(); ++c) f.add_term(j.monomials[c], kv[c]);
    CHECK(derivation_eval(delta, f).is_zero_element());
  }

  // both sums still project to the same B-jet
  CHECK(jet_project(r1.jet, I) == jet_project(r2.jet, I));
}

TEST_CASE("jet addition acts freely and transitively on exact fibres") {
  auto A = truncated_algebra(1, 2);  // l=2, k=1: the sequence is exact
  Ideal I = maximal_power(A, 2);
  Rng rng(4242);
  NearPoint p = make_near_point(A, 2, {gen(A), el_zero(A)});
  Jet j = jet_of(p);

  for (int trial = 0; trial < 20; ++trial) {
    auto vertical = [&](Rng& r) {
      std::vector<Element> values;
      for (int i = 0; i < 2; ++i) {
        Element v = el_zero(A);
        for (const QVec& row : I.basis.rows()) vec_axpy(v.coords, r.small_rational(2, 1), row);
        values.push_back(std::move(v));
      }
      return make_point_derivation(p, values);
    };
    PointDerivation D = vertical(rng), E = vertical(rng);

    // associativity: (j + D) + E' = j + (D + E) where E' is E rebased at the
    // moved representative
    JetAddResult jD = jet_add(j, D, I);
    PointDerivation E_moved = make_point_derivation(jD.jet.representative, E.values);
    std::vector<Element> sum_values = {D.values[0] + E.values[0], D.values[1] + E.values[1]};
    CHECK(jet_add(jD.jet, E_moved, I).jet == jet_add(j, make_point_derivation(p, sum_values), I).jet);

    // transitivity: any jet in the fibre is reachable by the difference of
    // representatives
    NearPoint q = make_near_point(A, 2, {p.images[0] + E.values[0], p.images[1] + E.values[1]});
    Jet target = jet_of(q);
    auto diff = point_difference(p, q);
    REQUIRE(std::holds_alternative<PointDerivation>(diff));
    CHECK(jet_add(j, std::get<PointDerivation>(diff), I).jet == target);
    CHECK(jet_project(target, I) == jet_project(j, I));

    // freeness on classes: equal sums force the difference to kill the kernel
    if (jet_add(j, D, I).jet == jet_add(j, E, I).jet) {
      PointDerivation delta = make_point_derivation(p, {D.values[0] - E.values[0], D.values[1] - E.values[1]});
      for (const QVec& kv : j.kernel.rows()) {
        Poly f = Poly::zero(2);
        for (std::size_t c = 0; c < kv.size(); ++c) f.add_term(j.monomials[c], kv[c]);
        CHECK(derivation_eval(delta, f).is_zero_element());
      }
    }
  }
}

TEST_CASE("jet addition at the prediction boundary (l,k) = (4,2)") {
  // The closed-form threshold 3k+1 >= 2l predicts no affine structure here,
  // but the general criteria hold: every derivation into m^3 kills m^3, so
  // same-class vertical derivations give the same jet, end to end.
  auto A = truncated_algebra(1, 4);
  Ideal I = maximal_power(A, 3);
  NearPoint p = make_near_point(A, 2, {gen(A), el_zero(A)});
  Jet j = jet_of(p);
  DerivationSpace derAI = derivation_space(module_ideal(A, I));
  Rng rng(606);
  for (int trial = 0; trial < 15; ++trial) {
    Element v0 = el_zero(A), v1 = el_zero(A);
    for (const QVec& row : I.basis.rows()) {
      vec_axpy(v0.coords, rng.small_rational(2, 1), row);
      vec_axpy(v1.coords, rng.small_rational(2, 1), row);
    }
    PointDerivation D = make_point_derivation(p, {v0, v1});
    QMat delta(A->dim(), A->dim());
    for (const QMat& b : derAI.basis) delta = delta.add(derAI.embedded(b).scaled(rng.small_rational(2, 1)));
    PointDerivation D2 = make_point_derivation(
        p, {v0 + Element{A, delta.apply(p.images[0].coords)}, v1 + Element{A, delta.apply(p.images[1].coords)}});
    JetAddResult r1 = jet_add(j, D, I);
    JetAddResult r2 = jet_add(j, D2, I);
    CHECK(r1.exact_sequence);
    CHECK(r1.warnings.empty());
    CHECK(r1.jet == r2.jet);
  }
}

TEST_CASE("tangent dimension bookkeeping") {
  auto R = rationals_algebra();
  TangentDims tr = tangent_dimensions(R, 3);
  CHECK(tr.point_tangent == 3);
  CHECK(tr.der_AA == 0);
  CHECK(tr.jet_tangent == 3);

  TangentDims lines = tangent_dimensions(truncated_algebra(1, 1), 2);
  CHECK(lines.point_tangent == 4);
  CHECK(lines.der_AA == 1);
  CHECK(lines.jet_tangent == 3);  // lines through points of the plane

  TangentDims second = tangent_dimensions(truncated_algebra(1, 2), 2);
  CHECK(second.point_tangent == 6);
  CHECK(second.der_AA == 2);
  CHECK(second.jet_tangent == 4);
}

TEST_CASE("functoriality of near-point transport") {
  Rng rng(99);
  auto A = truncated_algebra(1, 2);
  auto quoB = quotient_algebra(A, maximal_power(A, 2));
  auto quoR = quotient_algebra(quoB.algebra, maximal_power(quoB.algebra, 1));

  PolyMap f = make_poly_map(2, {random_poly(2, 2, rng), random_poly(2, 2, rng), random_poly(2, 2, rng)});
  PolyMap g = make_poly_map(3, {random_poly(3, 2, rng), random_poly(3, 2, rng)});

  // compose g . f symbolically
  std::vector<Poly> comp;
  for (const Poly& gc : g.components) {
    Poly acc = Poly::zero(2);
    for (const auto& [e, c] : gc.terms) {
      Poly term = Poly::constant(2, c);
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int rep = 0; rep < e[i]; ++rep) term = term * f.components[i];
      acc = acc + term;
    }
    comp.push_back(acc);
  }
  PolyMap gf = make_poly_map(2, comp);
  Morphism psi_phi = compose(quoR.projection, quoB.projection);

  for (int trial = 0; trial < 25; ++trial) {
    NearPoint p = make_near_point(A, 2, {random_element(A, rng), random_element(A, rng)});
    NearPoint direct = apply_map(gf, psi_phi, p);
    NearPoint staged = apply_map(g, quoR.projection, apply_map(f, quoB.projection, p));
    CHECK(direct == staged);
  }
}

TEST_CASE("pushforward agrees with the tangent-functor route") {
  Rng rng(123);
  auto A = truncated_algebra(1, 2);
  auto quo = quotient_algebra(A, maximal_power(A, 2));
  PolyMap f = make_poly_map(2, {random_poly(2, 2, rng), random_poly(2, 2, rng)});

  for (int trial = 0; trial < 15; ++trial) {
    NearPoint p = make_near_point(A, 2, {random_element(A, rng), random_element(A, rng)});
    PointDerivation D = make_point_derivation(p, {random_element(A, rng), random_element(A, rng)});
    PointDerivation direct = pushforward(f, quo.projection, D);
    std::vector<Element> via_eps = pushforward_via_eps(f, quo.projection, D);
    REQUIRE(via_eps.size() == direct.values.size());
    for (std::size_t i = 0; i < via_eps.size(); ++i) CHECK(direct.values[i] == via_eps[i]);
  }
}

TEST_CASE("preimages of regular points: both directions of the subalgebra obstruction") {
  // I <= m^2: every preimage of a regular point is regular
  auto A = truncated_algebra(1, 2);
  Ideal I = maximal_power(A, 2);
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Element img = gen(A) + rng.small_rational(2, 1) * (gen(A) * gen(A));
    NearPoint p = make_near_point(A, 1, {img});
    CHECK(is_regular_point(p));
  }

  // I not <= m^2: a subalgebra S with S/(S /\ I) = B supplies a non-regular
  // preimage of a regular point
  auto W = truncated_algebra(2, 1);           // basis {1, xi1, xi2}, m^2 = 0
  Ideal J = ideal_span(W, {gen(W, 1)});       // (xi2), not inside m^2 = 0
  auto quo = quotient_algebra(W, J);
  NearPoint s_point = make_near_point(W, 1, {gen(W, 0)});  // lives in S = Q[xi1]
  CHECK_FALSE(is_regular_point(s_point));                  // width of W is 2
  NearPoint image = make_near_point(quo.algebra, 1, {quo.projection.apply(gen(W, 0))});
  CHECK(is_regular_point(image));
}
