#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "symsig/errors.hpp"
#include "symsig/structures.hpp"

using namespace symsig;

namespace {

// Rank-one complex in degrees 1, 0 with differential (t - 1) and the
// standard one-dimensional structure on it.
SymmetricStructure circle_structure(const Ring& R) {
  Elem t = monomial(R, 1, 1);
  ChainComplex C(R, {1, 1}, {mat_from_elems(R, 1, 1, {sub(t, one(R))})});
  StructureLayers phis(2);
  phis[0] = {mat_from_elems(R, 1, 1, {one(R)}),
             mat_from_elems(R, 1, 1, {monomial(R, -1, 1)})};
  phis[1] = {mat_zero(R, 1, 0), mat_from_ints(R, 1, 1, {-1})};
  return SymmetricStructure(std::move(C), 1, std::move(phis));
}

// Two points of opposite sign: a zero-dimensional structure.
SymmetricStructure two_points(const Ring& R) {
  ChainComplex C(R, {2}, {});
  StructureLayers phis(1);
  phis[0] = {mat_from_ints(R, 2, 2, {1, 0, 0, -1})};
  return SymmetricStructure(std::move(C), 0, std::move(phis));
}

// Interval pair over Z[t,t^-1]: ambient R --[(-1, t)]--> R^2 with the two
// endpoint points as boundary, and hand-checked relative layers.
PoincarePair interval_pair() {
  Ring R = Ring::laurent_z();
  Elem t = monomial(R, 1, 1);
  SymmetricStructure bd = two_points(R);
  ChainComplex amb(R, {2, 1}, {mat_from_elems(R, 2, 1, {neg(one(R)), t})});
  ChainMap incl(bd.C, amb, {mat_identity(R, 2)});
  StructureLayers dphis(2);
  dphis[0] = {mat_from_elems(R, 2, 1, {zero(R), neg(t)}),
              mat_from_ints(R, 1, 2, {-1, 0})};
  dphis[1] = {mat_zero(R, 2, 0), mat_from_ints(R, 1, 1, {-1})};
  return PoincarePair(std::move(bd), std::move(amb), std::move(incl), 1,
                      std::move(dphis));
}

StructureLayers random_layers(const ChainComplex& C, int nu,
                              std::mt19937_64& rng, int max_num = 3,
                              int max_exp = 1) {
  StructureLayers th(nu + 1);
  for (int s = 0; s <= nu; ++s)
    for (int r = 0; r <= C.top; ++r)
      th[s].push_back(random_matrix(C.ring, C.rank(r), C.rank(nu - r + s), rng,
                                    max_num, max_exp));
  return th;
}

void expect_ok(const ValidationReport& rep) {
  std::string why = "(none)";
  if (const CheckResult* f = rep.first_failure())
    why = f->check + " [degree " + std::to_string(f->degree) + "] " + f->note;
  INFO("first failing check: " << why);
  CHECK(rep.ok);
}

bool has_failed(const ValidationReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (!c.pass && c.check.find(name) != std::string::npos) return true;
  return false;
}

bool all_passed(const ValidationReport& rep, const std::string& name) {
  bool seen = false;
  for (const auto& c : rep.checks)
    if (c.check.find(name) != std::string::npos) {
      seen = true;
      if (!c.pass) return false;
    }
  return seen;
}

bool layers_equal(const StructureLayers& a, const StructureLayers& b) {
  if (a.size() != b.size()) return false;
  for (size_t s = 0; s < a.size(); ++s) {
    if (a[s].size() != b[s].size()) return false;
    for (size_t r = 0; r < a[s].size(); ++r)
      if (!(a[s][r] == b[s][r])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("coboundaries of arbitrary layer data satisfy the relations") {
  std::mt19937_64 rng(2026);
  for (const Ring& R : {Ring::Q(), Ring::Z(), Ring::laurent_z(),
                        Ring::cyclic_z(3)}) {
    for (int trial = 0; trial < 6; ++trial) {
      ChainComplex C = random_complex(R, rng, 3, R.is_scalar() ? 4 : 3);
      int n = C.top + static_cast<int>(rng() % 2);
      StructureLayers kappa = random_layers(C, n + 1, rng);
      SymmetricStructure x = coboundary_structure(C, n, kappa);
      CHECK(relations_hold(C, n, x.phis));
    }
  }
}

TEST_CASE("circle structure validates over both Laurent rings") {
  for (const Ring& R : {Ring::laurent_z(), Ring::laurent_q()}) {
    SymmetricStructure x = circle_structure(R);
    CHECK(relations_hold(x.C, x.n, x.phis));
    expect_ok(validate_symmetric_complex(x));
  }
}

TEST_CASE("zero-dimensional structures and their pairs validate") {
  SymmetricStructure pts = two_points(Ring::laurent_z());
  expect_ok(validate_symmetric_complex(pts));

  PoincarePair P = interval_pair();
  expect_ok(validate_pair(P));
  expect_ok(validate_pair(negate_pair(P)));
  expect_ok(validate_pair(pair_sum(P, negate_pair(P))));
}

TEST_CASE("validators detect corrupted data") {
  SUBCASE("negated duality component breaks the relations") {
    SymmetricStructure x = circle_structure(Ring::laurent_q());
    x.phis[0][0] = mat_neg(x.phis[0][0]);
    ValidationReport rep = validate_symmetric_complex(x);
    CHECK_FALSE(rep.ok);
    CHECK(has_failed(rep, "relation s="));
    REQUIRE(rep.first_failure() != nullptr);
    CHECK(rep.first_failure()->residual.has_value());
  }
  SUBCASE("negated relative component breaks the pair relations") {
    PoincarePair P = interval_pair();
    P.dphis[0][0] = mat_neg(P.dphis[0][0]);
    ValidationReport rep = validate_pair(P);
    CHECK_FALSE(rep.ok);
    CHECK(has_failed(rep, "pair-relation"));
  }
  SUBCASE("zeroed differential is caught by the relations") {
    PoincarePair P = interval_pair();
    std::vector<Mat> diffs = {mat_zero(P.ambient.ring, 2, 1)};
    std::vector<Mat> incl = {P.incl.f(0)};
    ValidationReport rep = validate_pair_candidate(
        P.ambient.ring, P.boundary.C.ranks, P.boundary.C.diffs,
        P.boundary.phis, P.ambient.ranks, diffs, incl, P.dphis, P.n);
    CHECK_FALSE(rep.ok);
  }
  SUBCASE("non-composable differentials are caught") {
    Ring R = Ring::Z();
    std::vector<Mat> diffs = {mat_from_ints(R, 1, 1, {1}),
                              mat_from_ints(R, 1, 1, {1})};
    ValidationReport rep =
        validate_complex_candidate(R, {1, 1, 1}, diffs, 2, StructureLayers(3));
    CHECK_FALSE(rep.ok);
    CHECK(has_failed(rep, "differential-squares"));
  }
  SUBCASE("inclusion that fails to be a chain map is reported") {
    SymmetricStructure x = circle_structure(Ring::laurent_q());
    PoincarePair P = cylinder_pair(x);
    std::vector<Mat> incl = {P.incl.f(0), P.incl.f(1)};
    incl[1] = mat_from_ints(P.ambient.ring, 1, 2, {1, 2});
    ValidationReport rep = validate_pair_candidate(
        P.ambient.ring, P.boundary.C.ranks, P.boundary.C.diffs,
        P.boundary.phis, P.ambient.ranks, P.ambient.diffs, incl, P.dphis, P.n);
    CHECK_FALSE(rep.ok);
    CHECK(has_failed(rep, "inclusion-chain-map"));
  }
}

TEST_CASE("algebraic operations preserve validity") {
  SymmetricStructure x = circle_structure(Ring::laurent_q());

  SUBCASE("negation and direct sum") {
    expect_ok(validate_symmetric_complex(negate_structure(x)));
    expect_ok(validate_symmetric_complex(
        direct_sum_structure(x, negate_structure(x))));
  }
  SUBCASE("sum with the negation satisfies relations but loses duality") {
    SymmetricStructure cancel = add_structures(x, negate_structure(x));
    ValidationReport rep = validate_symmetric_complex(cancel);
    CHECK(all_passed(rep, "relation s="));
    CHECK(has_failed(rep, "duality-equivalence"));
  }
  SUBCASE("transport along an equivalence") {
    std::mt19937_64 rng(7);
    std::vector<Mat> U;
    for (int i = 0; i <= x.C.top; ++i)
      U.push_back(random_unimodular(x.C.ring, x.C.rank(i), rng, 5));
    ChainMap u = basis_change(x.C, U);
    expect_ok(validate_symmetric_complex(transport_structure(x, u)));
  }
  SUBCASE("transport along any chain map keeps the relations") {
    std::vector<Mat> twice = {mat_from_ints(x.C.ring, 1, 1, {2}),
                              mat_from_ints(x.C.ring, 1, 1, {2})};
    ChainMap u(x.C, x.C, twice);
    SymmetricStructure y = transport_structure(x, u);
    CHECK(relations_hold(y.C, y.n, y.phis));
    expect_ok(validate_symmetric_complex(y));
  }
  SUBCASE("coefficient change along evaluation at 1") {
    RingMap aug = RingMap::augmentation(Ring::laurent_q());
    expect_ok(validate_symmetric_complex(induce_structure(x, aug)));
  }
}

TEST_CASE("coboundary perturbations are invisible to the validator") {
  std::mt19937_64 rng(11);
  SymmetricStructure laurent = circle_structure(Ring::laurent_q());
  SymmetricStructure rational =
      induce_structure(laurent, RingMap::augmentation(Ring::laurent_q()));
  for (const SymmetricStructure& x : {rational, laurent}) {
    for (int trial = 0; trial < 3; ++trial) {
      StructureLayers kappa = random_layers(x.C, x.n + 1, rng);
      SymmetricStructure moved =
          add_structures(x, coboundary_structure(x.C, x.n, kappa));
      expect_ok(validate_symmetric_complex(moved));
    }
  }
}

TEST_CASE("structure coboundary equations solve and verify") {
  std::mt19937_64 rng(23);
  SUBCASE("round trip over the rationals") {
    for (int trial = 0; trial < 6; ++trial) {
      ChainComplex C = random_complex(Ring::Q(), rng, 3, 4);
      int n = C.top + static_cast<int>(rng() % 2);
      StructureLayers kappa = random_layers(C, n + 1, rng);
      StructureLayers delta = coboundary_structure(C, n, kappa).phis;
      StructureHomotopyOutcome out = solve_structure_coboundary(C, n, delta);
      REQUIRE(out.status == SolveStatus::Solved);
      CHECK(layers_equal(coboundary_structure(C, n, out.kappa).phis, delta));
    }
  }
  SUBCASE("round trip over Z[t,t^-1]") {
    SymmetricStructure x = circle_structure(Ring::laurent_z());
    StructureLayers kappa = random_layers(x.C, x.n + 1, rng, 2, 1);
    StructureLayers delta = coboundary_structure(x.C, x.n, kappa).phis;
    StructureHomotopyOutcome out =
        solve_structure_coboundary(x.C, x.n, delta);
    REQUIRE(out.status == SolveStatus::Solved);
    CHECK(layers_equal(coboundary_structure(x.C, x.n, out.kappa).phis, delta));
  }
}

TEST_CASE("pair completion from boundary data") {
  SUBCASE("interval with twisted differential") {
    PoincarePair frozen = interval_pair();
    CompletePairOutcome out = complete_pair(frozen.ambient, frozen.incl,
                                            frozen.boundary, 1);
    REQUIRE(out.status == SolveStatus::Solved);
    expect_ok(validate_pair(*out.pair));
  }
  SUBCASE("interval with constant differential") {
    Ring R = Ring::laurent_z();
    SymmetricStructure bd = two_points(R);
    ChainComplex amb(R, {2, 1}, {mat_from_ints(R, 2, 1, {-1, 1})});
    ChainMap incl(bd.C, amb, {mat_identity(R, 2)});
    CompletePairOutcome out = complete_pair(amb, incl, bd, 1);
    REQUIRE(out.status == SolveStatus::Solved);
    expect_ok(validate_pair(*out.pair));
  }
  SUBCASE("disk bounding the rational circle") {
    RingMap aug = RingMap::augmentation(Ring::laurent_q());
    SymmetricStructure bd =
        induce_structure(circle_structure(Ring::laurent_q()), aug);
    Ring R = bd.C.ring;
    ChainComplex amb(R, {1, 1, 1}, {mat_from_ints(R, 1, 1, {0}),
                                    mat_from_ints(R, 1, 1, {1})});
    ChainMap incl(bd.C, amb, {mat_identity(R, 1), mat_identity(R, 1)});
    CompletePairOutcome out = complete_pair(amb, incl, bd, 2);
    REQUIRE(out.status == SolveStatus::Solved);
    expect_ok(validate_pair(*out.pair));
  }
  SUBCASE("obstructed completion is refused with a certificate") {
    Ring R = Ring::Z();
    ChainComplex C(R, {2}, {});
    StructureLayers phis(1);
    phis[0] = {mat_identity(R, 2)};
    SymmetricStructure bd(C, 0, phis);
    ChainComplex amb(R, {1}, {});
    ChainMap incl(C, amb, {mat_from_ints(R, 1, 2, {1, 1})});
    CompletePairOutcome out = complete_pair(amb, incl, bd, 1);
    CHECK(out.status == SolveStatus::NoSolution);
  }
}

TEST_CASE("closed and cylinder pairs validate") {
  SymmetricStructure xq = circle_structure(Ring::laurent_q());
  expect_ok(validate_pair(closed_pair(xq)));
  expect_ok(validate_pair(cylinder_pair(xq)));

  SymmetricStructure pts = two_points(Ring::laurent_z());
  expect_ok(validate_pair(closed_pair(pts)));
  expect_ok(validate_pair(cylinder_pair(pts)));

  SymmetricStructure xz = circle_structure(Ring::laurent_z());
  expect_ok(validate_pair(cylinder_pair(xz)));
}

namespace {

// Interval over Q bounding the two opposite points, with relative layers
// solved for and certified.
PoincarePair disk_pair_q() {
  Ring R = Ring::Q();
  SymmetricStructure bd = two_points(R);
  ChainComplex amb(R, {2, 1}, {mat_from_ints(R, 2, 1, {-1, 1})});
  ChainMap incl(bd.C, amb, {mat_identity(R, 2)});
  CompletePairOutcome out = complete_pair(amb, incl, bd, 1);
  REQUIRE(out.status == SolveStatus::Solved);
  return *out.pair;
}

}  // namespace

TEST_CASE("gluing two disks along the boundary gives a circle-like complex") {
  PoincarePair P = disk_pair_q();
  PoincarePair Q = disk_pair_q();
  SymmetricStructure g = glue_pairs(P, Q, identity_map(P.boundary.C));
  CHECK(g.n == 1);
  CHECK(g.C.rank(0) == 4);
  CHECK(g.C.rank(1) == 4);
  expect_ok(validate_symmetric_complex(g));
  for (int i : {0, 1}) {
    HomologyGroup h = homology(g.C, i);
    CHECK(h.free_rank == 1);
    CHECK(h.torsion.empty());
  }
}

TEST_CASE("gluing the twisted interval with its double validates") {
  PoincarePair P = interval_pair();
  PoincarePair Q = interval_pair();
  SymmetricStructure g = glue_pairs(P, Q, identity_map(P.boundary.C));
  CHECK(g.n == 1);
  CHECK(relations_hold(g.C, g.n, g.phis));
  RingMap up = RingMap::inclusion(Ring::laurent_z(), Ring::laurent_q());
  expect_ok(validate_symmetric_complex(induce_structure(g, up)));
}

TEST_CASE("gluing along empty boundaries is the direct sum, second negated") {
  Ring R = Ring::Q();
  SymmetricStructure x = two_points(R);
  Mat U = mat_from_ints(R, 2, 2, {1, 1, 0, 1});
  SymmetricStructure y = transport_structure(x, basis_change(x.C, {U}));
  PoincarePair P = closed_pair(x);
  PoincarePair Q = closed_pair(y);
  SymmetricStructure g = glue_pairs(P, Q, identity_map(P.boundary.C));
  SymmetricStructure expect =
      direct_sum_structure(x, negate_structure(y));
  CHECK(g.C == expect.C);
  CHECK(layers_equal(g.phis, expect.phis));
  expect_ok(validate_symmetric_complex(g));
}

TEST_CASE("boundary structures reconcile through a certified homotopy") {
  SUBCASE("perturbed rational circle bounding the disk") {
    RingMap aug = RingMap::augmentation(Ring::laurent_q());
    SymmetricStructure bd =
        induce_structure(circle_structure(Ring::laurent_q()), aug);
    Ring R = bd.C.ring;
    ChainComplex amb(R, {1, 1, 1}, {mat_from_ints(R, 1, 1, {0}),
                                    mat_from_ints(R, 1, 1, {1})});
    ChainMap incl(bd.C, amb, {mat_identity(R, 1), mat_identity(R, 1)});
    CompletePairOutcome P = complete_pair(amb, incl, bd, 2);
    REQUIRE(P.status == SolveStatus::Solved);

    StructureLayers kappa(2);
    kappa[0] = {mat_zero(R, 1, 0), mat_from_ints(R, 1, 1, {3})};
    kappa[1] = {mat_zero(R, 1, 0), mat_zero(R, 1, 0)};
    SymmetricStructure pert =
        add_structures(bd, coboundary_structure(bd.C, 1, kappa));
    REQUIRE(!layers_equal(pert.phis, bd.phis));
    CompletePairOutcome Q = complete_pair(amb, incl, pert, 2);
    REQUIRE(Q.status == SolveStatus::Solved);

    SymmetricStructure g =
        glue_pairs(*P.pair, *Q.pair, identity_map(bd.C));
    CHECK(g.n == 2);
    expect_ok(validate_symmetric_complex(g));
    CHECK(homology(g.C, 0).free_rank == 1);
    CHECK(homology(g.C, 1).is_zero());
    CHECK(homology(g.C, 2).free_rank == 1);
  }
  SUBCASE("perturbed cylinder glue over the Laurent ring") {
    SymmetricStructure x = circle_structure(Ring::laurent_q());
    Ring R = x.C.ring;
    StructureLayers kappa(2);
    kappa[0] = {mat_zero(R, 1, 0), mat_from_elems(R, 1, 1, {monomial(R, 1, 1)})};
    kappa[1] = {mat_zero(R, 1, 0), mat_zero(R, 1, 0)};
    SymmetricStructure pert =
        add_structures(x, coboundary_structure(x.C, 1, kappa));
    REQUIRE(!layers_equal(pert.phis, x.phis));
    PoincarePair P = cylinder_pair(x);
    PoincarePair Q = cylinder_pair(pert);
    SymmetricStructure g = glue_pairs(P, Q, identity_map(P.boundary.C));
    CHECK(g.n == 2);
    expect_ok(validate_symmetric_complex(g));
  }
}

TEST_CASE("gluing refuses incompatible identifications") {
  PoincarePair P = disk_pair_q();
  PoincarePair Q = disk_pair_q();
  Ring R = Ring::Q();
  SUBCASE("swap is an equivalence but breaks the structure rigidly") {
    ChainMap swap(P.boundary.C, P.boundary.C,
                  {mat_from_ints(R, 2, 2, {0, 1, 1, 0})});
    CHECK_THROWS_AS(glue_pairs(P, Q, swap), BoundaryMismatch);
  }
  SUBCASE("a non-equivalence is rejected outright") {
    ChainMap zero = zero_map(P.boundary.C, P.boundary.C);
    CHECK_THROWS_AS(glue_pairs(P, Q, zero), BoundaryMismatch);
  }
  SUBCASE("dimension mismatch is a usage error") {
    PoincarePair pt = closed_pair(two_points(R));
    CHECK_THROWS_AS(glue_pairs(P, pt, identity_map(P.boundary.C)), Error);
  }
}

TEST_CASE("mapping torus of the identity is the product with a circle") {
  SUBCASE("two points over Q") {
    SymmetricStructure x = two_points(Ring::Q());
    SymmetricStructure T = mapping_torus(x, identity_map(x.C));
    CHECK(T.n == 1);
    CHECK(T.C.rank(0) == 2);
    CHECK(T.C.rank(1) == 2);
    expect_ok(validate_symmetric_complex(T));
    CHECK(homology(T.C, 0).free_rank == 2);
    CHECK(homology(T.C, 1).free_rank == 2);
  }
  SUBCASE("two points over Z") {
    SymmetricStructure x = two_points(Ring::Z());
    SymmetricStructure T = mapping_torus(x, identity_map(x.C));
    expect_ok(validate_symmetric_complex(T));
  }
  SUBCASE("circle over the rational Laurent ring") {
    SymmetricStructure x = circle_structure(Ring::laurent_q());
    SymmetricStructure T = mapping_torus(x, identity_map(x.C));
    CHECK(T.n == 2);
    CHECK(T.C.rank(0) == 1);
    CHECK(T.C.rank(1) == 2);
    CHECK(T.C.rank(2) == 1);
    expect_ok(validate_symmetric_complex(T));
  }
}

TEST_CASE("mapping torus of a twisting self-map") {
  SUBCASE("multiplication by t on the circle is a strict isometry") {
    SymmetricStructure x = circle_structure(Ring::laurent_q());
    Ring R = x.C.ring;
    Mat t = mat_from_elems(R, 1, 1, {monomial(R, 1, 1)});
    ChainMap w(x.C, x.C, {t, t});
    SymmetricStructure T = mapping_torus(x, w);
    CHECK(T.n == 2);
    expect_ok(validate_symmetric_complex(T));
  }
  SUBCASE("a sign-breaking swap is refused") {
    SymmetricStructure x = two_points(Ring::Q());
    ChainMap swap(x.C, x.C,
                  {mat_from_ints(x.C.ring, 2, 2, {0, 1, 1, 0})});
    CHECK_THROWS_AS(mapping_torus(x, swap), StructureMismatch);
  }
}
