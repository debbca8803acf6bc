#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symsig/linalg.hpp"

using namespace symsig;

namespace {

Elem lz(long long c, long long e = 0) {
  return monomial(Ring::laurent_z(), e, c);
}
Elem lq(long long c, long long e = 0) {
  return monomial(Ring::laurent_q(), e, c);
}

Mat diag2(const Ring& R, long long a, long long b) {
  return mat_from_ints(R, 2, 2, {a, 0, 0, b});
}

void check_snf_contract(const Mat& A, int variant = 0) {
  SnfResult s = smith_normal_form(A, variant);
  CHECK(mat_mul(mat_mul(s.U, A), s.V) == s.S);
  CHECK(is_unit_closed_form(determinant(s.U)));
  CHECK(is_unit_closed_form(determinant(s.V)));
  for (int i = 0; i < s.S.rows; ++i)
    for (int j = 0; j < s.S.cols; ++j)
      if (i != j) CHECK(is_zero(s.S.at(i, j)));
  // diagonal entries are their own canonical associates
  for (int i = 0; i < std::min(A.rows, A.cols); ++i)
    if (!is_zero(s.S.at(i, i)))
      CHECK(is_one(canonical_unit_cofactor(s.S.at(i, i))));
}

}  // namespace

TEST_CASE("smith normal form worked examples") {
  SUBCASE("diag(2,3) over Z becomes diag(1,6)") {
    Mat A = diag2(Ring::Z(), 2, 3);
    SnfResult s = smith_normal_form(A);
    CHECK(s.S == diag2(Ring::Z(), 1, 6));
    CHECK(mat_mul(mat_mul(s.U, A), s.V) == s.S);
    CHECK(is_unit_closed_form(determinant(s.U)));
    CHECK(is_unit_closed_form(determinant(s.V)));
  }
  SUBCASE("zero matrix untouched") {
    Mat A = mat_zero(Ring::Z(), 2, 2);
    SnfResult s = smith_normal_form(A);
    CHECK(s.S == A);
    CHECK(s.U == mat_identity(Ring::Z(), 2));
    CHECK(s.V == mat_identity(Ring::Z(), 2));
  }
  SUBCASE("[[t-1]] over Q[t,t^-1] is already canonical") {
    Mat A = mat_zero(Ring::laurent_q(), 1, 1);
    A.at(0, 0) = add(lq(1, 1), lq(-1));
    SnfResult s = smith_normal_form(A);
    CHECK(s.S == A);
    CHECK(is_unit_closed_form(s.U.at(0, 0)));
    CHECK(is_unit_closed_form(s.V.at(0, 0)));
  }
  SUBCASE("Z[t,t^-1] rejected") {
    CHECK_THROWS_AS(smith_normal_form(mat_identity(Ring::laurent_z(), 1)),
                    UnsupportedRing);
  }
}

TEST_CASE("smith normal form randomized contract") {
  // over the scalar rings: dense sizes up to 5x5
  for (Ring R : {Ring::Z(), Ring::Q()}) {
    CAPTURE(R.tag());
    std::mt19937_64 rng(42);
    for (int it = 0; it < 120; ++it) {
      int rows = static_cast<int>(rng() % 5), cols = static_cast<int>(rng() % 5);
      Mat A = random_matrix(R, rows, cols, rng, 6, 2);
      check_snf_contract(A, 0);
      // invariant factors are canonical, so both pivot variants agree on S
      CHECK(smith_normal_form(A, 0).S == smith_normal_form(A, 1).S);
    }
  }
  // over Q[t,t^-1]: the workloads this library runs on are small and sparse
  // (chain-level fixtures), and dense random polynomial elimination blows up
  // coefficients; keep the randomized contract at that natural scale
  {
    std::mt19937_64 rng(43);
    for (int it = 0; it < 120; ++it) {
      int rows = static_cast<int>(rng() % 4), cols = static_cast<int>(rng() % 4);
      Mat A = random_matrix(Ring::laurent_q(), rows, cols, rng, 4, 1);
      check_snf_contract(A, 0);
      CHECK(smith_normal_form(A, 0).S == smith_normal_form(A, 1).S);
    }
  }
}

TEST_CASE("solve_linear worked examples") {
  Mat A2 = mat_from_ints(Ring::Z(), 1, 1, {2});
  CHECK(solve_linear(A2, mat_from_ints(Ring::Z(), 1, 1, {4})).value() ==
        mat_from_ints(Ring::Z(), 1, 1, {2}));
  CHECK(!solve_linear(A2, mat_from_ints(Ring::Z(), 1, 1, {3})).has_value());
  Mat AQ = mat_from_ints(Ring::Q(), 1, 1, {2});
  auto x = solve_linear(AQ, mat_from_ints(Ring::Q(), 1, 1, {3}));
  REQUIRE(x.has_value());
  CHECK(x->at(0, 0) == from_rat(Ring::Q(), Rat(3, 2)));
}

TEST_CASE("solve_linear randomized: manufactured solutions recovered") {
  for (Ring R : {Ring::Z(), Ring::Q(), Ring::laurent_q()}) {
    CAPTURE(R.tag());
    std::mt19937_64 rng(5);
    int cap = R.is_laurent() ? 3 : 4;
    for (int it = 0; it < 60; ++it) {
      int m = 1 + static_cast<int>(rng() % cap);
      int n = 1 + static_cast<int>(rng() % cap);
      int k = 1 + static_cast<int>(rng() % 2);
      Mat A = random_matrix(R, m, n, rng, 4, 1);
      Mat X0 = random_matrix(R, n, k, rng, 4, 1);
      Mat B = mat_mul(A, X0);
      auto X = solve_linear(A, B);
      REQUIRE(X.has_value());
      CHECK(mat_mul(A, *X) == B);
    }
  }
}

TEST_CASE("kernel basis") {
  std::mt19937_64 rng(17);
  for (Ring R : {Ring::Z(), Ring::Q(), Ring::laurent_q()}) {
    CAPTURE(R.tag());
    for (int it = 0; it < 60; ++it) {
      int m = static_cast<int>(rng() % 4), n = static_cast<int>(rng() % 5);
      Mat A = random_matrix(R, m, n, rng, 5, 1);
      Mat K = kernel_basis(A);
      CHECK(mat_is_zero(mat_mul(A, K)));
      CHECK(K.cols == A.cols - snf_rank(smith_normal_form(A)));
    }
  }
  // kernel of an empty-row matrix is everything
  Mat K = kernel_basis(mat_zero(Ring::Z(), 0, 3));
  CHECK(K == mat_identity(Ring::Z(), 3));
}

TEST_CASE("image_is_direct_summand worked examples") {
  auto two = image_is_direct_summand(mat_from_ints(Ring::Z(), 1, 1, {2}));
  REQUIRE(std::holds_alternative<NotSummand>(two));
  CHECK(std::get<NotSummand>(two).obstructing_factor ==
        from_int(Ring::Z(), 2));

  auto idm = image_is_direct_summand(mat_from_ints(Ring::Z(), 1, 1, {1}));
  REQUIRE(std::holds_alternative<SummandWitness>(idm));
  CHECK(std::get<SummandWitness>(idm).projector ==
        mat_from_ints(Ring::Z(), 1, 1, {1}));

  Mat tm1 = mat_zero(Ring::laurent_q(), 1, 1);
  tm1.at(0, 0) = add(lq(1, 1), lq(-1));
  auto lt = image_is_direct_summand(tm1);
  REQUIRE(std::holds_alternative<NotSummand>(lt));
  CHECK(std::get<NotSummand>(lt).obstructing_factor == tm1.at(0, 0));
}

TEST_CASE("summand criterion cross-checked on 500 seeded matrices") {
  std::mt19937_64 rng(500);
  int witnesses = 0;
  for (int it = 0; it < 500; ++it) {
    Ring R = (it % 3 == 0)   ? Ring::Z()
             : (it % 3 == 1) ? Ring::Q()
                             : Ring::laurent_q();
    int cap = R.is_laurent() ? 3 : 6;
    int m = 1 + static_cast<int>(rng() % cap),
        n = 1 + static_cast<int>(rng() % cap);
    Mat A = random_matrix(R, m, n, rng, 4, 1);
    // oracle: unit invariant factors, computed directly from the normal form
    bool oracle = true;
    for (const Elem& d : invariant_factors(smith_normal_form(A)))
      if (!is_unit_closed_form(d)) oracle = false;
    auto res = image_is_direct_summand(A);
    CHECK(std::holds_alternative<SummandWitness>(res) == oracle);
    if (auto* w = std::get_if<SummandWitness>(&res)) {
      ++witnesses;
      // independent verification by multiplication and solving
      CHECK(mat_mul(w->projector, w->projector) == w->projector);
      CHECK(mat_mul(w->projector, A) == A);
      CHECK(solve_linear(A, w->image_basis).has_value());
      CHECK(mat_mul(w->retraction, w->image_basis) ==
            mat_identity(R, w->rank));
      CHECK(try_inverse(hstack(w->image_basis, w->complement_basis))
                .has_value());
    }
  }
  CHECK(witnesses > 100);  // the sample genuinely exercises both branches
}

TEST_CASE("involuted transpose") {
  Mat t = mat_zero(Ring::laurent_z(), 1, 1);
  t.at(0, 0) = lz(1, 1);
  Mat tt = involuted_transpose(t);
  CHECK(tt.at(0, 0) == lz(1, -1));

  CHECK(involuted_transpose(mat_from_ints(Ring::Z(), 2, 2, {1, 2, 3, 4})) ==
        mat_from_ints(Ring::Z(), 2, 2, {1, 3, 2, 4}));

  Mat empty = mat_zero(Ring::Q(), 0, 3);
  CHECK(involuted_transpose(empty).rows == 3);
  CHECK(involuted_transpose(empty).cols == 0);

  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    Mat A = random_matrix(Ring::laurent_z(), 3, 2, rng);
    Mat B = random_matrix(Ring::laurent_z(), 2, 4, rng);
    CHECK(involuted_transpose(mat_mul(A, B)) ==
          mat_mul(involuted_transpose(B), involuted_transpose(A)));
    CHECK(involuted_transpose(involuted_transpose(A)) == A);
  }
}

TEST_CASE("determinant and inverses") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 40; ++it) {
    Mat A = random_matrix(Ring::Z(), 3, 3, rng, 3);
    Mat B = random_matrix(Ring::Z(), 3, 3, rng, 3);
    CHECK(determinant(mat_mul(A, B)) ==
          mul(determinant(A), determinant(B)));
  }
  for (Ring R : {Ring::Z(), Ring::Q(), Ring::laurent_z(), Ring::laurent_q()}) {
    CAPTURE(R.tag());
    std::mt19937_64 rng2(21);
    for (int it = 0; it < 25; ++it) {
      Mat U = random_unimodular(R, 3, rng2, 6);
      CHECK(is_unit_closed_form(determinant(U)));
      auto inv = try_inverse(U);
      REQUIRE(inv.has_value());
      CHECK(mat_mul(U, *inv) == mat_identity(R, 3));
    }
  }
}

TEST_CASE("group ring inverses via the regular representation") {
  Ring C3z = Ring::cyclic_z(3), C3q = Ring::cyclic_q(3);
  Mat a = mat_zero(C3z, 1, 1);
  a.at(0, 0) = add(one(C3z), monomial(C3z, 1, 1));  // 1 + g, norm 2
  CHECK(!try_inverse(a).has_value());
  CHECK(!is_unit_elem(a.at(0, 0)));

  Mat aq = mat_zero(C3q, 1, 1);
  aq.at(0, 0) = add(one(C3q), monomial(C3q, 1, 1));
  auto invq = try_inverse(aq);
  REQUIRE(invq.has_value());
  CHECK(mul(aq.at(0, 0), invq->at(0, 0)) == one(C3q));

  // classic unit of Z[Z/5]: (g + g^4 - 1) * (g^2 + g^3 - 1) = 1
  Ring C5 = Ring::cyclic_z(5);
  Elem u = add(add(monomial(C5, 1, 1), monomial(C5, 4, 1)), from_int(C5, -1));
  CHECK(is_unit_elem(u));
  Mat um = mat_zero(C5, 1, 1);
  um.at(0, 0) = u;
  auto uinv = try_inverse(um);
  REQUIRE(uinv.has_value());
  CHECK(uinv->at(0, 0) ==
        add(add(monomial(C5, 2, 1), monomial(C5, 3, 1)), from_int(C5, -1)));
}

TEST_CASE("group ring solving by coefficient expansion") {
  Ring C4 = Ring::cyclic_z(4);
  std::mt19937_64 rng(31);
  for (int it = 0; it < 30; ++it) {
    Mat A = random_matrix(C4, 2, 2, rng, 3);
    Mat X0 = random_matrix(C4, 2, 1, rng, 3);
    Mat B = mat_mul(A, X0);
    SolveOutcome out = solve_linear_any(A, B);
    REQUIRE(out.status == SolveStatus::Solved);
    CHECK(mat_mul(A, out.x) == B);
  }
  Mat two = mat_zero(C4, 1, 1);
  two.at(0, 0) = from_int(C4, 2);
  Mat oneB = mat_zero(C4, 1, 1);
  oneB.at(0, 0) = one(C4);
  CHECK(solve_linear_any(two, oneB).status == SolveStatus::NoSolution);
}

TEST_CASE("windowed solver over Z[t,t^-1]") {
  Ring LZ = Ring::laurent_z();
  SUBCASE("divisible case solved and verified") {
    Mat A = mat_zero(LZ, 1, 1);
    A.at(0, 0) = add(lz(1, 1), lz(-1));  // t - 1
    Mat B = mat_zero(LZ, 1, 1);
    B.at(0, 0) = add(lz(1, 2), lz(-1));  // t^2 - 1
    SolveOutcome out = solve_linear_any(A, B);
    REQUIRE(out.status == SolveStatus::Solved);
    CHECK(out.x.at(0, 0) == add(lz(1, 1), lz(1)));
  }
  SUBCASE("unique rational solution not integral: definitive no") {
    Mat A = mat_from_ints(LZ, 1, 1, {2});
    Mat B = mat_zero(LZ, 1, 1);
    B.at(0, 0) = lz(1, 1);
    CHECK(solve_linear_any(A, B).status == SolveStatus::NoSolution);
  }
  SUBCASE("underdetermined augmentation obstruction stays inconclusive") {
    Mat A = mat_zero(LZ, 1, 2);
    A.at(0, 0) = add(lz(1, 1), lz(-1));
    A.at(0, 1) = from_int(LZ, 2);
    Mat B = mat_zero(LZ, 1, 1);
    B.at(0, 0) = one(LZ);
    // (t-1)a + 2b = 1 has no integral solution (evaluate t -> 1), but the
    // bounded search cannot certify that; the honest verdict is Inconclusive
    CHECK(solve_linear_any(A, B).status == SolveStatus::Inconclusive);
  }
  SUBCASE("underdetermined solvable case found in the window") {
    Mat A = mat_zero(LZ, 1, 2);
    A.at(0, 0) = add(lz(1, 1), lz(-1));
    A.at(0, 1) = add(lz(1, 1), lz(-1));
    Mat B = mat_zero(LZ, 1, 1);
    B.at(0, 0) = add(lz(1, 3), lz(-1, 1));  // (t-1)(t^2+t)+0
    SolveOutcome out = solve_linear_any(A, B);
    REQUIRE(out.status == SolveStatus::Solved);
    CHECK(mat_mul(A, out.x) == B);
  }
}

TEST_CASE("matrix equation systems by vectorization") {
  SUBCASE("two coupled equations over Q") {
    std::mt19937_64 rng(77);
    Mat L = random_matrix(Ring::Q(), 3, 2, rng);
    Mat R = random_matrix(Ring::Q(), 2, 3, rng);
    Mat X0 = random_matrix(Ring::Q(), 2, 2, rng);
    LinSystem sys;
    sys.ring = Ring::Q();
    int x = sys.add_unknown(2, 2);
    int e0 = sys.add_equation(mat_mul(mat_mul(L, X0), R));
    sys.add_term(e0, x, L, R);
    int e1 = sys.add_equation(mat_add(X0, X0));
    sys.add_term(e1, x, mat_identity(Ring::Q(), 2),
                 mat_identity(Ring::Q(), 2));
    sys.add_term(e1, x, mat_identity(Ring::Q(), 2),
                 mat_identity(Ring::Q(), 2));
    MatSystemSolution sol = solve_matrix_system(sys);
    REQUIRE(sol.status == SolveStatus::Solved);
    CHECK(mat_mul(mat_mul(L, sol.unknowns[0]), R) ==
          mat_mul(mat_mul(L, X0), R));
  }
  SUBCASE("windowed system over Z[t,t^-1]") {
    Ring LZ = Ring::laurent_z();
    Mat A = mat_zero(LZ, 1, 1);
    A.at(0, 0) = add(lz(1, 1), lz(1));  // t + 1
    LinSystem sys;
    sys.ring = LZ;
    int x = sys.add_unknown(1, 1);
    Mat rhs = mat_zero(LZ, 1, 1);
    rhs.at(0, 0) = add(lz(1, 2), lz(-1));  // t^2 - 1 = (t+1)(t-1)
    int e = sys.add_equation(rhs);
    sys.add_term(e, x, A, mat_identity(LZ, 1));
    MatSystemSolution sol = solve_matrix_system(sys);
    REQUIRE(sol.status == SolveStatus::Solved);
    CHECK(sol.unknowns[0].at(0, 0) == add(lz(1, 1), lz(-1)));
  }
}

TEST_CASE("stacking helpers") {
  Mat a = mat_from_ints(Ring::Z(), 2, 1, {1, 2});
  Mat b = mat_from_ints(Ring::Z(), 2, 2, {3, 4, 5, 6});
  CHECK(hstack(a, b) == mat_from_ints(Ring::Z(), 2, 3, {1, 3, 4, 2, 5, 6}));
  CHECK(vstack(mat_from_ints(Ring::Z(), 1, 2, {1, 2}),
               mat_from_ints(Ring::Z(), 1, 2, {3, 4})) ==
        mat_from_ints(Ring::Z(), 2, 2, {1, 2, 3, 4}));
  CHECK(block_diag(mat_from_ints(Ring::Z(), 1, 1, {7}),
                   mat_from_ints(Ring::Z(), 1, 1, {8})) ==
        mat_from_ints(Ring::Z(), 2, 2, {7, 0, 0, 8}));
  CHECK(submatrix(b, 0, 2, 1, 2) == mat_from_ints(Ring::Z(), 2, 1, {4, 6}));
}

TEST_CASE("matrix equations with involuted-transposed unknowns") {
  SUBCASE("X plus its transpose over Z") {
    const Ring Z = Ring::Z();
    LinSystem sys;
    sys.ring = Z;
    int x = sys.add_unknown(2, 2);
    int e = sys.add_equation(mat_from_ints(Z, 2, 2, {2, 3, 3, 4}));
    sys.add_term(e, x, mat_identity(Z, 2), mat_identity(Z, 2));
    sys.add_term_flipped(e, x, mat_identity(Z, 2), mat_identity(Z, 2));
    MatSystemSolution sol = solve_matrix_system(sys);
    REQUIRE(sol.status == SolveStatus::Solved);
    Mat X = sol.unknowns[0];
    CHECK(mat_add(X, involuted_transpose(X)) ==
          mat_from_ints(Z, 2, 2, {2, 3, 3, 4}));
    // an asymmetric right-hand side cannot be X + X^T
    LinSystem bad = sys;
    bad.rhs[0] = mat_from_ints(Z, 2, 2, {2, 3, 1, 4});
    CHECK(solve_matrix_system(bad).status == SolveStatus::NoSolution);
  }
  SUBCASE("hermitian completion over a group ring") {
    const Ring R = Ring::cyclic_z(3);
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 20; ++trial) {
      Mat X0 = random_matrix(R, 2, 2, rng, 3, 2);
      Mat S = mat_add(X0, involuted_transpose(X0));
      LinSystem sys;
      sys.ring = R;
      int x = sys.add_unknown(2, 2);
      int e = sys.add_equation(S);
      sys.add_term(e, x, mat_identity(R, 2), mat_identity(R, 2));
      sys.add_term_flipped(e, x, mat_identity(R, 2), mat_identity(R, 2));
      MatSystemSolution sol = solve_matrix_system(sys);
      REQUIRE(sol.status == SolveStatus::Solved);
      Mat X = sol.unknowns[0];
      CHECK(mat_add(X, involuted_transpose(X)) == S);
    }
    // x + conj(x) = g forces both b+c = 1 and b+c = 0 on coefficients
    LinSystem sys;
    sys.ring = R;
    int x = sys.add_unknown(1, 1);
    int e = sys.add_equation(mat_from_elems(R, 1, 1, {monomial(R, 1, 1)}));
    sys.add_term(e, x, mat_identity(R, 1), mat_identity(R, 1));
    sys.add_term_flipped(e, x, mat_identity(R, 1), mat_identity(R, 1));
    CHECK(solve_matrix_system(sys).status == SolveStatus::NoSolution);
  }
  SUBCASE("hermitian equations over Laurent rings") {
    for (const Ring& R : {Ring::laurent_z(), Ring::laurent_q()}) {
      Elem t = monomial(R, 1, 1);
      Elem tinv = monomial(R, -1, 1);
      LinSystem sys;
      sys.ring = R;
      int x = sys.add_unknown(1, 1);
      int e = sys.add_equation(mat_from_elems(R, 1, 1, {add(t, tinv)}));
      sys.add_term(e, x, mat_identity(R, 1), mat_identity(R, 1));
      sys.add_term_flipped(e, x, mat_identity(R, 1), mat_identity(R, 1));
      MatSystemSolution sol = solve_matrix_system(sys);
      REQUIRE(sol.status == SolveStatus::Solved);
      Elem got = sol.unknowns[0].at(0, 0);
      CHECK(add(got, apply_involution(got)) == add(t, tinv));
      // x + conj(x) = t is impossible: the +1 and -1 coefficients clash.
      // Over Z[t,t^-1] the evaluation t -> 1 refutes it with integrality
      // (2x = 1); over Q[t,t^-1] the evaluations are solvable and the
      // honest answer is Inconclusive.
      LinSystem odd = sys;
      odd.rhs[0] = mat_from_elems(R, 1, 1, {t});
      SolveStatus expected = R == Ring::laurent_z()
                                 ? SolveStatus::NoSolution
                                 : SolveStatus::Inconclusive;
      CHECK(solve_matrix_system(odd).status == expected);
    }
  }
  SUBCASE("mixed two-sided system over Q") {
    const Ring Q = Ring::Q();
    std::mt19937_64 rng(101);
    Mat L = random_matrix(Q, 2, 3, rng, 3, 0);
    Mat N = random_matrix(Q, 3, 2, rng, 3, 0);
    Mat X0 = random_matrix(Q, 3, 2, rng, 3, 0);
    Mat B = mat_add(mat_mul(L, X0), mat_mul(involuted_transpose(X0), N));
    LinSystem sys;
    sys.ring = Q;
    int x = sys.add_unknown(3, 2);
    int e = sys.add_equation(B);
    sys.add_term(e, x, L, mat_identity(Q, 2));
    sys.add_term_flipped(e, x, mat_identity(Q, 2), N);
    MatSystemSolution sol = solve_matrix_system(sys);
    REQUIRE(sol.status == SolveStatus::Solved);
    const Mat& X = sol.unknowns[0];
    CHECK(mat_add(mat_mul(L, X), mat_mul(involuted_transpose(X), N)) == B);
  }
}
