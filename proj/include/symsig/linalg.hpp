#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "symsig/rings.hpp"

namespace symsig {

// Dense exact matrix over a ring with involution.  0xN and Nx0 are legal.
struct Mat {
  Ring ring;
  int rows = 0;
  int cols = 0;
  std::vector<Elem> entries;  // row-major

  Elem& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
  const Elem& at(int i, int j) const {
    return entries[static_cast<size_t>(i) * cols + j];
  }
  friend bool operator==(const Mat&, const Mat&) = default;
};

Mat mat_zero(const Ring& R, int rows, int cols);
Mat mat_identity(const Ring& R, int n);
// Convenience constructor from integer entries (row-major).
Mat mat_from_ints(const Ring& R, int rows, int cols,
                  const std::vector<long long>& vals);
Mat mat_from_elems(const Ring& R, int rows, int cols, std::vector<Elem> vals);

bool mat_is_zero(const Mat& a);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
Mat mat_neg(const Mat& a);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_scale(const Elem& c, const Mat& a);

// Dual-module transpose: entry (i,j) of the result is the involution of
// entry (j,i).
Mat involuted_transpose(const Mat& a);

Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
Mat block_diag(const Mat& a, const Mat& b);
// Half-open row/column window.
Mat submatrix(const Mat& a, int r0, int r1, int c0, int c1);
Mat take_cols(const Mat& a, const std::vector<int>& idx);
Mat induce_mat(const RingMap& beta, const Mat& a);

// U*A*V = S diagonal with successive divisibility, entries unit-normalized;
// Uinv, Vinv maintained exactly.  pivot_variant changes only tie-breaking
// among equal-size pivot candidates (0: lowest (row,col); 1: highest).
struct SnfResult {
  Mat U, Uinv, S, V, Vinv;
};
SnfResult smith_normal_form(const Mat& A, int pivot_variant = 0);

std::vector<Elem> invariant_factors(const SnfResult& snf);
int snf_rank(const SnfResult& snf);

// A*X = B over Z, Q, Q[t,t^-1] (decided via normal form / elimination).
std::optional<Mat> solve_linear(const Mat& A, const Mat& B);
// Columns form a basis of ker(A) (SNF-supported rings).
Mat kernel_basis(const Mat& A);

struct SummandWitness {
  int rank = 0;
  Mat projector;         // idempotent with image im(A)
  Mat retraction;        // left inverse of image_basis
  Mat image_basis;       // columns span im(A)
  Mat complement_basis;  // columns span a free complement in the codomain
};
struct NotSummand {
  Elem obstructing_factor;
};
std::variant<SummandWitness, NotSummand> image_is_direct_summand(const Mat& A);

// Fraction-free determinant over the integral-domain rings.
Elem determinant(const Mat& A);

// Inverse over any supported ring: normal form over Z/Q/Q[t,t^-1]; rational
// solve plus integrality check over Z[t,t^-1]; regular-representation blow-up
// to the coefficient ring over group rings.  Result is verified by
// multiplication before being returned.
std::optional<Mat> try_inverse(const Mat& A);

bool is_unit_elem(const Elem& a);  // all rings, group rings via try_inverse

enum class SolveStatus { Solved, NoSolution, Inconclusive };
struct SolveOutcome {
  SolveStatus status = SolveStatus::Inconclusive;
  Mat x;
};

// A*X = B over every ring: exact over Z, Q, Q[t,t^-1] and group rings
// (coefficient expansion); over Z[t,t^-1] a bounded exponent-window search
// whose positive answers are verified and whose negative answers come from
// the rational Laurent ring (honest Inconclusive otherwise).
SolveOutcome solve_linear_any(const Mat& A, const Mat& B);

// Simultaneous linear matrix equations  sum_terms  L * X_u * R = rhs_eq,
// solved by vectorization over the coefficient ring.  A term may apply the
// involuted transpose to its unknown (L * invT(X_u) * R); such systems are
// still linear over the scalar subring and are solved by expanding group
// ring and Laurent unknowns into scalar coefficients.
struct LinTerm {
  int eq = 0;
  int unknown = 0;
  Mat left;
  Mat right;
  bool transposed = false;
};
struct LinSystem {
  Ring ring;
  std::vector<std::pair<int, int>> unknown_shapes;
  std::vector<Mat> rhs;
  std::vector<LinTerm> terms;

  int add_unknown(int rows, int cols);
  int add_equation(const Mat& b);
  void add_term(int eq, int unknown, Mat left, Mat right);
  // term  left * invT(X_unknown) * right
  void add_term_flipped(int eq, int unknown, Mat left, Mat right);
};
struct MatSystemSolution {
  SolveStatus status = SolveStatus::Inconclusive;
  std::vector<Mat> unknowns;
};
MatSystemSolution solve_matrix_system(const LinSystem& sys);

// Deterministic generators for seeded tests.
Mat random_matrix(const Ring& R, int rows, int cols, std::mt19937_64& rng,
                  int max_num = 4, int max_exp = 1);
Mat random_unimodular(const Ring& R, int n, std::mt19937_64& rng,
                      int ops = 8);

}  // namespace symsig
