#include "symsig/linalg.hpp"

#include <algorithm>
#include <tuple>

namespace symsig {

namespace {

void check_same_ring(const Mat& a, const Mat& b, const char* op) {
  if (a.ring != b.ring) throw RingMismatch(std::string(op) + ": ring mismatch");
}

// ---- elementary row/column operations keeping U/Uinv (resp. V/Vinv) exact

// Rational content of a span of elements: the positive rational u such that
// dividing by u makes the integer coefficients primitive.  Multiplying by a
// nonzero rational is a unit operation over Q and Q[t,t^-1]; scaling rows and
// columns back to primitive integer content keeps the coefficient growth of
// the Laurent elimination polynomial instead of exponential.
std::optional<Rat> content_scale(const std::vector<const Elem*>& span,
                                 const Ring& R) {
  if (R.kind != RingKind::LaurentQ && R.kind != RingKind::Q)
    return std::nullopt;
  Int g = 0, l = 1;
  for (const Elem* e : span)
    for (auto& [exp, c] : e->coeffs) {
      g = gcd(g, numerator(c));
      l = lcm(l, denominator(c));
    }
  if (g == 0) return std::nullopt;
  g = abs(g);
  Rat u(l, g);
  return u == 1 ? std::nullopt : std::optional<Rat>(u);
}

struct RowOps {
  Mat* S;
  Mat* U;
  Mat* Uinv;

  void swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < S->cols; ++c) std::swap(S->at(i, c), S->at(j, c));
    for (int c = 0; c < U->cols; ++c) std::swap(U->at(i, c), U->at(j, c));
    for (int r = 0; r < Uinv->rows; ++r)
      std::swap(Uinv->at(r, i), Uinv->at(r, j));
  }
  // row_i += c * row_j
  void add(int i, int j, const Elem& c) {
    if (is_zero(c)) return;
    for (int k = 0; k < S->cols; ++k)
      S->at(i, k) = symsig::add(S->at(i, k), mul(c, S->at(j, k)));
    for (int k = 0; k < U->cols; ++k)
      U->at(i, k) = symsig::add(U->at(i, k), mul(c, U->at(j, k)));
    for (int r = 0; r < Uinv->rows; ++r)
      Uinv->at(r, j) = sub(Uinv->at(r, j), mul(c, Uinv->at(r, i)));
  }
  void scale(int i, const Elem& u) {
    Elem uinv = unit_inverse_closed_form(u).value();
    for (int k = 0; k < S->cols; ++k) S->at(i, k) = mul(u, S->at(i, k));
    for (int k = 0; k < U->cols; ++k) U->at(i, k) = mul(u, U->at(i, k));
    for (int r = 0; r < Uinv->rows; ++r)
      Uinv->at(r, i) = mul(uinv, Uinv->at(r, i));
  }
  void normalize_content(int i) {
    std::vector<const Elem*> span;
    for (int k = 0; k < S->cols; ++k) span.push_back(&S->at(i, k));
    auto u = content_scale(span, S->ring);
    if (u.has_value()) scale(i, from_rat(S->ring, *u));
  }
};

struct ColOps {
  Mat* S;
  Mat* V;
  Mat* Vinv;

  void swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < S->rows; ++r) std::swap(S->at(r, i), S->at(r, j));
    for (int r = 0; r < V->rows; ++r) std::swap(V->at(r, i), V->at(r, j));
    for (int c = 0; c < Vinv->cols; ++c)
      std::swap(Vinv->at(i, c), Vinv->at(j, c));
  }
  // col_j += c * col_k
  void add(int j, int k, const Elem& c) {
    if (is_zero(c)) return;
    for (int r = 0; r < S->rows; ++r)
      S->at(r, j) = symsig::add(S->at(r, j), mul(c, S->at(r, k)));
    for (int r = 0; r < V->rows; ++r)
      V->at(r, j) = symsig::add(V->at(r, j), mul(c, V->at(r, k)));
    for (int col = 0; col < Vinv->cols; ++col)
      Vinv->at(k, col) = sub(Vinv->at(k, col), mul(c, Vinv->at(j, col)));
  }
  void scale(int j, const Elem& u) {
    Elem uinv = unit_inverse_closed_form(u).value();
    for (int r = 0; r < S->rows; ++r) S->at(r, j) = mul(u, S->at(r, j));
    for (int r = 0; r < V->rows; ++r) V->at(r, j) = mul(u, V->at(r, j));
    for (int col = 0; col < Vinv->cols; ++col)
      Vinv->at(j, col) = mul(uinv, Vinv->at(j, col));
  }
  void normalize_content(int j) {
    std::vector<const Elem*> span;
    for (int r = 0; r < S->rows; ++r) span.push_back(&S->at(r, j));
    auto u = content_scale(span, S->ring);
    if (u.has_value()) scale(j, from_rat(S->ring, *u));
  }
};

}  // namespace

Mat mat_zero(const Ring& R, int rows, int cols) {
  require(rows >= 0 && cols >= 0, "negative matrix dimension");
  Mat m{R, rows, cols, {}};
  m.entries.assign(static_cast<size_t>(rows) * cols, zero(R));
  return m;
}

Mat mat_identity(const Ring& R, int n) {
  Mat m = mat_zero(R, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = one(R);
  return m;
}

Mat mat_from_ints(const Ring& R, int rows, int cols,
                  const std::vector<long long>& vals) {
  require(static_cast<size_t>(rows) * cols == vals.size(),
          "mat_from_ints: wrong entry count");
  Mat m = mat_zero(R, rows, cols);
  for (size_t i = 0; i < vals.size(); ++i)
    m.entries[i] = from_int(R, vals[i]);
  return m;
}

Mat mat_from_elems(const Ring& R, int rows, int cols, std::vector<Elem> vals) {
  require(static_cast<size_t>(rows) * cols == vals.size(),
          "mat_from_elems: wrong entry count");
  for (const Elem& e : vals)
    if (e.ring != R) throw RingMismatch("mat_from_elems: entry ring mismatch");
  Mat m{R, rows, cols, std::move(vals)};
  return m;
}

bool mat_is_zero(const Mat& a) {
  return std::all_of(a.entries.begin(), a.entries.end(),
                     [](const Elem& e) { return is_zero(e); });
}

Mat mat_add(const Mat& a, const Mat& b) {
  check_same_ring(a, b, "mat_add");
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionMismatch("mat_add: shape mismatch");
  Mat out = a;
  for (size_t i = 0; i < out.entries.size(); ++i)
    out.entries[i] = add(out.entries[i], b.entries[i]);
  return out;
}

Mat mat_sub(const Mat& a, const Mat& b) { return mat_add(a, mat_neg(b)); }

Mat mat_neg(const Mat& a) {
  Mat out = a;
  for (Elem& e : out.entries) e = neg(e);
  return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  check_same_ring(a, b, "mat_mul");
  if (a.cols != b.rows) throw DimensionMismatch("mat_mul: inner dimension");
  Mat out = mat_zero(a.ring, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (is_zero(a.at(i, k))) continue;
      for (int j = 0; j < b.cols; ++j) {
        if (is_zero(b.at(k, j))) continue;
        out.at(i, j) = add(out.at(i, j), mul(a.at(i, k), b.at(k, j)));
      }
    }
  return out;
}

Mat mat_scale(const Elem& c, const Mat& a) {
  if (c.ring != a.ring) throw RingMismatch("mat_scale: ring mismatch");
  Mat out = a;
  for (Elem& e : out.entries) e = mul(c, e);
  return out;
}

Mat involuted_transpose(const Mat& a) {
  Mat out = mat_zero(a.ring, a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      out.at(j, i) = apply_involution(a.at(i, j));
  return out;
}

Mat hstack(const Mat& a, const Mat& b) {
  check_same_ring(a, b, "hstack");
  if (a.rows != b.rows) throw DimensionMismatch("hstack: row mismatch");
  Mat out = mat_zero(a.ring, a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols; ++j) out.at(i, a.cols + j) = b.at(i, j);
  }
  return out;
}

Mat vstack(const Mat& a, const Mat& b) {
  check_same_ring(a, b, "vstack");
  if (a.cols != b.cols) throw DimensionMismatch("vstack: column mismatch");
  Mat out = mat_zero(a.ring, a.rows + b.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < b.cols; ++j) out.at(a.rows + i, j) = b.at(i, j);
  return out;
}

Mat block_diag(const Mat& a, const Mat& b) {
  check_same_ring(a, b, "block_diag");
  Mat out = mat_zero(a.ring, a.rows + b.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < b.cols; ++j)
      out.at(a.rows + i, a.cols + j) = b.at(i, j);
  return out;
}

Mat submatrix(const Mat& a, int r0, int r1, int c0, int c1) {
  require(0 <= r0 && r0 <= r1 && r1 <= a.rows && 0 <= c0 && c0 <= c1 &&
              c1 <= a.cols,
          "submatrix: bad window");
  Mat out = mat_zero(a.ring, r1 - r0, c1 - c0);
  for (int i = r0; i < r1; ++i)
    for (int j = c0; j < c1; ++j) out.at(i - r0, j - c0) = a.at(i, j);
  return out;
}

Mat take_cols(const Mat& a, const std::vector<int>& idx) {
  Mat out = mat_zero(a.ring, a.rows, static_cast<int>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) {
    require(idx[j] >= 0 && idx[j] < a.cols, "take_cols: bad index");
    for (int i = 0; i < a.rows; ++i)
      out.at(i, static_cast<int>(j)) = a.at(i, idx[j]);
  }
  return out;
}

Mat induce_mat(const RingMap& beta, const Mat& a) {
  Mat out = mat_zero(beta.target, a.rows, a.cols);
  for (size_t i = 0; i < a.entries.size(); ++i)
    out.entries[i] = apply_ring_map(beta, a.entries[i]);
  return out;
}

SnfResult smith_normal_form(const Mat& A, int pivot_variant) {
  if (!A.ring.snf_supported())
    throw UnsupportedRing("smith_normal_form over " + A.ring.tag());
  const int m = A.rows, n = A.cols;
  SnfResult res{mat_identity(A.ring, m), mat_identity(A.ring, m), A,
                mat_identity(A.ring, n), mat_identity(A.ring, n)};
  Mat& S = res.S;
  RowOps rops{&S, &res.U, &res.Uinv};
  ColOps cops{&S, &res.V, &res.Vinv};

  int t = 0;
  while (t < std::min(m, n)) {
    // pivot: smallest Euclidean size; tie broken by row-major position
    // (variant 0: first, variant 1: last)
    int pi = -1, pj = -1;
    Int best = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        if (is_zero(S.at(i, j))) continue;
        Int sz = euclid_size(S.at(i, j));
        bool better = pi < 0 || sz < best || (sz == best && pivot_variant == 1);
        if (better) {
          best = sz;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    rops.swap(t, pi);
    cops.swap(t, pj);

    bool changed = true;
    while (changed) {
      changed = false;
      // keep coefficient growth tame over Q[t,t^-1]: primitive rows/columns,
      // and a monic pivot so that division against it never divides
      // coefficients
      for (int i = t; i < m; ++i) rops.normalize_content(i);
      for (int j = t; j < n; ++j) cops.normalize_content(j);
      if (A.ring.kind == RingKind::LaurentQ) {
        Elem u = canonical_unit_cofactor(S.at(t, t));
        if (!is_one(u)) rops.scale(t, u);
      }
      for (int i = t + 1; i < m; ++i) {
        if (is_zero(S.at(i, t))) continue;
        auto [q, r] = euclid_divmod(S.at(i, t), S.at(t, t));
        rops.add(i, t, neg(q));
        rops.normalize_content(i);
        if (!is_zero(S.at(i, t))) {
          rops.swap(t, i);
          changed = true;
        }
      }
      for (int j = t + 1; j < n; ++j) {
        if (is_zero(S.at(t, j))) continue;
        auto [q, r] = euclid_divmod(S.at(t, j), S.at(t, t));
        cops.add(j, t, neg(q));
        cops.normalize_content(j);
        if (!is_zero(S.at(t, j))) {
          cops.swap(t, j);
          changed = true;
        }
      }
    }

    // pivot must divide the remaining block for the divisibility chain
    bool fixed = false;
    for (int i = t + 1; i < m && !fixed; ++i)
      for (int j = t + 1; j < n && !fixed; ++j) {
        if (is_zero(S.at(i, j))) continue;
        if (!exact_div(S.at(i, j), S.at(t, t)).has_value()) {
          rops.add(t, i, one(A.ring));
          fixed = true;
        }
      }
    if (fixed) continue;

    Elem u = canonical_unit_cofactor(S.at(t, t));
    if (!is_one(u)) rops.scale(t, u);
    ++t;
  }

  // exact re-verification of the factorization on every call
  require(mat_mul(mat_mul(res.U, A), res.V) == S,
          "smith_normal_form: U*A*V != S");
  require(mat_mul(res.U, res.Uinv) == mat_identity(A.ring, m),
          "smith_normal_form: U*Uinv != I");
  require(mat_mul(res.V, res.Vinv) == mat_identity(A.ring, n),
          "smith_normal_form: V*Vinv != I");
  for (int i = 0; i + 1 < std::min(m, n); ++i) {
    if (is_zero(S.at(i, i)))
      require(is_zero(S.at(i + 1, i + 1)), "smith_normal_form: zero ordering");
    else if (!is_zero(S.at(i + 1, i + 1)))
      require(exact_div(S.at(i + 1, i + 1), S.at(i, i)).has_value(),
              "smith_normal_form: divisibility chain");
  }
  return res;
}

std::vector<Elem> invariant_factors(const SnfResult& snf) {
  std::vector<Elem> out;
  for (int i = 0; i < std::min(snf.S.rows, snf.S.cols); ++i)
    if (!is_zero(snf.S.at(i, i))) out.push_back(snf.S.at(i, i));
  return out;
}

int snf_rank(const SnfResult& snf) {
  return static_cast<int>(invariant_factors(snf).size());
}

namespace {

// Gaussian elimination fast path over Q: returns X with A*X = B.
std::optional<Mat> solve_field(const Mat& A, const Mat& B) {
  Mat M = hstack(A, B);
  const int m = M.rows, n = A.cols;
  int row = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < n && row < m; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (!is_zero(M.at(i, col))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    for (int j = 0; j < M.cols; ++j) std::swap(M.at(row, j), M.at(p, j));
    Elem inv = unit_inverse_closed_form(M.at(row, col)).value();
    for (int j = 0; j < M.cols; ++j) M.at(row, j) = mul(inv, M.at(row, j));
    for (int i = 0; i < m; ++i) {
      if (i == row || is_zero(M.at(i, col))) continue;
      Elem c = M.at(i, col);
      for (int j = 0; j < M.cols; ++j)
        M.at(i, j) = sub(M.at(i, j), mul(c, M.at(row, j)));
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < m; ++i)
    for (int j = n; j < M.cols; ++j)
      if (!is_zero(M.at(i, j))) return std::nullopt;
  Mat X = mat_zero(A.ring, n, B.cols);
  for (int r = 0; r < row; ++r)
    for (int j = 0; j < B.cols; ++j) X.at(pivot_col[r], j) = M.at(r, n + j);
  return X;
}

}  // namespace

std::optional<Mat> solve_linear(const Mat& A, const Mat& B) {
  check_same_ring(A, B, "solve_linear");
  if (A.rows != B.rows) throw DimensionMismatch("solve_linear: row mismatch");
  if (!A.ring.snf_supported())
    throw UnsupportedRing("solve_linear over " + A.ring.tag());
  std::optional<Mat> X;
  if (A.ring == Ring::Q()) {
    X = solve_field(A, B);
  } else {
    SnfResult snf = smith_normal_form(A);
    Mat C = mat_mul(snf.U, B);
    Mat Y = mat_zero(A.ring, A.cols, B.cols);
    int d = std::min(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i) {
      bool zero_row = i >= d || is_zero(snf.S.at(i, i));
      for (int j = 0; j < B.cols; ++j) {
        if (zero_row) {
          if (!is_zero(C.at(i, j))) return std::nullopt;
        } else {
          auto q = exact_div(C.at(i, j), snf.S.at(i, i));
          if (!q.has_value()) return std::nullopt;
          Y.at(i, j) = *q;
        }
      }
    }
    X = mat_mul(snf.V, Y);
  }
  if (X.has_value())
    require(mat_mul(A, *X) == B, "solve_linear: verification failed");
  return X;
}

Mat kernel_basis(const Mat& A) {
  SnfResult snf = smith_normal_form(A);
  int r = snf_rank(snf);
  std::vector<int> idx;
  for (int j = r; j < A.cols; ++j) idx.push_back(j);
  Mat K = take_cols(snf.V, idx);
  require(mat_is_zero(mat_mul(A, K)), "kernel_basis: A*K != 0");
  return K;
}

std::variant<SummandWitness, NotSummand> image_is_direct_summand(
    const Mat& A) {
  SnfResult snf = smith_normal_form(A);
  for (const Elem& d : invariant_factors(snf))
    if (!is_unit_closed_form(d)) return NotSummand{d};
  int r = snf_rank(snf);
  SummandWitness w;
  w.rank = r;
  w.image_basis = submatrix(snf.Uinv, 0, A.rows, 0, r);
  w.complement_basis = submatrix(snf.Uinv, 0, A.rows, r, A.rows);
  w.retraction = submatrix(snf.U, 0, r, 0, A.rows);
  w.projector = mat_mul(w.image_basis, w.retraction);
  return w;
}

Elem determinant(const Mat& A) {
  require(A.rows == A.cols, "determinant: square matrix required");
  if (A.ring.is_cyclic())
    throw UnsupportedRing("determinant over group rings unsupported");
  const int n = A.rows;
  if (n == 0) return one(A.ring);
  Mat M = A;
  Elem prev = one(A.ring);
  bool negate_sign = false;
  for (int k = 0; k + 1 < n; ++k) {
    if (is_zero(M.at(k, k))) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (!is_zero(M.at(i, k))) {
          p = i;
          break;
        }
      if (p < 0) return zero(A.ring);
      for (int j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(p, j));
      negate_sign = !negate_sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Elem num = sub(mul(M.at(i, j), M.at(k, k)),
                       mul(M.at(i, k), M.at(k, j)));
        auto q = exact_div(num, prev);
        require(q.has_value(), "determinant: fraction-free step not exact");
        M.at(i, j) = *q;
      }
      M.at(i, k) = zero(A.ring);
    }
    prev = M.at(k, k);
  }
  Elem det = M.at(n - 1, n - 1);
  return negate_sign ? neg(det) : det;
}

namespace {

// Regular representation of a group-ring element: k x k matrix over the
// coefficient ring, column j = coefficient vector of a * g^j.
Mat regular_rep(const Elem& a) {
  const int k = a.ring.order;
  Ring base = a.ring.base();
  Mat m = mat_zero(base, k, k);
  for (int j = 0; j < k; ++j)
    for (auto& [e, c] : a.coeffs) {
      int i = static_cast<int>((e + j) % k);
      m.at(i, j) = from_rat(base, c);
    }
  return m;
}

Mat blow_up(const Mat& A) {
  const int k = A.ring.order;
  Mat big = mat_zero(A.ring.base(), A.rows * k, A.cols * k);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      Mat blk = regular_rep(A.at(i, j));
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) big.at(i * k + r, j * k + c) = blk.at(r, c);
    }
  return big;
}

// Coefficient stack of a group-ring matrix: column entries expand to their
// k coefficient rows.
Mat coeff_stack(const Mat& B) {
  const int k = B.ring.order;
  Ring base = B.ring.base();
  Mat out = mat_zero(base, B.rows * k, B.cols);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j)
      for (auto& [e, c] : B.at(i, j).coeffs)
        out.at(i * k + static_cast<int>(e), j) = from_rat(base, c);
  return out;
}

Mat unstack_coeffs(const Ring& R, const Mat& stacked, int rows) {
  const int k = R.order;
  Mat out = mat_zero(R, rows, stacked.cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < stacked.cols; ++j) {
      Elem x = zero(R);
      for (int e = 0; e < k; ++e)
        x = add(x, monomial(R, e, scalar_value(stacked.at(i * k + e, j))));
      out.at(i, j) = x;
    }
  return out;
}

std::optional<Mat> integral_laurent(const Mat& X) {
  Mat out = mat_zero(Ring::laurent_z(), X.rows, X.cols);
  for (size_t i = 0; i < X.entries.size(); ++i) {
    for (auto& [e, c] : X.entries[i].coeffs)
      if (denominator(c) != 1) return std::nullopt;
    out.entries[i] = Elem{Ring::laurent_z(), X.entries[i].coeffs};
  }
  return out;
}

RingMap laurent_lift() {
  return RingMap::inclusion(Ring::laurent_z(), Ring::laurent_q());
}

// Exponent-window reduction of A*X = B over Z[t,t^-1] to a system over Z.
std::optional<Mat> laurent_window_solve(const Mat& A, const Mat& B,
                                        std::int64_t slack) {
  std::int64_t aLo = 0, aHi = 0, bLo = 0, bHi = 0;
  bool afirst = true, bfirst = true;
  for (const Elem& e : A.entries)
    if (!e.coeffs.empty()) {
      std::int64_t lo = e.coeffs.begin()->first, hi = e.coeffs.rbegin()->first;
      aLo = afirst ? lo : std::min(aLo, lo);
      aHi = afirst ? hi : std::max(aHi, hi);
      afirst = false;
    }
  for (const Elem& e : B.entries)
    if (!e.coeffs.empty()) {
      std::int64_t lo = e.coeffs.begin()->first, hi = e.coeffs.rbegin()->first;
      bLo = bfirst ? lo : std::min(bLo, lo);
      bHi = bfirst ? hi : std::max(bHi, hi);
      bfirst = false;
    }
  const std::int64_t wLo = bLo - aHi - slack, wHi = bHi - aLo + slack;
  const std::int64_t fLo = std::min(wLo + aLo, bLo),
                     fHi = std::max(wHi + aHi, bHi);
  const int nw = static_cast<int>(wHi - wLo + 1);
  const int nf = static_cast<int>(fHi - fLo + 1);
  const int n = A.cols, p = B.cols, m = A.rows;

  Mat big = mat_zero(Ring::Z(), m * p * nf, n * p * nw);
  Mat rhs = mat_zero(Ring::Z(), m * p * nf, 1);
  auto eq_index = [&](int i, int c, std::int64_t f) {
    return (i * p + c) * nf + static_cast<int>(f - fLo);
  };
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < p; ++c) {
      for (auto& [f, coeff] : B.at(i, c).coeffs)
        rhs.at(eq_index(i, c, f), 0) = from_rat(Ring::Z(), coeff);
      for (int j = 0; j < n; ++j)
        for (auto& [ae, ac] : A.at(i, j).coeffs)
          for (std::int64_t xe = wLo; xe <= wHi; ++xe) {
            int col = (j * p + c) * nw + static_cast<int>(xe - wLo);
            int row = eq_index(i, c, ae + xe);
            big.at(row, col) =
                add(big.at(row, col), from_rat(Ring::Z(), ac));
          }
    }
  auto sol = solve_linear(big, rhs);
  if (!sol.has_value()) return std::nullopt;
  Mat X = mat_zero(Ring::laurent_z(), n, p);
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < p; ++c) {
      Elem x = zero(Ring::laurent_z());
      for (std::int64_t xe = wLo; xe <= wHi; ++xe) {
        Rat v = scalar_value(
            sol->at((j * p + c) * nw + static_cast<int>(xe - wLo), 0));
        if (v != 0) x = add(x, monomial(Ring::laurent_z(), xe, v));
      }
      X.at(j, c) = x;
    }
  return X;
}

}  // namespace

std::optional<Mat> try_inverse(const Mat& A) {
  if (A.rows != A.cols) throw DimensionMismatch("try_inverse: square only");
  const int n = A.rows;
  if (A.ring.snf_supported()) {
    SnfResult snf = smith_normal_form(A);
    if (snf_rank(snf) < n) return std::nullopt;
    Mat Sinv = mat_zero(A.ring, n, n);
    for (int i = 0; i < n; ++i) {
      auto inv = unit_inverse_closed_form(snf.S.at(i, i));
      if (!inv.has_value()) return std::nullopt;
      Sinv.at(i, i) = *inv;
    }
    Mat X = mat_mul(mat_mul(snf.V, Sinv), snf.U);
    require(mat_mul(A, X) == mat_identity(A.ring, n),
            "try_inverse: verification failed");
    return X;
  }
  if (A.ring == Ring::laurent_z()) {
    auto Xq = try_inverse(induce_mat(laurent_lift(), A));
    if (!Xq.has_value()) return std::nullopt;
    auto X = integral_laurent(*Xq);
    if (!X.has_value()) return std::nullopt;
    require(mat_mul(A, *X) == mat_identity(A.ring, n),
            "try_inverse: verification failed");
    return X;
  }
  if (A.ring.is_cyclic()) {
    auto biginv = try_inverse(blow_up(A));
    if (!biginv.has_value()) return std::nullopt;
    const int k = A.ring.order;
    Mat X = mat_zero(A.ring, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Elem x = zero(A.ring);
        for (int e = 0; e < k; ++e)
          x = add(x, monomial(A.ring, e,
                              scalar_value(biginv->at(i * k + e, j * k))));
        X.at(i, j) = x;
      }
    require(mat_mul(A, X) == mat_identity(A.ring, n),
            "try_inverse: group-ring readback failed");
    return X;
  }
  throw UnsupportedRing("try_inverse over " + A.ring.tag());
}

bool is_unit_elem(const Elem& a) {
  if (!a.ring.is_cyclic()) return is_unit_closed_form(a);
  Mat m = mat_zero(a.ring, 1, 1);
  m.at(0, 0) = a;
  return try_inverse(m).has_value();
}

SolveOutcome solve_linear_any(const Mat& A, const Mat& B) {
  check_same_ring(A, B, "solve_linear_any");
  if (A.rows != B.rows)
    throw DimensionMismatch("solve_linear_any: row mismatch");
  if (A.ring.snf_supported()) {
    auto X = solve_linear(A, B);
    if (X.has_value()) return {SolveStatus::Solved, *X};
    return {SolveStatus::NoSolution, {}};
  }
  if (A.ring.is_cyclic()) {
    auto Y = solve_linear(blow_up(A), coeff_stack(B));
    if (!Y.has_value()) return {SolveStatus::NoSolution, {}};
    Mat X = unstack_coeffs(A.ring, *Y, A.cols);
    require(mat_mul(A, X) == B, "solve_linear_any: group-ring readback");
    return {SolveStatus::Solved, X};
  }
  require(A.ring == Ring::laurent_z(), "solve_linear_any: unexpected ring");
  if (mat_is_zero(B)) return {SolveStatus::Solved, mat_zero(A.ring, A.cols, B.cols)};

  RingMap lift = laurent_lift();
  Mat Aq = induce_mat(lift, A), Bq = induce_mat(lift, B);
  auto Xq = solve_linear(Aq, Bq);
  if (!Xq.has_value()) return {SolveStatus::NoSolution, {}};
  if (kernel_basis(Aq).cols == 0) {
    // unique rational solution: integrality decides
    auto X = integral_laurent(*Xq);
    if (!X.has_value()) return {SolveStatus::NoSolution, {}};
    require(mat_mul(A, *X) == B, "solve_linear_any: verification failed");
    return {SolveStatus::Solved, *X};
  }
  std::int64_t span = 0;
  for (const Elem& e : A.entries)
    if (!e.coeffs.empty())
      span = std::max(span,
                      e.coeffs.rbegin()->first - e.coeffs.begin()->first);
  for (const Elem& e : B.entries)
    if (!e.coeffs.empty())
      span = std::max(span,
                      e.coeffs.rbegin()->first - e.coeffs.begin()->first);
  for (std::int64_t slack : {std::int64_t(2), 2 * span + 4}) {
    auto X = laurent_window_solve(A, B, slack);
    if (X.has_value()) {
      require(mat_mul(A, *X) == B, "solve_linear_any: verification failed");
      return {SolveStatus::Solved, *X};
    }
  }
  return {SolveStatus::Inconclusive, {}};
}

int LinSystem::add_unknown(int rows, int cols) {
  unknown_shapes.emplace_back(rows, cols);
  return static_cast<int>(unknown_shapes.size()) - 1;
}

int LinSystem::add_equation(const Mat& b) {
  rhs.push_back(b);
  return static_cast<int>(rhs.size()) - 1;
}

void LinSystem::add_term(int eq, int unknown, Mat left, Mat right) {
  require(eq >= 0 && eq < static_cast<int>(rhs.size()), "add_term: bad eq");
  require(unknown >= 0 && unknown < static_cast<int>(unknown_shapes.size()),
          "add_term: bad unknown");
  auto [ur, uc] = unknown_shapes[static_cast<size_t>(unknown)];
  require(left.rows == rhs[static_cast<size_t>(eq)].rows &&
              left.cols == ur && right.rows == uc &&
              right.cols == rhs[static_cast<size_t>(eq)].cols,
          "add_term: shape mismatch");
  terms.push_back({eq, unknown, std::move(left), std::move(right), false});
}

void LinSystem::add_term_flipped(int eq, int unknown, Mat left, Mat right) {
  require(eq >= 0 && eq < static_cast<int>(rhs.size()), "add_term: bad eq");
  require(unknown >= 0 && unknown < static_cast<int>(unknown_shapes.size()),
          "add_term: bad unknown");
  auto [ur, uc] = unknown_shapes[static_cast<size_t>(unknown)];
  require(left.rows == rhs[static_cast<size_t>(eq)].rows &&
              left.cols == uc && right.rows == ur &&
              right.cols == rhs[static_cast<size_t>(eq)].cols,
          "add_term_flipped: shape mismatch");
  terms.push_back({eq, unknown, std::move(left), std::move(right), true});
}

namespace {

std::vector<int> unknown_offsets(const LinSystem& sys, int scale) {
  std::vector<int> off(sys.unknown_shapes.size() + 1, 0);
  for (size_t u = 0; u < sys.unknown_shapes.size(); ++u)
    off[u + 1] = off[u] + sys.unknown_shapes[u].first *
                              sys.unknown_shapes[u].second * scale;
  return off;
}

std::vector<int> equation_offsets(const LinSystem& sys, int scale) {
  std::vector<int> off(sys.rhs.size() + 1, 0);
  for (size_t e = 0; e < sys.rhs.size(); ++e)
    off[e + 1] = off[e] + sys.rhs[e].rows * sys.rhs[e].cols * scale;
  return off;
}

Mat term_value(const LinTerm& t, const Mat& X) {
  return mat_mul(t.left,
                 mat_mul(t.transposed ? involuted_transpose(X) : X, t.right));
}

void verify_system(const LinSystem& sys, const std::vector<Mat>& unknowns) {
  for (size_t e = 0; e < sys.rhs.size(); ++e) {
    Mat acc = mat_zero(sys.ring, sys.rhs[e].rows, sys.rhs[e].cols);
    for (const LinTerm& t : sys.terms)
      if (t.eq == static_cast<int>(e))
        acc = mat_add(acc,
                      term_value(t, unknowns[static_cast<size_t>(t.unknown)]));
    require(acc == sys.rhs[e], "solve_matrix_system: verification failed");
  }
}

std::pair<std::int64_t, std::int64_t> mat_exp_bounds(const Mat& m) {
  std::int64_t lo = 0, hi = 0;
  for (const Elem& e : m.entries)
    if (!e.coeffs.empty()) {
      lo = std::min(lo, e.coeffs.begin()->first);
      hi = std::max(hi, e.coeffs.rbegin()->first);
    }
  return {lo, hi};
}

// Direct vectorization over the ring itself.  Transposed terms are allowed
// only when the involution on ring elements is trivial (Z, Q), where the
// flip is a pure index permutation.
MatSystemSolution solve_matrix_system_plain(const LinSystem& sys) {
  std::vector<int> uoff = unknown_offsets(sys, 1);
  std::vector<int> eoff = equation_offsets(sys, 1);

  Mat big = mat_zero(sys.ring, eoff.back(), uoff.back());
  Mat rhs = mat_zero(sys.ring, eoff.back(), 1);
  for (size_t e = 0; e < sys.rhs.size(); ++e) {
    const Mat& b = sys.rhs[e];
    for (int i = 0; i < b.rows; ++i)
      for (int j = 0; j < b.cols; ++j)
        rhs.at(eoff[e] + i * b.cols + j, 0) = b.at(i, j);
  }
  for (const LinTerm& t : sys.terms) {
    auto [ur, uc] = sys.unknown_shapes[static_cast<size_t>(t.unknown)];
    const Mat& b = sys.rhs[static_cast<size_t>(t.eq)];
    for (int i = 0; i < t.left.rows; ++i)
      for (int a = 0; a < t.left.cols; ++a) {
        if (is_zero(t.left.at(i, a))) continue;
        for (int bb = 0; bb < t.right.rows; ++bb)
          for (int j = 0; j < t.right.cols; ++j) {
            if (is_zero(t.right.at(bb, j))) continue;
            int row = eoff[static_cast<size_t>(t.eq)] + i * b.cols + j;
            // plain: coefficient of X(a, bb); flipped: of X(bb, a)
            int col = uoff[static_cast<size_t>(t.unknown)] +
                      (t.transposed ? bb * uc + a : a * uc + bb);
            big.at(row, col) = add(big.at(row, col),
                                   mul(t.left.at(i, a), t.right.at(bb, j)));
          }
      }
  }
  SolveOutcome out = solve_linear_any(big, rhs);
  MatSystemSolution sol;
  sol.status = out.status;
  if (out.status != SolveStatus::Solved) return sol;
  for (size_t u = 0; u < sys.unknown_shapes.size(); ++u) {
    auto [ur, uc] = sys.unknown_shapes[u];
    Mat X = mat_zero(sys.ring, ur, uc);
    for (int a = 0; a < ur; ++a)
      for (int bb = 0; bb < uc; ++bb)
        X.at(a, bb) = out.x.at(uoff[u] + a * uc + bb, 0);
    sol.unknowns.push_back(std::move(X));
  }
  verify_system(sys, sol.unknowns);
  return sol;
}

// Expansion over the scalar subring for rings with a nontrivial involution:
// each unknown entry becomes a window of scalar coefficients, so both plain
// and conjugated occurrences stay linear.  Group rings are exact; Laurent
// windows grow over two passes and end Inconclusive when nothing certifies.
MatSystemSolution solve_matrix_system_expanded(const LinSystem& sys) {
  const Ring& R = sys.ring;
  const Ring B = R.base();
  const bool cyclic = R.is_cyclic();
  const std::int64_t k = cyclic ? R.order : 0;

  std::int64_t term_span = 0, rhs_span = 0;
  for (const LinTerm& t : sys.terms) {
    auto [llo, lhi] = mat_exp_bounds(t.left);
    auto [rlo, rhi] = mat_exp_bounds(t.right);
    term_span = std::max(term_span, std::max(-llo, lhi) + std::max(-rlo, rhi));
  }
  for (const Mat& b : sys.rhs) {
    auto [lo, hi] = mat_exp_bounds(b);
    rhs_span = std::max(rhs_span, std::max(-lo, hi));
  }

  std::vector<std::int64_t> slacks =
      cyclic ? std::vector<std::int64_t>{0}
             : std::vector<std::int64_t>{2, 2 * (term_span + rhs_span) + 6};
  for (std::int64_t slack : slacks) {
    // unknown exponents in [-w, w] (cyclic: [0, k)), equation coefficients
    // compared on [-fw, fw] (cyclic: [0, k))
    const std::int64_t w = cyclic ? k - 1 : rhs_span + term_span + slack;
    const std::int64_t fw = cyclic ? k - 1 : w + term_span;
    const int ne = cyclic ? static_cast<int>(k) : static_cast<int>(2 * w + 1);
    const int nf = cyclic ? static_cast<int>(k) : static_cast<int>(2 * fw + 1);
    auto eidx = [&](std::int64_t e) {
      return cyclic ? static_cast<int>(((e % k) + k) % k)
                    : static_cast<int>(e + w);
    };
    auto fidx = [&](std::int64_t f) {
      return cyclic ? static_cast<int>(((f % k) + k) % k)
                    : static_cast<int>(f + fw);
    };

    std::vector<int> uoff = unknown_offsets(sys, ne);
    std::vector<int> eoff = equation_offsets(sys, nf);
    Mat big = mat_zero(B, eoff.back(), uoff.back());
    Mat rhs = mat_zero(B, eoff.back(), 1);
    for (size_t e = 0; e < sys.rhs.size(); ++e) {
      const Mat& b = sys.rhs[e];
      for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j)
          for (const auto& [f, c] : b.at(i, j).coeffs) {
            int row = eoff[e] + (i * b.cols + j) * nf + fidx(f);
            rhs.at(row, 0) = add(rhs.at(row, 0), from_rat(B, c));
          }
    }
    for (const LinTerm& t : sys.terms) {
      auto [ur, uc] = sys.unknown_shapes[static_cast<size_t>(t.unknown)];
      (void)ur;
      const Mat& b = sys.rhs[static_cast<size_t>(t.eq)];
      for (int i = 0; i < t.left.rows; ++i)
        for (int a = 0; a < t.left.cols; ++a) {
          if (is_zero(t.left.at(i, a))) continue;
          for (int bb = 0; bb < t.right.rows; ++bb)
            for (int j = 0; j < t.right.cols; ++j) {
              if (is_zero(t.right.at(bb, j))) continue;
              // the ring is commutative, so L * x * R = (L*R) * x entrywise
              Elem prod = mul(t.left.at(i, a), t.right.at(bb, j));
              int urow = t.transposed ? bb : a;
              int ucol = t.transposed ? a : bb;
              int colbase = uoff[static_cast<size_t>(t.unknown)] +
                            (urow * uc + ucol) * ne;
              for (const auto& [pexp, pc] : prod.coeffs)
                for (std::int64_t e = -w + (cyclic ? w : 0); e <= w; ++e) {
                  std::int64_t f = t.transposed ? pexp - e : pexp + e;
                  if (!cyclic && (f < -fw || f > fw)) continue;
                  int row =
                      eoff[static_cast<size_t>(t.eq)] + (i * b.cols + j) * nf +
                      fidx(f);
                  int col = colbase + eidx(e);
                  big.at(row, col) =
                      add(big.at(row, col), from_rat(B, pc));
                }
            }
        }
    }
    auto x = solve_linear(big, rhs);
    if (!x.has_value()) {
      if (cyclic) return {SolveStatus::NoSolution, {}};
      continue;
    }
    MatSystemSolution sol;
    sol.status = SolveStatus::Solved;
    for (size_t u = 0; u < sys.unknown_shapes.size(); ++u) {
      auto [urr, ucc] = sys.unknown_shapes[u];
      Mat X = mat_zero(R, urr, ucc);
      for (int a = 0; a < urr; ++a)
        for (int bb = 0; bb < ucc; ++bb) {
          Elem acc = zero(R);
          for (std::int64_t e = -w + (cyclic ? w : 0); e <= w; ++e) {
            const Elem& c =
                x->at(uoff[u] + (a * ucc + bb) * ne + eidx(e), 0);
            if (!is_zero(c)) acc = add(acc, monomial(R, e, scalar_value(c)));
          }
          X.at(a, bb) = acc;
        }
      sol.unknowns.push_back(std::move(X));
    }
    verify_system(sys, sol.unknowns);
    return sol;
  }

  // Sound refutation for Laurent rings: evaluating t at +-1 commutes with
  // the involution, so an unsolvable evaluated system refutes the original.
  for (int omega : {1, -1}) {
    RingMap beta = RingMap::evaluation(R, omega);
    LinSystem ev;
    ev.ring = beta.target;
    ev.unknown_shapes = sys.unknown_shapes;
    for (const Mat& b : sys.rhs) ev.rhs.push_back(induce_mat(beta, b));
    for (const LinTerm& t : sys.terms)
      ev.terms.push_back({t.eq, t.unknown, induce_mat(beta, t.left),
                          induce_mat(beta, t.right), t.transposed});
    if (solve_matrix_system_plain(ev).status == SolveStatus::NoSolution)
      return {SolveStatus::NoSolution, {}};
  }
  return {SolveStatus::Inconclusive, {}};
}

}  // namespace

MatSystemSolution solve_matrix_system(const LinSystem& sys) {
  bool any_flip = false;
  for (const LinTerm& t : sys.terms) any_flip = any_flip || t.transposed;
  if (!any_flip || sys.ring.is_scalar()) return solve_matrix_system_plain(sys);
  return solve_matrix_system_expanded(sys);
}

Mat random_matrix(const Ring& R, int rows, int cols, std::mt19937_64& rng,
                  int max_num, int max_exp) {
  Mat m = mat_zero(R, rows, cols);
  for (Elem& e : m.entries)
    if (rng() % 4 != 0) e = random_elem(R, rng, max_num, max_exp);
  return m;
}

Mat random_unimodular(const Ring& R, int n, std::mt19937_64& rng, int ops) {
  Mat m = mat_identity(R, n);
  if (n == 0) return m;
  auto ri = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  auto unit = [&]() -> Elem {
    switch (R.kind) {
      case RingKind::Z:
        return from_int(R, ri(0, 1) ? 1 : -1);
      case RingKind::Q:
        return from_rat(R, Rat(ri(0, 1) ? 1 : -1, ri(1, 2)));
      case RingKind::LaurentZ:
      case RingKind::CyclicZ:
        return monomial(R, R.is_cyclic() ? ri(0, R.order - 1) : ri(-1, 1),
                        ri(0, 1) ? 1 : -1);
      default:
        return monomial(R, R.is_cyclic() ? ri(0, R.order - 1) : ri(-1, 1),
                        Rat(ri(0, 1) ? 1 : -1, ri(1, 2)));
    }
  };
  for (int step = 0; step < ops; ++step) {
    int kind = ri(0, n > 1 ? 2 : 0);
    if (kind == 0) {
      int i = ri(0, n - 1);
      Elem u = unit();
      for (int j = 0; j < n; ++j) m.at(i, j) = mul(u, m.at(i, j));
    } else if (kind == 1) {
      int i = ri(0, n - 1), j = ri(0, n - 1);
      if (i == j) continue;
      for (int c = 0; c < n; ++c) std::swap(m.at(i, c), m.at(j, c));
    } else {
      int i = ri(0, n - 1), j = ri(0, n - 1);
      if (i == j) continue;
      Elem c = random_elem(R, rng, 2, 1);
      for (int col = 0; col < n; ++col)
        m.at(i, col) = add(m.at(i, col), mul(c, m.at(j, col)));
    }
  }
  return m;
}

}  // namespace symsig
