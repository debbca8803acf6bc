#include "symsig/forms.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "symsig/errors.hpp"

namespace symsig {

namespace {

using RatRow = std::vector<Rat>;
using RatGrid = std::vector<RatRow>;

RatGrid to_rational_grid(const Mat& a) {
  RatGrid g(a.rows, RatRow(a.cols));
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) g[i][j] = scalar_value(a.at(i, j));
  return g;
}

Mat from_rational_grid(const Ring& R, const RatGrid& g) {
  int rows = static_cast<int>(g.size());
  int cols = rows == 0 ? 0 : static_cast<int>(g[0].size());
  Mat m = mat_zero(R, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (g[i][j] != 0) m.at(i, j) = monomial(R, 0, g[i][j]);
  return m;
}

void symmetric_swap(RatGrid& m, int i, int j) {
  std::swap(m[i], m[j]);
  for (auto& row : m) std::swap(row[i], row[j]);
}

// row_i += f row_j and col_i += f col_j.
void symmetric_add(RatGrid& m, int i, int j, const Rat& f) {
  int n = static_cast<int>(m.size());
  for (int c = 0; c < n; ++c) m[i][c] += f * m[j][c];
  for (int r = 0; r < n; ++r) m[r][i] += f * m[r][j];
}

void col_swap(RatGrid& a, int i, int j) {
  for (auto& row : a) std::swap(row[i], row[j]);
}

void col_add(RatGrid& a, int i, int j, const Rat& f) {
  for (auto& row : a) row[i] += f * row[j];
}

// Congruence diagonalization: returns the diagonal and, when transform is
// non-null, an invertible A with A^T M A diagonal.
std::vector<Rat> diagonalize_congruence(RatGrid m, RatGrid* transform) {
  int n = static_cast<int>(m.size());
  if (transform) {
    transform->assign(n, RatRow(n, Rat(0)));
    for (int i = 0; i < n; ++i) (*transform)[i][i] = 1;
  }
  for (int i = 0; i < n; ++i) {
    if (m[i][i] == 0) {
      int piv = -1;
      for (int j = i + 1; j < n; ++j)
        if (m[j][j] != 0) {
          piv = j;
          break;
        }
      if (piv >= 0) {
        symmetric_swap(m, i, piv);
        if (transform) col_swap(*transform, i, piv);
      } else {
        int off = -1;
        for (int j = i + 1; j < n; ++j)
          if (m[i][j] != 0) {
            off = j;
            break;
          }
        if (off < 0) continue;
        symmetric_add(m, i, off, Rat(1));
        if (transform) col_add(*transform, i, off, Rat(1));
      }
    }
    if (m[i][i] == 0) continue;
    for (int j = i + 1; j < n; ++j) {
      if (m[j][i] == 0) continue;
      Rat f = -m[j][i] / m[i][i];
      symmetric_add(m, j, i, f);
      if (transform) col_add(*transform, j, i, f);
    }
  }
  std::vector<Rat> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = m[i][i];
  return diag;
}

int signature_scalar(const Mat& a) {
  std::vector<Rat> diag = diagonalize_congruence(to_rational_grid(a), nullptr);
  int sig = 0;
  for (const Rat& d : diag) {
    if (d > 0) ++sig;
    if (d < 0) --sig;
  }
  return sig;
}

std::optional<Rat> sqrt_rat(const Rat& v) {
  if (v < 0) return std::nullopt;
  Int num = boost::multiprecision::numerator(v);
  Int den = boost::multiprecision::denominator(v);
  Int sn = boost::multiprecision::sqrt(num);
  Int sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rat(sn, sd);
}

Rat pairing_rat(const RatGrid& m, const RatRow& x, const RatRow& y) {
  Rat acc(0);
  int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (y[j] != 0) acc += x[i] * m[i][j] * y[j];
  }
  return acc;
}

// Bounded search for a nonzero isotropic vector of the diagonal form, with
// entries in [-height, height]; node budget keeps the walk deterministic and
// finite.  First nonzero entry is kept positive.
bool isotropic_dfs(const std::vector<Rat>& d, int height, long long& budget,
                   std::vector<long long>& x, size_t at, Rat acc,
                   const std::vector<Rat>& max_pos,
                   const std::vector<Rat>& min_neg) {
  if (--budget <= 0) return false;
  if (at == d.size()) {
    if (acc != 0) return false;
    for (long long v : x)
      if (v != 0) return true;
    return false;
  }
  if (acc + max_pos[at] < 0 || acc + min_neg[at] > 0) return false;
  bool leading_zero = true;
  for (size_t i = 0; i < at; ++i)
    if (x[i] != 0) leading_zero = false;
  long long lo = leading_zero ? 0 : -height;
  for (long long v = lo; v <= height; ++v) {
    x[at] = v;
    if (isotropic_dfs(d, height, budget, x, at + 1, acc + d[at] * v * v,
                      max_pos, min_neg))
      return true;
  }
  x[at] = 0;
  return false;
}

std::optional<RatRow> find_isotropic(const std::vector<Rat>& d) {
  size_t n = d.size();
  std::vector<Rat> max_pos(n + 1, Rat(0)), min_neg(n + 1, Rat(0));
  for (int height : {1, 2, 3, 5, 8, 13, 21, 34, 50}) {
    Rat h2 = Rat(height) * height;
    for (size_t i = n; i-- > 0;) {
      max_pos[i] = max_pos[i + 1] + (d[i] > 0 ? d[i] * h2 : Rat(0));
      min_neg[i] = min_neg[i + 1] + (d[i] < 0 ? d[i] * h2 : Rat(0));
    }
    long long budget = 2000000;
    std::vector<long long> x(n, 0);
    if (isotropic_dfs(d, height, budget, x, 0, Rat(0), max_pos, min_neg)) {
      RatRow v(n);
      for (size_t i = 0; i < n; ++i) v[i] = Rat(x[i]);
      return v;
    }
  }
  return std::nullopt;
}

// Lagrangian of a symmetric nondegenerate even-rank form over Q by repeated
// hyperbolic splitting; empty on search failure.
std::optional<RatGrid> lagrangian_by_splitting(const RatGrid& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return RatGrid{};
  RatGrid trans;
  std::vector<Rat> diag = diagonalize_congruence(m, &trans);
  std::optional<RatRow> xd = find_isotropic(diag);
  if (!xd) return std::nullopt;
  // back to the original coordinates
  RatRow v(n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i] += trans[i][j] * (*xd)[j];
  // partner u with B(v, u) = 1, then made isotropic
  int witness = -1;
  Rat pw(0);
  for (int i = 0; i < n && witness < 0; ++i) {
    Rat p(0);
    for (int r = 0; r < n; ++r) p += v[r] * m[r][i];
    if (p != 0) {
      witness = i;
      pw = p;
    }
  }
  if (witness < 0) return std::nullopt;  // v in the radical
  RatRow w(n, Rat(0));
  w[witness] = Rat(1) / pw;
  Rat self = pairing_rat(m, w, w);
  for (int i = 0; i < n; ++i) w[i] -= self / 2 * v[i];
  // complement: kernel of the two pairing functionals
  Mat rows = mat_zero(Ring::Q(), 2, n);
  for (int j = 0; j < n; ++j) {
    Rat a(0), b(0);
    for (int i = 0; i < n; ++i) {
      a += v[i] * m[i][j];
      b += w[i] * m[i][j];
    }
    if (a != 0) rows.at(0, j) = monomial(Ring::Q(), 0, a);
    if (b != 0) rows.at(1, j) = monomial(Ring::Q(), 0, b);
  }
  Mat W = kernel_basis(rows);
  RatGrid Wg = to_rational_grid(W);
  RatGrid rest(W.cols, RatRow(W.cols, Rat(0)));
  for (int a = 0; a < W.cols; ++a)
    for (int b = 0; b < W.cols; ++b) {
      Rat acc(0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += Wg[i][a] * m[i][j] * Wg[j][b];
      rest[a][b] = acc;
    }
  std::optional<RatGrid> inner = lagrangian_by_splitting(rest);
  if (!inner) return std::nullopt;
  int k = n / 2;
  RatGrid out(n, RatRow(k, Rat(0)));
  for (int i = 0; i < n; ++i) out[i][0] = v[i];
  for (int c = 0; c + 1 < k; ++c)
    for (int i = 0; i < n; ++i) {
      Rat acc(0);
      for (int a = 0; a < W.cols; ++a) acc += Wg[i][a] * (*inner)[a][c];
      out[i][c + 1] = acc;
    }
  return out;
}

// Symplectic pairing basis for a nondegenerate skew form over Q; the first
// vectors of the pairs span a Lagrangian.
RatGrid skew_lagrangian(const RatGrid& m) {
  int n = static_cast<int>(m.size());
  std::vector<RatRow> pool;
  for (int i = 0; i < n; ++i) {
    RatRow e(n, Rat(0));
    e[i] = 1;
    pool.push_back(e);
  }
  RatGrid out(n, RatRow(n / 2, Rat(0)));
  int col = 0;
  while (!pool.empty()) {
    RatRow v = pool.front();
    pool.erase(pool.begin());
    int mate = -1;
    for (size_t i = 0; i < pool.size(); ++i)
      if (pairing_rat(m, v, pool[i]) != 0) {
        mate = static_cast<int>(i);
        break;
      }
    require(mate >= 0, "internal: skew form degenerate in pairing step");
    RatRow u = pool[static_cast<size_t>(mate)];
    pool.erase(pool.begin() + mate);
    Rat b = pairing_rat(m, v, u);
    for (auto& c : u) c /= b;
    for (auto& w : pool) {
      Rat a = pairing_rat(m, w, u);
      Rat c = pairing_rat(m, w, v);
      for (int i = 0; i < n; ++i) w[i] = w[i] - a * v[i] + c * u[i];
    }
    for (int i = 0; i < n; ++i) out[i][col] = v[i];
    ++col;
  }
  return out;
}

}  // namespace

EpsForm::EpsForm(int eps_, Mat mu_)
    : ring(mu_.ring), eps(eps_), mu(std::move(mu_)) {
  require(eps == 1 || eps == -1, "form: eps must be +1 or -1");
  require(mu.rows == mu.cols, "form: matrix must be square");
  Mat expect = eps == 1 ? mu : mat_neg(mu);
  require(involuted_transpose(mu) == expect,
          "form: matrix is not eps-symmetric");
  std::optional<Mat> inv = try_inverse(mu);
  require(inv.has_value(), "form: matrix is not invertible over the ring");
  mu_inv = std::move(*inv);
}

EpsForm hyperbolic_form(const Ring& R, int k, int eps) {
  require(k >= 0, "hyperbolic form: rank must be nonnegative");
  Mat m = mat_zero(R, 2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    m.at(i, k + i) = one(R);
    m.at(k + i, i) = eps == 1 ? one(R) : neg(one(R));
  }
  return EpsForm(eps, std::move(m));
}

EpsForm direct_sum_form(const EpsForm& a, const EpsForm& b) {
  require(a.ring == b.ring && a.eps == b.eps,
          "form sum: mismatched ring or symmetry");
  return EpsForm(a.eps, block_diag(a.mu, b.mu));
}

EpsForm negate_form(const EpsForm& F) { return EpsForm(F.eps, mat_neg(F.mu)); }

EpsForm induce_form(const EpsForm& F, const RingMap& beta) {
  return EpsForm(F.eps, induce_mat(beta, F.mu));
}

LagrangianCheck is_lagrangian(const EpsForm& F, const Mat& j) {
  LagrangianCheck out;
  require(j.ring == F.ring, "lagrangian: ring mismatch");
  require(j.rows == F.rank(), "lagrangian: inclusion has the wrong height");
  if (2 * j.cols != F.rank()) {
    out.reason = "rank count fails: a lagrangian has half the rank of the form";
    return out;
  }
  Mat half_pairing = mat_mul(involuted_transpose(j), F.mu);
  if (!mat_is_zero(mat_mul(half_pairing, j))) {
    out.reason = "isotropy fails: j^* mu j != 0";
    return out;
  }
  SolveOutcome retr =
      solve_linear_any(involuted_transpose(j), mat_identity(F.ring, j.cols));
  if (retr.status == SolveStatus::NoSolution) {
    out.reason = "not a direct summand: j has no retraction";
    return out;
  }
  if (retr.status == SolveStatus::Inconclusive)
    throw UnsupportedRing("lagrangian check inconclusive over " +
                          F.ring.tag());
  SolveOutcome sect =
      solve_linear_any(half_pairing, mat_identity(F.ring, j.cols));
  if (sect.status == SolveStatus::NoSolution) {
    out.reason = "exactness fails: j^* mu has no right inverse";
    return out;
  }
  if (sect.status == SolveStatus::Inconclusive)
    throw UnsupportedRing("lagrangian check inconclusive over " +
                          F.ring.tag());
  out.ok = true;
  out.retraction = involuted_transpose(retr.x);
  out.coretraction = sect.x;
  return out;
}

Formation::Formation(EpsForm form_, Mat K_, Mat L_)
    : form(std::move(form_)), K(std::move(K_)), L(std::move(L_)) {
  LagrangianCheck ck = is_lagrangian(form, K);
  if (!ck.ok) throw NotLagrangian("formation: first lagrangian: " + ck.reason);
  LagrangianCheck cl = is_lagrangian(form, L);
  if (!cl.ok)
    throw NotLagrangian("formation: second lagrangian: " + cl.reason);
}

int signature(const EpsForm& F) {
  if (!F.ring.is_scalar())
    throw UnsupportedRing("signature needs Z or Q coefficients");
  if (F.eps != 1) throw SkewNotSigned("skew forms have no signature");
  return signature_scalar(F.mu);
}

int evaluation_signature(const Mat& mu, int omega) {
  if (!mu.ring.is_laurent())
    throw UnsupportedRing("evaluation signature needs a Laurent ring");
  require(omega == 1 || omega == -1, "evaluation point must be +1 or -1");
  require(mu.rows == mu.cols && involuted_transpose(mu) == mu,
          "evaluation signature needs a symmetric matrix");
  RingMap ev = RingMap::evaluation(mu.ring, omega);
  Mat evaluated = induce_mat(ev, mu);
  if (evaluated.rows > 0 && is_zero(determinant(evaluated)))
    throw DegenerateEvaluation("form is singular at t = " +
                               std::to_string(omega));
  return signature_scalar(evaluated);
}

int evaluation_signature(const EpsForm& F, int omega) {
  if (F.eps != 1) throw SkewNotSigned("skew forms have no signature");
  return evaluation_signature(F.mu, omega);
}

LagrangianSearch find_lagrangian(const EpsForm& F) {
  if (F.ring != Ring::Q())
    throw UnsupportedRing("lagrangian search runs over Q");
  LagrangianSearch out;
  const int n = F.rank();
  if (n % 2 != 0) {
    out.status = LagrangianSearch::Status::NoLagrangian;
    out.note = "odd rank";
    return out;
  }
  if (n == 0) {
    out.status = LagrangianSearch::Status::Found;
    out.j = mat_zero(F.ring, 0, 0);
    return out;
  }
  if (F.eps == 1) {
    int sig = signature(F);
    if (sig != 0) {
      out.status = LagrangianSearch::Status::NoLagrangian;
      out.note = "signature obstruction: " + std::to_string(sig);
      return out;
    }
    RatGrid grid = to_rational_grid(F.mu);
    RatGrid trans;
    std::vector<Rat> diag = diagonalize_congruence(grid, &trans);
    // greedy pairing of opposite-sign entries with square ratio
    std::vector<int> mate(n, -1);
    for (int i = 0; i < n; ++i) {
      if (mate[i] >= 0) continue;
      for (int j2 = i + 1; j2 < n; ++j2) {
        if (mate[j2] >= 0) continue;
        std::optional<Rat> lam = sqrt_rat(-diag[i] / diag[j2]);
        if (lam) {
          mate[i] = j2;
          mate[j2] = i;
          break;
        }
      }
    }
    bool paired = true;
    for (int i = 0; i < n; ++i)
      if (mate[i] < 0) paired = false;
    std::optional<RatGrid> lag;
    if (paired) {
      RatGrid cols(n, RatRow(n / 2, Rat(0)));
      int col = 0;
      for (int i = 0; i < n; ++i) {
        if (mate[i] < i) continue;
        Rat lam = *sqrt_rat(-diag[i] / diag[mate[i]]);
        for (int r = 0; r < n; ++r)
          cols[r][col] = trans[r][i] + lam * trans[r][mate[i]];
        ++col;
      }
      lag = cols;
    } else {
      lag = lagrangian_by_splitting(grid);
    }
    if (!lag) {
      out.status = LagrangianSearch::Status::Inconclusive;
      out.note =
          "no isotropic vector of height <= 50 found within the search "
          "budget";
      return out;
    }
    out.j = from_rational_grid(F.ring, *lag);
  } else {
    out.j = from_rational_grid(F.ring, skew_lagrangian(to_rational_grid(F.mu)));
  }
  LagrangianCheck chk = is_lagrangian(F, *out.j);
  require(chk.ok, "internal: search produced an uncertified lagrangian: " +
                      chk.reason);
  out.status = LagrangianSearch::Status::Found;
  return out;
}

Mat lagrangian_to_iso(const EpsForm& F, const Mat& j) {
  if (!F.ring.has_half())
    throw NeedsHalf(
        "extending a lagrangian to a hyperbolic isomorphism needs 1/2 in "
        "the ring");
  LagrangianCheck chk = is_lagrangian(F, j);
  if (!chk.ok) throw NotLagrangian("lagrangian_to_iso: " + chk.reason);
  const Mat& s = *chk.coretraction;  // (j^* mu) s = I
  Mat B = mat_mul(mat_mul(involuted_transpose(s), F.mu), s);
  Mat corr = mat_scale(monomial(F.ring, 0, Rat(1) / 2), mat_mul(j, B));
  if (F.eps == -1) corr = mat_neg(corr);
  Mat A = hstack(j, mat_sub(s, corr));
  Mat gram = mat_mul(mat_mul(involuted_transpose(A), F.mu), A);
  require(gram == hyperbolic_form(F.ring, j.cols, F.eps).mu,
          "internal: hyperbolic extension failed to verify");
  return A;
}

Formation formation_from_automorphism(const EpsForm& F, const Mat& K,
                                      const Mat& A) {
  Mat gram = mat_mul(mat_mul(involuted_transpose(A), F.mu), A);
  if (!(gram == F.mu))
    throw NotAutomorphism("matrix does not preserve the form");
  return Formation(F, K, mat_mul(A, K));
}

TrivialityVerdict is_trivial_formation(const Formation& phi) {
  TrivialityVerdict out;
  const Ring& R = phi.form.ring;
  int k = phi.K.cols;
  SolveOutcome kl = solve_linear_any(phi.K, phi.L);
  SolveOutcome lk = solve_linear_any(phi.L, phi.K);
  if (kl.status == SolveStatus::Solved && lk.status == SolveStatus::Solved) {
    out.verdict = Cert::Yes;
    out.certificate = "equal Lagrangians";
    out.witness = kl.x;
    return out;
  }
  if (std::optional<Mat> inv = try_inverse(hstack(phi.K, phi.L))) {
    out.verdict = Cert::Yes;
    out.certificate = "complementary Lagrangians";
    out.witness = *inv;
    return out;
  }
  for (int st = 1; st <= 4; ++st) {
    int rank = phi.form.rank();
    Mat Ks = mat_zero(R, rank + 2 * st, k + st);
    Mat Ls = mat_zero(R, rank + 2 * st, k + st);
    for (int i = 0; i < rank; ++i)
      for (int c = 0; c < k; ++c) {
        Ks.at(i, c) = phi.K.at(i, c);
        Ls.at(i, c) = phi.L.at(i, c);
      }
    for (int i = 0; i < st; ++i) {
      Ks.at(rank + i, k + i) = one(R);
      Ls.at(rank + st + i, k + i) = one(R);
    }
    if (std::optional<Mat> inv = try_inverse(hstack(Ks, Ls))) {
      out.verdict = Cert::Yes;
      out.certificate =
          "complementary after adding the hyperbolic form of rank " +
          std::to_string(2 * st);
      out.witness = *inv;
      return out;
    }
  }
  out.verdict = Cert::Unknown;
  out.certificate =
      "no equality or complement certificate found (stabilization <= 4)";
  return out;
}

SymmetricStructure complex_from_form(const EpsForm& F, int m) {
  require(m >= 0, "suspension degree must be nonnegative");
  int want = m % 2 == 0 ? 1 : -1;
  require(F.eps == want,
          "form symmetry must be (-1)^m for the middle degree m");
  const Ring& R = F.ring;
  std::vector<int> ranks(static_cast<size_t>(m) + 1, 0);
  ranks[static_cast<size_t>(m)] = F.rank();
  std::vector<Mat> diffs;
  for (int i = 1; i <= m; ++i)
    diffs.push_back(mat_zero(R, ranks[static_cast<size_t>(i) - 1],
                             ranks[static_cast<size_t>(i)]));
  ChainComplex C(R, std::move(ranks), std::move(diffs));
  int n = 2 * m;
  StructureLayers phis(static_cast<size_t>(n) + 1);
  for (int s = 0; s <= n; ++s)
    for (int r = 0; r <= C.top; ++r)
      phis[static_cast<size_t>(s)].push_back(
          mat_zero(R, C.rank(r), C.rank(n - r + s)));
  phis[0][static_cast<size_t>(m)] = F.mu_inv;
  return SymmetricStructure(std::move(C), n, std::move(phis));
}

namespace {

// One-step nullbordism of the middle-degree form complex determined by an
// isotropic summand: ambient concentrated in degree m with module lag^*,
// inclusion j = lag^* mu, zero relative structure.
PoincarePair lagrangian_nullbordism(const EpsForm& F, const Mat& lag, int m,
                                    const SymmetricStructure& D) {
  const Ring& R = F.ring;
  std::vector<int> ranks(static_cast<size_t>(m) + 1, 0);
  ranks[static_cast<size_t>(m)] = lag.cols;
  std::vector<Mat> diffs;
  for (int i = 1; i <= m; ++i)
    diffs.push_back(mat_zero(R, ranks[static_cast<size_t>(i) - 1],
                             ranks[static_cast<size_t>(i)]));
  ChainComplex amb(R, std::move(ranks), std::move(diffs));
  std::vector<Mat> comps;
  for (int i = 0; i <= D.C.top; ++i)
    comps.push_back(mat_zero(R, amb.rank(i), D.C.rank(i)));
  comps[static_cast<size_t>(m)] = mat_mul(involuted_transpose(lag), F.mu);
  ChainMap incl(D.C, amb, std::move(comps));
  int n = 2 * m + 1;
  StructureLayers dphis(static_cast<size_t>(n) + 1);
  for (int s = 0; s <= n; ++s)
    for (int r = 0; r <= amb.top; ++r)
      dphis[static_cast<size_t>(s)].push_back(
          mat_zero(R, amb.rank(r), amb.rank(n - r + s)));
  return PoincarePair(D, std::move(amb), std::move(incl), n,
                      std::move(dphis));
}

}  // namespace

SymmetricStructure complex_from_formation(const Formation& phi, int m) {
  const Ring& R = phi.form.ring;
  if (!R.has_half())
    throw NeedsHalf("formation suspension needs 1/2 in the ring");
  SymmetricStructure D = complex_from_form(phi.form, m);
  PoincarePair left = lagrangian_nullbordism(phi.form, phi.K, m, D);
  PoincarePair right = lagrangian_nullbordism(phi.form, phi.L, m, D);
  return glue_pairs(left, right, identity_map(D.C));
}

namespace {

// Lifted basis of ker(outgoing)/im(incoming), certified free.
Mat cohomology_basis(const Mat& outgoing, const Mat& incoming) {
  Mat Z = kernel_basis(outgoing);
  std::optional<Mat> T = solve_linear(Z, incoming);
  require(T.has_value(), "internal: boundaries escape the cycle module");
  SnfResult snf = smith_normal_form(*T);
  int r = snf_rank(snf);
  for (const Elem& f : invariant_factors(snf))
    if (!is_unit_elem(f))
      throw NotFree("middle homology has torsion; no free basis exists");
  Mat sel = submatrix(snf.Uinv, 0, snf.Uinv.rows, r, snf.Uinv.cols);
  return mat_mul(Z, sel);
}

}  // namespace

EpsForm middle_form(const SymmetricStructure& x) {
  const Ring& R = x.C.ring;
  if (!(R == Ring::Q() || R == Ring::laurent_q()))
    throw UnsupportedRing("middle form needs Q or Q[t,t^-1] coefficients");
  require(x.n >= 0 && x.n % 2 == 0, "middle form needs even dimension");
  int m = x.n / 2;
  Mat outgoing = involuted_transpose(x.C.diff(m + 1));
  Mat incoming = involuted_transpose(x.C.diff(m));
  Mat U = cohomology_basis(outgoing, incoming);
  Mat pairing = mat_mul(mat_mul(involuted_transpose(U), x.phi(0, m)), U);
  std::optional<Mat> inv = try_inverse(pairing);
  require(inv.has_value(),
          "middle form: duality pairing is degenerate on middle cohomology");
  return EpsForm(m % 2 == 0 ? 1 : -1, std::move(*inv));
}

}  // namespace symsig
