#include "symsig/sigma.hpp"

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <utility>

#include "symsig/errors.hpp"

namespace symsig {

namespace {

std::string elem_text(const Elem& e) {
  if (e.coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [exp, coeff] : e.coeffs) {
    if (!first) os << " + ";
    os << coeff;
    if (exp != 0) os << "*t^" << exp;
    first = false;
  }
  return os.str();
}

// total x k inclusion of the leading coordinates.
Mat first_coordinates(const Ring& R, int total, int k) {
  Mat m = mat_zero(R, total, k);
  for (int i = 0; i < k; ++i) m.at(i, i) = one(R);
  return m;
}

SplitWitness identity_witness(const ChainComplex& C) {
  ChainMap id = identity_map(C);
  std::vector<Mat> hs;
  hs.reserve(C.top + 1);
  for (int i = 0; i <= C.top; ++i)
    hs.push_back(mat_zero(C.ring, C.rank(i + 1), C.rank(i)));
  ChainHomotopy flat(id, compose(id, id), hs);
  return SplitWitness{C, C, id, id, flat, flat};
}

// ---------------------------------------------------------------------------
// digests

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;

  void mix(const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xffu;  // separator so that concatenations cannot collide
    h *= 1099511628211ull;
  }
  void mix_int(long long v) { mix(std::to_string(v)); }
};

void mix_elem(Fnv& f, const Elem& e) {
  for (const auto& [exp, coeff] : e.coeffs) {
    f.mix_int(exp);
    f.mix(numerator(coeff).str());
    f.mix(denominator(coeff).str());
  }
  f.mix("|");
}

void mix_mat(Fnv& f, const Mat& a) {
  f.mix(a.ring.tag());
  f.mix_int(a.rows);
  f.mix_int(a.cols);
  for (const Elem& e : a.entries) mix_elem(f, e);
}

void mix_complex(Fnv& f, const ChainComplex& C) {
  f.mix(C.ring.tag());
  f.mix_int(C.top);
  for (int r : C.ranks) f.mix_int(r);
  for (const Mat& d : C.diffs) mix_mat(f, d);
}

void mix_map(Fnv& f, const ChainMap& g) {
  for (const Mat& c : g.comps) mix_mat(f, c);
}

void mix_layers(Fnv& f, const StructureLayers& th) {
  f.mix_int(static_cast<long long>(th.size()));
  for (const auto& layer : th)
    for (const Mat& m : layer) mix_mat(f, m);
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// nullbordism pairs glued onto the split boundary

// Even case: quotient of D onto degrees <= m-1, zero relative structure.
PoincarePair truncation_nullbordism(const SymmetricStructure& psi, int n) {
  const ChainComplex& D = psi.C;
  const Ring& R = D.ring;
  int new_top = std::min(D.top, n / 2 - 1);
  ChainComplex Dbar = new_top >= 0 ? truncate_top(D, new_top)
                                   : ChainComplex(R, {0}, {});
  std::vector<Mat> comps;
  comps.reserve(D.top + 1);
  for (int i = 0; i <= D.top; ++i)
    comps.push_back(i <= new_top ? mat_identity(R, D.rank(i))
                                 : mat_zero(R, Dbar.rank(i), D.rank(i)));
  ChainMap j(D, Dbar, std::move(comps));
  return PoincarePair(psi, Dbar, std::move(j), n,
                      SymmetricStructure::zero(Dbar, n).phis);
}

// Odd case: keep D below m, put L^* in degree m with zero differential out
// of it, include via invT(L) mu.  The (r=m, s=0) pair relation is exactly
// the isotropy of L.
PoincarePair lagrangian_cap(const SymmetricStructure& psi, const EpsForm& mu,
                            const Mat& L, int n) {
  const ChainComplex& D = psi.C;
  const Ring& R = D.ring;
  int m = (n - 1) / 2;
  require(D.rank(m) == mu.rank() && L.rows == mu.rank(),
          "cap: middle module, form, and Lagrangian sizes must agree");
  std::vector<int> ranks(static_cast<size_t>(m) + 1, 0);
  for (int i = 0; i < m; ++i) ranks[static_cast<size_t>(i)] = D.rank(i);
  ranks[static_cast<size_t>(m)] = L.cols;
  std::vector<Mat> diffs;
  diffs.reserve(m);
  for (int i = 1; i < m; ++i) diffs.push_back(D.diff(i));
  if (m >= 1)
    diffs.push_back(mat_zero(R, ranks[static_cast<size_t>(m) - 1], L.cols));
  ChainComplex Dbar(R, std::move(ranks), std::move(diffs));
  std::vector<Mat> comps;
  comps.reserve(D.top + 1);
  for (int i = 0; i <= D.top; ++i) {
    if (i < m)
      comps.push_back(mat_identity(R, D.rank(i)));
    else if (i == m)
      comps.push_back(mat_mul(involuted_transpose(L), mu.mu));
    else
      comps.push_back(mat_zero(R, 0, D.rank(i)));
  }
  ChainMap j(D, Dbar, std::move(comps));
  return PoincarePair(psi, Dbar, std::move(j), n,
                      SymmetricStructure::zero(Dbar, n).phis);
}

// Relations are enforced by glue_pairs; the duality certificate can stay
// inconclusive over Z[t,t^-1], so only a definite No is fatal here.
void check_output(const SymmetricStructure& out, const std::string& who) {
  if (is_equivalence_cert(duality_map(out)) == Cert::No)
    throw StructureMismatch(who + ": output duality map is not an equivalence");
}

EpsForm middle_form_of_layer(const SymmetricStructure& psi, int m,
                             const std::string& who) {
  Mat S = psi.phi(0, m);
  std::optional<Mat> Sinv = try_inverse(S);
  if (!Sinv)
    throw StructureMismatch(who + ": middle duality layer is not invertible");
  try {
    return EpsForm(m % 2 == 0 ? +1 : -1, *Sinv);
  } catch (const Error& e) {
    throw StructureMismatch(who + ": middle layer is not a form: " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SplitOutcome split_middle(const ChainComplex& C, int m, int pivot_variant) {
  if (m < 1 || m > C.top || mat_is_zero(C.diff(m)))
    return identity_witness(C);
  if (!C.ring.snf_supported())
    throw UnsupportedRing("split: no normal form over " + C.ring.tag());
  Mat c = C.diff(m);
  SnfResult snf = smith_normal_form(c, pivot_variant);
  for (const Elem& f : invariant_factors(snf))
    if (!is_unit_elem(f)) return SplitObstruction{f};
  int r = snf_rank(snf);
  int k1 = c.rows;  // rank in degree m-1
  int k0 = c.cols;  // rank in degree m
  // c = Uinv S Vinv: the kernel is cut out by the last rows of Vinv, a
  // complement of the image by the last rows of U.
  Mat um = submatrix(snf.Vinv, r, k0, 0, k0);
  Mat um1 = submatrix(snf.U, r, k1, 0, k1);
  Mat vm = submatrix(snf.V, 0, k0, r, k0);
  Mat vm1 = submatrix(snf.Uinv, 0, k1, r, k1);

  std::vector<int> ranks = C.ranks;
  ranks[static_cast<size_t>(m)] = k0 - r;
  ranks[static_cast<size_t>(m) - 1] = k1 - r;
  std::vector<Mat> diffs;
  diffs.reserve(C.top);
  for (int i = 1; i <= C.top; ++i) {
    if (i == m + 1)
      diffs.push_back(mat_mul(um, C.diff(i)));
    else if (i == m)
      diffs.push_back(mat_zero(C.ring, k1 - r, k0 - r));
    else if (i == m - 1)
      diffs.push_back(mat_mul(C.diff(i), vm1));
    else
      diffs.push_back(C.diff(i));
  }
  ChainComplex D(C.ring, std::move(ranks), std::move(diffs));

  std::vector<Mat> ucomps, vcomps;
  ucomps.reserve(C.top + 1);
  vcomps.reserve(C.top + 1);
  for (int i = 0; i <= C.top; ++i) {
    if (i == m) {
      ucomps.push_back(um);
      vcomps.push_back(vm);
    } else if (i == m - 1) {
      ucomps.push_back(um1);
      vcomps.push_back(vm1);
    } else {
      ucomps.push_back(mat_identity(C.ring, C.rank(i)));
      vcomps.push_back(mat_identity(C.ring, C.rank(i)));
    }
  }
  ChainMap u(C, D, std::move(ucomps));
  ChainMap v(D, C, std::move(vcomps));

  // id_C - v u is concentrated around degrees m-1, m and bounded by
  // h_{m-1} = V_left S_r^{-1} U_top; the constructor re-checks this.
  Mat Sr = submatrix(snf.S, 0, r, 0, r);
  std::optional<Mat> Srinv = try_inverse(Sr);
  require(Srinv.has_value(), "split: unit invariant factors must invert");
  Mat h = mat_mul(submatrix(snf.V, 0, k0, 0, r),
                  mat_mul(*Srinv, submatrix(snf.U, 0, r, 0, k1)));
  std::vector<Mat> hs, zs;
  hs.reserve(C.top + 1);
  zs.reserve(C.top + 1);
  for (int i = 0; i <= C.top; ++i) {
    hs.push_back(i == m - 1 ? h
                            : mat_zero(C.ring, C.rank(i + 1), C.rank(i)));
    zs.push_back(mat_zero(C.ring, D.rank(i + 1), D.rank(i)));
  }
  ChainHomotopy on_source(identity_map(C), compose(v, u), std::move(hs));
  ChainHomotopy on_target(identity_map(D), compose(u, v), std::move(zs));
  return SplitWitness{C,
                      D,
                      std::move(u),
                      std::move(v),
                      std::move(on_source),
                      std::move(on_target)};
}

SplitWitness split_middle_checked(const ChainComplex& C, int m,
                                  int pivot_variant) {
  SplitOutcome o = split_middle(C, m, pivot_variant);
  if (auto* w = std::get_if<SplitWitness>(&o)) return std::move(*w);
  throw NotSplittable("split: non-unit invariant factor " +
                      elem_text(std::get<SplitObstruction>(o).factor) +
                      " obstructs degree " + std::to_string(m));
}

SplitWitness compose_witnesses(const SplitWitness& a, const SplitWitness& b) {
  require(b.C == a.D, "witness composition: middle complexes differ");
  ChainMap u = compose(b.u, a.u);
  ChainMap v = compose(a.v, b.v);
  std::vector<Mat> hs;
  hs.reserve(a.C.top + 1);
  for (int i = 0; i <= a.C.top; ++i)
    hs.push_back(mat_add(
        a.on_source.h(i),
        mat_mul(a.v.f(i + 1), mat_mul(b.on_source.h(i), a.u.f(i)))));
  ChainHomotopy on_source(identity_map(a.C), compose(v, u), std::move(hs));
  std::vector<Mat> zs;
  zs.reserve(b.D.top + 1);
  for (int i = 0; i <= b.D.top; ++i)
    zs.push_back(mat_zero(b.D.ring, b.D.rank(i + 1), b.D.rank(i)));
  ChainHomotopy on_target(identity_map(b.D), compose(u, v), std::move(zs));
  return SplitWitness{a.C,  b.D,
                      std::move(u), std::move(v),
                      std::move(on_source), std::move(on_target)};
}

SplitWitness sum_witnesses(const SplitWitness& a, const SplitWitness& b) {
  ChainComplex C = direct_sum(a.C, b.C);
  ChainComplex D = direct_sum(a.D, b.D);
  ChainMap u = direct_sum_map(a.u, b.u);
  ChainMap v = direct_sum_map(a.v, b.v);
  std::vector<Mat> hs, zs;
  hs.reserve(C.top + 1);
  zs.reserve(D.top + 1);
  for (int i = 0; i <= C.top; ++i)
    hs.push_back(block_diag(a.on_source.h(i), b.on_source.h(i)));
  for (int i = 0; i <= D.top; ++i)
    zs.push_back(block_diag(a.on_target.h(i), b.on_target.h(i)));
  ChainHomotopy on_source(identity_map(C), compose(v, u), std::move(hs));
  ChainHomotopy on_target(identity_map(D), compose(u, v), std::move(zs));
  return SplitWitness{std::move(C), std::move(D),
                      std::move(u), std::move(v),
                      std::move(on_source), std::move(on_target)};
}

// ---------------------------------------------------------------------------

Fingerprint fingerprint(const SymmetricStructure& x) {
  Fingerprint fp;
  Ring RQ = x.C.ring.rationalized();
  SymmetricStructure xq =
      RQ == x.C.ring ? x
                     : induce_structure(x, RingMap::inclusion(x.C.ring, RQ));
  if (RQ.snf_supported()) {
    for (const HomologyGroup& h : homology_all(xq.C)) {
      fp.free_ranks.push_back(h.free_rank);
      fp.torsion_counts.push_back(static_cast<int>(h.torsion.size()));
    }
  }
  if (x.n >= 0 && x.n % 2 == 0) {
    try {
      EpsForm F = middle_form(xq);
      // A (-1)-symmetric form has signature zero at every evaluation, so
      // the skew case records zeros rather than omitting the entries.
      if (RQ.is_scalar()) {
        fp.signatures.emplace_back(0, F.eps == +1 ? signature(F) : 0);
      } else if (RQ.is_laurent()) {
        fp.signatures.emplace_back(
            +1, F.eps == +1 ? evaluation_signature(F, +1) : 0);
        fp.signatures.emplace_back(
            -1, F.eps == +1 ? evaluation_signature(F, -1) : 0);
      }
    } catch (const NotFree&) {
      // torsion middle homology: no signature entries
    } catch (const UnsupportedRing&) {
      // no signature theory over this coefficient ring
    }
  }
  return fp;
}

std::string fingerprint_text(const Fingerprint& fp) {
  std::ostringstream os;
  os << "ranks=[";
  for (size_t i = 0; i < fp.free_ranks.size(); ++i)
    os << (i ? "," : "") << fp.free_ranks[i];
  os << "] torsion=[";
  for (size_t i = 0; i < fp.torsion_counts.size(); ++i)
    os << (i ? "," : "") << fp.torsion_counts[i];
  os << "] signatures=[";
  for (size_t i = 0; i < fp.signatures.size(); ++i)
    os << (i ? "," : "") << "(" << fp.signatures[i].first << ":"
       << fp.signatures[i].second << ")";
  os << "]";
  return os.str();
}

std::string digest_matrix(const Mat& a) {
  Fnv f;
  mix_mat(f, a);
  return hex64(f.h);
}

std::string digest_structure(const SymmetricStructure& x) {
  Fnv f;
  mix_complex(f, x.C);
  f.mix_int(x.n);
  mix_layers(f, x.phis);
  return hex64(f.h);
}

std::string digest_pair(const PoincarePair& P) {
  Fnv f;
  mix_complex(f, P.boundary.C);
  f.mix_int(P.boundary.n);
  mix_layers(f, P.boundary.phis);
  mix_complex(f, P.ambient);
  mix_map(f, P.incl);
  f.mix_int(P.n);
  mix_layers(f, P.dphis);
  return hex64(f.h);
}

std::string digest_witness(const SplitWitness& w) {
  Fnv f;
  mix_complex(f, w.C);
  mix_complex(f, w.D);
  mix_map(f, w.u);
  mix_map(f, w.v);
  for (const Mat& h : w.on_source.comps) mix_mat(f, h);
  return hex64(f.h);
}

// ---------------------------------------------------------------------------

SigmaResult sigma_even_with(const PoincarePair& P, const SplitWitness& w) {
  require(P.n >= 0 && P.n % 2 == 0, "sigma: pair dimension must be even");
  int m = P.n / 2;
  if (w.C != P.boundary.C)
    throw StructureMismatch("sigma: witness is for a different boundary");
  if (!mat_is_zero(w.D.diff(m)))
    throw StructureMismatch("sigma: witness does not kill the middle "
                            "differential");
  SymmetricStructure psi = transport_structure(P.boundary, w.u);
  PoincarePair N = truncation_nullbordism(psi, P.n);
  SymmetricStructure out = glue_pairs(P, N, w.u);
  check_output(out, "sigma");
  return SigmaResult{{out, fingerprint(out)},
                     {digest_pair(P), digest_witness(w), "", 0}};
}

SigmaResult sigma_even(const PoincarePair& P, int pivot_variant) {
  require(P.n >= 0 && P.n % 2 == 0, "sigma: pair dimension must be even");
  SplitWitness w =
      split_middle_checked(P.boundary.C, P.n / 2, pivot_variant);
  return sigma_even_with(P, w);
}

SigmaResult sigma_odd_with(const PoincarePair& P, const Mat& L,
                           const SplitWitness& w) {
  require(P.n >= 1 && P.n % 2 == 1, "sigma: pair dimension must be odd");
  const Ring& R = P.ambient.ring;
  int n = P.n;
  int m = (n - 1) / 2;
  if (w.C != P.boundary.C)
    throw StructureMismatch("sigma: witness is for a different boundary");
  if (!mat_is_zero(w.D.diff(m)) || !mat_is_zero(w.D.diff(m + 1)))
    throw StructureMismatch("sigma: witness must kill d_m and d_{m+1}");
  SymmetricStructure psi = transport_structure(P.boundary, w.u);
  EpsForm mu = middle_form_of_layer(psi, m, "sigma");
  if (L.ring != R || L.rows != mu.rank())
    throw NotLagrangian("sigma: Lagrangian must have " +
                        std::to_string(mu.rank()) + " rows over " + R.tag());

  // Eager stabilization: smallest hyperbolic extension certifying L.
  constexpr int kMaxStabilization = 4;
  int st = 0;
  std::string reason;
  std::optional<EpsForm> must;
  std::optional<Mat> Lst;
  for (; st <= kMaxStabilization; ++st) {
    EpsForm cand = st == 0
                       ? mu
                       : direct_sum_form(mu, hyperbolic_form(R, st, mu.eps));
    Mat lag = st == 0 ? L : block_diag(L, first_coordinates(R, 2 * st, st));
    LagrangianCheck chk = is_lagrangian(cand, lag);
    if (chk.ok) {
      must = std::move(cand);
      Lst = std::move(lag);
      break;
    }
    reason = chk.reason;
  }
  if (!must)
    throw NotLagrangian("sigma: not a Lagrangian even after stabilization <= " +
                        std::to_string(kMaxStabilization) + ": " + reason);

  SymmetricStructure out = [&] {
    if (st == 0) {
      PoincarePair N = lagrangian_cap(psi, *must, *Lst, n);
      return glue_pairs(P, N, w.u);
    }
    // Sum with the hyperbolic cap over the m-fold suspension, which leaves
    // the class unchanged and turns the stable Lagrangian into an honest
    // one.
    EpsForm H = hyperbolic_form(R, st, mu.eps);
    SymmetricStructure susp = complex_from_form(H, m);
    PoincarePair capH =
        lagrangian_cap(susp, H, first_coordinates(R, 2 * st, st), n);
    PoincarePair Pst = pair_sum(P, capH);
    SplitWitness wst = sum_witnesses(w, identity_witness(susp.C));
    SymmetricStructure psist = transport_structure(Pst.boundary, wst.u);
    PoincarePair N = lagrangian_cap(psist, *must, *Lst, n);
    return glue_pairs(Pst, N, wst.u);
  }();
  check_output(out, "sigma");
  return SigmaResult{
      {out, fingerprint(out)},
      {digest_pair(P), digest_witness(w), digest_matrix(*Lst), st}};
}

SigmaResult sigma_odd(const PoincarePair& P, const Mat& L, int pivot_variant) {
  require(P.n >= 1 && P.n % 2 == 1, "sigma: pair dimension must be odd");
  int m = (P.n - 1) / 2;
  SplitWitness w1 =
      split_middle_checked(P.boundary.C, m + 1, pivot_variant);
  SplitWitness w2 = split_middle_checked(w1.D, m, pivot_variant);
  return sigma_odd_with(P, L, compose_witnesses(w1, w2));
}

// ---------------------------------------------------------------------------

Formation difference_formation(const EpsForm& F, const Mat& K, const Mat& A) {
  return formation_from_automorphism(F, K, A);
}

Mat transport_lagrangian(const EpsForm& F1, const EpsForm& F2, const Mat& iso,
                         const Mat& K) {
  if (F1.ring != F2.ring || F1.eps != F2.eps)
    throw NotIsometry("transport: forms live over different theories");
  if (iso.rows != F2.rank() || iso.cols != F1.rank() ||
      F1.rank() != F2.rank())
    throw NotIsometry("transport: isometry has the wrong shape");
  Mat gram = mat_mul(involuted_transpose(iso), mat_mul(F2.mu, iso));
  if (!mat_is_zero(mat_sub(gram, F1.mu)))
    throw NotIsometry("transport: map does not intertwine the forms");
  LagrangianCheck src = is_lagrangian(F1, K);
  if (!src.ok)
    throw NotLagrangian("transport: input is not a Lagrangian: " + src.reason);
  Mat out = mat_mul(iso, K);
  LagrangianCheck dst = is_lagrangian(F2, out);
  if (!dst.ok)
    throw NotLagrangian("transport: image fails certification: " + dst.reason);
  return out;
}

}  // namespace symsig
