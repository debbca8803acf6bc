#include "symsig/structures.hpp"

#include <utility>

#include "symsig/errors.hpp"

namespace symsig {

namespace {

Elem sign_elem(const Ring& R, int exponent) {
  Elem e = one(R);
  return (exponent % 2 == 0) ? e : neg(e);
}

bool even(int k) { return k % 2 == 0; }

int duality_sign_exp(int r) { return (r * (r + 1) / 2) % 2; }

void check_layer_shapes(const ChainComplex& C, int nu,
                        const StructureLayers& th, const std::string& what,
                        bool allow_truncated = false) {
  int expect = nu + 1 < 0 ? 0 : nu + 1;
  bool count_ok = allow_truncated
                      ? static_cast<int>(th.size()) <= expect
                      : static_cast<int>(th.size()) == expect;
  require(count_ok,
          what + ": expected " + std::to_string(expect) + " layers, got " +
              std::to_string(th.size()));
  for (int s = 0; s < static_cast<int>(th.size()); ++s) {
    require(static_cast<int>(th[s].size()) == C.top + 1,
            what + ": layer " + std::to_string(s) + " has " +
                std::to_string(th[s].size()) + " components, expected " +
                std::to_string(C.top + 1));
    for (int r = 0; r <= C.top; ++r) {
      const Mat& m = th[s][r];
      require(m.ring == C.ring, what + ": ring mismatch in component (" +
                                    std::to_string(s) + ", " +
                                    std::to_string(r) + ")");
      require(m.rows == C.rank(r) && m.cols == C.rank(nu - r + s),
              what + ": component (" + std::to_string(s) + ", " +
                  std::to_string(r) + ") has shape " + std::to_string(m.rows) +
                  "x" + std::to_string(m.cols) + ", expected " +
                  std::to_string(C.rank(r)) + "x" +
                  std::to_string(C.rank(nu - r + s)));
    }
  }
}

StructureLayers zero_layers(const ChainComplex& C, int nu) {
  StructureLayers th;
  if (nu < 0) return th;
  th.resize(nu + 1);
  for (int s = 0; s <= nu; ++s) {
    th[s].reserve(C.top + 1);
    for (int r = 0; r <= C.top; ++r)
      th[s].push_back(mat_zero(C.ring, C.rank(r), C.rank(nu - r + s)));
  }
  return th;
}

std::string at_rs(int r, int s) {
  return " at (r=" + std::to_string(r) + ", s=" + std::to_string(s) + ")";
}

}  // namespace

Mat layer_component(const ChainComplex& C, int nu, const StructureLayers& th,
                    int s, int r) {
  if (s >= 0 && s < static_cast<int>(th.size()) && r >= 0 &&
      r < static_cast<int>(th[s].size()))
    return th[s][r];
  return mat_zero(C.ring, C.rank(r), C.rank(nu - r + s));
}

Mat layer_flip(const ChainComplex& C, int nu, const StructureLayers& th,
               int u, int r) {
  int q = nu - r + u;
  Mat fl = involuted_transpose(layer_component(C, nu, th, u, q));
  if (!even(r * q)) fl = mat_neg(fl);
  return fl;
}

Mat relation_residual(const ChainComplex& C, int nu, const StructureLayers& th,
                      int r, int s) {
  Mat res = mat_mul(C.diff(r + 1), layer_component(C, nu, th, s, r + 1));
  Mat lateral = mat_mul(layer_component(C, nu, th, s, r),
                        involuted_transpose(C.diff(nu - r + s)));
  res = even(r) ? mat_add(res, lateral) : mat_sub(res, lateral);
  if (s >= 1) {
    Mat plain = layer_component(C, nu, th, s - 1, r);
    Mat flipped = layer_flip(C, nu, th, s - 1, r);
    Mat combo = even(s) ? mat_add(plain, flipped) : mat_sub(plain, flipped);
    res = even(nu + s - 1) ? mat_add(res, combo) : mat_sub(res, combo);
  }
  return res;
}

bool relations_hold(const ChainComplex& C, int nu, const StructureLayers& th) {
  for (int s = 0; s <= nu + 1; ++s)
    for (int r = 0; r <= C.top; ++r)
      if (!mat_is_zero(relation_residual(C, nu, th, r, s))) return false;
  return true;
}

SymmetricStructure::SymmetricStructure(ChainComplex C_, int n_,
                                       StructureLayers phis_)
    : C(std::move(C_)), n(n_), phis(std::move(phis_)) {
  require(n >= -1, "symmetric structure: dimension must be >= -1");
  check_layer_shapes(C, n, phis, "symmetric structure");
}

Mat SymmetricStructure::phi(int s, int r) const {
  return layer_component(C, n, phis, s, r);
}

SymmetricStructure SymmetricStructure::zero(const ChainComplex& C, int n) {
  return SymmetricStructure(C, n, zero_layers(C, n));
}

SymmetricStructure negate_structure(const SymmetricStructure& x) {
  StructureLayers out = x.phis;
  for (auto& layer : out)
    for (auto& m : layer) m = mat_neg(m);
  return SymmetricStructure(x.C, x.n, std::move(out));
}

SymmetricStructure add_structures(const SymmetricStructure& a,
                                  const SymmetricStructure& b) {
  require(a.C == b.C && a.n == b.n,
          "add_structures: structures live on different complexes");
  StructureLayers out = a.phis;
  for (int s = 0; s < static_cast<int>(out.size()); ++s)
    for (int r = 0; r < static_cast<int>(out[s].size()); ++r)
      out[s][r] = mat_add(out[s][r], b.phis[s][r]);
  return SymmetricStructure(a.C, a.n, std::move(out));
}

SymmetricStructure direct_sum_structure(const SymmetricStructure& a,
                                        const SymmetricStructure& b) {
  require(a.C.ring == b.C.ring, "direct_sum_structure: ring mismatch");
  require(a.n == b.n, "direct_sum_structure: dimension mismatch");
  ChainComplex C = direct_sum(a.C, b.C);
  StructureLayers out;
  if (a.n >= 0) {
    out.resize(a.n + 1);
    for (int s = 0; s <= a.n; ++s)
      for (int r = 0; r <= C.top; ++r)
        out[s].push_back(block_diag(a.phi(s, r), b.phi(s, r)));
  }
  return SymmetricStructure(std::move(C), a.n, std::move(out));
}

SymmetricStructure transport_structure(const SymmetricStructure& x,
                                       const ChainMap& u) {
  require(u.source == x.C, "transport_structure: map source mismatch");
  const ChainComplex& D = u.target;
  StructureLayers out;
  if (x.n >= 0) {
    out.resize(x.n + 1);
    for (int s = 0; s <= x.n; ++s)
      for (int r = 0; r <= D.top; ++r)
        out[s].push_back(mat_mul(mat_mul(u.f(r), x.phi(s, r)),
                                 involuted_transpose(u.f(x.n - r + s))));
  }
  return SymmetricStructure(D, x.n, std::move(out));
}

SymmetricStructure induce_structure(const SymmetricStructure& x,
                                    const RingMap& beta) {
  ChainComplex C = induce(x.C, beta);
  StructureLayers out = x.phis;
  for (auto& layer : out)
    for (auto& m : layer) m = induce_mat(beta, m);
  return SymmetricStructure(std::move(C), x.n, std::move(out));
}

SymmetricStructure coboundary_structure(const ChainComplex& C, int n,
                                        const StructureLayers& kappa) {
  require(n >= 0, "coboundary_structure: dimension must be >= 0");
  require(C.top <= n,
          "coboundary_structure: complex must be concentrated in degrees "
          "<= n");
  check_layer_shapes(C, n + 1, kappa, "coboundary input", true);
  StructureLayers out(n + 1);
  for (int s = 0; s <= n; ++s)
    for (int r = 0; r <= C.top; ++r)
      out[s].push_back(relation_residual(C, n + 1, kappa, r, s));
  return SymmetricStructure(C, n, std::move(out));
}

ChainMap duality_map(const SymmetricStructure& x) {
  require(x.n >= 0, "duality_map: dimension must be >= 0");
  std::vector<Mat> comps;
  comps.reserve(x.n + 1);
  for (int r = 0; r <= x.n; ++r) {
    Mat c = x.phi(0, r);
    if (duality_sign_exp(r) != 0) c = mat_neg(c);
    comps.push_back(c);
  }
  return ChainMap(dual_complex(x.C, x.n), x.C, std::move(comps));
}

void ValidationReport::add(CheckResult c) {
  ok = ok && c.pass;
  checks.push_back(std::move(c));
}

const CheckResult* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

namespace {

// Shape bookkeeping for a raw complex candidate; appends failures and
// reports whether the pieces can be assembled at all.
bool syntactic_complex_checks(ValidationReport& rep, const std::string& prefix,
                              const Ring& R, const std::vector<int>& ranks,
                              const std::vector<Mat>& diffs) {
  bool shapes_ok = !ranks.empty() && diffs.size() + 1 == ranks.size();
  for (int x : ranks) shapes_ok = shapes_ok && x >= 0;
  if (shapes_ok)
    for (size_t i = 0; i < diffs.size(); ++i)
      shapes_ok = shapes_ok && diffs[i].ring == R &&
                  diffs[i].rows == ranks[i] && diffs[i].cols == ranks[i + 1];
  rep.add({prefix + "complex-shape", -1, shapes_ok,
           shapes_ok ? "" : "rank or differential shapes inconsistent",
           std::nullopt});
  if (!shapes_ok) return false;
  bool all_sq = true;
  for (size_t i = 0; i + 1 < diffs.size(); ++i) {
    Mat sq = mat_mul(diffs[i], diffs[i + 1]);
    bool pass = mat_is_zero(sq);
    all_sq = all_sq && pass;
    if (!pass)
      rep.add({prefix + "differential-squares", static_cast<int>(i + 1), false,
               "d_" + std::to_string(i + 1) + " d_" + std::to_string(i + 2) +
                   " != 0",
               std::move(sq)});
  }
  if (all_sq)
    rep.add({prefix + "differential-squares", -1, true, "", std::nullopt});
  return all_sq;
}

bool syntactic_layer_checks(ValidationReport& rep, const std::string& prefix,
                            const ChainComplex& C, int nu,
                            const StructureLayers& th) {
  bool ok = true;
  std::string note;
  try {
    check_layer_shapes(C, nu, th, "structure");
  } catch (const Error& e) {
    ok = false;
    note = e.what();
  }
  rep.add({prefix + "structure-shape", -1, ok, note, std::nullopt});
  return ok;
}

void relation_checks(ValidationReport& rep, const std::string& prefix,
                     const ChainComplex& C, int nu, const StructureLayers& th) {
  for (int s = 0; s <= nu + 1; ++s) {
    bool all = true;
    for (int r = 0; r <= C.top; ++r) {
      Mat res = relation_residual(C, nu, th, r, s);
      if (!mat_is_zero(res)) {
        all = false;
        rep.add({prefix + "relation s=" + std::to_string(s), r, false,
                 "nonzero residual" + at_rs(r, s), std::move(res)});
      }
    }
    if (all)
      rep.add({prefix + "relation s=" + std::to_string(s), -1, true, "",
               std::nullopt});
  }
}

void equivalence_check(ValidationReport& rep, const std::string& name,
                       const Ring& R, const ChainMap& f) {
  Cert cert = is_equivalence_cert(f);
  if (cert == Cert::Yes) {
    rep.add({name, -1, true, "", std::nullopt});
  } else if (cert == Cert::No) {
    rep.add({name, -1, false, "mapping cone is not contractible",
             std::nullopt});
  } else {
    rep.add({name, -1, false,
             "undecided: no contraction found and no certificate of failure "
             "over " + R.tag(),
             std::nullopt});
  }
}

}  // namespace

ValidationReport validate_complex_candidate(const Ring& R,
                                            const std::vector<int>& ranks,
                                            const std::vector<Mat>& diffs,
                                            int n,
                                            const StructureLayers& phis) {
  ValidationReport rep;
  bool base = syntactic_complex_checks(rep, "", R, ranks, diffs);
  if (!base) return rep;
  ChainComplex C(R, ranks, diffs);
  if (!syntactic_layer_checks(rep, "", C, n, phis)) return rep;
  relation_checks(rep, "", C, n, phis);
  if (n < 0) return rep;
  SymmetricStructure x(C, n, phis);
  try {
    ChainMap psi = duality_map(x);
    rep.add({"duality-chain-map", -1, true, "", std::nullopt});
    equivalence_check(rep, "duality-equivalence", R, psi);
  } catch (const Error& e) {
    rep.add({"duality-chain-map", -1, false, e.what(), std::nullopt});
  }
  return rep;
}

ValidationReport validate_symmetric_complex(const SymmetricStructure& x) {
  return validate_complex_candidate(x.C.ring, x.C.ranks, x.C.diffs, x.n,
                                    x.phis);
}

PoincarePair::PoincarePair(SymmetricStructure boundary_, ChainComplex ambient_,
                           ChainMap incl_, int n_, StructureLayers dphis_)
    : boundary(std::move(boundary_)),
      ambient(std::move(ambient_)),
      incl(std::move(incl_)),
      n(n_),
      dphis(std::move(dphis_)) {
  require(n >= 0, "pair: dimension must be >= 0");
  require(boundary.n == n - 1, "pair: boundary dimension must be n - 1");
  require(incl.source == boundary.C && incl.target == ambient,
          "pair: inclusion must map the boundary complex into the ambient "
          "complex");
  check_layer_shapes(ambient, n, dphis, "pair structure");
}

Mat PoincarePair::dphi(int s, int r) const {
  return layer_component(ambient, n, dphis, s, r);
}

Mat pair_residual(const PoincarePair& P, int r, int s) {
  Mat res = relation_residual(P.ambient, P.n, P.dphis, r, s);
  Mat pushed =
      mat_mul(mat_mul(P.incl.f(r), P.boundary.phi(s, r)),
              involuted_transpose(P.incl.f(P.n - r + s - 1)));
  return even(P.n) ? mat_add(res, pushed) : mat_sub(res, pushed);
}

ChainMap relative_duality_map(const PoincarePair& P) {
  ChainComplex cone = mapping_cone(P.incl);
  ChainComplex dual = dual_complex(P.ambient, P.n);
  std::vector<Mat> comps;
  comps.reserve(P.n + 1);
  for (int r = 0; r <= P.n; ++r) {
    Mat top = P.dphi(0, r);
    if (duality_sign_exp(r) != 0) top = mat_neg(top);
    Mat bottom = mat_mul(P.boundary.phi(0, r - 1),
                         involuted_transpose(P.incl.f(P.n - r)));
    if ((duality_sign_exp(r) + P.n + r - 1) % 2 != 0) bottom = mat_neg(bottom);
    comps.push_back(vstack(top, bottom));
  }
  return ChainMap(std::move(dual), std::move(cone), std::move(comps));
}

ValidationReport validate_pair_candidate(
    const Ring& R, const std::vector<int>& bd_ranks,
    const std::vector<Mat>& bd_diffs, const StructureLayers& bd_phis,
    const std::vector<int>& amb_ranks, const std::vector<Mat>& amb_diffs,
    const std::vector<Mat>& incl_comps, const StructureLayers& dphis, int n) {
  ValidationReport rep;
  if (n < 0) {
    rep.add({"pair-dimension", -1, false, "pair dimension must be >= 0",
             std::nullopt});
    return rep;
  }
  // Boundary pieces: everything a closed candidate must satisfy, at n - 1.
  ValidationReport bd = validate_complex_candidate(R, bd_ranks, bd_diffs,
                                                   n - 1, bd_phis);
  for (auto& c : bd.checks) {
    c.check = "boundary " + c.check;
    rep.add(std::move(c));
  }
  bool amb_ok = syntactic_complex_checks(rep, "ambient ", R, amb_ranks,
                                         amb_diffs);
  if (!rep.ok || !amb_ok) return rep;

  ChainComplex C(R, bd_ranks, bd_diffs);
  ChainComplex A(R, amb_ranks, amb_diffs);

  bool incl_shape = static_cast<int>(incl_comps.size()) == C.top + 1;
  if (incl_shape)
    for (int i = 0; i <= C.top; ++i)
      incl_shape = incl_shape && incl_comps[i].ring == R &&
                   incl_comps[i].rows == A.rank(i) &&
                   incl_comps[i].cols == C.rank(i);
  rep.add({"inclusion-shape", -1, incl_shape,
           incl_shape ? "" : "inclusion components have wrong shapes",
           std::nullopt});
  if (!incl_shape) return rep;
  auto icomp = [&](int i) {
    return (i >= 0 && i < static_cast<int>(incl_comps.size()))
               ? incl_comps[i]
               : mat_zero(R, A.rank(i), C.rank(i));
  };
  bool squares = true;
  int top = std::max(C.top, A.top);
  for (int i = 1; i <= top; ++i) {
    Mat res = mat_sub(mat_mul(icomp(i - 1), C.diff(i)),
                      mat_mul(A.diff(i), icomp(i)));
    if (!mat_is_zero(res)) {
      squares = false;
      rep.add({"inclusion-chain-map", i, false,
               "inclusion does not commute with the differentials",
               std::move(res)});
    }
  }
  if (squares)
    rep.add({"inclusion-chain-map", -1, true, "", std::nullopt});
  if (!syntactic_layer_checks(rep, "pair ", A, n, dphis)) return rep;
  if (!rep.ok) return rep;

  SymmetricStructure bdx(C, n - 1, bd_phis);
  PoincarePair P(bdx, A, ChainMap(C, A, incl_comps), n, dphis);
  for (int s = 0; s <= n + 1; ++s) {
    bool all = true;
    for (int r = 0; r <= A.top; ++r) {
      Mat res = pair_residual(P, r, s);
      if (!mat_is_zero(res)) {
        all = false;
        rep.add({"pair-relation s=" + std::to_string(s), r, false,
                 "nonzero residual" + at_rs(r, s), std::move(res)});
      }
    }
    if (all)
      rep.add({"pair-relation s=" + std::to_string(s), -1, true, "",
               std::nullopt});
  }
  try {
    ChainMap gamma = relative_duality_map(P);
    rep.add({"relative-duality-chain-map", -1, true, "", std::nullopt});
    equivalence_check(rep, "relative-duality-equivalence", R, gamma);
  } catch (const Error& e) {
    rep.add({"relative-duality-chain-map", -1, false, e.what(), std::nullopt});
  }
  return rep;
}

ValidationReport validate_pair(const PoincarePair& P) {
  std::vector<Mat> incl_comps;
  for (int i = 0; i <= P.boundary.C.top; ++i) incl_comps.push_back(P.incl.f(i));
  return validate_pair_candidate(
      P.ambient.ring, P.boundary.C.ranks, P.boundary.C.diffs, P.boundary.phis,
      P.ambient.ranks, P.ambient.diffs, incl_comps, P.dphis, P.n);
}

PoincarePair closed_pair(const SymmetricStructure& x) {
  require(x.n >= 0, "closed_pair: dimension must be >= 0");
  ChainComplex empty = zero_complex(x.C.ring);
  SymmetricStructure bd = SymmetricStructure::zero(empty, x.n - 1);
  ChainMap incl(empty, x.C,
                std::vector<Mat>{mat_zero(x.C.ring, x.C.rank(0), 0)});
  return PoincarePair(std::move(bd), x.C, std::move(incl), x.n, x.phis);
}

PoincarePair cylinder_pair(const SymmetricStructure& x) {
  require(x.n >= 0, "cylinder_pair: dimension must be >= 0");
  SymmetricStructure bd = direct_sum_structure(x, negate_structure(x));
  std::vector<Mat> fold;
  fold.reserve(x.C.top + 1);
  for (int r = 0; r <= x.C.top; ++r) {
    Mat id = mat_identity(x.C.ring, x.C.rank(r));
    fold.push_back(hstack(id, id));
  }
  ChainMap incl(bd.C, x.C, std::move(fold));
  int n = x.n + 1;
  return PoincarePair(std::move(bd), x.C, std::move(incl), n,
                      zero_layers(x.C, n));
}

PoincarePair pair_sum(const PoincarePair& a, const PoincarePair& b) {
  require(a.n == b.n, "pair_sum: dimension mismatch");
  SymmetricStructure bd = direct_sum_structure(a.boundary, b.boundary);
  ChainComplex amb = direct_sum(a.ambient, b.ambient);
  ChainMap incl = direct_sum_map(a.incl, b.incl);
  StructureLayers out(a.n + 1);
  for (int s = 0; s <= a.n; ++s)
    for (int r = 0; r <= amb.top; ++r)
      out[s].push_back(block_diag(a.dphi(s, r), b.dphi(s, r)));
  return PoincarePair(std::move(bd), std::move(amb), std::move(incl), a.n,
                      std::move(out));
}

PoincarePair negate_pair(const PoincarePair& P) {
  StructureLayers out = P.dphis;
  for (auto& layer : out)
    for (auto& m : layer) m = mat_neg(m);
  return PoincarePair(negate_structure(P.boundary), P.ambient, P.incl, P.n,
                      std::move(out));
}

namespace {

// Registers one unknown per component of an nu-dimensional layer table over
// C, for s = 0..smax, and returns the id table.
std::vector<std::vector<int>> add_layer_unknowns(LinSystem& sys,
                                                 const ChainComplex& C, int nu,
                                                 int smax) {
  std::vector<std::vector<int>> ids(smax + 1);
  for (int s = 0; s <= smax; ++s)
    for (int r = 0; r <= C.top; ++r)
      ids[s].push_back(sys.add_unknown(C.rank(r), C.rank(nu - r + s)));
  return ids;
}

int id_at(const std::vector<std::vector<int>>& ids, int s, int r) {
  if (s < 0 || s >= static_cast<int>(ids.size())) return -1;
  if (r < 0 || r >= static_cast<int>(ids[s].size())) return -1;
  return ids[s][r];
}

// Adds the four terms of the (r, s) relation component for an unknown layer
// table to equation eq.
void add_relation_terms(LinSystem& sys, const ChainComplex& C, int nu,
                        const std::vector<std::vector<int>>& ids, int r, int s,
                        int eq) {
  const Ring& R = C.ring;
  if (int u = id_at(ids, s, r + 1); u >= 0)
    sys.add_term(eq, u, C.diff(r + 1),
                 mat_identity(R, C.rank(nu - r + s - 1)));
  if (int u = id_at(ids, s, r); u >= 0)
    sys.add_term(eq, u, mat_scale(sign_elem(R, r), mat_identity(R, C.rank(r))),
                 involuted_transpose(C.diff(nu - r + s)));
  if (s >= 1) {
    if (int u = id_at(ids, s - 1, r); u >= 0)
      sys.add_term(eq, u,
                   mat_scale(sign_elem(R, nu + s - 1),
                             mat_identity(R, C.rank(r))),
                   mat_identity(R, C.rank(nu - r + s - 1)));
    int p = nu - r + s - 1;
    if (int u = id_at(ids, s - 1, p); u >= 0)
      sys.add_term_flipped(eq, u,
                           mat_scale(sign_elem(R, nu + 2 * s - 1 + r * p),
                                     mat_identity(R, C.rank(r))),
                           mat_identity(R, C.rank(p)));
  }
}

StructureLayers layers_from_solution(const std::vector<std::vector<int>>& ids,
                                     const std::vector<Mat>& sol) {
  StructureLayers out(ids.size());
  for (size_t s = 0; s < ids.size(); ++s)
    for (size_t r = 0; r < ids[s].size(); ++r) out[s].push_back(sol[ids[s][r]]);
  return out;
}

}  // namespace

CompletePairOutcome complete_pair(const ChainComplex& ambient,
                                  const ChainMap& incl,
                                  const SymmetricStructure& boundary, int n) {
  require(n >= 0, "complete_pair: dimension must be >= 0");
  require(boundary.n == n - 1, "complete_pair: boundary dimension must be "
                               "n - 1");
  require(incl.source == boundary.C && incl.target == ambient,
          "complete_pair: inclusion endpoints mismatch");
  const Ring& R = ambient.ring;
  LinSystem sys{R, {}, {}, {}};
  auto ids = add_layer_unknowns(sys, ambient, n, n);
  for (int s = 0; s <= n + 1; ++s)
    for (int r = 0; r <= ambient.top; ++r) {
      Mat pushed = mat_mul(mat_mul(incl.f(r), boundary.phi(s, r)),
                           involuted_transpose(incl.f(n - r + s - 1)));
      // O_n(dphi) = -(-1)^n i phi i^*.
      int eq = sys.add_equation(even(n) ? mat_neg(pushed) : pushed);
      add_relation_terms(sys, ambient, n, ids, r, s, eq);
    }
  MatSystemSolution sol = solve_matrix_system(sys);
  CompletePairOutcome out;
  out.status = sol.status;
  if (sol.status != SolveStatus::Solved) return out;
  StructureLayers dphis = layers_from_solution(ids, sol.unknowns);
  out.pair = PoincarePair(boundary, ambient, incl, n, std::move(dphis));
  return out;
}

StructureHomotopyOutcome solve_structure_coboundary(const ChainComplex& C,
                                                    int n,
                                                    const StructureLayers& d) {
  require(n >= 0, "solve_structure_coboundary: dimension must be >= 0");
  require(C.top <= n,
          "solve_structure_coboundary: complex must be concentrated in "
          "degrees <= n");
  check_layer_shapes(C, n, d, "coboundary target", true);
  LinSystem sys{C.ring, {}, {}, {}};
  auto ids = add_layer_unknowns(sys, C, n + 1, n);
  for (int s = 0; s <= n; ++s)
    for (int r = 0; r <= C.top; ++r) {
      int eq = sys.add_equation(layer_component(C, n, d, s, r));
      add_relation_terms(sys, C, n + 1, ids, r, s, eq);
    }
  MatSystemSolution sol = solve_matrix_system(sys);
  StructureHomotopyOutcome out;
  out.status = sol.status;
  if (sol.status != SolveStatus::Solved) return out;
  out.kappa = layers_from_solution(ids, sol.unknowns);
  return out;
}

}  // namespace symsig
