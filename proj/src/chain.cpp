#include "symsig/chain.hpp"

#include <algorithm>
#include <string>

#include "symsig/errors.hpp"

namespace symsig {

namespace {

std::string at_degree(int i) { return " at degree " + std::to_string(i); }

}  // namespace

ChainComplex::ChainComplex(Ring R, std::vector<int> rk, std::vector<Mat> ds)
    : ring(R),
      top(static_cast<int>(rk.size()) - 1),
      ranks(std::move(rk)),
      diffs(std::move(ds)) {
  require(!ranks.empty(), "chain complex needs at least degree 0");
  require(static_cast<int>(diffs.size()) == top,
          "chain complex needs one differential per degree in [1, top]");
  for (int i = 0; i <= top; ++i)
    require(ranks[static_cast<size_t>(i)] >= 0, "negative rank" + at_degree(i));
  for (int i = 1; i <= top; ++i) {
    const Mat& d = diffs[static_cast<size_t>(i - 1)];
    require(d.ring == ring, "differential over wrong ring" + at_degree(i));
    require(d.rows == ranks[static_cast<size_t>(i - 1)] &&
                d.cols == ranks[static_cast<size_t>(i)],
            "differential shape mismatch" + at_degree(i));
  }
  for (int i = 1; i < top; ++i)
    require(mat_is_zero(mat_mul(diffs[static_cast<size_t>(i - 1)],
                                diffs[static_cast<size_t>(i)])),
            "differentials do not compose to zero" + at_degree(i));
}

int ChainComplex::rank(int i) const {
  if (i < 0 || i > top) return 0;
  return ranks[static_cast<size_t>(i)];
}

Mat ChainComplex::diff(int i) const {
  if (i >= 1 && i <= top) return diffs[static_cast<size_t>(i - 1)];
  return mat_zero(ring, rank(i - 1), rank(i));
}

int ChainComplex::total_rank() const {
  int t = 0;
  for (int r : ranks) t += r;
  return t;
}

bool ChainComplex::operator==(const ChainComplex& o) const {
  return ring == o.ring && top == o.top && ranks == o.ranks &&
         diffs == o.diffs;
}

ChainComplex zero_complex(const Ring& R) { return ChainComplex(R, {0}, {}); }

ChainMap::ChainMap(ChainComplex src, ChainComplex tgt, std::vector<Mat> fs)
    : source(std::move(src)), target(std::move(tgt)), comps(std::move(fs)) {
  require(source.ring == target.ring, "chain map between different rings");
  require(static_cast<int>(comps.size()) == source.top + 1,
          "chain map needs one component per source degree");
  for (int i = 0; i <= source.top; ++i) {
    const Mat& m = comps[static_cast<size_t>(i)];
    require(m.ring == source.ring, "chain map over wrong ring" + at_degree(i));
    require(m.rows == target.rank(i) && m.cols == source.rank(i),
            "chain map component shape mismatch" + at_degree(i));
  }
  int hi = std::max(source.top, target.top);
  for (int i = 1; i <= hi; ++i)
    require(mat_mul(f(i - 1), source.diff(i)) == mat_mul(target.diff(i), f(i)),
            "chain map does not commute with differentials" + at_degree(i));
}

Mat ChainMap::f(int i) const {
  if (i >= 0 && i <= source.top) return comps[static_cast<size_t>(i)];
  return mat_zero(source.ring, target.rank(i), source.rank(i));
}

bool ChainMap::operator==(const ChainMap& o) const {
  return source == o.source && target == o.target && comps == o.comps;
}

ChainHomotopy::ChainHomotopy(ChainMap f_, ChainMap g_, std::vector<Mat> hs)
    : from(std::move(f_)), to(std::move(g_)), comps(std::move(hs)) {
  require(from.source == to.source && from.target == to.target,
          "homotopy needs two parallel chain maps");
  const ChainComplex& S = from.source;
  const ChainComplex& T = from.target;
  require(static_cast<int>(comps.size()) == S.top + 1,
          "homotopy needs one component per source degree");
  for (int i = 0; i <= S.top; ++i) {
    const Mat& m = comps[static_cast<size_t>(i)];
    require(m.ring == S.ring && m.rows == T.rank(i + 1) && m.cols == S.rank(i),
            "homotopy component shape mismatch" + at_degree(i));
  }
  int hi = std::max(S.top, T.top);
  for (int i = 0; i <= hi; ++i) {
    Mat lhs = mat_sub(from.f(i), to.f(i));
    Mat rhs =
        mat_add(mat_mul(T.diff(i + 1), h(i)), mat_mul(h(i - 1), S.diff(i)));
    require(lhs == rhs, "homotopy identity fails" + at_degree(i));
  }
}

Mat ChainHomotopy::h(int i) const {
  if (i >= 0 && i <= from.source.top) return comps[static_cast<size_t>(i)];
  return mat_zero(from.source.ring, from.target.rank(i + 1),
                  from.source.rank(i));
}

ChainMap identity_map(const ChainComplex& C) {
  std::vector<Mat> fs;
  for (int i = 0; i <= C.top; ++i)
    fs.push_back(mat_identity(C.ring, C.rank(i)));
  return ChainMap(C, C, std::move(fs));
}

ChainMap zero_map(const ChainComplex& src, const ChainComplex& tgt) {
  std::vector<Mat> fs;
  for (int i = 0; i <= src.top; ++i)
    fs.push_back(mat_zero(src.ring, tgt.rank(i), src.rank(i)));
  return ChainMap(src, tgt, std::move(fs));
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  require(f.target == g.source, "chain maps do not compose");
  std::vector<Mat> fs;
  for (int i = 0; i <= f.source.top; ++i)
    fs.push_back(mat_mul(g.f(i), f.f(i)));
  return ChainMap(f.source, g.target, std::move(fs));
}

ChainMap map_add(const ChainMap& a, const ChainMap& b) {
  require(a.source == b.source && a.target == b.target,
          "chain map sum needs parallel maps");
  std::vector<Mat> fs;
  for (int i = 0; i <= a.source.top; ++i)
    fs.push_back(mat_add(a.f(i), b.f(i)));
  return ChainMap(a.source, a.target, std::move(fs));
}

ChainMap map_sub(const ChainMap& a, const ChainMap& b) {
  return map_add(a, map_neg(b));
}

ChainMap map_neg(const ChainMap& a) {
  std::vector<Mat> fs;
  for (int i = 0; i <= a.source.top; ++i) fs.push_back(mat_neg(a.f(i)));
  return ChainMap(a.source, a.target, std::move(fs));
}

ChainComplex dual_complex(const ChainComplex& C, int n) {
  require(n >= 0, "dual dimension must be non-negative");
  std::vector<int> ranks;
  for (int i = 0; i <= n; ++i) ranks.push_back(C.rank(n - i));
  std::vector<Mat> diffs;
  for (int i = 1; i <= n; ++i)
    diffs.push_back(involuted_transpose(C.diff(n - i + 1)));
  return ChainComplex(C.ring, std::move(ranks), std::move(diffs));
}

ChainMap dual_map(const ChainMap& f, int n) {
  ChainComplex src = dual_complex(f.target, n);
  ChainComplex tgt = dual_complex(f.source, n);
  std::vector<Mat> fs;
  for (int i = 0; i <= n; ++i)
    fs.push_back(involuted_transpose(f.f(n - i)));
  return ChainMap(std::move(src), std::move(tgt), std::move(fs));
}

ChainComplex mapping_cone(const ChainMap& f) {
  const ChainComplex& C = f.source;
  const ChainComplex& D = f.target;
  int top = std::max(D.top, C.top + 1);
  std::vector<int> ranks;
  for (int i = 0; i <= top; ++i) ranks.push_back(D.rank(i) + C.rank(i - 1));
  std::vector<Mat> diffs;
  for (int i = 1; i <= top; ++i) {
    Mat off = (i - 1) % 2 == 0 ? f.f(i - 1) : mat_neg(f.f(i - 1));
    Mat upper = hstack(D.diff(i), off);
    Mat lower =
        hstack(mat_zero(C.ring, C.rank(i - 2), D.rank(i)), C.diff(i - 1));
    diffs.push_back(vstack(upper, lower));
  }
  return ChainComplex(C.ring, std::move(ranks), std::move(diffs));
}

ChainMap cone_inclusion(const ChainMap& f) {
  ChainComplex cone = mapping_cone(f);
  const ChainComplex& D = f.target;
  std::vector<Mat> fs;
  for (int i = 0; i <= D.top; ++i)
    fs.push_back(vstack(mat_identity(D.ring, D.rank(i)),
                        mat_zero(D.ring, f.source.rank(i - 1), D.rank(i))));
  return ChainMap(D, std::move(cone), std::move(fs));
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  require(a.ring == b.ring, "direct sum over different rings");
  int top = std::max(a.top, b.top);
  std::vector<int> ranks;
  for (int i = 0; i <= top; ++i) ranks.push_back(a.rank(i) + b.rank(i));
  std::vector<Mat> diffs;
  for (int i = 1; i <= top; ++i)
    diffs.push_back(block_diag(a.diff(i), b.diff(i)));
  return ChainComplex(a.ring, std::move(ranks), std::move(diffs));
}

ChainMap direct_sum_map(const ChainMap& f, const ChainMap& g) {
  ChainComplex src = direct_sum(f.source, g.source);
  ChainComplex tgt = direct_sum(f.target, g.target);
  std::vector<Mat> fs;
  for (int i = 0; i <= src.top; ++i)
    fs.push_back(block_diag(f.f(i), g.f(i)));
  return ChainMap(std::move(src), std::move(tgt), std::move(fs));
}

ChainComplex truncate_top(const ChainComplex& C, int new_top) {
  require(new_top >= 0, "truncation degree must be non-negative");
  std::vector<int> ranks;
  for (int i = 0; i <= new_top; ++i) ranks.push_back(C.rank(i));
  std::vector<Mat> diffs;
  for (int i = 1; i <= new_top; ++i) diffs.push_back(C.diff(i));
  return ChainComplex(C.ring, std::move(ranks), std::move(diffs));
}

HomologyGroup homology(const ChainComplex& C, int i) {
  if (!C.ring.snf_supported())
    throw UnsupportedRing("homology needs a ring with Smith normal form: " +
                          C.ring.tag());
  if (C.rank(i) == 0) return {};
  Mat K = kernel_basis(C.diff(i));
  if (K.cols == 0) return {};
  auto X = solve_linear(K, C.diff(i + 1));
  require(X.has_value(), "boundaries do not lie in the cycle summand");
  SnfResult snf = smith_normal_form(*X);
  HomologyGroup H;
  H.free_rank = K.cols - snf_rank(snf);
  for (const Elem& e : invariant_factors(snf))
    if (!is_unit_elem(e)) H.torsion.push_back(e);
  return H;
}

std::vector<HomologyGroup> homology_all(const ChainComplex& C) {
  std::vector<HomologyGroup> out;
  for (int i = 0; i <= C.top; ++i) out.push_back(homology(C, i));
  return out;
}

Cert is_contractible_cert(const ChainComplex& C) {
  if (C.ring.snf_supported()) {
    for (int i = 0; i <= C.top; ++i)
      if (!homology(C, i).is_zero()) return Cert::No;
    return Cert::Yes;
  }
  // No Smith form available: a bounded free complex is contractible exactly
  // when its identity admits a contraction, which is a linear problem.
  auto out = find_null_homotopy(identity_map(C));
  switch (out.status) {
    case SolveStatus::Solved:
      return Cert::Yes;
    case SolveStatus::NoSolution:
      return Cert::No;
    default:
      return Cert::Unknown;
  }
}

Cert is_equivalence_cert(const ChainMap& f) {
  return is_contractible_cert(mapping_cone(f));
}

bool is_equivalence(const ChainMap& f) {
  switch (is_equivalence_cert(f)) {
    case Cert::Yes:
      return true;
    case Cert::No:
      return false;
    default:
      throw UnsupportedRing("equivalence undecided over " +
                            f.source.ring.tag() + " (solver inconclusive)");
  }
}

NullHomotopyOutcome find_null_homotopy(const ChainMap& f) {
  const ChainComplex& S = f.source;
  const ChainComplex& T = f.target;
  const Ring& R = S.ring;
  int hi = std::max(S.top, T.top);
  LinSystem sys;
  sys.ring = R;
  std::vector<int> u;
  for (int i = 0; i <= hi; ++i)
    u.push_back(sys.add_unknown(T.rank(i + 1), S.rank(i)));
  for (int i = 0; i <= hi; ++i) {
    int eq = sys.add_equation(f.f(i));
    sys.add_term(eq, u[static_cast<size_t>(i)], T.diff(i + 1),
                 mat_identity(R, S.rank(i)));
    if (i >= 1)
      sys.add_term(eq, u[static_cast<size_t>(i - 1)],
                   mat_identity(R, T.rank(i)), S.diff(i));
  }
  auto sol = solve_matrix_system(sys);
  NullHomotopyOutcome out;
  out.status = sol.status;
  if (sol.status == SolveStatus::Solved) {
    std::vector<Mat> hs(sol.unknowns.begin(),
                        sol.unknowns.begin() + S.top + 1);
    out.homotopy = ChainHomotopy(f, zero_map(S, T), std::move(hs));
  }
  return out;
}

HomotopyInverseOutcome find_homotopy_inverse(const ChainMap& f) {
  const ChainComplex& C = f.source;
  const ChainComplex& D = f.target;
  const Ring& R = C.ring;
  int hi = std::max(C.top, D.top);
  LinSystem sys;
  sys.ring = R;
  std::vector<int> g, h, k;
  for (int i = 0; i <= hi; ++i) {
    g.push_back(sys.add_unknown(C.rank(i), D.rank(i)));
    h.push_back(sys.add_unknown(D.rank(i + 1), D.rank(i)));
    k.push_back(sys.add_unknown(C.rank(i + 1), C.rank(i)));
  }
  for (int i = 1; i <= hi; ++i) {
    // g must be a chain map: c g_i - g_{i-1} d = 0.
    int eq = sys.add_equation(mat_zero(R, C.rank(i - 1), D.rank(i)));
    sys.add_term(eq, g[static_cast<size_t>(i)], C.diff(i),
                 mat_identity(R, D.rank(i)));
    sys.add_term(eq, g[static_cast<size_t>(i - 1)],
                 mat_neg(mat_identity(R, C.rank(i - 1))), D.diff(i));
  }
  for (int i = 0; i <= hi; ++i) {
    // f g - d h - h d = id on the target.
    int eq = sys.add_equation(mat_identity(R, D.rank(i)));
    sys.add_term(eq, g[static_cast<size_t>(i)], f.f(i),
                 mat_identity(R, D.rank(i)));
    sys.add_term(eq, h[static_cast<size_t>(i)], mat_neg(D.diff(i + 1)),
                 mat_identity(R, D.rank(i)));
    if (i >= 1)
      sys.add_term(eq, h[static_cast<size_t>(i - 1)],
                   mat_neg(mat_identity(R, D.rank(i))), D.diff(i));
    // g f - d k - k d = id on the source.
    int eq2 = sys.add_equation(mat_identity(R, C.rank(i)));
    sys.add_term(eq2, g[static_cast<size_t>(i)], mat_identity(R, C.rank(i)),
                 f.f(i));
    sys.add_term(eq2, k[static_cast<size_t>(i)], mat_neg(C.diff(i + 1)),
                 mat_identity(R, C.rank(i)));
    if (i >= 1)
      sys.add_term(eq2, k[static_cast<size_t>(i - 1)],
                   mat_neg(mat_identity(R, C.rank(i))), C.diff(i));
  }
  auto sol = solve_matrix_system(sys);
  HomotopyInverseOutcome out;
  out.status = sol.status;
  if (sol.status != SolveStatus::Solved) return out;
  std::vector<Mat> gs, hs, ks;
  for (int i = 0; i <= D.top; ++i)
    gs.push_back(sol.unknowns[static_cast<size_t>(g[static_cast<size_t>(i)])]);
  for (int i = 0; i <= D.top; ++i)
    hs.push_back(sol.unknowns[static_cast<size_t>(h[static_cast<size_t>(i)])]);
  for (int i = 0; i <= C.top; ++i)
    ks.push_back(sol.unknowns[static_cast<size_t>(k[static_cast<size_t>(i)])]);
  ChainMap ginv(D, C, std::move(gs));
  out.on_target =
      ChainHomotopy(compose(f, ginv), identity_map(D), std::move(hs));
  out.on_source =
      ChainHomotopy(compose(ginv, f), identity_map(C), std::move(ks));
  out.inverse = std::move(ginv);
  return out;
}

ChainComplex induce(const ChainComplex& C, const RingMap& beta) {
  require(C.ring == beta.source, "complex not over the ring map's source");
  std::vector<Mat> diffs;
  for (const Mat& d : C.diffs) diffs.push_back(induce_mat(beta, d));
  return ChainComplex(beta.target, C.ranks, std::move(diffs));
}

ChainMap induce_map(const ChainMap& f, const RingMap& beta) {
  std::vector<Mat> fs;
  for (const Mat& m : f.comps) fs.push_back(induce_mat(beta, m));
  return ChainMap(induce(f.source, beta), induce(f.target, beta),
                  std::move(fs));
}

ChainMap basis_change(const ChainComplex& C, const std::vector<Mat>& U) {
  require(static_cast<int>(U.size()) == C.top + 1,
          "basis change needs one matrix per degree");
  std::vector<Mat> inv;
  for (int i = 0; i <= C.top; ++i) {
    require(U[static_cast<size_t>(i)].rows == C.rank(i) &&
                U[static_cast<size_t>(i)].cols == C.rank(i),
            "basis change shape mismatch" + at_degree(i));
    auto ui = try_inverse(U[static_cast<size_t>(i)]);
    require(ui.has_value(), "basis change matrix not invertible" + at_degree(i));
    inv.push_back(*ui);
  }
  std::vector<Mat> diffs;
  for (int i = 1; i <= C.top; ++i)
    diffs.push_back(mat_mul(U[static_cast<size_t>(i - 1)],
                            mat_mul(C.diff(i), inv[static_cast<size_t>(i)])));
  ChainComplex moved(C.ring, C.ranks, std::move(diffs));
  return ChainMap(C, std::move(moved), U);
}

ChainComplex random_complex(const Ring& R, std::mt19937_64& rng, int max_top,
                            int max_rank) {
  require(max_top >= 0 && max_rank >= 1, "bad random complex bounds");
  int top = static_cast<int>(rng() % static_cast<unsigned>(max_top + 1));
  int lim = std::min(2, std::max(1, max_rank / 3));
  // a[i]: free summands in degree i; b[i]: contractible pieces in (i, i-1).
  std::vector<int> a(static_cast<size_t>(top) + 1);
  std::vector<int> b(static_cast<size_t>(top) + 2, 0);
  for (int i = 0; i <= top; ++i)
    a[static_cast<size_t>(i)] =
        static_cast<int>(rng() % static_cast<unsigned>(lim + 1));
  for (int i = 1; i <= top; ++i)
    b[static_cast<size_t>(i)] =
        static_cast<int>(rng() % static_cast<unsigned>(lim + 1));
  std::vector<int> ranks;
  for (int i = 0; i <= top; ++i)
    ranks.push_back(a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)] +
                    b[static_cast<size_t>(i + 1)]);
  if (ranks[0] == 0 && top == 0) ranks[0] = 1, a[0] = 1;
  // Degree-i basis layout: [free | pair sources for (i, i-1) | pair targets
  // for (i+1, i)]; c_i maps the source block identically onto the target
  // block one degree down.
  std::vector<Mat> diffs;
  for (int i = 1; i <= top; ++i) {
    Mat d = mat_zero(R, ranks[static_cast<size_t>(i - 1)],
                     ranks[static_cast<size_t>(i)]);
    int src0 = a[static_cast<size_t>(i)];
    int tgt0 = a[static_cast<size_t>(i - 1)] + b[static_cast<size_t>(i - 1)];
    for (int t = 0; t < b[static_cast<size_t>(i)]; ++t)
      d.at(tgt0 + t, src0 + t) = one(R);
    diffs.push_back(std::move(d));
  }
  ChainComplex base(R, std::move(ranks), std::move(diffs));
  std::vector<Mat> U;
  for (int i = 0; i <= base.top; ++i)
    U.push_back(random_unimodular(R, base.rank(i), rng, 6));
  return basis_change(base, U).target;
}

}  // namespace symsig
