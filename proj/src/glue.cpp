#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "symsig/errors.hpp"
#include "symsig/structures.hpp"

namespace symsig {

namespace {

bool even(int k) { return k % 2 == 0; }

void paste(Mat& dst, int r0, int c0, const Mat& src) {
  for (int i = 0; i < src.rows; ++i)
    for (int j = 0; j < src.cols; ++j) dst.at(r0 + i, c0 + j) = src.at(i, j);
}

Mat signed_block(int exponent, Mat m) {
  if (!even(exponent)) m = mat_neg(m);
  return m;
}

// After reconciliation the second pair's relative layers must satisfy the
// pair relations against the transported boundary structure; this check is
// what certifies the correction.
bool reconciled_relations_hold(const SymmetricStructure& bd,
                               const ChainComplex& amb, const ChainMap& j,
                               int n, const StructureLayers& dpsi) {
  PoincarePair probe(bd, amb, j, n, dpsi);
  for (int r = 0; r <= amb.top; ++r)
    for (int s = 0; s <= n + 1; ++s)
      if (!mat_is_zero(pair_residual(probe, r, s))) return false;
  return true;
}

}  // namespace

SymmetricStructure glue_pairs(const PoincarePair& P, const PoincarePair& Q,
                              const ChainMap& u) {
  const Ring& R = P.ambient.ring;
  require(Q.ambient.ring == R, "glue: pairs live over different rings");
  require(P.n == Q.n, "glue: pairs have different dimensions");
  require(u.source == P.boundary.C && u.target == Q.boundary.C,
          "glue: identification must map the first boundary onto the second");
  const int n = P.n;
  const ChainComplex& C = P.boundary.C;
  const ChainComplex& Ca = P.ambient;
  const ChainComplex& Da = Q.ambient;

  if (is_equivalence_cert(u) != Cert::Yes)
    throw BoundaryMismatch(
        "glue: boundary identification is not a certified equivalence");

  // Transport the first boundary structure onto the second boundary.  When
  // the structures differ, the discrepancy must be a structure coboundary;
  // it is then absorbed into the relative layers of the second pair, since
  // the relation operator commutes with conjugation by the inclusion.
  SymmetricStructure pushed = transport_structure(P.boundary, u);
  StructureLayers dpsi = Q.dphis;
  if (pushed.phis != Q.boundary.phis) {
    const ChainComplex& D = Q.boundary.C;
    StructureLayers delta(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
      delta[s].reserve(D.top + 1);
      for (int r = 0; r <= D.top; ++r)
        delta[s].push_back(mat_sub(Q.boundary.phi(s, r), pushed.phi(s, r)));
    }
    StructureHomotopyOutcome fix;
    try {
      fix = solve_structure_coboundary(D, n - 1, delta);
    } catch (const Error& e) {
      throw BoundaryMismatch(
          std::string("glue: boundary reconciliation unavailable: ") +
          e.what());
    }
    if (fix.status != SolveStatus::Solved)
      throw BoundaryMismatch(
          "glue: boundary structures do not differ by a certified structure "
          "homotopy");
    const ChainMap& j = Q.incl;
    for (int s = 0; s <= n; ++s)
      for (int r = 0; r <= Da.top; ++r) {
        Mat k = layer_component(D, n, fix.kappa, s, r);
        Mat corr =
            mat_mul(mat_mul(j.f(r), k), involuted_transpose(j.f(n - r + s)));
        dpsi[s][r] = mat_add(dpsi[s][r], signed_block(n, std::move(corr)));
      }
    if (!reconciled_relations_hold(pushed, Da, j, n, dpsi))
      throw BoundaryMismatch("glue: boundary reconciliation failed");
  }

  ChainMap ju = compose(Q.incl, u);

  // Union complex E_r = Ca_r (+) C_{r-1} (+) Da_r with the boundary copy
  // flowing into both sides along the signed inclusions.
  int top = std::max(std::max(Ca.top, Da.top), C.top + 1);
  std::vector<int> ranks(static_cast<size_t>(top) + 1, 0);
  for (int r = 0; r <= top; ++r)
    ranks[static_cast<size_t>(r)] = Ca.rank(r) + C.rank(r - 1) + Da.rank(r);
  while (top > 0 && ranks[static_cast<size_t>(top)] == 0) {
    ranks.pop_back();
    --top;
  }
  std::vector<Mat> diffs;
  diffs.reserve(static_cast<size_t>(top));
  for (int r = 1; r <= top; ++r) {
    Mat d = mat_zero(R, ranks[static_cast<size_t>(r) - 1],
                     ranks[static_cast<size_t>(r)]);
    paste(d, 0, 0, Ca.diff(r));
    paste(d, 0, Ca.rank(r), signed_block(r - 1, P.incl.f(r - 1)));
    paste(d, Ca.rank(r - 1), Ca.rank(r), C.diff(r - 1));
    paste(d, Ca.rank(r - 1) + C.rank(r - 2), Ca.rank(r),
          signed_block(r - 1, ju.f(r - 1)));
    paste(d, Ca.rank(r - 1) + C.rank(r - 2), Ca.rank(r) + C.rank(r - 1),
          Da.diff(r));
    diffs.push_back(std::move(d));
  }
  ChainComplex E(R, std::move(ranks), std::move(diffs));

  // Glued structure: relative layers on the diagonal corners (second pair
  // negated), boundary layers woven through the off-diagonal blocks.
  const StructureLayers& phi = P.boundary.phis;
  StructureLayers th(static_cast<size_t>(n) + 1);
  for (int s = 0; s <= n; ++s) {
    th[static_cast<size_t>(s)].reserve(static_cast<size_t>(E.top) + 1);
    for (int r = 0; r <= E.top; ++r) {
      int q = n - r + s;
      Mat m = mat_zero(R, E.rank(r), E.rank(q));
      int row1 = Ca.rank(r);
      int row2 = Ca.rank(r) + C.rank(r - 1);
      int col1 = Ca.rank(q);
      int col2 = Ca.rank(q) + C.rank(q - 1);
      paste(m, 0, 0, P.dphi(s, r));
      paste(m, row1, 0,
            signed_block(n + r - 1,
                         mat_mul(layer_component(C, n - 1, phi, s, r - 1),
                                 involuted_transpose(P.incl.f(q)))));
      if (s >= 1)
        paste(m, row1, col1,
              signed_block(n + r + s - 1,
                           layer_flip(C, n - 1, phi, s - 1, r - 1)));
      paste(m, row2, col1,
            signed_block(
                s, mat_mul(ju.f(r), layer_component(C, n - 1, phi, s, r))));
      paste(m, row2, col2, mat_neg(layer_component(Da, n, dpsi, s, r)));
      th[static_cast<size_t>(s)].push_back(std::move(m));
    }
  }

  SymmetricStructure out(std::move(E), n, std::move(th));
  if (!relations_hold(out.C, out.n, out.phis))
    throw StructureMismatch(
        "glue: union relations failed; an input does not satisfy the pair "
        "relations");
  return out;
}

SymmetricStructure mapping_torus(const SymmetricStructure& x,
                                 const ChainMap& w) {
  require(w.source == x.C && w.target == x.C,
          "mapping torus: w must be a chain self-map of the underlying "
          "complex");
  const Ring& R = x.C.ring;

  // Glue two cylinders on x along w (+) id; the outcome is the twisted
  // double, which compresses onto cone(id - w).
  PoincarePair cyl = cylinder_pair(x);
  ChainMap u = direct_sum_map(w, identity_map(x.C));
  SymmetricStructure glued = [&]() -> SymmetricStructure {
    try {
      return glue_pairs(cyl, cyl, u);
    } catch (const BoundaryMismatch& e) {
      throw StructureMismatch(std::string("mapping torus: ") + e.what());
    }
  }();

  ChainMap one_minus_w = map_sub(identity_map(x.C), w);
  ChainComplex cone = mapping_cone(one_minus_w);
  std::vector<Mat> comps;
  comps.reserve(static_cast<size_t>(cone.top) + 1);
  for (int r = 0; r <= cone.top; ++r) {
    int cr = x.C.rank(r);
    int cr1 = x.C.rank(r - 1);
    Mat h = mat_zero(R, glued.C.rank(r), cr + cr1);
    paste(h, 0, 0, mat_identity(R, cr));
    paste(h, cr, cr, mat_identity(R, cr1));
    paste(h, cr + cr1, cr, mat_neg(w.f(r - 1)));
    comps.push_back(std::move(h));
  }
  ChainMap compress(cone, glued.C, std::move(comps));
  HomotopyInverseOutcome inv = find_homotopy_inverse(compress);
  if (inv.status != SolveStatus::Solved || !inv.inverse)
    throw StructureMismatch(
        "mapping torus: compression equivalence not certified over this "
        "ring");
  SymmetricStructure out = transport_structure(glued, *inv.inverse);
  if (!relations_hold(out.C, out.n, out.phis))
    throw StructureMismatch("mapping torus: output relations failed");
  return out;
}

}  // namespace symsig
