#include "symsig/fixtures.hpp"

#include "symsig/chain.hpp"
#include "symsig/errors.hpp"
#include "symsig/linalg.hpp"

namespace symsig {

namespace {

// Two points with opposite orientation: the 0-dimensional boundary sphere.
SymmetricStructure two_points(const Ring& R) {
  ChainComplex C(R, {2}, {});
  StructureLayers phis(1);
  phis[0] = {mat_from_ints(R, 2, 2, {1, 0, 0, -1})};
  return SymmetricStructure(std::move(C), 0, std::move(phis));
}

// Interval pair over Z[t,t^-1]: both endpoints included in one interval,
// the far end attached through t (twisted) or 1 (constant).
PoincarePair interval_pair(bool twisted) {
  Ring R = Ring::laurent_z();
  Elem end = twisted ? monomial(R, 1, 1) : one(R);
  SymmetricStructure bd = two_points(R);
  ChainComplex amb(R, {2, 1}, {mat_from_elems(R, 2, 1, {neg(one(R)), end})});
  ChainMap incl(bd.C, amb, {mat_identity(R, 2)});
  StructureLayers dphis(2);
  dphis[0] = {mat_from_elems(R, 2, 1, {zero(R), neg(end)}),
              mat_from_ints(R, 1, 2, {-1, 0})};
  dphis[1] = {mat_zero(R, 2, 0), mat_from_ints(R, 1, 1, {-1})};
  return PoincarePair(std::move(bd), std::move(amb), std::move(incl), 1,
                      std::move(dphis));
}

// Rank-one circle model with differential t - 1 over Q[t,t^-1].
SymmetricStructure circle_model() {
  Ring R = Ring::laurent_q();
  Elem t = monomial(R, 1, 1);
  ChainComplex C(R, {1, 1}, {mat_from_elems(R, 1, 1, {sub(t, one(R))})});
  StructureLayers phis(2);
  phis[0] = {mat_from_ints(R, 1, 1, {1}),
             mat_from_elems(R, 1, 1, {monomial(R, -1, 1)})};
  phis[1] = {mat_zero(R, 1, 0), mat_from_ints(R, 1, 1, {-1})};
  return SymmetricStructure(std::move(C), 1, std::move(phis));
}

// Rank-one circle with zero differential over Q (boundary of the disk).
SymmetricStructure rational_circle() {
  Ring R = Ring::Q();
  ChainComplex C(R, {1, 1}, {mat_zero(R, 1, 1)});
  StructureLayers phis(2);
  phis[0] = {mat_from_ints(R, 1, 1, {1}), mat_from_ints(R, 1, 1, {1})};
  phis[1] = {mat_zero(R, 1, 0), mat_from_ints(R, 1, 1, {-1})};
  return SymmetricStructure(std::move(C), 1, std::move(phis));
}

PoincarePair disk_pair() {
  Ring R = Ring::Q();
  SymmetricStructure bd = rational_circle();
  ChainComplex amb(R, {1, 1, 1},
                   {mat_zero(R, 1, 1), mat_from_ints(R, 1, 1, {1})});
  ChainMap incl(bd.C, amb, {mat_identity(R, 1), mat_identity(R, 1)});
  CompletePairOutcome done = complete_pair(amb, incl, bd, 2);
  require(done.status == SolveStatus::Solved,
          "disk fixture: relative structure solve failed");
  return *done.pair;
}

EpsForm paper_form() {
  return EpsForm(+1, mat_from_ints(Ring::laurent_z(), 2, 2, {1, 0, 0, -1}));
}

Formation paper_formation() {
  Ring R = Ring::laurent_z();
  Mat diagonal = mat_from_ints(R, 2, 1, {1, 1});
  Mat twisted = mat_from_elems(R, 2, 1, {one(R), monomial(R, 1, 1)});
  return Formation(paper_form(), std::move(diagonal), std::move(twisted));
}

// Two copies of the cylinder on the rational circle glued along the
// identity: a closed 2-dimensional structure over Q with a Witt-trivial
// middle form.
SymmetricStructure double_of_circle() {
  PoincarePair cyl = cylinder_pair(rational_circle());
  return glue_pairs(cyl, cyl, identity_map(cyl.boundary.C));
}

int bounded(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
}

// Random isometry of a hyperbolic form [[0, I], [eps I, 0]] of rank 2k:
// a block-diagonal piece diag(U, (U^T)^{-1}) composed with a shear
// [[I, B], [0, I]] whose block satisfies B^T = -eps B.
Mat hyperbolic_isometry(const Ring& R, int k, int eps, std::mt19937_64& rng) {
  Mat U = random_unimodular(R, k, rng);
  std::optional<Mat> V = try_inverse(involuted_transpose(U));
  require(V.has_value(), "random isometry: unimodular factor not invertible");
  Mat M = random_matrix(R, k, k, rng);
  Mat B = eps == 1 ? mat_sub(M, involuted_transpose(M))
                   : mat_add(M, involuted_transpose(M));
  Mat upper = hstack(U, mat_mul(U, B));
  Mat lower = hstack(mat_zero(R, k, k), *V);
  return vstack(upper, lower);
}

SymmetricStructure conjugated(SymmetricStructure x, std::mt19937_64& rng) {
  std::vector<Mat> gs;
  for (int r = 0; r <= x.C.top; ++r)
    gs.push_back(random_unimodular(x.C.ring, x.C.rank(r), rng));
  return transport_structure(x, basis_change(x.C, gs));
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"s0-boundary",        "d1-pair-t",     "d1-pair-e",
          "circle",             "disk2",         "form-diag-1-minus1",
          "formation-paper",    "doubles",       "random-pair-seed0-dim2"};
}

SymmetricStructure fixture_structure(const std::string& name) {
  if (name == "s0-boundary") return two_points(Ring::laurent_z());
  if (name == "circle") return circle_model();
  if (name == "doubles") return double_of_circle();
  throw UnknownFixture("no structure fixture named '" + name + "'");
}

PoincarePair fixture_pair(const std::string& name) {
  if (name == "d1-pair-t") return interval_pair(true);
  if (name == "d1-pair-e") return interval_pair(false);
  if (name == "disk2") return disk_pair();
  if (name == "random-pair-seed0-dim2") return random_pair(0, 2, 4);
  throw UnknownFixture("no pair fixture named '" + name + "'");
}

EpsForm fixture_form(const std::string& name) {
  if (name == "form-diag-1-minus1") return paper_form();
  throw UnknownFixture("no form fixture named '" + name + "'");
}

Formation fixture_formation(const std::string& name) {
  if (name == "formation-paper") return paper_formation();
  throw UnknownFixture("no formation fixture named '" + name + "'");
}

Json fixture_json(const std::string& name) {
  if (name == "s0-boundary" || name == "circle" || name == "doubles")
    return Json{{"kind", "structure"},
                {"name", name},
                {"value", structure_to_json(fixture_structure(name))}};
  if (name == "d1-pair-t" || name == "d1-pair-e" || name == "disk2" ||
      name == "random-pair-seed0-dim2")
    return Json{{"kind", "pair"},
                {"name", name},
                {"value", pair_to_json(fixture_pair(name))}};
  if (name == "form-diag-1-minus1")
    return Json{{"kind", "form"},
                {"name", name},
                {"value", form_to_json(fixture_form(name))}};
  if (name == "formation-paper")
    return Json{{"kind", "formation"},
                {"name", name},
                {"value", formation_to_json(fixture_formation(name))}};
  throw UnknownFixture("no fixture named '" + name + "'");
}

SymmetricStructure random_closed(std::uint64_t seed, int dimension,
                                 int max_rank) {
  require(dimension >= 0, "random_closed: dimension must be nonnegative");
  require(max_rank >= 1, "random_closed: max_rank must be positive");
  Ring R = Ring::Q();
  std::mt19937_64 rng(seed * 6364136223846793005ull +
                      static_cast<std::uint64_t>(dimension) * 1442695040888963407ull +
                      static_cast<std::uint64_t>(max_rank));
  int m = dimension / 2;
  int eps = m % 2 == 0 ? 1 : -1;
  if (dimension % 2 == 0) {
    if (eps == 1) {
      int k = bounded(rng, 1, max_rank);
      Mat mu = mat_zero(R, k, k);
      for (int i = 0; i < k; ++i)
        mu.at(i, i) = from_int(R, rng() % 2 == 0 ? 1 : -1);
      return conjugated(complex_from_form(EpsForm(+1, std::move(mu)), m), rng);
    }
    int k = bounded(rng, 1, std::max(1, max_rank / 2));
    return conjugated(complex_from_form(hyperbolic_form(R, k, -1), m), rng);
  }
  int k = bounded(rng, 1, std::max(1, max_rank / 2));
  EpsForm H = hyperbolic_form(R, k, eps);
  Mat K = vstack(mat_identity(R, k), mat_zero(R, k, k));
  Mat A = hyperbolic_isometry(R, k, eps, rng);
  require(mat_is_zero(mat_sub(
              mat_mul(involuted_transpose(A), mat_mul(H.mu, A)), H.mu)),
          "random_closed: generated map is not an isometry");
  Formation phi = formation_from_automorphism(H, K, A);
  return conjugated(complex_from_formation(phi, m), rng);
}

PoincarePair random_pair(std::uint64_t seed, int dimension, int max_rank) {
  require(dimension >= 1 && dimension <= 5,
          "random_pair: dimension must be between 1 and 5");
  require(max_rank >= 1 && max_rank <= 8,
          "random_pair: max_rank must be between 1 and 8");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  SymmetricStructure x =
      random_closed(rng(), dimension - 1, std::max(1, max_rank / 2));
  PoincarePair P = cylinder_pair(x);
  if (rng() % 2 == 0) {
    SymmetricStructure y =
        random_closed(rng(), dimension, std::max(1, max_rank / 2));
    P = pair_sum(P, closed_pair(y));
  }
  return conjugate_ambient(P, rng);
}

PoincarePair conjugate_ambient(const PoincarePair& P, std::mt19937_64& rng) {
  std::vector<Mat> gs;
  for (int r = 0; r <= P.ambient.top; ++r)
    gs.push_back(random_unimodular(P.ambient.ring, P.ambient.rank(r), rng));
  ChainMap g = basis_change(P.ambient, gs);
  ChainMap incl = compose(g, P.incl);
  StructureLayers dphis(P.dphis.size());
  for (size_t s = 0; s < P.dphis.size(); ++s)
    for (int r = 0; r <= P.ambient.top; ++r)
      dphis[s].push_back(mat_mul(
          g.f(r),
          mat_mul(P.dphi(static_cast<int>(s), r),
                  involuted_transpose(g.f(P.n - r + static_cast<int>(s))))));
  return PoincarePair(P.boundary, g.target, std::move(incl), P.n,
                      std::move(dphis));
}

ChainMap doubled_isometry(const ChainComplex& doubled, const Rat& a,
                          const Rat& b) {
  const Ring& R = doubled.ring;
  std::vector<Mat> comps;
  for (int r = 0; r <= doubled.top; ++r) {
    require(doubled.rank(r) % 2 == 0,
            "doubled_isometry: every rank must be even");
    int k = doubled.rank(r) / 2;
    Mat m = mat_zero(R, 2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
      m.at(i, i) = from_rat(R, a);
      m.at(i, k + i) = from_rat(R, b);
      m.at(k + i, i) = from_rat(R, b);
      m.at(k + i, k + i) = from_rat(R, a);
    }
    comps.push_back(std::move(m));
  }
  return ChainMap(doubled, doubled, std::move(comps));
}

}  // namespace symsig
