#pragma once

#include <optional>
#include <random>
#include <vector>

#include "symsig/linalg.hpp"

namespace symsig {

// Bounded chain complex of finitely generated free modules, concentrated in
// degrees [0, top].  diffs[i-1] holds c_i : C_i -> C_{i-1}; c_i * c_{i+1} = 0
// is checked at construction.  Degree lookups outside the range behave as
// rank-zero modules.
struct ChainComplex {
  Ring ring;
  int top = 0;
  std::vector<int> ranks;  // size top+1
  std::vector<Mat> diffs;  // size top, diffs[i-1] = c_i

  ChainComplex(Ring R, std::vector<int> rk, std::vector<Mat> ds);

  int rank(int i) const;
  Mat diff(int i) const;  // c_i, zero-shaped outside [1, top]
  int total_rank() const;

  bool operator==(const ChainComplex& o) const;
  bool operator!=(const ChainComplex& o) const { return !(*this == o); }
};

ChainComplex zero_complex(const Ring& R);

// Degreewise map f_i : source_i -> target_i with the chain-map squares
// checked at construction.  comps has size source.top+1.
struct ChainMap {
  ChainComplex source;
  ChainComplex target;
  std::vector<Mat> comps;

  ChainMap(ChainComplex src, ChainComplex tgt, std::vector<Mat> fs);

  Mat f(int i) const;  // zero-shaped outside the stored range

  bool operator==(const ChainMap& o) const;
};

// Witness that two parallel chain maps agree up to homotopy:
// f_i - g_i = c_{i+1} h_i + h_{i-1} c_i, checked at construction.
// comps[i] = h_i : source_i -> target_{i+1}.
struct ChainHomotopy {
  ChainMap from;
  ChainMap to;
  std::vector<Mat> comps;

  ChainHomotopy(ChainMap f, ChainMap g, std::vector<Mat> hs);

  Mat h(int i) const;
};

ChainMap identity_map(const ChainComplex& C);
ChainMap zero_map(const ChainComplex& src, const ChainComplex& tgt);
ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f
ChainMap map_add(const ChainMap& a, const ChainMap& b);
ChainMap map_sub(const ChainMap& a, const ChainMap& b);
ChainMap map_neg(const ChainMap& a);

// n-dual: degree-i module is the dual of C_{n-i}; the i-th differential is
// the involuted transpose of c_{n-i+1}.
ChainComplex dual_complex(const ChainComplex& C, int n);
// Contravariant dual of a map: f : C -> D gives dual_map(f, n) : D" -> C"
// with components invT(f_{n-i}).
ChainMap dual_map(const ChainMap& f, int n);

// cone(f)_i = target_i (+) source_{i-1} with differential
// [[c^tgt, (-1)^{i-1} f],[0, c^src]].
ChainComplex mapping_cone(const ChainMap& f);
ChainMap cone_inclusion(const ChainMap& f);  // target -> cone(f)

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);
ChainMap direct_sum_map(const ChainMap& f, const ChainMap& g);

// Quotient complex keeping degrees [0, new_top].
ChainComplex truncate_top(const ChainComplex& C, int new_top);

struct HomologyGroup {
  int free_rank = 0;
  std::vector<Elem> torsion;  // non-unit invariant factors, divisibility order

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
};

// ker(c_i)/im(c_{i+1}) via Smith normal form; SNF-supported rings only.
HomologyGroup homology(const ChainComplex& C, int i);
std::vector<HomologyGroup> homology_all(const ChainComplex& C);

enum class Cert { Yes, No, Unknown };

// Contractibility / equivalence certificates.  Over SNF-supported rings the
// homology of the cone decides; elsewhere an explicit contraction is solved
// for (group rings exactly, Z[t,t^-1] via the windowed solver, which may be
// inconclusive).
Cert is_contractible_cert(const ChainComplex& C);
Cert is_equivalence_cert(const ChainMap& f);
// bool front-end: throws UnsupportedRing when no certificate either way.
bool is_equivalence(const ChainMap& f);

struct NullHomotopyOutcome {
  SolveStatus status = SolveStatus::Inconclusive;
  std::optional<ChainHomotopy> homotopy;  // witness f ~ 0 when Solved
};
NullHomotopyOutcome find_null_homotopy(const ChainMap& f);

struct HomotopyInverseOutcome {
  SolveStatus status = SolveStatus::Inconclusive;
  std::optional<ChainMap> inverse;
  std::optional<ChainHomotopy> on_target;  // f g ~ id_target
  std::optional<ChainHomotopy> on_source;  // g f ~ id_source
};
HomotopyInverseOutcome find_homotopy_inverse(const ChainMap& f);

// Base change along a ring map: same ranks, entrywise beta.
ChainComplex induce(const ChainComplex& C, const RingMap& beta);
ChainMap induce_map(const ChainMap& f, const RingMap& beta);

// Change of basis by degreewise unimodular matrices: returns the isomorphic
// complex together with the isomorphism from C.
ChainMap basis_change(const ChainComplex& C, const std::vector<Mat>& U);

// Seeded random complex: direct sum of elementary contractible pieces and
// free summands, conjugated by random unimodular basis changes, so homology
// is known by construction while matrices stay generic.
ChainComplex random_complex(const Ring& R, std::mt19937_64& rng, int max_top,
                            int max_rank);

}  // namespace symsig
