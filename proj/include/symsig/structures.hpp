#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symsig/chain.hpp"

namespace symsig {

// Degreewise matrix collections phi_s, s = 0..n, with components
// (phi_s)_r : C^{n-r+s} -> C_r stored for r = 0..C.top.
using StructureLayers = std::vector<std::vector<Mat>>;

// Component accessor with zero-shaped defaults outside the stored range.
// nu is the dimension the layers are taken against.
Mat layer_component(const ChainComplex& C, int nu, const StructureLayers& th,
                    int s, int r);

// Duality flip on layer u: (T theta_u)_r = (-1)^{r q} invT((theta_u)_q) with
// q = nu - r + u.
Mat layer_flip(const ChainComplex& C, int nu, const StructureLayers& th,
               int u, int r);

// Chain-level relation operator: the (r, s) component of O_nu(theta),
//   d theta_{s,r+1} + (-1)^r theta_{s,r} d^* +
//   (-1)^{nu+s-1} (theta_{s-1,r} + (-1)^s (T theta_{s-1})_r),
// a map C^{nu-r+s-1} -> C_r.  A collection is an nu-dimensional symmetric
// structure exactly when all components vanish.
Mat relation_residual(const ChainComplex& C, int nu, const StructureLayers& th,
                      int r, int s);
bool relations_hold(const ChainComplex& C, int nu, const StructureLayers& th);

// Symmetric structure of dimension n on C.  Construction checks shapes and
// ring consistency; the chain-level relations are the validator's job so
// that failures stay reportable data.
struct SymmetricStructure {
  ChainComplex C;
  int n = 0;
  StructureLayers phis;

  SymmetricStructure(ChainComplex C_, int n_, StructureLayers phis_);

  Mat phi(int s, int r) const;
  static SymmetricStructure zero(const ChainComplex& C, int n);
};

SymmetricStructure negate_structure(const SymmetricStructure& x);
SymmetricStructure add_structures(const SymmetricStructure& a,
                                  const SymmetricStructure& b);
SymmetricStructure direct_sum_structure(const SymmetricStructure& a,
                                        const SymmetricStructure& b);
// Push forward along u : C -> D, giving u phi u^* on D.  Valid structures
// stay valid for any chain map u.
SymmetricStructure transport_structure(const SymmetricStructure& x,
                                       const ChainMap& u);
SymmetricStructure induce_structure(const SymmetricStructure& x,
                                    const RingMap& beta);

// The coboundary of (n+1)-indexed layers kappa: output layer s is the (r, s)
// relation residual taken at dimension n+1.  O_n of the output vanishes
// identically, so adding a coboundary preserves validity.  Requires the
// complex to be concentrated in degrees <= n, which keeps every layer above
// the stored range zero on shape grounds.
SymmetricStructure coboundary_structure(const ChainComplex& C, int n,
                                        const StructureLayers& kappa);

// The signed duality candidate (-1)^{r(r+1)/2} (phi_0)_r : C^{n-*} -> C,
// a chain map whenever the s = 0 relations hold (throws otherwise).
ChainMap duality_map(const SymmetricStructure& x);

struct CheckResult {
  std::string check;
  int degree = -1;
  bool pass = true;
  std::string note;
  std::optional<Mat> residual;
};

struct ValidationReport {
  bool ok = true;
  std::vector<CheckResult> checks;

  void add(CheckResult c);
  const CheckResult* first_failure() const;
};

// Full candidate validation from raw pieces: shape bookkeeping, d d = 0,
// the chain-level relations per (s, r), and certification that the signed
// phi_0 is a chain equivalence.  Failures are entries, not exceptions.
ValidationReport validate_complex_candidate(const Ring& R,
                                            const std::vector<int>& ranks,
                                            const std::vector<Mat>& diffs,
                                            int n,
                                            const StructureLayers& phis);
ValidationReport validate_symmetric_complex(const SymmetricStructure& x);

// Poincare pair of dimension n: boundary structure of dimension n-1 on C,
// ambient complex, inclusion, and relative layers (dphi_s)_r :
// ambient^{n-r+s} -> ambient_r.
struct PoincarePair {
  SymmetricStructure boundary;
  ChainComplex ambient;
  ChainMap incl;
  int n = 0;
  StructureLayers dphis;

  PoincarePair(SymmetricStructure boundary_, ChainComplex ambient_,
               ChainMap incl_, int n_, StructureLayers dphis_);

  Mat dphi(int s, int r) const;
};

// Relative relation: O_n(dphi)_{r,s} + (-1)^n i (phi_s)_r i^*.
Mat pair_residual(const PoincarePair& P, int r, int s);

// Relative duality candidate from the n-dual of the ambient complex to the
// mapping cone of the inclusion; throws when the pair data does not make it
// a chain map.
ChainMap relative_duality_map(const PoincarePair& P);

ValidationReport validate_pair_candidate(
    const Ring& R, const std::vector<int>& bd_ranks,
    const std::vector<Mat>& bd_diffs, const StructureLayers& bd_phis,
    const std::vector<int>& amb_ranks, const std::vector<Mat>& amb_diffs,
    const std::vector<Mat>& incl_comps, const StructureLayers& dphis, int n);
ValidationReport validate_pair(const PoincarePair& P);

// A closed complex viewed as a pair with empty boundary.
PoincarePair closed_pair(const SymmetricStructure& x);
// The algebraic cylinder on X: ambient X, boundary X + (-X), fold
// inclusion, zero relative structure.
PoincarePair cylinder_pair(const SymmetricStructure& x);
PoincarePair pair_sum(const PoincarePair& a, const PoincarePair& b);
PoincarePair negate_pair(const PoincarePair& P);

// Solve the relative relations for dphi given boundary data and inclusion.
// The returned pair satisfies the relations by construction; relative
// duality still needs the validator.
struct CompletePairOutcome {
  SolveStatus status = SolveStatus::Inconclusive;
  std::optional<PoincarePair> pair;
};
CompletePairOutcome complete_pair(const ChainComplex& ambient,
                                  const ChainMap& incl,
                                  const SymmetricStructure& boundary, int n);

// Solve coboundary_structure(C, n, kappa) = delta for kappa; used to certify
// that two structures on C differ by a structure homotopy.
struct StructureHomotopyOutcome {
  SolveStatus status = SolveStatus::Inconclusive;
  StructureLayers kappa;
};
StructureHomotopyOutcome solve_structure_coboundary(const ChainComplex& C,
                                                    int n,
                                                    const StructureLayers& d);

// Glue two pairs along an equivalence u between their boundaries (second
// pair entering with reversed orientation); the output is validated.
SymmetricStructure glue_pairs(const PoincarePair& P, const PoincarePair& Q,
                              const ChainMap& u);

// Algebraic mapping torus of a self-map w respecting the structure up to a
// certified homotopy; underlying complex is cone(id - w).
SymmetricStructure mapping_torus(const SymmetricStructure& x,
                                 const ChainMap& w);

}  // namespace symsig
