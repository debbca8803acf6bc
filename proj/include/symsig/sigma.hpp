#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symsig/forms.hpp"

namespace symsig {

// Replacement of C by an equivalent complex whose middle differential
// vanishes, with both composites certified: u v = id exactly and v u is
// homotopic to the identity through the stored homotopy.
struct SplitWitness {
  ChainComplex C;
  ChainComplex D;
  ChainMap u;               // C -> D
  ChainMap v;               // D -> C
  ChainHomotopy on_source;  // id_C ~ v u
  ChainHomotopy on_target;  // id_D ~ u v (the zero homotopy)
};

// The first non-unit invariant factor blocking the splitting.
struct SplitObstruction {
  Elem factor;
};

using SplitOutcome = std::variant<SplitWitness, SplitObstruction>;

// Kill the m-th differential: D_m = ker(d_m) as a free summand, D_{m-1} a
// complement of the image, identity elsewhere, read off from the Smith
// normal form of d_m.  A zero (or out-of-range) d_m yields the identity
// witness over any ring; otherwise the ring must support normal forms and
// every invariant factor must be a unit.  pivot_variant is forwarded to
// smith_normal_form: a different pivoting order, never a different verdict.
SplitOutcome split_middle(const ChainComplex& C, int m, int pivot_variant = 0);

// Variant-collapsing front end; throws NotSplittable naming the factor.
SplitWitness split_middle_checked(const ChainComplex& C, int m,
                                  int pivot_variant = 0);

// Witness for splitting at two degrees: run b after a (requires b.C == a.D).
SplitWitness compose_witnesses(const SplitWitness& a, const SplitWitness& b);

// Degreewise direct sum of witnesses.
SplitWitness sum_witnesses(const SplitWitness& a, const SplitWitness& b);

// Rank bookkeeping plus evaluation signatures.  Homology is taken over the
// rationalized coefficient ring; the signature list holds the middle-form
// signature for even dimension (plain over scalar rings as omega = 0, at
// t = +1 and t = -1 over Laurent rings) and stays empty in odd dimension or
// when the middle form is skew or has torsion homology.  Signatures are the
// part invariant under cobordism; the rank data distinguishes only up to
// equivalence of representatives.
struct Fingerprint {
  std::vector<int> free_ranks;
  std::vector<int> torsion_counts;
  std::vector<std::pair<int, int>> signatures;  // (omega, signature)

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const SymmetricStructure& x);
std::string fingerprint_text(const Fingerprint& fp);

// A validated closed representative together with its fingerprint.
struct LClassRepresentative {
  SymmetricStructure x;
  Fingerprint fp;
};

// Digests of the inputs and of every choice that went into a run, so that
// independence of choices is testable rather than assumed.
struct Provenance {
  std::string input_digest;
  std::string witness_digest;
  std::string lagrangian_digest;  // empty in the even case
  int stabilization = 0;          // hyperbolic blocks added to certify L
};

struct SigmaResult {
  LClassRepresentative rep;
  Provenance provenance;
};

// Cap an even-dimensional pair: split the boundary in the middle, transport
// the boundary structure along the witness, glue the zero-relative-structure
// truncation nullbordism.  Returns the closed 2m-dimensional representative
// with relations checked; a definite failure of the duality certificate
// throws, an inconclusive one is left to the caller's validator.
SigmaResult sigma_even(const PoincarePair& P, int pivot_variant = 0);
SigmaResult sigma_even_with(const PoincarePair& P, const SplitWitness& w);

// Odd case: split the boundary at m+1 and then m, read off the middle form
// mu as the inverse of the transported duality layer (psi_0)_m, certify L
// against mu (stabilizing by hyperbolic blocks eagerly, smallest count
// first, recorded in provenance), and glue the nullbordism concentrated in
// degrees <= m with top module L^*.
SigmaResult sigma_odd(const PoincarePair& P, const Mat& L,
                      int pivot_variant = 0);
SigmaResult sigma_odd_with(const PoincarePair& P, const Mat& L,
                           const SplitWitness& w);

// Formation (F, K, A K) for an automorphism A of F: the difference of the
// two odd capping results along the same Lagrangian.
Formation difference_formation(const EpsForm& F, const Mat& K, const Mat& A);

// Push a certified Lagrangian of F1 through an isometry iso with
// invT(iso) mu2 iso = mu1; the image is certified against F2.
Mat transport_lagrangian(const EpsForm& F1, const EpsForm& F2, const Mat& iso,
                         const Mat& K);

// Deterministic content digests (FNV-1a over a canonical text dump).
std::string digest_matrix(const Mat& a);
std::string digest_structure(const SymmetricStructure& x);
std::string digest_pair(const PoincarePair& P);
std::string digest_witness(const SplitWitness& w);

}  // namespace symsig
