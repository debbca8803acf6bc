#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symsig/structures.hpp"

namespace symsig {

// Nondegenerate eps-symmetric form: square mu with involuted_transpose(mu)
// equal to eps*mu and a verified inverse, computed at construction.
struct EpsForm {
  Ring ring;
  int eps = +1;  // +1 or -1
  Mat mu;
  Mat mu_inv;

  EpsForm(int eps_, Mat mu_);

  int rank() const { return mu.rows; }
};

EpsForm hyperbolic_form(const Ring& R, int k, int eps);
EpsForm direct_sum_form(const EpsForm& a, const EpsForm& b);
EpsForm negate_form(const EpsForm& F);
EpsForm induce_form(const EpsForm& F, const RingMap& beta);

// Certified Lagrangian check.  A summand inclusion j with j^* mu j = 0 and a
// right-invertible j^* mu sits in an exact sequence 0 -> L -> P -> L^* -> 0
// over any of the supported domains, so the witnesses returned here (a
// retraction of j and a right inverse of j^* mu) plus the rank count certify
// the definition.  Definite failures set ok = false with the reason; an
// inconclusive solve over Z[t,t^-1] raises UnsupportedRing.
struct LagrangianCheck {
  bool ok = false;
  std::string reason;
  std::optional<Mat> retraction;    // s with s j = I
  std::optional<Mat> coretraction;  // X with (j^* mu) X = I
};
LagrangianCheck is_lagrangian(const EpsForm& F, const Mat& j);

// A form together with an ordered pair of certified Lagrangians.
struct Formation {
  EpsForm form;
  Mat K;
  Mat L;

  Formation(EpsForm form_, Mat K_, Mat L_);  // throws NotLagrangian
};

// Signature over Z or Q, eps = +1, via exact congruence diagonalization.
int signature(const EpsForm& F);
// Signature of a symmetric matrix over a Laurent ring after t -> omega.
// The matrix entry point does not require invertibility over the Laurent
// ring itself, only after evaluation.
int evaluation_signature(const Mat& mu, int omega);
int evaluation_signature(const EpsForm& F, int omega);

// Lagrangian search over Q.  Signature and parity obstructions certify
// NoLagrangian; the search diagonalizes, greedily pairs opposite entries,
// and falls back to a bounded-height isotropic-vector enumeration with
// recursive hyperbolic splitting.  Skew forms always succeed.
struct LagrangianSearch {
  enum class Status { Found, NoLagrangian, Inconclusive };
  Status status = Status::Inconclusive;
  std::optional<Mat> j;
  std::string note;
};
LagrangianSearch find_lagrangian(const EpsForm& F);

// Extend a Lagrangian inclusion to an isomorphism from the hyperbolic form:
// returns A with invT(A) mu A equal to the hyperbolic matrix.  Needs 2 to be
// a unit.
Mat lagrangian_to_iso(const EpsForm& F, const Mat& j);

// Formation (F, K, A K) for an automorphism A of F.
Formation formation_from_automorphism(const EpsForm& F, const Mat& K,
                                      const Mat& A);

// Partial triviality decision: equal or (stably) complementary Lagrangians
// certify Yes with the witness; otherwise Unknown.  Nontriviality is never
// decided here (that is the paper-level content), so No is reserved.
struct TrivialityVerdict {
  Cert verdict = Cert::Unknown;
  std::string certificate;
  std::optional<Mat> witness;
};
TrivialityVerdict is_trivial_formation(const Formation& phi);

// 2m-dimensional structure concentrated in degree m whose middle duality
// component is mu^{-1}, so the induced middle form is exactly mu.
SymmetricStructure complex_from_form(const EpsForm& F, int m);

// (2m+1)-dimensional structure obtained by gluing the two one-step
// nullbordisms of the host form determined by the formation's Lagrangians.
SymmetricStructure complex_from_formation(const Formation& phi, int m);

// Middle form of an even-dimensional structure over Q or Q[t,t^-1]: the
// inverse of the duality pairing on a lifted basis of middle cohomology.
// Throws NotFree when the middle homology has torsion.
EpsForm middle_form(const SymmetricStructure& x);

}  // namespace symsig
