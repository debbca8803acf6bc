#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "symsig/errors.hpp"

namespace symsig {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Rings with involution: Z, Q (identity involution), Laurent rings Z[t,t^-1],
// Q[t,t^-1] (t -> t^-1), and cyclic group rings Z[Z/k], Q[Z/k] (g -> g^-1).
enum class RingKind { Z, Q, LaurentZ, LaurentQ, CyclicZ, CyclicQ };

struct Ring {
  RingKind kind = RingKind::Z;
  int order = 0;  // cyclic group order; 0 for non-group rings

  friend bool operator==(const Ring&, const Ring&) = default;

  bool is_scalar() const { return kind == RingKind::Z || kind == RingKind::Q; }
  bool is_laurent() const {
    return kind == RingKind::LaurentZ || kind == RingKind::LaurentQ;
  }
  bool is_cyclic() const {
    return kind == RingKind::CyclicZ || kind == RingKind::CyclicQ;
  }
  bool rational_coeffs() const {
    return kind == RingKind::Q || kind == RingKind::LaurentQ ||
           kind == RingKind::CyclicQ;
  }
  bool has_half() const { return rational_coeffs(); }
  // Rings with a Euclidean division usable by the normal-form engine.
  bool snf_supported() const {
    return kind == RingKind::Z || kind == RingKind::Q ||
           kind == RingKind::LaurentQ;
  }
  // Coefficient ring (Z or Q).
  Ring base() const;
  // Same ring with rational coefficients (Z -> Q etc.).
  Ring rationalized() const;

  std::string tag() const;
  static Ring from_tag(const std::string& tag);

  static Ring Z() { return {RingKind::Z, 0}; }
  static Ring Q() { return {RingKind::Q, 0}; }
  static Ring laurent_z() { return {RingKind::LaurentZ, 0}; }
  static Ring laurent_q() { return {RingKind::LaurentQ, 0}; }
  static Ring cyclic_z(int k);
  static Ring cyclic_q(int k);
};

// Canonical exact element: sorted exponent -> coefficient map, no zero
// coefficients stored, cyclic exponents normalized into [0, order), integer
// coefficients (denominator 1) over Z-coefficient rings.  Scalars live at
// exponent 0.  Equality is structural.
struct Elem {
  Ring ring;
  std::map<std::int64_t, Rat> coeffs;

  friend bool operator==(const Elem&, const Elem&) = default;
};

Elem zero(const Ring& R);
Elem one(const Ring& R);
Elem from_int(const Ring& R, const Int& v);
Elem from_rat(const Ring& R, const Rat& v);
Elem monomial(const Ring& R, std::int64_t exp, const Rat& coeff);

bool is_zero(const Elem& a);
bool is_one(const Elem& a);

Elem add(const Elem& a, const Elem& b);
Elem sub(const Elem& a, const Elem& b);
Elem neg(const Elem& a);
Elem mul(const Elem& a, const Elem& b);
Elem pow_elem(const Elem& a, unsigned n);

Elem apply_involution(const Elem& a);

// Units decided in closed form for Z, Q and Laurent rings; cyclic group rings
// go through the matrix layer (regular representation), see linalg.
bool is_unit_closed_form(const Elem& a);
std::optional<Elem> unit_inverse_closed_form(const Elem& a);

// Exact division in the integral-domain rings (everything except cyclic):
// returns b/a when a | b.
std::optional<Elem> exact_div(const Elem& b, const Elem& a);

// Euclidean interface (Z, Q, Q[t,t^-1] only).
// Size: |a| over Z, 1 over Q, exponent span over Q[t,t^-1].
Int euclid_size(const Elem& a);
std::pair<Elem, Elem> euclid_divmod(const Elem& a, const Elem& b);

// Unit u such that a*u is the canonical associate (positive over Z, 1 over Q,
// monic with lowest exponent 0 over Q[t,t^-1]).
Elem canonical_unit_cofactor(const Elem& a);

// Extract the rational value of a scalar-ring element.
Rat scalar_value(const Elem& a);

// Ring homomorphisms compatible with the involutions.
struct RingMap {
  enum class Rule { Identity, Inclusion, Augmentation, Evaluation };

  Ring source;
  Ring target;
  Rule rule = Rule::Identity;
  int omega = 1;  // evaluation point, +1 or -1

  static RingMap identity(const Ring& R);
  static RingMap inclusion(const Ring& src, const Ring& tgt);
  static RingMap augmentation(const Ring& src);            // t -> 1, g -> 1
  static RingMap evaluation(const Ring& src, int omega);   // t -> omega

  std::string rule_name() const;
};

Elem apply_ring_map(const RingMap& beta, const Elem& a);

// Deterministic element generator for property tests and seeded instances.
Elem random_elem(const Ring& R, std::mt19937_64& rng, int max_num = 9,
                 int max_exp = 2);

}  // namespace symsig
