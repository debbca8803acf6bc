#include "symsig/rings.hpp"

#include <algorithm>
#include <vector>

namespace symsig {

namespace {

Rat rat_pow_sign(int omega, std::int64_t e) {
  if (omega == 1) return Rat(1);
  return (e % 2 == 0) ? Rat(1) : Rat(-1);
}

bool is_integral(const Rat& v) { return denominator(v) == 1; }

std::int64_t fold_exp(const Ring& R, std::int64_t e) {
  if (!R.is_cyclic()) return e;
  std::int64_t k = R.order;
  std::int64_t m = e % k;
  return m < 0 ? m + k : m;
}

Elem normalized(const Ring& R, std::map<std::int64_t, Rat>&& raw) {
  Elem out{R, {}};
  for (auto& [e, c] : raw) {
    if (c == 0) continue;
    if (R.is_scalar() && e != 0)
      throw Error("scalar ring element with nonzero exponent");
    if (!R.rational_coeffs() && !is_integral(c))
      throw Error("non-integral coefficient over an integral ring: " +
                  c.str());
    std::int64_t f = fold_exp(R, e);
    auto it = out.coeffs.find(f);
    if (it == out.coeffs.end()) {
      out.coeffs.emplace(f, c);
    } else {
      it->second += c;
      if (it->second == 0) out.coeffs.erase(it);
    }
  }
  return out;
}

// Laurent element as (minimum exponent, ascending dense coefficient vector).
std::pair<std::int64_t, std::vector<Rat>> as_poly(const Elem& a) {
  if (a.coeffs.empty()) return {0, {}};
  std::int64_t lo = a.coeffs.begin()->first;
  std::int64_t hi = a.coeffs.rbegin()->first;
  std::vector<Rat> v(static_cast<size_t>(hi - lo + 1));
  for (auto& [e, c] : a.coeffs) v[static_cast<size_t>(e - lo)] = c;
  return {lo, v};
}

Elem from_poly(const Ring& R, std::int64_t lo, const std::vector<Rat>& v) {
  std::map<std::int64_t, Rat> m;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) m.emplace(lo + static_cast<std::int64_t>(i), v[i]);
  return normalized(R, std::move(m));
}

// Laurent division: a = q*b + r with span(r) < span(b); exact over Q
// coefficients.
void laurent_divmod(const Elem& a, const Elem& b, Elem& q, Elem& r) {
  auto [la, pa] = as_poly(a);
  auto [lb, pb] = as_poly(b);
  std::vector<Rat> rem = pa, quo(pa.size() >= pb.size()
                                     ? pa.size() - pb.size() + 1
                                     : 0);
  while (rem.size() >= pb.size()) {
    Rat lead = rem.back() / pb.back();
    size_t shift = rem.size() - pb.size();
    quo[shift] = lead;
    for (size_t i = 0; i < pb.size(); ++i) rem[shift + i] -= lead * pb[i];
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
  }
  Ring RQ = a.ring.rationalized();
  q = from_poly(RQ, la - lb, quo);
  r = from_poly(RQ, la, rem);
}

}  // namespace

Ring Ring::base() const {
  switch (kind) {
    case RingKind::Z:
    case RingKind::LaurentZ:
    case RingKind::CyclicZ:
      return Ring::Z();
    default:
      return Ring::Q();
  }
}

Ring Ring::rationalized() const {
  switch (kind) {
    case RingKind::Z:
      return Ring::Q();
    case RingKind::LaurentZ:
      return Ring::laurent_q();
    case RingKind::CyclicZ:
      return Ring::cyclic_q(order);
    default:
      return *this;
  }
}

std::string Ring::tag() const {
  switch (kind) {
    case RingKind::Z:
      return "Z";
    case RingKind::Q:
      return "Q";
    case RingKind::LaurentZ:
      return "Z[t,t^-1]";
    case RingKind::LaurentQ:
      return "Q[t,t^-1]";
    case RingKind::CyclicZ:
      return "Z[Z/" + std::to_string(order) + "]";
    case RingKind::CyclicQ:
      return "Q[Z/" + std::to_string(order) + "]";
  }
  throw Error("bad ring kind");
}

Ring Ring::from_tag(const std::string& tag) {
  if (tag == "Z") return Ring::Z();
  if (tag == "Q") return Ring::Q();
  if (tag == "Z[t,t^-1]") return Ring::laurent_z();
  if (tag == "Q[t,t^-1]") return Ring::laurent_q();
  auto cyclic = [&](const std::string& prefix) -> int {
    if (tag.rfind(prefix, 0) != 0 || tag.back() != ']') return 0;
    std::string digits = tag.substr(prefix.size(),
                                    tag.size() - prefix.size() - 1);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      return 0;
    return std::stoi(digits);
  };
  if (int k = cyclic("Z[Z/"); k > 0) return Ring::cyclic_z(k);
  if (int k = cyclic("Q[Z/"); k > 0) return Ring::cyclic_q(k);
  throw ParseError("unknown ring tag: " + tag);
}

Ring Ring::cyclic_z(int k) {
  if (k < 1) throw Error("cyclic group order must be positive");
  return {RingKind::CyclicZ, k};
}

Ring Ring::cyclic_q(int k) {
  if (k < 1) throw Error("cyclic group order must be positive");
  return {RingKind::CyclicQ, k};
}

Elem zero(const Ring& R) { return Elem{R, {}}; }

Elem one(const Ring& R) { return from_int(R, 1); }

Elem from_int(const Ring& R, const Int& v) { return from_rat(R, Rat(v)); }

Elem from_rat(const Ring& R, const Rat& v) {
  std::map<std::int64_t, Rat> m;
  if (v != 0) m.emplace(0, v);
  return normalized(R, std::move(m));
}

Elem monomial(const Ring& R, std::int64_t exp, const Rat& coeff) {
  std::map<std::int64_t, Rat> m;
  if (coeff != 0) m.emplace(exp, coeff);
  return normalized(R, std::move(m));
}

bool is_zero(const Elem& a) { return a.coeffs.empty(); }

bool is_one(const Elem& a) {
  return a.coeffs.size() == 1 && a.coeffs.begin()->first == 0 &&
         a.coeffs.begin()->second == 1;
}

Elem add(const Elem& a, const Elem& b) {
  if (a.ring != b.ring) throw RingMismatch("add: ring mismatch");
  std::map<std::int64_t, Rat> m = a.coeffs;
  for (auto& [e, c] : b.coeffs) m[e] += c;
  return normalized(a.ring, std::move(m));
}

Elem sub(const Elem& a, const Elem& b) { return add(a, neg(b)); }

Elem neg(const Elem& a) {
  Elem out = a;
  for (auto& [e, c] : out.coeffs) c = -c;
  return out;
}

Elem mul(const Elem& a, const Elem& b) {
  if (a.ring != b.ring) throw RingMismatch("mul: ring mismatch");
  std::map<std::int64_t, Rat> m;
  for (auto& [ea, ca] : a.coeffs)
    for (auto& [eb, cb] : b.coeffs) m[fold_exp(a.ring, ea + eb)] += ca * cb;
  return normalized(a.ring, std::move(m));
}

Elem pow_elem(const Elem& a, unsigned n) {
  Elem acc = one(a.ring);
  for (unsigned i = 0; i < n; ++i) acc = mul(acc, a);
  return acc;
}

Elem apply_involution(const Elem& a) {
  std::map<std::int64_t, Rat> m;
  for (auto& [e, c] : a.coeffs) m[fold_exp(a.ring, -e)] = c;
  return normalized(a.ring, std::move(m));
}

bool is_unit_closed_form(const Elem& a) {
  switch (a.ring.kind) {
    case RingKind::Z:
      return a.coeffs.size() == 1 && a.coeffs.begin()->first == 0 &&
             abs(numerator(a.coeffs.begin()->second)) == 1;
    case RingKind::Q:
      return !is_zero(a);
    case RingKind::LaurentZ:
      return a.coeffs.size() == 1 &&
             abs(numerator(a.coeffs.begin()->second)) == 1;
    case RingKind::LaurentQ:
      return a.coeffs.size() == 1;
    default:
      throw UnsupportedRing(
          "unit test over group rings goes through the matrix layer");
  }
}

std::optional<Elem> unit_inverse_closed_form(const Elem& a) {
  if (!is_unit_closed_form(a)) return std::nullopt;
  auto [e, c] = *a.coeffs.begin();
  return monomial(a.ring, fold_exp(a.ring, -e), Rat(1) / c);
}

std::optional<Elem> exact_div(const Elem& b, const Elem& a) {
  if (a.ring != b.ring) throw RingMismatch("exact_div: ring mismatch");
  if (is_zero(a)) throw Error("exact_div by zero");
  if (is_zero(b)) return zero(b.ring);
  switch (a.ring.kind) {
    case RingKind::Z: {
      Int num = numerator(b.coeffs.begin()->second);
      Int den = numerator(a.coeffs.begin()->second);
      if (num % den != 0) return std::nullopt;
      return from_int(a.ring, num / den);
    }
    case RingKind::Q:
      return from_rat(a.ring, b.coeffs.begin()->second /
                                  a.coeffs.begin()->second);
    case RingKind::LaurentZ:
    case RingKind::LaurentQ: {
      Elem q, r;
      laurent_divmod(b, a, q, r);
      if (!is_zero(r)) return std::nullopt;
      if (a.ring.kind == RingKind::LaurentZ) {
        for (auto& [e, c] : q.coeffs)
          if (!is_integral(c)) return std::nullopt;
        q.ring = a.ring;
      }
      return q;
    }
    default:
      throw UnsupportedRing("exact_div over group rings unsupported");
  }
}

Int euclid_size(const Elem& a) {
  if (is_zero(a)) throw Error("euclid_size of zero");
  switch (a.ring.kind) {
    case RingKind::Z:
      return abs(numerator(a.coeffs.begin()->second));
    case RingKind::Q:
      return 1;
    case RingKind::LaurentQ:
      return Int(a.coeffs.rbegin()->first - a.coeffs.begin()->first) + 1;
    default:
      throw UnsupportedRing("no Euclidean structure on " + a.ring.tag());
  }
}

std::pair<Elem, Elem> euclid_divmod(const Elem& a, const Elem& b) {
  if (a.ring != b.ring) throw RingMismatch("euclid_divmod: ring mismatch");
  if (is_zero(b)) throw Error("euclid_divmod by zero");
  switch (a.ring.kind) {
    case RingKind::Z: {
      Int x = is_zero(a) ? Int(0) : numerator(a.coeffs.begin()->second);
      Int y = numerator(b.coeffs.begin()->second);
      Int q = x / y;  // truncation: |r| < |y|
      return {from_int(a.ring, q), from_int(a.ring, x - q * y)};
    }
    case RingKind::Q: {
      if (is_zero(a)) return {zero(a.ring), zero(a.ring)};
      return {from_rat(a.ring, a.coeffs.begin()->second /
                                   b.coeffs.begin()->second),
              zero(a.ring)};
    }
    case RingKind::LaurentQ: {
      if (is_zero(a)) return {zero(a.ring), zero(a.ring)};
      Elem q, r;
      laurent_divmod(a, b, q, r);
      return {q, r};
    }
    default:
      throw UnsupportedRing("no Euclidean structure on " + a.ring.tag());
  }
}

Elem canonical_unit_cofactor(const Elem& a) {
  if (is_zero(a)) return one(a.ring);
  switch (a.ring.kind) {
    case RingKind::Z:
      return from_int(a.ring, numerator(a.coeffs.begin()->second) > 0 ? 1 : -1);
    case RingKind::Q:
      return from_rat(a.ring, Rat(1) / a.coeffs.begin()->second);
    case RingKind::LaurentQ:
      // monic in the top exponent, support shifted to start at exponent 0
      return monomial(a.ring, -a.coeffs.begin()->first,
                      Rat(1) / a.coeffs.rbegin()->second);
    default:
      throw UnsupportedRing("no canonical associate on " + a.ring.tag());
  }
}

Rat scalar_value(const Elem& a) {
  if (!a.ring.is_scalar()) throw RingMismatch("scalar_value: not Z or Q");
  return is_zero(a) ? Rat(0) : a.coeffs.begin()->second;
}

RingMap RingMap::identity(const Ring& R) {
  return {R, R, Rule::Identity, 1};
}

RingMap RingMap::inclusion(const Ring& src, const Ring& tgt) {
  auto ok = [&] {
    if (src == Ring::Z())
      return tgt == Ring::Q() || tgt == Ring::laurent_z() ||
             tgt == Ring::laurent_q() || tgt.kind == RingKind::CyclicZ;
    if (src == Ring::Q())
      return tgt == Ring::laurent_q() || tgt.kind == RingKind::CyclicQ;
    if (src == Ring::laurent_z()) return tgt == Ring::laurent_q();
    if (src.kind == RingKind::CyclicZ)
      return tgt.kind == RingKind::CyclicQ && tgt.order == src.order;
    return false;
  }();
  if (!ok)
    throw Error("no inclusion " + src.tag() + " -> " + tgt.tag());
  return {src, tgt, Rule::Inclusion, 1};
}

RingMap RingMap::augmentation(const Ring& src) {
  if (!src.is_laurent() && !src.is_cyclic())
    throw Error("augmentation needs a Laurent or group ring source");
  return {src, src.base(), Rule::Augmentation, 1};
}

RingMap RingMap::evaluation(const Ring& src, int omega) {
  if (omega != 1 && omega != -1)
    throw Error("evaluation point must be +1 or -1");
  if (!src.is_laurent() && !src.is_cyclic())
    throw Error("evaluation needs a Laurent or group ring source");
  if (src.is_cyclic() && omega == -1 && src.order % 2 != 0)
    throw Error("evaluation at -1 needs even group order");
  return {src, src.base(), Rule::Evaluation, omega};
}

std::string RingMap::rule_name() const {
  switch (rule) {
    case Rule::Identity:
      return "identity";
    case Rule::Inclusion:
      return "inclusion";
    case Rule::Augmentation:
      return "augmentation";
    case Rule::Evaluation:
      return omega == 1 ? "evaluation(+1)" : "evaluation(-1)";
  }
  throw Error("bad ring map rule");
}

Elem apply_ring_map(const RingMap& beta, const Elem& a) {
  if (a.ring != beta.source)
    throw RingMismatch("apply_ring_map: element not in the source ring");
  switch (beta.rule) {
    case RingMap::Rule::Identity:
      return a;
    case RingMap::Rule::Inclusion: {
      std::map<std::int64_t, Rat> m = a.coeffs;
      return normalized(beta.target, std::move(m));
    }
    case RingMap::Rule::Augmentation:
    case RingMap::Rule::Evaluation: {
      int omega = beta.rule == RingMap::Rule::Augmentation ? 1 : beta.omega;
      Rat acc(0);
      for (auto& [e, c] : a.coeffs) acc += c * rat_pow_sign(omega, e);
      return from_rat(beta.target, acc);
    }
  }
  throw Error("bad ring map rule");
}

Elem random_elem(const Ring& R, std::mt19937_64& rng, int max_num,
                 int max_exp) {
  auto ri = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  auto coeff = [&]() {
    Rat c(ri(-max_num, max_num));
    if (R.rational_coeffs() && ri(0, 1) == 1) c /= ri(1, 4);
    return c;
  };
  std::map<std::int64_t, Rat> m;
  if (R.is_scalar()) {
    m.emplace(0, coeff());
  } else {
    int terms = ri(1, 3);
    for (int i = 0; i < terms; ++i) {
      std::int64_t e = R.is_cyclic() ? ri(0, R.order - 1)
                                     : ri(-max_exp, max_exp);
      m[e] += coeff();
    }
  }
  return normalized(R, std::move(m));
}

}  // namespace symsig
