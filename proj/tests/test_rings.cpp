#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symsig/rings.hpp"

using namespace symsig;

namespace {

std::vector<Ring> all_rings() {
  return {Ring::Z(),          Ring::Q(),          Ring::laurent_z(),
          Ring::laurent_q(),  Ring::cyclic_z(3),  Ring::cyclic_q(4),
          Ring::cyclic_z(2)};
}

}  // namespace

TEST_CASE("involution on sample elements") {
  // 2 + 3t -> 2 + 3t^-1
  Elem a = add(from_int(Ring::laurent_z(), 2),
               monomial(Ring::laurent_z(), 1, 3));
  Elem abar = add(from_int(Ring::laurent_z(), 2),
                  monomial(Ring::laurent_z(), -1, 3));
  CHECK(apply_involution(a) == abar);

  CHECK(apply_involution(from_int(Ring::Z(), 5)) == from_int(Ring::Z(), 5));

  // g + 2 g^-1 in Z[Z/3] -> g^-1 + 2 g
  Ring C3 = Ring::cyclic_z(3);
  Elem g = monomial(C3, 1, 1);
  Elem b = add(g, monomial(C3, 2, 2));
  Elem bbar = add(monomial(C3, 2, 1), monomial(C3, 1, 2));
  CHECK(apply_involution(b) == bbar);
}

TEST_CASE("involution properties on seeded random pairs") {
  for (const Ring& R : all_rings()) {
    CAPTURE(R.tag());
    std::mt19937_64 rng(20260814);
    for (int i = 0; i < 1000; ++i) {
      Elem a = random_elem(R, rng);
      Elem b = random_elem(R, rng);
      CHECK(apply_involution(mul(a, b)) ==
            mul(apply_involution(b), apply_involution(a)));
      CHECK(apply_involution(add(a, b)) ==
            add(apply_involution(a), apply_involution(b)));
      CHECK(apply_involution(apply_involution(a)) == a);
    }
    CHECK(apply_involution(one(R)) == one(R));
  }
}

TEST_CASE("ring map examples") {
  Ring LZ = Ring::laurent_z();
  Elem a = add(from_int(LZ, 2), monomial(LZ, 1, 3));
  CHECK(apply_ring_map(RingMap::augmentation(LZ), a) == from_int(Ring::Z(), 5));

  Elem tm1 = add(monomial(LZ, 1, 1), from_int(LZ, -1));
  CHECK(apply_ring_map(RingMap::evaluation(LZ, -1), tm1) ==
        from_int(Ring::Z(), -2));

  CHECK(apply_ring_map(RingMap::inclusion(Ring::Z(), Ring::Q()),
                       from_int(Ring::Z(), 7)) == from_int(Ring::Q(), 7));
}

TEST_CASE("ring maps are involution-equivariant and multiplicative") {
  std::vector<RingMap> maps = {
      RingMap::augmentation(Ring::laurent_z()),
      RingMap::augmentation(Ring::laurent_q()),
      RingMap::augmentation(Ring::cyclic_z(3)),
      RingMap::evaluation(Ring::laurent_z(), -1),
      RingMap::evaluation(Ring::laurent_q(), -1),
      RingMap::evaluation(Ring::cyclic_z(2), -1),
      RingMap::inclusion(Ring::Z(), Ring::Q()),
      RingMap::inclusion(Ring::laurent_z(), Ring::laurent_q()),
      RingMap::inclusion(Ring::Z(), Ring::laurent_z()),
      RingMap::inclusion(Ring::cyclic_z(4), Ring::cyclic_q(4)),
      RingMap::identity(Ring::laurent_q()),
  };
  for (const RingMap& beta : maps) {
    CAPTURE(beta.source.tag());
    CAPTURE(beta.rule_name());
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      Elem a = random_elem(beta.source, rng);
      Elem b = random_elem(beta.source, rng);
      CHECK(apply_ring_map(beta, apply_involution(a)) ==
            apply_involution(apply_ring_map(beta, a)));
      CHECK(apply_ring_map(beta, mul(a, b)) ==
            mul(apply_ring_map(beta, a), apply_ring_map(beta, b)));
      CHECK(apply_ring_map(beta, add(a, b)) ==
            add(apply_ring_map(beta, a), apply_ring_map(beta, b)));
    }
    CHECK(apply_ring_map(beta, one(beta.source)) == one(beta.target));
  }
  CHECK_THROWS_AS(
      apply_ring_map(RingMap::augmentation(Ring::laurent_z()),
                     from_int(Ring::Z(), 1)),
      RingMismatch);
}

TEST_CASE("cyclic group ring multiplication wraps exponents") {
  Ring C3 = Ring::cyclic_z(3);
  Elem g = monomial(C3, 1, 1);
  CHECK(mul(mul(g, g), g) == one(C3));
  CHECK(pow_elem(g, 5) == monomial(C3, 2, 1));
}

TEST_CASE("euclidean division") {
  SUBCASE("integers") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
      Elem a = random_elem(Ring::Z(), rng, 400);
      Elem b = random_elem(Ring::Z(), rng, 30);
      if (is_zero(b)) continue;
      auto [q, r] = euclid_divmod(a, b);
      CHECK(add(mul(q, b), r) == a);
      if (!is_zero(r)) CHECK(euclid_size(r) < euclid_size(b));
    }
  }
  SUBCASE("rationals are a field") {
    Elem a = from_rat(Ring::Q(), Rat(3, 7));
    Elem b = from_rat(Ring::Q(), Rat(-2, 5));
    auto [q, r] = euclid_divmod(a, b);
    CHECK(is_zero(r));
    CHECK(mul(q, b) == a);
  }
  SUBCASE("rational Laurent polynomials") {
    Ring LQ = Ring::laurent_q();
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
      Elem a = random_elem(LQ, rng, 6, 3);
      Elem b = random_elem(LQ, rng, 6, 2);
      if (is_zero(b)) continue;
      auto [q, r] = euclid_divmod(a, b);
      CHECK(add(mul(q, b), r) == a);
      if (!is_zero(r)) CHECK(euclid_size(r) < euclid_size(b));
    }
  }
}

TEST_CASE("exact division and units") {
  Ring LZ = Ring::laurent_z();
  Elem tm1 = add(monomial(LZ, 1, 1), from_int(LZ, -1));
  Elem prod = mul(tm1, tm1);
  auto q = exact_div(prod, tm1);
  REQUIRE(q.has_value());
  CHECK(*q == tm1);
  CHECK(!exact_div(add(prod, one(LZ)), tm1).has_value());

  CHECK(is_unit_closed_form(monomial(LZ, -2, -1)));
  CHECK(!is_unit_closed_form(tm1));
  CHECK(!is_unit_closed_form(monomial(LZ, 1, 2)));
  Elem u = monomial(Ring::laurent_q(), 3, Rat(-2, 5));
  auto uinv = unit_inverse_closed_form(u);
  REQUIRE(uinv.has_value());
  CHECK(mul(u, *uinv) == one(Ring::laurent_q()));
}

TEST_CASE("canonical associate normalization") {
  CHECK(mul(from_int(Ring::Z(), -6),
            canonical_unit_cofactor(from_int(Ring::Z(), -6))) ==
        from_int(Ring::Z(), 6));
  CHECK(mul(from_rat(Ring::Q(), Rat(-3, 4)),
            canonical_unit_cofactor(from_rat(Ring::Q(), Rat(-3, 4)))) ==
        one(Ring::Q()));
  // 2t^3 - 2t^5 -> monic top coefficient, support starting at exponent 0
  Ring LQ = Ring::laurent_q();
  Elem p = add(monomial(LQ, 3, 2), monomial(LQ, 5, -2));
  Elem n = mul(p, canonical_unit_cofactor(p));
  CHECK(n == add(monomial(LQ, 0, -1), monomial(LQ, 2, 1)));
}

TEST_CASE("ring tags round trip") {
  for (const Ring& R : all_rings()) {
    CHECK(Ring::from_tag(R.tag()) == R);
  }
  CHECK_THROWS_AS(Ring::from_tag("Z[x]"), ParseError);
}
