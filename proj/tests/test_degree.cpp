#include <random>

#include "doctest.h"
#include "mwb/degree.hpp"
#include "mwb/errors.hpp"
#include "support/oracles.hpp"

using namespace mwb;

namespace {

Integer I(long v) { return Integer(v); }

}  // namespace

TEST_CASE("product degree") {
  CHECK(product_degree(2, 2, I(3), I(5)) == 90);
  CHECK(product_degree(1, 1, I(4), I(7)) == 2 * 4 * 7);
  CHECK(product_degree(0, 3, I(6), I(5)) == 30);
  for (unsigned a = 0; a <= 4; ++a)
    for (unsigned b = 0; b <= 4; ++b) CHECK(product_degree(a, b, I(2), I(3)) == product_degree(b, a, I(3), I(2)));
}

TEST_CASE("Minkowski sum bound") {
  CHECK(minkowski_sum_degree_bound(1, 1, I(1), I(1)) == 8);
  CHECK(minkowski_sum_degree_bound(0, 0, I(3), I(4)) == 12);
  CHECK(minkowski_sum_degree_bound(1, 2, I(2), I(3)) == 144);
  for (unsigned a = 0; a <= 3; ++a)
    for (unsigned b = 0; b <= 3; ++b)
      CHECK(minkowski_sum_degree_bound(a, b, I(2), I(5)) == ipow(Integer(2), a + b) * product_degree(a, b, I(2), I(5)));
}

TEST_CASE("generated subvariety bound") {
  CHECK(generated_subvariety_bound(2, 1, I(1), 1) == 8);
  CHECK(generated_subvariety_bound(2, 1, I(1), 2) == 128);
  CHECK_THROWS_AS(generated_subvariety_bound(2, 1, I(1), 3), InputError);
  CHECK(generated_subvariety_constant(2, 1, I(1)) == 128);
  // The step-by-step chain agrees at k = 1 and dominates the closed form after.
  CHECK(generated_subvariety_chain_bound(2, 1, I(1), 1) == 8);
  CHECK(generated_subvariety_chain_bound(2, 1, I(1), 2) == minkowski_sum_degree_bound(2, 2, I(8), I(8)));
  for (unsigned g = 1; g <= 4; ++g)
    for (unsigned r = 1; r <= g; ++r)
      for (unsigned k = 1; k <= g; ++k)
        CHECK(generated_subvariety_chain_bound(g, r, I(2), k) >= generated_subvariety_bound(g, r, I(2), k));
}

TEST_CASE("symplectic normal form examples") {
  auto a = symplectic_normal_form({{I(0), I(1)}, {I(-1), I(0)}});
  CHECK(a.d_list == std::vector<Integer>{1});
  auto b = symplectic_normal_form({{I(0), I(2)}, {I(-2), I(0)}});
  CHECK(b.d_list == std::vector<Integer>{2});
  CHECK_THROWS_AS(symplectic_normal_form({{I(0), I(0)}, {I(0), I(0)}}), InputError);
  CHECK_THROWS_AS(symplectic_normal_form({{I(0), I(1)}, {I(1), I(0)}}), InputError);
  CHECK_THROWS_AS(symplectic_normal_form({{I(0)}}), InputError);
}

TEST_CASE("symplectic normal form on random forms") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 * (1 + t % 4);
    AlternatingForm e = oracle::random_alternating(rng, n, -10, 10);
    SymplecticReduction red = symplectic_normal_form(e);
    REQUIRE(red.d_list.size() == static_cast<std::size_t>(n / 2));
    Integer pf = 1;
    for (std::size_t i = 0; i < red.d_list.size(); ++i) {
      CHECK(red.d_list[i] > 0);
      if (i > 0) CHECK(red.d_list[i] % red.d_list[i - 1] == 0);
      pf *= red.d_list[i];
    }
    CHECK(pf * pf == abs(oracle::det_exact(e)));
    auto smith = oracle::smith_invariants(e);
    for (std::size_t i = 0; i < red.d_list.size(); ++i) {
      CHECK(smith[2 * i] == red.d_list[i]);
      CHECK(smith[2 * i + 1] == red.d_list[i]);
    }
    CHECK(symplectic_normal_form(red.normal_form).d_list == red.d_list);
  }
}

TEST_CASE("Pfaffian identities") {
  CHECK(pfaffian_identities(2, {I(1), I(1)}).deg_A == 2);
  auto one = pfaffian_identities(1, {I(3)});
  CHECK(one.h0_dim == 3);
  CHECK(one.deg_A == 3);
  auto three = pfaffian_identities(3, {I(1), I(2), I(4)});
  CHECK(three.pf == 8);
  CHECK(three.deg_A == 48);
  CHECK_THROWS_AS(pfaffian_identities(2, {I(2), I(3)}), InputError);
}

TEST_CASE("isogeny degree transport") {
  auto principal = isogeny_degree_transport(2, I(7), I(2));
  CHECK(principal.deg_u0 == 1);
  CHECK(principal.d_prime_bound == 7);
  CHECK(principal.faltings_shift.value() == 0.0);

  auto t = isogeny_degree_transport(2, I(1), I(4));
  CHECK(t.deg_u0 == 2);
  CHECK(t.deg_u == 8);
  CHECK(t.d_prime_bound == 8);
  CHECK(t.faltings_shift.coefficient == Rational(1, 2));
  CHECK(t.faltings_shift.argument == Rational(2));

  CHECK(isogeny_degree_transport(1, I(5), I(6)).d_prime_bound == 30);
  CHECK_THROWS_AS(isogeny_degree_transport(2, I(1), I(3)), InputError);
}

TEST_CASE("embedding dimension") {
  CHECK(embedding_dimension(1, I(3)) == 2);
  CHECK(embedding_dimension(2, I(8)) == 3);
  CHECK_THROWS_AS(embedding_dimension(1, I(1)), InputError);
}

TEST_CASE("covering recursion degree bound") {
  CHECK(nogaalon_degree_bound(1, 2, I(3), I(7)) == 7);
  CHECK(nogaalon_degree_bound(2, 1, I(1), I(1)) == 2);
  for (unsigned m = 1; m <= 4; ++m) {
    for (long dx = 1; dx <= 3; ++dx) {
      for (long dz = 1; dz <= 3; ++dz) {
        CHECK(nogaalon_degree_bound(m, 1, I(dx), I(dz + 1)) >= nogaalon_degree_bound(m, 1, I(dx), I(dz)));
        CHECK(nogaalon_degree_bound(m, 1, I(dx + 1), I(dz)) >= nogaalon_degree_bound(m, 1, I(dx), I(dz)));
      }
    }
  }
  // dim X = 0: the multinomial is 1, so c(M) = max(c(M-1) at degX degZ, degX degZ + degZ).
  CHECK(nogaalon_degree_bound(2, 0, I(2), I(3)) == std::max(Integer(6), Integer(9)));
}

TEST_CASE("invariant validation") {
  CHECK_NOTHROW(VarietyInvariants{2, 1, I(4), I(2)}.validate());
  CHECK_THROWS_AS((VarietyInvariants{2, 3, I(1), I(2)}.validate()), InputError);
  CHECK_THROWS_AS((VarietyInvariants{2, 1, I(1), I(3)}.validate()), InputError);
  CHECK_THROWS_AS((VarietyInvariants{0, 0, I(1), I(1)}.validate()), InputError);
}
