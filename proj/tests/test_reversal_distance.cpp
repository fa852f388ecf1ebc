#include <doctest.h>

#include "oracle.hpp"
#include "rechepim/engines.hpp"
#include "rechepim/errors.hpp"
#include "rechepim/reversal_distance.hpp"

using namespace rechepim;

namespace {
SignedPermutation sp(std::vector<int> g) { return SignedPermutation(std::move(g)); }
UnsignedPermutation up(std::vector<int> g) { return UnsignedPermutation(std::move(g)); }
}  // namespace

TEST_CASE("signed distance on small inputs") {
  CHECK(signed_reversal_distance(sp({1, 2, 3})) == 0);
  CHECK(signed_reversal_distance(sp({-1})) == 1);
  CHECK(signed_reversal_distance(sp({-3, -2, -1})) == 1);
  CHECK(signed_reversal_distance(sp({3, 2, 1})) == brute_force_srd(sp({3, 2, 1})));
  CHECK(signed_reversal_distance(sp({2, 1})) == brute_force_srd(sp({2, 1})));
  CHECK(brute_force_srd(sp({-1})) == 1);
  CHECK(brute_force_srd(sp({2, 1})) == 3);
}

TEST_CASE("brute-force oracles") {
  for (std::size_t n = 1; n <= 8; ++n) CHECK(brute_force_srd(SignedPermutation::identity(n)) == 0);
  CHECK(brute_force_urd(up({1, 2, 3})) == 0);
  CHECK(brute_force_urd(up({2, 1})) == 1);
  CHECK(brute_force_urd(up({3, 1, 2})) == 2);
  CHECK_THROWS_AS(brute_force_srd(SignedPermutation::identity(9)), ResourceGuardError);
  CHECK_THROWS_AS(brute_force_urd(UnsignedPermutation::identity(8)), ResourceGuardError);
}

TEST_CASE("formula matches an independent search for every signed permutation up to n = 6") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto table = oracle::distance_table(n, true);
    std::size_t checked = 0;
    for (const auto& g : oracle::all_signed(n)) {
      const int expected = table.at(oracle::pack(g));
      const auto s = sp(g);
      const int d = signed_reversal_distance(s);
      CHECK(d == expected);
      CHECK(d <= static_cast<int>(n) + 1);
      CHECK((d == 0) == s.is_identity());
      ++checked;
    }
    CHECK(checked == table.size());
  }
}

TEST_CASE("library tables agree with the independent search") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const SignedDistanceTable lib(n);
    const auto ref = oracle::distance_table(n, true);
    CHECK(lib.state_count() == ref.size());
    for (const auto& g : oracle::all_signed(n)) CHECK(lib.distance(sp(g)) == ref.at(oracle::pack(g)));
  }
  const UnsignedDistanceTable lib(6);
  const auto ref = oracle::distance_table(6, false);
  Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    const auto pi = random_unsigned_permutation(6, rng);
    const std::vector<int> g(pi.genes().begin(), pi.genes().end());
    CHECK(lib.distance(pi) == ref.at(oracle::pack(g)));
    CHECK(brute_force_urd(pi) == ref.at(oracle::pack(g)));
  }
}

TEST_CASE("table encoding round trips") {
  const SignedDistanceTable t(4);
  for (std::uint32_t code = 0; code < t.state_count(); code += 7) CHECK(t.encode(t.decode(code)) == code);
}

TEST_CASE("fortress: three super hurdles") {
  // Three copies of a gadget whose unoriented component is a super hurdle.
  const auto f = sp({1, 3, 5, 4, 6, 2, 7, 8, 10, 12, 11, 13, 9, 14, 15, 17, 19, 18, 20, 16, 21});
  const auto s = analyze_breakpoint_graph(f);
  CHECK(s.hurdles == 3);
  CHECK(s.super_hurdles == 3);
  CHECK(s.fortress);
  CHECK(s.cycles == 10);
  CHECK(s.distance == 16);
  CHECK(signed_reversal_distance(f) == 16);

  // Certificate that 16 is exact: some reversal lowers the value by one at
  // every step down to the identity, and no reversal ever lowers it by more.
  auto cur = f;
  int d = 16;
  const std::size_t n = f.size();
  while (d > 0) {
    std::optional<SignedPermutation> next;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t k = j; k <= n; ++k) {
        const auto cand = apply_reversal(cur, j, k);
        const int dc = signed_reversal_distance(cand);
        CHECK(dc >= d - 1);
        if (dc == d - 1 && !next) next = cand;
      }
    }
    REQUIRE(next);
    cur = *next;
    --d;
  }
  CHECK(cur.is_identity());
}

TEST_CASE("a single reversal changes the distance by at most one") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    const auto sigma = sign_vector_to_signed(random_sign_vector(n, rng), random_unsigned_permutation(n, rng));
    const int d = signed_reversal_distance(sigma);
    CHECK(d <= static_cast<int>(n) + 1);
    const auto j = 1 + rng.below(n);
    const auto k = j + rng.below(n - j + 1);
    CHECK(std::abs(signed_reversal_distance(apply_reversal(sigma, j, k)) - d) <= 1);
  }
}

TEST_CASE("fitness is bounded below by the unsigned distance") {
  const auto table = oracle::distance_table(5, false);
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pi = random_unsigned_permutation(5, rng);
    const int urd = table.at(oracle::pack({pi.genes().begin(), pi.genes().end()}));
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      SignVector s;
      for (int i = 0; i < 5; ++i) s.signs.push_back(mask >> i & 1 ? -1 : 1);
      CHECK(fitness(s, pi) >= urd);
    }
  }
}

TEST_CASE("fitness of sign and real vectors") {
  Rng rng(1);
  CHECK(fitness(SignVector{{1, 1, 1}}, UnsignedPermutation::identity(3)) == 0);
  CHECK(fitness(RealVector{{0.6, 0.6, 0.6}}, UnsignedPermutation::identity(3), rng) == 0);
  CHECK(fitness(SignVector{{-1, 1, -1}}, up({3, 1, 2})) == signed_reversal_distance(sp({-3, 1, -2})));
  CHECK_THROWS_AS(fitness(SignVector{{1}}, up({1, 2})), ContractViolation);
}
