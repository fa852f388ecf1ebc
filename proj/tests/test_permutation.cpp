#include <doctest.h>

#include <array>
#include <map>
#include <sstream>

#include "rechepim/errors.hpp"
#include "rechepim/permutation.hpp"

using namespace rechepim;

namespace {
SignedPermutation sp(std::vector<int> g) { return SignedPermutation(std::move(g)); }
UnsignedPermutation up(std::vector<int> g) { return UnsignedPermutation(std::move(g)); }
}  // namespace

TEST_CASE("permutation constructors validate") {
  CHECK_THROWS_AS(up({}), ContractViolation);
  CHECK_THROWS_AS(up({1, 1}), ContractViolation);
  CHECK_THROWS_AS(up({0, 1}), ContractViolation);
  CHECK_THROWS_AS(up({1, 3}), ContractViolation);
  CHECK_THROWS_AS(sp({1, -1}), ContractViolation);
  CHECK_THROWS_AS(sp({0}), ContractViolation);
  CHECK(up({2, 1})(1) == 2);
  CHECK(sp({-2, 1}).unsigned_part() == up({2, 1}));
  CHECK(SignedPermutation::identity(3).is_identity());
  CHECK_FALSE(sp({1, -2, 3}).is_identity());
}

TEST_CASE("apply_reversal") {
  CHECK(apply_reversal(sp({1, 2, 3}), 1, 3) == sp({-3, -2, -1}));
  CHECK(apply_reversal(sp({1, 2, 3}), 2, 2) == sp({1, -2, 3}));
  CHECK(apply_reversal(sp({5, 8, 6, 4, 3, 1, 2, 7}), 4, 6) == sp({5, 8, 6, -1, -3, -4, 2, 7}));
  CHECK(apply_reversal(up({3, 1, 2}), 1, 2) == up({1, 3, 2}));

  const auto s = sp({1, 2, 3});
  CHECK_THROWS_AS(apply_reversal(s, 0, 1), ContractViolation);
  CHECK_THROWS_AS(apply_reversal(s, 2, 1), ContractViolation);
  CHECK_THROWS_AS(apply_reversal(s, 1, 4), ContractViolation);
  CHECK(s == sp({1, 2, 3}));
}

TEST_CASE("reversal is an involution and keeps the magnitude set") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const auto pi = random_unsigned_permutation(n, rng);
    const auto sigma = sign_vector_to_signed(random_sign_vector(n, rng), pi);
    const auto j = 1 + rng.below(n);
    const auto k = j + rng.below(n - j + 1);
    const auto once = apply_reversal(sigma, j, k);
    CHECK(once.unsigned_part().size() == n);  // constructor re-validates magnitudes
    CHECK(apply_reversal(once, j, k) == sigma);
  }
}

TEST_CASE("random_unsigned_permutation") {
  Rng rng(3);
  CHECK_THROWS_AS(random_unsigned_permutation(0, rng), ContractViolation);
  CHECK(random_unsigned_permutation(1, rng) == up({1}));
  for (int i = 0; i < 100; ++i) CHECK(random_unsigned_permutation(5, rng).size() == 5);

  SUBCASE("n = 3 outcomes are uniform") {
    std::map<std::vector<int>, int> counts;
    const int draws = 100000;
    Rng r(2024);
    for (int i = 0; i < draws; ++i) {
      const auto pi = random_unsigned_permutation(3, r);
      ++counts[{pi.genes().begin(), pi.genes().end()}];
    }
    REQUIRE(counts.size() == 6);
    double chi2 = 0.0;
    for (const auto& [perm, c] : counts) {
      CHECK(std::abs(c / double(draws) - 1.0 / 6) < 0.02);
      const double e = draws / 6.0;
      chi2 += (c - e) * (c - e) / e;
    }
    CHECK(chi2 < 20.515);  // chi-square(5) at 0.001
  }
}

TEST_CASE("decode_real_vector") {
  Rng rng(5);
  CHECK(decode_real_vector({{0.0, 0.5, 1.0}}, up({1, 2, 3}), rng) == sp({-1, 2, 3}));
  CHECK(decode_real_vector({{0.49, 0.51}}, up({2, 1}), rng) == sp({-2, 1}));
  CHECK_THROWS_AS(decode_real_vector({{0.2}}, up({1, 2}), rng), ContractViolation);

  int positive = 0;
  for (int i = 0; i < 400; ++i) {
    const auto s = decode_real_vector({{1.7, 0.2}}, up({1, 2}), rng);
    CHECK(s(2) == -2);
    positive += s(1) > 0;
  }
  CHECK(positive > 140);
  CHECK(positive < 260);
}

TEST_CASE("in-range decoding consumes no randomness") {
  Rng a(9), b(9);
  const RealVector v{{0.0, 0.3, 0.5, 0.99, 1.0}};
  CHECK(decodes_deterministically(v));
  CHECK_FALSE(decodes_deterministically(RealVector{{-0.1}}));
  decode_real_vector(v, up({5, 4, 3, 2, 1}), a);
  CHECK(a.next() == b.next());
}

TEST_CASE("sign_vector_to_signed") {
  auto sv = [](std::vector<std::int8_t> s) { return SignVector{std::move(s)}; };
  CHECK(sign_vector_to_signed(sv({1, 1, 1}), up({1, 2, 3})) == sp({1, 2, 3}));
  CHECK(sign_vector_to_signed(sv({-1, 1}), up({2, 1})) == sp({-2, 1}));
  CHECK(sign_vector_to_signed(sv({-1, -1, -1}), up({3, 1, 2})) == sp({-3, -1, -2}));
  CHECK_THROWS_AS(sign_vector_to_signed(sv({1}), up({1, 2})), ContractViolation);
  CHECK_THROWS_AS(sign_vector_to_signed(sv({1, 0}), up({1, 2})), ContractViolation);
}

TEST_CASE("text round trip") {
  const auto s = sp({3, -1, 2});
  CHECK(to_string(s) == "3 -1 2");
  CHECK(parse_signed(to_string(s)) == s);
  CHECK(parse_signed("+3 -1 +2") == s);
  CHECK(parse_unsigned(" 2 1 3 ") == up({2, 1, 3}));
  CHECK_THROWS_AS(parse_unsigned("1 x"), ContractViolation);
  std::ostringstream os;
  os << up({2, 1});
  CHECK(os.str() == "2 1");
}

TEST_CASE("rng draws are reproducible and bounded") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    CHECK(x == b.below(7));
    CHECK(x < 7);
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
}
