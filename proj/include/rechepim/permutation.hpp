#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rechepim/rng.hpp"

namespace rechepim {

/// A genome without gene orientation: a permutation of {1..n}.
class UnsignedPermutation {
 public:
  /// Validates that genes is a permutation of {1..n}, n >= 1.
  explicit UnsignedPermutation(std::vector<int> genes);

  static UnsignedPermutation identity(std::size_t n);

  std::size_t size() const noexcept { return genes_.size(); }
  std::span<const int> genes() const noexcept { return genes_; }
  /// 1-based access.
  int operator()(std::size_t i) const { return genes_.at(i - 1); }

  bool is_identity() const noexcept;

  friend bool operator==(const UnsignedPermutation&, const UnsignedPermutation&) = default;

 private:
  std::vector<int> genes_;
};

/// A genome with gene orientation: the magnitudes form a permutation of {1..n}.
class SignedPermutation {
 public:
  explicit SignedPermutation(std::vector<int> genes);

  static SignedPermutation identity(std::size_t n);

  std::size_t size() const noexcept { return genes_.size(); }
  std::span<const int> genes() const noexcept { return genes_; }
  int operator()(std::size_t i) const { return genes_.at(i - 1); }

  /// True for the positive identity (+1, ..., +n).
  bool is_identity() const noexcept;

  UnsignedPermutation unsigned_part() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<int> genes_;
};

/// Orientation assignment, each entry +1 or -1.
struct SignVector {
  std::vector<std::int8_t> signs;

  std::size_t size() const noexcept { return signs.size(); }
  bool valid() const noexcept;
  friend bool operator==(const SignVector&, const SignVector&) = default;
};

/// Continuous genotype used by DE and PSO.
struct RealVector {
  std::vector<double> coords;

  std::size_t size() const noexcept { return coords.size(); }
  friend bool operator==(const RealVector&, const RealVector&) = default;
};

/// Reversal of positions j..k (1-based, inclusive); the reversed elements change sign.
SignedPermutation apply_reversal(const SignedPermutation& sigma, std::size_t j, std::size_t k);

/// Unsigned reversal of positions j..k (1-based, inclusive).
UnsignedPermutation apply_reversal(const UnsignedPermutation& pi, std::size_t j, std::size_t k);

/// Unbiased Fisher-Yates shuffle of {1..n}.
UnsignedPermutation random_unsigned_permutation(std::size_t n, Rng& rng);

SignVector random_sign_vector(std::size_t n, Rng& rng);
RealVector random_real_vector(std::size_t n, Rng& rng);

/// Orientation of a single real coordinate: [0,0.5) -> -1, [0.5,1] -> +1,
/// anything else (including NaN) draws a random sign.
int decode_coordinate(double x, Rng& rng);

/// True when every coordinate lies in [0,1], so decoding consumes no randomness.
bool decodes_deterministically(const RealVector& v) noexcept;

SignVector decode_signs(const RealVector& v, Rng& rng);

SignedPermutation decode_real_vector(const RealVector& v, const UnsignedPermutation& pi, Rng& rng);

SignedPermutation sign_vector_to_signed(const SignVector& s, const UnsignedPermutation& pi);

// Text format: space-separated integers, '-' prefix for negative orientation.
std::string to_string(const UnsignedPermutation& pi);
std::string to_string(const SignedPermutation& sigma);
std::vector<int> parse_integers(std::string_view line);
UnsignedPermutation parse_unsigned(std::string_view line);
SignedPermutation parse_signed(std::string_view line);

std::ostream& operator<<(std::ostream& os, const UnsignedPermutation& pi);
std::ostream& operator<<(std::ostream& os, const SignedPermutation& sigma);

}  // namespace rechepim
