#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rechepim/permutation.hpp"

namespace rechepim {

/// Cycle / hurdle decomposition of the breakpoint graph of a signed permutation.
struct BreakpointGraphSummary {
  int cycles = 0;
  int hurdles = 0;
  int super_hurdles = 0;
  bool fortress = false;
  int distance = 0;  ///< n + 1 - cycles + hurdles + fortress
};

BreakpointGraphSummary analyze_breakpoint_graph(const SignedPermutation& sigma);

/// Minimum number of signed reversals that sort sigma into (+1, ..., +n).
int signed_reversal_distance(const SignedPermutation& sigma);

inline constexpr std::size_t kMaxBruteForceSignedSize = 8;
inline constexpr std::size_t kMaxBruteForceUnsignedSize = 7;

/// Breadth-first search over signed reversals from sigma to the identity.
/// Throws ResourceGuardError for n > 8.
int brute_force_srd(const SignedPermutation& sigma);

/// Breadth-first search over unsigned reversals from pi to the identity.
/// Throws ResourceGuardError for n > 7.
int brute_force_urd(const UnsignedPermutation& pi);

/// Exhaustive table of signed reversal distances for one n, built by a single
/// BFS from the identity. Reversals are involutions, so the depth at which a
/// state is first reached equals its distance to the identity.
class SignedDistanceTable {
 public:
  explicit SignedDistanceTable(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t state_count() const noexcept { return dist_.size(); }
  int distance(const SignedPermutation& sigma) const;
  /// Distance of the state with the given code; see encode().
  int distance_of_code(std::uint32_t code) const { return dist_.at(code); }

  std::uint32_t encode(const SignedPermutation& sigma) const;
  SignedPermutation decode(std::uint32_t code) const;

 private:
  std::size_t n_;
  std::vector<std::int8_t> dist_;
};

/// Same idea over unsigned permutations.
class UnsignedDistanceTable {
 public:
  explicit UnsignedDistanceTable(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  int distance(const UnsignedPermutation& pi) const;

 private:
  std::size_t n_;
  std::vector<std::int8_t> dist_;
};

}  // namespace rechepim
