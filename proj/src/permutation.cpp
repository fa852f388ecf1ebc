#include "rechepim/permutation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rechepim/errors.hpp"

namespace rechepim {

namespace {

bool is_permutation_of_1_to_n(std::span<const int> values, bool allow_sign) {
  const auto n = values.size();
  std::vector<bool> seen(n + 1, false);
  for (int v : values) {
    int m = allow_sign ? std::abs(v) : v;
    if (m < 1 || static_cast<std::size_t>(m) > n || seen[m]) return false;
    seen[m] = true;
  }
  return true;
}

void check_segment(std::size_t n, std::size_t j, std::size_t k) {
  if (j < 1 || j > k || k > n) {
    throw ContractViolation("reversal indices must satisfy 1 <= j <= k <= n");
  }
}

}  // namespace

UnsignedPermutation::UnsignedPermutation(std::vector<int> genes) : genes_(std::move(genes)) {
  if (genes_.empty()) throw ContractViolation("permutation must have at least one gene");
  if (!is_permutation_of_1_to_n(genes_, false)) {
    throw ContractViolation("genes must be a permutation of 1..n");
  }
}

UnsignedPermutation UnsignedPermutation::identity(std::size_t n) {
  std::vector<int> g(n);
  std::iota(g.begin(), g.end(), 1);
  return UnsignedPermutation(std::move(g));
}

bool UnsignedPermutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (genes_[i] != static_cast<int>(i + 1)) return false;
  }
  return true;
}

SignedPermutation::SignedPermutation(std::vector<int> genes) : genes_(std::move(genes)) {
  if (genes_.empty()) throw ContractViolation("permutation must have at least one gene");
  if (!is_permutation_of_1_to_n(genes_, true)) {
    throw ContractViolation("gene magnitudes must be a permutation of 1..n");
  }
}

SignedPermutation SignedPermutation::identity(std::size_t n) {
  std::vector<int> g(n);
  std::iota(g.begin(), g.end(), 1);
  return SignedPermutation(std::move(g));
}

bool SignedPermutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (genes_[i] != static_cast<int>(i + 1)) return false;
  }
  return true;
}

UnsignedPermutation SignedPermutation::unsigned_part() const {
  std::vector<int> g(genes_.size());
  std::transform(genes_.begin(), genes_.end(), g.begin(), [](int v) { return std::abs(v); });
  return UnsignedPermutation(std::move(g));
}

bool SignVector::valid() const noexcept {
  return std::all_of(signs.begin(), signs.end(), [](std::int8_t s) { return s == 1 || s == -1; });
}

SignedPermutation apply_reversal(const SignedPermutation& sigma, std::size_t j, std::size_t k) {
  check_segment(sigma.size(), j, k);
  std::vector<int> g(sigma.genes().begin(), sigma.genes().end());
  std::reverse(g.begin() + (j - 1), g.begin() + k);
  for (std::size_t i = j - 1; i < k; ++i) g[i] = -g[i];
  return SignedPermutation(std::move(g));
}

UnsignedPermutation apply_reversal(const UnsignedPermutation& pi, std::size_t j, std::size_t k) {
  check_segment(pi.size(), j, k);
  std::vector<int> g(pi.genes().begin(), pi.genes().end());
  std::reverse(g.begin() + (j - 1), g.begin() + k);
  return UnsignedPermutation(std::move(g));
}

UnsignedPermutation random_unsigned_permutation(std::size_t n, Rng& rng) {
  if (n == 0) throw ContractViolation("permutation size must be positive");
  std::vector<int> g(n);
  std::iota(g.begin(), g.end(), 1);
  rng.shuffle(std::span<int>(g));
  return UnsignedPermutation(std::move(g));
}

SignVector random_sign_vector(std::size_t n, Rng& rng) {
  SignVector s;
  s.signs.resize(n);
  for (auto& x : s.signs) x = static_cast<std::int8_t>(rng.sign());
  return s;
}

RealVector random_real_vector(std::size_t n, Rng& rng) {
  RealVector v;
  v.coords.resize(n);
  for (auto& x : v.coords) x = rng.uniform01();
  return v;
}

int decode_coordinate(double x, Rng& rng) {
  if (x >= 0.0 && x < 0.5) return -1;
  if (x >= 0.5 && x <= 1.0) return 1;
  return rng.sign();
}

bool decodes_deterministically(const RealVector& v) noexcept {
  return std::all_of(v.coords.begin(), v.coords.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

SignVector decode_signs(const RealVector& v, Rng& rng) {
  SignVector s;
  s.signs.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    s.signs[i] = static_cast<std::int8_t>(decode_coordinate(v.coords[i], rng));
  }
  return s;
}

SignedPermutation decode_real_vector(const RealVector& v, const UnsignedPermutation& pi, Rng& rng) {
  if (v.size() != pi.size()) throw ContractViolation("real vector length must match permutation size");
  return sign_vector_to_signed(decode_signs(v, rng), pi);
}

SignedPermutation sign_vector_to_signed(const SignVector& s, const UnsignedPermutation& pi) {
  if (s.size() != pi.size()) throw ContractViolation("sign vector length must match permutation size");
  if (!s.valid()) throw ContractViolation("sign vector entries must be +1 or -1");
  std::vector<int> g(pi.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = s.signs[i] * pi.genes()[i];
  return SignedPermutation(std::move(g));
}

std::string to_string(const UnsignedPermutation& pi) {
  std::ostringstream os;
  os << pi;
  return os.str();
}

std::string to_string(const SignedPermutation& sigma) {
  std::ostringstream os;
  os << sigma;
  return os.str();
}

std::vector<int> parse_integers(std::string_view line) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    if (line[i] == '+') ++start;
    int value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + line.size(), value);
    if (ec != std::errc() || ptr == line.data() + start) {
      throw ContractViolation("malformed integer in permutation text: '" + std::string(line) + "'");
    }
    i = static_cast<std::size_t>(ptr - line.data());
    if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      throw ContractViolation("malformed integer in permutation text: '" + std::string(line) + "'");
    }
    out.push_back(value);
  }
  return out;
}

UnsignedPermutation parse_unsigned(std::string_view line) { return UnsignedPermutation(parse_integers(line)); }

SignedPermutation parse_signed(std::string_view line) { return SignedPermutation(parse_integers(line)); }

std::ostream& operator<<(std::ostream& os, const UnsignedPermutation& pi) {
  for (std::size_t i = 0; i < pi.size(); ++i) os << (i ? " " : "") << pi.genes()[i];
  return os;
}

std::ostream& operator<<(std::ostream& os, const SignedPermutation& sigma) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    os << (i ? " " : "") << sigma.genes()[i];
  }
  return os;
}

}  // namespace rechepim
