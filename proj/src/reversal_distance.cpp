#include "rechepim/reversal_distance.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>

#include "rechepim/errors.hpp"

namespace rechepim {

// ---------------------------------------------------------------------------
// Breakpoint graph
//
// The signed permutation is framed and unsigned as
//   p = 0, (2a-1, 2a) for +a or (2a, 2a-1) for -a, ..., 2n+1
// Black edges join positions (2i, 2i+1); gray edges join the values (2k, 2k+1).
// ---------------------------------------------------------------------------

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Circular label sequence with equal neighbours merged into runs.
std::vector<int> circular_runs(const std::vector<int>& seq) {
  std::vector<int> runs;
  for (int label : seq) {
    if (runs.empty() || runs.back() != label) runs.push_back(label);
  }
  if (runs.size() > 1 && runs.front() == runs.back()) runs.pop_back();
  return runs;
}

// Labels whose occurrences form a single circular block: these are the
// unoriented components that do not separate any other unoriented component.
std::vector<int> contiguous_labels(const std::vector<int>& seq) {
  std::map<int, int> run_count;
  for (int label : circular_runs(seq)) ++run_count[label];
  std::vector<int> out;
  for (auto [label, count] : run_count) {
    if (count == 1) out.push_back(label);
  }
  return out;
}

}  // namespace

BreakpointGraphSummary analyze_breakpoint_graph(const SignedPermutation& sigma) {
  const std::size_t n = sigma.size();
  const std::size_t m = 2 * n + 2;
  std::vector<int> p(m);
  p[0] = 0;
  p[m - 1] = static_cast<int>(m - 1);
  for (std::size_t i = 1; i <= n; ++i) {
    const int x = sigma(i);
    const int a = std::abs(x);
    p[2 * i - 1] = x > 0 ? 2 * a - 1 : 2 * a;
    p[2 * i] = x > 0 ? 2 * a : 2 * a - 1;
  }
  std::vector<std::size_t> pos(m);
  for (std::size_t i = 0; i < m; ++i) pos[p[i]] = i;

  // Cycles alternate black and gray edges; every black edge lies on exactly one.
  BreakpointGraphSummary summary;
  std::vector<int> cycle_of_black(n + 1, -1);
  for (std::size_t b = 0; b <= n; ++b) {
    if (cycle_of_black[b] >= 0) continue;
    std::size_t cur = 2 * b;
    do {
      cycle_of_black[cur >> 1] = summary.cycles;
      cur = pos[static_cast<std::size_t>(p[cur ^ 1] ^ 1)];
    } while (cycle_of_black[cur >> 1] < 0);
    ++summary.cycles;
  }

  // Gray edge k spans positions [lo[k], hi[k]].
  const std::size_t edges = n + 1;
  std::vector<std::size_t> lo(edges), hi(edges);
  std::vector<bool> trivial(edges), oriented(edges);
  for (std::size_t k = 0; k < edges; ++k) {
    const std::size_t a = pos[2 * k];
    const std::size_t b = pos[2 * k + 1];
    lo[k] = std::min(a, b);
    hi[k] = std::max(a, b);
    trivial[k] = hi[k] == lo[k] + 1 && lo[k] % 2 == 0;
    // An edge whose ends have equal parity corresponds to a reversal that splits a cycle.
    oriented[k] = (lo[k] + hi[k]) % 2 == 0;
  }

  DisjointSets components(edges);
  for (std::size_t e = 0; e < edges; ++e) {
    if (trivial[e]) continue;
    for (std::size_t f = e + 1; f < edges; ++f) {
      if (trivial[f]) continue;
      const bool interleave = (lo[e] < lo[f] && lo[f] < hi[e] && hi[e] < hi[f]) ||
                              (lo[f] < lo[e] && lo[e] < hi[f] && hi[f] < hi[e]);
      const bool same_cycle = cycle_of_black[lo[e] >> 1] == cycle_of_black[lo[f] >> 1];
      if (interleave || same_cycle) components.unite(e, f);
    }
  }

  std::vector<bool> component_oriented(edges, false);
  for (std::size_t e = 0; e < edges; ++e) {
    if (oriented[e]) component_oriented[components.find(e)] = true;
  }

  // Unoriented non-trivial components, read around the circle of positions.
  std::vector<int> circle;
  circle.reserve(m);
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t e = static_cast<std::size_t>(p[q]) >> 1;
    if (trivial[e]) continue;
    const std::size_t c = components.find(e);
    if (!component_oriented[c]) circle.push_back(static_cast<int>(c));
  }

  const std::vector<int> hurdles = contiguous_labels(circle);
  summary.hurdles = static_cast<int>(hurdles.size());

  for (int h : hurdles) {
    std::vector<int> without;
    without.reserve(circle.size());
    for (int label : circle) {
      if (label != h) without.push_back(label);
    }
    for (int label : contiguous_labels(without)) {
      if (!std::binary_search(hurdles.begin(), hurdles.end(), label)) {
        ++summary.super_hurdles;
        break;
      }
    }
  }
  summary.fortress = summary.hurdles % 2 == 1 && summary.super_hurdles == summary.hurdles;
  summary.distance = static_cast<int>(n) + 1 - summary.cycles + summary.hurdles + (summary.fortress ? 1 : 0);
  return summary;
}

int signed_reversal_distance(const SignedPermutation& sigma) { return analyze_breakpoint_graph(sigma).distance; }

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::uint32_t, 9> kFactorial = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};

using Genes = std::array<std::int8_t, 8>;

// Lehmer rank of a permutation of 0..n-1.
std::uint32_t rank_of(const Genes& g, std::size_t n) {
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller += g[j] < g[i];
    r += smaller * kFactorial[n - 1 - i];
  }
  return r;
}

Genes unrank(std::uint32_t r, std::size_t n) {
  Genes g{};
  std::array<std::int8_t, 8> pool{};
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::int8_t>(i);
  std::size_t left = n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t f = kFactorial[n - 1 - i];
    const std::size_t idx = r / f;
    r %= f;
    g[i] = pool[idx];
    for (std::size_t j = idx; j + 1 < left; ++j) pool[j] = pool[j + 1];
    --left;
  }
  return g;
}

// Signed state: magnitudes (0-based) plus a bit mask of negative positions.
std::uint32_t encode_signed(const Genes& mag, std::uint32_t mask, std::size_t n) {
  return (rank_of(mag, n) << n) | mask;
}

void reverse_signed(Genes& mag, std::uint32_t& mask, std::size_t j, std::size_t k) {
  // 0-based inclusive segment [j, k]
  std::reverse(mag.begin() + j, mag.begin() + k + 1);
  std::uint32_t seg = 0;
  for (std::size_t i = j; i <= k; ++i) seg |= ((mask >> i) & 1U) << (j + k - i);
  std::uint32_t span_bits = ((1U << (k + 1)) - 1) & ~((1U << j) - 1);
  mask = (mask & ~span_bits) | (seg ^ span_bits);
}

template <typename Visit>
void bfs_signed(std::size_t n, std::uint32_t start, std::vector<std::int8_t>& dist, Visit&& stop_at) {
  std::vector<std::uint32_t> frontier{start}, next;
  dist[start] = 0;
  std::int8_t depth = 0;
  if (stop_at(start)) return;
  while (!frontier.empty()) {
    ++depth;
    next.clear();
    for (std::uint32_t code : frontier) {
      const Genes base = unrank(code >> n, n);
      const std::uint32_t base_mask = code & ((1U << n) - 1);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
          Genes g = base;
          std::uint32_t mask = base_mask;
          reverse_signed(g, mask, j, k);
          const std::uint32_t c = encode_signed(g, mask, n);
          if (dist[c] >= 0) continue;
          dist[c] = depth;
          if (stop_at(c)) return;
          next.push_back(c);
        }
      }
    }
    frontier.swap(next);
  }
}

std::uint32_t signed_code(const SignedPermutation& sigma) {
  const std::size_t n = sigma.size();
  Genes g{};
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int x = sigma.genes()[i];
    g[i] = static_cast<std::int8_t>(std::abs(x) - 1);
    if (x < 0) mask |= 1U << i;
  }
  return encode_signed(g, mask, n);
}

std::uint32_t unsigned_code(std::span<const int> genes) {
  Genes g{};
  for (std::size_t i = 0; i < genes.size(); ++i) g[i] = static_cast<std::int8_t>(genes[i] - 1);
  return rank_of(g, genes.size());
}

template <typename Visit>
void bfs_unsigned(std::size_t n, std::uint32_t start, std::vector<std::int8_t>& dist, Visit&& stop_at) {
  std::vector<std::uint32_t> frontier{start}, next;
  dist[start] = 0;
  std::int8_t depth = 0;
  if (stop_at(start)) return;
  while (!frontier.empty()) {
    ++depth;
    next.clear();
    for (std::uint32_t code : frontier) {
      const Genes base = unrank(code, n);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          Genes g = base;
          std::reverse(g.begin() + j, g.begin() + k + 1);
          const std::uint32_t c = rank_of(g, n);
          if (dist[c] >= 0) continue;
          dist[c] = depth;
          if (stop_at(c)) return;
          next.push_back(c);
        }
      }
    }
    frontier.swap(next);
  }
}

}  // namespace

int brute_force_srd(const SignedPermutation& sigma) {
  const std::size_t n = sigma.size();
  if (n > kMaxBruteForceSignedSize) {
    throw ResourceGuardError("brute_force_srd refuses n = " + std::to_string(n) + " (limit 8)");
  }
  // The identity has Lehmer rank 0 and an empty sign mask.
  const std::uint32_t target = 0;
  std::vector<std::int8_t> dist((std::size_t{kFactorial[n]}) << n, -1);
  bfs_signed(n, signed_code(sigma), dist, [&](std::uint32_t c) { return c == target; });
  return dist[target];
}

int brute_force_urd(const UnsignedPermutation& pi) {
  const std::size_t n = pi.size();
  if (n > kMaxBruteForceUnsignedSize) {
    throw ResourceGuardError("brute_force_urd refuses n = " + std::to_string(n) + " (limit 7)");
  }
  std::vector<std::int8_t> dist(kFactorial[n], -1);
  bfs_unsigned(n, unsigned_code(pi.genes()), dist, [](std::uint32_t c) { return c == 0; });
  return dist[0];
}

SignedDistanceTable::SignedDistanceTable(std::size_t n) : n_(n) {
  if (n == 0 || n > kMaxBruteForceSignedSize) {
    throw ResourceGuardError("signed distance table supports 1 <= n <= 8");
  }
  dist_.assign((std::size_t{kFactorial[n]}) << n, -1);
  bfs_signed(n, 0, dist_, [](std::uint32_t) { return false; });
}

std::uint32_t SignedDistanceTable::encode(const SignedPermutation& sigma) const {
  if (sigma.size() != n_) throw ContractViolation("permutation size does not match table");
  return signed_code(sigma);
}

SignedPermutation SignedDistanceTable::decode(std::uint32_t code) const {
  const Genes g = unrank(code >> n_, n_);
  std::vector<int> genes(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    genes[i] = (g[i] + 1) * (((code >> i) & 1U) ? -1 : 1);
  }
  return SignedPermutation(std::move(genes));
}

int SignedDistanceTable::distance(const SignedPermutation& sigma) const { return dist_[encode(sigma)]; }

UnsignedDistanceTable::UnsignedDistanceTable(std::size_t n) : n_(n) {
  if (n == 0 || n > kMaxBruteForceSignedSize) {
    throw ResourceGuardError("unsigned distance table supports 1 <= n <= 8");
  }
  dist_.assign(kFactorial[n], -1);
  bfs_unsigned(n, 0, dist_, [](std::uint32_t) { return false; });
}

int UnsignedDistanceTable::distance(const UnsignedPermutation& pi) const {
  if (pi.size() != n_) throw ContractViolation("permutation size does not match table");
  return dist_[unsigned_code(pi.genes())];
}

}  // namespace rechepim
