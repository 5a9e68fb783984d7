#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "graphdc/graph.hpp"

namespace graphdc {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Seeded generator with platform-independent integer draws. The standard
/// distributions are implementation-defined, which would break byte-identical
/// datasets across toolchains, so bounded draws use rejection on the raw
/// 64-bit engine output instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi], inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Inclusive node-count range.
struct SizeBand {
  std::size_t lo = 2;
  std::size_t hi = 2;
  bool operator==(const SizeBand&) const = default;
};

inline constexpr Weight kMinWeight = 1;
inline constexpr Weight kMaxWeight = 10;

/// Random simple graph: node count uniform in the band, then
/// round(edge_density * n) distinct edges (capped at n(n-1)/2) drawn uniformly
/// with duplicate rejection. Weighted graphs draw integer weights uniformly
/// from [kMinWeight, kMaxWeight]. Throws std::invalid_argument if band.lo < 2,
/// band.hi < band.lo, or edge_density <= 0.
Graph gen_random_graph(SizeBand band, double edge_density, bool weighted, std::uint64_t seed);

/// Number of candidate pairs examined by pick_far_pair.
inline constexpr std::size_t kFarPairCandidates = 64;

/// Returns (source, target), source < target, maximizing hop distance among a
/// seeded sample of kFarPairCandidates pairs; all pairs are examined when the
/// graph has at most that many. Pairs in different components count as
/// infinitely far. Ties go to the lowest pair. Requires node_count >= 2.
std::pair<NodeId, NodeId> pick_far_pair(const Graph& g, std::uint64_t rng_seed);

}  // namespace graphdc
