#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace percolab {

// Counter-based random numbers: every 64-bit word is a pure function of
// (seed, stream, counter).  Streams let independent trials, edges, sweeps
// and so on draw from non-overlapping sources without shared state, which
// keeps results identical no matter how work is split across threads and
// gives monotone couplings for free (the same (seed, edge) pair always sees
// the same uniform).

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

inline double uniform_from_word(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// Fixed stream tags so unrelated consumers of the same seed never collide.
namespace stream {
constexpr std::uint64_t kBondMask = 0x626f6e64u;
constexpr std::uint64_t kSiteMask = 0x73697465u;
constexpr std::uint64_t kTrial = 0x747269616cu;
constexpr std::uint64_t kSweep = 0x7377656570u;
constexpr std::uint64_t kLevel = 0x6c6576656cu;
constexpr std::uint64_t kChoice = 0x63686f696365u;
constexpr std::uint64_t kEdgeLength = 0x6c656eu;
constexpr std::uint64_t kOffspring = 0x6f6666u;
constexpr std::uint64_t kProbe = 0x70726f6265u;
}  // namespace stream

// Substream derivation: fold an index into a stream tag.
inline std::uint64_t substream(std::uint64_t tag, std::uint64_t index) {
  return mix64(tag ^ mix64(index));
}

// Sequential generator over one (seed, stream) source.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream), counter_(0) {}

  std::uint64_t next_u64() { return counter_word(seed_, stream_, counter_++); }

  double uniform() { return uniform_from_word(next_u64()); }

  // Unbiased integer in [0, n) by rejection on the top of the range.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t w = next_u64();
      if (w < limit) return w % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Geometric on {1, 2, ...} with success probability q: P(k) = q(1-q)^{k-1}.
  std::uint64_t geometric1(double q) {
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("geometric1: q outside (0,1]");
    if (q == 1.0) return 1;
    double u = uniform();
    // quantile of the geometric law; u == 0 would give +inf, nudge it
    if (u <= 0.0) u = 0x1.0p-53;
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-q)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

}  // namespace percolab
