#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace sigdet {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Counter-based random stream.
///
/// The i-th 64-bit output (i = 1, 2, ...) is mix64(key + i * kGoldenGamma),
/// i.e. SplitMix64 evaluated at an explicit counter, so any position of the
/// sequence is a pure function of (key, i). Keys come from derive_stream().
///
/// Variates are produced by portable code only (no std:: distributions, whose
/// algorithms are implementation-defined):
///   uniform()   53-bit mantissa, (u >> 11) * 2^-53, in [0, 1)
///   below(m)    Lemire multiply-shift with rejection, unbiased on [0, m)
///   normal()    Marsaglia polar method, second variate cached
///   gamma(k)    Marsaglia-Tsang squeeze (k < 1 boosted by U^(1/k))
///
/// A stream is single-owner. Parallel work calls child() or derive_stream().
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGoldenGamma); }

  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t bound);
  double normal();
  double gamma(double shape);
  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

  /// Independent child stream; the parent's position is not consulted.
  RngStream child(std::uint64_t id) const;
  RngStream child(std::initializer_list<std::uint64_t> path) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives a stream key from a master seed and a path of ids:
///   h = mix64(seed ^ 0x05D1C0DE5EED5A17)
///   for each id: h = mix64(h ^ (mix64(id + kGoldenGamma) + 0x2545F4914F6CDD1D))
/// The resulting h is the stream key. Injective up to 64-bit collisions.
/// RngStream::child() applies the same per-id step to the stream's own key.
RngStream derive_stream(std::uint64_t seed, std::span<const std::uint64_t> path);
RngStream derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

}  // namespace sigdet
