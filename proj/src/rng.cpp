#include "sigdet/rng.hpp"

#include "sigdet/model.hpp"

#include <cmath>

namespace sigdet {

namespace {

constexpr std::uint64_t kSeedSalt = 0x5D1C0DE5EED5A17ULL;

// One path step. The inner mix64 decorrelates small consecutive ids before
// they are folded into the running hash.
constexpr std::uint64_t fold_id(std::uint64_t h, std::uint64_t id) noexcept {
  return mix64(h ^ (mix64(id + kGoldenGamma) + 0x2545F4914F6CDD1DULL));
}

}  // namespace

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "below(0)");
  // Lemire (2019), nearly divisionless.
  __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma shape must be positive");
  if (shape < 1.0) {
    double u;
    do u = uniform(); while (u == 0.0);
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

RngStream RngStream::child(std::uint64_t id) const { return RngStream(fold_id(key_, id)); }

RngStream RngStream::child(std::initializer_list<std::uint64_t> path) const {
  std::uint64_t h = key_;
  for (auto id : path) h = fold_id(h, id);
  return RngStream(h);
}

RngStream derive_stream(std::uint64_t seed, std::span<const std::uint64_t> path) {
  std::uint64_t h = mix64(seed ^ kSeedSalt);
  for (auto id : path) h = fold_id(h, id);
  return RngStream(h);
}

RngStream derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return derive_stream(seed, std::span<const std::uint64_t>(path.begin(), path.size()));
}

}  // namespace sigdet
