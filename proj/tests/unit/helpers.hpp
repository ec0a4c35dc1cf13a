#pragma once

#include "sigdet/model.hpp"
#include "sigdet/rng.hpp"

#include <algorithm>
#include <cmath>

namespace testutil {

using sigdet::FeatureMatrix;
using sigdet::Index;
using sigdet::Labels;

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// n rows of iid N(0,1) features, first half class 0, second half class 1;
/// class 1 shifted by `shift` in every coordinate.
inline sigdet::LabeledDataset gaussian_dataset(Index n, Index p, std::uint64_t seed, double shift = 0.0) {
  sigdet::RngStream rng = sigdet::derive_stream(seed, {77});
  FeatureMatrix x(n, p);
  Labels y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
    for (Index j = 0; j < p; ++j) x(i, j) = rng.normal() + shift * y[static_cast<std::size_t>(i)];
  }
  return sigdet::LabeledDataset(x, y);
}

inline FeatureMatrix rows(std::initializer_list<std::initializer_list<double>> data) {
  const auto n = static_cast<Index>(data.size());
  const auto p = static_cast<Index>(data.begin()->size());
  FeatureMatrix x(n, p);
  Index i = 0;
  for (const auto& r : data) {
    Index j = 0;
    for (double v : r) x(i, j++) = v;
    ++i;
  }
  return x;
}

}  // namespace testutil
