#ifndef PATER_TEST_SUPPORT_HPP
#define PATER_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "pater/common.hpp"
#include "pater/rng.hpp"

namespace pater::test {

/// Guarded relative error: |a - b| / max(1, |b|).
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

inline double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return num / scale;
}

/// Random stream with standard-normal features and fair labels; both classes
/// are forced to appear within the first two samples.
inline std::vector<LabeledSample> random_stream(std::uint64_t seed, std::size_t length,
                                                std::size_t dim) {
  Rng rng(seed);
  std::vector<LabeledSample> stream;
  stream.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    LabeledSample s;
    s.label = t == 0 ? 1 : (t == 1 ? -1 : (rng.next_u64() & 1 ? 1 : -1));
    s.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) s.features[j] = rng.normal();
    stream.push_back(std::move(s));
  }
  return stream;
}

}  // namespace pater::test

#endif  // PATER_TEST_SUPPORT_HPP
