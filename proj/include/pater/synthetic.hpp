#ifndef PATER_SYNTHETIC_HPP
#define PATER_SYNTHETIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pater/dataset.hpp"

namespace pater {

/// Two Gaussians pushed apart along the first axis so that every sample
/// respects a hard margin of `margin` around x1 = 0:
///   x1 = +-(margin/2 + tail * |N(0,1)|), remaining coordinates N(0,1).
/// `tail` scales how far samples spread beyond the margin boundary.
Dataset make_separable_gaussian(std::uint64_t seed, std::size_t per_class = 500,
                                std::size_t dim = 2, double margin = 2.0,
                                double tail = 1.0,
                                std::string name = "synthetic-separable");

/// Overlapping Gaussians with centers +-separation/2 on the first axis and a
/// class-count ratio n+/n- of `ratio`.
Dataset make_imbalanced_gaussian(std::uint64_t seed, std::size_t total = 2000,
                                 double ratio = 0.05, std::size_t dim = 2,
                                 double separation = 2.0,
                                 std::string name = "synthetic-imbalanced");

/// Parses "synthetic:separable[:key=value...]" and
/// "synthetic:imbalanced[:key=value...]" dataset specs. Keys: n (total or
/// per-class count), d, margin, sep, ratio, seed (defaults to a value derived
/// from `default_seed`). Returns nullopt when `spec` is not synthetic; throws
/// UsageError on a malformed synthetic spec.
std::optional<Dataset> make_synthetic(std::string_view spec, std::uint64_t default_seed);

}  // namespace pater

#endif  // PATER_SYNTHETIC_HPP
