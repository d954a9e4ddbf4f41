#ifndef PATER_DATASET_HPP
#define PATER_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pater/common.hpp"

namespace pater {

/// In-memory sample collection. All samples share `dimension`.
struct Dataset {
  std::string name;
  std::size_t dimension = 0;
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  std::size_t count_negative() const;
  std::size_t count_positive() const;

  /// n+ / n-. Throws ProtocolError when the dataset has no negative samples.
  double imbalance_ratio() const;
};

/// Per-feature z-score statistics. Population stddev, floored at 1e-12 so
/// constant features normalize to exactly zero.
struct NormalizationStats {
  FeatureVector mean;
  FeatureVector stddev;

  std::size_t dimension() const { return mean.size(); }
};

inline constexpr double kStddevFloor = 1e-12;

/// Fits mean/stddev over the given samples (requires >= 2 samples).
NormalizationStats zscore_fit(std::span<const LabeledSample> samples);

/// Maps each feature to (x - mean) / stddev.
std::vector<LabeledSample> zscore_apply(const NormalizationStats& stats,
                                        std::span<const LabeledSample> samples);
void zscore_apply_inplace(const NormalizationStats& stats,
                          std::vector<LabeledSample>& samples);

/// One train/test assignment of a 2-fold run.
struct FoldSplit {
  int run_index = 0;
  int fold_index = 0;  // 0 or 1; the two folds of a run swap train/test roles
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// Stratified shuffled 2-fold splits for `runs` repetitions (2*runs splits).
/// Deterministic given (dataset, seed). Throws ProtocolError when the dataset
/// has fewer than 2 samples or only one class.
std::vector<FoldSplit> make_folds(const Dataset& dataset, std::uint64_t seed,
                                  int runs = 10);

/// Gathers the samples selected by an index set.
std::vector<LabeledSample> gather(const Dataset& dataset,
                                  std::span<const std::size_t> indices);

}  // namespace pater

#endif  // PATER_DATASET_HPP
