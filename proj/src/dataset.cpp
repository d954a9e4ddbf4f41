#include "pater/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "pater/rng.hpp"

namespace pater {

std::size_t Dataset::count_negative() const {
  std::size_t n = 0;
  for (const LabeledSample& s : samples) {
    if (s.label < 0) ++n;
  }
  return n;
}

std::size_t Dataset::count_positive() const { return samples.size() - count_negative(); }

double Dataset::imbalance_ratio() const {
  const std::size_t n_neg = count_negative();
  if (n_neg == 0) {
    throw ProtocolError("imbalance ratio undefined: dataset '" + name +
                        "' has no negative samples");
  }
  return static_cast<double>(samples.size() - n_neg) / static_cast<double>(n_neg);
}

NormalizationStats zscore_fit(std::span<const LabeledSample> samples) {
  if (samples.size() < 2) {
    throw ProtocolError("zscore_fit requires at least 2 samples");
  }
  const std::size_t d = samples.front().features.size();
  NormalizationStats stats;
  stats.mean.assign(d, 0.0);
  stats.stddev.assign(d, 0.0);
  FeatureVector lo(samples.front().features), hi(samples.front().features);
  for (const LabeledSample& s : samples) {
    check_dimension(d, s.features.size(), "zscore_fit");
    for (std::size_t j = 0; j < d; ++j) {
      stats.mean[j] += s.features[j];
      lo[j] = std::min(lo[j], s.features[j]);
      hi[j] = std::max(hi[j], s.features[j]);
    }
  }
  const double n = static_cast<double>(samples.size());
  for (std::size_t j = 0; j < d; ++j) stats.mean[j] /= n;
  for (const LabeledSample& s : samples) {
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = s.features[j] - stats.mean[j];
      stats.stddev[j] += delta * delta;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (lo[j] == hi[j]) {
      // Constant column: pin the mean to the exact value so the normalized
      // feature comes out as exactly zero under the floored stddev.
      stats.mean[j] = lo[j];
      stats.stddev[j] = kStddevFloor;
    } else {
      stats.stddev[j] = std::max(std::sqrt(stats.stddev[j] / n), kStddevFloor);
    }
  }
  return stats;
}

void zscore_apply_inplace(const NormalizationStats& stats,
                          std::vector<LabeledSample>& samples) {
  const std::size_t d = stats.dimension();
  for (LabeledSample& s : samples) {
    check_dimension(d, s.features.size(), "zscore_apply");
    for (std::size_t j = 0; j < d; ++j) {
      s.features[j] = (s.features[j] - stats.mean[j]) / stats.stddev[j];
    }
  }
}

std::vector<LabeledSample> zscore_apply(const NormalizationStats& stats,
                                        std::span<const LabeledSample> samples) {
  std::vector<LabeledSample> out(samples.begin(), samples.end());
  zscore_apply_inplace(stats, out);
  return out;
}

std::vector<FoldSplit> make_folds(const Dataset& dataset, std::uint64_t seed, int runs) {
  if (runs < 1) throw ProtocolError("make_folds: runs must be >= 1");
  if (dataset.size() < 2) {
    throw ProtocolError("make_folds: dataset '" + dataset.name + "' has fewer than 2 samples");
  }
  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.samples[i].label < 0 ? neg : pos).push_back(i);
  }
  if (neg.empty() || pos.empty()) {
    throw ProtocolError("make_folds: dataset '" + dataset.name +
                        "' has a single class; stratified folds need both");
  }

  std::vector<FoldSplit> splits;
  splits.reserve(static_cast<std::size_t>(runs) * 2);
  for (int run = 0; run < runs; ++run) {
    Rng rng(mix_seed(mix_seed(seed, "folds"), static_cast<std::uint64_t>(run)));
    std::vector<std::size_t> part_a, part_b;
    for (std::vector<std::size_t>* cls : {&neg, &pos}) {
      std::vector<std::size_t> order = *cls;
      rng.shuffle(order);
      std::size_t half = order.size() / 2;
      if (order.size() % 2 == 1 && part_a.size() > part_b.size()) {
        // Give the odd sample to the currently smaller part so the fold
        // sizes never differ by more than one.
        std::size_t take_b = half + 1;
        part_b.insert(part_b.end(), order.begin(), order.begin() + take_b);
        part_a.insert(part_a.end(), order.begin() + take_b, order.end());
        continue;
      }
      if (order.size() % 2 == 1) ++half;
      part_a.insert(part_a.end(), order.begin(), order.begin() + half);
      part_b.insert(part_b.end(), order.begin() + half, order.end());
    }
    std::sort(part_a.begin(), part_a.end());
    std::sort(part_b.begin(), part_b.end());

    FoldSplit first;
    first.run_index = run;
    first.fold_index = 0;
    first.train_indices = part_a;
    first.test_indices = part_b;
    FoldSplit second;
    second.run_index = run;
    second.fold_index = 1;
    second.train_indices = std::move(part_b);
    second.test_indices = std::move(part_a);
    splits.push_back(std::move(first));
    splits.push_back(std::move(second));
  }
  return splits;
}

std::vector<LabeledSample> gather(const Dataset& dataset,
                                  std::span<const std::size_t> indices) {
  std::vector<LabeledSample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(dataset.samples[i]);
  return out;
}

}  // namespace pater
