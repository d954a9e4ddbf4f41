#include "pater/evaluation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>

#include "pater/rng.hpp"

namespace pater {

namespace {

double thread_cpu_seconds() {
#if defined(CLOCK_THREAD_CPUTIME_ID)
  timespec ts;
  if (clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts) == 0) {
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
  }
#endif
  return static_cast<double>(std::clock()) / CLOCKS_PER_SEC;
}

// The training loop is pure compute, so on hosts where the thread CPU clock
// is too coarse to register it (sandboxed kernels tick at 10ms), the
// monotonic wall time of the loop is the better estimate.
struct LoopTimer {
  double cpu_start = thread_cpu_seconds();
  std::chrono::steady_clock::time_point wall_start = std::chrono::steady_clock::now();

  double elapsed() const {
    const double cpu = thread_cpu_seconds() - cpu_start;
    if (cpu > 0.0) return cpu;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
        .count();
  }
};

constexpr std::array<double, 6> kDefaultGrid = {0.01, 0.1, 0.3, 0.5, 0.9, 0.99};

}  // namespace

FoldResult evaluate_fold(Variant variant, ClassWeights alpha,
                         std::span<const LabeledSample> train,
                         std::span<const LabeledSample> test,
                         std::uint64_t stream_seed, bool clip_tau) {
  if (train.empty() || test.empty()) {
    throw ProtocolError("evaluate_fold: empty train or test fold");
  }
  const std::size_t dim = train.front().features.size();

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(stream_seed);
  rng.shuffle(order);

  OnlineLearner learner(variant, dim, alpha, OnlineLearner::Options{clip_tau});
  FoldResult result;
  result.trace.steps.reserve(train.size());
  result.trace.cumulative_accuracy.reserve(train.size());

  std::size_t correct = 0;
  const LoopTimer timer;
  for (std::size_t t = 0; t < order.size(); ++t) {
    const LabeledSample& sample = train[order[t]];
    const StepResult step = learner.step(sample);
    if (step.predicted_label == sample.label) ++correct;
    result.trace.steps.push_back(t + 1);
    result.trace.cumulative_accuracy.push_back(static_cast<double>(correct) /
                                               static_cast<double>(t + 1));
  }
  result.cpu_seconds = timer.elapsed();

  for (const LabeledSample& sample : test) {
    result.confusion.add(sample.label, learner.predict(sample.features));
  }
  result.accuracy_percent = accuracy_percent(result.confusion);
  return result;
}

double mean_balanced_accuracy(const AccuracyReport& report) {
  if (report.per_run_confusion.empty()) {
    throw ProtocolError("mean_balanced_accuracy: report carries no confusion matrices");
  }
  double sum = 0.0;
  for (const ConfusionMatrix& cm : report.per_run_confusion) {
    sum += balanced_accuracy(cm);
  }
  return sum / static_cast<double>(report.per_run_confusion.size());
}

AccuracyReport evaluate_pair(Variant variant, ClassWeights alpha, const Dataset& dataset,
                             std::uint64_t seed, const EvalOptions& options,
                             std::vector<FoldTrace>* traces) {
  AccuracyReport report;
  report.algorithm = std::string(variant_name(variant));
  report.dataset = dataset.name;

  const std::uint64_t dataset_seed = mix_seed(seed, dataset.name);
  const std::vector<FoldSplit> splits = make_folds(dataset, dataset_seed, options.runs);

  NormalizationStats global_stats;
  if (options.normalize == NormalizeMode::kGlobal) {
    global_stats = zscore_fit(dataset.samples);
  }

  double cpu_total = 0.0;
  for (const FoldSplit& split : splits) {
    std::vector<LabeledSample> train = gather(dataset, split.train_indices);
    std::vector<LabeledSample> test = gather(dataset, split.test_indices);
    switch (options.normalize) {
      case NormalizeMode::kPerFold: {
        const NormalizationStats stats = zscore_fit(train);
        zscore_apply_inplace(stats, train);
        zscore_apply_inplace(stats, test);
        break;
      }
      case NormalizeMode::kGlobal:
        zscore_apply_inplace(global_stats, train);
        zscore_apply_inplace(global_stats, test);
        break;
      case NormalizeMode::kNone:
        break;
    }
    const std::uint64_t stream_seed = mix_seed(
        mix_seed(dataset_seed, "stream"),
        static_cast<std::uint64_t>(split.run_index) * 2 + static_cast<std::uint64_t>(split.fold_index));
    FoldResult fold =
        evaluate_fold(variant, alpha, train, test, stream_seed, options.clip_tau);
    report.per_run_accuracy.push_back(fold.accuracy_percent);
    report.per_run_confusion.push_back(fold.confusion);
    cpu_total += fold.cpu_seconds;
    if (traces != nullptr) {
      traces->push_back(FoldTrace{split.run_index, split.fold_index,
                                  std::move(fold.trace), fold.accuracy_percent});
    }
  }

  const double n = static_cast<double>(report.per_run_accuracy.size());
  report.mean = std::accumulate(report.per_run_accuracy.begin(),
                                report.per_run_accuracy.end(), 0.0) / n;
  double var = 0.0;
  for (double a : report.per_run_accuracy) {
    var += (a - report.mean) * (a - report.mean);
  }
  report.stddev = std::sqrt(var / n);
  report.mean_cpu_seconds = cpu_total / n;
  return report;
}

std::span<const double> default_alpha_grid() { return kDefaultGrid; }

SweepResult sweep_weights(Variant variant, const Dataset& dataset,
                          std::span<const double> grid, std::uint64_t seed,
                          const EvalOptions& options, SweepMetric metric) {
  if (!is_weighted(variant)) {
    throw UsageError("sweep requires a weighted variant (wpater1 or wpater2)");
  }
  if (grid.empty()) throw UsageError("sweep grid is empty");
  for (double g : grid) {
    if (!(g > 0.0)) throw UsageError("sweep grid values must be positive");
  }

  SweepResult result;
  for (char side : {'N', 'P'}) {
    for (double g : grid) {
      SweepConfigResult cfg;
      cfg.side = side;
      cfg.grid_value = g;
      cfg.alpha = side == 'N' ? ClassWeights{g, 1.0} : ClassWeights{1.0, g};
      const AccuracyReport report =
          evaluate_pair(variant, cfg.alpha, dataset, seed, options);
      cfg.mean_accuracy = report.mean;
      cfg.mean_balanced_accuracy = 100.0 * mean_balanced_accuracy(report);
      result.configs.push_back(cfg);
    }
  }

  auto score = [&](const SweepConfigResult& c) {
    return metric == SweepMetric::kAccuracy ? c.mean_accuracy : c.mean_balanced_accuracy;
  };
  // Ties resolve toward side 'P', then toward the smaller grid value.
  auto better = [&](const SweepConfigResult& a, const SweepConfigResult& b) {
    if (score(a) != score(b)) return score(a) > score(b);
    if (a.side != b.side) return a.side == 'P';
    return a.grid_value < b.grid_value;
  };
  result.best_index = 0;
  for (std::size_t i = 1; i < result.configs.size(); ++i) {
    if (better(result.configs[i], result.configs[result.best_index])) {
      result.best_index = i;
    }
  }
  result.best_weight = result.configs[result.best_index].side;
  result.needed_weight = dataset.imbalance_ratio() >= 1.0 ? 'N' : 'P';
  result.match = result.best_weight == result.needed_weight;
  return result;
}

}  // namespace pater
