#ifndef PATER_EVALUATION_HPP
#define PATER_EVALUATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pater/dataset.hpp"
#include "pater/learner.hpp"
#include "pater/metrics.hpp"

namespace pater {

/// Running prequential accuracy over one online pass; entry t is
/// (correct predictions among the first t) / t.
struct CumulativeTrace {
  std::vector<std::size_t> steps;
  std::vector<double> cumulative_accuracy;
};

struct FoldResult {
  double accuracy_percent = 0.0;
  ConfusionMatrix confusion;
  CumulativeTrace trace;
  double cpu_seconds = 0.0;  // training loop only
};

enum class NormalizeMode { kPerFold, kGlobal, kNone };

struct EvalOptions {
  int runs = 10;
  NormalizeMode normalize = NormalizeMode::kPerFold;
  bool clip_tau = false;
};

/// One online pass over `train` (order shuffled by stream_seed), then scores
/// `test` with the frozen final weights. Inputs must already be normalized
/// consistently. CPU time covers only the update loop.
FoldResult evaluate_fold(Variant variant, ClassWeights alpha,
                         std::span<const LabeledSample> train,
                         std::span<const LabeledSample> test,
                         std::uint64_t stream_seed, bool clip_tau = false);

/// Per-(algorithm, dataset) result of the 10x2-fold protocol.
struct AccuracyReport {
  std::string algorithm;
  std::string dataset;
  std::vector<double> per_run_accuracy;         // one entry per (run, fold)
  std::vector<ConfusionMatrix> per_run_confusion;
  double mean = 0.0;
  double stddev = 0.0;  // population stddev over per_run_accuracy
  double mean_cpu_seconds = 0.0;
};

double mean_balanced_accuracy(const AccuracyReport& report);

struct FoldTrace {
  int run = 0;
  int fold = 0;
  CumulativeTrace trace;
  double accuracy_percent = 0.0;
};

/// Runs the full protocol for one (variant, dataset) pair. Fold splits and
/// stream order derive only from (seed, dataset, run, fold), never from the
/// algorithm, so all algorithms see identical streams. Traces are collected
/// when `traces` is non-null.
AccuracyReport evaluate_pair(Variant variant, ClassWeights alpha, const Dataset& dataset,
                             std::uint64_t seed, const EvalOptions& options,
                             std::vector<FoldTrace>* traces = nullptr);

// ---------------------------------------------------------------------------
// Weight sweep (best-weight analysis)
// ---------------------------------------------------------------------------

enum class SweepMetric { kAccuracy, kBalancedAccuracy };

struct SweepConfigResult {
  char side = 'N';  // 'N': alpha- varied; 'P': alpha+ varied
  double grid_value = 1.0;
  ClassWeights alpha;
  double mean_accuracy = 0.0;
  double mean_balanced_accuracy = 0.0;
};

struct SweepResult {
  std::vector<SweepConfigResult> configs;  // N side ascending, then P side
  std::size_t best_index = 0;
  char needed_weight = 'P';  // 'N' iff n+/n- >= 1
  char best_weight = 'P';
  bool match = false;
};

/// The default sweep grid {0.01, 0.1, 0.3, 0.5, 0.9, 0.99}.
std::span<const double> default_alpha_grid();

/// Evaluates (alpha-=g, alpha+=1) and (alpha-=1, alpha+=g) for every g in the
/// grid and picks the best by `metric`. Exact ties resolve toward side 'P'
/// and then toward the smaller grid value. `variant` must be weighted.
SweepResult sweep_weights(Variant variant, const Dataset& dataset,
                          std::span<const double> grid, std::uint64_t seed,
                          const EvalOptions& options,
                          SweepMetric metric = SweepMetric::kAccuracy);

}  // namespace pater

#endif  // PATER_EVALUATION_HPP
