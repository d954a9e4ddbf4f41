#ifndef PATER_SIGNIFICANCE_HPP
#define PATER_SIGNIFICANCE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "pater/common.hpp"

namespace pater {

/// Per-dataset ranks (1 = best, ties averaged) plus per-algorithm averages.
struct RankTable {
  std::vector<std::string> algorithms;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> ranks;  // [dataset][algorithm]
  std::vector<double> average_rank;        // [algorithm]
};

/// Ranks a complete datasets x algorithms grid of scores; higher scores rank
/// better (rank 1). Tied scores get the average of the ranks they span.
RankTable rank_table(const std::vector<std::string>& algorithms,
                     const std::vector<std::string>& datasets,
                     const std::vector<std::vector<double>>& scores);

struct SignificanceResult {
  std::vector<double> mean_ranks;     // [algorithm]
  double friedman_statistic = 0.0;    // chi-square form
  double critical_difference = 0.0;
  /// Maximal sets of algorithms whose mean-rank spread is within the CD;
  /// two algorithms share a group iff their rank gap is <= CD.
  std::vector<std::vector<std::size_t>> groups;
};

/// Nemenyi critical difference q_a * sqrt(k(k+1)/(6N)). Tabulated q for
/// k in [2,10] and confidence 0.05 or 0.10; anything else is rejected.
double nemenyi_critical_difference(std::size_t k, std::size_t n_datasets,
                                   double confidence = 0.05);

/// Friedman chi-square statistic and Nemenyi grouping from a complete
/// datasets x algorithms score grid (higher scores are better).
SignificanceResult friedman_nemenyi(const std::vector<std::vector<double>>& scores,
                                    double confidence = 0.05);

/// Same, but starting from per-dataset rank rows (1 = best) instead of scores.
SignificanceResult friedman_nemenyi_from_ranks(
    const std::vector<std::vector<double>>& ranks, double confidence = 0.05);

}  // namespace pater

#endif  // PATER_SIGNIFICANCE_HPP
