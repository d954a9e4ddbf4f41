#include "pater/significance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pater {

namespace {

// Two-tailed Nemenyi critical values (studentized range / sqrt(2)) for
// k = 2..10, as tabulated in Demsar's comparison methodology.
constexpr double kQ005[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                            2.949, 3.031, 3.102, 3.164};
constexpr double kQ010[] = {1.645, 2.052, 2.291, 2.459, 2.589,
                            2.693, 2.780, 2.855, 2.920};

std::vector<double> rank_row(const std::vector<double>& scores) {
  const std::size_t k = scores.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<double> ranks(k, 0.0);
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

void check_grid(const std::vector<std::vector<double>>& grid) {
  if (grid.size() < 2) {
    throw ProtocolError("significance test needs at least 2 datasets");
  }
  const std::size_t k = grid.front().size();
  for (const auto& row : grid) {
    if (row.size() != k) {
      throw ProtocolError("significance test: ragged grid (missing cells)");
    }
  }
  if (k < 2) throw ProtocolError("significance test needs at least 2 algorithms");
}

}  // namespace

RankTable rank_table(const std::vector<std::string>& algorithms,
                     const std::vector<std::string>& datasets,
                     const std::vector<std::vector<double>>& scores) {
  if (scores.size() != datasets.size()) {
    throw ProtocolError("rank_table: one score row per dataset required");
  }
  RankTable table;
  table.algorithms = algorithms;
  table.datasets = datasets;
  table.average_rank.assign(algorithms.size(), 0.0);
  for (const auto& row : scores) {
    if (row.size() != algorithms.size()) {
      throw ProtocolError("rank_table: row arity does not match algorithm count");
    }
    table.ranks.push_back(rank_row(row));
    for (std::size_t j = 0; j < algorithms.size(); ++j) {
      table.average_rank[j] += table.ranks.back()[j];
    }
  }
  for (double& r : table.average_rank) r /= static_cast<double>(datasets.size());
  return table;
}

double nemenyi_critical_difference(std::size_t k, std::size_t n_datasets,
                                   double confidence) {
  if (k < 2 || k > 10) {
    throw ProtocolError("Nemenyi q values tabulated for 2..10 algorithms, got " +
                        std::to_string(k));
  }
  if (n_datasets < 2) throw ProtocolError("Nemenyi CD needs at least 2 datasets");
  const double* table;
  if (confidence == 0.05) {
    table = kQ005;
  } else if (confidence == 0.10) {
    table = kQ010;
  } else {
    throw ProtocolError("confidence must be 0.05 or 0.10");
  }
  const double q = table[k - 2];
  const double kk = static_cast<double>(k);
  return q * std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

SignificanceResult friedman_nemenyi_from_ranks(
    const std::vector<std::vector<double>>& ranks, double confidence) {
  check_grid(ranks);
  const std::size_t n = ranks.size();
  const std::size_t k = ranks.front().size();

  SignificanceResult result;
  result.mean_ranks.assign(k, 0.0);
  for (const auto& row : ranks) {
    for (std::size_t j = 0; j < k; ++j) result.mean_ranks[j] += row[j];
  }
  for (double& r : result.mean_ranks) r /= static_cast<double>(n);

  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  double sum_sq = 0.0;
  for (double r : result.mean_ranks) sum_sq += r * r;
  result.friedman_statistic =
      12.0 * nn / (kk * (kk + 1.0)) * (sum_sq - kk * (kk + 1.0) * (kk + 1.0) / 4.0);

  result.critical_difference = nemenyi_critical_difference(k, n, confidence);

  // Maximal runs of rank-sorted algorithms whose extremes are within CD.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.mean_ranks[a] < result.mean_ranks[b];
  });
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i;
    while (j + 1 < k && result.mean_ranks[order[j + 1]] -
                                result.mean_ranks[order[i]] <=
                            result.critical_difference) {
      ++j;
    }
    if (result.groups.empty() || j + 1 > prev_end) {
      result.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                                 order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      prev_end = j + 1;
    }
  }
  return result;
}

SignificanceResult friedman_nemenyi(const std::vector<std::vector<double>>& scores,
                                    double confidence) {
  check_grid(scores);
  std::vector<std::vector<double>> ranks;
  ranks.reserve(scores.size());
  for (const auto& row : scores) ranks.push_back(rank_row(row));
  return friedman_nemenyi_from_ranks(ranks, confidence);
}

}  // namespace pater
