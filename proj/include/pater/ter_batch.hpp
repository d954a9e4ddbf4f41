#ifndef PATER_TER_BATCH_HPP
#define PATER_TER_BATCH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pater/common.hpp"

namespace pater {

/// Batch design for the closed-form TER solution: sample matrix X (negatives
/// stacked before positives), targets y in {-1,+1}, and per-row weights
/// 1/n- or 1/n+ forming the diagonal of W.
struct BatchDesign {
  std::vector<double> x;  // rows * cols, row-major
  std::vector<int> labels;
  std::vector<double> row_weights;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * cols, cols);
  }

  /// Builds the design from labeled samples; requires at least one sample of
  /// each class.
  static BatchDesign from_samples(std::span<const LabeledSample> samples);
};

/// Solves (X^T W X + ridge I) w = X^T W y by dense Gaussian elimination with
/// partial pivoting. With ridge == 0, feature columns that are identically
/// zero carry no information and get weight 0; any remaining rank deficiency
/// raises SingularityError naming the offending column. The returned solution
/// satisfies the (perturbed) normal equations to 1e-8 relative residual.
FeatureVector ter_closed_form(const BatchDesign& design, double ridge = 0.0);

}  // namespace pater

#endif  // PATER_TER_BATCH_HPP
