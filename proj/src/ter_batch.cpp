#include "pater/ter_batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pater {

namespace {

// Solves the m x m system in place. `a` is row-major, `b` the right-hand
// side. Throws SingularityError when a pivot falls below the scale-relative
// threshold; `column_names` maps local indices back to design columns for
// the error message.
FeatureVector solve_partial_pivot(std::vector<double> a, FeatureVector b,
                                  const std::vector<std::size_t>& column_names) {
  const std::size_t m = b.size();
  double max_abs = 0.0;
  for (double v : a) max_abs = std::max(max_abs, std::abs(v));
  const double tol = std::max(max_abs, 1.0) * static_cast<double>(m) *
                     std::numeric_limits<double>::epsilon() * 16.0;

  std::vector<std::size_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = i;

  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot_row = col;
    double pivot_abs = std::abs(a[perm[col] * m + col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double v = std::abs(a[perm[r] * m + col]);
      if (v > pivot_abs) {
        pivot_abs = v;
        pivot_row = r;
      }
    }
    if (pivot_abs <= tol) {
      throw SingularityError(
          "normal system is rank deficient (no usable pivot for column " +
          std::to_string(column_names[col]) + "); add a ridge term or remove "
          "linearly dependent features");
    }
    std::swap(perm[col], perm[pivot_row]);
    const std::size_t prow = perm[col];
    const double pivot = a[prow * m + col];
    for (std::size_t r = col + 1; r < m; ++r) {
      const std::size_t row = perm[r];
      const double factor = a[row * m + col] / pivot;
      if (factor == 0.0) continue;
      a[row * m + col] = 0.0;
      for (std::size_t c = col + 1; c < m; ++c) {
        a[row * m + c] -= factor * a[prow * m + c];
      }
      b[row] -= factor * b[prow];
    }
  }

  FeatureVector solution(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    const std::size_t row = perm[i];
    double acc = b[row];
    for (std::size_t c = i + 1; c < m; ++c) {
      acc -= a[row * m + c] * solution[c];
    }
    solution[i] = acc / a[row * m + i];
  }
  return solution;
}

}  // namespace

BatchDesign BatchDesign::from_samples(std::span<const LabeledSample> samples) {
  std::size_t n_neg = 0, n_pos = 0;
  std::size_t dim = 0;
  for (const LabeledSample& s : samples) {
    check_label(s.label);
    if (dim == 0) dim = s.features.size();
    check_dimension(dim, s.features.size(), "BatchDesign");
    (s.label < 0 ? n_neg : n_pos)++;
  }
  if (n_neg == 0 || n_pos == 0) {
    throw ProtocolError("BatchDesign requires at least one sample of each class");
  }

  BatchDesign design;
  design.rows = samples.size();
  design.cols = dim;
  design.x.reserve(design.rows * dim);
  design.labels.reserve(design.rows);
  design.row_weights.reserve(design.rows);
  const double w_neg = 1.0 / static_cast<double>(n_neg);
  const double w_pos = 1.0 / static_cast<double>(n_pos);
  for (int label : {-1, 1}) {
    for (const LabeledSample& s : samples) {
      if (s.label != label) continue;
      design.x.insert(design.x.end(), s.features.begin(), s.features.end());
      design.labels.push_back(label);
      design.row_weights.push_back(label < 0 ? w_neg : w_pos);
    }
  }
  return design;
}

FeatureVector ter_closed_form(const BatchDesign& design, double ridge) {
  if (design.rows == 0 || design.cols == 0) {
    throw EmptyDatasetError("ter_closed_form: empty design");
  }
  if (ridge < 0.0) {
    throw Error("ter_closed_form: ridge must be non-negative");
  }
  const std::size_t d = design.cols;

  // Columns that never take a nonzero value carry no information; with
  // ridge == 0 they would make the normal system singular, so they are
  // solved around and their weights stay 0.
  std::vector<std::size_t> active;
  active.reserve(d);
  if (ridge == 0.0) {
    std::vector<bool> seen(d, false);
    for (std::size_t r = 0; r < design.rows; ++r) {
      const auto row = design.row(r);
      for (std::size_t c = 0; c < d; ++c) {
        if (row[c] != 0.0) seen[c] = true;
      }
    }
    for (std::size_t c = 0; c < d; ++c) {
      if (seen[c]) active.push_back(c);
    }
  } else {
    for (std::size_t c = 0; c < d; ++c) active.push_back(c);
  }

  FeatureVector solution(d, 0.0);
  const std::size_t m = active.size();
  if (m == 0) return solution;  // all-zero design: w = 0 satisfies the system

  // A = X^T W X (+ ridge I) and b = X^T W y restricted to active columns.
  std::vector<double> a(m * m, 0.0);
  FeatureVector b(m, 0.0);
  for (std::size_t r = 0; r < design.rows; ++r) {
    const auto row = design.row(r);
    const double w = design.row_weights[r];
    const double wy = w * static_cast<double>(design.labels[r]);
    for (std::size_t i = 0; i < m; ++i) {
      const double xi = row[active[i]];
      if (xi == 0.0) continue;
      const double wxi = w * xi;
      for (std::size_t j = 0; j < m; ++j) {
        a[i * m + j] += wxi * row[active[j]];
      }
      b[i] += wy * xi;
    }
  }
  if (ridge > 0.0) {
    for (std::size_t i = 0; i < m; ++i) a[i * m + i] += ridge;
  }

  const std::vector<double> a_copy = a;
  const FeatureVector b_copy = b;
  FeatureVector reduced = solve_partial_pivot(std::move(a), std::move(b), active);

  // Residual guard: a solve that drifts past 1e-8 relative is reported as a
  // conditioning failure rather than returned silently.
  double b_norm = 0.0, res_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double acc = -b_copy[i];
    for (std::size_t j = 0; j < m; ++j) acc += a_copy[i * m + j] * reduced[j];
    res_norm += acc * acc;
    b_norm += b_copy[i] * b_copy[i];
  }
  if (std::sqrt(res_norm) > 1e-8 * std::max(1.0, std::sqrt(b_norm))) {
    throw SingularityError(
        "ter_closed_form: normal-equation residual exceeds 1e-8; the system "
        "is too ill-conditioned (consider a ridge term)");
  }

  for (std::size_t i = 0; i < m; ++i) solution[active[i]] = reduced[i];
  return solution;
}

}  // namespace pater
