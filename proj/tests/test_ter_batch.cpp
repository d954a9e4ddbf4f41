#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "pater/ter_batch.hpp"
#include "test_support.hpp"

using namespace pater;
using pater::test::random_stream;
using pater::test::rel_err;

namespace {

/// Independent residual oracle: || (X^T W X + ridge I) w - X^T W y ||_2,
/// assembled directly from the design rows.
double normal_equation_residual(const BatchDesign& design, const FeatureVector& w,
                                double ridge) {
  const std::size_t d = design.cols;
  FeatureVector lhs(d, 0.0), rhs(d, 0.0);
  for (std::size_t r = 0; r < design.rows; ++r) {
    const auto row = design.row(r);
    const double weight = design.row_weights[r];
    const double wx = dot(row, w);
    for (std::size_t j = 0; j < d; ++j) {
      lhs[j] += weight * row[j] * wx;
      rhs[j] += weight * row[j] * static_cast<double>(design.labels[r]);
    }
  }
  double res = 0.0, rhs_norm = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double e = lhs[j] + ridge * w[j] - rhs[j];
    res += e * e;
    rhs_norm += rhs[j] * rhs[j];
  }
  return std::sqrt(res) / std::max(1.0, std::sqrt(rhs_norm));
}

}  // namespace

TEST_CASE("two-point design solves to the hand solution") {
  // One negative (-1, 0), one positive (1, 0): the 2x2 normal system reduces
  // to 2 w1 = 2 with the second (all-zero) feature pinned to 0.
  std::vector<LabeledSample> samples = {{{-1.0, 0.0}, -1}, {{1.0, 0.0}, 1}};
  const BatchDesign design = BatchDesign::from_samples(samples);
  const FeatureVector w = ter_closed_form(design, 0.0);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w[1] == 0.0);
}

TEST_CASE("duplicated column raises a singularity error") {
  std::vector<LabeledSample> samples = {
      {{1.0, 1.0}, -1}, {{2.0, 2.0}, 1}, {{-1.0, -1.0}, 1}};
  const BatchDesign design = BatchDesign::from_samples(samples);
  CHECK_THROWS_AS(ter_closed_form(design, 0.0), SingularityError);
  CHECK_THROWS_WITH_AS(ter_closed_form(design, 0.0),
                       doctest::Contains("rank deficient"), SingularityError);
}

TEST_CASE("residuals stay below 1e-8 on random well-conditioned designs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto samples = random_stream(seed * 13 + 1, 50, 5);
    const BatchDesign design = BatchDesign::from_samples(samples);
    for (double ridge : {0.0, 1e-8}) {
      const FeatureVector w = ter_closed_form(design, ridge);
      CHECK(normal_equation_residual(design, w, ridge) <= 1e-8);
    }
  }
}

TEST_CASE("duplicating the negative class leaves the solution unchanged") {
  auto samples = random_stream(42, 60, 4);
  const FeatureVector base = ter_closed_form(BatchDesign::from_samples(samples), 0.0);

  std::vector<LabeledSample> doubled = samples;
  for (const LabeledSample& s : samples) {
    if (s.label < 0) doubled.push_back(s);
  }
  const FeatureVector dup = ter_closed_form(BatchDesign::from_samples(doubled), 0.0);
  CHECK(rel_err(dup, base) <= 1e-10);
}

TEST_CASE("design construction stacks negatives first with 1/n weights") {
  std::vector<LabeledSample> samples = {
      {{1.0}, 1}, {{2.0}, -1}, {{3.0}, 1}, {{4.0}, -1}, {{5.0}, -1}};
  const BatchDesign design = BatchDesign::from_samples(samples);
  REQUIRE(design.rows == 5);
  CHECK(design.labels == std::vector<int>{-1, -1, -1, 1, 1});
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(design.row_weights[r] == doctest::Approx(1.0 / 3.0));
  }
  for (std::size_t r = 3; r < 5; ++r) {
    CHECK(design.row_weights[r] == doctest::Approx(0.5));
  }

  std::vector<LabeledSample> single_class = {{{1.0}, 1}, {{2.0}, 1}};
  CHECK_THROWS_AS(BatchDesign::from_samples(single_class), ProtocolError);
}

TEST_CASE("ridge regularizes an otherwise singular system") {
  std::vector<LabeledSample> samples = {
      {{1.0, 1.0}, -1}, {{2.0, 2.0}, 1}, {{-1.0, -1.0}, 1}};
  const BatchDesign design = BatchDesign::from_samples(samples);
  const FeatureVector w = ter_closed_form(design, 1e-6);
  CHECK(normal_equation_residual(design, w, 1e-6) <= 1e-8);
  CHECK_THROWS_AS(ter_closed_form(design, -1.0), Error);
}
