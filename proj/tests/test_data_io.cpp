#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pater/loaders.hpp"
#include "pater/registry.hpp"
#include "pater/synthetic.hpp"
#include "test_support.hpp"

using namespace pater;
using pater::test::rel_err;

namespace {

Dataset libsvm_from(const std::string& text, const LibsvmOptions& options = {}) {
  std::istringstream in(text);
  return load_libsvm(in, options);
}

Dataset delimited_from(const std::string& text, const DelimitedOptions& options) {
  std::istringstream in(text);
  return load_delimited(in, options);
}

/// Builds a credit-app-shaped file: `rows` rows of `cols` numeric columns
/// plus a leading 0/1 label, with `missing_rows` of them containing a '?'
/// in the column picked by the row index.
std::string delimited_fixture(std::size_t rows, std::size_t cols,
                              const std::set<std::size_t>& missing_rows,
                              std::size_t missing_col) {
  std::ostringstream out;
  for (std::size_t r = 0; r < rows; ++r) {
    out << (r % 3 == 0 ? 1 : 0);
    for (std::size_t c = 0; c < cols; ++c) {
      if (missing_rows.count(r) && c == missing_col) {
        out << ",?";
      } else {
        out << ',' << (0.25 * static_cast<double>(c) + static_cast<double>(r % 7));
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("libsvm parsing: dense expansion, comments, errors") {
  const Dataset d = libsvm_from("+1 1:0.5 3:2\n");
  CHECK(d.dimension == 3);
  CHECK(d.samples.size() == 1);
  CHECK(d.samples[0].features == FeatureVector{0.5, 0.0, 2.0});
  CHECK(d.samples[0].label == 1);

  const Dataset two = libsvm_from("# comment line\n+1 2:1\n-1 1:3 2:-0.5  # trailing\n\n");
  CHECK(two.dimension == 2);
  CHECK(two.samples[1].features == FeatureVector{3.0, -0.5});
  CHECK(two.samples[1].label == -1);

  CHECK_THROWS_AS(libsvm_from("1 2:abc\n"), ParseError);
  CHECK_THROWS_WITH_AS(libsvm_from("1 2:abc\n"), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_AS(libsvm_from(""), EmptyDatasetError);
  CHECK_THROWS_AS(libsvm_from("1 2:1 2:3\n"), ParseError);   // not increasing
  CHECK_THROWS_AS(libsvm_from("1 0:1\n"), ParseError);       // 0-based index
  CHECK_THROWS_AS(libsvm_from("5 1:1\n"), LabelError);       // unmappable label
  CHECK_THROWS_AS(libsvm_from("1 1:inf\n"), ParseError);     // non-finite value
}

TEST_CASE("libsvm label map handles the UCI conventions and overrides") {
  const Dataset d = libsvm_from("+1 1:1\n1 1:1\n-1 1:1\n0 1:1\n2 1:1\n");
  CHECK(d.samples[0].label == 1);
  CHECK(d.samples[1].label == 1);
  CHECK(d.samples[2].label == -1);
  CHECK(d.samples[3].label == -1);
  CHECK(d.samples[4].label == -1);

  LibsvmOptions options;
  options.label_map.entries = {{"4", 1}, {"2", -1}};
  const Dataset m = libsvm_from("4 1:1\n2 1:1\n", options);
  CHECK(m.samples[0].label == 1);
  CHECK(m.samples[1].label == -1);
}

TEST_CASE("libsvm round-trip preserves values at full precision") {
  Rng rng(7);
  Dataset original;
  original.name = "roundtrip";
  original.dimension = 5;
  for (int i = 0; i < 40; ++i) {
    LabeledSample s;
    s.label = (rng.next_u64() & 1) ? 1 : -1;
    for (int j = 0; j < 5; ++j) s.features.push_back(rng.normal());
    original.samples.push_back(std::move(s));
  }
  std::ostringstream text;
  save_libsvm(original, text);
  std::istringstream in(text.str());
  LibsvmOptions options;
  options.dimension = original.dimension;
  const Dataset reloaded = load_libsvm(in, options);
  REQUIRE(reloaded.samples.size() == original.samples.size());
  REQUIRE(reloaded.dimension == original.dimension);
  for (std::size_t i = 0; i < original.samples.size(); ++i) {
    CHECK(reloaded.samples[i].label == original.samples[i].label);
    CHECK(reloaded.samples[i].features == original.samples[i].features);
  }
}

TEST_CASE("delimited drop-rows policy matches the credit-app counts") {
  std::set<std::size_t> missing;
  for (std::size_t i = 0; i < 37; ++i) missing.insert(i * 18);  // 37 rows with '?'
  const std::string text = delimited_fixture(690, 15, missing, 6);
  DelimitedOptions options;
  options.label_column = std::size_t{0};
  const Dataset d = delimited_from(text, options);
  CHECK(d.size() == 653);
  CHECK(d.dimension == 15);
}

TEST_CASE("delimited drop-column policy removes the missing column then rows") {
  // Mushroom-shaped file: 8124 rows, 22 attribute columns. Column 11 has
  // misses in 3000 rows, 2480 rows have misses elsewhere.
  std::ostringstream text;
  for (std::size_t r = 0; r < 8124; ++r) {
    text << (r % 2 == 0 ? 1 : 0);
    for (std::size_t c = 1; c <= 22; ++c) {
      const bool miss11 = c == 11 && r < 3000;
      const bool miss_other = c == 4 && r >= 3000 && r < 5480;
      text << ',' << (miss11 || miss_other ? "?" : std::to_string(c % 5));
    }
    text << '\n';
  }
  DelimitedOptions options;
  options.label_column = std::size_t{0};
  options.policy = MissingPolicy::kDropColumn;
  options.policy_column = ColumnRef{std::size_t{11}};
  std::istringstream in(text.str());
  const Dataset d = load_delimited(in, options);
  CHECK(d.size() == 8124 - 2480);  // 5644
  CHECK(d.dimension == 21);
}

TEST_CASE("delimited policies are no-ops on files without missing cells") {
  const std::string text = delimited_fixture(50, 6, {}, 0);
  DelimitedOptions drop_rows;
  drop_rows.label_column = std::size_t{0};
  DelimitedOptions drop_column = drop_rows;
  drop_column.policy = MissingPolicy::kDropColumn;
  drop_column.policy_column = ColumnRef{std::size_t{3}};
  const Dataset a = delimited_from(text, drop_rows);
  const Dataset b = delimited_from(text, drop_column);
  REQUIRE(a.size() == b.size());
  CHECK(a.dimension == b.dimension);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.samples[i].features == b.samples[i].features);
  }
}

TEST_CASE("delimited errors: arity, all-dropped, header names") {
  DelimitedOptions options;
  options.label_column = std::size_t{0};
  CHECK_THROWS_AS(delimited_from("1,2,3\n1,2\n", options), ParseError);
  CHECK_THROWS_AS(delimited_from("1,?\n0,?\n", options), EmptyDatasetError);

  DelimitedOptions named;
  named.has_header = true;
  named.label_column = std::string{"class"};
  const Dataset d = delimited_from("a,class,b\n1.5,1,2.5\n0.5,0,3.5\n", named);
  CHECK(d.dimension == 2);
  CHECK(d.samples[0].label == 1);
  CHECK(d.samples[0].features == FeatureVector{1.5, 2.5});

  DelimitedOptions bad = named;
  bad.label_column = std::string{"missing"};
  CHECK_THROWS_AS(delimited_from("a,class,b\n1,1,2\n", bad), ParseError);
}

TEST_CASE("space delimiter tolerates leading and doubled whitespace") {
  DelimitedOptions options;
  options.delimiter = ' ';
  options.label_column = std::size_t{0};
  const Dataset d = delimited_from(" 1 2.0  3.0 4.0\n0 5.0 6.0  7.0\n", options);
  CHECK(d.size() == 2);
  CHECK(d.dimension == 3);
  CHECK(d.samples[0].features == FeatureVector{2.0, 3.0, 4.0});
  CHECK(d.samples[1].label == -1);
}

TEST_CASE("delimited excluded columns and bias augmentation") {
  DelimitedOptions options;
  options.label_column = std::size_t{1};
  options.exclude_columns = {ColumnRef{std::size_t{0}}};  // id column
  options.append_bias = true;
  const Dataset d = delimited_from("1001,1,0.5,0.25\n1002,0,1.5,0.75\n", options);
  CHECK(d.dimension == 3);
  CHECK(d.samples[0].features == FeatureVector{0.5, 0.25, 1.0});
  CHECK(d.samples[1].label == -1);
}

TEST_CASE("zscore fit/apply: hand example, constant columns, leakage") {
  std::vector<LabeledSample> pair = {{{0.0}, 1}, {{2.0}, -1}};
  const NormalizationStats stats = zscore_fit(pair);
  CHECK(stats.mean[0] == doctest::Approx(1.0));
  CHECK(stats.stddev[0] == doctest::Approx(1.0));  // population stddev
  const auto normalized = zscore_apply(stats, pair);
  CHECK(normalized[0].features[0] == doctest::Approx(-1.0));
  CHECK(normalized[1].features[0] == doctest::Approx(1.0));

  std::vector<LabeledSample> constant = {{{3.0, 1.0}, 1}, {{3.0, 2.0}, -1}, {{3.0, 6.0}, 1}};
  const NormalizationStats cs = zscore_fit(constant);
  for (const LabeledSample& s : zscore_apply(cs, constant)) {
    CHECK(s.features[0] == 0.0);  // constant feature floors to exactly zero
  }

  // Statistics computed on the training fold never look at test rows.
  auto train = pater::test::random_stream(3, 50, 4);
  auto test = pater::test::random_stream(4, 20, 4);
  const NormalizationStats before = zscore_fit(train);
  for (LabeledSample& s : test) s.features[0] += 1000.0;  // perturb test fold
  const NormalizationStats after = zscore_fit(train);
  CHECK(before.mean == after.mean);
  CHECK(before.stddev == after.stddev);

  CHECK_THROWS_AS(zscore_fit(std::vector<LabeledSample>{{{1.0}, 1}}), ProtocolError);
  std::vector<LabeledSample> wrong = {{{1.0, 2.0}, 1}};
  CHECK_THROWS_AS(zscore_apply_inplace(stats, wrong), DimensionError);
}

TEST_CASE("fit-then-apply yields mean 0 and stddev 1 on the fit set") {
  auto samples = pater::test::random_stream(21, 200, 3);
  const NormalizationStats stats = zscore_fit(samples);
  const auto normalized = zscore_apply(stats, samples);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (const LabeledSample& s : normalized) mean += s.features[j];
    mean /= static_cast<double>(normalized.size());
    double var = 0.0;
    for (const LabeledSample& s : normalized) {
      var += (s.features[j] - mean) * (s.features[j] - mean);
    }
    var /= static_cast<double>(normalized.size());
    CHECK(std::abs(mean) <= 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-9);
  }
}

TEST_CASE("fold generation: partition, balance, determinism, stratification") {
  Dataset d;
  d.name = "folds";
  d.dimension = 1;
  for (int i = 0; i < 4; ++i) {
    d.samples.push_back({{static_cast<double>(i)}, i % 2 == 0 ? 1 : -1});
  }
  const auto splits = make_folds(d, 9, 1);
  REQUIRE(splits.size() == 2);
  CHECK(splits[0].train_indices.size() == 2);
  CHECK(splits[0].test_indices.size() == 2);
  CHECK(splits[0].train_indices == splits[1].test_indices);
  CHECK(splits[0].test_indices == splits[1].train_indices);

  const auto again = make_folds(d, 9, 1);
  CHECK(splits[0].train_indices == again[0].train_indices);
  CHECK(splits[1].test_indices == again[1].test_indices);

  // 31 samples with 3 positives: every fold keeps at least one positive.
  Dataset imb;
  imb.name = "imb";
  imb.dimension = 1;
  for (int i = 0; i < 31; ++i) {
    imb.samples.push_back({{static_cast<double>(i)}, i < 3 ? 1 : -1});
  }
  for (const FoldSplit& split : make_folds(imb, 123, 10)) {
    std::size_t train_pos = 0, test_pos = 0;
    for (std::size_t idx : split.train_indices) {
      if (imb.samples[idx].label > 0) ++train_pos;
    }
    for (std::size_t idx : split.test_indices) {
      if (imb.samples[idx].label > 0) ++test_pos;
    }
    CHECK(train_pos >= 1);
    CHECK(test_pos >= 1);
    CHECK(train_pos + test_pos == 3);
    const std::size_t diff =
        split.train_indices.size() > split.test_indices.size()
            ? split.train_indices.size() - split.test_indices.size()
            : split.test_indices.size() - split.train_indices.size();
    CHECK(diff <= 1);
    // train and test partition the index range
    std::set<std::size_t> all(split.train_indices.begin(), split.train_indices.end());
    all.insert(split.test_indices.begin(), split.test_indices.end());
    CHECK(all.size() == imb.size());
  }

  Dataset single;
  single.name = "single";
  single.dimension = 1;
  single.samples = {{{1.0}, 1}, {{2.0}, 1}};
  CHECK_THROWS_AS(make_folds(single, 1, 1), ProtocolError);
}

TEST_CASE("dataset imbalance ratio is exact") {
  Dataset d;
  d.dimension = 1;
  for (int i = 0; i < 12; ++i) d.samples.push_back({{0.0}, i < 4 ? 1 : -1});
  CHECK(d.imbalance_ratio() == 0.5);
  Dataset empty_neg;
  empty_neg.dimension = 1;
  empty_neg.samples = {{{0.0}, 1}};
  CHECK_THROWS_AS(empty_neg.imbalance_ratio(), ProtocolError);
}

TEST_CASE("the shipped benchmark registry parses and covers the full table") {
  const Registry registry = load_registry(PATER_REGISTRY_PATH);
  CHECK(registry.datasets.size() == 31);
  const DatasetSpec* bcw = registry.find("breast-cancer-w");
  REQUIRE(bcw != nullptr);
  CHECK(bcw->format == "delimited");
  CHECK(bcw->expected_cases == 683);
  CHECK(bcw->expected_ratio == doctest::Approx(0.54));
  CHECK(bcw->delimited.label_map.entries.at("4") == 1);
  const DatasetSpec* australian = registry.find("statlog-australian");
  REQUIRE(australian != nullptr);
  CHECK(australian->delimited.delimiter == ' ');
  CHECK(registry.find("cod-rna")->format == "libsvm");
  CHECK(registry.find("nonexistent") == nullptr);
}

TEST_CASE("registry loading verifies expectations against the loaded file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pater_registry_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream data(dir / "tiny.svm");
    data << "+1 1:1.0\n+1 1:2.0\n-1 1:-1.0\n-1 1:-2.0\n-1 2:0.5\n";
  }
  {
    std::ofstream reg(dir / "registry.json");
    reg << R"({"root": ")" << dir.string() << R"(", "datasets": [
      {"name": "tiny", "path": "tiny.svm", "format": "libsvm",
       "expected_cases": 5, "expected_ratio": 0.67},
      {"name": "tiny-wrong-cases", "path": "tiny.svm", "format": "libsvm",
       "expected_cases": 9},
      {"name": "tiny-wrong-ratio", "path": "tiny.svm", "format": "libsvm",
       "expected_ratio": 1.5},
      {"name": "pathless"}
    ]})";
  }
  const Registry registry = load_registry((dir / "registry.json").string());
  const Dataset tiny = load_registry_dataset(registry, *registry.find("tiny"));
  CHECK(tiny.size() == 5);
  CHECK(tiny.dimension == 2);
  CHECK_THROWS_AS(load_registry_dataset(registry, *registry.find("tiny-wrong-cases")),
                  ProtocolError);
  CHECK_THROWS_AS(load_registry_dataset(registry, *registry.find("tiny-wrong-ratio")),
                  ProtocolError);
  CHECK_THROWS_AS(load_registry_dataset(registry, *registry.find("pathless")), Error);
}

TEST_CASE("synthetic generators: shape, margin, ratio, spec parsing") {
  const Dataset sep = make_separable_gaussian(5, 500, 2, 2.0);
  CHECK(sep.size() == 1000);
  CHECK(sep.count_positive() == 500);
  for (const LabeledSample& s : sep.samples) {
    if (s.label > 0) {
      CHECK(s.features[0] >= 1.0);
    } else {
      CHECK(s.features[0] <= -1.0);
    }
  }

  const Dataset imb = make_imbalanced_gaussian(6, 2000, 0.05, 3, 2.0);
  CHECK(imb.size() == 2000);
  CHECK(std::abs(imb.imbalance_ratio() - 0.05) < 0.01);
  CHECK(imb.dimension == 3);

  const auto parsed = make_synthetic("synthetic:separable:n=200:d=4:margin=1", 1);
  REQUIRE(parsed.has_value());
  CHECK(parsed->size() == 200);
  CHECK(parsed->dimension == 4);

  CHECK_FALSE(make_synthetic("not-a-spec", 1).has_value());
  CHECK_THROWS_AS(make_synthetic("synthetic:weird", 1), UsageError);
  CHECK_THROWS_AS(make_synthetic("synthetic:separable:margin", 1), UsageError);

  // Same spec and seed give the identical dataset.
  const auto a = make_synthetic("synthetic:imbalanced:ratio=0.1", 7);
  const auto b = make_synthetic("synthetic:imbalanced:ratio=0.1", 7);
  REQUIRE(a->size() == b->size());
  for (std::size_t i = 0; i < a->size(); ++i) {
    CHECK(a->samples[i].features == b->samples[i].features);
  }
}
