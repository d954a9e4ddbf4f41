#include "pater/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

#include "pater/rng.hpp"

namespace pater {

namespace {

LabeledSample gaussian_sample(Rng& rng, std::size_t dim, double axis_value, int label) {
  LabeledSample s;
  s.label = label;
  s.features.resize(dim);
  s.features[0] = axis_value;
  for (std::size_t j = 1; j < dim; ++j) s.features[j] = rng.normal();
  return s;
}

}  // namespace

Dataset make_separable_gaussian(std::uint64_t seed, std::size_t per_class, std::size_t dim,
                                double margin, double tail, std::string name) {
  if (per_class == 0 || dim == 0) throw UsageError("separable generator: empty shape");
  if (!(tail >= 0.0)) throw UsageError("separable generator: tail must be >= 0");
  Rng rng(seed);
  Dataset dataset;
  dataset.name = std::move(name);
  dataset.dimension = dim;
  dataset.samples.reserve(2 * per_class);
  const double offset = margin / 2.0;
  for (std::size_t i = 0; i < per_class; ++i) {
    dataset.samples.push_back(
        gaussian_sample(rng, dim, -(offset + tail * std::abs(rng.normal())), -1));
  }
  for (std::size_t i = 0; i < per_class; ++i) {
    dataset.samples.push_back(
        gaussian_sample(rng, dim, offset + tail * std::abs(rng.normal()), 1));
  }
  return dataset;
}

Dataset make_imbalanced_gaussian(std::uint64_t seed, std::size_t total, double ratio,
                                 std::size_t dim, double separation, std::string name) {
  if (total < 2 || dim == 0) throw UsageError("imbalanced generator: need >= 2 samples");
  if (!(ratio > 0.0)) throw UsageError("imbalanced generator: ratio must be positive");
  std::size_t n_neg = static_cast<std::size_t>(
      std::llround(static_cast<double>(total) / (1.0 + ratio)));
  n_neg = std::min(std::max<std::size_t>(n_neg, 1), total - 1);
  const std::size_t n_pos = total - n_neg;

  Rng rng(seed);
  Dataset dataset;
  dataset.name = std::move(name);
  dataset.dimension = dim;
  dataset.samples.reserve(total);
  const double offset = separation / 2.0;
  for (std::size_t i = 0; i < n_neg; ++i) {
    dataset.samples.push_back(gaussian_sample(rng, dim, -offset + rng.normal(), -1));
  }
  for (std::size_t i = 0; i < n_pos; ++i) {
    dataset.samples.push_back(gaussian_sample(rng, dim, offset + rng.normal(), 1));
  }
  return dataset;
}

std::optional<Dataset> make_synthetic(std::string_view spec, std::uint64_t default_seed) {
  constexpr std::string_view prefix = "synthetic:";
  if (spec.substr(0, prefix.size()) != prefix) return std::nullopt;

  std::vector<std::string> parts;
  {
    std::istringstream ss{std::string(spec.substr(prefix.size()))};
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
  }
  if (parts.empty()) throw UsageError("synthetic spec '" + std::string(spec) + "' names no kind");
  const std::string kind = parts.front();

  std::map<std::string, double> kv;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::size_t eq = parts[i].find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("synthetic spec: expected key=value, got '" + parts[i] + "'");
    }
    const std::string value = parts[i].substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) {
      throw UsageError("synthetic spec: invalid value '" + value + "'");
    }
    kv[parts[i].substr(0, eq)] = v;
  }
  const std::map<std::string, std::vector<std::string>> known = {
      {"separable", {"n", "d", "margin", "tail", "seed"}},
      {"imbalanced", {"n", "d", "ratio", "sep", "seed"}},
  };
  if (auto it = known.find(kind); it != known.end()) {
    for (const auto& [key, value] : kv) {
      (void)value;
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw UsageError("synthetic spec: unknown key '" + key + "' for kind '" + kind + "'");
      }
    }
  }
  auto get = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  const std::uint64_t seed = kv.count("seed")
                                 ? static_cast<std::uint64_t>(kv.at("seed"))
                                 : mix_seed(default_seed, spec);

  if (kind == "separable") {
    const auto total = static_cast<std::size_t>(get("n", 1000));
    return make_separable_gaussian(seed, std::max<std::size_t>(total / 2, 1),
                                   static_cast<std::size_t>(get("d", 2)),
                                   get("margin", 2.0), get("tail", 1.0),
                                   std::string(spec));
  }
  if (kind == "imbalanced") {
    return make_imbalanced_gaussian(seed, static_cast<std::size_t>(get("n", 2000)),
                                    get("ratio", 0.05),
                                    static_cast<std::size_t>(get("d", 2)),
                                    get("sep", 2.0), std::string(spec));
  }
  throw UsageError("unknown synthetic kind '" + kind + "' (use separable or imbalanced)");
}

}  // namespace pater
