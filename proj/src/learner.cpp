#include "pater/learner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace pater {

namespace {

const std::array<Variant, 6> kAllVariants = {
    Variant::kPerceptron, Variant::kPa,      Variant::kPaterI,
    Variant::kPaterII,    Variant::kWPaterI, Variant::kWPaterII,
};

void check_sample(const LabeledSample& sample, std::size_t dim, const char* context) {
  check_dimension(dim, sample.features.size(), context);
  check_label(sample.label);
  if (!all_finite(sample.features)) {
    throw Error(std::string(context) + ": sample contains non-finite features");
  }
}

}  // namespace

bool is_weighted(Variant v) { return v == Variant::kWPaterI || v == Variant::kWPaterII; }

bool uses_aggregates(Variant v) {
  return v != Variant::kPerceptron && v != Variant::kPa;
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kPerceptron: return "pe";
    case Variant::kPa: return "pa";
    case Variant::kPaterI: return "pater1";
    case Variant::kPaterII: return "pater2";
    case Variant::kWPaterI: return "wpater1";
    case Variant::kWPaterII: return "wpater2";
  }
  return "unknown";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "pe" || lower == "perceptron") return Variant::kPerceptron;
  if (lower == "pa") return Variant::kPa;
  if (lower == "pater1" || lower == "pater-i" || lower == "pater-1") return Variant::kPaterI;
  if (lower == "pater2" || lower == "pater-ii" || lower == "pater-2") return Variant::kPaterII;
  if (lower == "wpater1" || lower == "wpater-i" || lower == "wpater-1") return Variant::kWPaterI;
  if (lower == "wpater2" || lower == "wpater-ii" || lower == "wpater-2") return Variant::kWPaterII;
  return std::nullopt;
}

std::span<const Variant> all_variants() { return kAllVariants; }

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

double hinge_loss_pa(std::span<const double> w, const LabeledSample& sample) {
  check_dimension(w.size(), sample.features.size(), "hinge_loss_pa");
  check_label(sample.label);
  const double margin = static_cast<double>(sample.label) * dot(w, sample.features);
  return std::max(0.0, 1.0 - margin);
}

double hinge_loss_fp(std::span<const double> w, std::span<const double> x) {
  check_dimension(w.size(), x.size(), "hinge_loss_fp");
  return std::max(0.0, 1.0 + dot(w, x));
}

double hinge_loss_fn(std::span<const double> w, std::span<const double> x) {
  check_dimension(w.size(), x.size(), "hinge_loss_fn");
  return std::max(0.0, 1.0 - dot(w, x));
}

double ter_loss(std::span<const double> w, std::span<const LabeledSample> samples,
                ClassWeights alpha) {
  double sum_fp = 0.0, sum_fn = 0.0;
  std::size_t n_neg = 0, n_pos = 0;
  for (const LabeledSample& s : samples) {
    check_label(s.label);
    if (s.label < 0) {
      sum_fp += hinge_loss_fp(w, s.features);
      ++n_neg;
    } else {
      sum_fn += hinge_loss_fn(w, s.features);
      ++n_pos;
    }
  }
  double loss = 0.0;
  if (n_neg > 0) loss += alpha.neg / static_cast<double>(n_neg) * sum_fp;
  if (n_pos > 0) loss += alpha.pos / static_cast<double>(n_pos) * sum_fn;
  return loss;
}

int predict_label(std::span<const double> w, std::span<const double> x) {
  check_dimension(w.size(), x.size(), "predict");
  return dot(w, x) >= 0.0 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// PATER building blocks
// ---------------------------------------------------------------------------

void aggregate_step(ClassAggregates& agg, const LabeledSample& sample,
                    std::span<const double> w_pre) {
  check_sample(sample, agg.dimension(), "aggregate_step");
  check_dimension(agg.dimension(), w_pre.size(), "aggregate_step weights");
  const FeatureVector& x = sample.features;
  if (sample.label < 0) {
    const double n_prev = static_cast<double>(agg.n_neg);
    ++agg.n_neg;
    const double n_new = static_cast<double>(agg.n_neg);
    const double keep = n_prev / n_new;
    const double take = 1.0 / n_new;
    for (std::size_t i = 0; i < x.size(); ++i) {
      agg.z_neg[i] = keep * agg.z_neg[i] + take * x[i];
    }
    agg.k_neg = keep * agg.k_neg + take * (1.0 + dot(w_pre, x));
  } else {
    const double n_prev = static_cast<double>(agg.n_pos);
    ++agg.n_pos;
    const double n_new = static_cast<double>(agg.n_pos);
    const double keep = n_prev / n_new;
    const double take = 1.0 / n_new;
    for (std::size_t i = 0; i < x.size(); ++i) {
      agg.z_pos[i] = keep * agg.z_pos[i] + take * x[i];
    }
    agg.k_pos = keep * agg.k_pos + take * (1.0 - dot(w_pre, x));
  }
}

FeatureVector combined_direction(const ClassAggregates& agg, ClassWeights alpha) {
  FeatureVector z(agg.dimension());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = alpha.pos * agg.z_pos[i] - alpha.neg * agg.z_neg[i];
  }
  return z;
}

TauResult pater_tau(Variant v, const ClassAggregates& agg, ClassWeights alpha,
                    std::span<const double> w_pre, const LabeledSample& sample,
                    std::span<const double> direction) {
  if (!uses_aggregates(v)) {
    throw Error("pater_tau: variant has no aggregate-based step size");
  }
  check_dimension(agg.dimension(), direction.size(), "pater_tau direction");
  TauResult result;
  double numerator;
  if (v == Variant::kPaterI || v == Variant::kWPaterI) {
    // Only the term selected by lambda survives; that class's count is >= 1
    // because the aggregates were advanced with this sample.
    const double margin = dot(w_pre, sample.features);
    if (sample.label < 0) {
      numerator = alpha.neg / static_cast<double>(agg.n_neg) * (1.0 + margin);
    } else {
      numerator = alpha.pos / static_cast<double>(agg.n_pos) * (1.0 - margin);
    }
  } else {
    numerator = alpha.neg * agg.k_neg + alpha.pos * agg.k_pos;
  }
  result.loss = numerator;
  const double z_sq = squared_norm(direction);
  if (z_sq < kZeroDirectionEps) {
    result.skipped = true;
    result.tau = 0.0;
    return result;
  }
  result.tau = numerator / z_sq;
  return result;
}

// ---------------------------------------------------------------------------
// OnlineLearner
// ---------------------------------------------------------------------------

OnlineLearner::OnlineLearner(Variant variant, std::size_t dimension, ClassWeights alpha,
                             Options options)
    : variant_(variant),
      dimension_(dimension),
      alpha_(alpha),
      options_(options),
      weights_(dimension, 0.0),
      aggregates_(dimension) {
  if (!(alpha.neg > 0.0) || !(alpha.pos > 0.0)) {
    throw Error("class weights must be positive");
  }
  if (!is_weighted(variant) && (alpha.neg != 1.0 || alpha.pos != 1.0)) {
    throw Error(std::string(variant_name(variant)) +
                " does not take class weights; use wpater1/wpater2");
  }
}

int OnlineLearner::predict(std::span<const double> x) const {
  check_dimension(dimension_, x.size(), "predict");
  return dot(weights_, x) >= 0.0 ? 1 : -1;
}

StepResult OnlineLearner::step(const LabeledSample& sample) {
  check_sample(sample, dimension_, "step");
  StepResult result;
  result.predicted_label = predict(sample.features);
  switch (variant_) {
    case Variant::kPerceptron:
      result.record = step_perceptron(sample, result.predicted_label);
      break;
    case Variant::kPa:
      result.record = step_pa(sample);
      break;
    default:
      result.record = step_pater(sample);
      break;
  }
  return result;
}

void OnlineLearner::apply_update(double tau, std::span<const double> direction) {
  if (!std::isfinite(tau)) {
    throw NumericalFault("non-finite step size tau at step " +
                         std::to_string(step_count_ + 1));
  }
  check_dimension(dimension_, direction.size(), "apply_update");
  if (tau != 0.0) {
    axpy(tau, direction, weights_);
  }
  ++step_count_;
}

UpdateRecord OnlineLearner::step_perceptron(const LabeledSample& sample, int predicted) {
  UpdateRecord rec;
  if (predicted != sample.label) {
    rec.loss = 1.0;
    axpy(static_cast<double>(sample.label), sample.features, weights_);
    rec.weight_delta_norm = norm(sample.features);
  } else {
    rec.skipped = true;
  }
  ++step_count_;
  return rec;
}

UpdateRecord OnlineLearner::step_pa(const LabeledSample& sample) {
  UpdateRecord rec;
  rec.loss = hinge_loss_pa(weights_, sample);
  const double x_sq = squared_norm(sample.features);
  if (rec.loss == 0.0 || x_sq == 0.0) {
    // Zero loss is the passive case; zero norm with positive loss is a
    // degenerate input that cannot move the margin.
    rec.skipped = true;
  } else {
    rec.tau = rec.loss / x_sq;
    axpy(rec.tau * static_cast<double>(sample.label), sample.features, weights_);
    rec.weight_delta_norm = rec.tau * std::sqrt(x_sq);
  }
  ++step_count_;
  return rec;
}

UpdateRecord OnlineLearner::step_pater(const LabeledSample& sample) {
  aggregate_step(aggregates_, sample, weights_);
  const FeatureVector direction = combined_direction(aggregates_, alpha_);
  const TauResult tau = pater_tau(variant_, aggregates_, alpha_, weights_, sample, direction);
  UpdateRecord rec;
  rec.loss = tau.loss;
  double applied = tau.tau;
  if (options_.clip_tau && applied < 0.0) applied = 0.0;
  rec.tau = applied;
  apply_update(applied, direction);
  if (tau.skipped || applied == 0.0) {
    rec.skipped = true;
  } else {
    rec.weight_delta_norm = std::abs(applied) * norm(direction);
  }
  return rec;
}

}  // namespace pater
