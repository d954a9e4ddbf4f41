#ifndef PATER_LEARNER_HPP
#define PATER_LEARNER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pater/common.hpp"

namespace pater {

enum class Variant {
  kPerceptron,
  kPa,
  kPaterI,
  kPaterII,
  kWPaterI,
  kWPaterII,
};

/// True for wPATER-I / wPATER-II (the variants that accept class weights).
bool is_weighted(Variant v);

/// True for the PATER family (the variants that maintain class aggregates).
bool uses_aggregates(Variant v);

std::string_view variant_name(Variant v);

/// Resolves "pe", "pa", "pater1", "pater2", "wpater1", "wpater2" (and the
/// -i/-ii spellings). Returns nullopt for anything else.
std::optional<Variant> variant_from_name(std::string_view name);

/// All six variants in canonical order.
std::span<const Variant> all_variants();

/// Per-class loss weights alpha- / alpha+. Both must be positive.
struct ClassWeights {
  double neg = 1.0;
  double pos = 1.0;
};

/// Constant-memory recursive summaries of the stream: per-class counts,
/// per-class sample means z-, z+ and mean hinge-style losses k-, k+ under
/// the weights that were current when each sample arrived.
struct ClassAggregates {
  std::size_t n_neg = 0;
  std::size_t n_pos = 0;
  FeatureVector z_neg;
  FeatureVector z_pos;
  double k_neg = 0.0;
  double k_pos = 0.0;

  ClassAggregates() = default;
  explicit ClassAggregates(std::size_t dim) : z_neg(dim, 0.0), z_pos(dim, 0.0) {}

  std::size_t dimension() const { return z_neg.size(); }
};

/// Telemetry for one processed sample.
struct UpdateRecord {
  double tau = 0.0;
  double loss = 0.0;
  double weight_delta_norm = 0.0;
  bool skipped = false;  // true iff the weights were left unchanged
};

struct StepResult {
  int predicted_label = 0;  // prediction made before any mutation
  UpdateRecord record;
};

// ---------------------------------------------------------------------------
// Loss evaluators
// ---------------------------------------------------------------------------

/// PA hinge loss max(0, 1 - y * (w.x)).
double hinge_loss_pa(std::span<const double> w, const LabeledSample& sample);

/// False-positive hinge for a negative-class sample: max(0, 1 + w.x).
double hinge_loss_fp(std::span<const double> w, std::span<const double> x);

/// False-negative hinge for a positive-class sample: max(0, 1 - w.x).
double hinge_loss_fn(std::span<const double> w, std::span<const double> x);

/// Weighted TER hinge loss over a sample collection:
/// (alpha-/n-) * sum fp-hinge + (alpha+/n+) * sum fn-hinge.
/// A class absent from the collection contributes 0; an empty collection
/// evaluates to 0.
double ter_loss(std::span<const double> w, std::span<const LabeledSample> samples,
                ClassWeights alpha = {});

/// Sign prediction with the tie at w.x == 0 resolving to +1.
int predict_label(std::span<const double> w, std::span<const double> x);

// ---------------------------------------------------------------------------
// PATER building blocks
// ---------------------------------------------------------------------------

/// Advances n, z, k for one sample. w_pre must be the weight vector from
/// before this step's update; the k recursions are defined against it.
/// The class not matching the sample's label is left untouched (the 0/0
/// factors of the recursions are taken as 0).
void aggregate_step(ClassAggregates& agg, const LabeledSample& sample,
                    std::span<const double> w_pre);

/// Update direction z_t = alpha+ * z+ - alpha- * z-.
FeatureVector combined_direction(const ClassAggregates& agg, ClassWeights alpha);

/// ||z_t||^2 below this skips the weight update (no separating direction).
inline constexpr double kZeroDirectionEps = 1e-12;

struct TauResult {
  double tau = 0.0;
  double loss = 0.0;   // the linear coefficient that drives tau
  bool skipped = false;
};

/// Step size for an already-advanced aggregate state.
///   PATER-I:  ((alpha- lam-/n-)(1 + w.x) + (alpha+ lam+/n+)(1 - w.x)) / ||z||^2
///   PATER-II: (alpha- k- + alpha+ k+) / ||z||^2
/// tau may be negative; callers decide whether to clamp. Skips (tau = 0)
/// when ||z||^2 < kZeroDirectionEps.
TauResult pater_tau(Variant v, const ClassAggregates& agg, ClassWeights alpha,
                    std::span<const double> w_pre, const LabeledSample& sample,
                    std::span<const double> direction);

// ---------------------------------------------------------------------------
// Online learner
// ---------------------------------------------------------------------------

struct LearnerOptions {
  bool clip_tau = false;  // clamp tau at 0 (off by default; ablation only)
};

/// Single-threaded streaming linear classifier. One instance per stream;
/// independent instances may run concurrently.
class OnlineLearner {
 public:
  using Options = LearnerOptions;

  /// Unweighted variants require alpha == (1, 1).
  OnlineLearner(Variant variant, std::size_t dimension, ClassWeights alpha = ClassWeights(),
                Options options = Options());

  /// Prediction with the current weights; input dimension is checked.
  int predict(std::span<const double> x) const;

  /// Records the prequential prediction, then dispatches to the variant's
  /// update rule. Throws NumericalFault if the step size goes non-finite.
  StepResult step(const LabeledSample& sample);

  /// w += tau * direction and advances the step counter. Exposed so the
  /// update can be driven externally against a precomputed direction.
  void apply_update(double tau, std::span<const double> direction);

  const FeatureVector& weights() const { return weights_; }
  const ClassAggregates& aggregates() const { return aggregates_; }
  ClassWeights class_weights() const { return alpha_; }
  Variant variant() const { return variant_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t step_count() const { return step_count_; }

 private:
  UpdateRecord step_perceptron(const LabeledSample& sample, int predicted);
  UpdateRecord step_pa(const LabeledSample& sample);
  UpdateRecord step_pater(const LabeledSample& sample);

  Variant variant_;
  std::size_t dimension_;
  ClassWeights alpha_;
  Options options_;
  FeatureVector weights_;
  ClassAggregates aggregates_;
  std::size_t step_count_ = 0;
};

}  // namespace pater

#endif  // PATER_LEARNER_HPP
