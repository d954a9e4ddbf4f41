#ifndef PATER_METRICS_HPP
#define PATER_METRICS_HPP

#include <cstddef>

#include "pater/common.hpp"
#include "pater/learner.hpp"

namespace pater {

struct ConfusionMatrix {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;

  void add(int truth, int predicted) {
    if (truth < 0) {
      (predicted < 0 ? tn : fp)++;
    } else {
      (predicted < 0 ? fn : tp)++;
    }
  }

  std::size_t negatives() const { return tn + fp; }
  std::size_t positives() const { return fn + tp; }
  std::size_t total() const { return negatives() + positives(); }
};

/// Plain accuracy in percent: 100 * (tn + tp) / total.
double accuracy_percent(const ConfusionMatrix& cm);

/// (1/2)(TN/n- + TP/n+), in [0, 1]. Requires both classes present.
double balanced_accuracy(const ConfusionMatrix& cm);

/// alpha- TN/n- + alpha+ TP/n+. balanced_accuracy is the (.5, .5) case.
double weighted_accuracy(const ConfusionMatrix& cm, ClassWeights alpha);

/// alpha- FP/n- + alpha+ FN/n+. With alpha = (.5, .5), wAcc + wTER = 1.
double wter(const ConfusionMatrix& cm, ClassWeights alpha);

}  // namespace pater

#endif  // PATER_METRICS_HPP
