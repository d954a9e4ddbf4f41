#include "pater/metrics.hpp"

namespace pater {

namespace {

void require_both_classes(const ConfusionMatrix& cm, const char* what) {
  if (cm.negatives() == 0 || cm.positives() == 0) {
    throw ProtocolError(std::string(what) +
                        ": per-class rates undefined, a class has no samples");
  }
}

}  // namespace

double accuracy_percent(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ProtocolError("accuracy undefined on an empty confusion matrix");
  return 100.0 * static_cast<double>(cm.tn + cm.tp) / static_cast<double>(cm.total());
}

double balanced_accuracy(const ConfusionMatrix& cm) {
  return weighted_accuracy(cm, ClassWeights{0.5, 0.5});
}

double weighted_accuracy(const ConfusionMatrix& cm, ClassWeights alpha) {
  require_both_classes(cm, "weighted_accuracy");
  return alpha.neg * static_cast<double>(cm.tn) / static_cast<double>(cm.negatives()) +
         alpha.pos * static_cast<double>(cm.tp) / static_cast<double>(cm.positives());
}

double wter(const ConfusionMatrix& cm, ClassWeights alpha) {
  require_both_classes(cm, "wter");
  return alpha.neg * static_cast<double>(cm.fp) / static_cast<double>(cm.negatives()) +
         alpha.pos * static_cast<double>(cm.fn) / static_cast<double>(cm.positives());
}

}  // namespace pater
