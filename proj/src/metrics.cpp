#include "pumpwatch/eval/metrics.hpp"

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::eval {

PRF Counts::metrics() const {
  PRF out;
  out.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  out.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  out.f1 = out.precision + out.recall > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

Counts count_confusion(std::span<const char> predicted, std::span<const char> actual) {
  if (predicted.size() != actual.size()) {
    throw Error("length mismatch: " + std::to_string(predicted.size()) + " predictions vs " +
                std::to_string(actual.size()) + " labels");
  }
  Counts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && actual[i]) c.tp += 1;
    else if (predicted[i] && !actual[i]) c.fp += 1;
    else if (!predicted[i] && actual[i]) c.fn += 1;
    else c.tn += 1;
  }
  return c;
}

PRF precision_recall_f1(std::span<const char> predicted, std::span<const char> actual) {
  return count_confusion(predicted, actual).metrics();
}

}  // namespace pumpwatch::eval
