#pragma once

#include <span>

namespace pumpwatch::eval {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  PRF metrics() const;
};

Counts count_confusion(std::span<const char> predicted, std::span<const char> actual);

/// Chunk-level precision/recall/F1 with the zero-denominator conventions
/// p = 0 when nothing fired, r = 0 when nothing was positive, f1 = 0 when
/// p + r = 0. Throws on length mismatch.
PRF precision_recall_f1(std::span<const char> predicted, std::span<const char> actual);

}  // namespace pumpwatch::eval
