#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>

#include "hrc/core/events.hpp"
#include "hrc/core/names.hpp"
#include "hrc/core/rng.hpp"

namespace hrc::percept {

using ClassVector = std::array<double, kActionCount>;
/// Row = true action, column = predicted action.
using ConfusionMatrix = std::array<ClassVector, kActionCount>;

/// Per-frame recall and precision of the deployed recognizer, in AtomicAction order.
ClassVector reference_recall() noexcept;
ClassVector reference_precision() noexcept;

/// Duration-weighted class frequencies used to spread confusion mass.
ClassVector default_priors() noexcept;

struct OffDiagonalPolicy {
  /// Fraction of each row's error mass sent to no_assembly_action.
  double no_assembly_fraction = 0.6;
};

/// Row-stochastic matrix whose diagonal is exactly `recall`. Each row's remaining mass goes
/// `no_assembly_fraction` to no_assembly_action and the rest to the other classes in
/// proportion to `priors`. Throws ValidationError on out-of-range inputs.
ConfusionMatrix build_confusion_matrix(const ClassVector& recall, const OffDiagonalPolicy& policy,
                                       const ClassVector& priors);

/// Precision each class would show under the given true-class priors.
ClassVector precision_under_priors(const ConfusionMatrix& m, const ClassVector& priors);

/// Recall degraded linearly when the simulated frame rate differs from the training rate:
/// recall * max(0, 1 - slope * |rate - trained| / trained).
ClassVector degrade_for_frame_rate(const ClassVector& recall, double frame_rate,
                                   double trained_frame_rate, double slope);

struct RecognizerModel {
  ConfusionMatrix confusion{};
  int window_len = 16;
  int frame_rate = 10;             ///< Hz
  double no_assembly_scale = 0.5;  ///< lambda in (0, 1]
  double confidence_spread = 0.3;  ///< epsilon: mass spread over the 7 non-sampled labels

  /// Throws ValidationError.
  void validate() const;
};

struct BiasedConfidence {
  ConfidenceVector adjusted{};
  AtomicAction label = AtomicAction::NoAssemblyAction;
};

/// Scales the no_assembly_action entry by lambda; label is the argmax, lowest index on ties.
BiasedConfidence apply_confidence_bias(const ConfidenceVector& confidence, double lambda);

struct ActionPrediction {
  std::int64_t frame_index = 0;
  AtomicAction label = AtomicAction::NoAssemblyAction;
  ConfidenceVector confidence{};  ///< before bias; sums to 1
};

/// Sliding-window recognizer: frames are buffered until the window is full, then every
/// frame yields a prediction for that (most recent) frame.
class Recognizer {
public:
  explicit Recognizer(RecognizerModel model);

  const RecognizerModel& model() const noexcept { return model_; }

  /// frame_index must be exactly one past the previous call (starting at 1); otherwise
  /// throws ContractViolation.
  std::optional<ActionPrediction> tick(std::int64_t frame_index, AtomicAction true_action,
                                       Rng& rng);

private:
  RecognizerModel model_;
  std::int64_t last_frame_ = 0;
};

/// CSV with a header row of action names, then 8 rows "true_action,p0,...,p7".
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);
/// Throws ValidationError on malformed input or a non-stochastic row.
ConfusionMatrix read_confusion_csv(std::istream& in);

}  // namespace hrc::percept
