#pragma once

#include <optional>

namespace hrc::eval {

/// Probability that `required` consecutive detections occur within `window` frames when
/// each frame is detected independently with probability `recall`.
double p_consecutive_within(double recall, int required, int window);

/// Mean and sd of the frame offset (0-based from the first frame) of the completing
/// detection, conditional on it happening within the window.
struct DetectionWait {
  double probability = 0.0;
  double mean_frames = 0.0;
  double sd_frames = 0.0;
};
DetectionWait detection_wait(double recall, int required, int window);

/// Per-frame recall giving `target` = p_consecutive_within(recall, required, window).
/// Throws ValidationError if target is not reachable.
double solve_recall(double target, int required, int window);

/// g * [h + (1 - h) * p_retry * h]: one grasp, one handover, at most one retry.
double analytic_cycle_rate(double grasp, double handover, double p_retry);

/// Median of a log-normal with the given dispersion whose mean is `mean`.
double lognormal_median_for_mean(double mean, double dispersion);

}  // namespace hrc::eval
