#include "hrc/eval/calibration.hpp"

#include <cmath>
#include <vector>

#include "hrc/core/errors.hpp"

namespace hrc::eval {
namespace {

void check(double recall, int required, int window) {
  if (!(recall >= 0.0 && recall <= 1.0)) {
    throw ValidationError("recall must be in [0, 1]");
  }
  if (required < 1 || window < 1) {
    throw ValidationError("required and window must be >= 1");
  }
}

}  // namespace

DetectionWait detection_wait(double recall, int required, int window) {
  check(recall, required, window);
  // state[c] = P(no completion yet and the current run of detections has length c).
  std::vector<double> state(static_cast<std::size_t>(required), 0.0);
  state[0] = 1.0;
  DetectionWait out;
  double m1 = 0.0;
  double m2 = 0.0;
  for (int frame = 0; frame < window; ++frame) {
    std::vector<double> next(state.size(), 0.0);
    double done = 0.0;
    for (int c = 0; c < required; ++c) {
      next[0] += state[c] * (1.0 - recall);
      if (c + 1 == required) {
        done += state[c] * recall;
      } else {
        next[c + 1] += state[c] * recall;
      }
    }
    out.probability += done;
    m1 += done * frame;
    m2 += done * frame * frame;
    state = std::move(next);
  }
  if (out.probability > 0.0) {
    out.mean_frames = m1 / out.probability;
    out.sd_frames =
        std::sqrt(std::max(0.0, m2 / out.probability - out.mean_frames * out.mean_frames));
  }
  return out;
}

double p_consecutive_within(double recall, int required, int window) {
  return detection_wait(recall, required, window).probability;
}

double solve_recall(double target, int required, int window) {
  if (!(target >= 0.0 && target <= p_consecutive_within(1.0, required, window))) {
    throw ValidationError("target detection probability is not reachable");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p_consecutive_within(mid, required, window) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double analytic_cycle_rate(double grasp, double handover, double p_retry) {
  for (double p : {grasp, handover, p_retry}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("probabilities must be in [0, 1]");
    }
  }
  return grasp * (handover + (1.0 - handover) * p_retry * handover);
}

double lognormal_median_for_mean(double mean, double dispersion) {
  if (!(mean > 0.0) || !(dispersion >= 0.0)) {
    throw ValidationError("log-normal needs mean > 0 and dispersion >= 0");
  }
  return mean / std::exp(0.5 * dispersion * dispersion);
}

}  // namespace hrc::eval
