#include <gtest/gtest.h>

#include <cmath>

#include "hrc/core/errors.hpp"
#include "hrc/engine/config.hpp"
#include "hrc/eval/calibration.hpp"

using namespace hrc;
using namespace hrc::eval;

namespace {

// Enumerates every detection pattern over `window` frames.
DetectionWait brute_wait(double p, int required, int window) {
  double prob = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << window); ++mask) {
    double w = 1.0;
    int run = 0;
    int done_at = -1;
    for (int f = 0; f < window; ++f) {
      const bool hit = (mask >> f) & 1u;
      w *= hit ? p : 1.0 - p;
      run = hit ? run + 1 : 0;
      if (run >= required && done_at < 0) {
        done_at = f;
      }
    }
    if (done_at >= 0) {
      prob += w;
      m1 += w * done_at;
      m2 += w * done_at * done_at;
    }
  }
  DetectionWait out;
  out.probability = prob;
  if (prob > 0.0) {
    out.mean_frames = m1 / prob;
    out.sd_frames = std::sqrt(std::max(0.0, m2 / prob - out.mean_frames * out.mean_frames));
  }
  return out;
}

}  // namespace

TEST(DetectionWait, MatchesEnumeration) {
  for (int window : {1, 2, 5, 9, 14}) {
    for (int required : {1, 2, 3}) {
      for (double p : {0.0, 0.17, 0.2376, 0.5, 0.9, 1.0}) {
        const auto dp = detection_wait(p, required, window);
        const auto bf = brute_wait(p, required, window);
        EXPECT_NEAR(dp.probability, bf.probability, 1e-12);
        EXPECT_NEAR(dp.mean_frames, bf.mean_frames, 1e-9);
        EXPECT_NEAR(dp.sd_frames, bf.sd_frames, 1e-6);
        EXPECT_EQ(p_consecutive_within(p, required, window), dp.probability);
      }
    }
  }
}

TEST(DetectionWait, CertainDetectionCompletesOnSecondFrame) {
  const auto w = detection_wait(1.0, 2, 40);
  EXPECT_EQ(w.probability, 1.0);
  EXPECT_EQ(w.mean_frames, 1.0);
  EXPECT_EQ(w.sd_frames, 0.0);
  EXPECT_THROW(detection_wait(1.5, 2, 40), ValidationError);
  EXPECT_THROW(detection_wait(0.5, 0, 40), ValidationError);
}

TEST(SolveRecall, CalibratedHandoverRecall) {
  const double r = solve_recall(0.851, 2, 40);
  EXPECT_NEAR(r, engine::kCalibratedHandoverGraspRecall, 5e-4);
  EXPECT_NEAR(p_consecutive_within(r, 2, 40), 0.851, 1e-9);
  EXPECT_NEAR(p_consecutive_within(engine::kCalibratedHandoverGraspRecall, 2, 40), 0.851, 1e-3);
  EXPECT_THROW(solve_recall(1.5, 2, 40), ValidationError);
}

TEST(AnalyticCycleRate, TableCalibration) {
  const double c = analytic_cycle_rate(0.96, 0.851, 0.68);
  EXPECT_NEAR(c, 0.96 * (0.851 + 0.149 * 0.68 * 0.851), 1e-15);
  EXPECT_NEAR(c, 0.90, 0.001);
  EXPECT_NEAR(std::pow(c, 4), 0.656, 0.003);
  EXPECT_EQ(analytic_cycle_rate(1.0, 1.0, 0.0), 1.0);
  EXPECT_THROW(analytic_cycle_rate(0.96, 1.2, 0.5), ValidationError);
}

TEST(VoiceCalibration, MeanGapIsHalfASecond) {
  const engine::EpisodeConfig cfg;
  const auto wait = detection_wait(engine::kCalibratedHandoverGraspRecall, 2, 40);
  const double vision_mean = wait.mean_frames / cfg.recognizer.frame_rate;
  const auto& v = cfg.human.voice_delay;
  const double voice_mean = v.median * std::exp(0.5 * v.dispersion * v.dispersion);
  EXPECT_NEAR(voice_mean - vision_mean, 0.5, 0.02);
  EXPECT_NEAR(lognormal_median_for_mean(voice_mean, v.dispersion), v.median, 1e-12);
  EXPECT_THROW(lognormal_median_for_mean(0.0, 0.1), ValidationError);
}
