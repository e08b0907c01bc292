#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hrc/core/errors.hpp"
#include "hrc/core/rng.hpp"
#include "hrc/eval/stats.hpp"
#include "oracles.hpp"
#include "stats_checks.hpp"

using namespace hrc;
using namespace hrc::eval;

namespace {

std::vector<std::pair<double, double>> diffs(std::initializer_list<double> ds) {
  std::vector<std::pair<double, double>> out;
  for (double d : ds) {
    out.emplace_back(d, 0.0);
  }
  return out;
}

}  // namespace

TEST(Wilcoxon, Examples) {
  auto r = wilcoxon_signed_rank(diffs({1, 2, 3}));
  EXPECT_EQ(r.w_plus, 6.0);
  EXPECT_EQ(r.n_effective, 3);
  EXPECT_EQ(r.method, WilcoxonMethod::Exact);
  EXPECT_DOUBLE_EQ(*r.p_two_sided, 0.25);

  r = wilcoxon_signed_rank(diffs({1, -1}));
  EXPECT_EQ(r.w_plus, 1.5);
  EXPECT_DOUBLE_EQ(*r.p_two_sided, 1.0);

  r = wilcoxon_signed_rank(diffs({0, 0, 0}));
  EXPECT_FALSE(r.defined());
  EXPECT_EQ(r.n_effective, 0);

  r = wilcoxon_signed_rank(diffs({0, 2, -1, 3}));
  EXPECT_EQ(r.n_effective, 3);
  EXPECT_EQ(r.w_plus, 5.0);
}

TEST(Wilcoxon, RejectsBadInput) {
  EXPECT_THROW(wilcoxon_signed_rank({}), ValidationError);
  EXPECT_THROW(wilcoxon_signed_rank({{NAN, 1.0}}), ValidationError);
  EXPECT_THROW(wilcoxon_signed_rank({{INFINITY, 1.0}}), ValidationError);
}

TEST(Wilcoxon, ExactMatchesEnumerationExhaustively) {
  const auto check = oracle::check_wilcoxon_exhaustive(10);
  EXPECT_EQ(check.cases, 2 * 2 * ((1 << 11) - 2));
  EXPECT_EQ(check.mismatches, 0);
  EXPECT_LE(check.max_error, 1e-12);
}

TEST(Wilcoxon, SwappingPairsMirrorsStatistic) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 30);
    std::vector<std::pair<double, double>> pairs;
    std::vector<std::pair<double, double>> swapped;
    for (int i = 0; i < n; ++i) {
      const double a = rng.normal();
      const double b = rng.normal();
      pairs.emplace_back(a, b);
      swapped.emplace_back(b, a);
    }
    const auto r = wilcoxon_signed_rank(pairs);
    const auto s = wilcoxon_signed_rank(swapped);
    EXPECT_NEAR(s.w_plus, n * (n + 1) / 2.0 - r.w_plus, 1e-9);
    EXPECT_NEAR(*s.p_two_sided, *r.p_two_sided, 1e-12);
  }
}

// Above the exact limit the normal approximation takes over and stays close to exact-like
// behaviour: a strongly shifted sample is significant, a symmetric one is not.
TEST(Wilcoxon, NormalApproximationBranch) {
  std::vector<std::pair<double, double>> shifted;
  std::vector<std::pair<double, double>> symmetric;
  for (int i = 1; i <= 30; ++i) {
    shifted.emplace_back(i + 0.5, 0.0);
    symmetric.emplace_back(i % 2 == 0 ? i : -i, 0.0);
  }
  shifted[0].first = -1.0;
  const auto r = wilcoxon_signed_rank(shifted);
  EXPECT_EQ(r.method, WilcoxonMethod::NormalApprox);
  EXPECT_LT(*r.p_two_sided, 1e-4);
  const auto s = wilcoxon_signed_rank(symmetric);
  EXPECT_GT(*s.p_two_sided, 0.5);
  EXPECT_LE(*s.p_two_sided, 1.0);

  // n = 21 with all positive: z = (231 - 115.5 - 0.5) / sqrt(21*22*43/24).
  std::vector<std::pair<double, double>> all_pos;
  for (int i = 1; i <= 21; ++i) {
    all_pos.emplace_back(i, 0.0);
  }
  const double z = (231.0 - 115.5 - 0.5) / std::sqrt(21.0 * 22.0 * 43.0 / 24.0);
  EXPECT_NEAR(*wilcoxon_signed_rank(all_pos).p_two_sided, std::erfc(z / std::sqrt(2.0)), 1e-12);
}

TEST(Wilcoxon, ExactBranchAtLimit) {
  std::vector<std::pair<double, double>> pairs;
  for (int i = 1; i <= kWilcoxonExactLimit; ++i) {
    pairs.emplace_back(i % 3 == 0 ? -i : i, 0.0);
  }
  const auto r = wilcoxon_signed_rank(pairs);
  EXPECT_EQ(r.method, WilcoxonMethod::Exact);
  EXPECT_GT(*r.p_two_sided, 0.0);
  EXPECT_LE(*r.p_two_sided, 1.0);
}

TEST(Cronbach, Examples) {
  auto r = cronbach_alpha({{1, 1}, {3, 3}, {5, 5}, {2, 2}});
  ASSERT_TRUE(r.alpha);
  EXPECT_NEAR(*r.alpha, 1.0, 1e-12);

  r = cronbach_alpha({{1, 2}, {2, 1}});
  EXPECT_FALSE(r.alpha.has_value());
  EXPECT_EQ(r.alpha_if_deleted.size(), 2u);

  EXPECT_THROW(cronbach_alpha({{1, 2}}), ValidationError);
  EXPECT_THROW(cronbach_alpha({{1}, {2}}), ValidationError);
  EXPECT_THROW(cronbach_alpha({{1, 2}, {2}}), ValidationError);
}

TEST(Cronbach, MatchesDirectFormula) {
  const std::vector<std::vector<double>> x{{4, 5, 3, 6}, {2, 3, 3, 2}, {6, 7, 5, 6},
                                           {3, 3, 4, 2}, {5, 6, 6, 7}, {1, 2, 2, 3}};
  const auto r = cronbach_alpha(x);
  EXPECT_NEAR(*r.alpha, *oracle::cronbach_direct(x), 1e-12);
  const auto check = oracle::check_cronbach_random(1000, 5);
  EXPECT_GE(check.cases, 1000);
  EXPECT_EQ(check.mismatches, 0);
  EXPECT_LE(check.max_error, 1e-12);
}

TEST(Likert, ComfortIsReversed) {
  for (int r = 1; r <= 7; ++r) {
    EXPECT_EQ(scored_rating(LikertItem::Comfort, r), 8 - r);
    EXPECT_EQ(scored_rating(LikertItem::Fluency, r), r);
  }
  EXPECT_EQ(scored_rating(LikertItem::Comfort, 7), 1);
  EXPECT_EQ(scored_rating(LikertItem::Comfort, 4), 4);
  EXPECT_THROW(scored_rating(LikertItem::Trust, 0), ValidationError);
  EXPECT_THROW(scored_rating(LikertItem::Trust, 8), ValidationError);
}

TEST(Likert, ScoreMatrix) {
  std::vector<LikertResponse> rs;
  for (std::string p : {"p2", "p1"}) {
    for (LikertItem item : {LikertItem::Comfort, LikertItem::Fluency}) {
      rs.push_back({p, item, p == "p1" ? 7 : 2, HandoverMode::Vision});
    }
  }
  const auto m = score_likert(rs);
  ASSERT_EQ(m.rows.size(), 2u);
  EXPECT_EQ(m.rows[0].first, "p2");
  EXPECT_EQ(m.items, (std::vector<LikertItem>{LikertItem::Fluency, LikertItem::Comfort}));
  EXPECT_EQ(m.scores[1], (std::vector<double>{7, 1}));
  EXPECT_EQ(m.scores[0], (std::vector<double>{2, 6}));

  auto dup = rs;
  dup.push_back(rs.front());
  EXPECT_THROW(score_likert(dup), ValidationError);
  auto missing = rs;
  missing.pop_back();
  EXPECT_THROW(score_likert(missing), ValidationError);
}

TEST(Likert, CsvRoundTrip) {
  std::vector<LikertResponse> rs{{"a", LikertItem::Trust, 5, HandoverMode::Vision},
                                 {"a", LikertItem::Trust, 3, HandoverMode::VoiceCommand}};
  std::stringstream ss;
  write_likert_csv(ss, rs);
  EXPECT_EQ(ss.str().substr(0, 28), "participant,mode,item,rating");
  const auto back = read_likert_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].mode, HandoverMode::VoiceCommand);
  EXPECT_EQ(back[1].rating, 3);

  std::istringstream bad("participant,mode,item,rating\na,vision,trust,x\n");
  EXPECT_THROW(read_likert_csv(bad), ValidationError);
  std::istringstream unknown("participant,mode,item,rating\na,vision,joy,3\n");
  EXPECT_THROW(read_likert_csv(unknown), ValidationError);
}

TEST(RepetitionDecay, Examples) {
  EXPECT_NEAR(repetition_decay(0.9, 4), 0.6561, 1e-15);
  EXPECT_EQ(repetition_decay(1.0, 4), 1.0);
  EXPECT_NEAR(required_cycle_rate(0.9, 4), 0.9740, 0.0005);
  EXPECT_THROW(repetition_decay(1.1, 4), ValidationError);
  EXPECT_THROW(repetition_decay(0.5, 0), ValidationError);
  EXPECT_THROW(required_cycle_rate(-0.1, 4), ValidationError);
}

TEST(RepetitionDecay, InverseIsIdentity) {
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      EXPECT_NEAR(repetition_decay(required_cycle_rate(p, n), n), p, 1e-12);
    }
  }
}
