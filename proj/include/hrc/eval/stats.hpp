#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hrc/core/names.hpp"

namespace hrc::eval {

enum class WilcoxonMethod : std::uint8_t { Exact, NormalApprox };

std::string_view to_string(WilcoxonMethod m) noexcept;

struct WilcoxonResult {
  double w_plus = 0.0;
  int n_effective = 0;
  std::optional<double> p_two_sided;  ///< nullopt when every difference is zero
  WilcoxonMethod method = WilcoxonMethod::Exact;

  bool defined() const noexcept { return p_two_sided.has_value(); }
};

inline constexpr int kWilcoxonExactLimit = 20;

/// Signed-rank test on d = a - b. Zero differences are dropped, tied |d| get mid-ranks.
/// Exact null distribution up to kWilcoxonExactLimit non-zero pairs, otherwise the normal
/// approximation with tie-corrected variance and a 0.5 continuity correction.
/// Throws ValidationError on empty input or non-finite values.
WilcoxonResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs);

struct CronbachResult {
  std::optional<double> alpha;  ///< nullopt when the total-score variance is zero
  std::vector<std::optional<double>> alpha_if_deleted;
};

/// Rows are participants, columns items. Needs >= 2 of each and a rectangular matrix.
CronbachResult cronbach_alpha(const std::vector<std::vector<double>>& ratings);

enum class LikertItem : std::uint8_t { Fluency = 0, EaseOfUse, Trust, Comfort, Capability };

inline constexpr std::array<LikertItem, 5> kAllLikertItems{
    LikertItem::Fluency, LikertItem::EaseOfUse, LikertItem::Trust, LikertItem::Comfort,
    LikertItem::Capability};

std::string_view to_string(LikertItem item) noexcept;
std::optional<LikertItem> parse_likert_item(std::string_view s) noexcept;

struct LikertResponse {
  std::string participant;
  LikertItem item = LikertItem::Fluency;
  int rating = 4;
  HandoverMode mode = HandoverMode::Vision;
};

/// Comfort is asked as discomfort and reverse-coded: 8 - r. Throws ValidationError
/// outside 1..7.
int scored_rating(LikertItem item, int rating);

struct LikertMatrix {
  std::vector<std::pair<std::string, HandoverMode>> rows;  ///< first-appearance order
  std::vector<LikertItem> items;                            ///< enum order, present items
  std::vector<std::vector<double>> scores;
};

/// Throws ValidationError on a duplicate (participant, item, mode), an out-of-range rating
/// or a missing cell.
LikertMatrix score_likert(const std::vector<LikertResponse>& responses);

/// Header participant,mode,item,rating.
std::vector<LikertResponse> read_likert_csv(std::istream& in);
void write_likert_csv(std::ostream& out, const std::vector<LikertResponse>& responses);

/// p^n. Throws ValidationError unless p in [0, 1] and n >= 1.
double repetition_decay(double p_cycle, int n);
/// p^(1/n), the per-cycle rate needed for a full-task rate.
double required_cycle_rate(double p_full, int n);

}  // namespace hrc::eval
