#include "hrc/eval/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "hrc/core/errors.hpp"

namespace hrc::eval {

std::string_view to_string(WilcoxonMethod m) noexcept {
  return m == WilcoxonMethod::Exact ? "exact" : "normal_approx";
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.empty()) {
    throw ValidationError("wilcoxon needs at least one pair");
  }
  std::vector<double> d;
  for (const auto& [a, b] : pairs) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw ValidationError("wilcoxon inputs must be finite");
    }
    if (a != b) {
      d.push_back(a - b);
    }
  }
  WilcoxonResult out;
  const int n = static_cast<int>(d.size());
  out.n_effective = n;
  if (n == 0) {
    return out;
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return std::abs(d[x]) < std::abs(d[y]); });

  // Doubled mid-ranks are integers: positions i..j share (i + j) with 1-based positions.
  std::vector<int> rank2(static_cast<std::size_t>(n));
  double tie_term = 0.0;
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) {
      ++j;
    }
    for (int k = i; k <= j; ++k) {
      rank2[order[k]] = (i + 1) + (j + 1);
    }
    const double t = j - i + 1;
    tie_term += t * t * t - t;
    i = j + 1;
  }

  long w2 = 0;
  for (int i = 0; i < n; ++i) {
    if (d[i] > 0) {
      w2 += rank2[i];
    }
  }
  out.w_plus = static_cast<double>(w2) / 2.0;

  double p = 1.0;
  if (n <= kWilcoxonExactLimit) {
    out.method = WilcoxonMethod::Exact;
    const long max_sum = static_cast<long>(n) * (n + 1);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(max_sum + 1), 0);
    count[0] = 1;
    long reach = 0;
    for (int r : rank2) {
      for (long s = reach; s >= 0; --s) {
        count[s + r] += count[s];
      }
      reach += r;
    }
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    for (long s = 0; s <= max_sum; ++s) {
      lower += s <= w2 ? count[s] : 0;
      upper += s >= w2 ? count[s] : 0;
    }
    const double total = std::ldexp(1.0, n);
    p = 2.0 * static_cast<double>(std::min(lower, upper)) / total;
  } else {
    out.method = WilcoxonMethod::NormalApprox;
    const double nn = n;
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = std::max(0.0, std::abs(out.w_plus - mean) - 0.5) / std::sqrt(var);
    p = std::erfc(z / std::sqrt(2.0));
  }
  out.p_two_sided = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
  return out;
}

namespace {

std::optional<double> alpha_from(double k, double trace, double total) {
  if (!(total > 1e-12 * trace) || !(total > 0.0)) {
    return std::nullopt;
  }
  return k / (k - 1.0) * (1.0 - trace / total);
}

}  // namespace

CronbachResult cronbach_alpha(const std::vector<std::vector<double>>& ratings) {
  const std::size_t n = ratings.size();
  if (n < 2) {
    throw ValidationError("cronbach_alpha needs at least 2 participants");
  }
  const std::size_t k = ratings.front().size();
  if (k < 2) {
    throw ValidationError("cronbach_alpha needs at least 2 items");
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) {
    if (ratings[i].size() != k) {
      throw ValidationError("cronbach_alpha needs a rectangular matrix (no missing entries)");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(ratings[i][j])) {
        throw ValidationError("cronbach_alpha ratings must be finite");
      }
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ratings[i][j];
    }
  }
  const Eigen::VectorXd item_var =
      (x.rowwise() - x.colwise().mean()).colwise().squaredNorm() / static_cast<double>(n - 1);
  // Total-score variance straight from row totals: deriving it from the full covariance sum
  // cancels badly when the remaining items nearly offset each other.
  auto total_var = [&](const Eigen::VectorXd& totals) {
    return (totals.array() - totals.mean()).square().sum() / static_cast<double>(n - 1);
  };
  const Eigen::VectorXd totals = x.rowwise().sum();

  CronbachResult out;
  out.alpha = alpha_from(static_cast<double>(k), item_var.sum(), total_var(totals));
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
    if (k < 3) {
      out.alpha_if_deleted.emplace_back();
      continue;
    }
    out.alpha_if_deleted.push_back(alpha_from(static_cast<double>(k - 1),
                                              item_var.sum() - item_var(j),
                                              total_var(totals - x.col(j))));
  }
  return out;
}

std::string_view to_string(LikertItem item) noexcept {
  switch (item) {
    case LikertItem::Fluency:
      return "fluency";
    case LikertItem::EaseOfUse:
      return "ease_of_use";
    case LikertItem::Trust:
      return "trust";
    case LikertItem::Comfort:
      return "comfort";
    case LikertItem::Capability:
      return "capability";
  }
  return "?";
}

std::optional<LikertItem> parse_likert_item(std::string_view s) noexcept {
  for (LikertItem i : kAllLikertItems) {
    if (to_string(i) == s) {
      return i;
    }
  }
  return std::nullopt;
}

int scored_rating(LikertItem item, int rating) {
  if (rating < 1 || rating > 7) {
    throw ValidationError("Likert rating " + std::to_string(rating) + " outside 1..7");
  }
  return item == LikertItem::Comfort ? 8 - rating : rating;
}

LikertMatrix score_likert(const std::vector<LikertResponse>& responses) {
  using Key = std::pair<std::string, HandoverMode>;
  LikertMatrix m;
  std::map<Key, std::size_t> row_of;
  std::array<bool, kAllLikertItems.size()> seen_item{};
  std::map<std::pair<Key, LikertItem>, int> cells;
  for (const auto& r : responses) {
    const int score = scored_rating(r.item, r.rating);
    const Key key{r.participant, r.mode};
    if (!cells.emplace(std::pair{key, r.item}, score).second) {
      throw ValidationError("duplicate Likert response for participant '" + r.participant +
                            "', item '" + std::string(to_string(r.item)) + "', mode '" +
                            std::string(hrc::to_string(r.mode)) + "'");
    }
    if (row_of.emplace(key, m.rows.size()).second) {
      m.rows.push_back(key);
    }
    seen_item[static_cast<std::size_t>(r.item)] = true;
  }
  for (LikertItem i : kAllLikertItems) {
    if (seen_item[static_cast<std::size_t>(i)]) {
      m.items.push_back(i);
    }
  }
  for (const auto& key : m.rows) {
    std::vector<double> row;
    for (LikertItem i : m.items) {
      const auto it = cells.find({key, i});
      if (it == cells.end()) {
        throw ValidationError("missing Likert response for participant '" + key.first +
                              "', item '" + std::string(to_string(i)) + "'");
      }
      row.push_back(it->second);
    }
    m.scores.push_back(std::move(row));
  }
  return m;
}

std::vector<LikertResponse> read_likert_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("Likert CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "participant,mode,item,rating") {
    throw ValidationError("Likert CSV header must be participant,mode,item,rating");
  }
  std::vector<LikertResponse> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      f.push_back(cell);
    }
    const std::string where = "Likert CSV line " + std::to_string(line_no);
    if (f.size() != 4) {
      throw ValidationError(where + ": expected 4 fields");
    }
    LikertResponse r;
    r.participant = f[0];
    const auto mode = parse_mode(f[1]);
    const auto item = parse_likert_item(f[2]);
    if (!mode || !item) {
      throw ValidationError(where + ": unknown mode or item");
    }
    r.mode = *mode;
    r.item = *item;
    std::size_t used = 0;
    try {
      r.rating = std::stoi(f[3], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f[3].size() || f[3].empty()) {
      throw ValidationError(where + ": rating must be an integer");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_likert_csv(std::ostream& out, const std::vector<LikertResponse>& responses) {
  out << "participant,mode,item,rating\n";
  for (const auto& r : responses) {
    out << r.participant << ',' << hrc::to_string(r.mode) << ',' << to_string(r.item) << ','
        << r.rating << '\n';
  }
}

namespace {

void check_probability(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("probability must be in [0, 1]");
  }
  if (n < 1) {
    throw ValidationError("repetition count must be >= 1");
  }
}

}  // namespace

double repetition_decay(double p_cycle, int n) {
  check_probability(p_cycle, n);
  return std::pow(p_cycle, n);
}

double required_cycle_rate(double p_full, int n) {
  check_probability(p_full, n);
  return std::pow(p_full, 1.0 / n);
}

}  // namespace hrc::eval
