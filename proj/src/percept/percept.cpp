#include "hrc/percept/percept.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hrc/core/errors.hpp"

namespace hrc::percept {
namespace {

constexpr std::size_t kNoAssembly = index_of(AtomicAction::NoAssemblyAction);
constexpr double kRowTolerance = 1e-9;

std::string action_name(std::size_t i) { return std::string(to_string(kAllActions[i])); }

void check_row_stochastic(const ClassVector& row, std::size_t i) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) {
      throw ValidationError("confusion row '" + action_name(i) + "' has a negative entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowTolerance) {
    throw ValidationError("confusion row '" + action_name(i) + "' does not sum to 1");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    out.push_back(field);
  }
  return out;
}

}  // namespace

ClassVector reference_recall() noexcept {
  return {0.80, 0.13, 0.80, 0.52, 0.61, 0.37, 0.56, 0.17};
}

ClassVector reference_precision() noexcept {
  return {0.72, 0.40, 0.79, 0.64, 0.79, 0.48, 0.66, 0.27};
}

ClassVector default_priors() noexcept {
  return {0.25, 0.06, 0.05, 0.05, 0.33, 0.18, 0.07, 0.01};
}

ConfusionMatrix build_confusion_matrix(const ClassVector& recall, const OffDiagonalPolicy& policy,
                                       const ClassVector& priors) {
  for (std::size_t i = 0; i < kActionCount; ++i) {
    if (!(recall[i] >= 0.0 && recall[i] <= 1.0)) {
      throw ValidationError("recall for '" + action_name(i) + "' must be in [0, 1]");
    }
    if (!(priors[i] >= 0.0)) {
      throw ValidationError("prior for '" + action_name(i) + "' must be >= 0");
    }
  }
  if (std::abs(std::accumulate(priors.begin(), priors.end(), 0.0) - 1.0) > 1e-6) {
    throw ValidationError("priors must sum to 1");
  }
  if (!(policy.no_assembly_fraction >= 0.0 && policy.no_assembly_fraction <= 1.0)) {
    throw ValidationError("no_assembly_fraction must be in [0, 1]");
  }

  ConfusionMatrix m{};
  for (std::size_t i = 0; i < kActionCount; ++i) {
    ClassVector& row = m[i];
    row[i] = recall[i];
    const double error_mass = 1.0 - recall[i];

    double to_no_assembly = 0.0;
    if (i != kNoAssembly) {
      to_no_assembly = policy.no_assembly_fraction * error_mass;
      row[kNoAssembly] += to_no_assembly;
    }
    const double spread = error_mass - to_no_assembly;

    double weight = 0.0;
    for (std::size_t j = 0; j < kActionCount; ++j) {
      if (j != i && j != kNoAssembly) {
        weight += priors[j];
      }
    }
    if (spread <= 0.0) {
      continue;
    }
    if (weight <= 0.0) {
      // Nothing to spread over; the mass stays with no_assembly_action (or is uniform for it).
      if (i != kNoAssembly) {
        row[kNoAssembly] += spread;
      } else {
        for (std::size_t j = 1; j < kActionCount; ++j) {
          row[j] += spread / static_cast<double>(kActionCount - 1);
        }
      }
      continue;
    }
    for (std::size_t j = 0; j < kActionCount; ++j) {
      if (j != i && j != kNoAssembly) {
        row[j] += spread * priors[j] / weight;
      }
    }
  }
  return m;
}

ClassVector precision_under_priors(const ConfusionMatrix& m, const ClassVector& priors) {
  ClassVector out{};
  for (std::size_t j = 0; j < kActionCount; ++j) {
    double predicted = 0.0;
    for (std::size_t i = 0; i < kActionCount; ++i) {
      predicted += priors[i] * m[i][j];
    }
    out[j] = predicted > 0.0 ? priors[j] * m[j][j] / predicted
                             : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

ClassVector degrade_for_frame_rate(const ClassVector& recall, double frame_rate,
                                   double trained_frame_rate, double slope) {
  if (!(frame_rate > 0.0 && trained_frame_rate > 0.0)) {
    throw ValidationError("frame rates must be > 0");
  }
  if (!(slope >= 0.0)) {
    throw ValidationError("rate mismatch slope must be >= 0");
  }
  const double mismatch = std::abs(frame_rate - trained_frame_rate) / trained_frame_rate;
  const double factor = std::max(0.0, 1.0 - slope * mismatch);
  ClassVector out = recall;
  for (double& r : out) {
    r *= factor;
  }
  return out;
}

void RecognizerModel::validate() const {
  for (std::size_t i = 0; i < kActionCount; ++i) {
    check_row_stochastic(confusion[i], i);
  }
  if (window_len < 1) {
    throw ValidationError("window_len must be >= 1");
  }
  if (frame_rate < 1) {
    throw ValidationError("frame_rate must be >= 1");
  }
  if (!(no_assembly_scale > 0.0 && no_assembly_scale <= 1.0)) {
    throw ValidationError("no_assembly_scale must be in (0, 1]");
  }
  if (!(confidence_spread >= 0.0 && confidence_spread < 1.0)) {
    throw ValidationError("confidence_spread must be in [0, 1)");
  }
}

BiasedConfidence apply_confidence_bias(const ConfidenceVector& confidence, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ValidationError("confidence bias lambda must be in (0, 1]");
  }
  BiasedConfidence out;
  out.adjusted = confidence;
  out.adjusted[kNoAssembly] *= lambda;
  const auto it = std::max_element(out.adjusted.begin(), out.adjusted.end());
  out.label = kAllActions[static_cast<std::size_t>(it - out.adjusted.begin())];
  return out;
}

Recognizer::Recognizer(RecognizerModel model) : model_(model) { model_.validate(); }

std::optional<ActionPrediction> Recognizer::tick(std::int64_t frame_index,
                                                 AtomicAction true_action, Rng& rng) {
  if (frame_index != last_frame_ + 1) {
    throw ContractViolation("recognizer frame " + std::to_string(frame_index) + " after frame " +
                            std::to_string(last_frame_));
  }
  last_frame_ = frame_index;
  if (frame_index < model_.window_len) {
    return std::nullopt;
  }

  const ClassVector& row = model_.confusion[index_of(true_action)];
  const double u = rng.uniform();
  std::size_t sampled = kActionCount - 1;
  double cumulative = 0.0;
  for (std::size_t j = 0; j < kActionCount; ++j) {
    cumulative += row[j];
    if (u < cumulative) {
      sampled = j;
      break;
    }
  }
  // Guard against the tail of a row whose cumulative sum rounds below 1.
  while (row[sampled] <= 0.0 && sampled > 0) {
    --sampled;
  }

  ActionPrediction p;
  p.frame_index = frame_index;
  const double eps = model_.confidence_spread;
  p.confidence.fill(eps / static_cast<double>(kActionCount - 1));
  p.confidence[sampled] = 1.0 - eps;
  p.label = apply_confidence_bias(p.confidence, model_.no_assembly_scale).label;
  return p;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
  out << "true_action";
  for (AtomicAction a : kAllActions) {
    out << ',' << to_string(a);
  }
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < kActionCount; ++i) {
    out << to_string(kAllActions[i]);
    for (double p : m[i]) {
      out << ',' << p;
    }
    out << '\n';
  }
}

ConfusionMatrix read_confusion_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("confusion csv: missing header");
  }
  const auto header = split_csv(line);
  if (header.size() != kActionCount + 1) {
    throw ValidationError("confusion csv: header must have 9 columns");
  }
  for (std::size_t j = 0; j < kActionCount; ++j) {
    if (header[j + 1] != to_string(kAllActions[j])) {
      throw ValidationError("confusion csv: column " + std::to_string(j + 1) + " must be '" +
                            action_name(j) + "'");
    }
  }
  ConfusionMatrix m{};
  std::array<bool, kActionCount> seen{};
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != kActionCount + 1) {
      throw ValidationError("confusion csv: row must have 9 columns");
    }
    const auto action = parse_action(fields[0]);
    if (!action) {
      throw ValidationError("confusion csv: unknown action '" + fields[0] + "'");
    }
    const std::size_t i = index_of(*action);
    if (seen[i]) {
      throw ValidationError("confusion csv: duplicate row '" + fields[0] + "'");
    }
    seen[i] = true;
    for (std::size_t j = 0; j < kActionCount; ++j) {
      try {
        std::size_t used = 0;
        m[i][j] = std::stod(fields[j + 1], &used);
        if (used != fields[j + 1].size()) {
          throw std::invalid_argument("trailing characters");
        }
      } catch (const std::exception&) {
        throw ValidationError("confusion csv: bad number '" + fields[j + 1] + "'");
      }
    }
    check_row_stochastic(m[i], i);
    ++rows;
  }
  if (rows != kActionCount) {
    throw ValidationError("confusion csv: expected 8 rows");
  }
  return m;
}

}  // namespace hrc::percept
