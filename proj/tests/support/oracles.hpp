#pragma once

// Independent reference implementations used only by the tests. They share no code with
// the library and favour the most literal formulation over speed.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct WilcoxonBrute {
  double w_plus = 0.0;
  int n = 0;
  double p_two_sided = 1.0;
};

/// Enumerates all 2^n sign assignments of the non-zero |d| ranks.
WilcoxonBrute wilcoxon_enumerate(const std::vector<std::pair<double, double>>& pairs);

/// alpha = k/(k-1) * (1 - sum(item variances) / variance(total score)), n-1 denominators.
std::optional<double> cronbach_direct(const std::vector<std::vector<double>>& m);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);

}  // namespace oracle
