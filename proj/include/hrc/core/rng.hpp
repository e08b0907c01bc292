#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace hrc {

/// Seeded random stream with label-keyed sub-stream derivation.
///
/// Identical seeds give identical streams on every platform: the engine is
/// std::mt19937_64 (fully specified by the standard) and all transforms below are
/// implemented here rather than through std:: distributions, whose algorithms are
/// implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; depends only on (seed, label), never on draws taken so far.
  Rng derive(std::string_view label) const;
  Rng derive(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine()(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64& engine() {
    if (!engine_) {
      seed_engine();
    }
    return *engine_;
  }
  void seed_engine();

  std::uint64_t seed_;
  // Seeded on first draw: many streams are derived only to derive again.
  std::optional<std::mt19937_64> engine_;
};

inline Rng seeded_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace hrc
