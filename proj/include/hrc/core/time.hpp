#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace hrc {

/// Simulation time as integer microseconds since episode start.
///
/// Scheduling keys are always derived from integer tick indices (see tick_time), so a
/// trace never accumulates floating-point drift.
class SimTime {
public:
  constexpr SimTime() = default;

  static constexpr SimTime from_us(std::int64_t us) noexcept { return SimTime(us); }
  static SimTime from_seconds(double s) noexcept {
    return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
  }

  constexpr std::int64_t us() const noexcept { return us_; }
  constexpr double seconds() const noexcept { return static_cast<double>(us_) * 1e-6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const noexcept { return SimTime(us_ + o.us_); }
  constexpr SimTime operator-(SimTime o) const noexcept { return SimTime(us_ - o.us_); }

private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

/// Time of the index-th tick of a clock running at rate_hz, starting at t = 0.
constexpr SimTime tick_time(std::int64_t index, std::int64_t rate_hz) noexcept {
  return SimTime::from_us(index * 1'000'000 / rate_hz);
}

}  // namespace hrc
