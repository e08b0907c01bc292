#pragma once

#include <cstdint>

namespace oracle {

struct ServoPropertyStats {
  int scenes = 0;
  long ticks = 0;
  int perturbations = 0;
  long decrease_violations = 0;   ///< V did not strictly drop on an unperturbed tick
  long selection_violations = 0;  ///< selected instance is not the ground-truth nearest
  long trigger_violations = 0;    ///< ExecuteGrasp issued with v_min >= tau, or withheld below it
  int non_terminating = 0;        ///< loop did not terminate within the tick budget

  long violations() const {
    return decrease_violations + selection_violations + trigger_violations + non_terminating;
  }
};

/// Noise-free closed loop over random scenes with 1-2 parts and optional mid-run teleports.
ServoPropertyStats check_servo_properties(int scenes, std::uint64_t seed);

}  // namespace oracle
