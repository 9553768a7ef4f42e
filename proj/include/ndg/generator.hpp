#pragma once

#include <cstdint>

#include "ndg/dsl.hpp"
#include "ndg/model.hpp"

namespace ndg {

struct GenParams {
  int columns = 3;
  int rows = 2;
  // Each pair of neurons in adjacent columns gets a stimulatory edge with
  // probability stim_density, otherwise an inhibitory one with probability
  // inhib_probability.
  double stim_density = 0.5;
  double inhib_probability = 0.2;
  // Applied only to neurons with at least two stimulatory parents.
  double threshold2_probability = 0.2;
  std::uint64_t seed = 0;
  bool require_target_reachable = true;
  int max_attempts = 64;
};

// Grid of rows x columns neurons named by row letter and column number
// ("A1", "B3"). Edges only join adjacent columns. Sources fire only when
// stipulated, and the stipulation is drawn from the first column. The
// target is a last-column neuron.
//
// The stream is std::mt19937_64 seeded with `seed`; draws are mapped to
// integers and reals by hand so output is identical on every platform.
// Throws Error(kInfeasible) for bad params or when no reachable target is
// found within max_attempts.
Problem generate(const GenParams& params);

struct ComplexityProfile {
  int neurons = 0;
  int columns = 0;
  int forks = 0;       // out-degree >= 2
  int blocked = 0;     // off, with an inhibitory parent that fires
  int crossings = 0;   // crossing edge pairs between adjacent columns, by row
  int threshold2 = 0;  // threshold >= 2

  bool operator==(const ComplexityProfile&) const = default;
};

ComplexityProfile complexity(const Diagram& diagram,
                             const Stipulation& stipulation);

}  // namespace ndg
