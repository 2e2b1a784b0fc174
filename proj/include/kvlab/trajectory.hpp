#pragma once

#include <vector>

#include "kvlab/diagnostics.hpp"
#include "kvlab/fields.hpp"
#include "kvlab/vec2.hpp"

namespace kvlab {

struct SimulationState {
  double t = 0.0;
  DensityField rho;
  Direction omega;
  long step_index = 0;
};

// states[k] and records[k] describe the same time.
struct Trajectory {
  std::vector<SimulationState> states;
  std::vector<DiagnosticsRecord> records;

  int size() const { return static_cast<int>(records.size()); }
};

}  // namespace kvlab
