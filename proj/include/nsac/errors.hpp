#pragma once

#include <stdexcept>
#include <string>

namespace nsac {

// End states would require a shock (or vacuum) branch that this lab does not model.
struct NoTwoRarefactionSolution : std::runtime_error {
  explicit NoTwoRarefactionSolution(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solve exhausted its iteration budget.
struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// v or theta left the positive cone during time integration.
struct PositivityBreach : std::runtime_error {
  PositivityBreach(const std::string& field_, int cell_, double time_, double value_)
      : std::runtime_error("positivity breach: " + field_ + "[" + std::to_string(cell_) +
                           "] = " + std::to_string(value_) + " at t = " + std::to_string(time_)),
        field(field_), cell(cell_), time(time_), value(value_) {}
  std::string field;
  int cell;
  double time;
  double value;
};

// Snapshot cadence too coarse for the requested reconstruction accuracy.
struct InsufficientHistory : std::runtime_error {
  explicit InsufficientHistory(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsac
