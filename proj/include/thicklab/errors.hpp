// thicklab/errors.hpp
//
// Error classes the CLI maps to machine-readable codes: input parsing,
// precondition violations (std::invalid_argument), and exhausted search
// or size budgets.

#pragma once

#include <stdexcept>

namespace thicklab {

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thicklab
