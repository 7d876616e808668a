#pragma once

#include <stdexcept>

namespace textile {

// File and stream problems. Contract violations (bad dimensions, invalid
// parameters) use std::invalid_argument instead.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace textile
