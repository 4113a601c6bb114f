#pragma once

#include <stdexcept>
#include <string>

namespace paralat {

// Bad user-supplied configuration (basis, measure, partition, config file).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument to an operation (out-of-range block index, negative time, ...).
struct argument_error : std::invalid_argument {
  explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// Operands live on different tori / partitions.
struct shape_error : std::runtime_error {
  explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values where finiteness is a contract (multiplier tables, quadrature).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Finite-time explosion of a PAM run. A first-class outcome, not a bug:
// carries the first step at which a non-finite value appeared.
struct blowup_signal : std::runtime_error {
  int step;
  double t;
  blowup_signal(int step_, double t_)
      : std::runtime_error("solution blew up at step " + std::to_string(step_) +
                           " (t=" + std::to_string(t_) + ")"),
        step(step_), t(t_) {}
};

} // namespace paralat
