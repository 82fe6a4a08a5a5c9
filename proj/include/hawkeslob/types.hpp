#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hawkeslob {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// A numerical routine failed (non-finite state, iteration cap, rate blow-up).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A spec or config violates a stability requirement (e.g. rho(K) >= 1).
struct StabilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace hawkeslob
