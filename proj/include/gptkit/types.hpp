#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace gptkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

namespace tol {
// membership / feasibility checks
inline constexpr double feasibility = 1e-9;
// pure linear-algebra identities
inline constexpr double identity = 1e-12;
}  // namespace tol

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnsupportedRepresentation : std::logic_error {
  using std::logic_error::logic_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_same_size(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(a) +
                         " does not match " + std::to_string(b));
  }
}

}  // namespace gptkit
