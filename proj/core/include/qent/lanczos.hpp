#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qent {

struct SolverOptions {
  int krylov_dimension = 200;
  int max_restarts = 50;
  double residual_tolerance = 1e-10;
};

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd vector;
  /// ||H x - E x|| evaluated explicitly on the returned unit vector.
  double residual = 0.0;
  int matvecs = 0;
};

using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Lowest eigenpair of a Hermitian map by restarted Lanczos with full
/// reorthogonalization. Throws NumericalError if the residual tolerance is not
/// reached within the restart budget.
GroundState lanczos_ground_state(const LinearMap& apply, const Eigen::VectorXcd& start,
                                 const SolverOptions& options = {});

}  // namespace qent
