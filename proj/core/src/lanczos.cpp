#include "qent/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qent/error.hpp"

namespace qent {

GroundState lanczos_ground_state(const LinearMap& apply, const Eigen::VectorXcd& start, const SolverOptions& options) {
  if (start.size() == 0) throw ShapeError("lanczos: empty start vector");
  if (start.norm() == 0.0) throw NumericalError("lanczos: zero start vector");

  const Eigen::Index dim = start.size();
  const int krylov = static_cast<int>(std::min<Eigen::Index>(options.krylov_dimension, dim));
  Eigen::VectorXcd x = start.normalized();
  GroundState best;
  best.residual = std::numeric_limits<double>::infinity();
  int matvecs = 0;

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<Eigen::VectorXcd> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.push_back(x);

    for (int j = 0; j < krylov; ++j) {
      Eigen::VectorXcd w = apply(basis.back());
      ++matvecs;
      const double a = basis.back().dot(w).real();
      alpha.push_back(a);
      // two passes of classical Gram-Schmidt against the whole Krylov basis
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) w -= v * v.dot(w);
      }
      const double b = w.norm();
      if (j + 1 == krylov || b < 1e-13 * (std::abs(a) + 1.0)) break;
      beta.push_back(b);
      basis.push_back(w / b);
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(dim);
    for (Eigen::Index i = 0; i < k; ++i) ritz += y[i] * basis[static_cast<std::size_t>(i)];
    ritz.normalize();

    const Eigen::VectorXcd h_ritz = apply(ritz);
    ++matvecs;
    const double energy = ritz.dot(h_ritz).real();
    const double residual = (h_ritz - energy * ritz).norm();
    if (residual < best.residual) best = GroundState{energy, ritz, residual, matvecs};
    best.matvecs = matvecs;
    if (residual < options.residual_tolerance) return best;
    x = ritz;
  }
  throw NumericalError("lanczos did not converge: residual " + std::to_string(best.residual) + " after " +
                       std::to_string(options.max_restarts) + " restarts");
}

}  // namespace qent
