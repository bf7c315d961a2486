#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qrf/states.hpp"

namespace qrf {

namespace detail {

/// PSD square root with eigenvalues in [-psd_tol, 0) clamped to zero. More
/// negative values indicate a genuinely invalid operator and throw.
inline Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -psd_tol * std::max(1.0, ev.cwiseAbs().maxCoeff()))
      throw std::domain_error("psd_sqrt: operator is not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Uhlmann fidelity F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)),
/// in [0, 1], without the square.
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Eigen::MatrixXcd sr = detail::psd_sqrt(rho.mat());
  const Eigen::MatrixXcd inner = sr * sigma.mat() * sr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    f += std::sqrt(std::max(es.eigenvalues()[i], 0.0));
  return f;
}

/// Trace distance (1/2) || rho - sigma ||_1.
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.mat() - sigma.mat(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double trace_norm(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().sum();
}

inline double purity(const DensityOperator& rho) {
  return (rho.mat() * rho.mat()).trace().real();
}

/// Entanglement fidelity of a channel on a d-dimensional system with respect
/// to the maximally entangled purification of I/d:
/// F_e = (1/d^2) sum_{ij} <i| L(|i><j|) |j>.
inline double entanglement_fidelity(
    const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& channel, int dim) {
  complexd acc = 0.0;
  Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      unit.setZero();
      unit(i, j) = 1.0;
      acc += channel(unit)(i, j);
    }
  return acc.real() / (double(dim) * dim);
}

}  // namespace qrf
