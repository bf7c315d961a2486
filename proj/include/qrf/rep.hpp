#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qrf/group.hpp"
#include "qrf/spaces.hpp"
#include "qrf/states.hpp"

namespace qrf {

/// Spin-j angular momentum matrices in the basis m = j, j-1, ..., -j.
inline Eigen::MatrixXcd spin_jz(int two_j) {
  const int d = two_j + 1;
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) jz(i, i) = 0.5 * (two_j - 2 * i);
  return jz;
}

inline Eigen::MatrixXcd spin_jplus(int two_j) {
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(d, d);
  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; row index m+1 sits above m.
  for (int i = 1; i < d; ++i) {
    const double m = j - i;
    jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return jp;
}

inline Eigen::MatrixXcd spin_jx(int two_j) {
  Eigen::MatrixXcd jp = spin_jplus(two_j);
  return 0.5 * (jp + jp.adjoint());
}

inline Eigen::MatrixXcd spin_jy(int two_j) {
  Eigen::MatrixXcd jp = spin_jplus(two_j);
  return complexd(0.0, -0.5) * (jp - jp.adjoint());
}

namespace detail {

/// exp(i scale H) for Hermitian H via eigendecomposition.
inline Eigen::MatrixXcd exp_i_hermitian(const Eigen::MatrixXcd& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXcd phases(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) phases[i] = std::polar(1.0, scale * ev[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Spin-j rotation exp(i omega n.J) for axis n given by (theta, phi).
inline Eigen::MatrixXcd wigner_angle_axis(int two_j, double omega, double theta, double phi) {
  const Eigen::MatrixXcd h = std::sin(theta) * std::cos(phi) * spin_jx(two_j) +
                             std::sin(theta) * std::sin(phi) * spin_jy(two_j) +
                             std::cos(theta) * spin_jz(two_j);
  return detail::exp_i_hermitian(h, omega);
}

/// Small Wigner matrix d^j(beta) = exp(-i beta Jy).
inline Eigen::MatrixXcd wigner_small_d(int two_j, double beta) {
  return detail::exp_i_hermitian(spin_jy(two_j), -beta);
}

/// Full Wigner matrix D^j(alpha, beta, gamma) = e^{-i a Jz} d^j(b) e^{-i g Jz}.
inline Eigen::MatrixXcd wigner_euler(int two_j, double alpha, double beta, double gamma) {
  const int d = two_j + 1;
  Eigen::VectorXcd za(d), zg(d);
  for (int i = 0; i < d; ++i) {
    const double m = 0.5 * (two_j - 2 * i);
    za[i] = std::polar(1.0, -alpha * m);
    zg[i] = std::polar(1.0, -gamma * m);
  }
  return za.asDiagonal() * wigner_small_d(two_j, beta) * zg.asDiagonal();
}

inline Eigen::MatrixXcd wigner_matrix(int two_j, const GroupElement& g) {
  if (two_j == 0) return Eigen::MatrixXcd::Identity(1, 1);
  const PolarAngles p = g.polar();
  return wigner_angle_axis(two_j, p.omega, p.theta, p.phi);
}

/// Block-diagonal unitary representation of g on a space. U(1): diag(e^{i q g})
/// over basis charges. SU(2): Wigner matrix on each irrep factor, identity on
/// the multiplicity subsystem; composites get the Kronecker product.
inline Eigen::MatrixXcd rep_unitary(const SpaceSpec& space, const GroupElement& g) {
  if (space.group() != g.group())
    throw std::invalid_argument("rep_unitary: space and group element from different groups");

  if (space.group() == Group::U1) {
    const auto charges = space.basis_charges();
    Eigen::VectorXcd d(space.dim());
    for (int i = 0; i < space.dim(); ++i) d[i] = std::polar(1.0, charges[i] * g.theta());
    return Eigen::MatrixXcd(d.asDiagonal());
  }

  if (space.is_composite()) {
    Eigen::MatrixXcd u = rep_unitary(space.factors()[0], g);
    for (std::size_t i = 1; i < space.factors().size(); ++i)
      u = kron(u, rep_unitary(space.factors()[i], g));
    return u;
  }

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  int off = 0;
  for (const auto& sec : space.sectors()) {
    const Eigen::MatrixXcd dj = wigner_matrix(sec.charge, g);
    if (sec.mult_dim == 1)
      u.block(off, off, sec.irrep_dim, sec.irrep_dim) = dj;
    else
      u.block(off, off, sec.dim(), sec.dim()) =
          kron(dj, Eigen::MatrixXcd::Identity(sec.mult_dim, sec.mult_dim));
    off += sec.dim();
  }
  return u;
}

inline Ket apply_unitary(const Eigen::MatrixXcd& u, const Ket& psi) {
  return Ket(psi.space, u * psi.amp);
}

inline DensityOperator conjugate(const Eigen::MatrixXcd& u, const DensityOperator& rho) {
  return DensityOperator(rho.space(), u * rho.mat() * u.adjoint());
}

/// Total Jz as a diagonal (SU(2) spaces, composites included).
inline Eigen::VectorXd jz_diagonal(const SpaceSpec& space) {
  const auto two_m = space.basis_two_jz();
  Eigen::VectorXd d(space.dim());
  for (int i = 0; i < space.dim(); ++i) d[i] = 0.5 * two_m[i];
  return d;
}

}  // namespace qrf
