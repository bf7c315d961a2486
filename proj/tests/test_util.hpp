#pragma once

// Shared helpers for the test suites: seeded random states and group
// elements, so every run sees the same draws.

#include <random>

#include "qrf/qrf.hpp"

namespace qrf_test {

using namespace qrf;

inline Eigen::VectorXcd random_ket(int dim, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = complexd(nd(rng), nd(rng));
  v /= v.norm();
  return v;
}

inline Eigen::MatrixXcd random_density_matrix(int dim, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = complexd(nd(rng), nd(rng));
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

inline DensityOperator random_density(const SpaceSpec& space, std::mt19937& rng) {
  return DensityOperator(space, random_density_matrix(space.dim(), rng));
}

inline GroupElement random_u1(std::mt19937& rng) {
  std::uniform_real_distribution<double> ud(0.0, two_pi);
  return GroupElement::u1(ud(rng));
}

inline GroupElement random_su2(std::mt19937& rng) {
  // Haar on SU(2): normalized Gaussian quaternion
  std::normal_distribution<double> nd;
  double w = nd(rng), x = nd(rng), y = nd(rng), z = nd(rng);
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n; x /= n; y /= n; z /= n;
  Eigen::Matrix2cd u;
  u << complexd(w, z), complexd(y, x), complexd(-y, x), complexd(w, -z);
  return GroupElement::su2_matrix(u);
}

inline GroupElement random_element(Group g, std::mt19937& rng) {
  return g == Group::U1 ? random_u1(rng) : random_su2(rng);
}

}  // namespace qrf_test
