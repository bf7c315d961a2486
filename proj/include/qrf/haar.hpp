#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "qrf/group.hpp"

namespace qrf {

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1], exact for polynomials of
/// degree <= 2n-1. Newton iteration on the three-term recurrence.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

}  // namespace detail

/// Quadrature grid realizing the normalized Haar measure of U(1) or SU(2)
/// exactly on band-limited integrands.
///
/// A grid built with a given bandlimit integrates exactly (to round-off) every
/// product of two irrep matrix elements whose charges are each at most the
/// bandlimit, i.e. all functions with charge content up to 2*bandlimit. That
/// sizing makes the twirl of any state on a space with max charge <= bandlimit
/// exact rather than approximate. Charges are photon number for U(1) and 2j
/// for SU(2).
///
/// SU(2) grids come in two flavours. The default covers rotation angles
/// omega in [0, 2pi) with density sin^2(omega/2) sin(theta) / (4 pi^2) and is
/// valid for integer-spin (even charge) content, where it reproduces the
/// rotation-group integral. The half-integer grid doubles the omega range to
/// [0, 4pi) and halves the density so that odd charges integrate correctly.
struct HaarGrid {
  Group group = Group::U1;
  int bandlimit = 0;
  bool half_integer = false;  // SU(2) only: odd charges supported
  std::vector<GroupElement> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

inline HaarGrid haar_grid(Group group, int bandlimit, bool half_integer = false) {
  if (bandlimit < 0) throw std::invalid_argument("haar_grid: bandlimit must be non-negative");
  HaarGrid grid;
  grid.group = group;
  grid.bandlimit = bandlimit;
  grid.half_integer = half_integer;

  if (group == Group::U1) {
    if (half_integer) throw std::invalid_argument("haar_grid: half-integer mode is SU(2) only");
    const int n = 2 * bandlimit + 1;
    grid.nodes.reserve(n);
    grid.weights.assign(n, 1.0 / n);
    for (int k = 0; k < n; ++k) grid.nodes.push_back(GroupElement::u1(two_pi * k / n));
    return grid;
  }

  // Product rule: uniform in omega against sin^2(omega/2), Gauss-Legendre in
  // cos(theta), uniform in phi. Sizes chosen so every factor integral is
  // exact for charge content up to 2*bandlimit.
  const int b = bandlimit;
  const int n_omega = half_integer ? (2 * b + 3) : (b + 2);
  const double omega_period = half_integer ? 2.0 * two_pi : two_pi;
  const int n_theta = b + 1;
  const int n_phi = 2 * b + 1;

  std::vector<double> ct, wt;
  detail::gauss_legendre(n_theta, ct, wt);

  grid.nodes.reserve(static_cast<std::size_t>(n_omega) * n_theta * n_phi);
  grid.weights.reserve(grid.nodes.capacity());
  for (int i = 0; i < n_omega; ++i) {
    const double omega = omega_period * i / n_omega;
    const double w_omega = 2.0 * std::sin(0.5 * omega) * std::sin(0.5 * omega) / n_omega;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = std::acos(std::clamp(ct[j], -1.0, 1.0));
      const double w_theta = 0.5 * wt[j];
      for (int k = 0; k < n_phi; ++k) {
        const double phi = two_pi * k / n_phi;
        grid.nodes.push_back(GroupElement::su2_polar(omega, theta, phi));
        grid.weights.push_back(w_omega * w_theta / n_phi);
      }
    }
  }
  return grid;
}

}  // namespace qrf
