#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qrf/frames.hpp"

namespace qrf {

/// Balanced homodyne detection: a 50:50 beamsplitter with
/// a_out = (a + b)/sqrt(2), b_out = (a - b)/sqrt(2), followed by photon
/// counting on both output ports. Outcomes are labelled by total photons
/// 2j = n_A + n_B and difference 2m = n_A - n_B, with n_A counted at the sum
/// port. Quadrature convention x = (a + a^dag)/sqrt(2) throughout.

namespace detail {

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

inline bool valid_jm(int two_j, int two_m) {
  return two_j >= 0 && std::abs(two_m) <= two_j && (two_j + two_m) % 2 == 0;
}

}  // namespace detail

/// Joint outcome probability for two coherent inputs |s_A; a> and |s_B; b>.
/// The two output ports carry independent Poisson counts with means
/// |alpha +- beta|^2 / 2, which fixes the normalized closed form.
inline double bhd_two_coherent(double s_A, double a, double s_B, double b, int two_j, int two_m) {
  if (!detail::valid_jm(two_j, two_m)) return 0.0;
  const complexd alpha = std::polar(s_A, a);
  const complexd beta = std::polar(s_B, b);
  const double mu_plus = 0.5 * std::norm(alpha + beta);
  const double mu_minus = 0.5 * std::norm(alpha - beta);
  const int n_plus = (two_j + two_m) / 2;   // j + m
  const int n_minus = (two_j - two_m) / 2;  // j - m
  if (mu_plus == 0.0 && n_plus > 0) return 0.0;
  if (mu_minus == 0.0 && n_minus > 0) return 0.0;
  double logp = -(mu_plus + mu_minus) - detail::log_factorial(n_plus) -
                detail::log_factorial(n_minus);
  if (n_plus > 0) logp += n_plus * std::log(mu_plus);
  if (n_minus > 0) logp += n_minus * std::log(mu_minus);
  return std::exp(logp);
}

/// Equal-amplitude specialization: a binomial in cos^2[(b-a)/2] with the
/// Poisson weight e^{-2s^2} (2s^2)^{2j} / (2j)! on the total photon number.
inline double bhd_equal_coherent(double s, double a, double b, int two_j, int two_m) {
  if (!detail::valid_jm(two_j, two_m)) return 0.0;
  const double c = std::cos(0.5 * (b - a)) * std::cos(0.5 * (b - a));
  const int n_plus = (two_j + two_m) / 2;
  const int n_minus = (two_j - two_m) / 2;
  if (c == 0.0 && n_plus > 0) return 0.0;
  if (c == 1.0 && n_minus > 0) return 0.0;
  // the (2j)! in the Poisson weight cancels against the binomial coefficient
  double logp = -2.0 * s * s - detail::log_factorial(n_plus) - detail::log_factorial(n_minus);
  if (two_j > 0) logp += two_j * std::log(2.0 * s * s);
  if (n_plus > 0) logp += n_plus * std::log(c);
  if (n_minus > 0) logp += n_minus * std::log(1.0 - c);
  return std::exp(logp);
}

/// Number of (n_A, n_B) pairs under the cutoffs with n_A + n_B = 2j.
inline long bhd_two_pe_count(int s_A, int s_B, int two_j) {
  if (two_j < 0 || two_j > s_A + s_B) return 0;
  const int lo = std::max(0, two_j - s_B);
  const int hi = std::min(two_j, s_A);
  return hi - lo + 1;
}

/// Total probability of detecting 2j photons for two phase-eigenstate inputs.
/// The beamsplitter preserves total photon number, so this is pure counting:
/// flat input distributions give count / ((s_A+1)(s_B+1)), rising linearly to
/// a plateau of 1/(max{s_A, s_B}+1).
inline double bhd_two_pe_total(int s_A, int s_B, int two_j) {
  return double(bhd_two_pe_count(s_A, s_B, two_j)) /
         (double(s_A + 1) * double(s_B + 1));
}

/// Harmonic oscillator position wavefunction value sum_k c_k phi_k(x) for the
/// quadrature x = (a + a^dag)/sqrt(2).
inline complexd position_wavefunction(const Eigen::VectorXcd& fock_amps, double x) {
  const int n = static_cast<int>(fock_amps.size());
  double phi_prev = 0.0;
  double phi = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  complexd acc = fock_amps[0] * phi;
  for (int k = 1; k < n; ++k) {
    const double phi_next = (std::sqrt(2.0) * x * phi - std::sqrt(k - 1.0) * phi_prev) /
                            std::sqrt(double(k));
    phi_prev = phi;
    phi = phi_next;
    acc += fock_amps[k] * phi;
  }
  return acc;
}

/// Large-local-oscillator approximation: coherent state |s_A; a> on one port,
/// an arbitrary state psi_B on the other. The total-photon marginal is a
/// Gaussian peaked at 2j = s_A^2 and the difference outcome reads off the
/// a-phase quadrature of psi_B at x = m / sqrt(j):
/// P ~ e^{-(2j - s_A^2)^2 / (2 s_A^2)} / (sqrt(pi) s_A^2) |<x|U(-a) psi_B>|^2.
/// The phase offset is the one the beamsplitter oracle validates under the
/// sum-port convention above.
inline double bhd_large_cs_approx(double s_A, double a, const Ket& psi_B, int two_j, int two_m) {
  if (psi_B.space.group() != Group::U1)
    throw std::invalid_argument("bhd_large_cs_approx: psi_B must be a Fock-space state");
  if (s_A <= 0.0) throw std::invalid_argument("bhd_large_cs_approx: s_A must be positive");
  if (!detail::valid_jm(two_j, two_m)) return 0.0;
  const double dj = 2.0 * two_j - 2.0 * s_A * s_A;  // 2(2j - s_A^2)
  const double gauss = std::exp(-dj * dj / (8.0 * s_A * s_A)) /
                       (std::sqrt(pi) * s_A * s_A);
  Eigen::VectorXcd rotated(psi_B.amp.size());
  for (Eigen::Index k = 0; k < psi_B.amp.size(); ++k)
    rotated[k] = psi_B.amp[k] * std::polar(1.0, -double(k) * a);
  const double x = two_j == 0 ? 0.0 : 0.5 * two_m / std::sqrt(0.5 * two_j);
  return gauss * std::norm(position_wavefunction(rotated, x));
}

/// Large-s_B asymptotics of the a-phase quadrature statistics of a phase
/// eigenstate |s_B; b>: mean and variance of x. The variance carries the
/// printed D_{s_B} scaling; the mean is the same asymptotic sum evaluated in
/// the x = (a + a^dag)/sqrt(2) convention.
inline std::pair<double, double> bhd_pe_quadrature_stats(int s_B, double b) {
  if (s_B < 1) throw std::invalid_argument("bhd_pe_quadrature_stats: s_B must be at least 1");
  const double d = s_B + 1.0;
  const double mean = (2.0 / 3.0) * std::sqrt(2.0 * d) * std::cos(b);
  const double var = 0.5 * (1.5 + (2.0 / 9.0) * d * std::cos(b) * std::cos(b));
  return {mean, var};
}

/// Brute-force beamsplitter oracle. Applies the 50:50 beamsplitter to the
/// truncated two-mode input psi_A (x) psi_B by expanding
/// (a^dag + b^dag)^{n_A} (a^dag - b^dag)^{n_B} and returns the joint photon
/// count distribution P(n_A', n_B') as a matrix.
inline Eigen::MatrixXd beamsplitter_joint_probabilities(const Eigen::VectorXcd& psi_A,
                                                        const Eigen::VectorXcd& psi_B) {
  const int n_a = static_cast<int>(psi_A.size());
  const int n_b = static_cast<int>(psi_B.size());
  const int total = n_a + n_b - 1;  // max total photons + 1

  // Pascal triangle in long double for the binomial expansions.
  std::vector<std::vector<long double>> binom(total + 1);
  for (int n = 0; n <= total; ++n) {
    binom[n].assign(n + 1, 1.0L);
    for (int k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  std::vector<long double> log_fact(total + 1, 0.0L);
  for (int n = 1; n <= total; ++n) log_fact[n] = log_fact[n - 1] + std::log((long double)n);

  Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(total, total);
  std::vector<long double> kraw(total, 0.0L);
  for (int na = 0; na < n_a; ++na) {
    for (int nb = 0; nb < n_b; ++nb) {
      const complexd in_amp = psi_A[na] * psi_B[nb];
      if (std::abs(in_amp) < 1e-300) continue;
      const int tot = na + nb;
      // coefficient of a^dag^p in (a^dag + b^dag)^na (a^dag - b^dag)^nb
      for (int p = 0; p <= tot; ++p) {
        long double acc = 0.0L;
        const int i_lo = std::max(0, p - nb);
        const int i_hi = std::min(p, na);
        for (int i = i_lo; i <= i_hi; ++i) {
          const int k = p - i;
          const long double term = binom[na][i] * binom[nb][k];
          acc += ((nb - k) % 2 == 0) ? term : -term;
        }
        kraw[p] = acc;
      }
      for (int p = 0; p <= tot; ++p) {
        const int q = tot - p;
        const long double scale =
            std::exp(0.5L * (log_fact[p] + log_fact[q] - log_fact[na] - log_fact[nb]) -
                     0.5L * tot * std::log(2.0L));
        amp(p, q) += in_amp * double(scale * kraw[p]);
      }
    }
  }

  Eigen::MatrixXd prob(total, total);
  for (int p = 0; p < total; ++p)
    for (int q = 0; q < total; ++q) prob(p, q) = std::norm(amp(p, q));
  return prob;
}

/// Oracle probability for outcome (2j, 2m), reading the joint table at
/// n_A = j + m, n_B = j - m. Zero outside the table.
inline double bhd_oracle_probability(const Eigen::MatrixXd& joint, int two_j, int two_m) {
  if (!detail::valid_jm(two_j, two_m)) return 0.0;
  const int p = (two_j + two_m) / 2;
  const int q = (two_j - two_m) / 2;
  if (p >= joint.rows() || q >= joint.cols()) return 0.0;
  return joint(p, q);
}

}  // namespace qrf
