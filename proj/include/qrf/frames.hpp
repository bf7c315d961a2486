#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "qrf/group.hpp"
#include "qrf/rep.hpp"
#include "qrf/spaces.hpp"
#include "qrf/states.hpp"

namespace qrf {

/// The four reference-frame state families. Size parameter s is the photon
/// cutoff (phase eigenstates), the coherent amplitude sqrt(<n>) (U(1) coherent
/// states), the maximum integer spin (SU(2) fiducial states), or the total
/// spin j (SU(2) coherent states / direction indicators).
enum class FrameFamily { U1PhaseEigenstate, U1Coherent, SU2Fiducial, SU2Coherent };

struct FrameSpec {
  FrameFamily family = FrameFamily::U1PhaseEigenstate;
  double size = 1.0;
  int cutoff = -1;  // U1Coherent Fock cutoff; -1 selects the smallest cutoff
                    // retaining at least 99.99% of the photon distribution

  static FrameSpec phase_eigenstate(int s) { return {FrameFamily::U1PhaseEigenstate, double(s), -1}; }
  static FrameSpec u1_coherent(double s, int cutoff = -1) { return {FrameFamily::U1Coherent, s, cutoff}; }
  static FrameSpec su2_fiducial(int s) { return {FrameFamily::SU2Fiducial, double(s), -1}; }
  static FrameSpec su2_coherent(int two_j) { return {FrameFamily::SU2Coherent, 0.5 * two_j, -1}; }
};

inline constexpr double coherent_min_retained_mass = 0.9999;

namespace detail {

inline int require_int_size(const FrameSpec& f, const char* what) {
  const int s = static_cast<int>(std::lround(f.size));
  if (std::abs(f.size - s) > 1e-12 || s < 0)
    throw std::invalid_argument(std::string(what) + ": size must be a non-negative integer");
  return s;
}

inline int require_two_j(const FrameSpec& f) {
  const int two_j = static_cast<int>(std::lround(2.0 * f.size));
  if (std::abs(2.0 * f.size - two_j) > 1e-12 || two_j < 0)
    throw std::invalid_argument("su2 coherent frame: 2j must be a non-negative integer");
  return two_j;
}

inline double poisson_retained_mass(double s, int cutoff) {
  const double lambda = s * s;
  double term = std::exp(-lambda), sum = term;
  for (int k = 1; k <= cutoff; ++k) {
    term *= lambda / k;
    sum += term;
  }
  return sum;
}

inline int auto_coherent_cutoff(double s) {
  const double lambda = s * s;
  double term = std::exp(-lambda), sum = term;
  int k = 0;
  while (sum < coherent_min_retained_mass) {
    ++k;
    term *= lambda / k;
    sum += term;
    if (k > 100000) throw std::runtime_error("coherent cutoff search failed");
  }
  return k;
}

}  // namespace detail

/// |s; g> = (s+1)^{-1/2} sum_k e^{i k g} |k>, the maximum-likelihood frame
/// state for U(1) on a Fock space with photon cutoff s.
inline Ket phase_eigenstate(int s, double g) {
  if (s < 0) throw std::invalid_argument("phase_eigenstate: cutoff must be non-negative");
  Eigen::VectorXcd v(s + 1);
  const double norm = 1.0 / std::sqrt(double(s + 1));
  for (int k = 0; k <= s; ++k) v[k] = std::polar(norm, k * g);
  return Ket(SpaceSpec::fock(s), std::move(v));
}

/// Truncated coherent state with amplitude s and phase g, renormalized after
/// truncation. Refuses cutoffs that retain less than 99.99% of the Poisson
/// photon distribution.
inline Ket u1_coherent(double s, double g, int cutoff = -1) {
  if (s < 0) throw std::invalid_argument("u1_coherent: amplitude must be non-negative");
  if (cutoff < 0)
    cutoff = (s == 0.0) ? 0 : detail::auto_coherent_cutoff(s);
  else if (detail::poisson_retained_mass(s, cutoff) < coherent_min_retained_mass)
    throw std::invalid_argument("u1_coherent: cutoff retains less than 99.99% of the state");
  Eigen::VectorXcd v(cutoff + 1);
  double log_amp = -0.5 * s * s;  // log of s^k e^{-s^2/2} / sqrt(k!)
  v[0] = std::exp(log_amp);
  for (int k = 1; k <= cutoff; ++k) {
    log_amp += std::log(s) - 0.5 * std::log(double(k));
    v[k] = std::polar(std::exp(log_amp), k * g);
  }
  v /= v.norm();
  return Ket(SpaceSpec::fock(cutoff), std::move(v));
}

/// Fiducial Cartesian frame state at the identity: on each integer-spin
/// sector j <= s the maximally entangled state between the irrep and its
/// multiplicity subsystem, weighted by sqrt(2j+1), with the multiplicity
/// basis paired index-to-index with m = j..-j.
inline Ket su2_fiducial_identity(int s) {
  const SpaceSpec space = SpaceSpec::su2_frame(s);
  const double d_s = (2.0 * s + 1.0) * (2.0 * s + 3.0) * (s + 1.0) / 3.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  int off = 0;
  for (int j = 0; j <= s; ++j) {
    const int dj = 2 * j + 1;
    const double amp = std::sqrt(dj / d_s);
    for (int m = 0; m < dj; ++m) v[off + m * dj + m] = amp;
    off += dj * dj;
  }
  return Ket(space, std::move(v));
}

inline Ket su2_fiducial(int s, const GroupElement& g) {
  Ket e = su2_fiducial_identity(s);
  if (g.is_identity(0.0)) return e;
  return apply_unitary(rep_unitary(e.space, g), e);
}

/// Spin coherent state U(alpha,beta,gamma)|j,j> expanded in |j,m>.
inline Ket su2_coherent(int two_j, double alpha, double beta, double gamma) {
  if (two_j < 0) throw std::invalid_argument("su2_coherent: 2j must be non-negative");
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  Eigen::VectorXcd v(d);
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  for (int i = 0; i < d; ++i) {
    const double m = j - i;  // basis order m = j..-j
    const double lb = 0.5 * (std::lgamma(two_j + 1.0) - std::lgamma(j + m + 1.0) -
                             std::lgamma(j - m + 1.0));
    const double mag = std::exp(lb + (j + m) * std::log(std::max(c, 0.0) + 1e-300) +
                                (j - m) * std::log(std::max(s, 0.0) + 1e-300));
    v[i] = std::polar(mag, -alpha * m - gamma * j);
  }
  // exact zeros at the poles rather than 1e-300 artifacts
  if (c == 0.0 || s == 0.0) {
    for (int i = 0; i < d; ++i) {
      const double m = j - i;
      if ((c == 0.0 && m > -j) || (s == 0.0 && m < j)) v[i] = 0.0;
    }
    v /= v.norm();
  }
  return Ket(SpaceSpec::spin(two_j), std::move(v));
}

/// True when the twirled projector of the family is proportional to the
/// identity on its space, the property the covariant measurement needs.
inline bool uniform_twirl_family(FrameFamily f) { return f != FrameFamily::U1Coherent; }

inline SpaceSpec frame_space(const FrameSpec& f) {
  switch (f.family) {
    case FrameFamily::U1PhaseEigenstate:
      return SpaceSpec::fock(detail::require_int_size(f, "phase eigenstate frame"));
    case FrameFamily::U1Coherent:
      return SpaceSpec::fock(f.cutoff >= 0 ? f.cutoff : detail::auto_coherent_cutoff(f.size));
    case FrameFamily::SU2Fiducial:
      return SpaceSpec::su2_frame(detail::require_int_size(f, "su2 fiducial frame"));
    case FrameFamily::SU2Coherent:
      return SpaceSpec::spin(detail::require_two_j(f));
  }
  throw std::logic_error("frame_space: unknown family");
}

/// Dimension factor D_s of the family: the dimension of the span of the frame
/// orbit, which normalizes the covariant measurement.
inline double frame_dimension_factor(const FrameSpec& f) {
  switch (f.family) {
    case FrameFamily::U1PhaseEigenstate:
      return detail::require_int_size(f, "phase eigenstate frame") + 1.0;
    case FrameFamily::U1Coherent:
      throw std::invalid_argument("u1 coherent frames have no finite dimension factor");
    case FrameFamily::SU2Fiducial: {
      const double s = detail::require_int_size(f, "su2 fiducial frame");
      return (2.0 * s + 1.0) * (2.0 * s + 3.0) * (s + 1.0) / 3.0;
    }
    case FrameFamily::SU2Coherent:
      return detail::require_two_j(f) + 1.0;
  }
  throw std::logic_error("frame_dimension_factor: unknown family");
}

inline Group frame_group(const FrameSpec& f) {
  return (f.family == FrameFamily::U1PhaseEigenstate || f.family == FrameFamily::U1Coherent)
             ? Group::U1
             : Group::SU2;
}

/// Frame state of the family at orientation g.
inline Ket frame_state(const FrameSpec& f, const GroupElement& g) {
  if (g.group() != frame_group(f))
    throw std::invalid_argument("frame_state: orientation from the wrong group");
  switch (f.family) {
    case FrameFamily::U1PhaseEigenstate:
      return phase_eigenstate(detail::require_int_size(f, "phase eigenstate frame"), g.theta());
    case FrameFamily::U1Coherent:
      return u1_coherent(f.size, g.theta(), f.cutoff);
    case FrameFamily::SU2Fiducial:
      return su2_fiducial(detail::require_int_size(f, "su2 fiducial frame"), g);
    case FrameFamily::SU2Coherent: {
      const int two_j = detail::require_two_j(f);
      Ket e = su2_coherent(two_j, 0.0, 0.0, 0.0);
      if (g.is_identity(0.0)) return e;
      return apply_unitary(rep_unitary(e.space, g), e);
    }
  }
  throw std::logic_error("frame_state: unknown family");
}

/// Closed-form overlap <g|h> between two frame states of the same family and
/// size. Each formula is the analytic evaluation of the direct inner product
/// of the constructed state vectors (the unit tests pin that agreement).
inline complexd overlap_closed_form(const FrameSpec& f, const GroupElement& g,
                                    const GroupElement& h) {
  switch (f.family) {
    case FrameFamily::U1PhaseEigenstate: {
      const int s = detail::require_int_size(f, "phase eigenstate frame");
      const double delta = h.theta() - g.theta();
      // (s+1)^{-1} sum_{k=0}^{s} e^{i k delta}
      if (std::abs(std::sin(0.5 * delta)) < 1e-14) return complexd(1.0, 0.0);
      const complexd num = std::polar(1.0, 0.5 * s * delta) *
                           std::sin(0.5 * (s + 1) * delta) / std::sin(0.5 * delta);
      return num / double(s + 1);
    }
    case FrameFamily::U1Coherent: {
      const double delta = h.theta() - g.theta();
      const complexd z = f.size * f.size * (std::polar(1.0, delta) - 1.0);
      return std::exp(z);
    }
    case FrameFamily::SU2Fiducial: {
      const int s = detail::require_int_size(f, "su2 fiducial frame");
      const double d_s = (2.0 * s + 1.0) * (2.0 * s + 3.0) * (s + 1.0) / 3.0;
      const double omega = compose(inverse(g), h).polar().omega;
      // D_s^{-1} sum_{m=-s}^{s} e^{i m omega} ((1+s)^2 - m^2)
      double acc = (1.0 + s) * (1.0 + s);
      for (int m = 1; m <= s; ++m)
        acc += 2.0 * std::cos(m * omega) * ((1.0 + s) * (1.0 + s) - double(m) * m);
      return complexd(acc / d_s, 0.0);
    }
    case FrameFamily::SU2Coherent: {
      const int two_j = detail::require_two_j(f);
      const EulerAngles e = compose(inverse(g), h).euler();
      const double mag = std::pow(std::cos(0.5 * e.beta), two_j);
      return std::polar(mag, -0.5 * two_j * (e.alpha + e.gamma));
    }
  }
  throw std::logic_error("overlap_closed_form: unknown family");
}

/// Overlap of a phase eigenstate projector <s;g| with a coherent state |t;h>,
/// D_s^{-1/2} e^{-t^2/2} sum_{k=0}^{s} t^k e^{i k (h-g)} / sqrt(k!).
inline complexd pe_cs_overlap(int s_pe, double g, double t, double h) {
  complexd acc = 0.0;
  double log_amp = -0.5 * t * t;
  for (int k = 0; k <= s_pe; ++k) {
    if (k > 0) log_amp += std::log(t) - 0.5 * std::log(double(k));
    acc += std::polar(std::exp(log_amp), k * (h - g));
  }
  return acc / std::sqrt(double(s_pe + 1));
}

}  // namespace qrf
