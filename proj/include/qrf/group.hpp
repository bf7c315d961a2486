#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace qrf {

using complexd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class Group { U1, SU2 };

inline const char* group_name(Group g) { return g == Group::U1 ? "u1" : "su2"; }

/// Axis-angle parameters of an SU(2) element: rotation angle omega about the
/// axis n = (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)).
struct PolarAngles {
  double omega;
  double theta;
  double phi;
};

/// z-y-z Euler angles: U = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz).
struct EulerAngles {
  double alpha;
  double beta;
  double gamma;
};

namespace detail {

inline double wrap_angle(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  if (y == period) y = 0.0;
  return y;
}

}  // namespace detail

/// An element of U(1) or SU(2).
///
/// U(1) elements are stored as a phase in [0, 2pi). SU(2) elements are stored
/// as the 2x2 special-unitary matrix; the axis-angle and Euler parametrizations
/// are derived views, which avoids the coordinate singularities at omega = 0
/// and beta = 0. The axis-angle convention is U = exp(i omega n.J) so that the
/// spin-1/2 matrix is cos(omega/2) I + i sin(omega/2) n.sigma.
class GroupElement {
 public:
  static GroupElement identity(Group group) {
    if (group == Group::U1) return u1(0.0);
    return su2_matrix(Eigen::Matrix2cd::Identity());
  }

  static GroupElement u1(double theta) {
    GroupElement g;
    g.group_ = Group::U1;
    g.theta_ = detail::wrap_angle(theta, two_pi);
    return g;
  }

  static GroupElement su2_matrix(const Eigen::Matrix2cd& u) {
    GroupElement g;
    g.group_ = Group::SU2;
    g.u_ = u;
    return g;
  }

  static GroupElement su2_polar(double omega, double theta, double phi) {
    const double c = std::cos(0.5 * omega);
    const double s = std::sin(0.5 * omega);
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    // cos(w/2) I + i sin(w/2) n.sigma
    Eigen::Matrix2cd u;
    u(0, 0) = complexd(c, s * nz);
    u(0, 1) = complexd(s * ny, s * nx);
    u(1, 0) = complexd(-s * ny, s * nx);
    u(1, 1) = complexd(c, -s * nz);
    return su2_matrix(u);
  }

  static GroupElement su2_euler(double alpha, double beta, double gamma) {
    const double cb = std::cos(0.5 * beta);
    const double sb = std::sin(0.5 * beta);
    const complexd ea = std::polar(1.0, -0.5 * alpha);
    const complexd eg = std::polar(1.0, -0.5 * gamma);
    Eigen::Matrix2cd u;
    u(0, 0) = ea * cb * eg;
    u(0, 1) = -ea * sb * std::conj(eg);
    u(1, 0) = std::conj(ea) * sb * eg;
    u(1, 1) = std::conj(ea) * cb * std::conj(eg);
    return su2_matrix(u);
  }

  Group group() const { return group_; }

  /// U(1) phase in [0, 2pi).
  double theta() const {
    require_group(Group::U1);
    return theta_;
  }

  const Eigen::Matrix2cd& matrix2() const {
    require_group(Group::SU2);
    return u_;
  }

  /// Axis-angle view with omega in [0, 2pi]; omega in (pi, 2pi] reaches the
  /// elements that project to the same rotation as (2pi - omega, -n).
  PolarAngles polar() const {
    require_group(Group::SU2);
    const double w = 0.5 * (u_(0, 0).real() + u_(1, 1).real());
    const double z = 0.5 * (u_(0, 0).imag() - u_(1, 1).imag());
    const double x = 0.5 * (u_(0, 1).imag() + u_(1, 0).imag());
    const double y = 0.5 * (u_(0, 1).real() - u_(1, 0).real());
    const double v = std::sqrt(x * x + y * y + z * z);
    PolarAngles p;
    p.omega = 2.0 * std::atan2(v, w);
    if (v < 1e-15) {
      p.theta = 0.0;
      p.phi = 0.0;
      return p;
    }
    p.theta = std::acos(std::clamp(z / v, -1.0, 1.0));
    p.phi = detail::wrap_angle(std::atan2(y, x), two_pi);
    return p;
  }

  /// Axis-angle view folded onto the rotation range omega in [0, pi] by the
  /// identification (omega, n) ~ (2pi - omega, -n). Loses the overall sign of
  /// the SU(2) element, which is irrelevant for integer spins.
  PolarAngles polar_folded() const {
    PolarAngles p = polar();
    if (p.omega > pi) {
      p.omega = two_pi - p.omega;
      p.theta = pi - p.theta;
      p.phi = detail::wrap_angle(p.phi + pi, two_pi);
    }
    return p;
  }

  /// Euler view with alpha in [0, 2pi], beta in [0, pi], gamma in [0, 4pi).
  /// gamma beyond 2pi is needed for the elements whose rotation already
  /// appeared at gamma - 2pi with opposite sign.
  EulerAngles euler() const {
    require_group(Group::SU2);
    const double c = std::abs(u_(0, 0));
    const double s = std::abs(u_(1, 0));
    EulerAngles e;
    e.beta = 2.0 * std::atan2(s, c);
    double sum, diff;  // (alpha+gamma)/2, (alpha-gamma)/2
    if (s < 1e-15) {
      sum = -std::arg(u_(0, 0));
      diff = 0.0;
    } else if (c < 1e-15) {
      sum = 0.0;
      diff = std::arg(u_(1, 0));
    } else {
      sum = -std::arg(u_(0, 0));
      diff = std::arg(u_(1, 0));
    }
    double alpha = sum + diff;
    double gamma = sum - diff;
    if (alpha < 0.0 && gamma < 0.0) {
      alpha += two_pi;
      gamma += two_pi;
    } else if (alpha < 0.0) {
      alpha += two_pi;
      gamma += two_pi;  // joint shift keeps the element fixed
    } else if (gamma < 0.0) {
      gamma += 2.0 * two_pi;
    }
    e.alpha = alpha;
    e.gamma = gamma;
    return e;
  }

  bool is_identity(double tol = 1e-12) const {
    if (group_ == Group::U1) {
      double d = std::min(theta_, two_pi - theta_);
      return d <= tol;
    }
    return (u_ - Eigen::Matrix2cd::Identity()).norm() <= tol;
  }

 private:
  void require_group(Group g) const {
    if (group_ != g) throw std::invalid_argument("group element: wrong group for this accessor");
  }

  Group group_ = Group::U1;
  double theta_ = 0.0;
  Eigen::Matrix2cd u_ = Eigen::Matrix2cd::Identity();
};

inline void require_same_group(const GroupElement& a, const GroupElement& b) {
  if (a.group() != b.group())
    throw std::invalid_argument("group elements from different groups cannot be combined");
}

inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
  require_same_group(a, b);
  if (a.group() == Group::U1) return GroupElement::u1(a.theta() + b.theta());
  return GroupElement::su2_matrix(a.matrix2() * b.matrix2());
}

inline GroupElement inverse(const GroupElement& a) {
  if (a.group() == Group::U1) return GroupElement::u1(-a.theta());
  return GroupElement::su2_matrix(a.matrix2().adjoint());
}

/// Exact equality of group elements up to tol (U(1): phase distance mod 2pi;
/// SU(2): matrix norm, sign included).
inline bool approx_equal(const GroupElement& a, const GroupElement& b, double tol = 1e-12) {
  require_same_group(a, b);
  if (a.group() == Group::U1) {
    double d = std::abs(a.theta() - b.theta());
    d = std::min(d, two_pi - d);
    return d <= tol;
  }
  return (a.matrix2() - b.matrix2()).norm() <= tol;
}

/// Equality as rotations: SU(2) elements compare equal up to overall sign.
inline bool rotation_equal(const GroupElement& a, const GroupElement& b, double tol = 1e-12) {
  require_same_group(a, b);
  if (a.group() == Group::U1) return approx_equal(a, b, tol);
  return (a.matrix2() - b.matrix2()).norm() <= tol ||
         (a.matrix2() + b.matrix2()).norm() <= tol;
}

}  // namespace qrf
