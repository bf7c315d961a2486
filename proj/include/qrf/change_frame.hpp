#pragma once

#include <optional>

#include "qrf/channels.hpp"
#include "qrf/frames.hpp"
#include "qrf/haar.hpp"
#include "qrf/metrics.hpp"

namespace qrf {

/// Order of the two frame projectors in the relational measurement. The
/// covariant construction places frame B at g*h; placing it at h*g instead
/// breaks group covariance for nonabelian groups unless h is central, and is
/// kept only as a negative control.
enum class ProjectorOrdering { FrameTimesOutcome, OutcomeTimesFrame };

struct PovmEffect {
  SpaceSpec space;
  Eigen::MatrixXcd mat;
};

/// Everything the end-to-end frame change needs: the system state, the two
/// frame families, the initial orientation a of frame A, the measurement
/// outcome h, an optional initial B state (default: the twirled frame
/// projector, i.e. maximally mixed on the frame space), and a Haar grid whose
/// bandlimit covers the S (x) A (x) B charge support.
struct ProcedureSpec {
  DensityOperator rho_S;
  FrameSpec frame_A;
  FrameSpec frame_B;
  GroupElement orientation_a;
  GroupElement outcome_h;
  std::optional<DensityOperator> rho_B;
  HaarGrid grid;
};

struct InstrumentOutcome {
  double outcome_density = 0.0;                 // P(h)
  std::optional<DensityOperator> post_state;    // normalized, on S (x) B; empty if P(h) ~ 0
  SpaceSpec post_space;
  Eigen::MatrixXcd raw;                         // unnormalized post-measurement state
};

namespace detail {

inline void require_measurement_family(const FrameSpec& f, const char* who) {
  if (!uniform_twirl_family(f.family))
    throw std::invalid_argument(std::string(who) +
                                ": measurement projectors need a frame family with a uniform "
                                "twirled projector");
}

inline void require_instrument_grid(const SpaceSpec& a_space, const SpaceSpec& b_space,
                                    const HaarGrid& grid, int needed, const char* who) {
  if (grid.group != a_space.group())
    throw std::invalid_argument(std::string(who) + ": grid group mismatch");
  if (grid.bandlimit < needed)
    throw std::invalid_argument(std::string(who) +
                                ": grid bandlimit below the measurement's charge support; the "
                                "POVM integral would be approximate");
  if (grid.group == Group::SU2 && (a_space.has_odd_charge() || b_space.has_odd_charge()) &&
      !grid.half_integer)
    throw std::invalid_argument(std::string(who) +
                                ": half-integer frame charges need the extended-range grid");
}

}  // namespace detail

/// Grid bandlimit the POVM effect integral needs to be exact.
inline int povm_bandlimit(const FrameSpec& frame_A, const FrameSpec& frame_B) {
  return frame_space(frame_A).max_charge() + frame_space(frame_B).max_charge();
}

/// Grid bandlimit the traced measurement (Tr_A of the update) needs: the
/// integrand carries the A and B contractions plus the surviving B projector.
inline int instrument_bandlimit(const FrameSpec& frame_A, const FrameSpec& frame_B) {
  return frame_space(frame_A).max_charge() + 2 * frame_space(frame_B).max_charge();
}

/// Grid bandlimit of the untraced update map, with both projectors intact.
inline int instrument_update_bandlimit(const FrameSpec& frame_A, const FrameSpec& frame_B) {
  return 2 * (frame_space(frame_A).max_charge() + frame_space(frame_B).max_charge());
}

/// Smallest bandlimit that makes every integral in the end-to-end procedure
/// (encoding twirls, the traced measurement, and the analytic prediction)
/// exact for the given system and frames.
inline int procedure_bandlimit(const SpaceSpec& system, const FrameSpec& frame_A,
                               const FrameSpec& frame_B) {
  const int q_s = system.max_charge();
  const int q_a = frame_space(frame_A).max_charge();
  const int q_b = frame_space(frame_B).max_charge();
  return std::max({q_s + q_a, q_s + q_b, q_a + 2 * q_b, q_b});
}

/// Rank-one projector |g><g|_A (x) |gh><gh|_B on the two frame systems.
inline DensityOperator relational_projector(const FrameSpec& frame_A, const FrameSpec& frame_B,
                                            const GroupElement& g, const GroupElement& h) {
  detail::require_measurement_family(frame_A, "relational_projector");
  detail::require_measurement_family(frame_B, "relational_projector");
  const Ket v = tensor(frame_state(frame_A, g), frame_state(frame_B, compose(g, h)));
  return projector(v);
}

/// Relational POVM effect E_h = D_A D_B int d{mu}(g) |g><g|_A (x) |gh><gh|_B.
inline PovmEffect povm_effect(const FrameSpec& frame_A, const FrameSpec& frame_B,
                              const GroupElement& h, const HaarGrid& grid) {
  detail::require_measurement_family(frame_A, "povm_effect");
  detail::require_measurement_family(frame_B, "povm_effect");
  const SpaceSpec a_space = frame_space(frame_A);
  const SpaceSpec b_space = frame_space(frame_B);
  detail::require_instrument_grid(a_space, b_space, grid,
                                  povm_bandlimit(frame_A, frame_B), "povm_effect");
  const double scale = frame_dimension_factor(frame_A) * frame_dimension_factor(frame_B);
  const int dim = a_space.dim() * b_space.dim();

  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd v(dim);
  for (int n = 0; n < grid.size(); ++n) {
    const GroupElement& g = grid.nodes[n];
    const Eigen::VectorXcd va = frame_state(frame_A, g).amp;
    const Eigen::VectorXcd vb = frame_state(frame_B, compose(g, h)).amp;
    for (Eigen::Index i = 0; i < va.size(); ++i) v.segment(i * vb.size(), vb.size()) = va[i] * vb;
    e.noalias() += (scale * grid.weights[n]) * (v * v.adjoint());
  }
  return {tensor(a_space, b_space), std::move(e)};
}

/// Unnormalized measurement-update map M^h applied to a state on
/// (spectators...) (x) A (x) B, with A and B the last two tensor factors.
inline Eigen::MatrixXcd instrument_update(
    const Eigen::MatrixXcd& sigma, const SpaceSpec& space, const FrameSpec& frame_A,
    const FrameSpec& frame_B, const GroupElement& h, const HaarGrid& grid,
    ProjectorOrdering ordering = ProjectorOrdering::FrameTimesOutcome) {
  detail::require_measurement_family(frame_A, "instrument_update");
  detail::require_measurement_family(frame_B, "instrument_update");
  const SpaceSpec a_space = frame_space(frame_A);
  const SpaceSpec b_space = frame_space(frame_B);
  detail::require_instrument_grid(a_space, b_space, grid,
                                  instrument_update_bandlimit(frame_A, frame_B),
                                  "instrument_update");
  const auto& factors = space.factors();
  if (factors.size() < 2 || !same_space(factors[factors.size() - 2], a_space) ||
      !same_space(factors.back(), b_space))
    throw std::invalid_argument("instrument_update: space must end with the A and B frame factors");

  const int d_a = a_space.dim();
  const int d_b = b_space.dim();
  const int d_ab = d_a * d_b;
  const int d_s = space.dim() / d_ab;
  const double scale = frame_dimension_factor(frame_A) * frame_dimension_factor(frame_B);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  Eigen::VectorXcd v(d_ab);
  Eigen::MatrixXcd sv(space.dim(), d_s);
  Eigen::MatrixXcd t(d_s, d_s);
  for (int n = 0; n < grid.size(); ++n) {
    const GroupElement& g = grid.nodes[n];
    const GroupElement b_at = ordering == ProjectorOrdering::FrameTimesOutcome
                                  ? compose(g, h)
                                  : compose(h, g);
    const Eigen::VectorXcd va = frame_state(frame_A, g).amp;
    const Eigen::VectorXcd vb = frame_state(frame_B, b_at).amp;
    for (int i = 0; i < d_a; ++i) v.segment(i * d_b, d_b) = va[i] * vb;
    for (int sp = 0; sp < d_s; ++sp) sv.col(sp) = sigma.middleCols(sp * d_ab, d_ab) * v;
    for (int s = 0; s < d_s; ++s) t.row(s) = v.adjoint() * sv.middleRows(s * d_ab, d_ab);
    out.noalias() += (scale * grid.weights[n]) * kron(t, Eigen::MatrixXcd(v * v.adjoint()));
  }
  return out;
}

/// Outcome density P(h) = tr[E_h sigma] evaluated by contracting the effect
/// against the frame marginal, without materializing E_h or the update map.
inline double outcome_density(const DensityOperator& sigma_SAB, const FrameSpec& frame_A,
                              const FrameSpec& frame_B, const GroupElement& h,
                              const HaarGrid& grid) {
  detail::require_measurement_family(frame_A, "outcome_density");
  detail::require_measurement_family(frame_B, "outcome_density");
  const SpaceSpec a_space = frame_space(frame_A);
  const SpaceSpec b_space = frame_space(frame_B);
  detail::require_instrument_grid(a_space, b_space, grid,
                                  povm_bandlimit(frame_A, frame_B), "outcome_density");
  const int d_a = a_space.dim();
  const int d_b = b_space.dim();
  const int d_ab = d_a * d_b;
  const int d_s = sigma_SAB.dim() / d_ab;

  // frame marginal tr_S sigma
  Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(d_ab, d_ab);
  for (int s = 0; s < d_s; ++s)
    tau += sigma_SAB.mat().block(s * d_ab, s * d_ab, d_ab, d_ab);

  const double scale = frame_dimension_factor(frame_A) * frame_dimension_factor(frame_B);
  double p = 0.0;
  Eigen::VectorXcd v(d_ab);
  for (int n = 0; n < grid.size(); ++n) {
    const GroupElement& g = grid.nodes[n];
    const Eigen::VectorXcd va = frame_state(frame_A, g).amp;
    const Eigen::VectorXcd vb = frame_state(frame_B, compose(g, h)).amp;
    for (int i = 0; i < d_a; ++i) v.segment(i * d_b, d_b) = va[i] * vb;
    p += scale * grid.weights[n] * complexd(v.adjoint() * (tau * v)).real();
  }
  return p;
}

/// The relational measurement for outcome h applied to sigma on
/// S (x) A (x) B, followed by discarding A: returns the outcome density
/// P(h) = tr M^h(sigma) and the post-measurement state on S (x) B.
inline InstrumentOutcome instrument(
    const DensityOperator& sigma_SAB, const FrameSpec& frame_A, const FrameSpec& frame_B,
    const GroupElement& h, const HaarGrid& grid,
    ProjectorOrdering ordering = ProjectorOrdering::FrameTimesOutcome) {
  detail::require_measurement_family(frame_A, "instrument");
  detail::require_measurement_family(frame_B, "instrument");
  const SpaceSpec a_space = frame_space(frame_A);
  const SpaceSpec b_space = frame_space(frame_B);
  detail::require_instrument_grid(a_space, b_space, grid,
                                  instrument_bandlimit(frame_A, frame_B), "instrument");
  const SpaceSpec& space = sigma_SAB.space();
  const auto& factors = space.factors();
  if (factors.size() < 3 || !same_space(factors[factors.size() - 2], a_space) ||
      !same_space(factors.back(), b_space))
    throw std::invalid_argument("instrument: state must live on S (x) A (x) B");

  SpaceSpec s_space = factors[0];
  for (std::size_t i = 1; i + 2 < factors.size(); ++i) s_space = tensor(s_space, factors[i]);
  const int d_a = a_space.dim();
  const int d_b = b_space.dim();
  const int d_ab = d_a * d_b;
  const int d_s = space.dim() / d_ab;
  const double scale = frame_dimension_factor(frame_A) * frame_dimension_factor(frame_B);

  Eigen::MatrixXcd raw = Eigen::MatrixXcd::Zero(d_s * d_b, d_s * d_b);
  Eigen::VectorXcd v(d_ab);
  Eigen::MatrixXcd sv(space.dim(), d_s);
  Eigen::MatrixXcd t(d_s, d_s);
  for (int n = 0; n < grid.size(); ++n) {
    const GroupElement& g = grid.nodes[n];
    const GroupElement b_at = ordering == ProjectorOrdering::FrameTimesOutcome
                                  ? compose(g, h)
                                  : compose(h, g);
    const Eigen::VectorXcd va = frame_state(frame_A, g).amp;
    const Eigen::VectorXcd vb = frame_state(frame_B, b_at).amp;
    for (int i = 0; i < d_a; ++i) v.segment(i * d_b, d_b) = va[i] * vb;
    // T_{ss'} = <v| sigma_{ss'} |v> over the AB factors, then the surviving
    // B marginal is the projector onto the measured B frame state.
    for (int sp = 0; sp < d_s; ++sp) sv.col(sp) = sigma_SAB.mat().middleCols(sp * d_ab, d_ab) * v;
    for (int s = 0; s < d_s; ++s) t.row(s) = v.adjoint() * sv.middleRows(s * d_ab, d_ab);
    raw.noalias() += (scale * grid.weights[n]) * kron(t, Eigen::MatrixXcd(vb * vb.adjoint()));
  }

  InstrumentOutcome res;
  res.post_space = tensor(s_space, b_space);
  res.outcome_density = raw.trace().real();
  res.raw = std::move(raw);
  if (res.outcome_density > 1e-12) {
    DensityOperator post(res.post_space, res.raw / res.outcome_density);
    post.validate();
    res.post_state = std::move(post);
  }
  return res;
}

/// Full initial state of the procedure: the relational encoding of rho_S with
/// frame A at orientation a, tensored with the non-implicated (G-invariant)
/// B state.
inline DensityOperator initial_state(const ProcedureSpec& spec) {
  if (spec.rho_B && !same_space(spec.rho_B->space(), frame_space(spec.frame_B)))
    throw std::invalid_argument("initial_state: rho_B is not on the B frame space");
  const DensityOperator psi_a = projector(frame_state(spec.frame_A, spec.orientation_a));
  const DensityOperator sigma_SA = encode(spec.rho_S, psi_a, spec.grid);
  const DensityOperator sigma_B =
      spec.rho_B ? g_twirl(*spec.rho_B, spec.grid)
                 : DensityOperator::maximally_mixed(frame_space(spec.frame_B));
  return tensor(sigma_SA, sigma_B);
}

/// End-to-end change of quantum reference frame: build the initial state,
/// measure the relative orientation h of the two frames, discard A.
inline InstrumentOutcome change_frame(const ProcedureSpec& spec) {
  const DensityOperator sigma_SAB = initial_state(spec);
  return instrument(sigma_SAB, spec.frame_A, spec.frame_B, spec.outcome_h, spec.grid);
}

/// Analytic final state: re-encoding of the decohered system with frame B at
/// orientation h, i.e. Encode_B(h) of [kernel noise map at orientation a](rho).
/// Independent of the instrument path; the pipeline must reproduce it.
inline DensityOperator predicted_final_state(const ProcedureSpec& spec) {
  const DensityOperator rho_prime =
      recover_encode_kernel(spec.rho_S, spec.frame_A, spec.orientation_a, spec.grid);
  const DensityOperator psi_h = projector(frame_state(spec.frame_B, spec.outcome_h));
  return encode(rho_prime, psi_h, spec.grid);
}

}  // namespace qrf
