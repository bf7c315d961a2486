#pragma once

#include <functional>
#include <iostream>
#include <optional>

#include "qrf/frames.hpp"
#include "qrf/haar.hpp"
#include "qrf/rep.hpp"
#include "qrf/spaces.hpp"
#include "qrf/states.hpp"

namespace qrf {

enum class TraceTag { Preserving, Decreasing };

/// A channel applied functionally: the apply contract maps matrices over the
/// input space to matrices over the output space. Quadrature-backed channels
/// sum conjugated inputs over grid nodes in ascending node order, which keeps
/// runs bit-reproducible.
struct Channel {
  SpaceSpec input;
  SpaceSpec output;
  TraceTag tag = TraceTag::Preserving;
  std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)> apply_matrix;

  DensityOperator operator()(const DensityOperator& rho) const {
    if (!same_space(rho.space(), input))
      throw std::invalid_argument("channel: input is on the wrong space");
    DensityOperator out(output, apply_matrix(rho.mat()));
    if (tag == TraceTag::Preserving) out.validate();
    return out;
  }
};

namespace detail {

inline void require_twirl_grid(const SpaceSpec& space, const HaarGrid& grid, const char* who) {
  if (space.group() != grid.group)
    throw std::invalid_argument(std::string(who) + ": grid group does not match the space");
  if (grid.bandlimit < space.max_charge())
    throw std::invalid_argument(std::string(who) +
                                ": grid bandlimit below the space's charge support; "
                                "the integral would be approximate");
  if (space.group() == Group::SU2 && space.has_odd_charge() && !grid.half_integer)
    throw std::invalid_argument(std::string(who) +
                                ": half-integer charges need the extended-range grid");
}

inline Eigen::MatrixXcd g_twirl_matrix(const Eigen::MatrixXcd& rho, const SpaceSpec& space,
                                       const HaarGrid& grid) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  if (space.group() == Group::U1) {
    const auto q = space.basis_charges();
    const int d = space.dim();
    for (int n = 0; n < grid.size(); ++n) {
      const double theta = grid.nodes[n].theta();
      const double w = grid.weights[n];
      Eigen::VectorXcd p(d);
      for (int i = 0; i < d; ++i) p[i] = std::polar(1.0, q[i] * theta);
      out.noalias() += w * (p.asDiagonal() * rho * p.conjugate().asDiagonal());
    }
    return out;
  }
  for (int n = 0; n < grid.size(); ++n) {
    const Eigen::MatrixXcd u = rep_unitary(space, grid.nodes[n]);
    out.noalias() += grid.weights[n] * (u * rho * u.adjoint());
  }
  return out;
}

/// Depolarize the irrep factor of one charge-sector block, keep the
/// multiplicity factor.
inline Eigen::MatrixXcd depolarize_irrep(const Eigen::MatrixXcd& block, int irrep_dim,
                                         int mult_dim) {
  Eigen::MatrixXcd tr_m = Eigen::MatrixXcd::Zero(mult_dim, mult_dim);
  for (int r = 0; r < mult_dim; ++r)
    for (int rp = 0; rp < mult_dim; ++rp) {
      complexd acc = 0.0;
      for (int m = 0; m < irrep_dim; ++m) acc += block(m * mult_dim + r, m * mult_dim + rp);
      tr_m(r, rp) = acc;
    }
  return kron(Eigen::MatrixXcd::Identity(irrep_dim, irrep_dim) / double(irrep_dim), tr_m);
}

}  // namespace detail

/// G-twirl by Haar quadrature: integral of U(g) rho U(g)^dag over the grid.
/// Exact (to round-off) because the grid bandlimit must cover the space.
inline DensityOperator g_twirl(const DensityOperator& rho, const HaarGrid& grid) {
  detail::require_twirl_grid(rho.space(), grid, "g_twirl");
  DensityOperator out(rho.space(), detail::g_twirl_matrix(rho.mat(), rho.space(), grid));
  out.validate();
  return out;
}

/// G-twirl in decomposed form: project onto charge sectors, depolarize each
/// irrep subsystem, leave multiplicity subsystems untouched. Supported for
/// U(1) spaces (composites included, via total-charge blocks) and for
/// elementary SU(2) spaces with a declared sector structure. SU(2) tensor
/// products have no declared decomposition here; use the quadrature twirl.
inline DensityOperator g_twirl_exact(const DensityOperator& rho) {
  const SpaceSpec& space = rho.space();
  if (space.group() == Group::U1) {
    const auto q = space.basis_charges();
    Eigen::MatrixXcd out = rho.mat();
    for (int i = 0; i < space.dim(); ++i)
      for (int j = 0; j < space.dim(); ++j)
        if (q[i] != q[j]) out(i, j) = 0.0;
    return DensityOperator(space, std::move(out));
  }
  if (space.is_composite())
    throw std::invalid_argument(
        "g_twirl_exact: SU(2) tensor products carry no declared sector decomposition; "
        "fall back to the quadrature twirl");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  int off = 0;
  for (const auto& sec : space.sectors()) {
    out.block(off, off, sec.dim(), sec.dim()) = detail::depolarize_irrep(
        rho.mat().block(off, off, sec.dim(), sec.dim()), sec.irrep_dim, sec.mult_dim);
    off += sec.dim();
  }
  return DensityOperator(space, std::move(out));
}

/// Relational encoding: G-twirl of system (x) frame.
inline DensityOperator encode(const DensityOperator& rho_S, const DensityOperator& rho_R,
                              const HaarGrid& grid) {
  DensityOperator joint = tensor(rho_S, rho_R);
  detail::require_twirl_grid(joint.space(), grid, "encode");
  return g_twirl(joint, grid);
}

/// Relational encoding via the decomposed twirl (U(1) composites).
inline DensityOperator encode_exact(const DensityOperator& rho_S, const DensityOperator& rho_R) {
  return g_twirl_exact(tensor(rho_S, rho_R));
}

/// Recovery map: covariant frame measurement on the last tensor factor with
/// effects D_s |g><g| d{mu}(g), followed by the correcting rotation U_S(g^-1).
/// Trace preserving for frame families whose twirled projector is uniform.
inline DensityOperator recover(const DensityOperator& sigma_SR, const FrameSpec& frame,
                               const HaarGrid& grid) {
  if (!uniform_twirl_family(frame.family))
    throw std::invalid_argument(
        "recover: frame family's twirled projector is not uniform, the covariant POVM "
        "would not resolve the identity");
  const SpaceSpec& space = sigma_SR.space();
  if (!space.is_composite())
    throw std::invalid_argument("recover: state must be on a declared system (x) frame space");
  const SpaceSpec r_space = frame_space(frame);
  const SpaceSpec& last = space.factors().back();
  if (!same_space(last, r_space))
    throw std::invalid_argument("recover: last tensor factor does not match the frame family");
  detail::require_twirl_grid(space, grid, "recover");

  const int d_r = r_space.dim();
  const int d_s = space.dim() / d_r;
  SpaceSpec s_space = space.factors()[0];
  for (std::size_t i = 1; i + 1 < space.factors().size(); ++i)
    s_space = tensor(s_space, space.factors()[i]);

  // one-node spot check that the input is G-invariant
  if (grid.size() > 1) {
    const Eigen::MatrixXcd u = rep_unitary(space, grid.nodes[1]);
    const double drift = (u * sigma_SR.mat() * u.adjoint() - sigma_SR.mat()).norm();
    if (drift > 1e-8 * std::max(1.0, sigma_SR.mat().norm()))
      std::cerr << "recover: warning: input state is not G-invariant (drift " << drift << ")\n";
  }

  const double d_factor = frame_dimension_factor(frame);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_s, d_s);
  Eigen::MatrixXcd sv(d_s * d_r, d_s);
  Eigen::MatrixXcd t(d_s, d_s);
  for (int n = 0; n < grid.size(); ++n) {
    const Eigen::VectorXcd v = frame_state(frame, grid.nodes[n]).amp;
    for (int sp = 0; sp < d_s; ++sp)
      sv.col(sp) = sigma_SR.mat().middleCols(sp * d_r, d_r) * v;
    for (int s = 0; s < d_s; ++s) t.row(s) = v.adjoint() * sv.middleRows(s * d_r, d_r);
    const Eigen::MatrixXcd u_inv = rep_unitary(s_space, inverse(grid.nodes[n]));
    out.noalias() += (grid.weights[n] * d_factor) * (u_inv * t * u_inv.adjoint());
  }
  DensityOperator res(s_space, std::move(out));
  res.validate();
  return res;
}

namespace detail {

/// Orientation-overlap weight of the decoherence kernel: D_s |<g|psi(a)>|^2,
/// with the coherent-state family using the infinite-cutoff phase-eigenstate
/// projectors (the D factor is absorbed into the squared amplitude).
inline std::function<double(const GroupElement&)> kernel_weight(const FrameSpec& frame,
                                                                const GroupElement& orientation) {
  if (frame.family == FrameFamily::U1Coherent) {
    const Eigen::VectorXcd amps = frame_state(frame, orientation).amp;
    return [amps](const GroupElement& g) {
      complexd acc = 0.0;
      const double theta = g.theta();
      for (Eigen::Index k = 0; k < amps.size(); ++k)
        acc += amps[k] * std::polar(1.0, -double(k) * theta);
      return std::norm(acc);
    };
  }
  const double d_factor = frame_dimension_factor(frame);
  const Ket psi = frame_state(frame, orientation);
  return [d_factor, psi, frame](const GroupElement& g) {
    const Eigen::VectorXcd vg = frame_state(frame, g).amp;
    return d_factor * std::norm(complexd(vg.adjoint() * psi.amp));
  };
}

inline int kernel_bandlimit(const FrameSpec& frame, const SpaceSpec& system) {
  return frame_space(frame).max_charge() + system.max_charge();
}

inline Eigen::MatrixXcd kernel_matrix(const Eigen::MatrixXcd& rho, const SpaceSpec& system,
                                      const FrameSpec& frame, const GroupElement& orientation,
                                      const HaarGrid& grid) {
  const auto weight = kernel_weight(frame, orientation);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (int n = 0; n < grid.size(); ++n) {
    const double w = grid.weights[n] * weight(grid.nodes[n]);
    if (w == 0.0) continue;
    const Eigen::MatrixXcd u_inv = rep_unitary(system, inverse(grid.nodes[n]));
    out.noalias() += w * (u_inv * rho * u_inv.adjoint());
  }
  return out;
}

}  // namespace detail

/// The recover-after-encode noise map evaluated directly from its kernel:
/// rho |-> D_s int d{mu}(g) |<g|psi(a)>|^2 U_S(g^-1) rho U_S(g^-1)^dag.
/// Equals recover(encode(rho, psi(a))) and serves as its independent route.
inline DensityOperator recover_encode_kernel(const DensityOperator& rho_S, const FrameSpec& frame,
                                             const GroupElement& orientation,
                                             const HaarGrid& grid) {
  if (rho_S.space().group() != frame_group(frame))
    throw std::invalid_argument("recover_encode_kernel: system and frame group mismatch");
  if (grid.bandlimit < detail::kernel_bandlimit(frame, rho_S.space()))
    throw std::invalid_argument("recover_encode_kernel: grid bandlimit too small for the "
                                "frame-system charge support; the integral would be approximate");
  if (rho_S.space().group() == Group::SU2 && rho_S.space().has_odd_charge() && !grid.half_integer)
    throw std::invalid_argument("recover_encode_kernel: half-integer system needs the "
                                "extended-range grid");
  DensityOperator out(rho_S.space(), detail::kernel_matrix(rho_S.mat(), rho_S.space(), frame,
                                                           orientation, grid));
  out.validate();
  return out;
}

/// Decoherence map F of a frame change: the kernel mixture with the frame at
/// the identity orientation. Trace preserving; a convex mixture of unitaries.
inline DensityOperator decoherence_F(const DensityOperator& rho_S, const FrameSpec& frame,
                                     const HaarGrid& grid) {
  return recover_encode_kernel(rho_S, frame, GroupElement::identity(frame_group(frame)), grid);
}

/// Uniform average over z-rotations: zeroes every coherence between distinct
/// Jz eigenvalues. Idempotent.
inline DensityOperator dephase_z(const DensityOperator& rho) {
  const auto two_m = rho.space().basis_two_jz();
  Eigen::MatrixXcd out = rho.mat();
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j)
      if (two_m[i] != two_m[j]) out(i, j) = 0.0;
  return DensityOperator(rho.space(), std::move(out));
}

/// Composed form of the direction-indicator decoherence map: dephase, mix
/// y-rotations against the weight (2j+1) cos^{4j}(beta/2) sin(beta)/2 on
/// beta in [0, pi], dephase again. Gauss-Legendre in cos(beta), sized from
/// the frame and system spins so the mixture integral is exact.
inline DensityOperator su2_cs_decoherence_composed(const DensityOperator& rho_S,
                                                   int frame_two_j) {
  if (rho_S.space().group() != Group::SU2)
    throw std::invalid_argument("su2_cs_decoherence_composed: SU(2) systems only");
  const int order = frame_two_j + rho_S.space().max_charge() + 2;
  std::vector<double> u, w;
  detail::gauss_legendre(order, u, w);
  const DensityOperator inner = dephase_z(rho_S);
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(rho_S.dim(), rho_S.dim());
  for (int i = 0; i < order; ++i) {
    const double beta = std::acos(std::clamp(u[i], -1.0, 1.0));
    const double cs2 = 0.5 * (1.0 + u[i]);  // cos^2(beta/2)
    const double weight = 0.5 * w[i] * (frame_two_j + 1.0) * std::pow(cs2, frame_two_j);
    const Eigen::MatrixXcd ry = rep_unitary(rho_S.space(),
                                            GroupElement::su2_euler(0.0, -beta, 0.0));
    mixed.noalias() += weight * (ry * inner.mat() * ry.adjoint());
  }
  DensityOperator out = dephase_z(DensityOperator(rho_S.space(), std::move(mixed)));
  out.validate();
  return out;
}

inline Channel make_decoherence_channel(const SpaceSpec& system, const FrameSpec& frame,
                                        const HaarGrid& grid) {
  Channel ch;
  ch.input = system;
  ch.output = system;
  ch.tag = TraceTag::Preserving;
  const GroupElement e = GroupElement::identity(frame_group(frame));
  ch.apply_matrix = [system, frame, e, grid](const Eigen::MatrixXcd& x) {
    return detail::kernel_matrix(x, system, frame, e, grid);
  };
  return ch;
}

inline Channel make_g_twirl_channel(const SpaceSpec& space, const HaarGrid& grid) {
  detail::require_twirl_grid(space, grid, "make_g_twirl_channel");
  Channel ch;
  ch.input = space;
  ch.output = space;
  ch.tag = TraceTag::Preserving;
  ch.apply_matrix = [space, grid](const Eigen::MatrixXcd& x) {
    return detail::g_twirl_matrix(x, space, grid);
  };
  return ch;
}

/// Dense superoperator of a channel in the column-major vec convention.
/// Only offered for small systems; the channels are meant to be applied
/// functionally.
inline Eigen::MatrixXcd channel_superoperator(const Channel& ch) {
  const int d = ch.input.dim();
  if (d > 64)
    throw std::invalid_argument("channel_superoperator: only offered for dimension <= 64");
  const int d_out = ch.output.dim();
  Eigen::MatrixXcd s(d_out * d_out, d * d);
  Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      unit.setZero();
      unit(i, j) = 1.0;
      const Eigen::MatrixXcd out = ch.apply_matrix(unit);
      s.col(j * d + i) = Eigen::Map<const Eigen::VectorXcd>(out.data(), d_out * d_out);
    }
  return s;
}

}  // namespace qrf
