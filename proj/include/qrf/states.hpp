#pragma once

#include <optional>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qrf/spaces.hpp"

namespace qrf {

inline constexpr double ket_norm_tol = 1e-12;
inline constexpr double herm_tol = 1e-12;
inline constexpr double trace_tol = 1e-12;
inline constexpr double psd_tol = 1e-10;  // quadrature round-off allowance

struct Ket {
  SpaceSpec space;
  Eigen::VectorXcd amp;

  Ket() = default;
  Ket(SpaceSpec s, Eigen::VectorXcd a) : space(std::move(s)), amp(std::move(a)) {
    if (amp.size() != space.dim()) throw std::invalid_argument("ket: dimension mismatch");
  }

  void validate(double tol = ket_norm_tol) const {
    if (std::abs(amp.norm() - 1.0) > tol) throw std::domain_error("ket: not unit norm");
  }
};

class DensityOperator {
 public:
  DensityOperator() = default;
  DensityOperator(SpaceSpec s, Eigen::MatrixXcd m) : space_(std::move(s)), mat_(std::move(m)) {
    if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
      throw std::invalid_argument("density operator: dimension mismatch");
  }

  static DensityOperator from_ket(const Ket& psi) {
    return DensityOperator(psi.space, psi.amp * psi.amp.adjoint());
  }

  static DensityOperator maximally_mixed(const SpaceSpec& space) {
    const int d = space.dim();
    return DensityOperator(space, Eigen::MatrixXcd::Identity(d, d) / double(d));
  }

  const SpaceSpec& space() const { return space_; }
  const Eigen::MatrixXcd& mat() const { return mat_; }
  Eigen::MatrixXcd& mat() { return mat_; }
  int dim() const { return space_.dim(); }

  /// Hermiticity and unit trace; positivity (min eigenvalue >= -psd_tol) is
  /// included when check_psd is set. Values inside the tolerance window are
  /// accepted as-is; they are never clamped in stored states.
  void validate(bool check_psd = true) const {
    if ((mat_ - mat_.adjoint()).norm() > herm_tol * std::max(1.0, mat_.norm()))
      throw std::domain_error("density operator: not hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > trace_tol || std::abs(mat_.trace().imag()) > trace_tol)
      throw std::domain_error("density operator: trace not one");
    if (check_psd) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -psd_tol)
        throw std::domain_error("density operator: negative eigenvalue beyond tolerance");
    }
  }

 private:
  SpaceSpec space_;
  Eigen::MatrixXcd mat_;
};

inline DensityOperator projector(const Ket& psi) { return DensityOperator::from_ket(psi); }

inline Ket tensor(const Ket& a, const Ket& b) {
  Eigen::VectorXcd v(a.amp.size() * b.amp.size());
  for (Eigen::Index i = 0; i < a.amp.size(); ++i)
    v.segment(i * b.amp.size(), b.amp.size()) = a.amp[i] * b.amp;
  return Ket(tensor(a.space, b.space), std::move(v));
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(tensor(a.space(), b.space()), kron(a.mat(), b.mat()));
}

/// Partial trace keeping the listed factors (ascending indices, original
/// order preserved). The space must carry a declared tensor factorization.
inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  const SpaceSpec& space = rho.space();
  if (!space.is_composite())
    throw std::invalid_argument("partial_trace: space has no declared tensor factorization");
  const auto dims = space.factor_dims();
  const int n = static_cast<int>(dims.size());
  if (keep.empty()) throw std::invalid_argument("partial_trace: must keep at least one factor");
  std::vector<bool> kept(n, false);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) throw std::invalid_argument("partial_trace: bad factor index");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep indices must be ascending");
    kept[keep[i]] = true;
  }

  int dim_keep = 1, dim_tr = 1;
  for (int i = 0; i < n; ++i) (kept[i] ? dim_keep : dim_tr) *= dims[i];

  // strides of each factor in the flat row-major index
  std::vector<long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  // enumerate kept and traced multi-indices as flat offsets
  auto offsets = [&](bool which_kept) {
    std::vector<long> offs{0};
    for (int i = 0; i < n; ++i) {
      if (kept[i] != which_kept) continue;
      std::vector<long> next;
      next.reserve(offs.size() * dims[i]);
      for (long base : offs)
        for (int k = 0; k < dims[i]; ++k) next.push_back(base + k * stride[i]);
      offs = std::move(next);
    }
    return offs;
  };
  const std::vector<long> keep_offs = offsets(true);
  const std::vector<long> tr_offs = offsets(false);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_keep, dim_keep);
  for (int a = 0; a < dim_keep; ++a)
    for (int b = 0; b < dim_keep; ++b) {
      complexd acc = 0.0;
      for (long t : tr_offs) acc += rho.mat()(keep_offs[a] + t, keep_offs[b] + t);
      out(a, b) = acc;
    }

  SpaceSpec out_space = space.factors()[keep[0]];
  for (std::size_t i = 1; i < keep.size(); ++i)
    out_space = tensor(out_space, space.factors()[keep[i]]);
  return DensityOperator(std::move(out_space), std::move(out));
}

}  // namespace qrf
