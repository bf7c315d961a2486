#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrf/group.hpp"

namespace qrf {

/// One charge sector: an irrep block M^(q) tensored with a multiplicity
/// subsystem N^(q). Charge q is photon number for U(1) (irrep_dim 1) and 2j
/// for SU(2) (irrep_dim 2j+1).
struct SectorSpec {
  int charge = 0;
  int irrep_dim = 1;
  int mult_dim = 1;

  int dim() const { return irrep_dim * mult_dim; }
};

/// A Hilbert space, either elementary (a declared direct sum of charge
/// sectors) or a composite (an ordered tensor product of factors).
///
/// Basis ordering contract for elementary spaces: sectors in ascending charge;
/// within a sector the irrep index is major and the multiplicity index minor.
/// The SU(2) irrep basis is ordered m = j, j-1, ..., -j. Composite spaces use
/// row-major Kronecker ordering (leftmost factor most significant).
class SpaceSpec {
 public:
  SpaceSpec() = default;

  static SpaceSpec elementary(Group group, std::vector<SectorSpec> sectors) {
    if (sectors.empty()) throw std::invalid_argument("space: needs at least one sector");
    for (std::size_t i = 0; i < sectors.size(); ++i) {
      const auto& s = sectors[i];
      if (s.charge < 0 || s.irrep_dim < 1 || s.mult_dim < 1)
        throw std::invalid_argument("space: invalid sector");
      if (group == Group::U1 && s.irrep_dim != 1)
        throw std::invalid_argument("space: U(1) irreps are one-dimensional");
      if (group == Group::SU2 && s.irrep_dim != s.charge + 1)
        throw std::invalid_argument("space: SU(2) sector with charge 2j needs irrep_dim 2j+1");
      if (i > 0 && sectors[i - 1].charge >= s.charge)
        throw std::invalid_argument("space: sector charges must be strictly increasing");
    }
    SpaceSpec sp;
    sp.group_ = group;
    sp.sectors_ = std::move(sectors);
    sp.dim_ = 0;
    for (const auto& s : sp.sectors_) sp.dim_ += s.dim();
    return sp;
  }

  /// Single-mode Fock space truncated at photon number `cutoff`.
  static SpaceSpec fock(int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("fock: cutoff must be non-negative");
    std::vector<SectorSpec> secs;
    secs.reserve(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) secs.push_back({n, 1, 1});
    return elementary(Group::U1, std::move(secs));
  }

  /// A single SU(2) irrep of spin j = two_j / 2, multiplicity one.
  static SpaceSpec spin(int two_j) {
    if (two_j < 0) throw std::invalid_argument("spin: 2j must be non-negative");
    return elementary(Group::SU2, {{two_j, two_j + 1, 1}});
  }

  /// Frame space carrying integer spins j = 0..s with multiplicity equal to
  /// the irrep dimension (regular-representation structure).
  static SpaceSpec su2_frame(int s) {
    if (s < 0) throw std::invalid_argument("su2_frame: s must be non-negative");
    std::vector<SectorSpec> secs;
    secs.reserve(s + 1);
    for (int j = 0; j <= s; ++j) secs.push_back({2 * j, 2 * j + 1, 2 * j + 1});
    return elementary(Group::SU2, std::move(secs));
  }

  Group group() const { return group_; }
  int dim() const { return dim_; }
  bool is_composite() const { return !factors_.empty(); }

  const std::vector<SectorSpec>& sectors() const {
    if (is_composite())
      throw std::logic_error("space: composite space has no declared sector list");
    return sectors_;
  }

  const std::vector<SpaceSpec>& factors() const { return factors_; }

  std::vector<int> factor_dims() const {
    std::vector<int> d;
    if (is_composite()) {
      d.reserve(factors_.size());
      for (const auto& f : factors_) d.push_back(f.dim());
    } else {
      d.push_back(dim_);
    }
    return d;
  }

  int sector_offset(std::size_t sector_index) const {
    int off = 0;
    for (std::size_t i = 0; i < sector_index; ++i) off += sectors_[i].dim();
    return off;
  }

  /// Largest charge reachable on this space (composites: sum over factors).
  int max_charge() const {
    if (!is_composite()) return sectors_.back().charge;
    int c = 0;
    for (const auto& f : factors_) c += f.max_charge();
    return c;
  }

  bool has_odd_charge() const {
    if (!is_composite()) {
      for (const auto& s : sectors_)
        if (s.charge % 2 != 0) return true;
      return false;
    }
    for (const auto& f : factors_)
      if (f.has_odd_charge()) return true;
    return false;
  }

  /// Per-basis-state U(1) charge (total photon number for composites).
  std::vector<int> basis_charges() const {
    if (group_ != Group::U1) throw std::logic_error("basis_charges: U(1) spaces only");
    if (!is_composite()) {
      std::vector<int> q;
      q.reserve(dim_);
      for (const auto& s : sectors_)
        for (int i = 0; i < s.dim(); ++i) q.push_back(s.charge);
      return q;
    }
    std::vector<int> q{0};
    for (const auto& f : factors_) {
      std::vector<int> fq = f.basis_charges();
      std::vector<int> next;
      next.reserve(q.size() * fq.size());
      for (int a : q)
        for (int b : fq) next.push_back(a + b);
      q = std::move(next);
    }
    return q;
  }

  /// Per-basis-state twice-Jz weight (SU(2); composites: total 2m).
  std::vector<int> basis_two_jz() const {
    if (group_ != Group::SU2) throw std::logic_error("basis_two_jz: SU(2) spaces only");
    if (!is_composite()) {
      std::vector<int> m;
      m.reserve(dim_);
      for (const auto& s : sectors_) {
        for (int i = 0; i < s.irrep_dim; ++i) {
          const int two_m = s.charge - 2 * i;  // m = j, j-1, ..., -j
          for (int r = 0; r < s.mult_dim; ++r) m.push_back(two_m);
        }
      }
      return m;
    }
    std::vector<int> m{0};
    for (const auto& f : factors_) {
      std::vector<int> fm = f.basis_two_jz();
      std::vector<int> next;
      next.reserve(m.size() * fm.size());
      for (int a : m)
        for (int b : fm) next.push_back(a + b);
      m = std::move(next);
    }
    return m;
  }

  friend SpaceSpec tensor(const SpaceSpec& a, const SpaceSpec& b);
  friend bool same_space(const SpaceSpec& a, const SpaceSpec& b);

 private:
  Group group_ = Group::U1;
  int dim_ = 0;
  std::vector<SectorSpec> sectors_;   // elementary spaces
  std::vector<SpaceSpec> factors_;    // composite spaces
};

/// Tensor product of spaces; factor lists flatten so S (x) A (x) B has three
/// factors regardless of association order.
inline SpaceSpec tensor(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.group() != b.group())
    throw std::invalid_argument("tensor: spaces from different groups");
  SpaceSpec sp;
  sp.group_ = a.group();
  sp.dim_ = a.dim() * b.dim();
  auto append = [&sp](const SpaceSpec& s) {
    if (s.is_composite())
      sp.factors_.insert(sp.factors_.end(), s.factors_.begin(), s.factors_.end());
    else
      sp.factors_.push_back(s);
  };
  append(a);
  append(b);
  return sp;
}

inline bool same_space(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.group_ != b.group_ || a.dim_ != b.dim_) return false;
  if (a.is_composite() != b.is_composite()) return false;
  if (!a.is_composite()) {
    if (a.sectors_.size() != b.sectors_.size()) return false;
    for (std::size_t i = 0; i < a.sectors_.size(); ++i) {
      if (a.sectors_[i].charge != b.sectors_[i].charge ||
          a.sectors_[i].irrep_dim != b.sectors_[i].irrep_dim ||
          a.sectors_[i].mult_dim != b.sectors_[i].mult_dim)
        return false;
    }
    return true;
  }
  if (a.factors_.size() != b.factors_.size()) return false;
  for (std::size_t i = 0; i < a.factors_.size(); ++i)
    if (!same_space(a.factors_[i], b.factors_[i])) return false;
  return true;
}

}  // namespace qrf
