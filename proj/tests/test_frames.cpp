#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace qrf;
using qrf_test::random_element;
using qrf_test::random_su2;
using qrf_test::random_u1;

namespace {

complexd direct_overlap(const Ket& a, const Ket& b) { return complexd(a.amp.adjoint() * b.amp); }

// largest |entry| of v - e^{i phase} w over the optimal global phase
double distance_up_to_phase(const Eigen::VectorXcd& v, const Eigen::VectorXcd& w) {
  const complexd ov = complexd(w.adjoint() * v);
  const complexd phase = std::abs(ov) < 1e-14 ? complexd(1.0) : ov / std::abs(ov);
  return (v - phase * w).norm();
}

}  // namespace

TEST_CASE("phase eigenstates: explicit small cases") {
  const Ket pe0 = phase_eigenstate(1, 0.0);
  CHECK(std::abs(pe0.amp[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(pe0.amp[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  const Ket pepi = phase_eigenstate(1, pi);
  CHECK(std::abs(pepi.amp[1] + 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(direct_overlap(pe0, pepi)) < 1e-15);
  for (int k = 0; k <= 4; ++k)
    CHECK(std::abs(std::abs(phase_eigenstate(4, 1.1).amp[k]) - 1.0 / std::sqrt(5.0)) < 1e-15);
}

TEST_CASE("twirled phase-eigenstate projector is uniform") {
  for (int s : {1, 3, 6}) {
    const DensityOperator rho = projector(phase_eigenstate(s, 0.7));
    const DensityOperator tw = g_twirl(rho, haar_grid(Group::U1, s));
    CHECK((tw.mat() - Eigen::MatrixXcd::Identity(s + 1, s + 1) / (s + 1.0)).norm() < 1e-12);
  }
}

TEST_CASE("coherent states: vacuum, truncation, and mean photon number") {
  const Ket vac = u1_coherent(0.0, 0.3);
  CHECK(vac.amp.size() == 1);
  CHECK(std::abs(vac.amp[0] - 1.0) < 1e-15);

  // cutoff 21 retains at least 99.99% of the <n>=4 distribution
  CHECK_NOTHROW(u1_coherent(2.0, 0.0, 21));
  CHECK_THROWS_AS(u1_coherent(2.0, 0.0, 6), std::invalid_argument);

  const Ket cs = u1_coherent(2.0, 0.0, 30);
  double n_mean = 0.0;
  for (int k = 0; k < cs.amp.size(); ++k) n_mean += k * std::norm(cs.amp[k]);
  CHECK(n_mean == Catch::Approx(4.0).margin(1e-3));
}

TEST_CASE("fiducial state: weights, trivial case, and uniform twirl") {
  const Ket e1 = su2_fiducial_identity(1);
  // D = 10: amplitude 1/sqrt(10) on the j=0 sector, sqrt(3/10) per entangled pair
  CHECK(std::abs(e1.amp[0] - std::sqrt(0.1)) < 1e-14);
  double w1 = 0.0;
  for (int i = 1; i < 10; ++i) w1 += std::norm(e1.amp[i]);
  CHECK(w1 == Catch::Approx(0.9).margin(1e-13));
  CHECK(std::abs(e1.amp.norm() - 1.0) < 1e-14);

  const Ket e0 = su2_fiducial_identity(0);
  CHECK(e0.amp.size() == 1);
  CHECK(std::abs(direct_overlap(e0, su2_fiducial(0, GroupElement::su2_polar(1.0, 0.5, 0.4))) -
                 complexd(1.0)) < 1e-13);

  for (int s : {1, 2}) {
    const DensityOperator rho = projector(su2_fiducial(s, GroupElement::identity(Group::SU2)));
    const DensityOperator tw = g_twirl(rho, haar_grid(Group::SU2, 2 * s));
    const double d = frame_dimension_factor(FrameSpec::su2_fiducial(s));
    CHECK((tw.mat() - Eigen::MatrixXcd::Identity(rho.dim(), rho.dim()) / d).norm() < 1e-11);
  }
}

TEST_CASE("spin coherent states: poles and twirl") {
  const Ket top = su2_coherent(2, 0.0, 0.0, 0.0);
  CHECK(std::abs(top.amp[0] - 1.0) < 1e-14);  // |1,1>
  const Ket bottom = su2_coherent(2, 0.0, pi, 0.0);
  CHECK(std::abs(std::abs(bottom.amp[2]) - 1.0) < 1e-14);  // |1,-1> up to phase
  CHECK(std::abs(direct_overlap(top, bottom)) < 1e-14);

  const DensityOperator rho = projector(su2_coherent(2, 0.4, 0.9, 1.7));
  const DensityOperator tw = g_twirl(rho, haar_grid(Group::SU2, 2));
  CHECK((tw.mat() - Eigen::MatrixXcd::Identity(3, 3) / 3.0).norm() < 1e-12);
}

TEST_CASE("spin coherent formula equals the rotated highest-weight state") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int two_j : {1, 2, 4}) {
    for (int i = 0; i < 30; ++i) {
      const double a = two_pi * ud(rng), b = pi * ud(rng), c = two_pi * ud(rng);
      const Ket formula = su2_coherent(two_j, a, b, c);
      const Ket rotated = frame_state(FrameSpec::su2_coherent(two_j),
                                      GroupElement::su2_euler(a, b, c));
      CHECK((formula.amp - rotated.amp).norm() < 1e-12);
    }
  }
}

TEST_CASE("closed-form overlaps match direct inner products") {
  std::mt19937 rng(32);
  SECTION("phase eigenstates") {
    for (int s : {1, 2, 5, 9}) {
      const FrameSpec f = FrameSpec::phase_eigenstate(s);
      for (int i = 0; i < 60; ++i) {
        const GroupElement g = random_u1(rng), h = random_u1(rng);
        const complexd direct =
            direct_overlap(phase_eigenstate(s, g.theta()), phase_eigenstate(s, h.theta()));
        CHECK(std::abs(overlap_closed_form(f, g, h) - direct) < 1e-11);
      }
    }
  }
  SECTION("coherent states") {
    for (double s : {0.5, 1.0, 2.0}) {
      FrameSpec f = FrameSpec::u1_coherent(s);
      f.cutoff = std::max(40, int(s * s * 4 + 40));  // tail below round-off
      for (int i = 0; i < 60; ++i) {
        const GroupElement g = random_u1(rng), h = random_u1(rng);
        const complexd direct = direct_overlap(u1_coherent(s, g.theta(), f.cutoff),
                                               u1_coherent(s, h.theta(), f.cutoff));
        CHECK(std::abs(overlap_closed_form(f, g, h) - direct) < 1e-11);
      }
    }
  }
  SECTION("fiducial states") {
    for (int s : {1, 2}) {
      const FrameSpec f = FrameSpec::su2_fiducial(s);
      for (int i = 0; i < 60; ++i) {
        const GroupElement g = random_su2(rng), h = random_su2(rng);
        const complexd direct = direct_overlap(su2_fiducial(s, g), su2_fiducial(s, h));
        CHECK(std::abs(overlap_closed_form(f, g, h) - direct) < 1e-11);
      }
    }
  }
  SECTION("spin coherent states") {
    for (int two_j : {1, 2, 4}) {
      const FrameSpec f = FrameSpec::su2_coherent(two_j);
      for (int i = 0; i < 60; ++i) {
        const GroupElement g = random_su2(rng), h = random_su2(rng);
        const complexd direct = direct_overlap(frame_state(f, g), frame_state(f, h));
        CHECK(std::abs(overlap_closed_form(f, g, h) - direct) < 1e-11);
      }
    }
  }
}

TEST_CASE("overlap special values") {
  // orthogonal phase eigenstates at separation pi, s = 1
  CHECK(std::abs(overlap_closed_form(FrameSpec::phase_eigenstate(1), GroupElement::u1(0.0),
                                     GroupElement::u1(pi))) < 1e-14);
  // fiducial s = 1: <e|g> = (4 + 6 cos w)/10, independent of axis
  const FrameSpec fid = FrameSpec::su2_fiducial(1);
  for (double theta : {0.0, 0.7, 2.2}) {
    const complexd ov = overlap_closed_form(fid, GroupElement::identity(Group::SU2),
                                            GroupElement::su2_polar(pi, theta, 1.0));
    CHECK(std::abs(ov - complexd(-0.2)) < 1e-13);
  }
  // spin coherent j=1: |<e|g>| at beta = pi/2 is cos^2(pi/4) = 1/2
  const complexd cs = overlap_closed_form(FrameSpec::su2_coherent(2),
                                          GroupElement::identity(Group::SU2),
                                          GroupElement::su2_euler(0.0, pi / 2, 0.0));
  CHECK(std::abs(cs - complexd(0.5)) < 1e-13);
}

TEST_CASE("pe-cs cross overlap matches the constructed inner product") {
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> ud(0.0, two_pi);
  for (int i = 0; i < 40; ++i) {
    const double g = ud(rng), h = ud(rng), t = 1.4;
    const int s_pe = 50;
    const Ket pe = phase_eigenstate(s_pe, g);
    const Ket cs = u1_coherent(t, h, s_pe);
    // formula uses raw Poisson amplitudes: renormalization after truncation at
    // s_pe = 50 changes nothing at this precision
    CHECK(std::abs(pe_cs_overlap(s_pe, g, t, h) - direct_overlap(pe, cs)) < 1e-11);
  }
}

TEST_CASE("frame states transform covariantly") {
  std::mt19937 rng(34);
  std::vector<FrameSpec> families = {FrameSpec::phase_eigenstate(3),
                                     FrameSpec::u1_coherent(1.5),
                                     FrameSpec::su2_fiducial(1),
                                     FrameSpec::su2_coherent(3)};
  for (const FrameSpec& f : families) {
    const Group grp = frame_group(f);
    const SpaceSpec space = frame_space(f);
    for (int i = 0; i < 40; ++i) {
      const GroupElement g = random_element(grp, rng), h = random_element(grp, rng);
      const Ket lhs = frame_state(f, compose(h, g));
      const Ket rhs = apply_unitary(rep_unitary(space, h), frame_state(f, g));
      CHECK(distance_up_to_phase(lhs.amp, rhs.amp) < 1e-11);
    }
  }
}

TEST_CASE("fiducial overlap depends on the rotation angle only") {
  std::mt19937 rng(35);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int s : {1, 4, 8}) {
    const FrameSpec f = FrameSpec::su2_fiducial(s);
    for (double omega : {0.4, 1.3, 2.8}) {
      std::vector<double> vals;
      for (int i = 0; i < 40; ++i) {
        const double theta = std::acos(2.0 * ud(rng) - 1.0), phi = two_pi * ud(rng);
        vals.push_back(std::norm(overlap_closed_form(
            f, GroupElement::identity(Group::SU2), GroupElement::su2_polar(omega, theta, phi))));
      }
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= vals.size();
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      var /= vals.size();
      CHECK(var <= 1e-22);
    }
  }
}

TEST_CASE("phase eigenstate overlap concentrates in the classical limit") {
  // mass of D_s |<s;g|s;0>|^2 inside |g| < 0.1 strictly increases with s
  auto mass_near_zero = [](int s) {
    const FrameSpec f = FrameSpec::phase_eigenstate(s);
    const int n = 20001;
    double inside = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = -pi + two_pi * i / (n - 1.0);
      const double val =
          (s + 1.0) *
          std::norm(overlap_closed_form(f, GroupElement::u1(g), GroupElement::u1(0.0)));
      if (std::abs(g) < 0.1) inside += val;
    }
    return inside * (two_pi / (n - 1.0)) / two_pi;
  };
  double prev = 0.0;
  for (int s : {8, 16, 32, 64}) {
    const double m = mass_near_zero(s);
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("spin coherent overlap approaches a gaussian at large j") {
  const int j = 50;
  double sup = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double beta = 0.5 * i / 2000.0;
    const double exact = std::pow(std::cos(0.5 * beta), 4.0 * j);
    const double gauss = std::exp(-0.5 * j * beta * beta);
    sup = std::max(sup, std::abs(exact - gauss));
  }
  CHECK(sup <= 0.01);
}

TEST_CASE("frame dimension factors") {
  CHECK(frame_dimension_factor(FrameSpec::phase_eigenstate(4)) == 5.0);
  CHECK(frame_dimension_factor(FrameSpec::su2_fiducial(1)) == 10.0);
  CHECK(frame_dimension_factor(FrameSpec::su2_fiducial(2)) == 35.0);
  CHECK(frame_dimension_factor(FrameSpec::su2_coherent(3)) == 4.0);
  CHECK_THROWS_AS(frame_dimension_factor(FrameSpec::u1_coherent(1.0)), std::invalid_argument);
  CHECK(uniform_twirl_family(FrameFamily::SU2Coherent));
  CHECK_FALSE(uniform_twirl_family(FrameFamily::U1Coherent));
}
