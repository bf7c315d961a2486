#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace qrf;
using qrf_test::random_su2;
using qrf_test::random_u1;

namespace {

// independent 2x2 oracle for exp(i w n.sigma/2)
Eigen::Matrix2cd polar_matrix_oracle(double omega, double theta, double phi) {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, complexd(0, -1), complexd(0, 1), 0;
  sz << 1, 0, 0, -1;
  const Eigen::Matrix2cd h = std::sin(theta) * std::cos(phi) * sx +
                             std::sin(theta) * std::sin(phi) * sy + std::cos(theta) * sz;
  return std::cos(0.5 * omega) * Eigen::Matrix2cd::Identity() +
         complexd(0, 1) * std::sin(0.5 * omega) * h;
}

}  // namespace

TEST_CASE("u1 composition is addition mod 2pi") {
  const GroupElement g = compose(GroupElement::u1(pi / 2), GroupElement::u1(pi / 2));
  CHECK(std::abs(g.theta() - pi) < 1e-15);
  CHECK(approx_equal(compose(GroupElement::u1(1.5), inverse(GroupElement::u1(1.5))),
                     GroupElement::identity(Group::U1)));
  CHECK(std::abs(inverse(GroupElement::u1(0.7)).theta() - (two_pi - 0.7)) < 1e-15);
  CHECK(approx_equal(inverse(GroupElement::identity(Group::U1)),
                     GroupElement::identity(Group::U1)));
}

TEST_CASE("mixed-group composition refuses") {
  CHECK_THROWS_AS(compose(GroupElement::u1(0.1), GroupElement::identity(Group::SU2)),
                  std::invalid_argument);
}

TEST_CASE("su2 polar construction matches the 2x2 oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double w = two_pi * ud(rng), t = pi * ud(rng), p = two_pi * ud(rng);
    CHECK((GroupElement::su2_polar(w, t, p).matrix2() - polar_matrix_oracle(w, t, p)).norm() <
          1e-14);
  }
}

TEST_CASE("pi rotations about z compose to the identity rotation") {
  const GroupElement g = GroupElement::su2_polar(pi, 0.0, 0.0);
  const GroupElement gg = compose(g, g);
  // 2x2 matrices compose to -I; as a rotation this folds to the identity
  CHECK((gg.matrix2() + Eigen::Matrix2cd::Identity()).norm() < 1e-14);
  CHECK(rotation_equal(gg, GroupElement::identity(Group::SU2)));
  CHECK(gg.polar_folded().omega < 1e-7);
}

TEST_CASE("associativity on random triples") {
  std::mt19937 rng(12);
  for (int i = 0; i < 100; ++i) {
    const GroupElement a = random_su2(rng), b = random_su2(rng), c = random_su2(rng);
    CHECK((compose(compose(a, b), c).matrix2() - compose(a, compose(b, c)).matrix2()).norm() <
          1e-12);
  }
}

TEST_CASE("inverse of an euler element is the conjugate transpose") {
  const GroupElement g = GroupElement::su2_euler(0.9, 2.2, 4.7);
  CHECK((inverse(g).matrix2() - g.matrix2().adjoint()).norm() < 1e-15);
  CHECK(compose(g, inverse(g)).is_identity(1e-14));
}

TEST_CASE("parametrization round trips") {
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    const GroupElement g = random_su2(rng);
    const PolarAngles p = g.polar();
    CHECK((GroupElement::su2_polar(p.omega, p.theta, p.phi).matrix2() - g.matrix2()).norm() <
          1e-12);
    const EulerAngles e = g.euler();
    CHECK(e.beta >= 0.0);
    CHECK(e.beta <= pi);
    CHECK((GroupElement::su2_euler(e.alpha, e.beta, e.gamma).matrix2() - g.matrix2()).norm() <
          1e-12);
    // folded view represents the same rotation
    const PolarAngles f = g.polar_folded();
    CHECK(f.omega >= 0.0);
    CHECK(f.omega <= pi + 1e-12);
    CHECK(rotation_equal(GroupElement::su2_polar(f.omega, f.theta, f.phi), g, 1e-12));
  }
}

TEST_CASE("euler and polar agree for z rotations") {
  // exp(i w Jz) = exp(-i alpha Jz) at alpha = -w
  const double w = 1.3;
  CHECK(approx_equal(GroupElement::su2_polar(w, 0.0, 0.0), GroupElement::su2_euler(-w, 0.0, 0.0),
                     1e-14));
}

TEST_CASE("u1 haar grid: nodes, weights, and fourier exactness") {
  const HaarGrid grid = haar_grid(Group::U1, 2);
  REQUIRE(grid.size() == 5);
  for (double w : grid.weights) CHECK(w == Catch::Approx(0.2).margin(1e-16));

  for (int band : {0, 1, 2, 5, 17}) {
    const HaarGrid g = haar_grid(Group::U1, band);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    CHECK(std::abs(wsum - 1.0) <= 1e-14);
    // sum_i w_i e^{i k theta_i} = delta_{k0} up to twice the bandlimit
    for (int k = -2 * band; k <= 2 * band; ++k) {
      complexd acc = 0.0;
      for (int n = 0; n < g.size(); ++n)
        acc += g.weights[n] * std::polar(1.0, k * g.nodes[n].theta());
      CHECK(std::abs(acc - (k == 0 ? 1.0 : 0.0)) < 1e-13);
    }
  }
}

TEST_CASE("haar grid refuses a negative bandlimit") {
  CHECK_THROWS_AS(haar_grid(Group::U1, -1), std::invalid_argument);
  CHECK_THROWS_AS(haar_grid(Group::U1, 2, true), std::invalid_argument);
}

TEST_CASE("su2 haar grid: normalization and character orthogonality") {
  for (bool half : {false, true}) {
    const HaarGrid grid = haar_grid(Group::SU2, 2, half);
    double wsum = 0.0;
    for (double w : grid.weights) {
      CHECK(w >= 0.0);
      wsum += w;
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-14);

    // characters chi_j(w) = sum_m e^{i m w} integrate to delta_{j0}
    for (int two_j = half ? 1 : 2; two_j <= 4; two_j += half ? 1 : 2) {
      complexd acc = 0.0;
      for (int n = 0; n < grid.size(); ++n) {
        const double w = grid.nodes[n].polar().omega;
        complexd chi = 0.0;
        for (int two_m = -two_j; two_m <= two_j; two_m += 2)
          chi += std::polar(1.0, 0.5 * two_m * w);
        acc += grid.weights[n] * chi;
      }
      CHECK(std::abs(acc) < 1e-12);
    }
    // trivial character integrates to one
    CHECK(std::abs(std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0) - 1.0) <
          1e-14);
  }
}

TEST_CASE("left and right invariance on band-limited functions") {
  std::mt19937 rng(14);
  const int band = 3;
  const HaarGrid grid = haar_grid(Group::SU2, band);
  const SpaceSpec probe = SpaceSpec::spin(2 * band);  // charge = 2*band = exactness edge
  auto f = [&probe](const GroupElement& g) { return rep_unitary(probe, g)(1, 2); };
  complexd base = 0.0;
  for (int n = 0; n < grid.size(); ++n) base += grid.weights[n] * f(grid.nodes[n]);
  for (int i = 0; i < 10; ++i) {
    const GroupElement h = random_su2(rng);
    complexd left = 0.0, right = 0.0;
    for (int n = 0; n < grid.size(); ++n) {
      left += grid.weights[n] * f(compose(h, grid.nodes[n]));
      right += grid.weights[n] * f(compose(grid.nodes[n], h));
    }
    CHECK(std::abs(left - base) < 1e-11);
    CHECK(std::abs(right - base) < 1e-11);
  }
}

TEST_CASE("extended grid integrates half-integer irreps") {
  std::mt19937 rng(15);
  const HaarGrid grid = haar_grid(Group::SU2, 3, true);
  const SpaceSpec probe = SpaceSpec::spin(3);  // j = 3/2
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  for (int n = 0; n < grid.size(); ++n)
    acc += grid.weights[n] * rep_unitary(probe, grid.nodes[n]);
  CHECK(acc.norm() < 1e-12);  // nontrivial irrep integrates to zero

  auto fh = [&probe](const GroupElement& g) { return rep_unitary(probe, g)(0, 3); };
  complexd base = 0.0;
  for (int n = 0; n < grid.size(); ++n) base += grid.weights[n] * fh(grid.nodes[n]);
  const GroupElement h = random_su2(rng);
  complexd shifted = 0.0;
  for (int n = 0; n < grid.size(); ++n)
    shifted += grid.weights[n] * fh(compose(h, grid.nodes[n]));
  CHECK(std::abs(shifted - base) < 1e-11);
}

TEST_CASE("u1 phase canonicalization") {
  CHECK(GroupElement::u1(-0.5).theta() == Catch::Approx(two_pi - 0.5));
  CHECK(GroupElement::u1(7.0 * pi).theta() == Catch::Approx(pi));
  CHECK(GroupElement::u1(two_pi).theta() == 0.0);
}
