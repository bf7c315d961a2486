#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace qrf;
using qrf_test::random_density;
using qrf_test::random_element;
using qrf_test::random_ket;

TEST_CASE("space construction and validation") {
  const SpaceSpec fock = SpaceSpec::fock(3);
  CHECK(fock.dim() == 4);
  CHECK(fock.max_charge() == 3);
  CHECK(fock.basis_charges() == std::vector<int>{0, 1, 2, 3});

  const SpaceSpec frame = SpaceSpec::su2_frame(1);
  CHECK(frame.dim() == 10);
  CHECK(frame.max_charge() == 2);
  CHECK_FALSE(frame.has_odd_charge());
  CHECK(SpaceSpec::spin(1).has_odd_charge());

  CHECK_THROWS_AS(SpaceSpec::elementary(Group::U1, {{1, 1, 1}, {0, 1, 1}}),
                  std::invalid_argument);  // charges must increase
  CHECK_THROWS_AS(SpaceSpec::elementary(Group::SU2, {{2, 2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SpaceSpec::elementary(Group::U1, {{0, 2, 1}}), std::invalid_argument);
}

TEST_CASE("tensor products flatten and multiply dimensions") {
  const SpaceSpec a = SpaceSpec::fock(1), b = SpaceSpec::fock(2);
  const SpaceSpec ab = tensor(a, b);
  CHECK(ab.dim() == 6);
  CHECK(ab.max_charge() == 3);
  CHECK(ab.basis_charges() == std::vector<int>{0, 1, 2, 1, 2, 3});
  const SpaceSpec abc = tensor(ab, SpaceSpec::fock(1));
  CHECK(abc.factors().size() == 3);
  CHECK_THROWS_AS(tensor(a, SpaceSpec::spin(2)), std::invalid_argument);
}

TEST_CASE("jz weights across sectors and factors") {
  const SpaceSpec s = SpaceSpec::su2_frame(1);
  // sector j=0 then j=1 with m = 1,0,-1 each repeated over three multiplicity states
  CHECK(s.basis_two_jz() ==
        std::vector<int>{0, 2, 2, 2, 0, 0, 0, -2, -2, -2});
  const SpaceSpec two = tensor(SpaceSpec::spin(1), SpaceSpec::spin(1));
  CHECK(two.basis_two_jz() == std::vector<int>{2, 0, 0, -2});
}

TEST_CASE("u1 representation is the number-operator phase") {
  const Eigen::MatrixXcd u = rep_unitary(SpaceSpec::fock(2), GroupElement::u1(pi));
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(3, 3);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  expect(2, 2) = 1.0;
  CHECK((u - expect).norm() < 1e-14);
}

TEST_CASE("spin-1/2 rotation by pi about z") {
  const Eigen::MatrixXcd u =
      rep_unitary(SpaceSpec::spin(1), GroupElement::su2_polar(pi, 0.0, 0.0));
  CHECK(std::abs(u(0, 0) - complexd(0, 1)) < 1e-14);
  CHECK(std::abs(u(1, 1) - complexd(0, -1)) < 1e-14);
  CHECK(std::abs(u(0, 1)) < 1e-14);
}

TEST_CASE("identity element represents as the identity") {
  for (const SpaceSpec& s : {SpaceSpec::fock(3), SpaceSpec::su2_frame(2), SpaceSpec::spin(3)}) {
    const GroupElement e = GroupElement::identity(s.group());
    CHECK((rep_unitary(s, e) - Eigen::MatrixXcd::Identity(s.dim(), s.dim())).norm() < 1e-12);
  }
}

TEST_CASE("representation homomorphism and unitarity") {
  std::mt19937 rng(21);
  for (const SpaceSpec& s :
       {SpaceSpec::fock(3), SpaceSpec::su2_frame(1), SpaceSpec::spin(2),
        tensor(SpaceSpec::spin(2), SpaceSpec::su2_frame(1))}) {
    for (int i = 0; i < 100; ++i) {
      const GroupElement g = random_element(s.group(), rng);
      const GroupElement h = random_element(s.group(), rng);
      const Eigen::MatrixXcd ug = rep_unitary(s, g);
      CHECK((ug * rep_unitary(s, h) - rep_unitary(s, compose(g, h))).norm() < 1e-11);
      if (i < 20) {
        CHECK((rep_unitary(s, inverse(g)) - ug.adjoint()).norm() < 1e-12);
        CHECK((ug * ug.adjoint() - Eigen::MatrixXcd::Identity(s.dim(), s.dim())).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("representation on a tensor product is the kronecker product") {
  std::mt19937 rng(22);
  const SpaceSpec a = SpaceSpec::spin(2), b = SpaceSpec::su2_frame(1);
  for (int i = 0; i < 20; ++i) {
    const GroupElement g = random_element(Group::SU2, rng);
    CHECK((rep_unitary(tensor(a, b), g) - kron(rep_unitary(a, g), rep_unitary(b, g))).norm() <
          1e-12);
  }
}

TEST_CASE("wigner small-d closed forms for j = 1/2 and 1") {
  const double beta = 0.83;
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  Eigen::Matrix2cd d_half;
  d_half << c, -s, s, c;
  CHECK((wigner_small_d(1, beta) - Eigen::MatrixXcd(d_half)).norm() < 1e-13);

  Eigen::Matrix3cd d_one;
  const double cb = std::cos(beta), sb = std::sin(beta);
  d_one << (1 + cb) / 2, -sb / std::sqrt(2.0), (1 - cb) / 2,
           sb / std::sqrt(2.0), cb, -sb / std::sqrt(2.0),
           (1 - cb) / 2, sb / std::sqrt(2.0), (1 + cb) / 2;
  CHECK((wigner_small_d(2, beta) - Eigen::MatrixXcd(d_one)).norm() < 1e-13);
}

TEST_CASE("generator commutation [Jx, Jy] = i Jz") {
  for (int two_j : {1, 2, 3, 8}) {
    const Eigen::MatrixXcd jx = spin_jx(two_j), jy = spin_jy(two_j), jz = spin_jz(two_j);
    CHECK((jx * jy - jy * jx - complexd(0, 1) * jz).norm() < 1e-13);
  }
}

TEST_CASE("partial trace reduces product states and preserves trace") {
  std::mt19937 rng(23);
  const SpaceSpec a = SpaceSpec::fock(1), b = SpaceSpec::fock(2);
  const DensityOperator ra = random_density(a, rng), rb = random_density(b, rng);
  const DensityOperator joint = tensor(ra, rb);
  CHECK((partial_trace(joint, {0}).mat() - ra.mat()).norm() < 1e-13);
  CHECK((partial_trace(joint, {1}).mat() - rb.mat()).norm() < 1e-13);

  for (int i = 0; i < 20; ++i) {
    const DensityOperator r = random_density(tensor(a, b), rng);
    CHECK(std::abs(partial_trace(r, {0}).mat().trace().real() - 1.0) < 1e-13);
    CHECK(std::abs(partial_trace(r, {1}).mat().trace().real() - 1.0) < 1e-13);
  }
}

TEST_CASE("partial trace of a bell state is maximally mixed") {
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const Ket psi(tensor(SpaceSpec::fock(1), SpaceSpec::fock(1)), bell);
  const DensityOperator reduced = partial_trace(projector(psi), {1});
  CHECK((reduced.mat() - Eigen::MatrixXcd::Identity(2, 2) / 2.0).norm() < 1e-14);
}

TEST_CASE("partial trace on three factors keeps original order") {
  std::mt19937 rng(24);
  const SpaceSpec s = SpaceSpec::fock(1);
  const DensityOperator r1 = random_density(s, rng), r2 = random_density(s, rng),
                        r3 = random_density(s, rng);
  const DensityOperator joint = tensor(tensor(r1, r2), r3);
  const DensityOperator kept = partial_trace(joint, {0, 2});
  CHECK((kept.mat() - tensor(r1, r3).mat()).norm() < 1e-13);
}

TEST_CASE("partial trace needs a declared factorization") {
  std::mt19937 rng(25);
  CHECK_THROWS_AS(partial_trace(random_density(SpaceSpec::fock(3), rng), {0}),
                  std::invalid_argument);
}

TEST_CASE("fidelity and trace distance basics") {
  std::mt19937 rng(26);
  const SpaceSpec s = SpaceSpec::fock(2);
  const DensityOperator r = random_density(s, rng);
  CHECK(fidelity(r, r) == Catch::Approx(1.0).margin(1e-12));
  CHECK(trace_distance(r, r) == Catch::Approx(0.0).margin(1e-12));

  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(3), e1 = Eigen::VectorXcd::Zero(3);
  e0[0] = 1.0;
  e1[1] = 1.0;
  const DensityOperator p0 = projector(Ket(s, e0)), p1 = projector(Ket(s, e1));
  CHECK(fidelity(p0, p1) == Catch::Approx(0.0).margin(1e-12));
  CHECK(trace_distance(p0, p1) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("uhlmann fidelity on commuting states") {
  const SpaceSpec s = SpaceSpec::fock(1);
  Eigen::MatrixXcd pure = Eigen::MatrixXcd::Zero(2, 2);
  pure(0, 0) = 1.0;
  const DensityOperator rho(s, pure);
  const DensityOperator sigma = DensityOperator::maximally_mixed(s);
  CHECK(fidelity(rho, sigma) == Catch::Approx(std::sqrt(0.5)).margin(1e-10));
}

TEST_CASE("metric dimension mismatch refuses") {
  std::mt19937 rng(27);
  const DensityOperator a = random_density(SpaceSpec::fock(1), rng);
  const DensityOperator b = random_density(SpaceSpec::fock(2), rng);
  CHECK_THROWS_AS(fidelity(a, b), std::invalid_argument);
  CHECK_THROWS_AS(trace_distance(a, b), std::invalid_argument);
}

TEST_CASE("state validation catches broken invariants") {
  const SpaceSpec s = SpaceSpec::fock(1);
  Eigen::VectorXcd v(2);
  v << 1.0, 1.0;  // unnormalized
  CHECK_THROWS_AS(Ket(s, v).validate(), std::domain_error);

  Eigen::MatrixXcd m(2, 2);
  m << 0.5, complexd(0, 0.3), complexd(0, 0.3), 0.5;  // not hermitian
  CHECK_THROWS_AS(DensityOperator(s, m).validate(), std::domain_error);

  m << 0.9, 0, 0, 0.3;  // trace 1.2
  CHECK_THROWS_AS(DensityOperator(s, m).validate(), std::domain_error);

  m << 1.2, 0, 0, -0.2;  // negative eigenvalue
  CHECK_THROWS_AS(DensityOperator(s, m).validate(), std::domain_error);
}

TEST_CASE("entanglement fidelity of the identity channel is one") {
  auto id = [](const Eigen::MatrixXcd& x) { return x; };
  CHECK(entanglement_fidelity(id, 4) == Catch::Approx(1.0).margin(1e-14));
  // a z-phase flip on a qubit: F_e = |(1 + e^{i pi})/2|^2 = 0
  auto flip = [](const Eigen::MatrixXcd& x) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2);
    u(1, 1) = -1.0;
    return Eigen::MatrixXcd(u * x * u.adjoint());
  };
  CHECK(entanglement_fidelity(flip, 2) == Catch::Approx(0.0).margin(1e-14));
}
