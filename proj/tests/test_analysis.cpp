#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "vibronic/analysis.hpp"
#include "vibronic/error.hpp"

using namespace vibronic;
using vibronic::testing::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector cat(const FockSpace& space, Complex alpha, int sign) {
  return normalized(StateVector(coherent_state(space, alpha) + double(sign) * coherent_state(space, -alpha)));
}

double angle_distance_mod_pi(double a, double b) {
  double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

}  // namespace

TEST_CASE("fidelity") {
  const FockSpace space(64);
  const StateVector psi = coherent_state(space, Complex(0.3, 0.4));
  CHECK(fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(fock_state(space, 0), fock_state(space, 1)) == 0.0);
  CHECK_THROWS_AS(fidelity(psi, vacuum_state(FockSpace(8))), InvalidArgument);

  for (Complex a : {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.3, -0.7)}) {
    for (Complex b : {Complex(0.5, 0.5), Complex(-0.2, 0.1), Complex(0.0, -1.0)}) {
      const double expected = std::norm(testing::coherent_overlap(a, b));
      CHECK(std::abs(expected - std::exp(-std::norm(a - b))) < 1e-14);
      CHECK(std::abs(fidelity(coherent_state(space, a), coherent_state(space, b)) - expected) < 1e-10);
    }
  }
}

TEST_CASE("parity") {
  const FockSpace space(64);
  CHECK(parity_expectation(vacuum_state(space)) == 1.0);
  CHECK(parity_expectation(fock_state(space, 1)) == -1.0);
  for (Complex alpha : {Complex(0.2, 0.0), Complex(0.0, 1.5), Complex(1.0, -1.0)}) {
    CHECK(std::abs(parity_expectation(cat(space, alpha, 1)) - 1.0) < 1e-10);
    CHECK(std::abs(parity_expectation(cat(space, alpha, -1)) + 1.0) < 1e-10);
  }
}

TEST_CASE("quadrature variance") {
  const FockSpace space(64);
  for (double theta : {0.0, 0.4, 1.3, 2.9}) {
    CHECK(std::abs(quadrature_variance(vacuum_state(space), theta) - 0.25) < 1e-14);
    CHECK(std::abs(quadrature_variance(coherent_state(space, Complex(0.8, -0.3)), theta) - 0.25) < 1e-10);
  }
  // |1⟩: ⟨X²⟩ = (2n+1)/4.
  CHECK(std::abs(quadrature_variance(fock_state(space, 1), 0.7) - 0.75) < 1e-14);

  SUBCASE("minimum-uncertainty product of squeezed vacua") {
    for (Complex xi : {Complex(0.1, 0.0), Complex(0.0, 0.25), Complex(-0.15, 0.2), Complex(0.05, -0.05)}) {
      const StateVector psi = squeezed_vacuum_state(space, xi);
      const double theta = min_variance_angle(psi);
      const double lo = quadrature_variance(psi, theta);
      const double hi = quadrature_variance(psi, theta + kPi / 2.0);
      CHECK(std::abs(lo * hi - 1.0 / 16.0) < 1e-8);
      CHECK(lo < 0.25);
      // No sampled angle goes below the reported minimum.
      for (int i = 0; i < 180; ++i) CHECK(quadrature_variance(psi, i * kPi / 180.0) >= lo - 1e-14);
    }
  }

  SUBCASE("periodic and smooth") {
    std::mt19937 rng(41);
    const StateVector psi = normalized(testing::random_vector(20, rng));
    const double scale = std::abs(quadrature_variance(psi, 0.0)) + 1.0;
    for (double theta : {0.0, 0.9, 2.1}) {
      CHECK(std::abs(quadrature_variance(psi, theta + kPi) - quadrature_variance(psi, theta)) < 1e-12);
      const double delta = 1e-4;
      CHECK(std::abs(quadrature_variance(psi, theta + delta) - quadrature_variance(psi, theta)) <
            20.0 * scale * delta);
    }
  }

  SUBCASE("squeezing directions for +xi and -xi are orthogonal") {
    for (Complex xi : {Complex(0.1, 0.0), Complex(0.12, 0.17), Complex(0.0, -0.25)}) {
      const double a = min_variance_angle(squeezed_vacuum_state(space, xi));
      const double b = min_variance_angle(squeezed_vacuum_state(space, -xi));
      CHECK(std::abs(angle_distance_mod_pi(a, b) - kPi / 2.0) < 1e-6);
    }
  }

  SUBCASE("compression exponent agrees with the measured variances") {
    const double r = 0.2;
    const StateVector psi = squeezed_vacuum_state(space, r);
    const double c = compression_exponent(psi, r);
    const double sigma = std::sqrt(quadrature_variance(psi, min_variance_angle(psi)));
    CHECK(std::abs(sigma / 0.5 - std::exp(-c * r)) < 1e-12);
    // Same exponent at a different magnitude.
    CHECK(std::abs(compression_exponent(squeezed_vacuum_state(space, 0.1), 0.1) - c) < 1e-8);
    CHECK_THROWS_AS(compression_exponent(psi, 0.0), InvalidArgument);
  }
}

TEST_CASE("number distribution and truncation tails") {
  const FockSpace space(64);
  const auto delta = number_distribution(fock_state(space, 2));
  for (int n = 0; n < 64; ++n) CHECK(delta[n] == (n == 2 ? 1.0 : 0.0));

  const auto poisson = number_distribution(coherent_state(space, 1.0));
  double factorial = 1.0;
  for (int n = 0; n < 30; ++n) {
    if (n > 0) factorial *= n;
    CHECK(std::abs(poisson[n] - std::exp(-1.0) / factorial) < 1e-10);
  }

  const auto squeezed = number_distribution(squeezed_vacuum_state(space, Complex(0.2, 0.1)));
  double total = 0.0;
  for (int n = 0; n < 64; ++n) {
    if (n % 2 == 1) CHECK(squeezed[n] == 0.0);
    total += squeezed[n];
  }
  CHECK(std::abs(total - 1.0) < 1e-14);

  CHECK(truncation_tail(vacuum_state(space), 0.25) == 0.0);
  CHECK(truncation_tail(coherent_state(space, 0.5), 0.25) < 1e-12);
  CHECK(truncation_tail(fock_state(space, 63), 0.01) == 1.0);
  const StateVector wide = coherent_state(space, 4.0);
  double previous = 0.0;
  for (double f : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const double tail = truncation_tail(wide, f);
    CHECK(tail >= previous);
    previous = tail;
  }
  CHECK(std::abs(previous - 1.0) < 1e-12);
  CHECK_THROWS_AS(truncation_tail(wide, 0.0), InvalidArgument);
  CHECK_THROWS_AS(truncation_tail(wide, 1.5), InvalidArgument);

  SUBCASE("per-mode tails of a joint state") {
    const JointSpace js(IonRegister(1), {FockSpace(8), FockSpace(8)});
    const StateVector joint = tensor_product(
        basis_state(js.reg(), Bitstring::parse("u")),
        tensor_product(vacuum_state(js.modes()[0]),
                       normalized(StateVector(fock_state(js.modes()[1], 0) + fock_state(js.modes()[1], 7)))));
    const auto tails = mode_truncation_tails(js, joint, 0.25);
    REQUIRE(tails.size() == 2);
    CHECK(tails[0] == 0.0);
    CHECK(std::abs(tails[1] - 0.5) < 1e-15);
  }
}

TEST_CASE("Wigner function") {
  const FockSpace space(64);
  CHECK(std::abs(wigner_value(vacuum_state(space), 0.0) - 2.0 / kPi) < 1e-14);
  CHECK(std::abs(wigner_value(vacuum_state(space), Complex(0.5, -0.3)) -
                 2.0 / kPi * std::exp(-2.0 * 0.34)) < 1e-12);
  CHECK(std::abs(wigner_value(cat(space, 1.2, 1), 0.0) - 2.0 / kPi) < 1e-10);
  CHECK(std::abs(wigner_value(cat(space, 1.2, -1), 0.0) + 2.0 / kPi) < 1e-10);

  SUBCASE("displace agrees with the dense displacement operator") {
    std::mt19937 rng(43);
    StateVector psi = testing::random_vector(64, rng);
    psi.tail(48).setZero();
    psi = normalized(psi);
    for (Complex alpha : {Complex(0.3, 0.1), Complex(-1.0, 0.7)}) {
      const StateVector dense = displacement_op(space, 1, alpha) * psi;
      CHECK(max_abs(StateVector(displace(psi, alpha) - dense)) < 1e-10);
      // Value at α is the scaled parity of the state displaced by −α.
      const double parity = parity_expectation(displacement_op(space, 1, -alpha) * psi);
      CHECK(std::abs(wigner_value(psi, alpha) - 2.0 / kPi * parity) < 1e-10);
    }
  }

  SUBCASE("vacuum grid integrates to one") {
    WignerGridSpec spec;
    spec.x_min = spec.p_min = -3.0;
    spec.x_max = spec.p_max = 3.0;
    spec.resolution = 121;
    const WignerGrid grid = wigner_grid(vacuum_state(space), spec);
    REQUIRE(grid.values.rows() == 121);
    REQUIRE(grid.values.cols() == 121);
    CHECK(grid.flagged == 0);
    const double dx = grid.xs[1] - grid.xs[0];
    const double dp = grid.ps[1] - grid.ps[0];
    CHECK(std::abs(grid.values.sum() * dx * dp - 1.0) < 1e-3);
    CHECK(grid.values.cwiseAbs().maxCoeff() <= 2.0 / kPi + 1e-6);
    CHECK(grid.values.allFinite());
  }

  SUBCASE("cat grid is bounded and shows interference") {
    WignerGridSpec spec;
    spec.resolution = 41;
    const WignerGrid grid = wigner_grid(cat(space, Complex(1.5, 0.0), 1), spec);
    CHECK(grid.values.cwiseAbs().maxCoeff() <= 2.0 / kPi + 1e-6);
    CHECK(grid.values.minCoeff() < -0.1);
  }

  SUBCASE("points beyond the truncation are flagged") {
    WignerGridSpec spec;
    spec.x_min = spec.p_min = -9.0;
    spec.x_max = spec.p_max = 9.0;
    spec.resolution = 7;
    const WignerGrid grid = wigner_grid(vacuum_state(FockSpace(16)), spec);
    CHECK(grid.flagged > 0);
    CHECK(grid.values.allFinite());
  }

  WignerGridSpec bad;
  bad.resolution = 0;
  CHECK_THROWS_AS(wigner_grid(vacuum_state(space), bad), InvalidArgument);
}

TEST_CASE("reduced internal state") {
  const JointSpace js(IonRegister(1), {FockSpace(16)});
  const StateVector up = basis_state(js.reg(), Bitstring::parse("u"));
  const StateVector down = basis_state(js.reg(), Bitstring::parse("d"));
  const StateVector plus = jx_product_eigenstate(js.reg(), {1}).first;

  const StateVector product = tensor_product(plus, coherent_state(js.modes()[0], 0.7));
  CHECK(std::abs(reduced_internal_overlap(js, product, plus) - 1.0) < 1e-14);
  CHECK(std::abs(reduced_internal_overlap(js, product, jx_product_eigenstate(js.reg(), {-1}).first)) < 1e-14);

  // Equal branches with orthogonal motional parts: ρ = I/2.
  const StateVector mixed = (tensor_product(down, fock_state(js.modes()[0], 0)) +
                             tensor_product(up, fock_state(js.modes()[0], 1))) /
                            std::sqrt(2.0);
  CHECK(std::abs(reduced_internal_overlap(js, mixed, plus) - 0.5) < 1e-14);

  SUBCASE("partial trace against an explicit sum") {
    std::mt19937 rng(47);
    const JointSpace two(IonRegister(2), {FockSpace(5), FockSpace(4)});
    const StateVector psi = normalized(testing::random_vector(two.dim(), rng));
    DenseOperator oracle = DenseOperator::Zero(4, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        for (Index m = 0; m < 20; ++m) oracle(i, j) += psi(i * 20 + m) * std::conj(psi(j * 20 + m));
    CHECK(max_abs(reduced_internal_state(two, psi) - oracle) < 1e-15);
  }

  CHECK_THROWS_AS(reduced_internal_overlap(js, product, StateVector::Ones(4)), InvalidArgument);
}
