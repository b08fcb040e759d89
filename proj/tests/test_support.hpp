#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <random>

#include "vibronic/fock.hpp"

namespace vibronic::testing {

inline DenseOperator random_matrix(Index d, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  DenseOperator m(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) m(i, j) = Complex(u(rng), u(rng));
  }
  return m;
}

inline StateVector random_vector(Index d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(u(rng), u(rng));
  return v;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

/// ⟨n|α⟩ for the untruncated coherent state.
inline Complex coherent_amplitude(Complex alpha, int n) {
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (int i = 1; i <= n; ++i) c *= alpha / std::sqrt(static_cast<double>(i));
  return c;
}

/// ⟨α|β⟩ = exp(−(|α|² + |β|²)/2 + α*β).
inline Complex coherent_overlap(Complex alpha, Complex beta) {
  return std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)) + std::conj(alpha) * beta);
}

/// Untruncated exp(ξ a†² − ξ* a²)|0⟩ amplitudes in closed form:
/// c₂ₙ = sech^{1/2}(2|ξ|) (e^{iφ} tanh 2|ξ|)ⁿ √((2n)!) / (2ⁿ n!).
inline StateVector squeezed_vacuum_closed_form(Index d, Complex xi) {
  StateVector v = StateVector::Zero(d);
  const double r = 2.0 * std::abs(xi);
  const Complex ratio = r == 0.0 ? Complex(0.0) : std::polar(std::tanh(r), std::arg(xi));
  Complex c = 1.0 / std::sqrt(std::cosh(r));
  for (Index n = 0; 2 * n < d; ++n) {
    v(2 * n) = c;
    // c_{2n+2}/c_{2n} = ratio · √((2n+1)(2n+2)) / (2(n+1))
    c *= ratio * std::sqrt(static_cast<double>((2 * n + 1) * (2 * n + 2))) /
         (2.0 * static_cast<double>(n + 1));
  }
  return v;
}

}  // namespace vibronic::testing
