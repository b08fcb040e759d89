#pragma once

// Dense linear algebra over truncated single-mode Fock spaces.
//
// Joint spaces are always ordered internal ⊗ mode₁ ⊗ mode₂ with the left
// factor slowest-varying, i.e. tensor_product(A, B)(i*dimB + j, ...) holds
// A(i, ...) * B(j, ...).

#include <complex>

#include <Eigen/Dense>

namespace vibronic {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr int kDefaultCutoff = 64;
inline constexpr double kAmplitudeTolerance = 1e-10;
inline constexpr double kDefaultExpmTolerance = 1e-12;
inline constexpr double kExpmAccuracyFloor = 1e-15;

/// Largest dense operator dimension tensor_product will build. Joint spaces
/// beyond this are handled by the blockwise propagators in dynamics.hpp.
inline constexpr Index kMaxOperatorDimension = 4096;
/// Largest state-vector dimension tensor_product will build.
inline constexpr Index kMaxStateDimension = Index{1} << 22;

/// Truncated bosonic mode: Fock levels |0⟩ … |cutoff−1⟩.
class FockSpace {
 public:
  explicit FockSpace(int cutoff = kDefaultCutoff);

  int cutoff() const noexcept { return cutoff_; }
  Index dim() const noexcept { return cutoff_; }

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int cutoff_;
};

DenseOperator identity(Index dim);

/// a, with ⟨n−1|a|n⟩ = √n.
DenseOperator annihilation_op(const FockSpace& space);
DenseOperator creation_op(const FockSpace& space);
DenseOperator number_op(const FockSpace& space);

/// Kronecker product, left factor slowest-varying.
DenseOperator tensor_product(const DenseOperator& a, const DenseOperator& b,
                             Index max_dim = kMaxOperatorDimension);
StateVector tensor_product(const StateVector& u, const StateVector& v,
                           Index max_dim = kMaxStateDimension);

/// exp(A) by Padé scaling and squaring, accurate to unit roundoff in the
/// backward sense. Throws NumericalError for non-finite input or output, or
/// if `tol` is tighter than kExpmAccuracyFloor.
DenseOperator matrix_exponential(const DenseOperator& a,
                                 double tol = kDefaultExpmTolerance);

/// χ a†ᵏ − χ* aᵏ on the truncated space.
DenseOperator ladder_generator(const FockSpace& space, int k, Complex chi);

/// D_k(χ) = exp(χ a†ᵏ − χ* aᵏ). k = 1 is the usual displacement, k = 2 a
/// squeeze. The truncated generator is anti-Hermitian, so the result is
/// exactly unitary on the truncated space; agreement with the untruncated
/// operator requires the relevant states to stay far from the cutoff.
DenseOperator displacement_op(const FockSpace& space, int k, Complex chi);

StateVector fock_state(const FockSpace& space, int n);
StateVector vacuum_state(const FockSpace& space);

/// e^{−|α|²/2} αⁿ/√n!, renormalized on the truncated space.
StateVector coherent_state(const FockSpace& space, Complex alpha);

/// exp(ξ a†² − ξ* a²)|0⟩, renormalized. Throws TruncationError when the
/// population of the top two retained levels exceeds `max_edge_population`.
StateVector squeezed_vacuum_state(const FockSpace& space, Complex xi,
                                  double max_edge_population = 1e-10);

/// Returns v/‖v‖; throws NumericalError for a (numerically) zero vector.
StateVector normalized(const StateVector& v);

bool all_finite(const DenseOperator& m);
bool all_finite(const StateVector& v);

}  // namespace vibronic
