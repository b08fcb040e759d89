#pragma once

// State diagnostics. Single-mode functions take a motional state on one
// truncated Fock space.
//
// Quadrature convention: X_θ = (a e^{−iθ} + a† e^{iθ}) / 2, so the vacuum
// variance is 1/4 for every θ.

#include <vector>

#include "vibronic/dynamics.hpp"
#include "vibronic/fock.hpp"

namespace vibronic {

/// |⟨ψ|φ⟩|², clamped to [0, 1].
double fidelity(const StateVector& psi, const StateVector& phi);

/// Σ (−1)ⁿ |cₙ|².
double parity_expectation(const StateVector& psi);

double quadrature_variance(const StateVector& psi, double theta);

/// Angle in [0, π) at which quadrature_variance is smallest, from the
/// second moments: Var(θ) = A + Re[(⟨a²⟩ − ⟨a⟩²) e^{−2iθ}] / 2.
double min_variance_angle(const StateVector& psi);

/// For a squeezed vacuum produced with |ξ| = r, the exponent c in
/// σ_min / σ_vacuum = e^{−c·r}, measured from the state itself.
double compression_exponent(const StateVector& squeezed, double r);

/// P(n) = |cₙ|².
std::vector<double> number_distribution(const StateVector& psi);

/// Population in the top ⌈fraction · cutoff⌉ Fock levels.
double truncation_tail(const StateVector& psi, double fraction);

/// Per-mode truncation tail of a joint state (population summed over all
/// other indices).
std::vector<double> mode_truncation_tails(const JointSpace& js,
                                          const StateVector& joint,
                                          double fraction);

struct WignerGridSpec {
  double x_min = -3.0;
  double x_max = 3.0;
  double p_min = -3.0;
  double p_max = 3.0;
  int resolution = 61;
  /// A grid point whose displaced state puts more than this population in
  /// the top quarter of the Fock space is flagged and its value clamped.
  double max_tail = 1e-8;
};

/// W(α) at α = x + i·p, stored values(p_index, x_index).
struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ps;
  Eigen::MatrixXd values;
  int flagged = 0;
};

/// Displaced-parity Wigner function W(α) = (2/π) Σ (−1)ⁿ |⟨n|D(−α)|ψ⟩|².
WignerGrid wigner_grid(const StateVector& psi, const WignerGridSpec& spec);

/// W at a single phase-space point (no truncation check).
double wigner_value(const StateVector& psi, Complex alpha);

/// D(α)·ψ for k = 1, via the action of the exponential on the vector.
StateVector displace(const StateVector& psi, Complex alpha);

/// ρ_internal = Tr_motion |ψ⟩⟨ψ|.
DenseOperator reduced_internal_state(const JointSpace& js,
                                     const StateVector& joint);

/// ⟨target| ρ_internal |target⟩.
double reduced_internal_overlap(const JointSpace& js, const StateVector& joint,
                                const StateVector& target_internal);

}  // namespace vibronic
