#pragma once

// Effective sideband Hamiltonians and their propagators (ħ = 1).
//
// H = Σ_drives g_drive · Jx ⊗ (cᵏ + c†ᵏ),  g = 2ηᵏΩ/k!
//
// Because every drive couples through the same Jx, the evolution is a
// displacement of each driven mode conditioned on the Jx eigenvalue m:
//
//   e^{−iHt} = Σ_s |s⟩⟨s| ⊗ Π_drives D_k(χ(m(s), t)),  χ = −i·g·m·t
//
// with |s⟩ running over the Jx product eigenstates.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vibronic/fock.hpp"
#include "vibronic/spin.hpp"

namespace vibronic {

enum class Mode { cm, stretch };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Axial trap: CM frequency ν, stretch frequency √3·ν.
struct TrapConfig {
  double nu = 1.0;
  int n_ions = 1;

  double stretch_frequency() const;
  void validate() const;
};

/// η = q·√(ħ / (2·N·m·ν)).
double lamb_dicke_cm(double q, double m_ion, double nu, int n_ions,
                     double hbar = 1.0);

/// Stretch-mode Lamb-Dicke parameter η_r = η·3^{−1/4}.
double stretch_lamb_dicke(double eta_cm);

/// One bichromatic k-th sideband drive on a single normal mode.
struct DriveConfig {
  int k = 1;
  double eta = 0.1;
  double rabi = 1.0;
  Mode mode = Mode::cm;

  /// 2ηᵏΩ/k!.
  double coupling() const;
  void validate() const;
};

/// Conditional amplitude χ = −i·(2ηᵏΩ/k!)·m·t that e^{−iHt} imprints on
/// the driven mode within the Jx = m sector.
Complex conditional_amplitude(const DriveConfig& drive, double m, double t);

/// internal ⊗ CM [⊗ stretch], internal index slowest-varying.
class JointSpace {
 public:
  JointSpace(IonRegister reg, std::vector<FockSpace> modes);

  const IonRegister& reg() const noexcept { return reg_; }
  const std::vector<FockSpace>& modes() const noexcept { return modes_; }
  int n_modes() const noexcept { return static_cast<int>(modes_.size()); }
  /// Position of `mode` in modes(); throws InvalidArgument if absent.
  int mode_index(Mode mode) const;

  Index internal_dim() const noexcept { return reg_.dim(); }
  Index motional_dim() const noexcept;
  Index dim() const noexcept { return internal_dim() * motional_dim(); }

  std::vector<int> cutoffs() const;

 private:
  IonRegister reg_;
  std::vector<FockSpace> modes_;
};

/// Checks drives against the joint space (distinct modes, all present).
void validate_drives(const JointSpace& js, std::span<const DriveConfig> drives);

/// Dense H on the joint space. Only for dim() ≤ kMaxOperatorDimension.
DenseOperator effective_hamiltonian(const JointSpace& js,
                                    std::span<const DriveConfig> drives);

/// The single drive term g·Jx ⊗ (cᵏ + c†ᵏ) on internal ⊗ (driven mode).
DenseOperator drive_term(const IonRegister& reg, const FockSpace& mode,
                         const DriveConfig& drive);

/// e^{−iHt} by dense matrix exponential.
DenseOperator propagator_numerical(const DenseOperator& h, double t);

/// Dense closed-form propagator, assembled block by block.
DenseOperator propagator_closed_form(const JointSpace& js,
                                     std::span<const DriveConfig> drives,
                                     double t);

/// U·ψ. Throws InvalidArgument on dimension mismatch and TruncationError
/// if the norm changes by more than `norm_tol`.
StateVector evolve(const StateVector& state, const DenseOperator& u,
                   double norm_tol = kAmplitudeTolerance);

/// Closed-form propagator kept in factored form: one displacement per
/// (driven mode, distinct m). Never materializes the joint matrix, so it
/// scales to two modes at large cutoffs.
class ConditionalPropagator {
 public:
  ConditionalPropagator(const JointSpace& js,
                        std::span<const DriveConfig> drives, double t);

  const JointSpace& space() const noexcept { return js_; }
  double time() const noexcept { return t_; }

  StateVector apply(const StateVector& state) const;
  /// Column `col` of the joint propagator.
  StateVector column(Index col) const;
  DenseOperator dense() const;

  /// Operator acting on mode `mode_index` within the Jx = m sector
  /// (identity for undriven modes).
  const DenseOperator& mode_operator(double m, int mode_index) const;

  /// Largest population that any column with all Fock indices ≤ max_level
  /// places in the top quarter of some mode.
  double leakage(int max_level) const;

 private:
  struct Sector {
    double m;
    std::vector<DenseOperator> ops;  // one per mode
  };

  const Sector& sector(double m) const;

  JointSpace js_;
  double t_;
  std::vector<JxEigenlabel> patterns_;
  std::vector<StateVector> eigenstates_;
  std::vector<Sector> sectors_;
};

/// Numerical e^{−iHt} computed term by term: each drive term is
/// exponentiated densely on internal ⊗ (its mode) and the factors are
/// applied in sequence. The terms share Jx and act on disjoint modes, so
/// they commute and the product equals the exponential of the full H.
class SplitPropagator {
 public:
  SplitPropagator(const JointSpace& js, std::span<const DriveConfig> drives,
                  double t);

  StateVector apply(const StateVector& state) const;
  StateVector column(Index col) const;

 private:
  JointSpace js_;
  std::vector<int> mode_indices_;
  std::vector<DenseOperator> factors_;  // on internal ⊗ mode_indices_[i]
};

/// Applies `op` (on internal ⊗ mode `mode_index`) to a joint state.
StateVector apply_internal_mode_operator(const JointSpace& js, int mode_index,
                                         const DenseOperator& op,
                                         const StateVector& state);

/// Expectation ⟨ψ|H|ψ⟩ without forming H densely.
double energy_expectation(const JointSpace& js,
                          std::span<const DriveConfig> drives,
                          const StateVector& state);

}  // namespace vibronic
