#pragma once

// Named preparation protocols and their analytic target states.
//
// Sign convention: the closed-form evolution imprints χ = −i·g·m·t, so the
// single-ion cat is (|+⟩|α⟩ + |−⟩|−α⟩)/√2 with α = −iηΩτ, and the two-ion
// states carry α = −2iηΩτ, β = −2iη_rΩ_rτ. The commonly quoted forms use
// +i; the state families are invariant under α → −α together with the
// exchange of the branch labels, so only the sign of the amplitudes differs.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibronic/dynamics.hpp"
#include "vibronic/spin.hpp"

namespace vibronic {

inline constexpr double kTailBound = 1e-10;
inline constexpr double kFidelityTarget = 1.0 - 1e-8;
inline constexpr double kDegenerateProbability = 1e-14;

struct ScenarioParams {
  int n_ions = 1;
  int k = 1;
  double eta = 0.1;
  double rabi = 1.0;
  double rabi_r = 1.0;
  double tau = 2.0;
  std::vector<int> cutoffs;  // empty: kDefaultCutoff for every mode
};

struct ScenarioSpec {
  std::string name;
  ScenarioParams params;
  /// "dd"-style bitstring, "+-"-style Jx sign pattern, or "bell_pp"
  /// for (|↓↓⟩ + |↑↑⟩)/√2. Empty selects the scenario default.
  std::string initial_internal;
};

struct MeasurementRecord {
  Bitstring outcome;
  double probability = 0.0;
  StateVector post_state;  // normalized motional state
};

struct OutcomeResult {
  MeasurementRecord record;
  double reference_fidelity = 0.0;
};

struct ScenarioResult {
  ScenarioSpec spec;  // with defaults filled in
  JointSpace space;
  std::vector<DriveConfig> drives;
  StateVector joint_state;
  std::vector<double> tails;  // per mode, top quarter of the Fock levels
  double reference_fidelity = 0.0;
  std::vector<OutcomeResult> outcomes;
  std::vector<std::string> diagnostics;
  double wall_time = 0.0;  // seconds

  bool passed() const;
};

struct ScenarioDefinition {
  std::string name;
  std::string description;
  ScenarioParams defaults;
  std::string default_initial;
  int n_modes = 1;
  /// Required sideband order and ion count (0: any).
  int required_k = 0;
  int required_n_ions = 0;
  /// Outcomes measured after the evolution, each with a reference post-state.
  std::vector<std::string> measured_outcomes;
  std::function<StateVector(const ScenarioSpec&, const JointSpace&)> reference;
  std::function<StateVector(const ScenarioSpec&, const JointSpace&,
                            const Bitstring&)>
      post_reference;
};

const std::vector<ScenarioDefinition>& scenario_catalog();
/// Throws InvalidArgument for unknown names.
const ScenarioDefinition& find_scenario(std::string_view name);

/// Spec with the definition's defaults.
ScenarioSpec default_spec(std::string_view name);

/// Fills defaults (initial state, cutoffs) and validates; throws
/// InvalidArgument on violations.
ScenarioSpec resolve_spec(const ScenarioSpec& spec);

JointSpace scenario_space(const ScenarioSpec& resolved);
std::vector<DriveConfig> scenario_drives(const ScenarioSpec& resolved);

StateVector initial_internal_state(const IonRegister& reg, std::string_view text);
StateVector initial_state(const ScenarioSpec& resolved);

ScenarioResult run_scenario(const ScenarioSpec& spec);

/// Projects the internal state onto `outcome`; throws DegenerateOutcome if
/// the probability is below kDegenerateProbability.
MeasurementRecord measure_internal(const StateVector& joint, const JointSpace& js,
                                   const Bitstring& outcome);

/// ⟨target|ψ⟩ over the internal factor: the (unnormalized) motional branch.
StateVector internal_branch(const StateVector& joint, const JointSpace& js,
                            const StateVector& target_internal);

/// Analytic joint target state for the scenario.
StateVector reference_state(const ScenarioSpec& spec);

/// Analytic post-measurement state; nullopt if the scenario does not
/// define one for `outcome`.
std::optional<StateVector> reference_post_state(const ScenarioSpec& spec,
                                                const Bitstring& outcome);

/// Starting from a single Jx product eigenstate with k = 2: the joint state
/// must remain |s⟩ ⊗ (squeezed vacuum).
ScenarioResult squeeze_only(const ScenarioSpec& spec);

// Building blocks ------------------------------------------------------------

/// Coherent state for k = 1, squeezed vacuum for k = 2.
StateVector branch_state(const FockSpace& space, int k, Complex chi);

/// |α⟩ ⊗ |β⟩.
StateVector two_mode_coherent(const FockSpace& cm, const FockSpace& stretch,
                              Complex alpha, Complex beta);

/// ‖ |α,β⟩ + sign·|−α,−β⟩ ‖².
double entangled_coherent_norm_sq(const FockSpace& cm, const FockSpace& stretch,
                                  Complex alpha, Complex beta, int sign);

/// (|α,β⟩ + sign·|−α,−β⟩) normalized; throws DegenerateOutcome if it vanishes.
StateVector entangled_coherent_state(const FockSpace& cm, const FockSpace& stretch,
                                     Complex alpha, Complex beta, int sign);

/// 𝒩 with 𝒩(|α,β⟩ + |−α,−β⟩ + sign·2|00⟩) normalized.
double sleepy_cat_normalization(const FockSpace& cm, const FockSpace& stretch,
                                Complex alpha, Complex beta, int sign);
StateVector sleepy_cat_state(const FockSpace& cm, const FockSpace& stretch,
                             Complex alpha, Complex beta, int sign);

/// The CM and stretch amplitudes imprinted on the m = +1 sector.
std::pair<Complex, Complex> two_ion_amplitudes(const ScenarioSpec& resolved);

}  // namespace vibronic
