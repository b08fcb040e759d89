#include "vibronic/scenarios.hpp"

#include <chrono>
#include <cmath>

#include "vibronic/analysis.hpp"
#include "vibronic/error.hpp"

namespace vibronic {

namespace {

constexpr const char* kBellPlus = "bell_pp";

StateVector sign_state(const IonRegister& reg, std::string_view signs) {
  return jx_product_eigenstate(reg, JxEigenlabel::parse(signs).signs).first;
}

// Generic analytic target: Σ_s ⟨s|initial⟩ |s⟩ ⊗ Π_modes |χ_mode(m(s))⟩.
StateVector conditional_superposition(const ScenarioSpec& spec,
                                      const JointSpace& js) {
  const auto drives = scenario_drives(spec);
  const StateVector init = initial_internal_state(js.reg(), spec.initial_internal);
  StateVector out = StateVector::Zero(js.dim());
  for (const auto& label : all_sign_patterns(js.reg())) {
    const StateVector s = jx_product_eigenstate(js.reg(), label.signs).first;
    const Complex weight = s.dot(init);
    if (weight == 0.0) continue;
    StateVector motional = StateVector::Ones(1);
    for (int i = 0; i < js.n_modes(); ++i) {
      const FockSpace& mode = js.modes()[static_cast<std::size_t>(i)];
      StateVector branch = vacuum_state(mode);
      for (const auto& d : drives) {
        if (js.mode_index(d.mode) == i) {
          branch = branch_state(mode, d.k, conditional_amplitude(d, label.m, spec.params.tau));
        }
      }
      motional = tensor_product(motional, branch);
    }
    out += weight * tensor_product(s, motional);
  }
  return out;
}

bool is_default_initial(const ScenarioSpec& spec) {
  return spec.initial_internal == find_scenario(spec.name).default_initial;
}

// (|+⟩|χ⟩ + |−⟩|−χ⟩)/√2 for a single ion starting in |↓⟩.
StateVector single_ion_two_branch(const ScenarioSpec& spec, const JointSpace& js) {
  if (!is_default_initial(spec)) return conditional_superposition(spec, js);
  const DriveConfig drive = scenario_drives(spec).front();
  const Complex chi = conditional_amplitude(drive, 0.5, spec.params.tau);
  const FockSpace& mode = js.modes()[0];
  const StateVector plus = sign_state(js.reg(), "+");
  const StateVector minus = sign_state(js.reg(), "-");
  return (tensor_product(plus, branch_state(mode, drive.k, chi)) +
          tensor_product(minus, branch_state(mode, drive.k, -chi))) /
         std::sqrt(2.0);
}

// ½(φ₁|α,β⟩ + φ₂|−α,−β⟩ + φ₃|00⟩ + φ₄|00⟩) from |↓↓⟩|00⟩.
StateVector four_component(const ScenarioSpec& spec, const JointSpace& js) {
  if (!is_default_initial(spec)) return conditional_superposition(spec, js);
  const auto [alpha, beta] = two_ion_amplitudes(spec);
  const FockSpace& cm = js.modes()[0];
  const FockSpace& st = js.modes()[1];
  const IonRegister& reg = js.reg();
  const StateVector vac = tensor_product(vacuum_state(cm), vacuum_state(st));
  return 0.5 * (tensor_product(sign_state(reg, "++"), two_mode_coherent(cm, st, alpha, beta)) +
                tensor_product(sign_state(reg, "--"), two_mode_coherent(cm, st, -alpha, -beta)) +
                tensor_product(sign_state(reg, "-+"), vac) +
                tensor_product(sign_state(reg, "+-"), vac));
}

// (φ₁|α,β⟩ + φ₂|−α,−β⟩)/√2 from (|↓↓⟩ + |↑↑⟩)/√2.
StateVector bell_two_branch(const ScenarioSpec& spec, const JointSpace& js) {
  if (!is_default_initial(spec)) return conditional_superposition(spec, js);
  const auto [alpha, beta] = two_ion_amplitudes(spec);
  const FockSpace& cm = js.modes()[0];
  const FockSpace& st = js.modes()[1];
  return (tensor_product(sign_state(js.reg(), "++"), two_mode_coherent(cm, st, alpha, beta)) +
          tensor_product(sign_state(js.reg(), "--"), two_mode_coherent(cm, st, -alpha, -beta))) /
         std::sqrt(2.0);
}

std::optional<StateVector> cat_parity_post(const ScenarioSpec& spec,
                                           const JointSpace& js,
                                           const Bitstring& outcome) {
  if (!is_default_initial(spec)) return std::nullopt;
  const Complex alpha =
      conditional_amplitude(scenario_drives(spec).front(), 0.5, spec.params.tau);
  const FockSpace& mode = js.modes()[0];
  const double sign = outcome.up(0) ? -1.0 : 1.0;
  return normalized(coherent_state(mode, alpha) + sign * coherent_state(mode, -alpha));
}

std::optional<StateVector> four_component_post(const ScenarioSpec& spec,
                                               const JointSpace& js,
                                               const Bitstring& outcome) {
  if (!is_default_initial(spec)) return std::nullopt;
  const auto [alpha, beta] = two_ion_amplitudes(spec);
  const FockSpace& cm = js.modes()[0];
  const FockSpace& st = js.modes()[1];
  if (outcome.up(0) != outcome.up(1)) {
    return entangled_coherent_state(cm, st, alpha, beta, -1);
  }
  // ↓↓ → +2|00⟩, ↑↑ → −2|00⟩.
  return sleepy_cat_state(cm, st, alpha, beta, outcome.up(0) ? -1 : 1);
}

std::optional<StateVector> bell_post(const ScenarioSpec& spec,
                                     const JointSpace& js,
                                     const Bitstring& outcome) {
  if (!is_default_initial(spec)) return std::nullopt;
  const auto [alpha, beta] = two_ion_amplitudes(spec);
  // Equal spins (↓↓ and ↑↑) select the symmetric combination, unequal
  // spins the antisymmetric one: ⟨↓↓|φ₁,₂⟩ = ⟨↑↑|φ₁,₂⟩ = ½ while
  // ⟨↓↑|φ₁,₂⟩ = ±½.
  const int sign = outcome.up(0) == outcome.up(1) ? 1 : -1;
  return entangled_coherent_state(js.modes()[0], js.modes()[1], alpha, beta, sign);
}

std::vector<ScenarioDefinition> build_catalog() {
  using Post = std::function<StateVector(const ScenarioSpec&, const JointSpace&,
                                         const Bitstring&)>;
  auto wrap = [](auto fn) -> Post {
    return [fn](const ScenarioSpec& s, const JointSpace& js, const Bitstring& b) {
      auto v = fn(s, js, b);
      if (!v) throw InvalidArgument("no reference post-state for this initial state");
      return *v;
    };
  };

  std::vector<ScenarioDefinition> c;
  ScenarioParams single{.n_ions = 1, .k = 1, .eta = 0.1, .rabi = 1.0,
                        .rabi_r = 1.0, .tau = 2.0, .cutoffs = {}};
  ScenarioParams squeeze = single;
  squeeze.k = 2;
  squeeze.tau = 5.0;
  ScenarioParams two_ion = single;
  two_ion.n_ions = 2;

  c.push_back({"single_ion_cat",
               "N=1, first sidebands, |d>|0> -> (|+>|a> + |->|-a>)/sqrt2",
               single, "d", 1, 1, 1, {}, single_ion_two_branch, nullptr});
  c.push_back({"even_odd_cat",
               "single_ion_cat followed by internal detection: d -> even cat, "
               "u -> odd cat",
               single, "d", 1, 1, 1, {"d", "u"}, single_ion_two_branch,
               wrap(cat_parity_post)});
  c.push_back({"entangled_squeezed",
               "N=1, second sidebands, |d>|0> -> (|+>|xi> + |->|-xi>)/sqrt2",
               squeeze, "d", 1, 2, 1, {}, single_ion_two_branch, nullptr});
  c.push_back({"squeeze_only",
               "second sidebands from a Jx eigenstate: squeezing without "
               "internal entanglement",
               squeeze, "+", 1, 2, 0, {}, conditional_superposition, nullptr});
  c.push_back({"two_ion_four_component",
               "N=2, CM + stretch first sidebands, |dd>|00> -> four-branch cat",
               two_ion, "dd", 2, 1, 2, {"du", "ud", "dd", "uu"}, four_component,
               wrap(four_component_post)});
  c.push_back({"entangled_coherent_minus",
               "four-branch cat, detection of du -> (|a,b> - |-a,-b>)/norm",
               two_ion, "dd", 2, 1, 2, {"du"}, four_component,
               wrap(four_component_post)});
  c.push_back({"entangled_coherent_plus",
               "Bell input, detection of dd -> (|a,b> + |-a,-b>)/norm",
               two_ion, kBellPlus, 2, 1, 2, {"dd"}, bell_two_branch, wrap(bell_post)});
  c.push_back({"sleepy_cat",
               "four-branch cat, detection of dd/uu -> N(|a,b> + |-a,-b> +- 2|00>)",
               two_ion, "dd", 2, 1, 2, {"dd", "uu"}, four_component,
               wrap(four_component_post)});
  c.push_back({"bell_initialized",
               "(|dd> + |uu>)/sqrt2 input -> (phi1|a,b> + phi2|-a,-b>)/sqrt2",
               two_ion, kBellPlus, 2, 1, 2, {"dd", "uu", "du", "ud"},
               bell_two_branch, wrap(bell_post)});
  return c;
}

}  // namespace

bool ScenarioResult::passed() const {
  if (reference_fidelity < kFidelityTarget) return false;
  for (double t : tails) {
    if (!(t < kTailBound)) return false;
  }
  for (const auto& o : outcomes) {
    if (o.reference_fidelity < kFidelityTarget) return false;
  }
  return true;
}

const std::vector<ScenarioDefinition>& scenario_catalog() {
  static const std::vector<ScenarioDefinition> catalog = build_catalog();
  return catalog;
}

const ScenarioDefinition& find_scenario(std::string_view name) {
  for (const auto& d : scenario_catalog()) {
    if (d.name == name) return d;
  }
  throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec default_spec(std::string_view name) {
  const ScenarioDefinition& def = find_scenario(name);
  return resolve_spec(ScenarioSpec{def.name, def.defaults, def.default_initial});
}

ScenarioSpec resolve_spec(const ScenarioSpec& spec) {
  const ScenarioDefinition& def = find_scenario(spec.name);
  ScenarioSpec out = spec;
  ScenarioParams& p = out.params;
  if (out.initial_internal.empty()) out.initial_internal = def.default_initial;
  if (p.cutoffs.empty()) p.cutoffs.assign(static_cast<std::size_t>(def.n_modes), kDefaultCutoff);
  if (p.cutoffs.size() == 1 && def.n_modes == 2) p.cutoffs.push_back(p.cutoffs[0]);

  if (static_cast<int>(p.cutoffs.size()) != def.n_modes) {
    throw InvalidArgument(def.name + " needs " + std::to_string(def.n_modes) +
                          " cutoff(s)");
  }
  for (int c : p.cutoffs) FockSpace{c};
  if (def.required_n_ions != 0 && p.n_ions != def.required_n_ions) {
    throw InvalidArgument(def.name + " requires n_ions = " +
                          std::to_string(def.required_n_ions));
  }
  if (def.required_k != 0 && p.k != def.required_k) {
    throw InvalidArgument(def.name + " requires k = " + std::to_string(def.required_k));
  }
  IonRegister reg{p.n_ions};
  if (!(p.eta > 0.0) || !std::isfinite(p.eta)) {
    throw InvalidArgument("eta must be positive");
  }
  if (!std::isfinite(p.rabi) || !std::isfinite(p.rabi_r)) {
    throw InvalidArgument("Rabi frequencies must be finite");
  }
  if (!(p.tau >= 0.0) || !std::isfinite(p.tau)) {
    throw InvalidArgument("tau must be a finite non-negative duration");
  }
  initial_internal_state(reg, out.initial_internal);
  return out;
}

JointSpace scenario_space(const ScenarioSpec& resolved) {
  std::vector<FockSpace> modes;
  for (int c : resolved.params.cutoffs) modes.emplace_back(c);
  return JointSpace(IonRegister{resolved.params.n_ions}, std::move(modes));
}

std::vector<DriveConfig> scenario_drives(const ScenarioSpec& resolved) {
  const ScenarioParams& p = resolved.params;
  std::vector<DriveConfig> drives{{p.k, p.eta, p.rabi, Mode::cm}};
  if (p.cutoffs.size() == 2) {
    drives.push_back({p.k, stretch_lamb_dicke(p.eta), p.rabi_r, Mode::stretch});
  }
  return drives;
}

StateVector initial_internal_state(const IonRegister& reg, std::string_view text) {
  if (text == kBellPlus) {
    if (reg.n_ions() != 2) throw InvalidArgument("bell_pp needs two ions");
    return (basis_state(reg, Bitstring::parse("dd")) +
            basis_state(reg, Bitstring::parse("uu"))) /
           std::sqrt(2.0);
  }
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    return sign_state(reg, text);
  }
  return basis_state(reg, Bitstring::parse(text));
}

StateVector initial_state(const ScenarioSpec& resolved) {
  const JointSpace js = scenario_space(resolved);
  StateVector motional = StateVector::Ones(1);
  for (const auto& m : js.modes()) motional = tensor_product(motional, vacuum_state(m));
  return tensor_product(initial_internal_state(js.reg(), resolved.initial_internal),
                        motional);
}

std::pair<Complex, Complex> two_ion_amplitudes(const ScenarioSpec& resolved) {
  const auto drives = scenario_drives(resolved);
  if (drives.size() != 2) throw InvalidArgument("not a two-mode scenario");
  return {conditional_amplitude(drives[0], 1.0, resolved.params.tau),
          conditional_amplitude(drives[1], 1.0, resolved.params.tau)};
}

MeasurementRecord measure_internal(const StateVector& joint, const JointSpace& js,
                                   const Bitstring& outcome) {
  if (joint.size() != js.dim()) {
    throw InvalidArgument("measure_internal: state dimension does not match the joint space");
  }
  if (outcome.size() != js.reg().n_ions()) {
    throw InvalidArgument("measure_internal: outcome '" + outcome.str() +
                          "' does not match " + std::to_string(js.reg().n_ions()) +
                          " ions");
  }
  const Index mdim = js.motional_dim();
  const StateVector branch = joint.segment(outcome.index() * mdim, mdim);
  const double p = branch.squaredNorm();
  if (p < kDegenerateProbability) {
    throw DegenerateOutcome("outcome '" + outcome.str() + "' has probability " +
                            std::to_string(p));
  }
  return MeasurementRecord{outcome, p, branch / std::sqrt(p)};
}

StateVector internal_branch(const StateVector& joint, const JointSpace& js,
                            const StateVector& target_internal) {
  if (joint.size() != js.dim() || target_internal.size() != js.internal_dim()) {
    throw InvalidArgument("internal_branch: dimension mismatch");
  }
  Eigen::Map<const DenseOperator> psi(joint.data(), js.motional_dim(), js.internal_dim());
  return psi * target_internal.conjugate();
}

StateVector reference_state(const ScenarioSpec& spec) {
  const ScenarioSpec resolved = resolve_spec(spec);
  const ScenarioDefinition& def = find_scenario(resolved.name);
  return def.reference(resolved, scenario_space(resolved));
}

std::optional<StateVector> reference_post_state(const ScenarioSpec& spec,
                                                const Bitstring& outcome) {
  const ScenarioSpec resolved = resolve_spec(spec);
  const ScenarioDefinition& def = find_scenario(resolved.name);
  if (!def.post_reference || !is_default_initial(resolved)) return std::nullopt;
  if (outcome.size() != resolved.params.n_ions) {
    throw InvalidArgument("outcome length does not match the ion count");
  }
  return def.post_reference(resolved, scenario_space(resolved), outcome);
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioSpec resolved = resolve_spec(spec);
  const ScenarioDefinition& def = find_scenario(resolved.name);
  const JointSpace js = scenario_space(resolved);
  const auto drives = scenario_drives(resolved);

  const ConditionalPropagator u(js, drives, resolved.params.tau);
  ScenarioResult result{resolved, js, drives, u.apply(initial_state(resolved)),
                        {}, 0.0, {}, {}, 0.0};
  result.tails = mode_truncation_tails(js, result.joint_state, 0.25);
  for (std::size_t i = 0; i < result.tails.size(); ++i) {
    if (!(result.tails[i] < kTailBound)) {
      throw TruncationError(def.name + ": truncation tail " +
                            std::to_string(result.tails[i]) + " in mode " +
                            std::string(to_string(drives[i].mode)) +
                            " exceeds the bound; increase the cutoff");
    }
  }
  result.reference_fidelity =
      fidelity(result.joint_state, def.reference(resolved, js));

  for (const auto& text : def.measured_outcomes) {
    const Bitstring outcome = Bitstring::parse(text);
    try {
      OutcomeResult o{measure_internal(result.joint_state, js, outcome), 0.0};
      if (auto ref = reference_post_state(resolved, outcome)) {
        o.reference_fidelity = fidelity(o.record.post_state, *ref);
      } else {
        o.reference_fidelity = 1.0;
        result.diagnostics.push_back("outcome " + text +
                                     ": no analytic reference for this initial state");
      }
      result.outcomes.push_back(std::move(o));
    } catch (const DegenerateOutcome& e) {
      result.diagnostics.push_back(e.what());
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  result.wall_time = std::chrono::duration<double>(stop - start).count();
  return result;
}

ScenarioResult squeeze_only(const ScenarioSpec& spec) {
  ScenarioSpec s = spec;
  if (s.name.empty()) s.name = "squeeze_only";
  const ScenarioSpec resolved = resolve_spec(s);
  if (resolved.params.k != 2) throw InvalidArgument("squeeze_only requires k = 2");
  const auto& init = resolved.initial_internal;
  if (init.empty() || (init.front() != '+' && init.front() != '-')) {
    throw InvalidArgument("squeeze_only needs a Jx sign pattern as initial state");
  }
  ScenarioResult result = run_scenario(resolved);
  const JxEigenlabel label = JxEigenlabel::parse(init);
  if (label.m == 0.0) {
    result.diagnostics.push_back("m(s) = 0: no squeezing generated");
  }
  return result;
}

// ---------------------------------------------------------------------------

StateVector branch_state(const FockSpace& space, int k, Complex chi) {
  switch (k) {
    case 1:
      return coherent_state(space, chi);
    case 2:
      return squeezed_vacuum_state(space, chi);
    default:
      throw InvalidArgument("analytic branch states exist for k = 1, 2 only");
  }
}

StateVector two_mode_coherent(const FockSpace& cm, const FockSpace& stretch,
                              Complex alpha, Complex beta) {
  return tensor_product(coherent_state(cm, alpha), coherent_state(stretch, beta));
}

double entangled_coherent_norm_sq(const FockSpace& cm, const FockSpace& stretch,
                                  Complex alpha, Complex beta, int sign) {
  return (two_mode_coherent(cm, stretch, alpha, beta) +
          static_cast<double>(sign) * two_mode_coherent(cm, stretch, -alpha, -beta))
      .squaredNorm();
}

StateVector entangled_coherent_state(const FockSpace& cm, const FockSpace& stretch,
                                     Complex alpha, Complex beta, int sign) {
  const StateVector v =
      two_mode_coherent(cm, stretch, alpha, beta) +
      static_cast<double>(sign) * two_mode_coherent(cm, stretch, -alpha, -beta);
  if (v.squaredNorm() < kDegenerateProbability) {
    throw DegenerateOutcome("entangled coherent state vanishes for alpha = beta = 0");
  }
  return v / v.norm();
}

namespace {

StateVector sleepy_cat_unnormalized(const FockSpace& cm, const FockSpace& stretch,
                                    Complex alpha, Complex beta, int sign) {
  const StateVector vac = tensor_product(vacuum_state(cm), vacuum_state(stretch));
  return two_mode_coherent(cm, stretch, alpha, beta) +
         two_mode_coherent(cm, stretch, -alpha, -beta) +
         2.0 * static_cast<double>(sign) * vac;
}

}  // namespace

double sleepy_cat_normalization(const FockSpace& cm, const FockSpace& stretch,
                                Complex alpha, Complex beta, int sign) {
  const double n = sleepy_cat_unnormalized(cm, stretch, alpha, beta, sign).norm();
  if (n * n < kDegenerateProbability) {
    throw DegenerateOutcome("state vanishes; no normalization constant");
  }
  return 1.0 / n;
}

StateVector sleepy_cat_state(const FockSpace& cm, const FockSpace& stretch,
                             Complex alpha, Complex beta, int sign) {
  return sleepy_cat_normalization(cm, stretch, alpha, beta, sign) *
         sleepy_cat_unnormalized(cm, stretch, alpha, beta, sign);
}

}  // namespace vibronic
