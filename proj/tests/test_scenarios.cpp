#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vibronic/analysis.hpp"
#include "vibronic/error.hpp"
#include "vibronic/scenarios.hpp"

using namespace vibronic;
using vibronic::testing::coherent_overlap;
using vibronic::testing::max_abs;

namespace {

// Outcome probability from the dense projector |b⟩⟨b| ⊗ 1 applied to the joint state.
double projector_probability(const JointSpace& js, const StateVector& joint, const Bitstring& b) {
  const StateVector e = basis_state(js.reg(), b);
  double p = 0.0;
  for (Index i = 0; i < js.internal_dim(); ++i) {
    for (Index m = 0; m < js.motional_dim(); ++m) {
      p += std::norm(e(i) * joint(i * js.motional_dim() + m));
    }
  }
  return p;
}

// ‖Σ cᵢ |aᵢ, bᵢ⟩‖² from pairwise coherent overlaps.
double gram_norm_sq(const std::vector<Complex>& c, const std::vector<Complex>& a,
                    const std::vector<Complex>& b) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      sum += std::conj(c[i]) * c[j] * coherent_overlap(a[i], a[j]) * coherent_overlap(b[i], b[j]);
  return sum.real();
}

ScenarioSpec spec_for(const std::string& name) { return default_spec(name); }

}  // namespace

TEST_CASE("catalog") {
  const auto& catalog = scenario_catalog();
  CHECK(catalog.size() == 9);
  for (const auto& def : catalog) {
    CHECK_FALSE(def.description.empty());
    CHECK(find_scenario(def.name).name == def.name);
  }
  CHECK_THROWS_AS(find_scenario("no_such_thing"), InvalidArgument);
}

TEST_CASE("spec resolution") {
  const ScenarioSpec cat = spec_for("single_ion_cat");
  CHECK(cat.initial_internal == "d");
  REQUIRE(cat.params.cutoffs.size() == 1);
  CHECK(cat.params.cutoffs[0] == kDefaultCutoff);
  CHECK(spec_for("sleepy_cat").params.cutoffs.size() == 2);

  ScenarioSpec s = cat;
  s.params.n_ions = 2;
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);
  s = cat;
  s.params.k = 2;
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);
  s = cat;
  s.params.tau = -1.0;
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);
  s = cat;
  s.params.eta = 0.0;
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);
  s = cat;
  s.params.cutoffs = {64, 64};
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);
  s = cat;
  s.initial_internal = "dd";
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);
  s = cat;
  s.initial_internal = "bell_pp";
  CHECK_THROWS_AS(resolve_spec(s), InvalidArgument);

  ScenarioSpec two = spec_for("sleepy_cat");
  two.params.cutoffs = {32};
  CHECK(resolve_spec(two).params.cutoffs == std::vector<int>{32, 32});
}

TEST_CASE("zero duration leaves the initial state unchanged") {
  for (const auto& def : scenario_catalog()) {
    ScenarioSpec s = default_spec(def.name);
    s.params.tau = 0.0;
    s.params.cutoffs.assign(s.params.cutoffs.size(), 16);
    const ScenarioResult r = run_scenario(s);
    CHECK(max_abs(StateVector(r.joint_state - initial_state(r.spec))) < 1e-15);
  }
}

TEST_CASE("single-ion cat") {
  const ScenarioResult r = run_scenario(spec_for("single_ion_cat"));
  const Complex alpha = conditional_amplitude(r.drives[0], 0.5, r.spec.params.tau);
  CHECK(std::abs(std::abs(alpha) - 0.2) < 1e-15);
  CHECK(r.reference_fidelity >= 1.0 - 1e-8);
  CHECK(r.tails[0] < 1e-10);
  CHECK(r.passed());

  // Independent target built in the test: (|+⟩|α⟩ + |−⟩|−α⟩)/√2.
  const FockSpace& mode = r.space.modes()[0];
  const StateVector plus = jx_product_eigenstate(r.space.reg(), {1}).first;
  const StateVector minus = jx_product_eigenstate(r.space.reg(), {-1}).first;
  const StateVector target = (tensor_product(plus, coherent_state(mode, alpha)) +
                              tensor_product(minus, coherent_state(mode, -alpha))) /
                             std::sqrt(2.0);
  CHECK(fidelity(r.joint_state, target) >= 1.0 - 1e-8);
}

TEST_CASE("even and odd cats") {
  const ScenarioResult r = run_scenario(spec_for("even_odd_cat"));
  REQUIRE(r.outcomes.size() == 2);
  const Complex alpha = conditional_amplitude(r.drives[0], 0.5, r.spec.params.tau);
  // ⟨−α|α⟩ = e^{−2|α|²}.
  const double overlap = std::exp(-2.0 * std::norm(alpha));
  for (const auto& o : r.outcomes) {
    const bool up = o.record.outcome.up(0);
    const StateVector& post = o.record.post_state;
    CHECK(std::abs(parity_expectation(post) - (up ? -1.0 : 1.0)) < 1e-10);
    double wrong = 0.0;
    for (Index n = up ? 0 : 1; n < post.size(); n += 2) wrong += std::norm(post(n));
    CHECK(wrong < 1e-12);
    CHECK(std::abs(o.record.probability - 0.5 * (1.0 + (up ? -overlap : overlap))) < 1e-10);
    CHECK(std::abs(o.record.probability - projector_probability(r.space, r.joint_state, o.record.outcome)) < 1e-14);
    CHECK(o.reference_fidelity >= 1.0 - 1e-10);
  }
}

TEST_CASE("entangled squeezing") {
  const ScenarioResult r = run_scenario(spec_for("entangled_squeezed"));
  CHECK(r.reference_fidelity >= 1.0 - 1e-8);
  CHECK(r.passed());
  const Complex xi = conditional_amplitude(r.drives[0], 0.5, r.spec.params.tau);
  CHECK(std::abs(xi) <= 0.25);
  for (int sign : {1, -1}) {
    const StateVector s = jx_product_eigenstate(r.space.reg(), {sign}).first;
    const StateVector branch = normalized(internal_branch(r.joint_state, r.space, s));
    double odd = 0.0;
    for (Index n = 1; n < branch.size(); n += 2) odd += std::norm(branch(n));
    CHECK(odd < 1e-12);
    const double theta = min_variance_angle(branch);
    const double lo = quadrature_variance(branch, theta);
    const double hi = quadrature_variance(branch, theta + std::numbers::pi / 2.0);
    CHECK(std::abs(lo * hi - 1.0 / 16.0) < 1e-8);
    CHECK(fidelity(branch, testing::squeezed_vacuum_closed_form(64, double(sign) * xi)) >= 1.0 - 1e-10);
  }
}

TEST_CASE("squeezing without internal entanglement") {
  const ScenarioResult r = squeeze_only(spec_for("squeeze_only"));
  const StateVector plus = jx_product_eigenstate(r.space.reg(), {1}).first;
  CHECK(std::abs(reduced_internal_overlap(r.space, r.joint_state, plus) - 1.0) < 1e-10);
  CHECK(r.reference_fidelity >= 1.0 - 1e-8);
  CHECK(r.diagnostics.empty());

  ScenarioSpec two = spec_for("squeeze_only");
  two.params.n_ions = 2;
  two.initial_internal = "+-";
  const ScenarioResult zero = squeeze_only(two);
  CHECK(zero.diagnostics.size() == 1);
  CHECK(max_abs(StateVector(zero.joint_state - initial_state(zero.spec))) < 1e-15);

  ScenarioSpec bad = spec_for("squeeze_only");
  bad.initial_internal = "d";
  CHECK_THROWS_AS(squeeze_only(bad), InvalidArgument);
}

TEST_CASE("two-ion amplitudes") {
  const ScenarioSpec s = spec_for("two_ion_four_component");
  const auto [alpha, beta] = two_ion_amplitudes(s);
  const double eta_r = 0.1 * std::pow(3.0, -0.25);
  CHECK(std::abs(alpha - Complex(0.0, -2.0 * 0.1 * 2.0)) < 1e-15);
  CHECK(std::abs(beta - Complex(0.0, -2.0 * eta_r * 2.0)) < 1e-15);
  CHECK_THROWS_AS(two_ion_amplitudes(spec_for("single_ion_cat")), InvalidArgument);
}

TEST_CASE("two-ion four-component state and its projections") {
  const ScenarioResult r = run_scenario(spec_for("two_ion_four_component"));
  CHECK(r.reference_fidelity >= 1.0 - 1e-8);
  CHECK(r.passed());
  REQUIRE(r.outcomes.size() == 4);

  const auto [alpha, beta] = two_ion_amplitudes(r.spec);
  const double s = std::norm(alpha) + std::norm(beta);
  double total = 0.0;
  for (const auto& o : r.outcomes) {
    const double oracle = projector_probability(r.space, r.joint_state, o.record.outcome);
    CHECK(std::abs(o.record.probability - oracle) < 1e-10);
    CHECK(o.reference_fidelity >= 1.0 - 1e-10);
    total += o.record.probability;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);

  // ⟨↓↑|ψ⟩ = ¼(|α,β⟩ − |−α,−β⟩): probability (1 − e^{−2S})/8.
  const MeasurementRecord du = measure_internal(r.joint_state, r.space, Bitstring::parse("du"));
  CHECK(std::abs(du.probability - (1.0 - std::exp(-2.0 * s)) / 8.0) < 1e-10);
  const MeasurementRecord ud = measure_internal(r.joint_state, r.space, Bitstring::parse("ud"));
  CHECK(std::abs(fidelity(du.post_state, ud.post_state) - 1.0) < 1e-12);

  const MeasurementRecord dd = measure_internal(r.joint_state, r.space, Bitstring::parse("dd"));
  const MeasurementRecord uu = measure_internal(r.joint_state, r.space, Bitstring::parse("uu"));
  // ⟨↓↓|ψ⟩ = ¼(|α,β⟩ + |−α,−β⟩ + 2|00⟩), ⟨↑↑|ψ⟩ = ¼(|α,β⟩ + |−α,−β⟩ − 2|00⟩).
  const std::vector<Complex> as{alpha, -alpha, 0.0};
  const std::vector<Complex> bs{beta, -beta, 0.0};
  CHECK(std::abs(dd.probability - gram_norm_sq({0.25, 0.25, 0.5}, as, bs)) < 1e-10);
  CHECK(std::abs(uu.probability - gram_norm_sq({0.25, 0.25, -0.5}, as, bs)) < 1e-10);
}

TEST_CASE("entangled coherent building blocks") {
  const FockSpace cm(64);
  const FockSpace st(64);
  for (auto [alpha, beta] : {std::pair<Complex, Complex>{Complex(0.0, -0.4), Complex(0.0, -0.304)},
                             {Complex(0.5, 0.0), Complex(0.5, 0.0)},
                             {Complex(0.3, 0.2), Complex(-0.1, 0.6)}}) {
    const double s = std::norm(alpha) + std::norm(beta);
    CHECK(std::abs(entangled_coherent_norm_sq(cm, st, alpha, beta, -1) - 2.0 * (1.0 - std::exp(-2.0 * s))) < 1e-10);
    CHECK(std::abs(entangled_coherent_norm_sq(cm, st, alpha, beta, 1) - 2.0 * (1.0 + std::exp(-2.0 * s))) < 1e-10);
    const StateVector minus = entangled_coherent_state(cm, st, alpha, beta, -1);
    const StateVector plus = entangled_coherent_state(cm, st, alpha, beta, 1);
    CHECK(std::abs(minus.dot(plus)) < 1e-10);

    for (int sign : {1, -1}) {
      const double gram = gram_norm_sq({1.0, 1.0, 2.0 * sign}, {alpha, -alpha, 0.0}, {beta, -beta, 0.0});
      CHECK(std::abs(sleepy_cat_normalization(cm, st, alpha, beta, sign) - 1.0 / std::sqrt(gram)) < 1e-10);
      CHECK(std::abs(sleepy_cat_state(cm, st, alpha, beta, sign).norm() - 1.0) < 1e-14);
    }
  }
  CHECK_THROWS_AS(entangled_coherent_state(cm, st, 0.0, 0.0, -1), DegenerateOutcome);
}

TEST_CASE("entangled coherent and sleepy cat scenarios") {
  for (const char* name : {"entangled_coherent_minus", "entangled_coherent_plus", "sleepy_cat"}) {
    const ScenarioResult r = run_scenario(spec_for(name));
    CHECK(r.passed());
    for (const auto& o : r.outcomes) {
      CHECK(o.reference_fidelity >= 1.0 - 1e-10);
      CHECK(std::abs(o.record.probability - projector_probability(r.space, r.joint_state, o.record.outcome)) < 1e-10);
    }
  }
}

TEST_CASE("Bell-initialized protocol") {
  const ScenarioResult r = run_scenario(spec_for("bell_initialized"));
  CHECK(r.reference_fidelity >= 1.0 - 1e-8);
  REQUIRE(r.outcomes.size() == 4);
  const auto [alpha, beta] = two_ion_amplitudes(r.spec);
  const double s = std::norm(alpha) + std::norm(beta);
  for (const auto& o : r.outcomes) {
    const bool equal = o.record.outcome.up(0) == o.record.outcome.up(1);
    // (φ₁|α,β⟩ + φ₂|−α,−β⟩)/√2 projected on a computational state: ½·(|α,β⟩ ± |−α,−β⟩)/√2.
    const double expected = (1.0 + (equal ? 1.0 : -1.0) * std::exp(-2.0 * s)) / 4.0;
    CHECK(std::abs(o.record.probability - expected) < 1e-10);
    CHECK(o.reference_fidelity >= 1.0 - 1e-10);
  }
}

TEST_CASE("measurement errors") {
  const ScenarioResult r = run_scenario(spec_for("single_ion_cat"));
  CHECK_THROWS_AS(measure_internal(r.joint_state, r.space, Bitstring::parse("dd")), InvalidArgument);
  CHECK_THROWS_AS(measure_internal(StateVector::Ones(3), r.space, Bitstring::parse("d")), InvalidArgument);

  const JointSpace js(IonRegister(1), {FockSpace(4)});
  const StateVector down = tensor_product(basis_state(js.reg(), Bitstring::parse("d")), vacuum_state(js.modes()[0]));
  CHECK_THROWS_AS(measure_internal(down, js, Bitstring::parse("u")), DegenerateOutcome);
  CHECK(measure_internal(down, js, Bitstring::parse("d")).probability == 1.0);

  // τ = 0 leaves ↑ unpopulated: recorded as a diagnostic, not a failure.
  ScenarioSpec still = spec_for("even_odd_cat");
  still.params.tau = 0.0;
  const ScenarioResult idle = run_scenario(still);
  CHECK(idle.outcomes.size() == 1);
  CHECK(idle.diagnostics.size() == 1);
}

TEST_CASE("non-default initial states use the generic reference") {
  ScenarioSpec s = spec_for("sleepy_cat");
  s.initial_internal = "ud";
  const ScenarioResult r = run_scenario(s);
  CHECK(r.reference_fidelity >= 1.0 - 1e-8);
  CHECK_FALSE(reference_post_state(s, Bitstring::parse("dd")).has_value());
  CHECK(r.diagnostics.size() == 2);
}

TEST_CASE("insufficient cutoff is reported") {
  ScenarioSpec s = spec_for("single_ion_cat");
  s.params.cutoffs = {8};
  s.params.tau = 20.0;
  CHECK_THROWS_AS(run_scenario(s), TruncationError);
}
