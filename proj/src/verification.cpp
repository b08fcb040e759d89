#include "vibronic/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vibronic/analysis.hpp"
#include "vibronic/scenarios.hpp"

namespace vibronic {

namespace {

// Joint column indices whose Fock indices are all ≤ max_level.
std::vector<Index> low_columns(const JointSpace& js, int max_level) {
  std::vector<Index> cols;
  const Index mdim = js.motional_dim();
  const Index d2 = js.n_modes() == 2 ? js.modes()[1].dim() : 1;
  for (Index b = 0; b < js.internal_dim(); ++b) {
    for (Index mot = 0; mot < mdim; ++mot) {
      const Index n1 = mot / d2;
      const Index n2 = mot % d2;
      if (n1 <= max_level && (js.n_modes() == 1 || n2 <= max_level)) {
        cols.push_back(b * mdim + mot);
      }
    }
  }
  return cols;
}

double wrap_to_half_pi(double diff) {
  // Distance of `diff` from π/2 modulo π.
  double d = std::fmod(std::abs(diff), std::numbers::pi);
  return std::abs(d - std::numbers::pi / 2);
}

}  // namespace

PropagatorComparison compare_propagators(const JointSpace& js,
                                         std::span<const DriveConfig> drives,
                                         double t, int max_level) {
  const ConditionalPropagator closed(js, drives, t);
  PropagatorComparison cmp;
  auto compare = [&cmp](const StateVector& c, const StateVector& n) {
    cmp.max_fidelity_deficit =
        std::max(cmp.max_fidelity_deficit, 1.0 - std::norm(c.dot(n)));
    cmp.max_entry_difference =
        std::max(cmp.max_entry_difference, (c - n).cwiseAbs().maxCoeff());
    ++cmp.columns;
  };
  const auto cols = low_columns(js, max_level);
  if (js.dim() <= kMaxOperatorDimension) {
    const DenseOperator u = propagator_numerical(effective_hamiltonian(js, drives), t);
    for (Index col : cols) compare(closed.column(col), u.col(col));
  } else {
    const SplitPropagator split(js, drives, t);
    for (Index col : cols) compare(closed.column(col), split.column(col));
  }
  return cmp;
}

double conditional_unitarity_defect(const ConditionalPropagator& u) {
  double worst = 0.0;
  const int n = u.space().reg().n_ions();
  for (int twice_m = -n; twice_m <= n; twice_m += 2) {
    for (int i = 0; i < u.space().n_modes(); ++i) {
      const DenseOperator& d = u.mode_operator(0.5 * twice_m, i);
      const Index half = d.rows() / 2 + 1;
      const DenseOperator block = (d.adjoint() * d).topLeftCorner(half, half);
      worst = std::max(worst, (block - identity(half)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

std::map<std::string, double> scenario_figures(int cutoff) {
  std::map<std::string, double> f;
  auto spec_for = [cutoff](const char* name) {
    ScenarioSpec s = default_spec(name);
    for (int& c : s.params.cutoffs) c = cutoff;
    return s;
  };

  const ScenarioResult cat = run_scenario(spec_for("single_ion_cat"));
  f["cat.fidelity"] = cat.reference_fidelity;

  const ScenarioResult eo = run_scenario(spec_for("even_odd_cat"));
  for (const auto& o : eo.outcomes) {
    const std::string key = "even_odd." + o.record.outcome.str();
    f[key + ".parity"] = parity_expectation(o.record.post_state);
    f[key + ".probability"] = o.record.probability;
    f[key + ".fidelity"] = o.reference_fidelity;
  }

  for (double rabi : {1.0, 10.0}) {
    ScenarioSpec s = spec_for("entangled_squeezed");
    s.params.rabi = rabi;
    const ScenarioResult r = run_scenario(s);
    const std::string tag = "squeezed.rabi" + std::to_string(static_cast<int>(rabi));
    f[tag + ".fidelity"] = r.reference_fidelity;
    const IonRegister& reg = r.space.reg();
    double angles[2];
    for (int b = 0; b < 2; ++b) {
      const char* sign = b == 0 ? "+" : "-";
      const StateVector branch = normalized(internal_branch(
          r.joint_state, r.space, jx_product_eigenstate(reg, {b == 0 ? 1 : -1}).first));
      const double theta = min_variance_angle(branch);
      angles[b] = theta;
      double odd = 0.0;
      for (Index n = 1; n < branch.size(); n += 2) odd += std::norm(branch(n));
      f[tag + ".branch" + sign + ".odd_population"] = odd;
      f[tag + ".branch" + sign + ".uncertainty_product"] =
          quadrature_variance(branch, theta) *
          quadrature_variance(branch, theta + std::numbers::pi / 2);
    }
    f[tag + ".angle_offset_from_half_pi"] = wrap_to_half_pi(angles[0] - angles[1]);
  }

  {
    ScenarioSpec s = spec_for("squeeze_only");
    const ScenarioResult r = squeeze_only(s);
    f["squeeze_only.internal_overlap"] = reduced_internal_overlap(
        r.space, r.joint_state, jx_product_eigenstate(r.space.reg(), {1}).first);
  }

  const ScenarioResult four = run_scenario(spec_for("two_ion_four_component"));
  f["four_component.fidelity"] = four.reference_fidelity;
  for (const auto& o : four.outcomes) {
    const std::string key = "four_component." + o.record.outcome.str();
    f[key + ".probability"] = o.record.probability;
    f[key + ".fidelity"] = o.reference_fidelity;
  }

  const ScenarioResult bell = run_scenario(spec_for("bell_initialized"));
  f["bell.fidelity"] = bell.reference_fidelity;
  for (const auto& o : bell.outcomes) {
    const std::string key = "bell." + o.record.outcome.str();
    f[key + ".probability"] = o.record.probability;
    f[key + ".fidelity"] = o.reference_fidelity;
  }

  const FockSpace space(cutoff);
  const std::pair<Complex, Complex> settings[] = {
      {{0.0, -0.4}, {0.0, -0.4}}, {{0.0, -0.4}, {0.0, -0.25}}, {{0.3, 0.1}, {-0.2, 0.35}}};
  int idx = 0;
  for (const auto& [a, b] : settings) {
    for (int sign : {1, -1}) {
      f["sleepy_cat.setting" + std::to_string(idx) + (sign > 0 ? ".plus" : ".minus") +
        ".normalization"] = sleepy_cat_normalization(space, space, a, b, sign);
    }
    ++idx;
  }
  return f;
}

std::vector<CheckResult> run_verification(bool deep) {
  std::vector<CheckResult> out;
  auto add = [&out](std::string suite, std::string name, double value,
                    double threshold, bool passed) {
    out.push_back({std::move(suite), std::move(name), value, threshold, passed});
  };

  // Closed form against e^{−iHt}, criterion-style sweep.
  const double eta = 0.1;
  for (int n_ions = 1; n_ions <= 3; ++n_ions) {
    for (int n_modes = 1; n_modes <= 2; ++n_modes) {
      double deficit = 0.0;
      double unitarity = 0.0;
      for (int k = 1; k <= 2; ++k) {
        std::vector<FockSpace> modes(static_cast<std::size_t>(n_modes), FockSpace(kDefaultCutoff));
        const JointSpace js(IonRegister{n_ions}, modes);
        std::vector<DriveConfig> drives{{k, eta, 1.0, Mode::cm}};
        if (n_modes == 2) drives.push_back({k, stretch_lamb_dicke(eta), 1.0, Mode::stretch});
        for (double tau : {0.5, 2.0, 5.0}) {
          deficit = std::max(deficit,
                             compare_propagators(js, drives, tau, 16).max_fidelity_deficit);
          unitarity = std::max(unitarity, conditional_unitarity_defect(
                                              ConditionalPropagator(js, drives, tau)));
        }
      }
      const std::string label = "N=" + std::to_string(n_ions) +
                                (n_modes == 1 ? " cm" : " cm+stretch");
      add("propagator", label + " column fidelity deficit", deficit, 1e-8, deficit < 1e-8);
      add("unitarity", label + " |D^+D - I| (n <= cutoff/2)", unitarity, 1e-9,
          unitarity < 1e-9);
    }
  }

  for (const auto& def : scenario_catalog()) {
    const ScenarioResult r = run_scenario(default_spec(def.name));
    double worst = 1.0 - r.reference_fidelity;
    for (const auto& o : r.outcomes) worst = std::max(worst, 1.0 - o.reference_fidelity);
    add("scenarios", def.name + " fidelity deficit", worst, 1e-8, r.passed());
  }

  const auto fig = scenario_figures(kDefaultCutoff);
  {
    const double even = fig.at("even_odd.d.parity");
    const double odd = fig.at("even_odd.u.parity");
    const double err = std::max(std::abs(even - 1.0), std::abs(odd + 1.0));
    add("oracles", "even/odd cat parity = +1/-1", err, 1e-10, err < 1e-10);
  }
  for (const char* tag : {"squeezed.rabi1", "squeezed.rabi10"}) {
    double product_err = 0.0;
    double odd = 0.0;
    for (const char* b : {".branch+", ".branch-"}) {
      product_err = std::max(product_err,
          std::abs(fig.at(std::string(tag) + b + ".uncertainty_product") - 1.0 / 16));
      odd = std::max(odd, fig.at(std::string(tag) + b + ".odd_population"));
    }
    add("oracles", std::string(tag) + " min*max variance = 1/16", product_err, 1e-8,
        product_err < 1e-8);
    add("oracles", std::string(tag) + " odd Fock population", odd, 1e-12, odd < 1e-12);
    const double angle = fig.at(std::string(tag) + ".angle_offset_from_half_pi");
    add("oracles", std::string(tag) + " squeezing axes orthogonal", angle, 1e-6, angle < 1e-6);
  }
  {
    const double dev = std::abs(fig.at("squeeze_only.internal_overlap") - 1.0);
    add("oracles", "squeeze_only internal overlap = 1", dev, 1e-10, dev < 1e-10);
  }
  {
    // Entangled coherent norms against 2(1 ∓ e^{−2|α|²−2|β|²}).
    ScenarioSpec s = default_spec("two_ion_four_component");
    const auto [a, b] = two_ion_amplitudes(s);
    const FockSpace space(kDefaultCutoff);
    const double overlap = std::exp(-2 * std::norm(a) - 2 * std::norm(b));
    const double err = std::max(
        std::abs(entangled_coherent_norm_sq(space, space, a, b, -1) - 2 * (1 - overlap)),
        std::abs(entangled_coherent_norm_sq(space, space, a, b, +1) - 2 * (1 + overlap)));
    add("oracles", "entangled coherent norms 2(1 -/+ e^{-2|a|^2-2|b|^2})", err, 1e-10,
        err < 1e-10);

    // Bell input: unequal spins are found with probability (1 − overlap)/4 each.
    const double p_expected = (1 - overlap) / 4;
    const double perr = std::max(std::abs(fig.at("bell.du.probability") - p_expected),
                                 std::abs(fig.at("bell.ud.probability") - p_expected));
    add("oracles", "Bell input: P(du) = P(ud) = (1 - e^{-2|a|^2-2|b|^2})/4", perr, 1e-10,
        perr < 1e-10);
  }
  {
    // 𝒩 from the 3×3 Gram matrix of {|α,β⟩, |−α,−β⟩, |00⟩}.
    const FockSpace space(kDefaultCutoff);
    const Complex a(0.3, 0.1);
    const Complex b(-0.2, 0.35);
    const double s = std::norm(a) + std::norm(b);
    double err = 0.0;
    for (int sign : {1, -1}) {
      const double norm_sq = 6 + 2 * std::exp(-2 * s) + 8 * sign * std::exp(-s / 2);
      err = std::max(err, std::abs(sleepy_cat_normalization(space, space, a, b, sign) -
                                   1 / std::sqrt(norm_sq)));
    }
    add("oracles", "sleepy cat normalization vs Gram matrix", err, 1e-10, err < 1e-10);
  }

  if (deep) {
    const auto fine = scenario_figures(2 * kDefaultCutoff);
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [name, value] : fig) {
      const double d = std::abs(fine.at(name) - value);
      if (d >= worst) {
        worst = d;
        worst_name = name;
      }
    }
    add("convergence", "cutoff 64 -> 128, largest change (" + worst_name + ")", worst, 1e-9,
        worst < 1e-9);
  }
  return out;
}

}  // namespace vibronic
