#pragma once

// Self-check suites behind `vibronic verify`.

#include <map>
#include <string>
#include <vector>

#include "vibronic/dynamics.hpp"

namespace vibronic {

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct PropagatorComparison {
  double max_fidelity_deficit = 0.0;  // over the compared columns
  double max_entry_difference = 0.0;
  Index columns = 0;
};

/// Compares the closed-form propagator with the numerical one on every
/// column whose Fock indices are all ≤ max_level. Dense e^{−iHt} is used
/// when the joint space fits kMaxOperatorDimension, the per-drive split
/// exponential otherwise.
PropagatorComparison compare_propagators(const JointSpace& js,
                                         std::span<const DriveConfig> drives,
                                         double t, int max_level);

/// ‖D†D − I‖_max over the n ≤ cutoff/2 block of every conditional factor.
double conditional_unitarity_defect(const ConditionalPropagator& u);

/// Named scalar figures of the scenario suite evaluated with every mode
/// truncated at `cutoff`. Used for truncation-convergence checks.
std::map<std::string, double> scenario_figures(int cutoff);

std::vector<CheckResult> run_verification(bool deep);

}  // namespace vibronic
