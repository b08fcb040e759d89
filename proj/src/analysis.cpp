#include "vibronic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vibronic/error.hpp"

namespace vibronic {

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.size() != phi.size()) {
    throw InvalidArgument("fidelity: dimension mismatch (" +
                          std::to_string(psi.size()) + " vs " +
                          std::to_string(phi.size()) + ")");
  }
  return std::clamp(std::norm(psi.dot(phi)), 0.0, 1.0);
}

double parity_expectation(const StateVector& psi) {
  double p = 0.0;
  for (Index n = 0; n < psi.size(); ++n) {
    p += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(psi(n));
  }
  return p;
}

namespace {

// a·ψ and a†·ψ on the truncated space.
StateVector lower(const StateVector& psi) {
  StateVector out = StateVector::Zero(psi.size());
  for (Index n = 1; n < psi.size(); ++n) {
    out(n - 1) = std::sqrt(static_cast<double>(n)) * psi(n);
  }
  return out;
}

StateVector raise(const StateVector& psi) {
  StateVector out = StateVector::Zero(psi.size());
  for (Index n = 0; n + 1 < psi.size(); ++n) {
    out(n + 1) = std::sqrt(static_cast<double>(n + 1)) * psi(n);
  }
  return out;
}

}  // namespace

double quadrature_variance(const StateVector& psi, double theta) {
  const Complex phase = std::polar(1.0, theta);
  const StateVector x = 0.5 * (std::conj(phase) * lower(psi) + phase * raise(psi));
  const double mean = psi.dot(x).real();
  return std::max(0.0, x.squaredNorm() - mean * mean);
}

double min_variance_angle(const StateVector& psi) {
  const StateVector a_psi = lower(psi);
  const Complex mean_a = psi.dot(a_psi);
  const Complex mean_a2 = psi.dot(lower(a_psi));
  const Complex b = mean_a2 - mean_a * mean_a;
  double theta = 0.5 * (std::arg(b) + std::numbers::pi);
  theta = std::fmod(theta, std::numbers::pi);
  if (theta < 0) theta += std::numbers::pi;
  return theta;
}

double compression_exponent(const StateVector& squeezed, double r) {
  if (!(r > 0.0)) throw InvalidArgument("compression_exponent: r must be > 0");
  const double v_min = quadrature_variance(squeezed, min_variance_angle(squeezed));
  return -std::log(std::sqrt(v_min / 0.25)) / r;
}

std::vector<double> number_distribution(const StateVector& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  for (Index n = 0; n < psi.size(); ++n) p[static_cast<std::size_t>(n)] = std::norm(psi(n));
  return p;
}

namespace {

Index tail_levels(Index d, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("truncation_tail: fraction must lie in (0, 1]");
  }
  return std::clamp<Index>(static_cast<Index>(std::ceil(fraction * d)), 1, d);
}

}  // namespace

double truncation_tail(const StateVector& psi, double fraction) {
  const Index count = tail_levels(psi.size(), fraction);
  return psi.tail(count).squaredNorm();
}

std::vector<double> mode_truncation_tails(const JointSpace& js,
                                          const StateVector& joint,
                                          double fraction) {
  if (joint.size() != js.dim()) {
    throw InvalidArgument("mode_truncation_tails: dimension mismatch");
  }
  std::vector<double> tails;
  const Index idim = js.internal_dim();
  if (js.n_modes() == 1) {
    const Index d = js.modes()[0].dim();
    const Index count = tail_levels(d, fraction);
    double t = 0.0;
    for (Index b = 0; b < idim; ++b) t += joint.segment(b * d + d - count, count).squaredNorm();
    tails.push_back(t);
    return tails;
  }
  const Index d1 = js.modes()[0].dim();
  const Index d2 = js.modes()[1].dim();
  const Index c1 = tail_levels(d1, fraction);
  const Index c2 = tail_levels(d2, fraction);
  double t1 = 0.0;
  double t2 = 0.0;
  for (Index b = 0; b < idim; ++b) {
    for (Index n1 = 0; n1 < d1; ++n1) {
      const auto row = joint.segment((b * d1 + n1) * d2, d2);
      if (n1 >= d1 - c1) t1 += row.squaredNorm();
      t2 += row.tail(c2).squaredNorm();
    }
  }
  tails.push_back(t1);
  tails.push_back(t2);
  return tails;
}

StateVector displace(const StateVector& psi, Complex alpha) {
  // Taylor action of G = α a† − α* a, split into steps with ‖G/steps‖ ≤ 1.
  const Index d = psi.size();
  const double bound = 2.0 * std::abs(alpha) * std::sqrt(static_cast<double>(d));
  const int steps = std::max(1, static_cast<int>(std::ceil(bound)));
  const Complex a_step = alpha / static_cast<double>(steps);
  StateVector v = psi;
  for (int s = 0; s < steps; ++s) {
    StateVector term = v;
    StateVector sum = v;
    for (int k = 1; k < 60; ++k) {
      term = (a_step * raise(term) - std::conj(a_step) * lower(term)) /
             static_cast<double>(k);
      sum += term;
      if (term.norm() <= 1e-18 * sum.norm()) break;
    }
    v = std::move(sum);
  }
  return v;
}

double wigner_value(const StateVector& psi, Complex alpha) {
  return 2.0 / std::numbers::pi * parity_expectation(displace(psi, -alpha));
}

WignerGrid wigner_grid(const StateVector& psi, const WignerGridSpec& spec) {
  if (spec.resolution < 1) {
    throw InvalidArgument("wigner_grid: resolution must be >= 1");
  }
  if (!(spec.x_max >= spec.x_min) || !(spec.p_max >= spec.p_min)) {
    throw InvalidArgument("wigner_grid: empty range");
  }
  const int res = spec.resolution;
  auto axis = [res](double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(res));
    for (int i = 0; i < res; ++i) {
      v[static_cast<std::size_t>(i)] =
          res == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(res - 1);
    }
    return v;
  };
  WignerGrid grid;
  grid.xs = axis(spec.x_min, spec.x_max);
  grid.ps = axis(spec.p_min, spec.p_max);
  grid.values.resize(res, res);
  const double bound = 2.0 / std::numbers::pi;
  for (int ip = 0; ip < res; ++ip) {
    for (int ix = 0; ix < res; ++ix) {
      const Complex alpha(grid.xs[static_cast<std::size_t>(ix)],
                          grid.ps[static_cast<std::size_t>(ip)]);
      const StateVector shifted = displace(psi, -alpha);
      double w = bound * parity_expectation(shifted);
      if (truncation_tail(shifted, 0.25) > spec.max_tail) {
        ++grid.flagged;
        w = std::clamp(w, -bound, bound);
      }
      grid.values(ip, ix) = w;
    }
  }
  return grid;
}

DenseOperator reduced_internal_state(const JointSpace& js,
                                     const StateVector& joint) {
  if (joint.size() != js.dim()) {
    throw InvalidArgument("reduced_internal_state: dimension mismatch");
  }
  Eigen::Map<const DenseOperator> psi(joint.data(), js.motional_dim(),
                                      js.internal_dim());
  return psi.transpose() * psi.conjugate();
}

double reduced_internal_overlap(const JointSpace& js, const StateVector& joint,
                                const StateVector& target_internal) {
  if (target_internal.size() != js.internal_dim()) {
    throw InvalidArgument("reduced_internal_overlap: target has dimension " +
                          std::to_string(target_internal.size()) +
                          ", internal space has " +
                          std::to_string(js.internal_dim()));
  }
  const DenseOperator rho = reduced_internal_state(js, joint);
  return target_internal.dot(rho * target_internal).real();
}

}  // namespace vibronic
