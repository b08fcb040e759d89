#include "vibronic/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "vibronic/error.hpp"

namespace vibronic {

std::string_view to_string(Mode mode) {
  return mode == Mode::cm ? "cm" : "stretch";
}

Mode parse_mode(std::string_view text) {
  if (text == "cm") return Mode::cm;
  if (text == "stretch") return Mode::stretch;
  throw InvalidArgument("unknown mode '" + std::string(text) +
                        "' (expected cm or stretch)");
}

double TrapConfig::stretch_frequency() const { return std::sqrt(3.0) * nu; }

void TrapConfig::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("trap frequency must be positive");
  }
  IonRegister{n_ions};
}

double lamb_dicke_cm(double q, double m_ion, double nu, int n_ions,
                     double hbar) {
  if (!(q > 0 && m_ion > 0 && nu > 0 && n_ions > 0 && hbar > 0)) {
    throw InvalidArgument("lamb_dicke_cm: all inputs must be positive");
  }
  return q * std::sqrt(hbar / (2.0 * n_ions * m_ion * nu));
}

double stretch_lamb_dicke(double eta_cm) {
  return eta_cm * std::pow(3.0, -0.25);
}

double DriveConfig::coupling() const {
  return 2.0 * std::pow(eta, k) * rabi / std::tgamma(k + 1.0);
}

void DriveConfig::validate() const {
  if (k < 1) {
    throw InvalidArgument("sideband order k must be >= 1, got " +
                          std::to_string(k));
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("Lamb-Dicke parameter must be positive");
  }
  if (!std::isfinite(rabi)) throw InvalidArgument("Rabi frequency not finite");
}

Complex conditional_amplitude(const DriveConfig& drive, double m, double t) {
  return {0.0, -drive.coupling() * m * t};
}

JointSpace::JointSpace(IonRegister reg, std::vector<FockSpace> modes)
    : reg_(reg), modes_(std::move(modes)) {
  if (modes_.empty() || modes_.size() > 2) {
    throw InvalidArgument("joint space needs one (CM) or two (CM, stretch) "
                          "modes");
  }
}

int JointSpace::mode_index(Mode mode) const {
  const int idx = mode == Mode::cm ? 0 : 1;
  if (idx >= n_modes()) {
    throw InvalidArgument("mode '" + std::string(to_string(mode)) +
                          "' is not part of the joint space");
  }
  return idx;
}

Index JointSpace::motional_dim() const noexcept {
  Index d = 1;
  for (const auto& m : modes_) d *= m.dim();
  return d;
}

std::vector<int> JointSpace::cutoffs() const {
  std::vector<int> out;
  for (const auto& m : modes_) out.push_back(m.cutoff());
  return out;
}

void validate_drives(const JointSpace& js,
                     std::span<const DriveConfig> drives) {
  std::vector<bool> seen(static_cast<std::size_t>(js.n_modes()), false);
  for (const auto& d : drives) {
    d.validate();
    const auto idx = static_cast<std::size_t>(js.mode_index(d.mode));
    if (seen[idx]) {
      throw InvalidArgument("mode '" + std::string(to_string(d.mode)) +
                            "' is driven twice");
    }
    seen[idx] = true;
  }
}

namespace {

DenseOperator quadrature_power_sum(const FockSpace& mode, int k) {
  const DenseOperator a = annihilation_op(mode);
  DenseOperator ak = identity(mode.dim());
  for (int i = 0; i < k; ++i) ak = ak * a;
  return ak + ak.adjoint();
}

// Applies one operator per mode to a motional vector (CM index slowest).
StateVector apply_mode_ops(const JointSpace& js,
                           const std::vector<DenseOperator>& ops,
                           const StateVector& motional) {
  if (js.n_modes() == 1) return ops[0] * motional;
  const Index d1 = js.modes()[0].dim();
  const Index d2 = js.modes()[1].dim();
  // Column-major d2 × d1 view of the row-major (n1, n2) amplitude table.
  Eigen::Map<const DenseOperator> x(motional.data(), d2, d1);
  DenseOperator r = ops[1] * x * ops[0].transpose();
  return Eigen::Map<const StateVector>(r.data(), r.size());
}

}  // namespace

DenseOperator drive_term(const IonRegister& reg, const FockSpace& mode,
                         const DriveConfig& drive) {
  drive.validate();
  const CollectiveSpin spin = collective_spin_ops(reg);
  return drive.coupling() *
         tensor_product(spin.jx, quadrature_power_sum(mode, drive.k));
}

DenseOperator effective_hamiltonian(const JointSpace& js,
                                    std::span<const DriveConfig> drives) {
  validate_drives(js, drives);
  if (js.dim() > kMaxOperatorDimension) {
    throw InvalidArgument("effective_hamiltonian: joint dimension " +
                          std::to_string(js.dim()) +
                          " too large for a dense operator");
  }
  const CollectiveSpin spin = collective_spin_ops(js.reg());
  DenseOperator h = DenseOperator::Zero(js.dim(), js.dim());
  for (const auto& d : drives) {
    const int idx = js.mode_index(d.mode);
    DenseOperator motional = identity(1);
    for (int i = 0; i < js.n_modes(); ++i) {
      const FockSpace& mode = js.modes()[static_cast<std::size_t>(i)];
      motional = tensor_product(
          motional, i == idx ? quadrature_power_sum(mode, d.k)
                             : identity(mode.dim()));
    }
    h += d.coupling() * tensor_product(spin.jx, motional);
  }
  return h;
}

DenseOperator propagator_numerical(const DenseOperator& h, double t) {
  if (h.rows() != h.cols()) {
    throw InvalidArgument("propagator_numerical: Hamiltonian is not square");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("propagator_numerical: Hamiltonian is not Hermitian");
  }
  return matrix_exponential(Complex(0.0, -t) * h);
}

DenseOperator propagator_closed_form(const JointSpace& js,
                                     std::span<const DriveConfig> drives,
                                     double t) {
  if (js.dim() > kMaxOperatorDimension) {
    throw InvalidArgument("propagator_closed_form: joint dimension " +
                          std::to_string(js.dim()) +
                          " too large for a dense operator");
  }
  return ConditionalPropagator(js, drives, t).dense();
}

StateVector evolve(const StateVector& state, const DenseOperator& u,
                   double norm_tol) {
  if (u.cols() != state.size() || u.rows() != u.cols()) {
    throw InvalidArgument("evolve: operator is " + std::to_string(u.rows()) +
                          "x" + std::to_string(u.cols()) +
                          " but the state has dimension " +
                          std::to_string(state.size()));
  }
  StateVector out = u * state;
  if (std::abs(out.norm() - state.norm()) > norm_tol) {
    throw TruncationError("evolve: norm changed by " +
                          std::to_string(std::abs(out.norm() - state.norm())));
  }
  return out;
}

// ---------------------------------------------------------------------------

ConditionalPropagator::ConditionalPropagator(const JointSpace& js,
                                             std::span<const DriveConfig> drives,
                                             double t)
    : js_(js), t_(t), patterns_(all_sign_patterns(js.reg())) {
  validate_drives(js, drives);
  for (const auto& p : patterns_) {
    eigenstates_.push_back(jx_product_eigenstate(js.reg(), p.signs).first);
  }
  // One conditional displacement per distinct Jx eigenvalue m = −N/2 … N/2.
  const int n = js.reg().n_ions();
  for (int twice_m = -n; twice_m <= n; twice_m += 2) {
    Sector sector{0.5 * twice_m, {}};
    for (int i = 0; i < js.n_modes(); ++i) {
      const FockSpace& mode = js.modes()[static_cast<std::size_t>(i)];
      const DriveConfig* drive = nullptr;
      for (const auto& d : drives) {
        if (js.mode_index(d.mode) == i) drive = &d;
      }
      sector.ops.push_back(
          drive ? displacement_op(mode, drive->k,
                                  conditional_amplitude(*drive, sector.m, t))
                : identity(mode.dim()));
    }
    sectors_.push_back(std::move(sector));
  }
}

const ConditionalPropagator::Sector& ConditionalPropagator::sector(
    double m) const {
  for (const auto& s : sectors_) {
    if (s.m == m) return s;
  }
  throw InvalidArgument("no Jx sector with m = " + std::to_string(m));
}

const DenseOperator& ConditionalPropagator::mode_operator(double m,
                                                          int mode_index) const {
  const Sector& s = sector(m);
  if (mode_index < 0 || mode_index >= js_.n_modes()) {
    throw InvalidArgument("mode index out of range");
  }
  return s.ops[static_cast<std::size_t>(mode_index)];
}

StateVector ConditionalPropagator::apply(const StateVector& state) const {
  if (state.size() != js_.dim()) {
    throw InvalidArgument("ConditionalPropagator::apply: dimension mismatch");
  }
  const Index mdim = js_.motional_dim();
  // Column b of `psi` is the motional amplitude attached to internal |b⟩.
  Eigen::Map<const DenseOperator> psi(state.data(), mdim, js_.internal_dim());
  DenseOperator out = DenseOperator::Zero(mdim, js_.internal_dim());
  for (std::size_t p = 0; p < patterns_.size(); ++p) {
    const StateVector& e = eigenstates_[p];
    const StateVector branch = psi * e.conjugate();
    if (branch.squaredNorm() == 0.0) continue;
    const StateVector moved =
        apply_mode_ops(js_, sector(patterns_[p].m).ops, branch);
    out += moved * e.transpose();
  }
  return Eigen::Map<const StateVector>(out.data(), out.size());
}

StateVector ConditionalPropagator::column(Index col) const {
  if (col < 0 || col >= js_.dim()) {
    throw InvalidArgument("ConditionalPropagator::column: index out of range");
  }
  const Index mdim = js_.motional_dim();
  const Index b = col / mdim;
  const Index mot = col % mdim;
  DenseOperator out = DenseOperator::Zero(mdim, js_.internal_dim());
  for (const auto& sec : sectors_) {
    // Σ over the sector's eigenstates of ⟨e|b⟩·e.
    StateVector weights = StateVector::Zero(js_.internal_dim());
    for (std::size_t p = 0; p < patterns_.size(); ++p) {
      if (patterns_[p].m == sec.m) weights += std::conj(eigenstates_[p](b)) * eigenstates_[p];
    }
    if (weights.isZero(0.0)) continue;
    StateVector moved;
    if (js_.n_modes() == 1) {
      moved = sec.ops[0].col(mot);
    } else {
      const Index d2 = js_.modes()[1].dim();
      moved = tensor_product(StateVector(sec.ops[0].col(mot / d2)),
                             StateVector(sec.ops[1].col(mot % d2)));
    }
    out.noalias() += moved * weights.transpose();
  }
  return Eigen::Map<const StateVector>(out.data(), out.size());
}

DenseOperator ConditionalPropagator::dense() const {
  DenseOperator u = DenseOperator::Zero(js_.dim(), js_.dim());
  for (std::size_t p = 0; p < patterns_.size(); ++p) {
    const StateVector& e = eigenstates_[p];
    const auto& ops = sector(patterns_[p].m).ops;
    DenseOperator motional = ops[0];
    if (js_.n_modes() == 2) motional = tensor_product(ops[0], ops[1]);
    u += tensor_product(DenseOperator(e * e.adjoint()), motional);
  }
  return u;
}

double ConditionalPropagator::leakage(int max_level) const {
  double worst = 0.0;
  for (const auto& s : sectors_) {
    for (std::size_t i = 0; i < s.ops.size(); ++i) {
      const Index d = s.ops[i].rows();
      const Index top = d - d / 4;
      const Index cols = std::min<Index>(max_level + 1, d);
      for (Index c = 0; c < cols; ++c) {
        worst = std::max(worst, s.ops[i].col(c).tail(d - top).squaredNorm());
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

StateVector apply_internal_mode_operator(const JointSpace& js, int mode_index,
                                         const DenseOperator& op,
                                         const StateVector& state) {
  const Index idim = js.internal_dim();
  const Index dm = js.modes().at(static_cast<std::size_t>(mode_index)).dim();
  if (op.rows() != idim * dm || op.cols() != idim * dm ||
      state.size() != js.dim()) {
    throw InvalidArgument("apply_internal_mode_operator: dimension mismatch");
  }
  if (js.n_modes() == 1) return op * state;

  const Index d1 = js.modes()[0].dim();
  const Index d2 = js.modes()[1].dim();
  if (mode_index == 0) {
    // (b, n1) is the slow composite index, n2 the fast one.
    Eigen::Map<const DenseOperator> x(state.data(), d2, idim * d1);
    DenseOperator r = x * op.transpose();
    return Eigen::Map<const StateVector>(r.data(), r.size());
  }
  StateVector out = StateVector::Zero(state.size());
  StateVector slice(idim * d2);
  for (Index n1 = 0; n1 < d1; ++n1) {
    bool any = false;
    for (Index b = 0; b < idim; ++b) {
      slice.segment(b * d2, d2) = state.segment((b * d1 + n1) * d2, d2);
      any = any || !slice.segment(b * d2, d2).isZero(0.0);
    }
    if (!any) continue;
    const StateVector r = op * slice;
    for (Index b = 0; b < idim; ++b) {
      out.segment((b * d1 + n1) * d2, d2) = r.segment(b * d2, d2);
    }
  }
  return out;
}

SplitPropagator::SplitPropagator(const JointSpace& js,
                                 std::span<const DriveConfig> drives, double t)
    : js_(js) {
  validate_drives(js, drives);
  for (const auto& d : drives) {
    const int idx = js.mode_index(d.mode);
    mode_indices_.push_back(idx);
    factors_.push_back(propagator_numerical(
        drive_term(js.reg(), js.modes()[static_cast<std::size_t>(idx)], d), t));
  }
}

StateVector SplitPropagator::apply(const StateVector& state) const {
  if (state.size() != js_.dim()) {
    throw InvalidArgument("SplitPropagator::apply: dimension mismatch");
  }
  StateVector out = state;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    out = apply_internal_mode_operator(js_, mode_indices_[i], factors_[i], out);
  }
  return out;
}

StateVector SplitPropagator::column(Index col) const {
  if (col < 0 || col >= js_.dim()) {
    throw InvalidArgument("SplitPropagator::column: index out of range");
  }
  if (js_.n_modes() == 1 || factors_.size() < 2) {
    StateVector e = StateVector::Zero(js_.dim());
    e(col) = 1.0;
    return apply(e);
  }
  // Two commuting factors F₁ (internal ⊗ CM) and F₂ (internal ⊗ stretch):
  // ⟨b'', n1', n2'| F₁F₂ |b, n1, n2⟩ = Σ_b' F₁[(b'',n1'),(b',n1)] F₂[(b',n2'),(b,n2)].
  const Index idim = js_.internal_dim();
  const Index d1 = js_.modes()[0].dim();
  const Index d2 = js_.modes()[1].dim();
  const DenseOperator& f1 = factors_[mode_indices_[0] == 0 ? 0 : 1];
  const DenseOperator& f2 = factors_[mode_indices_[0] == 0 ? 1 : 0];
  const Index b = col / (d1 * d2);
  const Index n1 = (col / d2) % d1;
  const Index n2 = col % d2;
  StateVector out = StateVector::Zero(js_.dim());
  for (Index bp = 0; bp < idim; ++bp) {
    const StateVector right = f2.col(b * d2 + n2).segment(bp * d2, d2);
    if (right.isZero(0.0)) continue;
    out += tensor_product(StateVector(f1.col(bp * d1 + n1)), right);
  }
  return out;
}

double energy_expectation(const JointSpace& js,
                          std::span<const DriveConfig> drives,
                          const StateVector& state) {
  validate_drives(js, drives);
  Complex e = 0.0;
  for (const auto& d : drives) {
    const int idx = js.mode_index(d.mode);
    const DenseOperator term =
        drive_term(js.reg(), js.modes()[static_cast<std::size_t>(idx)], d);
    e += state.dot(apply_internal_mode_operator(js, idx, term, state));
  }
  return e.real();
}

}  // namespace vibronic
