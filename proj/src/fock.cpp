#include "vibronic/fock.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "vibronic/error.hpp"

namespace vibronic {

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) {
    throw InvalidArgument("Fock cutoff must be >= 1, got " +
                          std::to_string(cutoff));
  }
}

DenseOperator identity(Index dim) { return DenseOperator::Identity(dim, dim); }

DenseOperator annihilation_op(const FockSpace& space) {
  const Index d = space.dim();
  DenseOperator a = DenseOperator::Zero(d, d);
  for (Index n = 1; n < d; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

DenseOperator creation_op(const FockSpace& space) {
  return annihilation_op(space).adjoint();
}

DenseOperator number_op(const FockSpace& space) {
  const Index d = space.dim();
  DenseOperator n = DenseOperator::Zero(d, d);
  for (Index i = 0; i < d; ++i) n(i, i) = static_cast<double>(i);
  return n;
}

namespace {

void check_product_dim(Index lhs, Index rhs, Index max_dim) {
  if (lhs <= 0 || rhs <= 0) {
    throw InvalidArgument("tensor_product: empty operand");
  }
  if (lhs > max_dim / rhs) {
    throw InvalidArgument("tensor_product: joint dimension " +
                          std::to_string(lhs) + "x" + std::to_string(rhs) +
                          " exceeds the configured maximum " +
                          std::to_string(max_dim));
  }
}

double one_norm(const DenseOperator& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

DenseOperator tensor_product(const DenseOperator& a, const DenseOperator& b,
                             Index max_dim) {
  check_product_dim(a.rows(), b.rows(), max_dim);
  check_product_dim(a.cols(), b.cols(), max_dim);
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector tensor_product(const StateVector& u, const StateVector& v,
                           Index max_dim) {
  check_product_dim(u.size(), v.size(), max_dim);
  StateVector out(u.size() * v.size());
  for (Index i = 0; i < u.size(); ++i) {
    out.segment(i * v.size(), v.size()) = u(i) * v;
  }
  return out;
}

DenseOperator matrix_exponential(const DenseOperator& a, double tol) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("matrix_exponential: operator is not square");
  }
  if (!all_finite(a)) {
    throw NumericalError("matrix_exponential: non-finite entries");
  }
  if (!(tol >= kExpmAccuracyFloor)) {
    throw NumericalError("matrix_exponential: tolerance below double-precision reach");
  }
  const Index d = a.rows();
  const double norm = one_norm(a);
  const DenseOperator id = DenseOperator::Identity(d, d);
  if (norm == 0.0) return id;

  // Padé [m/m] degrees and the 1-norm bounds up to which each meets unit
  // roundoff (Higham 2005).
  static constexpr std::array<double, 4> kTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                                9.504178996162932e-1, 2.097847961257068e0};
  static constexpr std::array<std::array<double, 10>, 4> kLow{{
      {120.0, 60.0, 12.0, 1.0},
      {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0},
      {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0},
      {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0,
       110880.0, 3960.0, 90.0, 1.0},
  }};
  static constexpr double kTheta13 = 5.371920351148152;
  static constexpr std::array<double, 14> kB13{
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};

  DenseOperator u;
  DenseOperator v;
  int squarings = 0;
  const DenseOperator a2 = a * a;
  std::size_t low = 0;
  while (low < kTheta.size() && norm > kTheta[low]) ++low;
  if (low < kTheta.size()) {
    const auto& b = kLow[low];
    const int m = 3 + 2 * static_cast<int>(low);
    DenseOperator power = id;
    DenseOperator odd = b[1] * id;
    DenseOperator even = b[0] * id;
    for (int j = 2; j <= m; j += 2) {
      power = power * a2;
      odd += b[static_cast<std::size_t>(j + 1)] * power;
      even += b[static_cast<std::size_t>(j)] * power;
    }
    u = a * odd;
    v = std::move(even);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    const double scale = std::ldexp(1.0, -squarings);
    const DenseOperator s = a * scale;
    const DenseOperator s2 = a2 * (scale * scale);
    const DenseOperator s4 = s2 * s2;
    const DenseOperator s6 = s4 * s2;
    const auto& b = kB13;
    const DenseOperator inner_u = b[13] * s6 + b[11] * s4 + b[9] * s2;
    u = s * (s6 * inner_u + b[7] * s6 + b[5] * s4 + b[3] * s2 + b[1] * id);
    const DenseOperator inner_v = b[12] * s6 + b[10] * s4 + b[8] * s2;
    v = s6 * inner_v + b[6] * s6 + b[4] * s4 + b[2] * s2 + b[0] * id;
  }

  const Eigen::PartialPivLU<DenseOperator> lu(v - u);
  DenseOperator result = lu.solve(DenseOperator(v + u));
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  if (!all_finite(result)) {
    throw NumericalError("matrix_exponential: Pade evaluation produced non-finite entries");
  }
  return result;
}

DenseOperator ladder_generator(const FockSpace& space, int k, Complex chi) {
  if (k < 1) {
    throw InvalidArgument("sideband order k must be >= 1, got " +
                          std::to_string(k));
  }
  const DenseOperator a = annihilation_op(space);
  DenseOperator ak = DenseOperator::Identity(space.dim(), space.dim());
  for (int i = 0; i < k; ++i) ak = ak * a;
  return chi * ak.adjoint() - std::conj(chi) * ak;
}

DenseOperator displacement_op(const FockSpace& space, int k, Complex chi) {
  return matrix_exponential(ladder_generator(space, k, chi));
}

StateVector fock_state(const FockSpace& space, int n) {
  if (n < 0 || n >= space.cutoff()) {
    throw InvalidArgument("Fock level " + std::to_string(n) +
                          " outside the truncated space");
  }
  StateVector v = StateVector::Zero(space.dim());
  v(n) = 1.0;
  return v;
}

StateVector vacuum_state(const FockSpace& space) { return fock_state(space, 0); }

StateVector coherent_state(const FockSpace& space, Complex alpha) {
  StateVector v(space.dim());
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (Index n = 1; n < space.dim(); ++n) {
    v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  return normalized(v);
}

StateVector squeezed_vacuum_state(const FockSpace& space, Complex xi,
                                  double max_edge_population) {
  StateVector v = displacement_op(space, 2, xi).col(0);
  const Index top = std::min<Index>(2, space.dim());
  const double edge = v.tail(top).squaredNorm();
  if (edge > max_edge_population) {
    throw TruncationError("squeezed_vacuum_state: population " +
                          std::to_string(edge) +
                          " in the top Fock levels; increase the cutoff");
  }
  return normalized(v);
}

StateVector normalized(const StateVector& v) {
  const double n = v.norm();
  if (!(n > std::numeric_limits<double>::min()) || !std::isfinite(n)) {
    throw NumericalError("cannot normalize a zero or non-finite vector");
  }
  return v / n;
}

bool all_finite(const DenseOperator& m) { return m.allFinite(); }
bool all_finite(const StateVector& v) { return v.allFinite(); }

}  // namespace vibronic
