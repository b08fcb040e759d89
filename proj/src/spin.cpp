#include "vibronic/spin.hpp"

#include <cmath>

#include "vibronic/error.hpp"

namespace vibronic {

IonRegister::IonRegister(int n_ions) : n_ions_(n_ions) {
  if (n_ions < 1 || n_ions > kMaxIons) {
    throw InvalidArgument("ion count must be in [1, " +
                          std::to_string(kMaxIons) + "], got " +
                          std::to_string(n_ions));
  }
}

Bitstring Bitstring::parse(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty bitstring");
  std::vector<bool> ups;
  ups.reserve(text.size());
  for (char c : text) {
    if (c == 'd') {
      ups.push_back(false);
    } else if (c == 'u') {
      ups.push_back(true);
    } else {
      throw InvalidArgument("malformed bitstring '" + std::string(text) +
                            "': expected only 'd' and 'u'");
    }
  }
  return Bitstring(std::move(ups));
}

Index Bitstring::index() const noexcept {
  Index idx = 0;
  for (bool u : ups_) idx = (idx << 1) | (u ? 1 : 0);
  return idx;
}

std::string Bitstring::str() const {
  std::string s;
  for (bool u : ups_) s.push_back(u ? 'u' : 'd');
  return s;
}

std::vector<Bitstring> all_outcomes(const IonRegister& reg) {
  std::vector<Bitstring> out;
  const int n = reg.n_ions();
  for (Index idx = 0; idx < reg.dim(); ++idx) {
    std::vector<bool> ups(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) ups[static_cast<std::size_t>(j)] = (idx >> (n - 1 - j)) & 1;
    out.emplace_back(std::move(ups));
  }
  return out;
}

namespace {

void check_size(const IonRegister& reg, int size, const char* what) {
  if (size != reg.n_ions()) {
    throw InvalidArgument(std::string(what) + " has length " +
                          std::to_string(size) + " but the register has " +
                          std::to_string(reg.n_ions()) + " ions");
  }
}

}  // namespace

StateVector basis_state(const IonRegister& reg, const Bitstring& bits) {
  check_size(reg, bits.size(), "bitstring");
  StateVector v = StateVector::Zero(reg.dim());
  v(bits.index()) = 1.0;
  return v;
}

std::pair<DenseOperator, DenseOperator> flip_ops(const IonRegister& reg,
                                                 int ion) {
  if (ion < 1 || ion > reg.n_ions()) {
    throw InvalidArgument("ion index " + std::to_string(ion) +
                          " out of range [1, " + std::to_string(reg.n_ions()) +
                          "]");
  }
  const Index bit = Index{1} << (reg.n_ions() - ion);
  DenseOperator up = DenseOperator::Zero(reg.dim(), reg.dim());
  for (Index col = 0; col < reg.dim(); ++col) {
    if ((col & bit) == 0) up(col | bit, col) = 1.0;
  }
  DenseOperator down = up.adjoint();
  return {std::move(up), std::move(down)};
}

CollectiveSpin collective_spin_ops(const IonRegister& reg) {
  const Index d = reg.dim();
  CollectiveSpin s{DenseOperator::Zero(d, d), DenseOperator::Zero(d, d),
                   DenseOperator::Zero(d, d)};
  const Complex two_i(0.0, 2.0);
  for (int j = 1; j <= reg.n_ions(); ++j) {
    auto [up, down] = flip_ops(reg, j);
    s.jx += (up + down) / 2.0;
    s.jy += (up - down) / two_i;
    s.jz += (up * down - down * up) / 2.0;
  }
  return s;
}

JxEigenlabel JxEigenlabel::from_signs(std::vector<int> signs) {
  int sum = 0;
  for (int s : signs) {
    if (s != 1 && s != -1) {
      throw InvalidArgument("Jx eigenlabel signs must be +1 or -1");
    }
    sum += s;
  }
  return JxEigenlabel{std::move(signs), 0.5 * sum};
}

JxEigenlabel JxEigenlabel::parse(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty sign pattern");
  std::vector<int> signs;
  for (char c : text) {
    if (c == '+') {
      signs.push_back(1);
    } else if (c == '-') {
      signs.push_back(-1);
    } else {
      throw InvalidArgument("malformed sign pattern '" + std::string(text) +
                            "': expected only '+' and '-'");
    }
  }
  return from_signs(std::move(signs));
}

std::string JxEigenlabel::str() const {
  std::string s;
  for (int v : signs) s.push_back(v > 0 ? '+' : '-');
  return s;
}

std::vector<JxEigenlabel> all_sign_patterns(const IonRegister& reg) {
  std::vector<JxEigenlabel> out;
  const int n = reg.n_ions();
  out.reserve(static_cast<std::size_t>(reg.dim()));
  for (Index p = 0; p < reg.dim(); ++p) {
    std::vector<int> signs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      signs[static_cast<std::size_t>(j)] = ((p >> (n - 1 - j)) & 1) ? -1 : 1;
    }
    out.push_back(JxEigenlabel::from_signs(std::move(signs)));
  }
  return out;
}

std::pair<StateVector, double> jx_product_eigenstate(
    const IonRegister& reg, const std::vector<int>& signs) {
  check_size(reg, static_cast<int>(signs.size()), "sign pattern");
  const JxEigenlabel label = JxEigenlabel::from_signs(signs);
  const double amp = std::pow(0.5, 0.5 * reg.n_ions());
  const int n = reg.n_ions();
  StateVector v(reg.dim());
  for (Index idx = 0; idx < reg.dim(); ++idx) {
    int sign = 1;
    for (int j = 0; j < n; ++j) {
      if ((idx >> (n - 1 - j)) & 1) sign *= label.signs[static_cast<std::size_t>(j)];
    }
    v(idx) = sign * amp;
  }
  return {std::move(v), label.m};
}

DenseOperator internal_projector(const IonRegister& reg,
                                 const Bitstring& outcome) {
  const StateVector v = basis_state(reg, outcome);
  return v * v.adjoint();
}

}  // namespace vibronic
