#pragma once

// Internal (pseudo-spin) space of N two-level ions.
//
// Basis ordering: ion 1 is the most significant bit, |↓⟩ ↦ 0, |↑⟩ ↦ 1.
// Bitstrings are written over {d, u}; "du" is |↓↑⟩ = basis index 1.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vibronic/fock.hpp"

namespace vibronic {

class IonRegister {
 public:
  static constexpr int kMaxIons = 10;

  explicit IonRegister(int n_ions);

  int n_ions() const noexcept { return n_ions_; }
  Index dim() const noexcept { return Index{1} << n_ions_; }

  friend bool operator==(const IonRegister&, const IonRegister&) = default;

 private:
  int n_ions_;
};

/// Computational basis label of the register, one bool per ion (true = ↑).
class Bitstring {
 public:
  /// Parses "dudu"-style strings. Throws InvalidArgument on other characters.
  static Bitstring parse(std::string_view text);

  explicit Bitstring(std::vector<bool> ups) : ups_(std::move(ups)) {}

  int size() const noexcept { return static_cast<int>(ups_.size()); }
  bool up(int ion) const { return ups_.at(static_cast<std::size_t>(ion)); }
  /// Basis index on a register of the same size.
  Index index() const noexcept;
  std::string str() const;

  friend bool operator==(const Bitstring&, const Bitstring&) = default;

 private:
  std::vector<bool> ups_;
};

/// Every basis outcome of the register in index order.
std::vector<Bitstring> all_outcomes(const IonRegister& reg);

StateVector basis_state(const IonRegister& reg, const Bitstring& bits);

/// σ₊ⱼ = |↑⟩⟨↓| on ion j (1-based) and σ₋ⱼ = σ₊ⱼ†.
std::pair<DenseOperator, DenseOperator> flip_ops(const IonRegister& reg,
                                                 int ion);

struct CollectiveSpin {
  DenseOperator jx;
  DenseOperator jy;
  DenseOperator jz;
};

/// Jx = Σ(σ₊+σ₋)/2, Jy = Σ(σ₊−σ₋)/(2i), Jz = Σ(|↑⟩⟨↑|−|↓⟩⟨↓|)/2.
CollectiveSpin collective_spin_ops(const IonRegister& reg);

/// Label of a Jx product eigenstate ⊗ⱼ(|↓⟩ + sⱼ|↑⟩)/√2.
struct JxEigenlabel {
  std::vector<int> signs;  // each +1 or −1
  double m = 0.0;          // Jx eigenvalue, Σ signs / 2

  static JxEigenlabel from_signs(std::vector<int> signs);
  /// Parses "+-+" style strings.
  static JxEigenlabel parse(std::string_view text);
  std::string str() const;
};

/// All 2^N sign patterns; bit b of the pattern index set means sign −1 on
/// ion b+1 counted from the most significant bit, mirroring the basis order.
std::vector<JxEigenlabel> all_sign_patterns(const IonRegister& reg);

/// Returns the product eigenstate for `signs` together with its eigenvalue.
std::pair<StateVector, double> jx_product_eigenstate(
    const IonRegister& reg, const std::vector<int>& signs);

/// |outcome⟩⟨outcome| on the internal space.
DenseOperator internal_projector(const IonRegister& reg, const Bitstring& outcome);

}  // namespace vibronic
