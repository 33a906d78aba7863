#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bhlab/choice.hpp"
#include "bhlab/types.hpp"

namespace bhlab {

inline constexpr double kNormTolerance = 1e-9;
inline constexpr std::size_t kMaxQubits = 20;

struct MeasurementBranch;

// Real-amplitude state vector over q qubits. Qubit i is bit i of the basis
// index. Every circuit we simulate uses real rotations and bit flips only,
// so amplitudes stay real; a complex variant would swap the element type.
class QRegister {
 public:
  // |0...0> on q qubits, 1 <= q <= kMaxQubits.
  explicit QRegister(std::size_t q);

  std::size_t qubits() const { return q_; }
  const std::vector<double>& amplitudes() const { return amp_; }
  double norm_squared() const;

  // Equal superposition on `qubit`, realised as a pi/4 rotation; from |0>
  // this yields (|0> + |1>)/sqrt(2).
  void init_plus(std::size_t qubit);
  // (cos a, -sin a; sin a, cos a) on the qubit's two-dimensional subspaces.
  void rotate(std::size_t qubit, double angle);
  // Classically controlled X gate.
  void xor_flip(std::size_t qubit, Bit bit);

  // Probability that measuring `qubit` yields 1.
  double probability_one(std::size_t qubit) const;

  // Every outcome with non-negligible probability, collapsed and
  // renormalised.
  std::vector<MeasurementBranch> measure_branches(std::size_t qubit) const;

  // Samples an outcome through `choices` (weights {pr0, pr1}) and collapses
  // in place. Returns the outcome and its probability.
  std::pair<Bit, double> measure(std::size_t qubit, ChoiceSource& choices);

  // Sets the named qubits to |0> given their known measured values.
  // Throws NotBasisState if any of them is not in a definite state equal to
  // its known value.
  void reset(std::span<const std::size_t> qubits, std::span<const Bit> known_outcomes);
  // Whole register back to |0...0>; it must be a basis state.
  void reset_all();

 private:
  void check(std::size_t qubit) const;
  void collapse(std::size_t qubit, Bit outcome, double probability);

  std::size_t q_;
  std::vector<double> amp_;
};

struct MeasurementBranch {
  Bit outcome;
  double probability;
  QRegister collapsed;
};

}  // namespace bhlab
