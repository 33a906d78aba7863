#include "bhlab/qsim.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "bhlab/errors.hpp"

namespace bhlab {

QRegister::QRegister(std::size_t q) : q_(q) {
  if (q < 1 || q > kMaxQubits) throw IndexOutOfRange("register size must be in [1, 20]");
  amp_.assign(std::size_t{1} << q, 0.0);
  amp_[0] = 1.0;
}

void QRegister::check(std::size_t qubit) const {
  if (qubit >= q_)
    throw IndexOutOfRange("qubit " + std::to_string(qubit) + " out of range for " + std::to_string(q_) +
                          "-qubit register");
}

double QRegister::norm_squared() const {
  double s = 0.0;
  for (double a : amp_) s += a * a;
  return s;
}

void QRegister::init_plus(std::size_t qubit) { rotate(qubit, std::numbers::pi / 4); }

void QRegister::rotate(std::size_t qubit, double angle) {
  check(qubit);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const std::size_t mask = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & mask) continue;
    const double a0 = amp_[i];
    const double a1 = amp_[i | mask];
    amp_[i] = c * a0 - s * a1;
    amp_[i | mask] = s * a0 + c * a1;
  }
}

void QRegister::xor_flip(std::size_t qubit, Bit bit) {
  check(qubit);
  if (bit == 0) return;
  const std::size_t mask = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amp_.size(); ++i)
    if (!(i & mask)) std::swap(amp_[i], amp_[i | mask]);
}

double QRegister::probability_one(std::size_t qubit) const {
  check(qubit);
  const std::size_t mask = std::size_t{1} << qubit;
  double p = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i)
    if (i & mask) p += amp_[i] * amp_[i];
  return p;
}

void QRegister::collapse(std::size_t qubit, Bit outcome, double probability) {
  const std::size_t mask = std::size_t{1} << qubit;
  const double scale = 1.0 / std::sqrt(probability);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const bool one = (i & mask) != 0;
    amp_[i] = (one == (outcome == 1)) ? amp_[i] * scale : 0.0;
  }
}

std::vector<MeasurementBranch> QRegister::measure_branches(std::size_t qubit) const {
  const double p1 = probability_one(qubit);
  const std::array<double, 2> probs{1.0 - p1, p1};
  std::vector<MeasurementBranch> branches;
  for (Bit outcome = 0; outcome < 2; ++outcome) {
    if (probs[outcome] <= kNegligibleWeight) continue;
    QRegister copy = *this;
    copy.collapse(qubit, outcome, probs[outcome]);
    branches.push_back({outcome, probs[outcome], std::move(copy)});
  }
  return branches;
}

std::pair<Bit, double> QRegister::measure(std::size_t qubit, ChoiceSource& choices) {
  const double p1 = probability_one(qubit);
  const std::array<double, 2> probs{1.0 - p1, p1};
  const auto outcome = static_cast<Bit>(choices.choose(probs));
  collapse(qubit, outcome, probs[outcome]);
  return {outcome, probs[outcome]};
}

void QRegister::reset(std::span<const std::size_t> qubits, std::span<const Bit> known_outcomes) {
  if (qubits.size() != known_outcomes.size())
    throw IndexOutOfRange("reset: one known outcome per qubit required");
  for (std::size_t n = 0; n < qubits.size(); ++n) {
    const double p1 = probability_one(qubits[n]);
    const double expected = known_outcomes[n] ? 1.0 : 0.0;
    if (std::abs(p1 - expected) > kNormTolerance)
      throw NotBasisState("reset: qubit " + std::to_string(qubits[n]) + " is not in state |" +
                          std::to_string(known_outcomes[n]) + ">");
  }
  for (std::size_t n = 0; n < qubits.size(); ++n) xor_flip(qubits[n], known_outcomes[n]);
}

void QRegister::reset_all() {
  std::size_t hot = amp_.size();
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const double p = amp_[i] * amp_[i];
    if (p <= kNormTolerance) continue;
    if (std::abs(p - 1.0) > kNormTolerance || hot != amp_.size())
      throw NotBasisState("reset_all: register is in superposition");
    hot = i;
  }
  if (hot == amp_.size()) throw NotBasisState("reset_all: zero state");
  amp_.assign(amp_.size(), 0.0);
  amp_[0] = 1.0;
}

}  // namespace bhlab
