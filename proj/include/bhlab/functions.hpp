#pragma once

#include <functional>
#include <memory>
#include <string>

#include "bhlab/choice.hpp"
#include "bhlab/types.hpp"
#include "json.hpp"

namespace bhlab {

// PartialMOD^s: defined on strings whose number of ones is v * 2^s with
// v >= 2; the value is v mod 2.
struct PartialModSpec {
  int s_mod = 0;
};

std::size_t count_ones(BitView x);

// Throws PromiseViolation off the promise.
Bit partial_mod_eval(PartialModSpec spec, BitView x);

// A string of length m with exactly v * 2^s ones at random positions.
// Throws Infeasible if v * 2^s > m, DomainError if v < 2.
BitString gen_partial_mod_input(PartialModSpec spec, std::size_t m, std::int64_t v, Rng& rng);

// Largest admissible v for length m, i.e. floor(m / 2^s).
std::int64_t partial_mod_v_max(PartialModSpec spec, std::size_t m);

enum class FunctionKind { kPartialMod, kXor, kAnd, kCustom };

// The prisoner function f. A cheap value type: custom functions share
// their callable.
class FunctionOracle {
 public:
  static FunctionOracle partial_mod(int s_mod);
  static FunctionOracle parity();
  static FunctionOracle conjunction();
  // A total function backed by an arbitrary callable; used by tests.
  static FunctionOracle custom(std::string name, std::function<Bit(BitView)> fn);

  Bit operator()(BitView x) const;

  FunctionKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int s_mod() const { return s_mod_; }
  bool is_total() const { return kind_ != FunctionKind::kPartialMod; }

  // {"name":"partialmod","s":int} | {"name":"xor"} | {"name":"and"}
  nlohmann::json to_json() const;
  static FunctionOracle from_json(const nlohmann::json& j);

 private:
  FunctionOracle(FunctionKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  FunctionKind kind_;
  std::string name_;
  int s_mod_ = 0;
  std::shared_ptr<const std::function<Bit(BitView)>> custom_;
};

enum class TotalFunction { kXor, kAnd };

// Requires m >= 1 (the length the caller intends to evaluate on).
FunctionOracle total_oracle(TotalFunction which, std::size_t m);

// Bounded-error evaluation of a base function: the exact answer with
// probability 1 - epsilon, else its complement. The flip is a choice point
// with weights {1 - epsilon, epsilon}; index 1 means "flipped".
class NoisyOracle {
 public:
  NoisyOracle(FunctionOracle base, double epsilon);

  Bit eval(BitView x, ChoiceSource& choices) const;

  const FunctionOracle& base() const { return base_; }
  double epsilon() const { return epsilon_; }

 private:
  FunctionOracle base_;
  double epsilon_;
};

}  // namespace bhlab
