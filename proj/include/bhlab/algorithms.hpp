#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bhlab/choice.hpp"
#include "bhlab/functions.hpp"
#include "bhlab/problem.hpp"
#include "bhlab/qsim.hpp"
#include "json.hpp"

namespace bhlab {

struct ChoiceRecord {
  std::size_t index;
  double probability;
};

struct MeasurementRecord {
  std::size_t position;  // 1-based stream position of the symbol being processed
  std::size_t qubit;
  Bit outcome;
  double probability;
};

// What an algorithm sees of the run besides the input: the choice source,
// wrapped so that every choice and measurement is logged.
class RunContext : public ChoiceSource {
 public:
  explicit RunContext(ChoiceSource& source) : source_(source) {}

  std::size_t choose(std::span<const double> weights) override;

  // Measures through this context and logs the outcome.
  Bit measure(QRegister& reg, std::size_t qubit);

  void set_position(std::size_t position) { position_ = position; }
  std::size_t position() const { return position_; }

  const std::vector<ChoiceRecord>& choices() const { return choices_; }
  const std::vector<MeasurementRecord>& measurements() const { return measurements_; }

 private:
  ChoiceSource& source_;
  std::size_t position_ = 0;
  std::vector<ChoiceRecord> choices_;
  std::vector<MeasurementRecord> measurements_;
};

// Declared memory; checked by assertions in tests, not instrumented.
struct MemoryBudget {
  std::size_t bits = 0;
  std::size_t qubits = 0;
  std::size_t states = 0;
};

// Online streaming algorithm. start() fully resets the state, so one
// instance can serve many runs in sequence.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual std::size_t advice_bits() const = 0;
  virtual MemoryBudget memory() const = 0;

  virtual void start(BitView advice) = 0;
  // Must return a bit exactly when symbol is the guardian marker.
  virtual std::optional<Bit> step(Symbol symbol, RunContext& ctx) = 0;
  // Called after the last symbol.
  virtual void finish(RunContext& ctx) { (void)ctx; }
};

using AlgorithmFactory = std::function<std::unique_ptr<OnlineAlgorithm>()>;

// Computes advice from the whole input.
using AdviceOracle = std::function<BitString(const ProblemSpec&, const ParsedInput&)>;

// lambda == 1: the single bit g_1. lambda > 1: g^2_1, ..., g^lambda_1.
BitString advice_g1(const ProblemSpec& spec, const ParsedInput& parsed, const FunctionOracle& f);

AdviceOracle no_advice();
// advice_g1 with the spec's own function.
AdviceOracle g1_advice();
// Complements the advice bits selected by `mask` (bit i flips advice bit i).
AdviceOracle corrupted_advice(AdviceOracle base, std::uint64_t mask);

struct RunTrace {
  GuardianOutputs outputs;
  BitString advice;
  std::vector<ChoiceRecord> choices;
  std::vector<MeasurementRecord> measurements;
  double cost = 0.0;

  std::vector<std::size_t> choice_indices() const;
  nlohmann::json to_json(const ProblemSpec& spec) const;
};

// Feeds the word to the algorithm, one symbol at a time, and scores the
// answers. Throws OutputCountMismatch if the algorithm does not answer
// exactly at the guardian markers.
RunTrace run_online(OnlineAlgorithm& alg, const ProblemSpec& spec, const InputWord& word,
                    const AdviceOracle& advice, ChoiceSource& choices);

// Feeds an arbitrary symbol prefix with fixed advice and returns the answers
// emitted so far; no validation of the word and no finish().
BitString run_prefix(OnlineAlgorithm& alg, std::span<const Symbol> symbols, BitView advice,
                     ChoiceSource& choices);

struct AlgorithmOptions {
  // Still run the tail segment X_k through the algorithm's own check of the
  // promise, although no answer depends on it.
  bool validate_last_segment = true;
};

// One-qubit guesser for PartialMOD: measures |+> for y_1, then rotates by
// pi / 2^(s+1) per 1 and measures at each marker. No advice.
std::unique_ptr<OnlineAlgorithm> make_qalg_b(const ProblemSpec& spec, AlgorithmOptions options = {});
// As qalg_b, but starts from |g_1> given by one advice bit. Optimal.
std::unique_ptr<OnlineAlgorithm> make_qalg_a(const ProblemSpec& spec, AlgorithmOptions options = {});
// Classical bit p seeded by one advice bit; each prisoner XORs a noisy
// evaluation of f into p.
std::unique_ptr<OnlineAlgorithm> make_ralg_a(const ProblemSpec& spec, double epsilon,
                                             AlgorithmOptions options = {});
// Interleaved instances: lambda answer qubits plus one work qubit. Instance
// 1 is seeded by a fair quantum guess, instances 2..lambda by advice.
std::unique_ptr<OnlineAlgorithm> make_ibh_alg(const ProblemSpec& spec, AlgorithmOptions options = {});

// Deterministic finite-state streaming algorithm over {0, 1, 2}. State 0
// is initial; the answer at a marker is read from the state before the
// transition.
class TableAlgorithm : public OnlineAlgorithm {
 public:
  using Row = std::array<std::uint8_t, 3>;

  // Throws MalformedTable.
  TableAlgorithm(std::size_t states, std::vector<Row> transitions, std::vector<Row> outputs);

  std::string name() const override { return "table"; }
  std::size_t advice_bits() const override { return 0; }
  MemoryBudget memory() const override { return {0, 0, states_}; }
  void start(BitView advice) override;
  std::optional<Bit> step(Symbol symbol, RunContext& ctx) override;

  std::size_t states() const { return states_; }
  const std::vector<Row>& transitions() const { return transitions_; }
  const std::vector<Row>& outputs() const { return outputs_; }

  // {"S": int, "transitions": [[int x3] x S], "outputs": [[bit x3] x S]}
  nlohmann::json to_json() const;
  static TableAlgorithm from_json(const nlohmann::json& j);

 private:
  std::size_t states_;
  std::vector<Row> transitions_;
  std::vector<Row> outputs_;
  std::uint8_t state_ = 0;
};

TableAlgorithm table_algorithm(std::size_t states, std::vector<TableAlgorithm::Row> transitions,
                               std::vector<TableAlgorithm::Row> outputs);

// An algorithm identifier with everything needed to run it.
struct AlgorithmSetup {
  std::string id;
  AlgorithmFactory factory;
  AdviceOracle advice;
};

// qalg-b | qalg-a | ralg-a | ibh | table:<file>. Throws SpecError when the
// algorithm does not fit the spec.
AlgorithmSetup resolve_algorithm(std::string_view id, const ProblemSpec& spec, double epsilon = 0.0,
                                 AlgorithmOptions options = {});

}  // namespace bhlab
