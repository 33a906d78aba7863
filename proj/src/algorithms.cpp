#include "bhlab/algorithms.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "bhlab/errors.hpp"

namespace bhlab {

std::size_t RunContext::choose(std::span<const double> weights) {
  const std::size_t index = source_.choose(weights);
  choices_.push_back({index, weights[index]});
  return index;
}

Bit RunContext::measure(QRegister& reg, std::size_t qubit) {
  const auto [outcome, probability] = reg.measure(qubit, *this);
  measurements_.push_back({position_, qubit, outcome, probability});
  return outcome;
}

BitString advice_g1(const ProblemSpec& spec, const ParsedInput& parsed, const FunctionOracle& f) {
  const BitMatrix g = suffix_parities(spec, parsed, f);
  if (spec.lambda() == 1) return {g[0][0]};
  BitString advice;
  for (std::size_t j = 1; j < g.size(); ++j) advice.push_back(g[j][0]);
  return advice;
}

AdviceOracle no_advice() {
  return [](const ProblemSpec&, const ParsedInput&) { return BitString{}; };
}

AdviceOracle g1_advice() {
  return [](const ProblemSpec& spec, const ParsedInput& parsed) {
    return advice_g1(spec, parsed, spec.function());
  };
}

AdviceOracle corrupted_advice(AdviceOracle base, std::uint64_t mask) {
  return [base = std::move(base), mask](const ProblemSpec& spec, const ParsedInput& parsed) {
    BitString advice = base(spec, parsed);
    for (std::size_t i = 0; i < advice.size() && i < 64; ++i)
      if ((mask >> i) & 1U) advice[i] ^= 1;
    return advice;
  };
}

std::vector<std::size_t> RunTrace::choice_indices() const {
  std::vector<std::size_t> out;
  out.reserve(choices.size());
  for (const auto& c : choices) out.push_back(c.index);
  return out;
}

namespace {

std::string bits_to_string(BitView bits) {
  std::string s;
  for (Bit b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

nlohmann::json RunTrace::to_json(const ProblemSpec& spec) const {
  nlohmann::json choice_log = nlohmann::json::array();
  for (const auto& c : choices) choice_log.push_back({{"index", c.index}, {"p", c.probability}});
  nlohmann::json measurement_log = nlohmann::json::array();
  for (const auto& m : measurements)
    measurement_log.push_back(
        {{"position", m.position}, {"qubit", m.qubit}, {"outcome", m.outcome}, {"p", m.probability}});
  return {{"advice", bits_to_string(advice)},
          {"outputs", bits_to_string(outputs.bits)},
          {"cost", cost},
          {"opt", opt_cost(spec)},
          {"ratio", cost / opt_cost(spec)},
          {"choices", std::move(choice_log)},
          {"measurements", std::move(measurement_log)}};
}

namespace {

BitString drive(OnlineAlgorithm& alg, std::span<const Symbol> symbols, BitView advice, RunContext& ctx) {
  if (advice.size() != alg.advice_bits())
    throw SpecError(alg.name() + " expects " + std::to_string(alg.advice_bits()) + " advice bits, got " +
                    std::to_string(advice.size()));
  alg.start(advice);
  BitString out;
  for (std::size_t pos = 0; pos < symbols.size(); ++pos) {
    ctx.set_position(pos + 1);
    const std::optional<Bit> y = alg.step(symbols[pos], ctx);
    if (y.has_value() != (symbols[pos] == kGuardian))
      throw OutputCountMismatch(alg.name() + " answered off a guardian marker at position " +
                                std::to_string(pos + 1));
    if (y) out.push_back(*y);
  }
  return out;
}

}  // namespace

RunTrace run_online(OnlineAlgorithm& alg, const ProblemSpec& spec, const InputWord& word,
                    const AdviceOracle& advice, ChoiceSource& choices) {
  const ParsedInput parsed = parse_input(spec, word);
  RunTrace trace;
  trace.advice = advice(spec, parsed);
  RunContext ctx(choices);
  trace.outputs.bits = drive(alg, word.symbols, trace.advice, ctx);
  ctx.set_position(word.symbols.size() + 1);
  alg.finish(ctx);
  if (trace.outputs.bits.size() != static_cast<std::size_t>(spec.guardian_count()))
    throw OutputCountMismatch("expected " + std::to_string(spec.guardian_count()) + " answers, got " +
                              std::to_string(trace.outputs.bits.size()));
  trace.choices = ctx.choices();
  trace.measurements = ctx.measurements();
  trace.cost = cost(spec, parsed, trace.outputs);
  return trace;
}

BitString run_prefix(OnlineAlgorithm& alg, std::span<const Symbol> symbols, BitView advice,
                     ChoiceSource& choices) {
  RunContext ctx(choices);
  return drive(alg, symbols, advice, ctx);
}

namespace {

void require_partial_mod(const ProblemSpec& spec, const char* who) {
  if (spec.function().kind() != FunctionKind::kPartialMod)
    throw SpecError(std::string(who) + " requires f = partialmod");
}

// Measures a qubit that the promise says is in a basis state.
Bit measure_definite(QRegister& reg, std::size_t qubit, RunContext& ctx) {
  const double p1 = reg.probability_one(qubit);
  if (p1 > kNormTolerance && p1 < 1.0 - kNormTolerance)
    throw PromiseViolation("measurement is not deterministic (pr_1 = " + std::to_string(p1) +
                           "); a segment breaks the PartialMOD promise");
  return ctx.measure(reg, qubit);
}

void require_definite(const QRegister& reg, std::size_t qubit) {
  const double p1 = reg.probability_one(qubit);
  if (p1 > kNormTolerance && p1 < 1.0 - kNormTolerance)
    throw PromiseViolation("final segment breaks the PartialMOD promise");
}

double rotation_angle(int s_mod) { return std::numbers::pi / std::ldexp(1.0, s_mod + 1); }

// qalg_b (guess) and qalg_a (advice) differ only in how y_1 is produced.
class PartialModQubitAlgorithm : public OnlineAlgorithm {
 public:
  PartialModQubitAlgorithm(const ProblemSpec& spec, bool advised, AlgorithmOptions options)
      : k_(spec.k()), angle_(rotation_angle(spec.function().s_mod())), advised_(advised), options_(options) {
    if (spec.lambda() != 1) throw SpecError(name() + " requires lambda = 1");
    require_partial_mod(spec, advised ? "qalg-a" : "qalg-b");
  }

  std::string name() const override { return advised_ ? "qalg-a" : "qalg-b"; }
  std::size_t advice_bits() const override { return advised_ ? 1 : 0; }
  MemoryBudget memory() const override { return {0, 1, 0}; }

  void start(BitView advice) override {
    reg_ = QRegister(1);
    guardians_ = 0;
    advice_ = advised_ ? advice[0] : 0;
  }

  std::optional<Bit> step(Symbol symbol, RunContext& ctx) override {
    if (symbol == kGuardian) {
      Bit y;
      if (guardians_ == 0) {
        if (advised_) {
          reg_.xor_flip(0, advice_);
        } else {
          reg_.init_plus(0);
        }
        y = advised_ ? measure_definite(reg_, 0, ctx) : ctx.measure(reg_, 0);
      } else {
        y = measure_definite(reg_, 0, ctx);
      }
      ++guardians_;
      return y;
    }
    // X_k is not needed for any answer.
    if (symbol == 1 && (guardians_ < k_ || options_.validate_last_segment)) reg_.rotate(0, angle_);
    return std::nullopt;
  }

  void finish(RunContext&) override {
    if (options_.validate_last_segment && guardians_ == k_) require_definite(reg_, 0);
  }

 private:
  int k_;
  double angle_;
  bool advised_;
  AlgorithmOptions options_;
  QRegister reg_{1};
  int guardians_ = 0;
  Bit advice_ = 0;
};

class NoisyAdviceAlgorithm : public OnlineAlgorithm {
 public:
  NoisyAdviceAlgorithm(const ProblemSpec& spec, double epsilon, AlgorithmOptions options)
      : k_(spec.k()), noisy_(spec.function(), epsilon), options_(options) {
    if (spec.lambda() != 1) throw SpecError("ralg-a requires lambda = 1");
  }

  std::string name() const override { return "ralg-a"; }
  std::size_t advice_bits() const override { return 1; }
  // The subroutine's own memory is abstracted by the noisy oracle; the
  // segment buffer below only simulates it.
  MemoryBudget memory() const override { return {1, 0, 0}; }

  void start(BitView advice) override {
    parity_ = advice[0];
    guardians_ = 0;
    segment_.clear();
  }

  std::optional<Bit> step(Symbol symbol, RunContext& ctx) override {
    if (symbol == kGuardian) {
      if (guardians_ > 0) {
        parity_ ^= noisy_.eval(segment_, ctx);
        segment_.clear();
      }
      ++guardians_;
      return parity_;
    }
    if (guardians_ < k_ || options_.validate_last_segment) segment_.push_back(symbol);
    return std::nullopt;
  }

  void finish(RunContext&) override {
    if (options_.validate_last_segment && guardians_ == k_) (void)noisy_.base()(segment_);
  }

 private:
  int k_;
  NoisyOracle noisy_;
  AlgorithmOptions options_;
  Bit parity_ = 0;
  int guardians_ = 0;
  BitString segment_;
};

// Qubits 0..lambda-1 hold the running answers p_j; qubit lambda is the
// work register that evaluates f on the segment being read.
class InterleavedAlgorithm : public OnlineAlgorithm {
 public:
  InterleavedAlgorithm(const ProblemSpec& spec, AlgorithmOptions options)
      : lambda_(spec.lambda()),
        guardian_count_(spec.guardian_count()),
        angle_(rotation_angle(spec.function().s_mod())),
        options_(options) {
    if (lambda_ < 2) throw SpecError("ibh requires lambda > 1");
    require_partial_mod(spec, "ibh");
  }

  std::string name() const override { return "ibh"; }
  std::size_t advice_bits() const override { return static_cast<std::size_t>(lambda_ - 1); }
  MemoryBudget memory() const override { return {0, static_cast<std::size_t>(lambda_ + 1), 0}; }

  void start(BitView advice) override {
    reg_ = QRegister(static_cast<std::size_t>(lambda_ + 1));
    advice_.assign(advice.begin(), advice.end());
    guardians_ = 0;
  }

  std::optional<Bit> step(Symbol symbol, RunContext& ctx) override {
    const auto work = static_cast<std::size_t>(lambda_);
    if (symbol == kGuardian) {
      if (guardians_ > 0) {
        // Fold f(previous segment) into its instance's answer qubit and
        // return the work qubit to |0>.
        const auto owner = static_cast<std::size_t>((guardians_ - 1) % lambda_);
        const Bit value = measure_definite(reg_, work, ctx);
        const std::array<std::size_t, 1> q{work};
        const std::array<Bit, 1> known{value};
        reg_.reset(q, known);
        reg_.xor_flip(owner, value);
      }
      const auto instance = static_cast<std::size_t>(guardians_ % lambda_);
      const bool first_round = guardians_ < lambda_;
      Bit y;
      if (first_round && instance == 0) {
        reg_.init_plus(0);
        y = ctx.measure(reg_, 0);
      } else {
        if (first_round) reg_.xor_flip(instance, advice_[instance - 1]);
        y = measure_definite(reg_, instance, ctx);
      }
      ++guardians_;
      return y;
    }
    // Segments of the last round feed no answer.
    const bool last_round = guardians_ > guardian_count_ - lambda_;
    if (symbol == 1 && (!last_round || options_.validate_last_segment)) reg_.rotate(work, angle_);
    return std::nullopt;
  }

  void finish(RunContext&) override {
    if (options_.validate_last_segment && guardians_ == guardian_count_)
      require_definite(reg_, static_cast<std::size_t>(lambda_));
  }

 private:
  int lambda_;
  int guardian_count_;
  double angle_;
  AlgorithmOptions options_;
  QRegister reg_{1};
  BitString advice_;
  int guardians_ = 0;
};

}  // namespace

std::unique_ptr<OnlineAlgorithm> make_qalg_b(const ProblemSpec& spec, AlgorithmOptions options) {
  return std::make_unique<PartialModQubitAlgorithm>(spec, false, options);
}

std::unique_ptr<OnlineAlgorithm> make_qalg_a(const ProblemSpec& spec, AlgorithmOptions options) {
  return std::make_unique<PartialModQubitAlgorithm>(spec, true, options);
}

std::unique_ptr<OnlineAlgorithm> make_ralg_a(const ProblemSpec& spec, double epsilon, AlgorithmOptions options) {
  return std::make_unique<NoisyAdviceAlgorithm>(spec, epsilon, options);
}

std::unique_ptr<OnlineAlgorithm> make_ibh_alg(const ProblemSpec& spec, AlgorithmOptions options) {
  return std::make_unique<InterleavedAlgorithm>(spec, options);
}

TableAlgorithm::TableAlgorithm(std::size_t states, std::vector<Row> transitions, std::vector<Row> outputs)
    : states_(states), transitions_(std::move(transitions)), outputs_(std::move(outputs)) {
  if (states_ < 1 || states_ > 255) throw MalformedTable("state count must be in [1, 255]");
  if (transitions_.size() != states_ || outputs_.size() != states_)
    throw MalformedTable("tables must have one row per state");
  for (std::size_t s = 0; s < states_; ++s) {
    for (int a = 0; a < 3; ++a) {
      if (transitions_[s][a] >= states_)
        throw MalformedTable("transition from state " + std::to_string(s) + " leaves the state set");
      if (outputs_[s][a] > 1) throw MalformedTable("outputs must be bits");
    }
  }
}

void TableAlgorithm::start(BitView) { state_ = 0; }

std::optional<Bit> TableAlgorithm::step(Symbol symbol, RunContext&) {
  std::optional<Bit> y;
  if (symbol == kGuardian) y = outputs_[state_][symbol];
  state_ = transitions_[state_][symbol];
  return y;
}

nlohmann::json TableAlgorithm::to_json() const {
  return {{"S", states_}, {"transitions", transitions_}, {"outputs", outputs_}};
}

namespace {

std::vector<TableAlgorithm::Row> read_rows(const nlohmann::json& j, const char* key, std::size_t states) {
  if (!j.contains(key) || !j[key].is_array()) throw MalformedTable(std::string("table: array \"") + key + "\" required");
  const auto& rows = j[key];
  if (rows.size() != states) throw MalformedTable(std::string("table: \"") + key + "\" needs one row per state");
  std::vector<TableAlgorithm::Row> out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3)
      throw MalformedTable(std::string("table: every \"") + key + "\" row needs 3 entries");
    TableAlgorithm::Row r{};
    for (std::size_t a = 0; a < 3; ++a) {
      if (!row[a].is_number_integer() || row[a].get<long long>() < 0 || row[a].get<long long>() > 255)
        throw MalformedTable(std::string("table: bad entry in \"") + key + "\"");
      r[a] = row[a].get<std::uint8_t>();
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

TableAlgorithm TableAlgorithm::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("S") || !j["S"].is_number_integer() || j["S"].get<long long>() < 1)
    throw MalformedTable("table: positive integer \"S\" required");
  const auto states = j["S"].get<std::size_t>();
  return TableAlgorithm(states, read_rows(j, "transitions", states), read_rows(j, "outputs", states));
}

TableAlgorithm table_algorithm(std::size_t states, std::vector<TableAlgorithm::Row> transitions,
                               std::vector<TableAlgorithm::Row> outputs) {
  return TableAlgorithm(states, std::move(transitions), std::move(outputs));
}

AlgorithmSetup resolve_algorithm(std::string_view id, const ProblemSpec& spec, double epsilon,
                                 AlgorithmOptions options) {
  AlgorithmSetup setup;
  setup.id = std::string(id);
  // Construct once up front so that spec mismatches surface here.
  if (id == "qalg-b") {
    (void)make_qalg_b(spec, options);
    setup.factory = [spec, options] { return make_qalg_b(spec, options); };
    setup.advice = no_advice();
  } else if (id == "qalg-a") {
    (void)make_qalg_a(spec, options);
    setup.factory = [spec, options] { return make_qalg_a(spec, options); };
    setup.advice = g1_advice();
  } else if (id == "ralg-a") {
    (void)make_ralg_a(spec, epsilon, options);
    setup.factory = [spec, epsilon, options] { return make_ralg_a(spec, epsilon, options); };
    setup.advice = g1_advice();
  } else if (id == "ibh") {
    (void)make_ibh_alg(spec, options);
    setup.factory = [spec, options] { return make_ibh_alg(spec, options); };
    setup.advice = g1_advice();
  } else if (id.starts_with("table:")) {
    const std::string path(id.substr(6));
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open table file " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw MalformedTable("table file " + path + ": " + e.what());
    }
    const TableAlgorithm table = TableAlgorithm::from_json(j);
    setup.factory = [table] { return std::make_unique<TableAlgorithm>(table); };
    setup.advice = no_advice();
  } else {
    throw SpecError("unknown algorithm \"" + std::string(id) + "\"");
  }
  return setup;
}

}  // namespace bhlab
