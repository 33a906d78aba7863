#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/functions.hpp"
#include "bhlab/types.hpp"
#include "json.hpp"

namespace bhlab {

struct CostParams {
  double r = 1.0;  // cost of a block whose guardians are all right
  double w = 1.0;  // cost of a block with at least one wrong guardian
  int t = 1;       // number of blocks
};

// One instance family of the (interleaved) Black Hats problem. lambda == 1
// is the plain problem. Validated on construction and immutable afterwards.
class ProblemSpec {
 public:
  // Throws SpecError unless w >= r > 0, t >= 1, k mod t == 0, lambda >= 1,
  // |m| == k and every m_i >= 1.
  ProblemSpec(int lambda, int k, CostParams costs, std::vector<std::size_t> m, FunctionOracle function);

  int lambda() const { return lambda_; }
  int k() const { return k_; }
  int t() const { return costs_.t; }
  double r() const { return costs_.r; }
  double w() const { return costs_.w; }
  const CostParams& costs() const { return costs_; }
  const std::vector<std::size_t>& m() const { return m_; }
  const FunctionOracle& function() const { return function_; }

  // Guardians per block, lambda * k / t.
  int block_length() const { return lambda_ * k_ / costs_.t; }
  int guardian_count() const { return lambda_ * k_; }
  // lambda * sum(m_i + 1).
  std::size_t word_length() const;

  // A copy with a different block count (used by sweeps).
  ProblemSpec with_t(int t) const;

  nlohmann::json to_json() const;
  // Schema: {"lambda","k","t","r","w","m":[...],"f":{...}}; "lambda"
  // defaults to 1. Throws SpecError.
  static ProblemSpec from_json(const nlohmann::json& j);

  // Short identifier such as "l1-k4-t2-partialmod1", used in CSV output.
  std::string id() const;

 private:
  int lambda_;
  int k_;
  CostParams costs_;
  std::vector<std::size_t> m_;
  FunctionOracle function_;
};

struct InputWord {
  std::vector<Symbol> symbols;

  std::string to_string() const;
  // Accepts '0', '1', '2'; whitespace is ignored. Throws MalformedInput.
  static InputWord from_string(std::string_view text);

  friend bool operator==(const InputWord&, const InputWord&) = default;
};

// segments[j][i] is X^{j+1}_{i+1}: instance j, prisoner i (both 0-based).
using SegmentMatrix = std::vector<std::vector<BitString>>;
using BitMatrix = std::vector<BitString>;

struct ParsedInput {
  SegmentMatrix segments;
  // 1-based stream positions of the guardian markers, in stream order.
  std::vector<std::size_t> guardian_positions;
};

// Guardian answers in stream order: y^1_1, ..., y^lambda_1, y^1_2, ...
struct GuardianOutputs {
  BitString bits;
};

// Stream-order guardian index g belongs to instance g % lambda and prisoner
// slot g / lambda.
inline int instance_of(const ProblemSpec& spec, int g) { return g % spec.lambda(); }
inline int slot_of(const ProblemSpec& spec, int g) { return g / spec.lambda(); }

// Throws DimensionMismatch.
InputWord encode_input(const ProblemSpec& spec, const SegmentMatrix& segments);

// Throws MalformedInput.
ParsedInput parse_input(const ProblemSpec& spec, const InputWord& word);

// f(X^j_i) for every segment, shape lambda x k.
BitMatrix function_values(const ParsedInput& parsed, const FunctionOracle& f);

// g^j_i: XOR of f over segments i..k of instance j, shape lambda x k.
BitMatrix suffix_parities(const ProblemSpec& spec, const ParsedInput& parsed, const FunctionOracle& f);
BitMatrix suffix_parities_of_values(const BitMatrix& values);

// The correct answer of every guardian in stream order.
BitString guardian_targets(const ProblemSpec& spec, const BitMatrix& parities);

// Block cost from stream-order targets: each block of block_length()
// guardians costs r if all its answers match, w otherwise.
double block_cost(const ProblemSpec& spec, BitView targets, BitView outputs);

double cost(const ProblemSpec& spec, const ParsedInput& parsed, const GuardianOutputs& outputs,
            const FunctionOracle& f);
double cost(const ProblemSpec& spec, const ParsedInput& parsed, const GuardianOutputs& outputs);

// Random promise-respecting segments. For PartialMOD each segment draws v
// uniformly from {2, ..., floor(m_i / 2^s)} unless `pinned_v` is given;
// total functions get uniform random bits. Throws Infeasible.
SegmentMatrix generate_segments(const ProblemSpec& spec, Rng& rng, std::optional<std::int64_t> pinned_v = {});

// The offline optimum answers every guardian correctly: t * r.
double opt_cost(const ProblemSpec& spec);

}  // namespace bhlab
