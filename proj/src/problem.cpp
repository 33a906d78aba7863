#include "bhlab/problem.hpp"

#include <cctype>
#include <numeric>

#include "bhlab/errors.hpp"

namespace bhlab {

ProblemSpec::ProblemSpec(int lambda, int k, CostParams costs, std::vector<std::size_t> m,
                         FunctionOracle function)
    : lambda_(lambda), k_(k), costs_(costs), m_(std::move(m)), function_(std::move(function)) {
  if (lambda_ < 1) throw SpecError("lambda must be positive");
  if (k_ < 1) throw SpecError("k must be positive");
  if (costs_.t < 1) throw SpecError("t must be positive");
  if (k_ % costs_.t != 0) throw SpecError("k mod t must be 0");
  if (!(costs_.r > 0.0)) throw SpecError("r must be positive");
  if (!(costs_.w >= costs_.r)) throw SpecError("w must be at least r");
  if (m_.size() != static_cast<std::size_t>(k_))
    throw SpecError("m must list k = " + std::to_string(k_) + " segment lengths");
  for (std::size_t len : m_)
    if (len < 1) throw SpecError("segment lengths must be positive");
  // Blocks must cover whole rounds of the lambda instances.
  if (block_length() % lambda_ != 0) throw SpecError("block length must be a multiple of lambda");
}

std::size_t ProblemSpec::word_length() const {
  const std::size_t per_instance = std::accumulate(m_.begin(), m_.end(), std::size_t{0}) + m_.size();
  return static_cast<std::size_t>(lambda_) * per_instance;
}

ProblemSpec ProblemSpec::with_t(int t) const {
  CostParams costs = costs_;
  costs.t = t;
  return ProblemSpec(lambda_, k_, costs, m_, function_);
}

nlohmann::json ProblemSpec::to_json() const {
  return {{"lambda", lambda_}, {"k", k_},  {"t", costs_.t},          {"r", costs_.r},
          {"w", costs_.w},     {"m", m_}, {"f", function_.to_json()}};
}

namespace {

int require_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw SpecError(std::string("spec: integer \"") + key + "\" required");
  return j[key].get<int>();
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw SpecError(std::string("spec: number \"") + key + "\" required");
  return j[key].get<double>();
}

}  // namespace

ProblemSpec ProblemSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("spec: expected a JSON object");
  const int lambda = j.contains("lambda") ? require_int(j, "lambda") : 1;
  const int k = require_int(j, "k");
  CostParams costs{require_number(j, "r"), require_number(j, "w"), require_int(j, "t")};
  if (!j.contains("m") || !j["m"].is_array()) throw SpecError("spec: array \"m\" required");
  std::vector<std::size_t> m;
  for (const auto& len : j["m"]) {
    if (!len.is_number_integer() || len.get<long long>() < 1)
      throw SpecError("spec: segment lengths must be positive integers");
    m.push_back(len.get<std::size_t>());
  }
  if (!j.contains("f")) throw SpecError("spec: function \"f\" required");
  return ProblemSpec(lambda, k, costs, std::move(m), FunctionOracle::from_json(j["f"]));
}

std::string ProblemSpec::id() const {
  std::string fn = function_.name();
  if (function_.kind() == FunctionKind::kPartialMod) fn += std::to_string(function_.s_mod());
  return "l" + std::to_string(lambda_) + "-k" + std::to_string(k_) + "-t" + std::to_string(costs_.t) + "-" + fn;
}

std::string InputWord::to_string() const {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) out.push_back(static_cast<char>('0' + s));
  return out;
}

InputWord InputWord::from_string(std::string_view text) {
  InputWord word;
  word.symbols.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c < '0' || c > '2') throw MalformedInput(std::string("unexpected input character '") + c + "'");
    word.symbols.push_back(static_cast<Symbol>(c - '0'));
  }
  return word;
}

InputWord encode_input(const ProblemSpec& spec, const SegmentMatrix& segments) {
  const auto lambda = static_cast<std::size_t>(spec.lambda());
  const auto k = static_cast<std::size_t>(spec.k());
  if (segments.size() != lambda)
    throw DimensionMismatch("expected " + std::to_string(lambda) + " instances, got " +
                            std::to_string(segments.size()));
  for (const auto& row : segments) {
    if (row.size() != k)
      throw DimensionMismatch("expected " + std::to_string(k) + " segments per instance, got " +
                              std::to_string(row.size()));
    for (std::size_t i = 0; i < k; ++i) {
      if (row[i].size() != spec.m()[i])
        throw DimensionMismatch("segment " + std::to_string(i + 1) + " has length " +
                                std::to_string(row[i].size()) + ", expected " + std::to_string(spec.m()[i]));
      for (Bit b : row[i])
        if (b > 1) throw DimensionMismatch("segments must be bit strings");
    }
  }
  InputWord word;
  word.symbols.reserve(spec.word_length());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < lambda; ++j) {
      word.symbols.push_back(kGuardian);
      word.symbols.insert(word.symbols.end(), segments[j][i].begin(), segments[j][i].end());
    }
  }
  return word;
}

ParsedInput parse_input(const ProblemSpec& spec, const InputWord& word) {
  const auto lambda = static_cast<std::size_t>(spec.lambda());
  const auto k = static_cast<std::size_t>(spec.k());
  if (word.symbols.size() != spec.word_length())
    throw MalformedInput("word has length " + std::to_string(word.symbols.size()) + ", expected " +
                         std::to_string(spec.word_length()));
  ParsedInput parsed;
  parsed.segments.assign(lambda, std::vector<BitString>(k));
  parsed.guardian_positions.reserve(lambda * k);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < lambda; ++j) {
      if (word.symbols[pos] != kGuardian)
        throw MalformedInput("expected guardian marker at position " + std::to_string(pos + 1));
      parsed.guardian_positions.push_back(pos + 1);
      ++pos;
      BitString& seg = parsed.segments[j][i];
      seg.reserve(spec.m()[i]);
      for (std::size_t n = 0; n < spec.m()[i]; ++n, ++pos) {
        if (word.symbols[pos] > 1)
          throw MalformedInput("unexpected guardian marker inside segment at position " + std::to_string(pos + 1));
        seg.push_back(word.symbols[pos]);
      }
    }
  }
  return parsed;
}

BitMatrix function_values(const ParsedInput& parsed, const FunctionOracle& f) {
  BitMatrix values;
  values.reserve(parsed.segments.size());
  for (const auto& row : parsed.segments) {
    BitString& out = values.emplace_back();
    out.reserve(row.size());
    for (const auto& seg : row) out.push_back(f(seg));
  }
  return values;
}

BitMatrix suffix_parities_of_values(const BitMatrix& values) {
  BitMatrix g = values;
  for (auto& row : g)
    for (std::size_t i = row.size(); i-- > 1;) row[i - 1] ^= row[i];
  return g;
}

BitMatrix suffix_parities(const ProblemSpec& spec, const ParsedInput& parsed, const FunctionOracle& f) {
  (void)spec;
  return suffix_parities_of_values(function_values(parsed, f));
}

BitString guardian_targets(const ProblemSpec& spec, const BitMatrix& parities) {
  BitString targets(static_cast<std::size_t>(spec.guardian_count()));
  for (int g = 0; g < spec.guardian_count(); ++g)
    targets[static_cast<std::size_t>(g)] = parities[static_cast<std::size_t>(instance_of(spec, g))]
                                                   [static_cast<std::size_t>(slot_of(spec, g))];
  return targets;
}

double block_cost(const ProblemSpec& spec, BitView targets, BitView outputs) {
  const auto n = static_cast<std::size_t>(spec.guardian_count());
  if (targets.size() != n || outputs.size() != n)
    throw OutputCountMismatch("expected " + std::to_string(n) + " guardian outputs, got " +
                              std::to_string(outputs.size()));
  const auto u = static_cast<std::size_t>(spec.block_length());
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += u) {
    bool right = true;
    for (std::size_t g = start; g < start + u; ++g) right = right && targets[g] == outputs[g];
    total += right ? spec.r() : spec.w();
  }
  return total;
}

double cost(const ProblemSpec& spec, const ParsedInput& parsed, const GuardianOutputs& outputs,
            const FunctionOracle& f) {
  const BitString targets = guardian_targets(spec, suffix_parities(spec, parsed, f));
  return block_cost(spec, targets, outputs.bits);
}

double cost(const ProblemSpec& spec, const ParsedInput& parsed, const GuardianOutputs& outputs) {
  return cost(spec, parsed, outputs, spec.function());
}

SegmentMatrix generate_segments(const ProblemSpec& spec, Rng& rng, std::optional<std::int64_t> pinned_v) {
  const FunctionOracle& f = spec.function();
  SegmentMatrix segments(static_cast<std::size_t>(spec.lambda()));
  for (auto& row : segments) {
    for (std::size_t len : spec.m()) {
      if (f.kind() == FunctionKind::kPartialMod) {
        const PartialModSpec pm{f.s_mod()};
        std::int64_t v = 0;
        if (pinned_v) {
          v = *pinned_v;
        } else {
          const std::int64_t v_max = partial_mod_v_max(pm, len);
          if (v_max < 2)
            throw Infeasible("segment length " + std::to_string(len) + " admits no PartialMOD input");
          v = rng.uniform_int(2, v_max);
        }
        row.push_back(gen_partial_mod_input(pm, len, v, rng));
      } else {
        BitString x(len);
        for (Bit& b : x) b = static_cast<Bit>(rng.next() >> 63);
        row.push_back(std::move(x));
      }
    }
  }
  return segments;
}

double opt_cost(const ProblemSpec& spec) { return spec.t() * spec.r(); }

}  // namespace bhlab
