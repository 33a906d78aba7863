#include "bhlab/functions.hpp"

#include <algorithm>
#include <array>

#include "bhlab/errors.hpp"

namespace bhlab {

std::size_t count_ones(BitView x) {
  return static_cast<std::size_t>(std::count(x.begin(), x.end(), Bit{1}));
}

namespace {

std::size_t block_of(PartialModSpec spec) {
  if (spec.s_mod < 0 || spec.s_mod > 40) throw DomainError("PartialMOD exponent out of range");
  return std::size_t{1} << spec.s_mod;
}

}  // namespace

Bit partial_mod_eval(PartialModSpec spec, BitView x) {
  const std::size_t block = block_of(spec);
  const std::size_t ones = count_ones(x);
  if (ones % block != 0)
    throw PromiseViolation("PartialMOD: " + std::to_string(ones) + " ones is not a multiple of " +
                           std::to_string(block));
  const std::size_t v = ones / block;
  if (v < 2) throw PromiseViolation("PartialMOD: v = " + std::to_string(v) + " < 2");
  return static_cast<Bit>(v % 2);
}

std::int64_t partial_mod_v_max(PartialModSpec spec, std::size_t m) {
  return static_cast<std::int64_t>(m / block_of(spec));
}

BitString gen_partial_mod_input(PartialModSpec spec, std::size_t m, std::int64_t v, Rng& rng) {
  if (v < 2) throw DomainError("PartialMOD generator needs v >= 2");
  const std::size_t block = block_of(spec);
  const auto ones = static_cast<std::size_t>(v) * block;
  if (ones > m)
    throw Infeasible("PartialMOD generator: " + std::to_string(ones) + " ones do not fit in length " +
                     std::to_string(m));
  BitString x(m, 0);
  std::fill_n(x.begin(), ones, Bit{1});
  rng.shuffle(x);
  return x;
}

FunctionOracle FunctionOracle::partial_mod(int s_mod) {
  if (s_mod < 0) throw DomainError("PartialMOD exponent must be nonnegative");
  FunctionOracle f(FunctionKind::kPartialMod, "partialmod");
  f.s_mod_ = s_mod;
  return f;
}

FunctionOracle FunctionOracle::parity() { return FunctionOracle(FunctionKind::kXor, "xor"); }

FunctionOracle FunctionOracle::conjunction() { return FunctionOracle(FunctionKind::kAnd, "and"); }

FunctionOracle FunctionOracle::custom(std::string name, std::function<Bit(BitView)> fn) {
  FunctionOracle f(FunctionKind::kCustom, std::move(name));
  f.custom_ = std::make_shared<const std::function<Bit(BitView)>>(std::move(fn));
  return f;
}

Bit FunctionOracle::operator()(BitView x) const {
  switch (kind_) {
    case FunctionKind::kPartialMod:
      return partial_mod_eval(PartialModSpec{s_mod_}, x);
    case FunctionKind::kXor:
      return static_cast<Bit>(count_ones(x) % 2);
    case FunctionKind::kAnd:
      return static_cast<Bit>(std::all_of(x.begin(), x.end(), [](Bit b) { return b == 1; }));
    case FunctionKind::kCustom:
      return (*custom_)(x) ? 1 : 0;
  }
  return 0;
}

nlohmann::json FunctionOracle::to_json() const {
  nlohmann::json j{{"name", name_}};
  if (kind_ == FunctionKind::kPartialMod) j["s"] = s_mod_;
  return j;
}

FunctionOracle FunctionOracle::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw SpecError("function: expected an object with a string \"name\"");
  const auto name = j["name"].get<std::string>();
  if (name == "partialmod") {
    if (!j.contains("s") || !j["s"].is_number_integer())
      throw SpecError("partialmod: integer \"s\" required");
    const int s = j["s"].get<int>();
    if (s < 0) throw SpecError("partialmod: s must be nonnegative");
    return partial_mod(s);
  }
  if (name == "xor") return parity();
  if (name == "and") return conjunction();
  throw SpecError("unknown function \"" + name + "\"");
}

FunctionOracle total_oracle(TotalFunction which, std::size_t m) {
  if (m < 1) throw DomainError("total_oracle: m must be at least 1");
  return which == TotalFunction::kXor ? FunctionOracle::parity() : FunctionOracle::conjunction();
}

NoisyOracle::NoisyOracle(FunctionOracle base, double epsilon) : base_(std::move(base)), epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw DomainError("noise epsilon must lie in [0, 0.5)");
}

Bit NoisyOracle::eval(BitView x, ChoiceSource& choices) const {
  const Bit exact = base_(x);
  const std::array<double, 2> weights{1.0 - epsilon_, epsilon_};
  return choices.choose(weights) == 1 ? static_cast<Bit>(exact ^ 1) : exact;
}

}  // namespace bhlab
