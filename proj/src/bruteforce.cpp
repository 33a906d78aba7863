#include "bhlab/bruteforce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "bhlab/errors.hpp"

namespace bhlab {

namespace {

// Canonical segments for one prisoner slot.
std::vector<BitString> segment_choices(const FunctionOracle& f, std::size_t m, std::int64_t v_max) {
  std::vector<BitString> out;
  if (f.kind() == FunctionKind::kPartialMod) {
    const PartialModSpec pm{f.s_mod()};
    const std::int64_t top = std::min(v_max, partial_mod_v_max(pm, m));
    const std::size_t block = std::size_t{1} << f.s_mod();
    for (std::int64_t v = 2; v <= top; ++v) {
      BitString x(m, 0);
      std::fill_n(x.begin(), static_cast<std::size_t>(v) * block, Bit{1});
      out.push_back(std::move(x));
    }
    return out;
  }
  if (m > 20) throw SpaceTooLarge("segment length " + std::to_string(m) + " too long to scan");
  bool seen[2] = {false, false};
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m) && !(seen[0] && seen[1]); ++code) {
    BitString x(m);
    for (std::size_t n = 0; n < m; ++n) x[n] = static_cast<Bit>((code >> (m - 1 - n)) & 1U);
    const Bit value = f(x);
    if (!seen[value]) {
      seen[value] = true;
      out.push_back(std::move(x));
    }
  }
  return out;
}

}  // namespace

std::vector<ParsedInput> enumerate_inputs(const ProblemSpec& spec, std::int64_t v_max, std::size_t cap) {
  const auto lambda = static_cast<std::size_t>(spec.lambda());
  const auto k = static_cast<std::size_t>(spec.k());
  std::vector<std::vector<BitString>> choices;  // per prisoner slot
  for (std::size_t len : spec.m()) choices.push_back(segment_choices(spec.function(), len, v_max));

  double space = 1.0;
  for (std::size_t j = 0; j < lambda; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (choices[i].empty())
        throw Infeasible("segment " + std::to_string(i + 1) + " admits no input under the promise");
      space *= static_cast<double>(choices[i].size());
    }
  }
  if (space > static_cast<double>(cap))
    throw SpaceTooLarge("input space of " + std::to_string(space) + " exceeds cap " + std::to_string(cap));

  std::vector<ParsedInput> inputs;
  std::vector<std::size_t> digit(lambda * k, 0);
  for (;;) {
    SegmentMatrix segments(lambda, std::vector<BitString>(k));
    for (std::size_t j = 0; j < lambda; ++j)
      for (std::size_t i = 0; i < k; ++i) segments[j][i] = choices[i][digit[j * k + i]];
    inputs.push_back(parse_input(spec, encode_input(spec, segments)));
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == choices[pos % k].size()) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  return inputs;
}

std::vector<TableAlgorithm> canonical_tables(std::size_t states, double table_cap) {
  if (states < 1) throw DomainError("need at least one state");
  const double s = static_cast<double>(states);
  const double nominal = std::pow(s, 3 * s) * std::pow(2.0, 3 * s);
  if (nominal > table_cap)
    throw SpaceTooLarge("table space S^(3S) 2^(3S) = " + std::to_string(nominal) + " exceeds cap " +
                        std::to_string(table_cap));

  std::vector<TableAlgorithm> tables;
  std::vector<TableAlgorithm::Row> trans(states);
  // Fill slot (q, a) = slot / 3; `used` states discovered so far.
  auto emit = [&](std::size_t used) {
    std::vector<TableAlgorithm::Row> t(trans.begin(), trans.begin() + static_cast<std::ptrdiff_t>(used));
    for (std::uint32_t out = 0; out < (1U << used); ++out) {
      std::vector<TableAlgorithm::Row> outputs(used, TableAlgorithm::Row{0, 0, 0});
      for (std::size_t q = 0; q < used; ++q) outputs[q][kGuardian] = static_cast<std::uint8_t>((out >> q) & 1U);
      tables.emplace_back(used, t, std::move(outputs));
    }
  };
  auto fill = [&](auto&& self, std::size_t slot, std::size_t used) -> void {
    const std::size_t q = slot / 3;
    if (q >= used) {
      emit(used);
      return;
    }
    const std::size_t a = slot % 3;
    const std::size_t top = std::min(used + 1, states);
    for (std::size_t target = 0; target < top; ++target) {
      trans[q][a] = static_cast<std::uint8_t>(target);
      self(self, slot + 1, target == used ? used + 1 : used);
    }
  };
  fill(fill, 0, 1);
  return tables;
}

namespace {

struct CompiledInput {
  std::vector<Symbol> symbols;
  BitString targets;
};

std::vector<CompiledInput> compile(const ProblemSpec& spec, const std::vector<ParsedInput>& inputs) {
  std::vector<CompiledInput> out;
  out.reserve(inputs.size());
  for (const auto& parsed : inputs) {
    CompiledInput c;
    c.symbols = encode_input(spec, parsed.segments).symbols;
    c.targets = guardian_targets(spec, suffix_parities(spec, parsed, spec.function()));
    out.push_back(std::move(c));
  }
  return out;
}

double table_cost(const ProblemSpec& spec, const TableAlgorithm& table, const CompiledInput& input,
                  BitString& scratch) {
  scratch.clear();
  std::uint8_t state = 0;
  const auto& trans = table.transitions();
  const auto& outs = table.outputs();
  for (Symbol s : input.symbols) {
    if (s == kGuardian) scratch.push_back(outs[state][kGuardian]);
    state = trans[state][s];
  }
  return block_cost(spec, input.targets, scratch);
}

// costs[table][input], computed in parallel over tables.
std::vector<std::vector<double>> cost_matrix(const ProblemSpec& spec, const std::vector<TableAlgorithm>& tables,
                                             const std::vector<CompiledInput>& inputs, unsigned jobs) {
  std::vector<std::vector<double>> costs(tables.size(), std::vector<double>(inputs.size()));
  auto worker = [&](std::size_t begin, std::size_t end) {
    BitString scratch;
    for (std::size_t n = begin; n < end; ++n)
      for (std::size_t i = 0; i < inputs.size(); ++i) costs[n][i] = table_cost(spec, tables[n], inputs[i], scratch);
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, 64));
  if (jobs == 1 || tables.size() < 2 * jobs) {
    worker(0, tables.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (tables.size() + jobs - 1) / jobs;
    for (unsigned n = 0; n < jobs; ++n) {
      const std::size_t begin = std::min(tables.size(), n * chunk);
      const std::size_t end = std::min(tables.size(), begin + chunk);
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return costs;
}

}  // namespace

SearchResult best_deterministic_ratio(const ProblemSpec& spec, std::size_t states, SearchOptions options) {
  const std::vector<TableAlgorithm> tables = canonical_tables(states, options.table_cap);
  const auto inputs = compile(spec, enumerate_inputs(spec, options.v_max, options.input_cap));
  const auto costs = cost_matrix(spec, tables, inputs, options.jobs);

  SearchResult result;
  result.inputs = inputs.size();
  result.tables = tables.size();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t n = 0; n < tables.size(); ++n) {
    const double worst = *std::max_element(costs[n].begin(), costs[n].end());
    if (worst < best) {
      best = worst;
      best_index = n;
    }
  }
  result.worst_cost = best;
  result.ratio = best / opt_cost(spec);
  result.witness.push_back(tables[best_index]);
  return result;
}

SearchResult best_advice_ratio(const ProblemSpec& spec, std::size_t states, int b, SearchOptions options) {
  if (b < 0) throw DomainError("advice length must be nonnegative");
  if (b == 0) return best_deterministic_ratio(spec, states, options);
  if (b >= 2) throw SpaceTooLarge("advice search covers b <= 1 only");

  const std::vector<TableAlgorithm> tables = canonical_tables(states, options.table_cap);
  const auto inputs = compile(spec, enumerate_inputs(spec, options.v_max, options.input_cap));
  if (inputs.size() > kMaxAdviceInputs)
    throw SpaceTooLarge(std::to_string(inputs.size()) + " inputs; the advice search handles at most " +
                        std::to_string(kMaxAdviceInputs));
  const auto costs = cost_matrix(spec, tables, inputs, options.jobs);

  // Distinct cost vectors, each with its first table.
  std::map<std::vector<double>, std::size_t> distinct;
  for (std::size_t n = 0; n < tables.size(); ++n) distinct.emplace(costs[n], n);

  const std::size_t count = inputs.size();
  const std::size_t masks = std::size_t{1} << count;
  std::vector<double> group_best(masks, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> group_table(masks, 0);
  group_best[0] = 0.0;
  std::vector<double> worst(masks);
  for (const auto& [vec, n] : distinct) {
    worst[0] = 0.0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
      const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
      worst[mask] = std::max(worst[mask & (mask - 1)], vec[low]);
      if (worst[mask] < group_best[mask]) {
        group_best[mask] = worst[mask];
        group_table[mask] = n;
      }
    }
  }

  SearchResult result;
  result.inputs = count;
  result.tables = tables.size();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_mask = 0;
  const std::size_t full = masks - 1;
  for (std::size_t mask = 0; mask < masks; ++mask) {
    const double value = std::max(group_best[mask], group_best[full & ~mask]);
    if (value < best) {
      best = value;
      best_mask = mask;
    }
  }
  result.worst_cost = best;
  result.ratio = best / opt_cost(spec);
  result.partition = best_mask;
  result.witness.push_back(tables[group_table[full & ~best_mask]]);
  result.witness.push_back(tables[group_table[best_mask]]);
  return result;
}

std::size_t count_subfunctions(const FunctionOracle& f, std::size_t m, std::size_t u) {
  if (!f.is_total()) throw DomainError("subfunction counting needs a total function");
  if (m > 16) throw SpaceTooLarge("subfunction counting supports m <= 16");
  if (u < 1 || u >= m) throw DomainError("need 1 <= u < m");
  const std::size_t rest = m - u;
  std::set<std::vector<Bit>> seen;
  BitString x(m);
  for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << u); ++prefix) {
    for (std::size_t n = 0; n < u; ++n) x[n] = static_cast<Bit>((prefix >> (u - 1 - n)) & 1U);
    std::vector<Bit> truth(std::size_t{1} << rest);
    for (std::uint64_t suffix = 0; suffix < truth.size(); ++suffix) {
      for (std::size_t n = 0; n < rest; ++n) x[u + n] = static_cast<Bit>((suffix >> (rest - 1 - n)) & 1U);
      truth[suffix] = f(x);
    }
    seen.insert(std::move(truth));
  }
  return seen.size();
}

}  // namespace bhlab
