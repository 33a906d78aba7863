#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bhlab/algorithms.hpp"
#include "bhlab/problem.hpp"

namespace bhlab {

inline constexpr std::size_t kDefaultInputCap = std::size_t{1} << 20;
inline constexpr double kDefaultTableCap = 16777216.0;  // 2^24 nominal tables
inline constexpr std::size_t kMaxAdviceInputs = 16;

// The adversary's input space: one canonical segment per achievable choice
// on every segment, all combinations. For PartialMOD the choices are
// v in {2, ..., min(v_max, floor(m_i / 2^s))} and the representative has
// its v * 2^s ones first; for total functions they are the lexicographically
// first strings realising each function value. Throws SpaceTooLarge when
// the product exceeds `cap`, Infeasible when a segment has no choice.
std::vector<ParsedInput> enumerate_inputs(const ProblemSpec& spec, std::int64_t v_max,
                                          std::size_t cap = kDefaultInputCap);

struct SearchOptions {
  std::int64_t v_max = 3;
  std::size_t input_cap = kDefaultInputCap;
  // Bound on S^(3S) * 2^(3S), the size of the unreduced table space.
  double table_cap = kDefaultTableCap;
  unsigned jobs = 1;
};

struct SearchResult {
  double ratio = 0.0;      // worst-case cost / (t r) of the best algorithm
  double worst_cost = 0.0;
  // One table, or one per advice value.
  std::vector<TableAlgorithm> witness;
  // Inputs routed to advice value 1 (bit i = input i); advice search only.
  std::uint64_t partition = 0;
  std::size_t inputs = 0;
  std::size_t tables = 0;  // canonical tables evaluated
};

// Every deterministic table algorithm with at most `states` reachable
// states, one per relabelling class (states numbered in breadth-first order
// of discovery from state 0). Only answers on the marker symbol are
// enumerated; the other output entries never reach the output.
std::vector<TableAlgorithm> canonical_tables(std::size_t states, double table_cap = kDefaultTableCap);

// min over tables of max over enumerate_inputs of cost, divided by t r.
SearchResult best_deterministic_ratio(const ProblemSpec& spec, std::size_t states, SearchOptions options = {});

// Adviser splits the inputs into two groups and names the group with one
// bit; each group gets its own table. Minimises the worst-case ratio over
// all bipartitions. b = 0 falls back to best_deterministic_ratio; b >= 2 is
// not searched (SpaceTooLarge). At most kMaxAdviceInputs inputs.
SearchResult best_advice_ratio(const ProblemSpec& spec, std::size_t states, int b, SearchOptions options = {});

// Number of distinct subfunctions of a total f on m bits obtained by fixing
// the first u bits. Needs m <= 16 and 1 <= u < m.
std::size_t count_subfunctions(const FunctionOracle& f, std::size_t m, std::size_t u);

}  // namespace bhlab
