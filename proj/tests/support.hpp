#pragma once

// Generators shared by the property tests.

#include <cstdint>
#include <string_view>
#include <vector>

#include "bhlab/choice.hpp"
#include "bhlab/problem.hpp"

namespace bhlab::testing {

inline BitString bits(std::string_view s) {
  BitString out;
  for (char c : s) out.push_back(static_cast<Bit>(c - '0'));
  return out;
}

inline ProblemSpec plain_spec(int k, int t, std::vector<std::size_t> m, FunctionOracle f, double r = 1,
                              double w = 3) {
  return ProblemSpec(1, k, CostParams{r, w, t}, std::move(m), std::move(f));
}

// A random divisor of k.
inline int random_divisor(Rng& rng, int k) {
  std::vector<int> divisors;
  for (int d = 1; d <= k; ++d)
    if (k % d == 0) divisors.push_back(d);
  return divisors[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(divisors.size()) - 1))];
}

// Plain PartialMOD spec with k <= max_k, s_mod <= max_s, t | k, r = 1, w = 3
// and segment lengths that admit at least v = 2 and v = 3.
inline ProblemSpec random_partial_mod_spec(Rng& rng, int max_k = 10, int max_s = 3) {
  const int k = static_cast<int>(rng.uniform_int(1, max_k));
  const int s = static_cast<int>(rng.uniform_int(0, max_s));
  std::vector<std::size_t> m;
  for (int i = 0; i < k; ++i)
    m.push_back((std::size_t{3} << s) + static_cast<std::size_t>(rng.uniform_int(0, 4)));
  return plain_spec(k, random_divisor(rng, k), std::move(m), FunctionOracle::partial_mod(s));
}

inline InputWord random_word(const ProblemSpec& spec, Rng& rng) {
  return encode_input(spec, generate_segments(spec, rng));
}

}  // namespace bhlab::testing
