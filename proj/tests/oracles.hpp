#pragma once

// Reference computations used only by tests. Nothing here calls into the
// library's algorithms or analysis code.

#include <cmath>
#include <cstdint>
#include <vector>

namespace bhlab::testing {

// Expected cost of the single-advice-bit algorithm with an eps-noisy
// subroutine, by enumerating every error pattern of the k - 1 prisoners
// whose value reaches some answer. Guardian j (1-based) is wrong iff an odd
// number of prisoners 1..j-1 erred.
inline double error_pattern_expected_cost(int t, int u, double eps, double r, double w) {
  const int k = t * u;
  const int used = k - 1;
  double expected = 0.0;
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << used); ++pattern) {
    int errors = 0;
    double weight = 1.0;
    std::vector<bool> wrong(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      wrong[static_cast<std::size_t>(j)] = (errors % 2) == 1;
      if (j < used) {
        const bool err = (pattern >> j) & 1U;
        weight *= err ? eps : 1.0 - eps;
        errors += err ? 1 : 0;
      }
    }
    double cost = 0.0;
    for (int block = 0; block < t; ++block) {
      bool right = true;
      for (int j = block * u; j < (block + 1) * u; ++j) right = right && !wrong[static_cast<std::size_t>(j)];
      cost += right ? r : w;
    }
    expected += weight * cost;
  }
  return expected;
}

// 0.5 ((1 - 2 eps)^(j-1) + 1).
inline double parity_confidence_closed(int j, double eps) { return 0.5 * (std::pow(1.0 - 2.0 * eps, j - 1) + 1.0); }

}  // namespace bhlab::testing
