#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bhlab/algorithms.hpp"
#include "bhlab/problem.hpp"

namespace bhlab {

enum class ExpectationMethod { kClosed, kExact, kMonteCarlo };

std::string to_string(ExpectationMethod method);

struct ExpectationResult {
  double value = 0.0;
  ExpectationMethod method = ExpectationMethod::kClosed;
  double std_error = 0.0;        // Monte Carlo only
  std::size_t branches = 0;      // exact only
  std::size_t trials = 0;        // Monte Carlo only
  std::uint64_t seed = 0;        // Monte Carlo only
};

// Expected cost of the single-advice-bit algorithm whose prisoner
// subroutine errs independently with probability epsilon:
//   0.5 (1-eps)^(u-1) (t + 1 + sum_{i=1}^{t-1} v^i) (r - w) + t w,
// v = (1 - 2 eps)^u. The geometric sum is accumulated directly, which also
// covers v = 1. Throws DomainError unless 0 <= eps < 0.5.
double closed_form_expected_cost(int t, int u, double epsilon, double r, double w);

// Probability that the number of subroutine errors before guardian j is
// even, by the recurrence F(1) = 1, F(j) = F(j-1)(1 - 2 eps) + eps.
double parity_confidence(int j, double epsilon);

inline constexpr std::size_t kDefaultBranchLimit = std::size_t{1} << 22;

// Walks every branch of the algorithm's choice tree on one input and
// averages the leaf costs by path probability. Throws BranchLimitExceeded.
ExpectationResult exact_expected_cost(const AlgorithmFactory& factory, const ProblemSpec& spec,
                                      const InputWord& word, const AdviceOracle& advice,
                                      std::size_t branch_limit = kDefaultBranchLimit);

// Mean cost over `trials` independent runs; trial i uses
// SampledChoices(trial_seed(seed, i)). Results are identical for any
// `jobs`. Throws DomainError if trials == 0.
ExpectationResult monte_carlo_cost(const AlgorithmFactory& factory, const ProblemSpec& spec,
                                   const InputWord& word, const AdviceOracle& advice, std::size_t trials,
                                   std::uint64_t seed, unsigned jobs = 1);

// Strict ratio (additive constant 0) against opt_cost.
double competitive_ratio(double expected_cost, const ProblemSpec& spec);

struct AdviceBoundParams {
  int b = 0;
  int u = 1;      // guardians per block
  int h = 0;      // fully advised blocks, floor(b / u)
  int z = 0;      // leftover advised guardians, b - h u
  int delta_z = 0;

  static AdviceBoundParams from(const ProblemSpec& spec, int b);
};

// (h r + (t - h) w) / (t r) with h = min(floor(b / u), t).
double det_advice_bound(const ProblemSpec& spec, int b);

// (h r + d (2^(z-u) r + (1 - 2^(z-u)) w) + (t - h - d)(2^-u r + (1 - 2^-u) w)) / (t r),
// d = [z != 0]; 1 once b covers every block.
double rand_advice_bound(const ProblemSpec& spec, int b);

// Pairwise summation; the order of terms is fixed by their indices.
double pairwise_sum(std::span<const double> values);

}  // namespace bhlab

namespace bhlab {

// Expected cost known in closed form for the named algorithm on any
// promise-respecting input: qalg-a t r; qalg-b and ibh t (r + w) / 2;
// ralg-a closed_form_expected_cost. Empty for table algorithms.
std::optional<double> closed_form_for(std::string_view alg_id, const ProblemSpec& spec, double epsilon);

}  // namespace bhlab
