#include "bhlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "bhlab/errors.hpp"

namespace bhlab {

std::string to_string(ExpectationMethod method) {
  switch (method) {
    case ExpectationMethod::kClosed:
      return "closed";
    case ExpectationMethod::kExact:
      return "exact";
    case ExpectationMethod::kMonteCarlo:
      return "mc";
  }
  return "?";
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in [0, 0.5)");
}

}  // namespace

double closed_form_expected_cost(int t, int u, double epsilon, double r, double w) {
  check_epsilon(epsilon);
  if (t < 1 || u < 1) throw DomainError("t and u must be positive");
  const double v = std::pow(1.0 - 2.0 * epsilon, u);
  double geometric = 0.0;  // (v^t - v) / (v - 1)
  double power = 1.0;
  for (int i = 1; i < t; ++i) {
    power *= v;
    geometric += power;
  }
  const double right_blocks = 0.5 * std::pow(1.0 - epsilon, u - 1) * (t + 1 + geometric);
  return right_blocks * (r - w) + t * w;
}

double parity_confidence(int j, double epsilon) {
  check_epsilon(epsilon);
  if (j < 1) throw DomainError("guardian index must be at least 1");
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f = f * (1.0 - 2.0 * epsilon) + epsilon;
  return f;
}

ExpectationResult exact_expected_cost(const AlgorithmFactory& factory, const ProblemSpec& spec,
                                      const InputWord& word, const AdviceOracle& advice,
                                      std::size_t branch_limit) {
  auto alg = factory();
  BranchWalker walker;
  std::vector<double> weighted;
  double total_probability = 0.0;
  do {
    if (weighted.size() >= branch_limit)
      throw BranchLimitExceeded("more than " + std::to_string(branch_limit) + " branches");
    const RunTrace trace = run_online(*alg, spec, word, advice, walker);
    weighted.push_back(walker.path_probability() * trace.cost);
    total_probability += walker.path_probability();
  } while (walker.advance());
  if (std::abs(total_probability - 1.0) > 1e-9)
    throw std::logic_error("branch probabilities sum to " + std::to_string(total_probability));
  ExpectationResult result;
  result.method = ExpectationMethod::kExact;
  result.value = pairwise_sum(weighted);
  result.branches = weighted.size();
  return result;
}

ExpectationResult monte_carlo_cost(const AlgorithmFactory& factory, const ProblemSpec& spec,
                                   const InputWord& word, const AdviceOracle& advice, std::size_t trials,
                                   std::uint64_t seed, unsigned jobs) {
  if (trials == 0) throw DomainError("Monte Carlo needs at least one trial");
  // Parse and advise once; every trial sees the same input.
  const ParsedInput parsed = parse_input(spec, word);
  const BitString fixed_advice = advice(spec, parsed);
  const AdviceOracle replay = [&fixed_advice](const ProblemSpec&, const ParsedInput&) { return fixed_advice; };

  std::vector<double> costs(trials);
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(trials, 256))));
  auto worker = [&](std::size_t begin, std::size_t end) {
    auto alg = factory();
    for (std::size_t i = begin; i < end; ++i) {
      SampledChoices choices(trial_seed(seed, i));
      costs[i] = run_online(*alg, spec, word, replay, choices).cost;
    }
  };
  if (jobs == 1) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    const std::size_t chunk = (trials + jobs - 1) / jobs;
    for (unsigned n = 0; n < jobs; ++n) {
      const std::size_t begin = std::min(trials, n * chunk);
      const std::size_t end = std::min(trials, begin + chunk);
      pool.emplace_back([&, n, begin, end] {
        try {
          worker(begin, end);
        } catch (...) {
          errors[n] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ExpectationResult result;
  result.method = ExpectationMethod::kMonteCarlo;
  result.trials = trials;
  result.seed = seed;
  result.value = pairwise_sum(costs) / static_cast<double>(trials);
  if (trials > 1) {
    std::vector<double> squares(trials);
    for (std::size_t i = 0; i < trials; ++i) squares[i] = (costs[i] - result.value) * (costs[i] - result.value);
    const double variance = pairwise_sum(squares) / static_cast<double>(trials - 1);
    result.std_error = std::sqrt(variance / static_cast<double>(trials));
  }
  return result;
}

double competitive_ratio(double expected_cost, const ProblemSpec& spec) {
  if (expected_cost < 0.0) throw DomainError("expected cost must be nonnegative");
  return expected_cost / opt_cost(spec);
}

AdviceBoundParams AdviceBoundParams::from(const ProblemSpec& spec, int b) {
  if (b < 0) throw DomainError("advice length must be nonnegative");
  AdviceBoundParams p;
  p.b = b;
  p.u = spec.block_length();
  p.h = b / p.u;
  p.z = b - p.h * p.u;
  p.delta_z = p.z != 0 ? 1 : 0;
  return p;
}

double det_advice_bound(const ProblemSpec& spec, int b) {
  const AdviceBoundParams p = AdviceBoundParams::from(spec, b);
  const int t = spec.t();
  const int h = std::min(p.h, t);
  return (h * spec.r() + (t - h) * spec.w()) / (t * spec.r());
}

double rand_advice_bound(const ProblemSpec& spec, int b) {
  const AdviceBoundParams p = AdviceBoundParams::from(spec, b);
  const int t = spec.t();
  const double r = spec.r();
  const double w = spec.w();
  if (p.h >= t) return 1.0;
  const double partial = std::ldexp(1.0, p.z - p.u);  // 2^(z-u)
  const double blind = std::ldexp(1.0, -p.u);         // 2^-u
  const double total = p.h * r + p.delta_z * (partial * r + (1.0 - partial) * w) +
                       (t - p.h - p.delta_z) * (blind * r + (1.0 - blind) * w);
  return total / (t * r);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace bhlab

namespace bhlab {

std::optional<double> closed_form_for(std::string_view alg_id, const ProblemSpec& spec, double epsilon) {
  const double t = spec.t();
  if (alg_id == "qalg-a") return t * spec.r();
  if (alg_id == "qalg-b" || alg_id == "ibh") return t * (spec.r() + spec.w()) / 2.0;
  if (alg_id == "ralg-a")
    return closed_form_expected_cost(spec.t(), spec.block_length(), epsilon, spec.r(), spec.w());
  return std::nullopt;
}

}  // namespace bhlab
