#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bhlab {

// Outcomes whose weight is at or below this are treated as impossible.
inline constexpr double kNegligibleWeight = 1e-12;

// SplitMix64 finalizer. Fixed so that per-trial seeds are reproducible
// across platforms and standard library versions.
std::uint64_t mix64(std::uint64_t x);

// Seed for Monte Carlo trial `trial` under master seed `seed`:
// mix64(seed ^ mix64(trial + 0x9e3779b97f4a7c15)).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// Thin wrapper over mt19937_64 with distribution code of our own; the
// std:: distributions are implementation-defined and would break
// bit-reproducibility between toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Index of the first non-negligible weight, or weights.size() if none.
std::size_t first_possible(std::span<const double> weights);

// The single source of randomness for algorithms: measurements, guesses and
// noise flips all call choose(). Implementations sample, replay a log, or
// drive exhaustive enumeration.
class ChoiceSource {
 public:
  virtual ~ChoiceSource() = default;
  // Returns an index i with weights[i] > kNegligibleWeight.
  virtual std::size_t choose(std::span<const double> weights) = 0;
};

class SampledChoices : public ChoiceSource {
 public:
  explicit SampledChoices(std::uint64_t seed) : rng_(seed) {}
  std::size_t choose(std::span<const double> weights) override;

 private:
  Rng rng_;
};

// Always picks the first possible outcome.
class FirstChoices : public ChoiceSource {
 public:
  std::size_t choose(std::span<const double> weights) override;
};

// Replays a recorded sequence of indices.
class ReplayChoices : public ChoiceSource {
 public:
  explicit ReplayChoices(std::vector<std::size_t> indices) : indices_(std::move(indices)) {}
  std::size_t choose(std::span<const double> weights) override;

 private:
  std::vector<std::size_t> indices_;
  std::size_t next_ = 0;
};

// Depth-first walk over every branch of a choice tree. The run is replayed
// from scratch for each leaf:
//
//   BranchWalker walker;
//   do { run(walker); use(walker.path_probability()); } while (walker.advance());
class BranchWalker : public ChoiceSource {
 public:
  std::size_t choose(std::span<const double> weights) override;

  double path_probability() const { return probability_; }
  std::size_t depth() const { return frames_.size(); }
  // Moves to the next unexplored leaf. Returns false when the tree is done.
  bool advance();

 private:
  struct Frame {
    std::vector<std::size_t> options;
    std::vector<double> weights;
    std::size_t cursor = 0;
  };
  std::vector<Frame> frames_;
  std::size_t depth_ = 0;
  double probability_ = 1.0;
};

}  // namespace bhlab
