#include "bhlab/choice.hpp"

#include <stdexcept>

#include "bhlab/errors.hpp"

namespace bhlab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return mix64(seed ^ mix64(trial + 0x9e3779b97f4a7c15ULL));
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Rejection sampling on the largest multiple of span.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % span);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

std::size_t first_possible(std::span<const double> weights) {
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > kNegligibleWeight) return i;
  return weights.size();
}

std::size_t SampledChoices::choose(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights)
    if (w > kNegligibleWeight) total += w;
  if (total <= 0.0) throw std::logic_error("choose: no possible outcome");
  const double target = rng_.uniform01() * total;
  double acc = 0.0;
  std::size_t last = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= kNegligibleWeight) continue;
    acc += weights[i];
    last = i;
    if (target < acc) return i;
  }
  return last;
}

std::size_t FirstChoices::choose(std::span<const double> weights) {
  const std::size_t i = first_possible(weights);
  if (i == weights.size()) throw std::logic_error("choose: no possible outcome");
  return i;
}

std::size_t ReplayChoices::choose(std::span<const double> weights) {
  if (next_ >= indices_.size()) throw ReplayExhausted("choice log exhausted");
  const std::size_t i = indices_[next_++];
  if (i >= weights.size() || weights[i] <= kNegligibleWeight)
    throw ReplayExhausted("choice log does not match this run");
  return i;
}

std::size_t BranchWalker::choose(std::span<const double> weights) {
  if (depth_ == frames_.size()) {
    Frame frame;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > kNegligibleWeight) {
        frame.options.push_back(i);
        frame.weights.push_back(weights[i]);
      }
    }
    if (frame.options.empty()) throw std::logic_error("choose: no possible outcome");
    frames_.push_back(std::move(frame));
  }
  const Frame& frame = frames_[depth_++];
  probability_ *= frame.weights[frame.cursor];
  return frame.options[frame.cursor];
}

bool BranchWalker::advance() {
  // A shorter replay than the recorded path leaves stale frames behind.
  frames_.resize(depth_);
  while (!frames_.empty() && frames_.back().cursor + 1 >= frames_.back().options.size())
    frames_.pop_back();
  depth_ = 0;
  probability_ = 1.0;
  if (frames_.empty()) return false;
  ++frames_.back().cursor;
  return true;
}

}  // namespace bhlab
