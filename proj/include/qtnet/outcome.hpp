#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qtnet/common.hpp"

namespace qtnet {

// Supplies measurement outcomes: either sampled from one seeded generator per
// session (inverse CDF over ascending outcome indices) or forced from a fixed
// list for branch-by-branch verification.
class OutcomeSource {
 public:
  static OutcomeSource seeded(std::uint64_t seed) {
    OutcomeSource s;
    s.forced_mode_ = false;
    s.seed_ = seed;
    s.rng_.seed(seed);
    return s;
  }

  static OutcomeSource forced(std::vector<std::size_t> outcomes) {
    OutcomeSource s;
    s.forced_mode_ = true;
    s.queue_ = std::move(outcomes);
    return s;
  }

  bool forced_mode() const { return forced_mode_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t remaining_forced() const { return queue_.size() - next_; }

  std::size_t sample(const std::vector<double>& probabilities) {
    if (probabilities.empty()) throw std::invalid_argument("sample: no outcomes");
    if (forced_mode_) {
      if (next_ >= queue_.size()) throw std::invalid_argument("forced outcome list exhausted");
      std::size_t o = queue_[next_++];
      if (o >= probabilities.size()) throw std::invalid_argument("forced outcome out of range");
      if (probabilities[o] < min_forced_probability)
        throw forced_outcome_error("forced outcome " + std::to_string(o) +
                                   " has probability " + format_double(probabilities[o]) +
                                   ", below " + format_double(min_forced_probability));
      return o;
    }
    double u = uniform();
    double cum = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
      cum += probabilities[k];
      if (u < cum) return k;
    }
    // Floating-point residue: fall back to the last outcome with weight.
    for (std::size_t k = probabilities.size(); k-- > 0;)
      if (probabilities[k] > 0.0) return k;
    return probabilities.size() - 1;
  }

 private:
  OutcomeSource() = default;
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  bool forced_mode_ = false;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
  std::vector<std::size_t> queue_;
  std::size_t next_ = 0;
};

}  // namespace qtnet
