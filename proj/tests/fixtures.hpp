#pragma once

#include <cstdint>
#include <vector>

#include "tardy/core.hpp"

namespace fixtures {

// Three weight-agreeable jobs sharing one due date; best pair {0,1} fits [0,7].
inline tardy::Instance e1() {
  return tardy::Instance({{3, 0, 7, 3}, {4, 0, 7, 4}, {5, 0, 7, 5}});
}

// Two releases; the heavy job 2 alone beats scheduling jobs 0 and 1.
inline tardy::Instance e2() {
  return tardy::Instance({{2, 0, 2, 1}, {2, 2, 4, 1}, {3, 0, 4, 3}});
}

/// Tiny deterministic RNG (xorshift*), independent of library distributions
/// so test corpora are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [lo, hi] inclusive.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// Random instance for property tests. Values are small enough for the
/// exact oracle and all solvers.
inline tardy::Instance random_small(Rng& rng, int max_n = 7, tardy::Int max_p = 5,
                                    tardy::Int horizon = 25) {
  int n = static_cast<int>(rng.uniform(1, max_n));
  std::vector<tardy::Job> jobs;
  for (int j = 0; j < n; ++j) {
    tardy::Job job;
    job.p = rng.uniform(1, max_p);
    job.r = rng.uniform(0, horizon * 2 / 3);
    job.d = rng.uniform(0, horizon);
    job.w = rng.uniform(0, 9);
    jobs.push_back(job);
  }
  return tardy::Instance(jobs);
}

}  // namespace fixtures
