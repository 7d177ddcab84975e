#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tardy/core.hpp"
#include "tardy/errors.hpp"

namespace tardy {

/// Items to pack into `bins` bins of size `capacity`.
struct BinPackingInstance {
  std::vector<Int> sizes;
  Int bins = 1;
  Int capacity = 1;
};

namespace detail {

inline void check_bin_packing(const BinPackingInstance& bp) {
  if (bp.bins < 1) throw input_error("bin packing needs at least one bin");
  if (bp.capacity < 1) throw input_error("bin capacity must be >= 1");
  if (bp.sizes.empty()) throw input_error("bin packing needs at least one item");
  for (std::size_t i = 0; i < bp.sizes.size(); ++i) {
    if (bp.sizes[i] < 1) {
      throw input_error("item " + std::to_string(i) + ": size must be >= 1");
    }
  }
}

}  // namespace detail

/// Scheduling embedding of bin packing. Item jobs share release date zero
/// and one late due date; between consecutive bin windows sits a unit
/// separator job whose window is exactly its own length, so it nails the
/// single slot it owns. All jobs early <=> the items fit into the bins.
inline Instance from_bin_packing(const BinPackingInstance& bp) {
  detail::check_bin_packing(bp);
  std::vector<Job> jobs;
  jobs.reserve(bp.sizes.size() + static_cast<std::size_t>(bp.bins) - 1);
  Int due = bp.bins * bp.capacity + bp.bins - 1;
  for (Int size : bp.sizes) jobs.push_back({size, 0, due, 1});
  for (Int i = 1; i < bp.bins; ++i) {
    jobs.push_back({1, i * bp.capacity + i - 1, i * bp.capacity + i, 1});
  }
  return Instance(std::move(jobs));
}

/// Knapsack as scheduling: one shared window [0, capacity], item value as
/// weight. Early selections are exactly the fitting knapsack subsets.
inline Instance from_knapsack(const std::vector<Int>& values, const std::vector<Int>& sizes,
                              Int capacity) {
  if (values.size() != sizes.size()) {
    throw input_error("knapsack needs one value per size; got " +
                      std::to_string(values.size()) + " values and " +
                      std::to_string(sizes.size()) + " sizes");
  }
  if (values.empty()) throw input_error("knapsack needs at least one item");
  if (capacity < 0) throw input_error("knapsack capacity must be >= 0");
  std::vector<Job> jobs;
  jobs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    jobs.push_back({sizes[i], 0, capacity, values[i]});
  }
  return Instance(std::move(jobs));
}

/// Partition as bin packing with two bins of half the total each; the
/// numbers split evenly <=> every generated job can run early.
inline Instance from_partition(const std::vector<Int>& numbers) {
  Int total = 0;
  for (Int x : numbers) total += x;
  if (total % 2 != 0) {
    throw input_error("partition numbers must have an even sum; got " + std::to_string(total));
  }
  return from_bin_packing({numbers, 2, total / 2});
}

/// Independent feasibility oracle for the reduction tests: exhaustive
/// item-to-bin assignment, largest items first, skipping bins that look
/// identical to one already tried in the same step.
inline bool bin_packing_feasible(const BinPackingInstance& bp) {
  detail::check_bin_packing(bp);
  Int total = std::accumulate(bp.sizes.begin(), bp.sizes.end(), Int{0});
  if (total > bp.bins * bp.capacity) return false;

  std::vector<Int> sizes = bp.sizes;
  std::sort(sizes.begin(), sizes.end(), std::greater<Int>());
  if (sizes.front() > bp.capacity) return false;

  std::vector<Int> loads(static_cast<std::size_t>(bp.bins), 0);
  std::function<bool(std::size_t)> place = [&](std::size_t item) {
    if (item == sizes.size()) return true;
    for (std::size_t bin = 0; bin < loads.size(); ++bin) {
      if (bin > 0 && loads[bin] == loads[bin - 1]) continue;
      if (loads[bin] + sizes[item] > bp.capacity) continue;
      loads[bin] += sizes[item];
      if (place(item + 1)) return true;
      loads[bin] -= sizes[item];
    }
    return false;
  };
  return place(0);
}

/// Request for a random instance with exact distinct-value counts.
struct RandomSpec {
  std::uint64_t seed = 1;
  std::size_t n = 1;
  std::size_t distinct_p = 1;
  std::size_t distinct_w = 1;
  std::size_t distinct_r = 1;
  std::size_t distinct_d = 1;
  Int max_p = 5;
  Int horizon = 20;
};

namespace detail {

/// Same xorshift* generator on every platform, so corpora keyed by seed are
/// byte-identical regardless of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  Int uniform(Int lo, Int hi) {
    return lo + static_cast<Int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// `count` distinct values from [lo, hi], then a surjective assignment onto
/// n slots: each value appears at least once, positions shuffled.
inline std::vector<Int> surjective_pool(Rng& rng, std::size_t n, std::size_t count, Int lo,
                                        Int hi, const std::string& field) {
  if (count < 1 || count > n) {
    throw input_error(field + ": requested " + std::to_string(count) +
                      " distinct values for " + std::to_string(n) + " jobs");
  }
  if (static_cast<std::uint64_t>(hi - lo + 1) < count) {
    throw input_error(field + ": cannot draw " + std::to_string(count) +
                      " distinct values from [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  std::set<Int> pool;
  while (pool.size() < count) pool.insert(rng.uniform(lo, hi));
  std::vector<Int> values(pool.begin(), pool.end());
  std::vector<Int> assigned(n);
  for (std::size_t i = 0; i < n; ++i) {
    assigned[i] = i < count ? values[i]
                            : values[static_cast<std::size_t>(
                                  rng.uniform(0, static_cast<Int>(count) - 1))];
  }
  for (std::size_t i = n; i > 1; --i) {
    std::swap(assigned[i - 1],
              assigned[static_cast<std::size_t>(rng.uniform(0, static_cast<Int>(i) - 1))]);
  }
  return assigned;
}

}  // namespace detail

/// Seed-deterministic instance whose stats() match the request exactly.
inline Instance random_instance(const RandomSpec& spec) {
  if (spec.n < 1) throw input_error("a random instance needs at least one job");
  if (spec.max_p < 1) throw input_error("max_p must be >= 1");
  if (spec.horizon < 0) throw input_error("horizon must be >= 0");
  detail::Rng rng(spec.seed);
  std::vector<Int> ps = detail::surjective_pool(rng, spec.n, spec.distinct_p, 1, spec.max_p,
                                                "processing times");
  std::vector<Int> ws =
      detail::surjective_pool(rng, spec.n, spec.distinct_w, 0, spec.horizon, "weights");
  std::vector<Int> rs =
      detail::surjective_pool(rng, spec.n, spec.distinct_r, 0, spec.horizon, "release dates");
  std::vector<Int> ds =
      detail::surjective_pool(rng, spec.n, spec.distinct_d, 0, spec.horizon, "due dates");
  std::vector<Job> jobs(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) jobs[i] = {ps[i], rs[i], ds[i], ws[i]};
  return Instance(std::move(jobs));
}

}  // namespace tardy
