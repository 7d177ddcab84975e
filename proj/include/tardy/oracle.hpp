#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tardy/core.hpp"
#include "tardy/errors.hpp"

namespace tardy {

/// Sentinel for "this job set cannot be scheduled fully early".
inline constexpr Int kInfeasible = std::numeric_limits<Int>::max();

/// Per-subset results of the exact subset DP.
struct SubsetTable {
  /// finish[S] = earliest time by which all jobs of S can run early
  /// (idle time allowed), or kInfeasible.
  std::vector<Int> finish;
  /// choice[S] = job that runs last in a schedule achieving finish[S]
  /// (smallest index among minimizers), or -1.
  std::vector<int> choice;
};

/// Fills the table for all 2^n subsets. The recurrence tries every job of S
/// last: it then starts at max(finish[S \ {j}], r_j) and must meet d_j.
/// On one machine the execution windows are totally ordered, so some job
/// always finishes last; that makes the recurrence exact.
inline SubsetTable min_completion_table(const Instance& inst) {
  const std::size_t n = inst.size();
  if (n > 24) {
    throw size_error("exact oracle is limited to 24 jobs; got " + std::to_string(n));
  }
  SubsetTable table;
  table.finish.assign(std::size_t{1} << n, kInfeasible);
  table.choice.assign(std::size_t{1} << n, -1);
  table.finish[0] = 0;
  for (std::uint32_t set = 1; set < (std::uint32_t{1} << n); ++set) {
    Int best = kInfeasible;
    int best_job = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(set >> j & 1)) continue;
      Int rest = table.finish[set ^ (std::uint32_t{1} << j)];
      if (rest == kInfeasible) continue;
      const Job& job = inst.job(j);
      Int done = std::max(rest, job.r) + job.p;
      if (done > job.d) continue;
      if (done < best) {
        best = done;
        best_job = static_cast<int>(j);
      }
    }
    table.finish[set] = best;
    table.choice[set] = best_job;
  }
  return table;
}

/// Earliest all-early completion time of exactly this job set,
/// or kInfeasible.
inline Int min_completion(const Instance& inst, std::uint32_t set) {
  if (inst.empty() && set == 0) return 0;
  SubsetTable table = min_completion_table(inst);
  if (set >= table.finish.size()) {
    throw input_error("job set references jobs beyond the instance");
  }
  return table.finish[set];
}

/// Exhaustive optimum: max total weight over subsets that can run fully
/// early, with a witness schedule (ties go to the smallest subset found
/// first in mask order; within a subset the last job is the smallest-index
/// minimizer). Tardy jobs are appended after the early block.
inline SolveResult solve_exact(const Instance& inst) {
  if (inst.empty()) throw input_error("instance has no jobs");
  const std::size_t n = inst.size();
  SubsetTable table = min_completion_table(inst);

  std::uint32_t best_set = 0;
  Int best_weight = 0;
  for (std::uint32_t set = 0; set < (std::uint32_t{1} << n); ++set) {
    if (table.finish[set] == kInfeasible) continue;
    Int weight = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (set >> j & 1) weight += inst.job(j).w;
    }
    if (weight > best_weight) {
      best_weight = weight;
      best_set = set;
    }
  }

  Schedule sched;
  std::uint32_t set = best_set;
  while (set != 0) {
    int j = table.choice[set];
    std::uint32_t rest = set ^ (std::uint32_t{1} << j);
    sched.set(static_cast<std::size_t>(j),
              std::max(table.finish[rest], inst.job(static_cast<std::size_t>(j)).r));
    set = rest;
  }
  append_tardy_tail(inst, sched);
  return {best_weight, sched};
}

}  // namespace tardy
