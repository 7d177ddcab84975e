#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tardy/errors.hpp"

namespace tardy {

using Int = std::int64_t;

/// One job: processing time, release date, due date, weight.
/// All values are integral; times live on a discrete timeline.
struct Job {
  Int p = 0;
  Int r = 0;
  Int d = 0;
  Int w = 0;

  friend bool operator==(const Job&, const Job&) = default;
};

/// Distinct-value counts of an instance, one per job field.
struct ParamProfile {
  std::size_t p_count = 0;
  std::size_t w_count = 0;
  std::size_t r_count = 0;
  std::size_t d_count = 0;
};

/// An immutable set of jobs. Construction enforces p >= 1 and
/// r, d, w >= 0; zero-length jobs are handled by the JSON loader
/// before an Instance ever exists.
class Instance {
 public:
  Instance() = default;

  explicit Instance(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      const Job& job = jobs_[j];
      if (job.p < 1) {
        throw input_error("job " + std::to_string(j) +
                          ": processing time must be >= 1");
      }
      if (job.r < 0 || job.d < 0 || job.w < 0) {
        throw input_error("job " + std::to_string(j) +
                          ": release, due date and weight must be >= 0");
      }
      d_max_ = std::max(d_max_, job.d);
      p_max_ = std::max(p_max_, job.p);
    }
  }

  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& job(std::size_t j) const { return jobs_.at(j); }
  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }

  /// Largest due date (0 for an empty instance).
  Int d_max() const { return d_max_; }
  /// Largest processing time (0 for an empty instance).
  Int p_max() const { return p_max_; }

 private:
  std::vector<Job> jobs_;
  Int d_max_ = 0;
  Int p_max_ = 0;
};

/// Start times by job index. May be partial when parsed from a file;
/// validate() reports missing entries.
class Schedule {
 public:
  Schedule() = default;

  explicit Schedule(std::vector<Int> starts) {
    starts_.reserve(starts.size());
    for (Int s : starts) starts_.emplace_back(s);
  }

  /// Builds from (job, start) pairs against a known job count.
  /// Duplicate or out-of-range job indices are input errors.
  static Schedule from_entries(std::size_t n,
                               const std::vector<std::pair<std::size_t, Int>>& entries) {
    Schedule sched;
    sched.starts_.assign(n, std::nullopt);
    for (const auto& [job, start] : entries) {
      if (job >= n) {
        throw input_error("schedule references job " + std::to_string(job) +
                          " but the instance has " + std::to_string(n) + " jobs");
      }
      if (sched.starts_[job].has_value()) {
        throw input_error("schedule lists job " + std::to_string(job) + " twice");
      }
      sched.starts_[job] = start;
    }
    return sched;
  }

  std::size_t size() const { return starts_.size(); }
  bool has(std::size_t j) const { return j < starts_.size() && starts_[j].has_value(); }
  Int start(std::size_t j) const {
    if (!has(j)) throw state_error("schedule has no start for job " + std::to_string(j));
    return *starts_[j];
  }

  void set(std::size_t j, Int start) {
    if (j >= starts_.size()) starts_.resize(j + 1, std::nullopt);
    starts_[j] = start;
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<std::optional<Int>> starts_;
};

/// One violated scheduling invariant.
struct Violation {
  enum class Kind { missing, overlap, release };
  Kind kind;
  std::size_t job_a = 0;
  std::size_t job_b = 0;  // second job of an overlap pair, else unused
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks totality, machine exclusivity and release feasibility.
/// Lists every violation rather than stopping at the first.
inline ValidationReport validate(const Instance& inst, const Schedule& sched) {
  ValidationReport report;
  std::vector<std::pair<Int, std::size_t>> placed;  // (start, job)
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (!sched.has(j)) {
      report.violations.push_back({Violation::Kind::missing, j, 0,
                                   "job " + std::to_string(j) + " has no start time"});
      continue;
    }
    Int s = sched.start(j);
    if (s < inst.job(j).r) {
      report.violations.push_back(
          {Violation::Kind::release, j, 0,
           "job " + std::to_string(j) + " starts at " + std::to_string(s) +
               " before its release date " + std::to_string(inst.job(j).r)});
    }
    placed.emplace_back(s, j);
  }
  std::sort(placed.begin(), placed.end());
  for (std::size_t k = 0; k + 1 < placed.size(); ++k) {
    auto [s, j] = placed[k];
    auto [s2, j2] = placed[k + 1];
    if (s + inst.job(j).p > s2) {
      report.violations.push_back(
          {Violation::Kind::overlap, j, j2,
           "jobs " + std::to_string(j) + " and " + std::to_string(j2) +
               " overlap: [" + std::to_string(s) + "," +
               std::to_string(s + inst.job(j).p) + ") meets [" + std::to_string(s2) +
               "," + std::to_string(s2 + inst.job(j2).p) + ")"});
    }
  }
  return report;
}

/// True iff job j completes by its due date under sched.
inline bool is_early(const Instance& inst, const Schedule& sched, std::size_t j) {
  return sched.start(j) + inst.job(j).p <= inst.job(j).d;
}

/// Total weight of early jobs. Throws if the schedule is invalid.
inline Int objective(const Instance& inst, const Schedule& sched) {
  ValidationReport report = validate(inst, sched);
  if (!report.ok()) throw validation_error(report.violations.front().message);
  Int total = 0;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (is_early(inst, sched, j)) total += inst.job(j).w;
  }
  return total;
}

/// Distinct-value counts per field.
inline ParamProfile stats(const Instance& inst) {
  std::set<Int> ps, ws, rs, ds;
  for (const Job& job : inst.jobs()) {
    ps.insert(job.p);
    ws.insert(job.w);
    rs.insert(job.r);
    ds.insert(job.d);
  }
  return {ps.size(), ws.size(), rs.size(), ds.size()};
}

/// Appends every job not yet placed after all early work, in index order,
/// respecting release dates. Starts no earlier than max(d_max, end of the
/// latest placed job), so appended jobs are tardy and overlap nothing.
inline void append_tardy_tail(const Instance& inst, Schedule& sched) {
  Int cursor = inst.d_max();
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (j < sched.size() && sched.has(j)) {
      cursor = std::max(cursor, sched.start(j) + inst.job(j).p);
    }
  }
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (j < sched.size() && sched.has(j)) continue;
    Int s = std::max(cursor, inst.job(j).r);
    sched.set(j, s);
    cursor = s + inst.job(j).p;
  }
}

/// Mirrors the timeline at d_max: r' = d_max - d, d' = d_max - r.
/// The optimum weighted number of early jobs is preserved.
/// Jobs released after the last due date are rejected.
inline Instance reverse_instance(const Instance& inst) {
  Int dm = inst.d_max();
  std::vector<Job> jobs;
  jobs.reserve(inst.size());
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const Job& job = inst.job(j);
    if (job.r > dm) {
      throw input_error("job " + std::to_string(j) + " is released at " +
                        std::to_string(job.r) + ", after the last due date " +
                        std::to_string(dm) + "; it cannot be reversed");
    }
    jobs.push_back({job.p, dm - job.d, dm - job.r, job.w});
  }
  return Instance(std::move(jobs));
}

/// Maps a valid schedule onto the reversed instance with equal objective.
/// Early jobs map through sigma' = d_max - sigma - p and stay early; tardy
/// jobs cannot use that formula (the mapped start would precede the reversed
/// release date), so they are re-placed with the tardy-tail policy.
inline Schedule reverse_schedule(const Instance& inst, const Schedule& sched) {
  ValidationReport report = validate(inst, sched);
  if (!report.ok()) throw validation_error(report.violations.front().message);
  Int dm = inst.d_max();
  Instance rev = reverse_instance(inst);
  Schedule out;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (is_early(inst, sched, j)) {
      out.set(j, dm - sched.start(j) - inst.job(j).p);
    }
  }
  append_tardy_tail(rev, out);
  return out;
}

/// Solver output: the exact optimum and a witness schedule achieving it.
struct SolveResult {
  Int best_weight = 0;
  Schedule schedule;
};

}  // namespace tardy
