#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tardy/core.hpp"
#include "tardy/errors.hpp"
#include "tardy/milp/bnb.hpp"
#include "tardy/milp/model.hpp"

namespace tardy {

/// Jobs sharing processing time, release, and due date are interchangeable
/// up to weight; the window formulation only decides how many of each type
/// run inside which time window.
struct JobType {
  Int p = 0;
  Int r = 0;
  Int d = 0;
  std::vector<std::size_t> members;  // sorted by weight desc, index asc
};

/// A release or due date on the time axis. When a due date equals a
/// release date the due date sorts first; ordering comparisons in the
/// model are positional while arithmetic uses the value.
struct TimePoint {
  Int value = 0;
  bool is_release = false;
};

struct WindowModel {
  milp::Model model;
  std::vector<JobType> types;
  std::vector<TimePoint> points;
  // var_of[t][a][b] is the window-count variable for type t and point
  // positions a < b; unused slots hold SIZE_MAX.
  std::vector<std::vector<std::vector<std::size_t>>> var_of;
  std::size_t integer_vars = 0;
};

namespace detail {

inline std::vector<JobType> group_by_window(const Instance& inst) {
  std::map<std::tuple<Int, Int, Int>, std::vector<std::size_t>> buckets;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const Job& job = inst.job(j);
    buckets[{job.p, job.r, job.d}].push_back(j);
  }
  std::vector<JobType> types;
  types.reserve(buckets.size());
  for (auto& [key, members] : buckets) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      if (inst.job(a).w != inst.job(b).w) return inst.job(a).w > inst.job(b).w;
      return a < b;
    });
    types.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(members)});
  }
  return types;
}

inline std::vector<TimePoint> collect_time_points(const Instance& inst) {
  std::set<Int> dues, releases;
  for (const Job& job : inst.jobs()) {
    dues.insert(job.d);
    releases.insert(job.r);
  }
  std::vector<TimePoint> points;
  for (Int d : dues) points.push_back({d, false});
  for (Int r : releases) points.push_back({r, true});
  std::sort(points.begin(), points.end(), [](const TimePoint& a, const TimePoint& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.is_release < b.is_release;  // due date first on equal value
  });
  return points;
}

}  // namespace detail

/// Builds the window-assignment model: one integer variable per (type,
/// window) counting jobs of that type scheduled inside the window, plus
/// fractional selector variables that make the sorted-weight objective
/// linear.
inline WindowModel build_window_model(const Instance& inst) {
  if (inst.size() == 0) {
    throw input_error("cannot build a model for an empty instance");
  }
  WindowModel wm;
  wm.types = detail::group_by_window(inst);
  wm.points = detail::collect_time_points(inst);
  const std::size_t T = wm.types.size();
  const std::size_t L = wm.points.size();
  auto val = [&](std::size_t pos) { return wm.points[pos].value; };

  wm.var_of.assign(T, std::vector<std::vector<std::size_t>>(
                          L, std::vector<std::size_t>(L, SIZE_MAX)));
  for (std::size_t t = 0; t < T; ++t) {
    const JobType& type = wm.types[t];
    Int n_t = static_cast<Int>(type.members.size());
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = a + 1; b < L; ++b) {
        std::string name = "x_" + std::to_string(t) + "_" + std::to_string(a) + "_" +
                           std::to_string(b);
        wm.var_of[t][a][b] = wm.model.add_variable(
            std::move(name), milp::VarKind::integer, milp::Rat(0), milp::rat(n_t));
        ++wm.integer_vars;
      }
    }
  }

  // Per-type cardinality.
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::pair<std::size_t, milp::Rat>> terms;
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = a + 1; b < L; ++b) {
        terms.emplace_back(wm.var_of[t][a][b], milp::Rat(1));
      }
    }
    wm.model.add_constraint("count_" + std::to_string(t), terms, milp::Relation::le,
                            milp::rat(static_cast<Int>(wm.types[t].members.size())));
  }

  // A window is usable only when it sits inside the type's own
  // release/due window.
  for (std::size_t t = 0; t < T; ++t) {
    const JobType& type = wm.types[t];
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = a + 1; b < L; ++b) {
        if (type.r > val(a) || type.d < val(b)) {
          wm.model.add_constraint(
              "forbid_" + std::to_string(t) + "_" + std::to_string(a) + "_" +
                  std::to_string(b),
              {{wm.var_of[t][a][b], milp::Rat(1)}}, milp::Relation::eq, milp::Rat(0));
        }
      }
    }
  }

  // At most one job may straddle any listed time point.
  for (std::size_t c = 1; c + 1 < L; ++c) {
    std::vector<std::pair<std::size_t, milp::Rat>> terms;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = c + 1; b < L; ++b) {
          terms.emplace_back(wm.var_of[t][a][b], milp::Rat(1));
        }
      }
    }
    wm.model.add_constraint("straddle_" + std::to_string(c), terms, milp::Relation::le,
                            milp::Rat(1));
  }

  // Capacity of every window: work fully inside it, plus full-window
  // blocking by any job that straddles both ends, fits its length.
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = a + 1; b < L; ++b) {
      Int span = val(b) - val(a);
      std::vector<std::pair<std::size_t, milp::Rat>> terms;
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t a2 = a; a2 < L; ++a2) {
          for (std::size_t b2 = a2 + 1; b2 <= b; ++b2) {
            terms.emplace_back(wm.var_of[t][a2][b2], milp::rat(wm.types[t].p));
          }
        }
        for (std::size_t a2 = 0; a2 < a; ++a2) {
          for (std::size_t b2 = b + 1; b2 < L; ++b2) {
            terms.emplace_back(wm.var_of[t][a2][b2], milp::rat(span));
          }
        }
      }
      wm.model.add_constraint("cap_" + std::to_string(a) + "_" + std::to_string(b), terms,
                              milp::Relation::le, milp::rat(span));
    }
  }

  // Linearized objective: selectors y sum to the number of scheduled jobs
  // of the type; with weights sorted descending the maximum puts the mass
  // on the heaviest members.
  for (std::size_t t = 0; t < T; ++t) {
    const JobType& type = wm.types[t];
    std::vector<std::pair<std::size_t, milp::Rat>> link;
    for (std::size_t i = 0; i < type.members.size(); ++i) {
      std::size_t y = wm.model.add_variable(
          "y_" + std::to_string(t) + "_" + std::to_string(i), milp::VarKind::continuous,
          milp::Rat(0), milp::Rat(1));
      wm.model.set_objective_coeff(y, milp::rat(inst.job(type.members[i]).w));
      link.emplace_back(y, milp::Rat(1));
    }
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = a + 1; b < L; ++b) {
        link.emplace_back(wm.var_of[t][a][b], milp::Rat(-1));
      }
    }
    wm.model.add_constraint("select_" + std::to_string(t), link, milp::Relation::eq,
                            milp::Rat(0));
  }

  // Structural size invariant of the formulation.
  ParamProfile prof = stats(inst);
  std::size_t cap = static_cast<std::size_t>(prof.p_count) * prof.r_count * prof.d_count *
                    (prof.r_count + prof.d_count) * (prof.r_count + prof.d_count);
  if (wm.integer_vars > cap) {
    throw internal_error("window model exceeds its integer-variable budget");
  }
  return wm;
}

/// Rebuilds a schedule from window counts: windows are visited with the
/// left end ascending (clamping the cursor to it) and the right end
/// ascending, and each batch runs back to back from the cursor, heaviest
/// members first.
inline Schedule extract_window_schedule(const Instance& inst, const WindowModel& wm,
                                        const std::vector<milp::Rat>& values) {
  const std::size_t L = wm.points.size();
  std::vector<bool> used(inst.size(), false);
  Schedule sched = Schedule::from_entries(inst.size(), {});
  Int cursor = wm.points.empty() ? 0 : wm.points.front().value;
  for (std::size_t a = 0; a < L; ++a) {
    cursor = std::max(cursor, wm.points[a].value);
    for (std::size_t b = a + 1; b < L; ++b) {
      for (std::size_t t = 0; t < wm.types.size(); ++t) {
        const milp::Rat& v = values[wm.var_of[t][a][b]];
        if (!milp::is_integral(v) || v < 0) {
          throw internal_error("window count variable is not a nonnegative integer");
        }
        long count = static_cast<long>(v.get_num().get_si());
        const JobType& type = wm.types[t];
        std::size_t next = 0;
        for (long k = 0; k < count; ++k) {
          while (next < type.members.size() && used[type.members[next]]) ++next;
          if (next == type.members.size()) {
            throw internal_error("window counts exceed the member count of a type");
          }
          std::size_t j = type.members[next];
          used[j] = true;
          sched.set(j, cursor);
          cursor += type.p;
        }
      }
    }
  }
  append_tardy_tail(inst, sched);
  return sched;
}

struct MilpRunStats {
  long nodes = 0;
  long pivots = 0;
  std::size_t integer_vars = 0;
};

struct WindowOutcome {
  Int best_weight = 0;
  Schedule schedule;
  MilpRunStats stats;
};

/// Exact solve via the window formulation. The extracted schedule is
/// validated against the model value; any mismatch is a solver defect,
/// not an input problem.
inline WindowOutcome solve_windows(const Instance& inst, const milp::MilpOptions& opts = {}) {
  WindowModel wm = build_window_model(inst);
  milp::Solution sol = milp::solve_milp(wm.model, opts);
  if (sol.status != milp::SolveStatus::optimal) {
    throw internal_error("window model must be feasible and bounded");
  }
  Schedule sched = extract_window_schedule(inst, wm, sol.values);
  Int w = objective(inst, sched);
  if (!milp::is_integral(sol.objective) || milp::rat(w) != sol.objective) {
    throw internal_error("extracted schedule does not match the model objective");
  }
  WindowOutcome out;
  out.best_weight = w;
  out.schedule = std::move(sched);
  out.stats = {sol.nodes, sol.pivots, wm.integer_vars};
  return out;
}

}  // namespace tardy
