#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tardy/core.hpp"
#include "tardy/errors.hpp"
#include "tardy/milp/bnb.hpp"
#include "tardy/milp/model.hpp"
#include "tardy/milp/simplex.hpp"

namespace tardy {

/// Jobs sharing processing time, weight, and due date; members are
/// interchangeable except for their release dates, so they are kept
/// sorted by release (ties by index).
struct SlotType {
  Int p = 0;
  Int w = 0;
  Int d = 0;
  std::vector<std::size_t> members;
};

/// One guessed arrangement of which job type straddles which due dates:
/// the sorted distinct due dates are split into consecutive blocks, and
/// every block is either straddled end to end by one job of the given
/// type or (only for single-due blocks) left clean.
struct OverlapStructure {
  std::vector<std::size_t> starts;                 // first due index of each block
  std::vector<std::optional<std::size_t>> types;   // straddling type per block
};

namespace detail {

inline std::vector<SlotType> group_by_slot(const Instance& inst) {
  std::map<std::tuple<Int, Int, Int>, std::vector<std::size_t>> buckets;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const Job& job = inst.job(j);
    buckets[{job.p, job.w, job.d}].push_back(j);
  }
  std::vector<SlotType> types;
  types.reserve(buckets.size());
  for (auto& [key, members] : buckets) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      if (inst.job(a).r != inst.job(b).r) return inst.job(a).r < inst.job(b).r;
      return a < b;
    });
    types.push_back(
        {std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(members)});
  }
  return types;
}

}  // namespace detail

/// Enumerates every admissible overlap structure. A type may straddle a
/// block only if its due date lies strictly beyond the block's last due
/// date and it is long enough to put work on both sides; the largest due
/// date therefore always ends up alone and clean.
inline std::vector<OverlapStructure> enumerate_structures(
    const std::vector<SlotType>& types, const std::vector<Int>& dues,
    long budget = 100000) {
  const std::size_t D = dues.size();
  const std::size_t T = types.size();
  long double estimate = std::pow(2.0L, static_cast<long double>(D)) *
                         std::pow(static_cast<long double>(T) + 1.0L,
                                  static_cast<long double>(D));
  if (estimate > static_cast<long double>(budget)) {
    throw size_error(
        "the number of due-date overlap structures may exceed the budget of " +
        std::to_string(budget) +
        "; if the instance has fewer distinct release dates than due dates, "
        "solve its reversal instead (release-anchored variant)");
  }

  std::vector<OverlapStructure> out;
  OverlapStructure cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == D) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = i; j < D; ++j) {  // block [i..j]
      cur.starts.push_back(i);
      if (i == j) {
        cur.types.push_back(std::nullopt);
        rec(j + 1);
        cur.types.pop_back();
      }
      for (std::size_t t = 0; t < T; ++t) {
        if (types[t].d > dues[j] && types[t].p >= 2) {
          cur.types.push_back(t);
          rec(j + 1);
          cur.types.pop_back();
        }
      }
      cur.starts.pop_back();
    }
  };
  rec(0);
  return out;
}

struct SlotModel {
  milp::Model model;
  std::vector<Int> delta;           // reduced due dates, ascending
  std::vector<Int> releases;        // distinct releases, ascending
  std::vector<Int> type_due;        // reduced due per type
  std::vector<std::optional<std::size_t>> boundary;  // straddling type at delta[k], k < m-1
  std::vector<std::size_t> select_var;               // per job index
  std::vector<std::vector<std::size_t>> slot_var;    // [type][slot]
  std::vector<std::size_t> head_var;                 // o_a at delta[k]
  std::vector<std::size_t> tail_var;                 // o_b at delta[k]
  std::size_t integer_vars = 0;
};

/// Builds the slot-counting model for one overlap structure. Block
/// members' due dates collapse to the block's first due date; early jobs
/// then finish by their reduced due date, interior slot counts are
/// integral, and the straddler around each reduced due date is split into
/// an integral head and tail.
inline SlotModel build_slot_model(const Instance& inst, const std::vector<SlotType>& types,
                                  const std::vector<Int>& dues,
                                  const OverlapStructure& structure) {
  SlotModel sm;
  const std::size_t B = structure.starts.size();
  sm.delta.reserve(B);
  for (std::size_t k = 0; k < B; ++k) sm.delta.push_back(dues[structure.starts[k]]);
  const std::size_t m = sm.delta.size();

  // Reduced due per type: the start of the block containing its due.
  sm.type_due.resize(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    std::size_t block = 0;
    for (std::size_t k = 0; k < B; ++k) {
      if (dues[structure.starts[k]] <= types[t].d) block = k;
    }
    sm.type_due[t] = sm.delta[block];
  }

  sm.boundary.assign(m > 0 ? m - 1 : 0, std::nullopt);
  for (std::size_t k = 0; k + 1 < m; ++k) sm.boundary[k] = structure.types[k];

  {
    std::set<Int> rel;
    for (const Job& job : inst.jobs()) rel.insert(job.r);
    sm.releases.assign(rel.begin(), rel.end());
  }

  // Selection variables, pinned when the member cannot finish by its
  // effective due date (the aggregate release rows cannot see individual
  // releases, so without the pin a hopeless member could be counted).
  sm.select_var.assign(inst.size(), SIZE_MAX);
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (std::size_t j : types[t].members) {
      const Job& job = inst.job(j);
      bool hopeless = job.r + job.p > sm.type_due[t];
      sm.select_var[j] = sm.model.add_variable(
          "sel_" + std::to_string(j), milp::VarKind::continuous, milp::Rat(0),
          hopeless ? milp::Rat(0) : milp::Rat(1));
      sm.model.set_objective_coeff(sm.select_var[j], milp::rat(job.w));
    }
  }

  // Interior slot counts, pinned for slots past the type's due date.
  sm.slot_var.assign(types.size(), std::vector<std::size_t>(m, SIZE_MAX));
  for (std::size_t t = 0; t < types.size(); ++t) {
    Int n_t = static_cast<Int>(types[t].members.size());
    for (std::size_t s = 0; s < m; ++s) {
      bool late = sm.type_due[t] < sm.delta[s];
      sm.slot_var[t][s] = sm.model.add_variable(
          "slot_" + std::to_string(t) + "_" + std::to_string(s), milp::VarKind::integer,
          milp::Rat(0), late ? milp::Rat(0) : milp::rat(n_t));
      ++sm.integer_vars;
    }
  }

  // Straddler head and tail around each interior reduced due date. A
  // straddler crosses its due date strictly, so both parts are positive.
  sm.head_var.assign(m > 0 ? m - 1 : 0, SIZE_MAX);
  sm.tail_var.assign(m > 0 ? m - 1 : 0, SIZE_MAX);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    Int len = sm.boundary[k] ? types[*sm.boundary[k]].p : 0;
    milp::Rat lo = sm.boundary[k] ? milp::Rat(1) : milp::Rat(0);
    milp::Rat hi = sm.boundary[k] ? milp::rat(len - 1) : milp::Rat(0);
    sm.head_var[k] = sm.model.add_variable("head_" + std::to_string(k),
                                           milp::VarKind::integer, lo, hi);
    sm.tail_var[k] = sm.model.add_variable("tail_" + std::to_string(k),
                                           milp::VarKind::integer, lo, hi);
    sm.integer_vars += 2;
    sm.model.add_constraint("straddle_len_" + std::to_string(k),
                            {{sm.head_var[k], milp::Rat(1)}, {sm.tail_var[k], milp::Rat(1)}},
                            milp::Relation::eq, milp::rat(len));
    sm.model.add_constraint("tail_fit_" + std::to_string(k),
                            {{sm.tail_var[k], milp::Rat(1)}}, milp::Relation::le,
                            milp::rat(sm.delta[k + 1] - sm.delta[k]));
    sm.model.add_constraint("head_fit_" + std::to_string(k),
                            {{sm.head_var[k], milp::Rat(1)}}, milp::Relation::le,
                            milp::rat(sm.delta[k] - (k > 0 ? sm.delta[k - 1] : 0)));
  }

  // Selected members are accounted for either by a slot or as straddlers.
  for (std::size_t t = 0; t < types.size(); ++t) {
    std::vector<std::pair<std::size_t, milp::Rat>> terms;
    for (std::size_t j : types[t].members) terms.emplace_back(sm.select_var[j], milp::Rat(1));
    for (std::size_t s = 0; s < m; ++s) terms.emplace_back(sm.slot_var[t][s], milp::Rat(-1));
    Int straddles = 0;
    for (std::size_t k = 0; k + 1 < m; ++k) straddles += sm.boundary[k] == t;
    sm.model.add_constraint("account_" + std::to_string(t), terms, milp::Relation::eq,
                            milp::rat(straddles));
  }

  // Work released at or after r' that is not placed beyond delta[s] must
  // fit between r' and delta[s].
  for (std::size_t s = 0; s < m; ++s) {
    for (Int rel : sm.releases) {
      if (rel > sm.delta[s]) continue;
      std::vector<std::pair<std::size_t, milp::Rat>> terms;
      if (s + 1 < m) terms.emplace_back(sm.head_var[s], milp::Rat(1));
      Int later_straddles_work = 0;
      for (std::size_t t = 0; t < types.size(); ++t) {
        milp::Rat p = milp::rat(types[t].p);
        for (std::size_t j : types[t].members) {
          if (inst.job(j).r >= rel) terms.emplace_back(sm.select_var[j], p);
        }
        for (std::size_t s2 = s + 1; s2 < m; ++s2) {
          terms.emplace_back(sm.slot_var[t][s2], -p);
        }
        for (std::size_t k = s; k + 1 < m; ++k) {
          if (sm.boundary[k] == t) later_straddles_work += types[t].p;
        }
      }
      sm.model.add_constraint(
          "release_fit_" + std::to_string(s) + "_" + std::to_string(rel), terms,
          milp::Relation::le, milp::rat(sm.delta[s] - rel + later_straddles_work));
    }
  }

  // Clamped variant of the rows above: one type's members parked beyond
  // delta[s] must not offset another type's load, so each type's surplus
  // is carried by a nonnegative slack instead of entering the sum raw.
  // Jobs released at or after r' that stay at or before delta[s] run
  // whole inside [r', delta[s]], which bounds the clamped sum alone.
  for (std::size_t s = 0; s < m; ++s) {
    for (Int rel : sm.releases) {
      if (rel > sm.delta[s]) continue;
      std::vector<std::pair<std::size_t, milp::Rat>> sum_terms;
      for (std::size_t t = 0; t < types.size(); ++t) {
        std::size_t y = sm.model.add_variable(
            "load_" + std::to_string(t) + "_" + std::to_string(s) + "_" +
                std::to_string(rel),
            milp::VarKind::continuous, milp::Rat(0), std::nullopt);
        std::vector<std::pair<std::size_t, milp::Rat>> lo_terms{{y, milp::Rat(1)}};
        for (std::size_t j : types[t].members) {
          if (inst.job(j).r >= rel) lo_terms.emplace_back(sm.select_var[j], milp::Rat(-1));
        }
        for (std::size_t s2 = s + 1; s2 < m; ++s2) {
          lo_terms.emplace_back(sm.slot_var[t][s2], milp::Rat(1));
        }
        Int straddles = 0;
        for (std::size_t k = s; k + 1 < m; ++k) straddles += sm.boundary[k] == t;
        sm.model.add_constraint("load_ge_" + std::to_string(t) + "_" +
                                    std::to_string(s) + "_" + std::to_string(rel),
                                lo_terms, milp::Relation::ge, milp::rat(-straddles));
        sum_terms.emplace_back(y, milp::rat(types[t].p));
      }
      sm.model.add_constraint(
          "suffix_fit_" + std::to_string(s) + "_" + std::to_string(rel), sum_terms,
          milp::Relation::le, milp::rat(sm.delta[s] - rel));
    }
  }

  // Every slot's own work, plus the straddler parts poking into it, fits.
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<std::pair<std::size_t, milp::Rat>> terms;
    if (s + 1 < m) terms.emplace_back(sm.head_var[s], milp::Rat(1));
    if (s > 0) terms.emplace_back(sm.tail_var[s - 1], milp::Rat(1));
    for (std::size_t t = 0; t < types.size(); ++t) {
      terms.emplace_back(sm.slot_var[t][s], milp::rat(types[t].p));
    }
    sm.model.add_constraint("slot_fit_" + std::to_string(s), terms, milp::Relation::le,
                            milp::rat(sm.delta[s] - (s > 0 ? sm.delta[s - 1] : 0)));
  }

  return sm;
}

/// Shifts selection mass toward earlier releases within one type: the
/// result keeps the sum and puts full mass on a prefix. Equivalent to
/// repeatedly merging fractional pairs toward the earlier release, which
/// never increases any release-anchored row.
inline std::vector<milp::Rat> prefix_round(const std::vector<milp::Rat>& vals) {
  milp::Rat sum(0);
  for (const milp::Rat& v : vals) sum += v;
  std::vector<milp::Rat> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    milp::Rat lo = sum - milp::rat(static_cast<Int>(i));
    if (lo < 0) lo = 0;
    if (lo > 1) lo = 1;
    out[i] = lo;
  }
  return out;
}

/// Applies prefix rounding to the selection variables of every type,
/// leaving all other coordinates of the point untouched.
inline std::vector<milp::Rat> round_selections(const SlotModel& sm,
                                               const std::vector<SlotType>& types,
                                               const std::vector<milp::Rat>& point) {
  std::vector<milp::Rat> rounded = point;
  for (const SlotType& type : types) {
    std::vector<milp::Rat> vals;
    vals.reserve(type.members.size());
    for (std::size_t j : type.members) vals.push_back(point[sm.select_var[j]]);
    std::vector<milp::Rat> fixed = prefix_round(vals);
    for (std::size_t i = 0; i < type.members.size(); ++i) {
      rounded[sm.select_var[type.members[i]]] = fixed[i];
    }
  }
  return rounded;
}

struct SingleDueJob {
  std::size_t id = 0;
  Int p = 0;
  Int r = 0;
};

struct SingleDueResult {
  bool ok = false;
  Int blocking_release = 0;  // meaningful when !ok
  std::vector<std::pair<std::size_t, Int>> starts;
};

/// Packs jobs sharing one due date so all finish by it, or reports the
/// release whose suffix of work cannot fit. The suffix condition is exact:
/// work released at or after r can only run inside [r, due], so the
/// packing exists if and only if every such suffix fits.
inline SingleDueResult schedule_single_due(std::vector<SingleDueJob> jobs, Int due) {
  SingleDueResult res;
  std::map<Int, Int, std::greater<Int>> suffix;  // release -> total work at/after it
  for (const SingleDueJob& job : jobs) suffix[job.r] += 0;
  for (const SingleDueJob& job : jobs) {
    for (auto& [rel, total] : suffix) {
      if (job.r >= rel) total += job.p;
    }
  }
  for (const auto& [rel, total] : suffix) {
    if (total > due - rel) {
      res.ok = false;
      res.blocking_release = rel;
      return res;
    }
  }
  res.ok = true;
  Int cursor = due;
  while (!jobs.empty()) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < jobs.size(); ++i) {
      if (jobs[i].r > jobs[pick].r ||
          (jobs[i].r == jobs[pick].r && jobs[i].id > jobs[pick].id)) {
        pick = i;
      }
    }
    cursor -= jobs[pick].p;
    if (cursor < jobs[pick].r) {
      throw internal_error("single-due packing placed a job before its release");
    }
    res.starts.emplace_back(jobs[pick].id, cursor);
    jobs.erase(jobs.begin() + static_cast<long>(pick));
  }
  return res;
}

namespace detail {

/// Rebuilds a schedule for the selected jobs of one structure, peeling
/// slots from the last due date down. Within each slot the latest-released
/// selected members go in; the straddler at the slot's lower edge is the
/// remaining selected member with the largest release. Returns nothing
/// when the point's slot counts cannot be realized: an exchange argument
/// shows the latest-release picks here succeed whenever any member-to-slot
/// assignment with these counts does, so failure means the counts are a
/// phantom of the relaxation, not a wrong pick.
inline std::optional<Schedule> try_extract_slot_schedule(
    const Instance& inst, const std::vector<SlotType>& types, const SlotModel& sm,
    const std::vector<milp::Rat>& point) {
  const std::size_t m = sm.delta.size();
  std::vector<milp::Rat> rounded = round_selections(sm, types, point);

  std::vector<std::vector<std::size_t>> selected(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (std::size_t j : types[t].members) {
      const milp::Rat& v = rounded[sm.select_var[j]];
      if (v == 1) {
        selected[t].push_back(j);
      } else if (v != 0) {
        throw internal_error("selection variables failed to round to integers");
      }
    }
    // members were sorted by release already; selected inherits that order
  }

  auto int_value = [&](std::size_t var) {
    const milp::Rat& v = point[var];
    if (!milp::is_integral(v) || v < 0) {
      throw internal_error("integral model variable has a fractional value");
    }
    return static_cast<Int>(v.get_num().get_si());
  };

  Schedule sched = Schedule::from_entries(inst.size(), {});
  for (std::size_t s = m; s-- > 0;) {
    Int right = sm.delta[s] - (s + 1 < m ? int_value(sm.head_var[s]) : 0);
    Int left = s > 0 ? sm.delta[s - 1] + int_value(sm.tail_var[s - 1]) : 0;

    std::vector<SingleDueJob> batch;
    for (std::size_t t = 0; t < types.size(); ++t) {
      Int count = int_value(sm.slot_var[t][s]);
      if (count > static_cast<Int>(selected[t].size())) {
        throw internal_error("slot counts exceed the selected members of a type");
      }
      for (Int k = 0; k < count; ++k) {
        std::size_t j = selected[t].back();
        selected[t].pop_back();
        batch.push_back({j, types[t].p, std::max(inst.job(j).r, left)});
      }
    }
    SingleDueResult packed = schedule_single_due(std::move(batch), right);
    if (!packed.ok) return std::nullopt;
    for (const auto& [j, start] : packed.starts) sched.set(j, start);

    if (s > 0 && sm.boundary[s - 1]) {
      std::size_t t = *sm.boundary[s - 1];
      if (selected[t].empty()) {
        throw internal_error("no selected member left to straddle a due date");
      }
      std::size_t j = selected[t].back();
      selected[t].pop_back();
      Int start = sm.delta[s - 1] - int_value(sm.head_var[s - 1]);
      if (start < inst.job(j).r) return std::nullopt;
      sched.set(j, start);
    }
  }
  for (const auto& rest : selected) {
    if (!rest.empty()) {
      throw internal_error("selected members left over after all slots were filled");
    }
  }
  return sched;
}

inline Schedule extract_slot_schedule(const Instance& inst,
                                      const std::vector<SlotType>& types,
                                      const SlotModel& sm,
                                      const std::vector<milp::Rat>& point) {
  std::optional<Schedule> sched = try_extract_slot_schedule(inst, types, sm, point);
  if (!sched) {
    throw internal_error("slot packing infeasible despite an accepted model solution");
  }
  return *std::move(sched);
}

}  // namespace detail

struct PwdOptions {
  long structure_budget = 100000;
  milp::MilpOptions milp;
  /// Observes the model and every explored LP relaxation, including the
  /// root screening solve of structures that are pruned.
  std::function<void(const SlotModel&, const std::vector<SlotType>&, const milp::Solution&)>
      on_node;
};

struct PwdOutcome {
  Int best_weight = 0;
  Schedule schedule;
  long structures = 0;
  long nodes = 0;
  long pivots = 0;
  std::size_t integer_vars = 0;  // largest model built
};

/// Exact solve by enumerating due-date overlap structures. Jobs that can
/// never finish by their due date are set aside first and return as tail
/// jobs in the final schedule.
inline PwdOutcome solve_pwd(const Instance& inst, const PwdOptions& opts = {}) {
  if (inst.size() == 0) throw input_error("cannot solve an empty instance");

  std::vector<std::size_t> kept;
  std::vector<Job> kept_jobs;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const Job& job = inst.job(j);
    if (job.r + job.p <= job.d) {
      kept.push_back(j);
      kept_jobs.push_back(job);
    }
  }

  PwdOutcome out;
  if (kept.empty()) {
    Schedule sched = Schedule::from_entries(inst.size(), {});
    append_tardy_tail(inst, sched);
    out.best_weight = 0;
    out.schedule = std::move(sched);
    return out;
  }

  Instance sub(kept_jobs);
  std::vector<SlotType> types = detail::group_by_slot(sub);
  std::vector<Int> dues;
  {
    std::set<Int> set;
    for (const Job& job : sub.jobs()) set.insert(job.d);
    dues.assign(set.begin(), set.end());
  }
  ParamProfile prof = stats(sub);
  std::vector<OverlapStructure> structures =
      enumerate_structures(types, dues, opts.structure_budget);
  out.structures = static_cast<long>(structures.size());

  Int best = -1;
  Schedule best_sub;
  for (const OverlapStructure& structure : structures) {
    SlotModel sm = build_slot_model(sub, types, dues, structure);
    std::size_t cap = static_cast<std::size_t>(prof.p_count) * prof.w_count *
                          prof.d_count * prof.d_count +
                      2 * prof.d_count;
    if (sm.integer_vars > cap) {
      throw internal_error("slot model exceeds its integer-variable budget");
    }
    out.integer_vars = std::max(out.integer_vars, sm.integer_vars);

    milp::Solution root = milp::solve_lp(sm.model, opts.milp.lp);
    out.pivots += root.pivots;
    if (root.status == milp::SolveStatus::infeasible) continue;
    if (root.status != milp::SolveStatus::optimal) {
      throw internal_error("slot model relaxation must be bounded");
    }
    if (opts.on_node) opts.on_node(sm, types, root);
    if (best >= 0 && root.objective <= milp::rat(best)) continue;

    milp::MilpOptions mo = opts.milp;
    if (opts.on_node) {
      mo.on_node_lp = [&](const milp::Solution& node) { opts.on_node(sm, types, node); };
    }
    // The count rows are necessary but not sufficient: a candidate only
    // becomes an incumbent if its slot counts really produce a schedule.
    mo.accept_integral = [&](std::vector<milp::Rat>& vals) {
      std::vector<milp::Rat> rounded = round_selections(sm, types, vals);
      if (!detail::try_extract_slot_schedule(sub, types, sm, rounded)) return false;
      vals = std::move(rounded);
      return true;
    };
    milp::Solution sol = milp::solve_milp(sm.model, mo);
    out.nodes += sol.nodes;
    out.pivots += sol.pivots;
    if (sol.status == milp::SolveStatus::infeasible) continue;
    if (sol.status != milp::SolveStatus::optimal) {
      throw internal_error("slot model must be bounded");
    }

    Schedule sched = detail::extract_slot_schedule(sub, types, sm, sol.values);
    append_tardy_tail(sub, sched);
    Int got = objective(sub, sched);
    if (!milp::is_integral(sol.objective) || milp::rat(got) < sol.objective) {
      throw internal_error("extracted schedule fell short of the model objective");
    }
    if (got > best) {
      best = got;
      best_sub = std::move(sched);
    }
  }
  if (best < 0) {
    throw internal_error("no overlap structure produced a schedule");
  }

  // Lift only the early placements; everything else goes to the tail so
  // set-aside jobs cannot collide with kept tardy ones.
  Schedule pruned = Schedule::from_entries(inst.size(), {});
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (best_sub.has(i) && is_early(sub, best_sub, i)) {
      pruned.set(kept[i], best_sub.start(i));
    }
  }
  append_tardy_tail(inst, pruned);
  out.best_weight = objective(inst, pruned);
  if (out.best_weight != best) {
    throw internal_error("objective changed while lifting the schedule");
  }
  out.schedule = std::move(pruned);
  return out;
}

/// Release-anchored variant: reverses the time axis (turning release
/// dates into due dates and vice versa) and solves the reversal, so the
/// enumeration is over distinct release dates instead.
inline PwdOutcome solve_pwr(const Instance& inst, const PwdOptions& opts = {}) {
  if (inst.size() == 0) throw input_error("cannot solve an empty instance");

  std::vector<std::size_t> kept;
  std::vector<Job> kept_jobs;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const Job& job = inst.job(j);
    if (job.r + job.p <= job.d) {
      kept.push_back(j);
      kept_jobs.push_back(job);
    }
  }

  PwdOutcome out;
  if (kept.empty()) {
    Schedule sched = Schedule::from_entries(inst.size(), {});
    append_tardy_tail(inst, sched);
    out.best_weight = 0;
    out.schedule = std::move(sched);
    return out;
  }

  Instance sub(kept_jobs);
  Instance mirrored = reverse_instance(sub);
  PwdOutcome rev = solve_pwd(mirrored, opts);

  // Map early starts back through the original mirror line. The generic
  // reverse helpers mirror at the argument's own horizon, which is shifted
  // when the smallest release is positive, so the lift is done by hand.
  Int dm = sub.d_max();
  Schedule pruned = Schedule::from_entries(inst.size(), {});
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (rev.schedule.has(i) && is_early(mirrored, rev.schedule, i)) {
      pruned.set(kept[i], dm - rev.schedule.start(i) - sub.job(i).p);
    }
  }
  append_tardy_tail(inst, pruned);
  out.best_weight = objective(inst, pruned);
  if (out.best_weight != rev.best_weight) {
    throw internal_error("reversal changed the objective value");
  }
  out.schedule = std::move(pruned);
  out.structures = rev.structures;
  out.nodes = rev.nodes;
  out.pivots = rev.pivots;
  out.integer_vars = rev.integer_vars;
  return out;
}

}  // namespace tardy
