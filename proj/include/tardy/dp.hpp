#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tardy/core.hpp"
#include "tardy/errors.hpp"

namespace tardy {

struct DpOptions {
  /// Hard cap on distinct release dates; every extra one multiplies both
  /// the profile count and the table dimensionality.
  std::size_t release_limit = 4;
  /// Largest table (in cells) one profile may allocate.
  std::size_t cell_budget = 10'000'000;
};

/// Instance-derived data shared by all profiles: the sorted distinct
/// release dates (one table dimension each) and the job order used for
/// table layers (non-descending due dates, ties by index).
struct DpConfig {
  std::vector<Int> releases;
  std::vector<std::size_t> job_order;
  Int horizon = 0;
};

inline DpConfig make_dp_config(const Instance& inst) {
  DpConfig cfg;
  std::set<Int> releases;
  for (const Job& job : inst.jobs()) releases.insert(job.r);
  cfg.releases.assign(releases.begin(), releases.end());
  cfg.job_order.resize(inst.size());
  std::iota(cfg.job_order.begin(), cfg.job_order.end(), std::size_t{0});
  std::stable_sort(cfg.job_order.begin(), cfg.job_order.end(),
                   [&](std::size_t a, std::size_t b) { return inst.job(a).d < inst.job(b).d; });
  cfg.horizon = inst.d_max();
  return cfg;
}

/// One guess of how the optimal schedule crosses the release dates.
/// incursion[k] says how far the job running at the (k+2)-nd release date
/// sticks out past it (0 = nothing crosses). Segment k's early work then
/// occupies [start[k], start[k] + t_k) for some t_k <= cap[k].
struct BoundaryProfile {
  std::vector<Int> incursion;  // one entry per release date after the first
  std::vector<Int> start;      // segment anchors
  std::vector<Int> cap;        // busy-time capacity per segment
};

/// Every consistent incursion vector in {0..p_max-1}^(r#-1), lexicographic.
/// A crossing that reaches past the next release date covers it too, so the
/// incursion there is forced to the same endpoint; other values are pruned.
inline std::vector<BoundaryProfile> enumerate_profiles(const Instance& inst,
                                                       const DpOptions& opts = {}) {
  if (inst.empty()) throw input_error("cannot enumerate profiles of an empty instance");
  DpConfig cfg = make_dp_config(inst);
  const std::size_t m = cfg.releases.size();
  if (m > opts.release_limit) {
    ParamProfile counts = stats(inst);
    std::string msg = "profile enumeration is limited to " +
                      std::to_string(opts.release_limit) +
                      " distinct release dates; got " + std::to_string(m);
    if (counts.d_count < counts.r_count) {
      msg += "; reverse_instance gives an equivalent instance with " +
             std::to_string(counts.d_count);
    }
    throw size_error(msg);
  }

  const Int pmax = inst.p_max();
  std::vector<BoundaryProfile> out;
  std::vector<Int> e(m - 1, 0);
  while (true) {
    BoundaryProfile prof;
    prof.incursion = e;
    prof.start.resize(m);
    prof.start[0] = cfg.releases[0];
    for (std::size_t k = 1; k < m; ++k) prof.start[k] = cfg.releases[k] + e[k - 1];
    bool ok = true;
    for (std::size_t k = 0; k + 1 < m && ok; ++k) {
      if (prof.start[k] > cfg.releases[k + 1] && prof.start[k + 1] != prof.start[k]) ok = false;
    }
    if (ok) {
      prof.cap.resize(m);
      for (std::size_t k = 0; k + 1 < m; ++k) prof.cap[k] = prof.start[k + 1] - prof.start[k];
      // No early job completes after the horizon, so a segment anchored
      // past it simply has no room.
      prof.cap[m - 1] = std::max<Int>(0, cfg.horizon - prof.start[m - 1]);
      out.push_back(std::move(prof));
    }
    std::size_t k = e.size();
    while (k > 0) {
      if (++e[k - 1] < pmax) break;
      e[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

inline constexpr std::int8_t kDpPredBase = -2;  // layer-0 origin
inline constexpr std::int8_t kDpPredSkip = -1;  // job left tardy

struct DpCell {
  Int value = -1;  // negative = unreachable
  std::int8_t pred = kDpPredBase;
};

/// Layered value/predecessor store for one profile. A dense array for up to
/// two segments, a hash map per layer otherwise: with more dimensions the
/// reachable busy-time vectors are a thin slice of the cross product.
class DpTable {
 public:
  DpTable(std::size_t layers, std::vector<Int> dims)
      : dims_(std::move(dims)), dense_(dims_.size() <= 2) {
    strides_.resize(dims_.size());
    std::uint64_t total = 1;
    for (std::size_t k = dims_.size(); k > 0; --k) {
      strides_[k - 1] = total;
      total *= static_cast<std::uint64_t>(dims_[k - 1]);
    }
    size_ = total;
    if (dense_) {
      dense_layers_.resize(layers);
    } else {
      sparse_layers_.resize(layers);
    }
  }

  bool dense() const { return dense_; }
  std::size_t layers() const { return dense_ ? dense_layers_.size() : sparse_layers_.size(); }
  const std::vector<Int>& dims() const { return dims_; }
  std::uint64_t stride(std::size_t k) const { return strides_.at(k); }
  std::size_t finite_cells() const { return finite_; }

  std::uint64_t pack(const std::vector<Int>& ts) const {
    if (ts.size() != dims_.size()) {
      throw state_error("cell has " + std::to_string(ts.size()) + " coordinates; the table has " +
                        std::to_string(dims_.size()));
    }
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (ts[k] < 0 || ts[k] >= dims_[k]) {
        throw state_error("cell coordinate " + std::to_string(k) + " is out of range");
      }
      key += static_cast<std::uint64_t>(ts[k]) * strides_[k];
    }
    return key;
  }

  std::vector<Int> unpack(std::uint64_t key) const {
    std::vector<Int> ts(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      ts[k] = static_cast<Int>(key / strides_[k]);
      key %= strides_[k];
    }
    return ts;
  }

  std::optional<DpCell> cell(std::size_t layer, std::uint64_t key) const {
    if (dense_) {
      const auto& vec = dense_layers_.at(layer);
      if (vec.empty() || vec[key].value < 0) return std::nullopt;
      return vec[key];
    }
    const auto& map = sparse_layers_.at(layer);
    auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return it->second;
  }

  /// Records a value if it beats the cell; the first writer keeps ties.
  void improve(std::size_t layer, std::uint64_t key, Int value, std::int8_t pred) {
    if (dense_) {
      auto& vec = dense_layers_.at(layer);
      if (vec.empty()) vec.assign(size_, DpCell{});
      DpCell& cell = vec[key];
      if (value > cell.value) {
        if (cell.value < 0) ++finite_;
        cell.value = value;
        cell.pred = pred;
      }
      return;
    }
    auto& map = sparse_layers_.at(layer);
    auto [it, inserted] = map.try_emplace(key, DpCell{value, pred});
    if (inserted) {
      ++finite_;
    } else if (value > it->second.value) {
      it->second = DpCell{value, pred};
    }
  }

  /// Finite keys of one layer in ascending order, so both storage modes
  /// visit cells identically.
  std::vector<std::uint64_t> keys(std::size_t layer) const {
    std::vector<std::uint64_t> out;
    if (dense_) {
      const auto& vec = dense_layers_.at(layer);
      for (std::uint64_t key = 0; key < vec.size(); ++key) {
        if (vec[key].value >= 0) out.push_back(key);
      }
      return out;
    }
    const auto& map = sparse_layers_.at(layer);
    out.reserve(map.size());
    for (const auto& [key, cell] : map) out.push_back(key);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<Int> dims_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
  bool dense_ = true;
  std::size_t finite_ = 0;
  std::vector<std::vector<DpCell>> dense_layers_;
  std::vector<std::unordered_map<std::uint64_t, DpCell>> sparse_layers_;
};

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

/// Busy time per segment can never exceed the total processing time, so
/// wide release gaps do not inflate the table.
inline std::vector<Int> table_dims(const Instance& inst, const BoundaryProfile& prof) {
  Int sum_p = 0;
  for (const Job& job : inst.jobs()) sum_p += job.p;
  std::vector<Int> dims(prof.cap.size());
  for (std::size_t k = 0; k < dims.size(); ++k) dims[k] = std::min(prof.cap[k], sum_p) + 1;
  return dims;
}

inline std::uint64_t table_cell_bound(const Instance& inst, const BoundaryProfile& prof) {
  std::uint64_t total = inst.size() + 1;
  for (Int dim : table_dims(inst, prof)) total = sat_mul(total, static_cast<std::uint64_t>(dim));
  return total;
}

}  // namespace detail

struct DpRun {
  Int value = 0;
  std::uint64_t best_cell = 0;
  DpTable table;
};

/// Runs the layered recurrence for one profile. Layer j holds the best
/// early weight over the first j jobs in due-date order, indexed by the
/// busy time already committed to each segment; a job is either skipped
/// (tardy) or appended to the end of one segment's busy prefix.
inline DpRun dp_solve(const Instance& inst, const BoundaryProfile& prof) {
  if (inst.empty()) throw input_error("cannot solve an empty instance");
  DpConfig cfg = make_dp_config(inst);
  const std::size_t m = cfg.releases.size();
  if (prof.start.size() != m || prof.cap.size() != m) {
    throw state_error("profile shape does not match the instance's release dates");
  }

  DpTable table(inst.size() + 1, detail::table_dims(inst, prof));
  table.improve(0, 0, 0, kDpPredBase);
  for (std::size_t j = 1; j <= inst.size(); ++j) {
    const Job& job = inst.job(cfg.job_order[j - 1]);
    for (std::uint64_t key : table.keys(j - 1)) {
      Int base = table.cell(j - 1, key)->value;
      table.improve(j, key, base, kDpPredSkip);
      std::vector<Int> ts = table.unpack(key);
      for (std::size_t k = 0; k < m; ++k) {
        if (cfg.releases[k] < job.r) continue;  // segment opens before the job exists
        Int busy = ts[k] + job.p;
        if (busy > prof.cap[k]) continue;                // would spill into the next segment
        if (prof.start[k] + busy > job.d) continue;      // would finish past the due date
        table.improve(j, key + static_cast<std::uint64_t>(job.p) * table.stride(k),
                      base + job.w, static_cast<std::int8_t>(k));
      }
    }
  }

  DpRun run{-1, 0, std::move(table)};
  for (std::uint64_t key : run.table.keys(inst.size())) {
    Int value = run.table.cell(inst.size(), key)->value;
    if (value > run.value) {
      run.value = value;
      run.best_cell = key;
    }
  }
  if (run.value < 0) throw internal_error("the empty busy profile vanished from the table");
  return run;
}

/// Walks predecessors from a finite cell down to the base, placing each
/// consumed job at the end of its segment's busy prefix at that moment.
/// Returns only the early placements; callers append the tardy tail.
inline Schedule backtrack(const Instance& inst, const BoundaryProfile& prof,
                          const DpTable& table, std::size_t layer, std::vector<Int> ts) {
  DpConfig cfg = make_dp_config(inst);
  if (layer >= table.layers()) {
    throw state_error("layer " + std::to_string(layer) + " is beyond the table");
  }
  Schedule sched;
  std::uint64_t key = table.pack(ts);
  for (std::size_t j = layer; j > 0; --j) {
    std::optional<DpCell> cell = table.cell(j, key);
    if (!cell) throw internal_error("predecessor chain left the table");
    if (cell->pred == kDpPredSkip) continue;
    if (cell->pred < 0 || static_cast<std::size_t>(cell->pred) >= ts.size()) {
      throw internal_error("predecessor chain is malformed");
    }
    auto k = static_cast<std::size_t>(cell->pred);
    std::size_t job_idx = cfg.job_order[j - 1];
    const Job& job = inst.job(job_idx);
    sched.set(job_idx, prof.start[k] + ts[k] - job.p);
    ts[k] -= job.p;
    if (ts[k] < 0) throw internal_error("predecessor chain is malformed");
    key = table.pack(ts);
  }
  bool at_base = table.cell(0, key).has_value() &&
                 std::all_of(ts.begin(), ts.end(), [](Int t) { return t == 0; });
  if (!at_base) throw internal_error("predecessor chain did not reach the base cell");
  return sched;
}

struct DpOutcome {
  Int best_weight = 0;
  Schedule schedule;
  long profiles = 0;            // consistent profiles run
  std::size_t table_cells = 0;  // largest finite-cell count over profiles
};

/// Exact solve: the best table value over every boundary profile, with a
/// schedule realizing it. Every profile's value is achievable, and the
/// optimum is found under the profile matching its crossing pattern, so the
/// maximum over profiles is the true optimum.
inline DpOutcome solve_dp(const Instance& inst, const DpOptions& opts = {}) {
  if (inst.empty()) throw input_error("cannot solve an empty instance");
  std::vector<BoundaryProfile> profiles = enumerate_profiles(inst, opts);
  DpConfig cfg = make_dp_config(inst);

  // Structural bounds: the profile grid has at most p_max^(r#-1) corners,
  // and one table at most n * (n * p_max + 1)^r# finite cells past the base.
  std::uint64_t profile_bound = 1;
  for (std::size_t k = 1; k < cfg.releases.size(); ++k) {
    profile_bound = detail::sat_mul(profile_bound, static_cast<std::uint64_t>(inst.p_max()));
  }
  if (profiles.size() > profile_bound) {
    throw internal_error("profile enumeration exceeded its bound");
  }
  std::uint64_t per_dim =
      detail::sat_mul(inst.size(), static_cast<std::uint64_t>(inst.p_max()));
  if (per_dim != std::numeric_limits<std::uint64_t>::max()) ++per_dim;
  std::uint64_t cell_bound = inst.size();
  for (std::size_t k = 0; k < cfg.releases.size(); ++k) {
    cell_bound = detail::sat_mul(cell_bound, per_dim);
  }

  DpOutcome out;
  out.profiles = static_cast<long>(profiles.size());
  const BoundaryProfile* best_prof = nullptr;
  std::optional<DpRun> best_run;
  for (const BoundaryProfile& prof : profiles) {
    std::uint64_t need = detail::table_cell_bound(inst, prof);
    if (need > opts.cell_budget) {
      throw size_error("a profile table needs up to " + std::to_string(need) +
                       " cells; the budget is " + std::to_string(opts.cell_budget));
    }
    DpRun run = dp_solve(inst, prof);
    if (run.table.finite_cells() - 1 > cell_bound) {
      throw internal_error("table grew past its structural bound");
    }
    out.table_cells = std::max(out.table_cells, run.table.finite_cells());
    if (!best_run || run.value > best_run->value) {
      best_prof = &prof;
      best_run.emplace(std::move(run));
    }
  }
  if (!best_run) throw internal_error("no profile produced a table");

  Schedule sched = backtrack(inst, *best_prof, best_run->table, inst.size(),
                             best_run->table.unpack(best_run->best_cell));
  append_tardy_tail(inst, sched);
  out.best_weight = objective(inst, sched);
  if (out.best_weight != best_run->value) {
    throw internal_error("backtracked schedule disagrees with the table value");
  }
  out.schedule = std::move(sched);
  return out;
}

}  // namespace tardy
