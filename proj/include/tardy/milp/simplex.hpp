#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tardy/errors.hpp"
#include "tardy/milp/model.hpp"

namespace tardy::milp {

struct LpOptions {
  /// Hard pivot/flip budget; 0 picks 1000 + 50*(rows+cols) automatically.
  /// Bland's rule guarantees finite termination, so hitting the budget
  /// signals a kernel bug.
  long max_pivots = 0;
};

namespace detail {

enum class VStat { basic, at_lower, at_upper, dead };

/// Working copy of variable bounds plus row liveness during folding.
struct Folded {
  std::vector<Rat> lower;
  std::vector<std::optional<Rat>> upper;
  // Per surviving row: active terms over unfixed vars, relation, rhs.
  std::vector<std::vector<std::pair<std::size_t, Rat>>> terms;
  std::vector<Relation> rel;
  std::vector<Rat> rhs;
  bool infeasible = false;
};

inline bool is_fixed(const Folded& f, std::size_t v) {
  return f.upper[v].has_value() && f.lower[v] == *f.upper[v];
}

/// Tightens a single variable bound; returns false on an empty interval.
inline bool tighten(Folded& f, std::size_t v, bool is_upper, const Rat& value) {
  if (is_upper) {
    if (!f.upper[v] || value < *f.upper[v]) f.upper[v] = value;
  } else {
    if (value > f.lower[v]) f.lower[v] = value;
  }
  return !(f.upper[v] && f.lower[v] > *f.upper[v]);
}

/// Folds fixed variables and singleton rows to a fixpoint. Equivalence-
/// preserving and exact; no relaxation is involved.
inline Folded fold(const Model& model) {
  Folded f;
  const auto& vars = model.variables();
  f.lower.reserve(vars.size());
  f.upper.reserve(vars.size());
  for (const Variable& v : vars) {
    f.lower.push_back(v.lower);
    f.upper.push_back(v.upper);
    if (v.upper && v.lower > *v.upper) f.infeasible = true;
  }
  std::vector<bool> live(model.constraints().size(), true);
  bool progress = true;
  while (progress && !f.infeasible) {
    progress = false;
    for (std::size_t i = 0; i < model.constraints().size(); ++i) {
      if (!live[i]) continue;
      const Constraint& row = model.constraints()[i];
      std::vector<std::pair<std::size_t, Rat>> active;
      Rat rhs = row.rhs;
      for (const auto& [var, coeff] : row.terms) {
        if (is_fixed(f, var)) {
          rhs -= coeff * f.lower[var];
        } else {
          active.emplace_back(var, coeff);
        }
      }
      if (active.empty()) {
        bool sat = (row.rel == Relation::le && 0 <= rhs) ||
                   (row.rel == Relation::eq && 0 == rhs) ||
                   (row.rel == Relation::ge && 0 >= rhs);
        if (!sat) f.infeasible = true;
        live[i] = false;
        progress = true;
      } else if (active.size() == 1) {
        auto [var, coeff] = active.front();
        Rat bound = rhs / coeff;
        bool ok = true;
        Relation rel = row.rel;
        if (coeff < 0 && rel == Relation::le) rel = Relation::ge;
        else if (coeff < 0 && rel == Relation::ge) rel = Relation::le;
        if (rel == Relation::le) ok = tighten(f, var, true, bound);
        else if (rel == Relation::ge) ok = tighten(f, var, false, bound);
        else ok = tighten(f, var, true, bound) && tighten(f, var, false, bound);
        if (!ok) f.infeasible = true;
        live[i] = false;
        progress = true;
      }
    }
  }
  if (f.infeasible) return f;
  for (std::size_t i = 0; i < model.constraints().size(); ++i) {
    if (!live[i]) continue;
    const Constraint& row = model.constraints()[i];
    std::vector<std::pair<std::size_t, Rat>> active;
    Rat rhs = row.rhs;
    for (const auto& [var, coeff] : row.terms) {
      if (is_fixed(f, var)) {
        rhs -= coeff * f.lower[var];
      } else {
        active.emplace_back(var, coeff);
      }
    }
    f.terms.push_back(std::move(active));
    f.rel.push_back(row.rel);
    f.rhs.push_back(std::move(rhs));
  }
  return f;
}

/// Dense bounded-variable tableau. Column order: structural actives,
/// then slacks, then artificials. All structural columns are shifted to
/// lower bound zero.
struct Tableau {
  std::vector<std::vector<Rat>> row;  // m x ncols, equals B^-1 A throughout
  std::vector<Rat> xb;                // current value of each row's basic var
  std::vector<std::size_t> basis;     // per row: column index
  std::vector<VStat> stat;            // per column
  std::vector<std::optional<Rat>> ub;  // per column, in shifted space
  std::size_t art_begin = 0;
  long pivots = 0;
  long budget = 0;

  std::size_t ncols() const { return stat.size(); }

  void bump() {
    if (++pivots > budget) {
      throw internal_error("simplex pivot budget exceeded (" +
                           std::to_string(budget) + ")");
    }
  }

  /// Algebraic basis change on (leave_row, enter_col); callers keep xb
  /// consistent themselves.
  void pivot(std::size_t lr, std::size_t ec, std::vector<Rat>& zrow) {
    Rat piv = row[lr][ec];
    for (Rat& cell : row[lr]) cell /= piv;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == lr) continue;
      Rat factor = row[i][ec];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (row[lr][j] != 0) row[i][j] -= factor * row[lr][j];
      }
    }
    Rat zf = zrow[ec];
    if (zf != 0) {
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (row[lr][j] != 0) zrow[j] -= zf * row[lr][j];
      }
    }
  }

  /// Reduced costs for the given column costs under the current basis.
  std::vector<Rat> reduced_costs(const std::vector<Rat>& cost) const {
    std::vector<Rat> z = cost;
    for (std::size_t i = 0; i < row.size(); ++i) {
      Rat cb = cost[basis[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (row[i][j] != 0) z[j] -= cb * row[i][j];
      }
    }
    return z;
  }
};

enum class PhaseEnd { optimal, unbounded };

/// Bland-rule iteration: entering is the smallest-index improving column,
/// the blocker is the smallest-index variable among minimum-ratio ties
/// (the entering variable's own opposite bound counts as a blocker).
inline PhaseEnd iterate(Tableau& t, std::vector<Rat>& zrow) {
  for (;;) {
    std::size_t enter = t.ncols();
    for (std::size_t j = 0; j < t.ncols(); ++j) {
      if (t.stat[j] == VStat::basic || t.stat[j] == VStat::dead) continue;
      if ((t.stat[j] == VStat::at_lower && zrow[j] > 0) ||
          (t.stat[j] == VStat::at_upper && zrow[j] < 0)) {
        enter = j;
        break;
      }
    }
    if (enter == t.ncols()) return PhaseEnd::optimal;
    int dir = t.stat[enter] == VStat::at_lower ? 1 : -1;

    bool have_theta = false;
    Rat theta = 0;
    std::size_t block_var = 0;
    std::size_t block_row = std::numeric_limits<std::size_t>::max();
    if (t.ub[enter]) {
      theta = *t.ub[enter];
      have_theta = true;
      block_var = enter;
    }
    for (std::size_t i = 0; i < t.row.size(); ++i) {
      Rat delta = t.row[i][enter];
      if (dir > 0) delta = -delta;
      if (delta == 0) continue;
      Rat cand;
      if (delta < 0) {
        cand = t.xb[i] / -delta;  // basic variable falls to zero
      } else {
        const std::optional<Rat>& cap = t.ub[t.basis[i]];
        if (!cap) continue;
        cand = (*cap - t.xb[i]) / delta;  // basic variable climbs to its cap
      }
      if (!have_theta || cand < theta ||
          (cand == theta && t.basis[i] < block_var)) {
        have_theta = true;
        theta = cand;
        block_var = t.basis[i];
        block_row = i;
      }
    }
    if (!have_theta) return PhaseEnd::unbounded;
    t.bump();

    for (std::size_t i = 0; i < t.row.size(); ++i) {
      Rat delta = t.row[i][enter];
      if (dir > 0) delta = -delta;
      if (delta != 0) t.xb[i] += theta * delta;
    }
    if (block_var == enter && block_row == std::numeric_limits<std::size_t>::max()) {
      t.stat[enter] = dir > 0 ? VStat::at_upper : VStat::at_lower;
      continue;
    }
    std::size_t lr = block_row;
    Rat leave_delta = t.row[lr][enter];
    if (dir > 0) leave_delta = -leave_delta;
    t.stat[t.basis[lr]] = leave_delta < 0 ? VStat::at_lower : VStat::at_upper;
    Rat enter_value;
    if (dir > 0) {
      enter_value = theta;
    } else {
      enter_value = *t.ub[enter] - theta;
    }
    t.pivot(lr, enter, zrow);
    t.basis[lr] = enter;
    t.stat[enter] = VStat::basic;
    t.xb[lr] = enter_value;
  }
}

}  // namespace detail

/// Exact rational optimum of the linear relaxation (variable kinds are
/// ignored). Two-phase bounded-variable simplex with Bland's rule; every
/// optimal result is re-verified by exact substitution before it is
/// returned.
inline Solution solve_lp(const Model& model, const LpOptions& opts = {}) {
  using namespace detail;
  Solution out;
  Folded f = fold(model);
  if (f.infeasible) {
    out.status = SolveStatus::infeasible;
    return out;
  }

  const std::size_t n = model.variables().size();
  std::vector<std::size_t> active;  // original index per structural column
  std::vector<std::size_t> col_of(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_fixed(f, v)) {
      col_of[v] = active.size();
      active.push_back(v);
    }
  }
  const std::size_t m = f.terms.size();

  // Assemble shifted rows: sum a*y (REL) rhs2 with y >= 0.
  std::vector<std::vector<Rat>> a(m);
  std::vector<Rat> b(m);
  std::vector<Relation> rel = f.rel;
  for (std::size_t i = 0; i < m; ++i) {
    a[i].assign(active.size(), Rat(0));
    Rat shift = f.rhs[i];
    for (const auto& [var, coeff] : f.terms[i]) {
      a[i][col_of[var]] += coeff;
      shift -= coeff * f.lower[var];
    }
    b[i] = shift;
    if (rel[i] == Relation::ge) {
      for (Rat& cell : a[i]) cell = -cell;
      b[i] = -b[i];
      rel[i] = Relation::le;
    }
  }

  Tableau t;
  std::size_t n_slack = 0;
  for (std::size_t i = 0; i < m; ++i) n_slack += rel[i] == Relation::le;
  std::size_t slack_begin = active.size();
  t.art_begin = slack_begin + n_slack;

  std::vector<std::size_t> slack_col(m, std::numeric_limits<std::size_t>::max());
  {
    std::size_t next = slack_begin;
    for (std::size_t i = 0; i < m; ++i) {
      if (rel[i] == Relation::le) slack_col[i] = next++;
    }
  }

  // Row sign normalization so every right-hand side is nonnegative.
  std::vector<Rat> slack_coeff(m, Rat(1));
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) {
      for (Rat& cell : a[i]) cell = -cell;
      b[i] = -b[i];
      slack_coeff[i] = -1;
    }
  }

  std::size_t n_art = 0;
  std::vector<std::size_t> art_col(m, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < m; ++i) {
    bool slack_basic = slack_col[i] != std::numeric_limits<std::size_t>::max() &&
                       slack_coeff[i] == 1;
    if (!slack_basic) art_col[i] = t.art_begin + n_art++;
  }

  const std::size_t ncols = t.art_begin + n_art;
  t.row.assign(m, std::vector<Rat>(ncols, Rat(0)));
  t.xb.assign(m, Rat(0));
  t.basis.assign(m, 0);
  t.stat.assign(ncols, VStat::at_lower);
  t.ub.assign(ncols, std::nullopt);
  for (std::size_t k = 0; k < active.size(); ++k) {
    std::size_t v = active[k];
    if (f.upper[v]) t.ub[k] = *f.upper[v] - f.lower[v];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < active.size(); ++k) t.row[i][k] = a[i][k];
    if (slack_col[i] != std::numeric_limits<std::size_t>::max()) {
      t.row[i][slack_col[i]] = slack_coeff[i];
    }
    if (art_col[i] != std::numeric_limits<std::size_t>::max()) {
      t.row[i][art_col[i]] = 1;
      t.basis[i] = art_col[i];
    } else {
      t.basis[i] = slack_col[i];
    }
    t.stat[t.basis[i]] = VStat::basic;
    t.xb[i] = b[i];
  }
  t.budget = opts.max_pivots > 0
                 ? opts.max_pivots
                 : 1000 + 50 * static_cast<long>(m + ncols);

  // Phase 1: drive the artificial variables to zero.
  if (n_art > 0) {
    std::vector<Rat> cost(ncols, Rat(0));
    for (std::size_t j = t.art_begin; j < ncols; ++j) cost[j] = -1;
    std::vector<Rat> zrow = t.reduced_costs(cost);
    PhaseEnd end = iterate(t, zrow);
    if (end == PhaseEnd::unbounded) {
      throw internal_error("phase-1 objective cannot be unbounded");
    }
    Rat infeas = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] >= t.art_begin) infeas += t.xb[i];
    }
    if (infeas > 0) {
      out.status = SolveStatus::infeasible;
      out.pivots = t.pivots;
      return out;
    }
    // Swap lingering zero-valued artificials out of the basis; rows that
    // offer no pivot column are redundant and get dropped.
    for (std::size_t i = t.row.size(); i-- > 0;) {
      if (t.basis[i] < t.art_begin) continue;
      std::size_t ec = t.art_begin;
      for (std::size_t j = 0; j < t.art_begin; ++j) {
        if (t.stat[j] != VStat::basic && t.stat[j] != VStat::dead &&
            t.row[i][j] != 0) {
          ec = j;
          break;
        }
      }
      if (ec == t.art_begin) {
        t.stat[t.basis[i]] = VStat::dead;
        t.row.erase(t.row.begin() + static_cast<std::ptrdiff_t>(i));
        t.xb.erase(t.xb.begin() + static_cast<std::ptrdiff_t>(i));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      Rat enter_value = t.stat[ec] == VStat::at_upper ? *t.ub[ec] : Rat(0);
      std::vector<Rat> dummy(ncols, Rat(0));
      t.pivot(i, ec, dummy);
      t.stat[t.basis[i]] = VStat::dead;
      t.basis[i] = ec;
      t.stat[ec] = VStat::basic;
      t.xb[i] = enter_value;
    }
    for (std::size_t j = t.art_begin; j < ncols; ++j) t.stat[j] = VStat::dead;
  }

  // Phase 2: the real objective over shifted structural columns.
  {
    std::vector<Rat> cost(ncols, Rat(0));
    for (std::size_t k = 0; k < active.size(); ++k) {
      cost[k] = model.objective_coeff(active[k]);
    }
    std::vector<Rat> zrow = t.reduced_costs(cost);
    PhaseEnd end = iterate(t, zrow);
    if (end == PhaseEnd::unbounded) {
      out.status = SolveStatus::unbounded;
      out.pivots = t.pivots;
      return out;
    }
  }

  // Recover the point in original coordinates.
  std::vector<Rat> x(n, Rat(0));
  for (std::size_t v = 0; v < n; ++v) x[v] = f.lower[v];
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (t.stat[k] == VStat::at_upper) x[active[k]] += *t.ub[k];
  }
  for (std::size_t i = 0; i < t.row.size(); ++i) {
    if (t.basis[i] < active.size()) x[active[t.basis[i]]] += t.xb[i];
  }

  // Exact substitution recheck: a returned optimum is always a verified
  // feasible point whose objective is recomputed from scratch.
  if (!point_feasible(model, x)) {
    throw internal_error("simplex returned an infeasible point");
  }
  out.status = SolveStatus::optimal;
  out.values = std::move(x);
  out.objective = objective_value(model, out.values);
  out.pivots = t.pivots;
  return out;
}

}  // namespace tardy::milp
