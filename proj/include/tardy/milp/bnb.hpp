#pragma once

#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "tardy/errors.hpp"
#include "tardy/milp/model.hpp"
#include "tardy/milp/simplex.hpp"

namespace tardy::milp {

struct MilpOptions {
  LpOptions lp;
  long max_nodes = 1000000;
  /// Observes the optimal LP relaxation of every explored node.
  std::function<void(const Solution&)> on_node_lp;
  /// Vetoes candidate incumbents. Called when every integer variable is
  /// integral; may normalize the continuous coordinates in place (the
  /// adjusted point must stay feasible with the same objective). Returning
  /// false rejects the point: its integer assignment is carved out of the
  /// node's box and the search continues without it.
  std::function<bool(std::vector<Rat>&)> accept_integral;
};

namespace detail {

/// Smallest upper bound on var implied by a single row, treating every
/// other variable at its loosest feasible contribution. Returns nothing
/// when no row pins the variable.
inline std::optional<Rat> derive_upper(const Model& model, std::size_t var) {
  std::optional<Rat> best;
  auto consider = [&](const std::vector<std::pair<std::size_t, Rat>>& terms,
                      const Rat& rhs, bool negate) {
    Rat coeff_v = 0;
    Rat slack = negate ? -rhs : rhs;
    for (const auto& [v, c] : terms) {
      Rat coeff = negate ? -c : c;
      if (v == var) {
        coeff_v = coeff;
        continue;
      }
      const Variable& other = model.variables()[v];
      if (coeff > 0) {
        slack -= coeff * other.lower;
      } else if (other.upper) {
        slack -= coeff * *other.upper;
      } else {
        return;  // unbounded contribution; row proves nothing
      }
    }
    if (coeff_v <= 0) return;
    Rat cand = slack / coeff_v;
    if (!best || cand < *best) best = cand;
  };
  for (const Constraint& row : model.constraints()) {
    if (row.rel == Relation::le || row.rel == Relation::eq) {
      consider(row.terms, row.rhs, false);
    }
    if (row.rel == Relation::ge || row.rel == Relation::eq) {
      consider(row.terms, row.rhs, true);
    }
  }
  return best;
}

struct Node {
  std::optional<Rat> bound;  // parent LP value; empty means unknown (root)
  long id = 0;
  std::vector<Rat> lower;
  std::vector<std::optional<Rat>> upper;
};

struct NodeOrder {
  // Max-heap on bound (unknown counts as +infinity), FIFO among equals.
  bool operator()(const Node& a, const Node& b) const {
    if (!a.bound && !b.bound) return a.id > b.id;
    if (!a.bound) return false;
    if (!b.bound) return true;
    if (*a.bound != *b.bound) return *a.bound < *b.bound;
    return a.id > b.id;
  }
};

}  // namespace detail

/// Exact branch-and-bound over the rational simplex. Best-bound node
/// order; branches on the most fractional integer variable (ties by
/// declaration order) with children x <= floor(v) and x >= ceil(v);
/// prunes nodes whose relaxation bound cannot beat the incumbent.
inline Solution solve_milp(const Model& model, const MilpOptions& opts = {}) {
  using namespace detail;
  const std::size_t n = model.variables().size();

  Model base = model;
  for (std::size_t v = 0; v < n; ++v) {
    const Variable& var = base.variables()[v];
    if (var.kind != VarKind::integer) continue;
    Rat lo = ceil_rat(var.lower);
    std::optional<Rat> hi = var.upper;
    if (!hi) hi = derive_upper(base, v);
    if (!hi) {
      throw input_error("integer variable " + var.name +
                        " has no finite upper bound and none is derivable "
                        "from the constraints");
    }
    *hi = floor_rat(*hi);
    base.set_bounds(v, lo, hi);
    if (lo > *hi) {
      Solution out;
      out.status = SolveStatus::infeasible;
      return out;
    }
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  Node root;
  root.id = 0;
  root.lower.reserve(n);
  root.upper.reserve(n);
  for (const Variable& var : base.variables()) {
    root.lower.push_back(var.lower);
    root.upper.push_back(var.upper);
  }
  queue.push(std::move(root));

  std::optional<Solution> incumbent;
  long next_id = 1;
  long nodes = 0;
  long pivots = 0;

  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    if (incumbent && node.bound && *node.bound <= incumbent->objective) continue;

    if (++nodes > opts.max_nodes) {
      throw size_error("branch-and-bound node budget exceeded (" +
                       std::to_string(opts.max_nodes) + ")");
    }
    Model sub = base;
    for (std::size_t v = 0; v < n; ++v) sub.set_bounds(v, node.lower[v], node.upper[v]);
    Solution relax = solve_lp(sub, opts.lp);
    pivots += relax.pivots;
    if (relax.status == SolveStatus::infeasible) continue;
    if (relax.status == SolveStatus::unbounded) {
      if (node.id != 0) {
        throw internal_error("child node unbounded under a bounded parent");
      }
      relax.nodes = nodes;
      relax.pivots = pivots;
      relax.values.clear();
      return relax;
    }
    if (opts.on_node_lp) opts.on_node_lp(relax);
    if (incumbent && relax.objective <= incumbent->objective) continue;

    // Most fractional integer variable, declaration order on ties.
    std::size_t branch_var = n;
    Rat branch_score = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (base.variables()[v].kind != VarKind::integer) continue;
      const Rat& val = relax.values[v];
      if (is_integral(val)) continue;
      Rat down = val - floor_rat(val);
      Rat up = ceil_rat(val) - val;
      Rat score = down < up ? down : up;
      if (branch_var == n || score > branch_score) {
        branch_var = v;
        branch_score = score;
      }
    }
    if (branch_var == n) {
      if (opts.accept_integral && !opts.accept_integral(relax.values)) {
        // Carve the rejected integer assignment out of this node's box:
        // children fix a prefix of the integer coordinates to the point and
        // push the next one off its value, jointly covering box minus point.
        for (std::size_t v = 0; v < n; ++v) {
          if (base.variables()[v].kind != VarKind::integer) continue;
          const Rat& pinned = relax.values[v];
          Node below = node;
          below.bound = relax.objective;
          below.id = next_id++;
          Rat below_ub = pinned - 1;
          if (!below.upper[v] || below_ub < *below.upper[v]) below.upper[v] = below_ub;
          if (below.lower[v] <= *below.upper[v]) queue.push(std::move(below));

          Node above = node;
          above.bound = relax.objective;
          above.id = next_id++;
          Rat above_lb = pinned + 1;
          if (above_lb > above.lower[v]) above.lower[v] = above_lb;
          if (!above.upper[v] || above.lower[v] <= *above.upper[v]) {
            queue.push(std::move(above));
          }

          node.lower[v] = pinned;
          node.upper[v] = pinned;
        }
        continue;
      }
      if (opts.accept_integral) {
        if (!point_feasible(sub, relax.values) ||
            objective_value(sub, relax.values) != relax.objective) {
          throw internal_error(
              "incumbent normalization changed feasibility or objective");
        }
      }
      incumbent = relax;  // integral and strictly better than any previous
      continue;
    }

    const Rat& val = relax.values[branch_var];
    Node down = node;
    down.bound = relax.objective;
    down.id = next_id++;
    Rat down_ub = floor_rat(val);
    if (!down.upper[branch_var] || down_ub < *down.upper[branch_var]) {
      down.upper[branch_var] = down_ub;
    }
    if (down.lower[branch_var] <= *down.upper[branch_var]) queue.push(std::move(down));

    Node up = node;
    up.bound = relax.objective;
    up.id = next_id++;
    Rat up_lb = ceil_rat(val);
    if (up_lb > up.lower[branch_var]) up.lower[branch_var] = up_lb;
    if (!up.upper[branch_var] || up.lower[branch_var] <= *up.upper[branch_var]) {
      queue.push(std::move(up));
    }
  }

  Solution out;
  if (incumbent) {
    out = *incumbent;
    out.status = SolveStatus::optimal;
  } else {
    out.status = SolveStatus::infeasible;
  }
  out.nodes = nodes;
  out.pivots = pivots;
  return out;
}

}  // namespace tardy::milp
