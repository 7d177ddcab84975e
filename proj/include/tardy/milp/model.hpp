#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tardy/errors.hpp"

namespace tardy::milp {

/// Exact rational scalar. All kernel arithmetic is exact; there are no
/// epsilon tolerances anywhere.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integral(const Rat& q) { return q.get_den() == 1; }

inline Rat floor_rat(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rat(f);
}

inline Rat ceil_rat(const Rat& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rat(c);
}

enum class VarKind { continuous, integer };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  Rat lower = 0;
  std::optional<Rat> upper;
};

enum class Relation { le, eq, ge };

/// Sparse row: sum of coeff * var REL rhs.
struct Constraint {
  std::string name;
  std::vector<std::pair<std::size_t, Rat>> terms;
  Relation rel = Relation::le;
  Rat rhs = 0;
};

/// A maximization model over rational data.
class Model {
 public:
  std::size_t add_variable(std::string name, VarKind kind, Rat lower = Rat(0),
                           std::optional<Rat> upper = std::nullopt) {
    if (upper && *upper < lower) {
      throw input_error("variable " + name + " has empty bound interval");
    }
    variables_.push_back({std::move(name), kind, std::move(lower), std::move(upper)});
    return variables_.size() - 1;
  }

  /// Replaces a variable's bound interval. Empty intervals are allowed
  /// here so branch-and-bound can detect them as infeasible children.
  void set_bounds(std::size_t var, Rat lower, std::optional<Rat> upper) {
    check_var(var);
    variables_[var].lower = std::move(lower);
    variables_[var].upper = std::move(upper);
  }

  void set_objective_coeff(std::size_t var, Rat coeff) {
    check_var(var);
    objective_[var] = std::move(coeff);
  }

  std::size_t add_constraint(std::string name,
                             std::vector<std::pair<std::size_t, Rat>> terms,
                             Relation rel, Rat rhs) {
    std::map<std::size_t, Rat> merged;
    for (auto& [var, coeff] : terms) {
      check_var(var);
      merged[var] += coeff;
    }
    Constraint row;
    row.name = std::move(name);
    for (auto& [var, coeff] : merged) {
      if (coeff != 0) row.terms.emplace_back(var, std::move(coeff));
    }
    row.rel = rel;
    row.rhs = std::move(rhs);
    constraints_.push_back(std::move(row));
    return constraints_.size() - 1;
  }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::map<std::size_t, Rat>& objective() const { return objective_; }

  Rat objective_coeff(std::size_t var) const {
    auto it = objective_.find(var);
    return it == objective_.end() ? Rat(0) : it->second;
  }

  std::size_t num_integer_vars() const {
    std::size_t count = 0;
    for (const Variable& v : variables_) count += v.kind == VarKind::integer;
    return count;
  }

 private:
  void check_var(std::size_t var) const {
    if (var >= variables_.size()) {
      throw state_error("model references undeclared variable index " +
                        std::to_string(var));
    }
  }

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::map<std::size_t, Rat> objective_;
};

enum class SolveStatus { optimal, infeasible, unbounded };

struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  Rat objective = 0;
  std::vector<Rat> values;  // by variable index; empty unless optimal
  long pivots = 0;          // simplex pivots (and bound flips) spent
  long nodes = 0;           // branch-and-bound nodes solved
};

/// Exact evaluation of one row at a point.
inline Rat row_activity(const Constraint& row, const std::vector<Rat>& x) {
  Rat acc = 0;
  for (const auto& [var, coeff] : row.terms) acc += coeff * x.at(var);
  return acc;
}

inline bool row_satisfied(const Constraint& row, const std::vector<Rat>& x) {
  Rat act = row_activity(row, x);
  switch (row.rel) {
    case Relation::le: return act <= row.rhs;
    case Relation::eq: return act == row.rhs;
    case Relation::ge: return act >= row.rhs;
  }
  return false;
}

/// Exact feasibility check of a full point against rows and bounds.
inline bool point_feasible(const Model& model, const std::vector<Rat>& x) {
  for (std::size_t v = 0; v < model.variables().size(); ++v) {
    const Variable& var = model.variables()[v];
    if (x.at(v) < var.lower) return false;
    if (var.upper && x.at(v) > *var.upper) return false;
  }
  for (const Constraint& row : model.constraints()) {
    if (!row_satisfied(row, x)) return false;
  }
  return true;
}

inline Rat objective_value(const Model& model, const std::vector<Rat>& x) {
  Rat acc = 0;
  for (const auto& [var, coeff] : model.objective()) acc += coeff * x.at(var);
  return acc;
}

}  // namespace tardy::milp
