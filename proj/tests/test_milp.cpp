#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "fixtures.hpp"
#include "tardy/errors.hpp"
#include "tardy/milp/bnb.hpp"
#include "tardy/milp/model.hpp"
#include "tardy/milp/simplex.hpp"

using tardy::milp::Model;
using tardy::milp::Rat;
using tardy::milp::rat;
using tardy::milp::Relation;
using tardy::milp::Solution;
using tardy::milp::SolveStatus;
using tardy::milp::VarKind;

TEST_CASE("simplex solves a two-variable lp exactly") {
  Model m;
  auto x = m.add_variable("x", VarKind::continuous);
  auto y = m.add_variable("y", VarKind::continuous);
  m.set_objective_coeff(x, 1);
  m.set_objective_coeff(y, 1);
  m.add_constraint("c1", {{x, 1}, {y, 2}}, Relation::le, 4);
  m.add_constraint("c2", {{x, 3}, {y, 1}}, Relation::le, 6);

  Solution s = tardy::milp::solve_lp(m);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.objective == rat(14, 5));
  REQUIRE(s.values[x] == rat(8, 5));
  REQUIRE(s.values[y] == rat(6, 5));
}

TEST_CASE("simplex detects infeasible and unbounded models") {
  SECTION("bound against constraint") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous, rat(3));
    m.set_objective_coeff(x, 1);
    m.add_constraint("cap", {{x, 1}}, Relation::le, 1);
    REQUIRE(tardy::milp::solve_lp(m).status == SolveStatus::infeasible);
  }
  SECTION("two constraints with empty intersection") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous);
    auto y = m.add_variable("y", VarKind::continuous);
    m.add_constraint("lo", {{x, 1}, {y, 1}}, Relation::ge, 5);
    m.add_constraint("hi", {{x, 1}, {y, 1}}, Relation::le, 4);
    REQUIRE(tardy::milp::solve_lp(m).status == SolveStatus::infeasible);
  }
  SECTION("unbounded ray") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous);
    auto y = m.add_variable("y", VarKind::continuous);
    m.set_objective_coeff(x, 1);
    m.add_constraint("c", {{x, 1}, {y, -1}}, Relation::le, 2);
    REQUIRE(tardy::milp::solve_lp(m).status == SolveStatus::unbounded);
  }
  SECTION("bounded purely by variable bounds") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous, rat(0), rat(5));
    m.set_objective_coeff(x, 1);
    Solution s = tardy::milp::solve_lp(m);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.objective == rat(5));
  }
}

TEST_CASE("simplex handles equalities and negative right-hand sides") {
  SECTION("equality row") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous);
    auto y = m.add_variable("y", VarKind::continuous, rat(0), rat(1));
    m.set_objective_coeff(x, 2);
    m.set_objective_coeff(y, 3);
    m.add_constraint("sum", {{x, 1}, {y, 1}}, Relation::eq, 2);
    Solution s = tardy::milp::solve_lp(m);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.objective == rat(5));  // y = 1, x = 1
    REQUIRE(s.values[x] + s.values[y] == rat(2));
  }
  SECTION("negative rhs requires phase one") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous, rat(0), rat(5));
    m.set_objective_coeff(x, -1);
    m.add_constraint("floor", {{x, -1}}, Relation::le, -2);
    Solution s = tardy::milp::solve_lp(m);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.values[x] == rat(2));
    REQUIRE(s.objective == rat(-2));
  }
  SECTION("redundant equality rows survive drive-out") {
    Model m;
    auto x = m.add_variable("x", VarKind::continuous);
    auto y = m.add_variable("y", VarKind::continuous);
    m.set_objective_coeff(x, 1);
    m.add_constraint("a", {{x, 1}, {y, 1}}, Relation::eq, 3);
    m.add_constraint("b", {{x, 2}, {y, 2}}, Relation::eq, 6);
    Solution s = tardy::milp::solve_lp(m);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.objective == rat(3));
  }
}

TEST_CASE("bound folding fixes variables and tightens singletons") {
  Model m;
  auto x = m.add_variable("x", VarKind::continuous, rat(2), rat(2));
  auto y = m.add_variable("y", VarKind::continuous);
  m.set_objective_coeff(x, 10);
  m.set_objective_coeff(y, 1);
  m.add_constraint("pin", {{y, 2}}, Relation::le, 7);    // y <= 7/2
  m.add_constraint("mix", {{x, 1}, {y, 1}}, Relation::le, 5);  // y <= 3
  Solution s = tardy::milp::solve_lp(m);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.values[x] == rat(2));
  REQUIRE(s.values[y] == rat(3));
  REQUIRE(s.objective == rat(23));
}

TEST_CASE("simplex terminates on a classic degenerate cycling model") {
  // Known to cycle under naive pivot selection; the anti-cycling rule must
  // reach the optimum 1/20 (dual certificate y = (0, 3/2, 1/20)).
  Model m;
  auto x1 = m.add_variable("x1", VarKind::continuous);
  auto x2 = m.add_variable("x2", VarKind::continuous);
  auto x3 = m.add_variable("x3", VarKind::continuous);
  auto x4 = m.add_variable("x4", VarKind::continuous);
  m.set_objective_coeff(x1, rat(3, 4));
  m.set_objective_coeff(x2, rat(-150));
  m.set_objective_coeff(x3, rat(1, 50));
  m.set_objective_coeff(x4, rat(-6));
  m.add_constraint("r1", {{x1, rat(1, 4)}, {x2, rat(-60)}, {x3, rat(-1, 25)}, {x4, rat(9)}},
                   Relation::le, 0);
  m.add_constraint("r2", {{x1, rat(1, 2)}, {x2, rat(-90)}, {x3, rat(-1, 50)}, {x4, rat(3)}},
                   Relation::le, 0);
  m.add_constraint("r3", {{x3, 1}}, Relation::le, 1);
  Solution s = tardy::milp::solve_lp(m);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.objective == rat(1, 20));
}

TEST_CASE("pivot budget aborts runaway solves") {
  Model m;
  auto x = m.add_variable("x", VarKind::continuous);
  auto y = m.add_variable("y", VarKind::continuous);
  m.set_objective_coeff(x, 1);
  m.set_objective_coeff(y, 2);
  m.add_constraint("c1", {{x, 1}, {y, 2}}, Relation::le, 4);
  m.add_constraint("c2", {{x, 3}, {y, 1}}, Relation::le, 6);
  tardy::milp::LpOptions opts;
  opts.max_pivots = 1;
  REQUIRE_THROWS_AS(tardy::milp::solve_lp(m, opts), tardy::internal_error);
}

TEST_CASE("branch and bound solves a small knapsack") {
  Model m;
  auto x = m.add_variable("x", VarKind::integer, rat(0), rat(1));
  auto y = m.add_variable("y", VarKind::integer, rat(0), rat(1));
  auto z = m.add_variable("z", VarKind::integer, rat(0), rat(1));
  m.set_objective_coeff(x, 3);
  m.set_objective_coeff(y, 4);
  m.set_objective_coeff(z, 5);
  m.add_constraint("cap", {{x, 3}, {y, 4}, {z, 5}}, Relation::le, 7);
  Solution s = tardy::milp::solve_milp(m);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.objective == rat(7));
  REQUIRE(s.values[x] == rat(1));
  REQUIRE(s.values[y] == rat(1));
  REQUIRE(s.values[z] == rat(0));
  REQUIRE(s.nodes >= 1);
}

TEST_CASE("branch and bound rounds fractional relaxations down correctly") {
  Model m;
  auto x = m.add_variable("x", VarKind::integer, rat(0), rat(5));
  m.set_objective_coeff(x, 1);
  m.add_constraint("half", {{x, 2}}, Relation::le, 3);
  Solution s = tardy::milp::solve_milp(m);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.objective == rat(1));
}

TEST_CASE("integer upper bounds are derived from covering rows") {
  SECTION("derivable") {
    Model m;
    auto x = m.add_variable("x", VarKind::integer);
    auto y = m.add_variable("y", VarKind::continuous, rat(0), rat(2));
    m.set_objective_coeff(x, 1);
    m.add_constraint("cover", {{x, 2}, {y, 1}}, Relation::le, 9);
    Solution s = tardy::milp::solve_milp(m);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.objective == rat(4));  // 2x <= 9 alone caps x at 4
  }
  SECTION("underivable") {
    Model m;
    auto x = m.add_variable("x", VarKind::integer);
    auto y = m.add_variable("y", VarKind::continuous);
    m.set_objective_coeff(x, 1);
    m.add_constraint("open", {{x, 1}, {y, -1}}, Relation::le, 3);
    REQUIRE_THROWS_AS(tardy::milp::solve_milp(m), tardy::input_error);
  }
}

TEST_CASE("unbounded continuous direction surfaces at the root") {
  Model m;
  auto x = m.add_variable("x", VarKind::integer, rat(0), rat(2));
  auto y = m.add_variable("y", VarKind::continuous);
  m.set_objective_coeff(y, 1);
  m.add_constraint("only_x", {{x, 1}}, Relation::le, 2);
  Solution s = tardy::milp::solve_milp(m);
  REQUIRE(s.status == SolveStatus::unbounded);
}

TEST_CASE("node hook observes every explored relaxation") {
  Model m;
  auto x = m.add_variable("x", VarKind::integer, rat(0), rat(5));
  auto y = m.add_variable("y", VarKind::integer, rat(0), rat(5));
  m.set_objective_coeff(x, 2);
  m.set_objective_coeff(y, 3);
  m.add_constraint("c1", {{x, 3}, {y, 2}}, Relation::le, 12);
  m.add_constraint("c2", {{x, 1}, {y, 2}}, Relation::le, 6);
  tardy::milp::MilpOptions opts;
  long seen = 0;
  opts.on_node_lp = [&](const Solution& node) {
    ++seen;
    REQUIRE(node.status == SolveStatus::optimal);
    REQUIRE(tardy::milp::point_feasible(m, node.values));
  };
  Solution s = tardy::milp::solve_milp(m, opts);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(seen >= 1);
  REQUIRE(seen <= s.nodes);
}

namespace {

// Exhaustive integer-grid optimum over box bounds; feasibility by exact
// substitution only, so it shares no code path with the simplex.
std::optional<Rat> grid_optimum(const Model& m) {
  std::size_t n = m.variables().size();
  std::vector<long> lo(n), hi(n), cur(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& var = m.variables()[v];
    lo[v] = static_cast<long>(var.lower.get_num().get_si());
    hi[v] = static_cast<long>(var.upper->get_num().get_si());
    cur[v] = lo[v];
  }
  std::optional<Rat> best;
  while (true) {
    std::vector<Rat> point(n);
    for (std::size_t v = 0; v < n; ++v) point[v] = rat(cur[v]);
    if (tardy::milp::point_feasible(m, point)) {
      Rat val = tardy::milp::objective_value(m, point);
      if (!best || val > *best) best = val;
    }
    std::size_t v = 0;
    while (v < n && cur[v] == hi[v]) {
      cur[v] = lo[v];
      ++v;
    }
    if (v == n) break;
    ++cur[v];
  }
  return best;
}

}  // namespace

TEST_CASE("branch and bound matches grid enumeration on random integer models") {
  fixtures::Rng rng(0x51a7eb01);
  for (int trial = 0; trial < 60; ++trial) {
    Model m;
    int n = rng.uniform(1, 3);
    for (int v = 0; v < n; ++v) {
      long lo = rng.uniform(0, 1);
      long hi = lo + rng.uniform(0, 3);
      m.add_variable("g" + std::to_string(v), VarKind::integer, rat(lo), rat(hi));
      m.set_objective_coeff(static_cast<std::size_t>(v), rat(rng.uniform(-4, 4)));
    }
    int rows = rng.uniform(0, 3);
    for (int c = 0; c < rows; ++c) {
      std::vector<std::pair<std::size_t, Rat>> terms;
      for (int v = 0; v < n; ++v) {
        long coeff = rng.uniform(-3, 3);
        if (coeff != 0) terms.emplace_back(static_cast<std::size_t>(v), rat(coeff));
      }
      Relation rel = rng.uniform(0, 2) == 0 ? Relation::le
                    : rng.uniform(0, 1) == 0 ? Relation::ge
                                             : Relation::eq;
      m.add_constraint("r" + std::to_string(c), terms, rel, rat(rng.uniform(-4, 8)));
    }
    std::optional<Rat> expect = grid_optimum(m);
    Solution got = tardy::milp::solve_milp(m);
    if (expect) {
      REQUIRE(got.status == SolveStatus::optimal);
      REQUIRE(got.objective == *expect);
    } else {
      REQUIRE(got.status == SolveStatus::infeasible);
    }
  }
}
