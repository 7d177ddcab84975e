#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "tardy/core.hpp"

using namespace tardy;

namespace {

// Pairwise checker used as an independent oracle for validate().
bool naive_valid(const Instance& inst, const Schedule& sched) {
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (!sched.has(j)) return false;
    if (sched.start(j) < inst.job(j).r) return false;
    for (std::size_t k = j + 1; k < inst.size(); ++k) {
      if (!sched.has(k)) continue;
      Int a1 = sched.start(j), a2 = a1 + inst.job(j).p;
      Int b1 = sched.start(k), b2 = b1 + inst.job(k).p;
      if (a1 < b2 && b1 < a2) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("objective counts early weight only") {
  Instance e1 = fixtures::e1();
  Schedule sched({0, 3, 7});
  CHECK(objective(e1, sched) == 7);  // job 2 ends at 12 > 7, tardy
  CHECK(validate(e1, sched).ok());
}

TEST_CASE("validate reports every violation kind") {
  Instance inst({{2, 1, 5, 1}, {2, 0, 5, 1}, {3, 0, 9, 1}});

  SECTION("valid schedule") {
    Schedule sched({1, 3, 5});
    CHECK(validate(inst, sched).ok());
  }
  SECTION("release violation") {
    Schedule sched({0, 2, 5});
    auto report = validate(inst, sched);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::release);
    CHECK(report.violations[0].job_a == 0);
  }
  SECTION("overlap") {
    Schedule sched({1, 2, 5});
    auto report = validate(inst, sched);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::overlap);
  }
  SECTION("missing job") {
    Schedule sched;
    sched.set(0, 1);
    sched.set(2, 5);
    auto report = validate(inst, sched);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::missing);
    CHECK(report.violations[0].job_a == 1);
  }
  SECTION("objective throws on invalid") {
    Schedule sched({0, 2, 5});
    CHECK_THROWS_AS(objective(inst, sched), validation_error);
  }
}

TEST_CASE("validate agrees with pairwise checker on random schedules") {
  fixtures::Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    Instance inst = fixtures::random_small(rng);
    Schedule sched;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      sched.set(j, rng.uniform(0, 30));
    }
    CHECK(validate(inst, sched).ok() == naive_valid(inst, sched));
  }
}

TEST_CASE("instance construction enforces field ranges") {
  CHECK_THROWS_AS(Instance({{0, 0, 5, 1}}), input_error);
  CHECK_THROWS_AS(Instance({{1, -1, 5, 1}}), input_error);
  CHECK_THROWS_AS(Instance({{1, 0, -5, 1}}), input_error);
  CHECK_THROWS_AS(Instance({{1, 0, 5, -1}}), input_error);
  CHECK_NOTHROW(Instance({{1, 0, 0, 0}}));
}

TEST_CASE("stats counts distinct values per field") {
  ParamProfile prof = stats(fixtures::e1());
  CHECK(prof.p_count == 3);
  CHECK(prof.w_count == 3);
  CHECK(prof.r_count == 1);
  CHECK(prof.d_count == 1);

  ParamProfile prof2 = stats(fixtures::e2());
  CHECK(prof2.p_count == 2);
  CHECK(prof2.w_count == 2);
  CHECK(prof2.r_count == 2);
  CHECK(prof2.d_count == 2);
}

TEST_CASE("reverse_instance mirrors the timeline at d_max") {
  Instance e2 = fixtures::e2();  // d_max = 4
  Instance rev = reverse_instance(e2);
  CHECK(rev.job(0) == Job{2, 2, 4, 1});
  CHECK(rev.job(1) == Job{2, 0, 2, 1});
  CHECK(rev.job(2) == Job{3, 0, 4, 3});

  SECTION("involution when min release is zero") {
    Instance back = reverse_instance(rev);
    REQUIRE(back.size() == e2.size());
    for (std::size_t j = 0; j < e2.size(); ++j) CHECK(back.job(j) == e2.job(j));
  }
  SECTION("release beyond d_max is rejected") {
    Instance bad({{1, 9, 5, 1}});
    CHECK_THROWS_AS(reverse_instance(bad), input_error);
  }
}

TEST_CASE("reverse_schedule keeps the objective") {
  Instance e2 = fixtures::e2();
  Schedule sched({0, 2, 4});  // jobs 0 and 1 early, job 2 tardy at 4
  REQUIRE(objective(e2, sched) == 2);
  Schedule rev_sched = reverse_schedule(e2, sched);
  Instance rev = reverse_instance(e2);
  CHECK(validate(rev, rev_sched).ok());
  CHECK(objective(rev, rev_sched) == 2);
  // job 0 ran early at [0,2): mirrored start is 4 - 0 - 2 = 2.
  CHECK(rev_sched.start(0) == 2);
  CHECK(rev_sched.start(1) == 0);
}

TEST_CASE("reverse_schedule objective preservation on random instances") {
  fixtures::Rng rng(7);
  int done = 0;
  while (done < 200) {
    Instance inst = fixtures::random_small(rng);
    bool reversible = true;
    for (const Job& job : inst.jobs()) reversible = reversible && job.r <= inst.d_max();
    if (!reversible) continue;
    // Earliest-fit schedule in random job order: valid by construction.
    Schedule sched;
    Int cursor = 0;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      Int s = std::max(cursor, inst.job(j).r);
      sched.set(j, s);
      cursor = s + inst.job(j).p;
    }
    Instance rev = reverse_instance(inst);
    Schedule rev_sched = reverse_schedule(inst, sched);
    CHECK(validate(rev, rev_sched).ok());
    CHECK(objective(rev, rev_sched) == objective(inst, sched));
    ++done;
  }
}

TEST_CASE("append_tardy_tail places leftovers after all work, in index order") {
  Instance inst({{2, 0, 4, 1}, {3, 6, 2, 1}, {1, 0, 4, 1}});
  Schedule sched;
  sched.set(0, 0);
  append_tardy_tail(inst, sched);
  // d_max = 4; job 1 released at 6 starts there, job 2 follows job 1.
  CHECK(sched.start(1) == 6);
  CHECK(sched.start(2) == 9);
  CHECK(validate(inst, sched).ok());
  CHECK(objective(inst, sched) == 1);
}
