#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fixtures.hpp"
#include "tardy/json_io.hpp"

using namespace tardy;

namespace {

LoadedInstance load_str(const std::string& text) {
  std::istringstream in(text);
  return load_instance(in);
}

}  // namespace

TEST_CASE("instance round-trips through JSON") {
  Instance e2 = fixtures::e2();
  std::ostringstream out;
  save_instance(out, e2);
  LoadedInstance loaded = load_str(out.str());
  REQUIRE(loaded.instance.size() == e2.size());
  for (std::size_t j = 0; j < e2.size(); ++j) CHECK(loaded.instance.job(j) == e2.job(j));
  CHECK(loaded.weight_offset == 0);
  CHECK(loaded.zero_length_removed == 0);
}

TEST_CASE("instance loader is strict") {
  SECTION("unknown top-level field") {
    CHECK_THROWS_AS(load_str(R"({"jobs":[],"name":"x"})"), input_error);
  }
  SECTION("unknown job field") {
    CHECK_THROWS_AS(load_str(R"({"jobs":[{"p":1,"r":0,"d":3,"w":1,"id":7}]})"),
                    input_error);
  }
  SECTION("missing job field") {
    CHECK_THROWS_AS(load_str(R"({"jobs":[{"p":1,"r":0,"d":3}]})"), input_error);
  }
  SECTION("non-integer number") {
    CHECK_THROWS_AS(load_str(R"({"jobs":[{"p":1.5,"r":0,"d":3,"w":1}]})"), input_error);
  }
  SECTION("negative value") {
    CHECK_THROWS_AS(load_str(R"({"jobs":[{"p":1,"r":-2,"d":3,"w":1}]})"), input_error);
  }
  SECTION("not an object") {
    CHECK_THROWS_AS(load_str(R"([1,2,3])"), input_error);
  }
  SECTION("malformed JSON") {
    CHECK_THROWS_AS(load_str("{"), input_error);
  }
}

TEST_CASE("zero-length jobs are folded into the weight offset") {
  LoadedInstance loaded = load_str(
      R"({"jobs":[{"p":0,"r":0,"d":3,"w":5},
                  {"p":0,"r":7,"d":3,"w":9},
                  {"p":2,"r":0,"d":4,"w":1}]})");
  // First zero-length job is early at its release (0 <= 3): +5.
  // Second can never be early (released after its due date): +0.
  CHECK(loaded.weight_offset == 5);
  CHECK(loaded.zero_length_removed == 2);
  REQUIRE(loaded.instance.size() == 1);
  CHECK(loaded.instance.job(0) == Job{2, 0, 4, 1});
}

TEST_CASE("schedule loader is strict and pairs with an instance") {
  SECTION("round-trip") {
    Schedule sched({4, 0, 9});
    std::ostringstream out;
    save_schedule(out, sched);
    std::istringstream in(out.str());
    Schedule loaded = load_schedule(in, 3);
    CHECK(loaded == sched);
  }
  SECTION("duplicate job index") {
    std::istringstream in(R"({"starts":[{"job":0,"start":1},{"job":0,"start":2}]})");
    CHECK_THROWS_AS(load_schedule(in, 3), input_error);
  }
  SECTION("job index out of range") {
    std::istringstream in(R"({"starts":[{"job":3,"start":1}]})");
    CHECK_THROWS_AS(load_schedule(in, 3), input_error);
  }
  SECTION("unknown field") {
    std::istringstream in(R"({"starts":[{"job":0,"start":1,"end":3}]})");
    CHECK_THROWS_AS(load_schedule(in, 3), input_error);
  }
  SECTION("partial schedules load; validate reports the gap") {
    std::istringstream in(R"({"starts":[{"job":0,"start":1}]})");
    Schedule loaded = load_schedule(in, 2);
    CHECK(loaded.has(0));
    CHECK(!loaded.has(1));
  }
}

TEST_CASE("digest is stable and distinguishes instances") {
  std::string d1 = instance_digest(fixtures::e1());
  std::string d2 = instance_digest(fixtures::e2());
  CHECK(d1 == instance_digest(fixtures::e1()));
  CHECK(d1 != d2);
  CHECK(d1.size() == 16);
}
