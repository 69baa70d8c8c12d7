#include "doctest.h"

#include <string>
#include <vector>

#include "mmkit/experiments.hpp"
#include "mmkit/invariants.hpp"
#include "support/corpus.hpp"

using mmkit::ExperimentReport;
using mmkit::KappaTuple;
using mmkit::Rat;

TEST_CASE("two point generator") {
  auto y = mmkit::gen_y_eps(Rat(3, 10));
  CHECK(y.size() == 2);
  CHECK(y.dist(0, 1) == Rat(1));
  CHECK(y.weight(0) == Rat(7, 10));
  CHECK(y.weight(1) == Rat(3, 10));
  CHECK(is_mm_isomorphic(y, testkit::y03()));

  CHECK_THROWS_AS(mmkit::gen_y_eps(Rat(0)), mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::gen_y_eps(Rat(1)), mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::gen_y_eps(Rat(-1, 10)), mmkit::precondition_error);
}

TEST_CASE("one point extension generator") {
  auto x3 = testkit::x3();
  auto z = mmkit::gen_z_eps(x3, Rat(1, 10), Rat(3));
  REQUIRE(z.size() == 4);
  CHECK(z.labels().back() == "z");
  CHECK(z.weight(0) == Rat(9, 20));
  CHECK(z.weight(1) == Rat(9, 40));
  CHECK(z.weight(2) == Rat(9, 40));
  CHECK(z.weight(3) == Rat(1, 10));
  for (std::size_t i = 0; i < 3; ++i) CHECK(z.dist(i, 3) == Rat(3));
  CHECK(z.dist(0, 1) == Rat(1));

  // A larger radius is allowed; a smaller one or a degenerate one is not.
  CHECK(mmkit::gen_z_eps(x3, Rat(1, 10), Rat(7)).dist(0, 3) == Rat(7));
  CHECK_THROWS_AS(mmkit::gen_z_eps(x3, Rat(1, 10), Rat(2)),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::gen_z_eps(x3, Rat(1, 10), Rat(0)),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::gen_z_eps(x3, Rat(0), Rat(3)),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::gen_z_eps(x3, Rat(1), Rat(3)),
                  mmkit::precondition_error);

  // The new label steps aside when "z" is taken.
  auto taken = testkit::make_space({"z", "b"}, {{"0", "1"}, {"1", "0"}},
                                   {"1/2", "1/2"});
  auto z2 = mmkit::gen_z_eps(taken, Rat(1, 4), Rat(1));
  CHECK(z2.labels().back() == "z_");
}

TEST_CASE("collapse experiment satisfies both bounds") {
  auto x3 = testkit::x3();
  std::vector<Rat> eps_list{Rat(1, 10), Rat(1, 100)};
  std::vector<Rat> r_list{Rat(10), Rat(100), Rat(1000)};
  auto report = mmkit::run_non_urysohn(x3, eps_list, r_list, 2);

  CHECK(report.name == "non_urysohn");
  CHECK(report.columns ==
        std::vector<std::string>{"eps", "r", "box_scaled_vs_y",
                                 "box_z_vs_x"});
  REQUIRE(report.rows.size() == 6);
  REQUIRE(report.assertions.size() == 12);
  CHECK(report.passed());
  for (const auto& a : report.assertions) {
    CHECK(a.pass);
    CHECK(a.op == "le");
    CHECK(a.lhs <= a.rhs);
  }
  // Rows iterate eps outer, r inner.
  CHECK(report.rows[0][0] == "1/10");
  CHECK(report.rows[0][1] == "10");
  CHECK(report.rows[5][0] == "1/100");
  CHECK(report.rows[5][1] == "1000");

  CHECK_THROWS_AS(
      mmkit::run_non_urysohn(testkit::one_point(), eps_list, r_list),
      mmkit::precondition_error);
}

TEST_CASE("collapse experiment is independent of the job count") {
  auto x3 = testkit::x3();
  std::vector<Rat> eps_list{Rat(1, 10)};
  std::vector<Rat> r_list{Rat(10), Rat(100)};
  auto a = mmkit::run_non_urysohn(x3, eps_list, r_list, 1);
  auto b = mmkit::run_non_urysohn(x3, eps_list, r_list, 4);
  CHECK(a.rows == b.rows);
  REQUIRE(a.assertions.size() == b.assertions.size());
  for (std::size_t i = 0; i < a.assertions.size(); ++i) {
    CHECK(a.assertions[i].label == b.assertions[i].label);
    CHECK(a.assertions[i].lhs == b.assertions[i].lhs);
    CHECK(a.assertions[i].rhs == b.assertions[i].rhs);
  }
}

TEST_CASE("limit formula recovers the separation of the base space") {
  auto x3 = testkit::x3();
  KappaTuple kappa({Rat(1, 4), Rat(1, 4)});
  std::vector<Rat> eps_schedule;
  for (int n = 2; n <= 16; ++n) eps_schedule.push_back(Rat(1, n));
  std::vector<Rat> deltas{Rat(1, 8), Rat(1, 16), Rat(1, 32)};
  auto report = mmkit::run_limit_formula(x3, kappa, eps_schedule, deltas);

  CHECK(report.name == "limit_formula");
  REQUIRE(report.columns.size() == 4);
  CHECK(report.columns[1] == "delta=1/8");
  REQUIRE(report.rows.size() == eps_schedule.size());
  REQUIRE(report.assertions.size() == 3);
  CHECK(report.passed());
  for (const auto& a : report.assertions) {
    CHECK(a.op == "eq");
    CHECK(a.lhs == Rat(3));
    CHECK(a.rhs == Rat(3));
  }

  // The two point space has separation one at small demands.
  auto yr = mmkit::run_limit_formula(testkit::y03(),
                                     KappaTuple({Rat(1, 10), Rat(1, 10)}),
                                     eps_schedule, {Rat(1, 32)});
  CHECK(yr.passed());
  CHECK(yr.assertions.front().rhs == Rat(1));
}

TEST_CASE("limit formula rejects bad grids") {
  auto x3 = testkit::x3();
  KappaTuple kappa({Rat(1, 4), Rat(1, 4)});
  std::vector<Rat> eps{Rat(1, 2)};
  CHECK_THROWS_AS(mmkit::run_limit_formula(x3, kappa, eps, {Rat(0)}),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::run_limit_formula(x3, kappa, eps, {Rat(1, 4)}),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::run_limit_formula(x3, kappa, eps, {Rat(1, 2)}),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::run_limit_formula(x3, kappa, {}, {Rat(1, 8)}),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(
      mmkit::run_limit_formula(x3, kappa, eps, std::vector<Rat>{}),
      mmkit::precondition_error);
}

TEST_CASE("a too coarse schedule fails the limit assertion honestly") {
  // At eps = 1/5 the added point still blocks the two quarter demands, so
  // the final row reads 2 instead of 3 and the report fails.
  auto x3 = testkit::x3();
  KappaTuple kappa({Rat(1, 4), Rat(1, 4)});
  std::vector<Rat> eps_schedule;
  for (int n = 2; n <= 5; ++n) eps_schedule.push_back(Rat(1, n));
  auto report =
      mmkit::run_limit_formula(x3, kappa, eps_schedule, {Rat(1, 32)});
  CHECK_FALSE(report.passed());
  CHECK(report.assertions.front().lhs == Rat(2));
  CHECK(report.assertions.front().rhs == Rat(3));
}

TEST_CASE("scale recovery reads the factor exactly") {
  auto x3 = testkit::x3();
  std::vector<Rat> noise{Rat(1, 10), Rat(1, 100), Rat(1, 1000)};
  auto report = mmkit::run_scale_recovery(x3, Rat(7), noise);
  CHECK(report.name == "scale_recovery");
  CHECK(report.columns ==
        std::vector<std::string>{"eps", "r_delta_ratio", "sep_ratio"});
  REQUIRE(report.rows.size() == 3);
  REQUIRE(report.assertions.size() == 6);
  CHECK(report.passed());
  for (const auto& row : report.rows) {
    CHECK(row[1] == "7");
    CHECK(row[2] == "7");
  }

  CHECK(mmkit::run_scale_recovery(x3, Rat(1), noise).passed());
  CHECK(mmkit::run_scale_recovery(testkit::y03(), Rat(1, 3), noise).passed());

  CHECK_THROWS_AS(mmkit::run_scale_recovery(testkit::one_point(), Rat(2),
                                            noise),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::run_scale_recovery(x3, Rat(0), noise),
                  mmkit::precondition_error);
  CHECK_THROWS_AS(mmkit::run_scale_recovery(x3, Rat(-2), noise),
                  mmkit::precondition_error);
}

TEST_CASE("passed reflects the stored assertion flags") {
  ExperimentReport r;
  r.name = "manual";
  r.columns = {"v"};
  r.rows = {{"1"}};
  CHECK(r.passed());
  r.assertions.push_back(
      mmkit::ReportAssertion{"ok", Rat(1), "le", Rat(2), true});
  CHECK(r.passed());
  r.assertions.push_back(
      mmkit::ReportAssertion{"bad", Rat(3), "le", Rat(2), false});
  CHECK_FALSE(r.passed());
}
