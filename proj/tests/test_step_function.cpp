#include "doctest.h"

#include "mmkit/step_function.hpp"

using mmkit::Rat;
using mmkit::StepFunction;

TEST_CASE("step function is left continuous with merged segments") {
  StepFunction f(Rat(0), Rat(1), {Rat(1, 4), Rat(1, 2)},
                 {Rat(3), Rat(1), Rat(0)});
  CHECK(f.domain_lo() == Rat(0));
  CHECK(f.domain_hi() == Rat(1));
  REQUIRE(f.breaks().size() == 2);
  REQUIRE(f.values().size() == 3);

  // Value at a breakpoint belongs to the segment ending there.
  CHECK(f.value_at(Rat(0)) == Rat(3));
  CHECK(f.value_at(Rat(1, 4)) == Rat(3));
  CHECK(f.value_at(Rat(26, 100)) == Rat(1));
  CHECK(f.value_at(Rat(1, 2)) == Rat(1));
  CHECK(f.value_at(Rat(3, 4)) == Rat(0));
  CHECK(f.value_at(Rat(1)) == Rat(0));

  CHECK(f.is_nonincreasing());
  CHECK_FALSE(f.is_nondecreasing());

  // Equal adjacent values merge away their breakpoint.
  StepFunction g(Rat(0), Rat(1), {Rat(1, 3), Rat(2, 3)},
                 {Rat(5), Rat(5), Rat(7)});
  REQUIRE(g.breaks().size() == 1);
  CHECK(g.breaks()[0] == Rat(2, 3));
  CHECK(g.values() == std::vector<Rat>{Rat(5), Rat(7)});

  StepFunction constant(Rat(0), Rat(2), {}, {Rat(4)});
  CHECK(constant.value_at(Rat(2)) == Rat(4));
  CHECK(constant.is_nondecreasing());
  CHECK(constant.is_nonincreasing());
}

TEST_CASE("step function construction preconditions") {
  using mmkit::precondition_error;
  CHECK_THROWS_AS(StepFunction(Rat(1), Rat(0), {}, {Rat(1)}),
                  precondition_error);
  CHECK_THROWS_AS(StepFunction(Rat(0), Rat(1), {Rat(1, 2)}, {Rat(1)}),
                  precondition_error);
  CHECK_THROWS_AS(StepFunction(Rat(0), Rat(1), {}, {}), precondition_error);
  // Breakpoints outside or on the boundary of the domain.
  CHECK_THROWS_AS(
      StepFunction(Rat(0), Rat(1), {Rat(0)}, {Rat(1), Rat(2)}),
      precondition_error);
  CHECK_THROWS_AS(
      StepFunction(Rat(0), Rat(1), {Rat(1)}, {Rat(1), Rat(2)}),
      precondition_error);
  // Non increasing breakpoints.
  CHECK_THROWS_AS(StepFunction(Rat(0), Rat(1), {Rat(1, 2), Rat(1, 2)},
                               {Rat(1), Rat(2), Rat(3)}),
                  precondition_error);

  StepFunction f(Rat(0), Rat(1), {}, {Rat(1)});
  CHECK_THROWS_AS(f.value_at(Rat(-1, 100)), precondition_error);
  CHECK_THROWS_AS(f.value_at(Rat(101, 100)), precondition_error);

  // A single point domain is allowed.
  StepFunction point(Rat(1, 2), Rat(1, 2), {}, {Rat(9)});
  CHECK(point.value_at(Rat(1, 2)) == Rat(9));
}

TEST_CASE("step integral is exact and additive") {
  StepFunction f(Rat(0), Rat(1), {Rat(1, 4), Rat(1, 2)},
                 {Rat(3), Rat(1), Rat(0)});
  // 3 * 1/4 + 1 * 1/4 + 0 * 1/2 = 1.
  CHECK(mmkit::step_integral(f, Rat(0), Rat(1)) == Rat(1));
  CHECK(mmkit::step_integral(f, Rat(0), Rat(1, 4)) == Rat(3, 4));
  CHECK(mmkit::step_integral(f, Rat(1, 8), Rat(3, 8)) ==
        Rat(3, 8) + Rat(1, 8));
  CHECK(mmkit::step_integral(f, Rat(1, 2), Rat(1)) == Rat(0));
  CHECK(mmkit::step_integral(f, Rat(1, 3), Rat(1, 3)) == Rat(0));

  // Additivity over a split point.
  Rat split(2, 5);
  CHECK(mmkit::step_integral(f, Rat(0), split) +
            mmkit::step_integral(f, split, Rat(1)) ==
        mmkit::step_integral(f, Rat(0), Rat(1)));

  using mmkit::precondition_error;
  CHECK_THROWS_AS(mmkit::step_integral(f, Rat(-1), Rat(1)),
                  precondition_error);
  CHECK_THROWS_AS(mmkit::step_integral(f, Rat(0), Rat(2)),
                  precondition_error);
  CHECK_THROWS_AS(mmkit::step_integral(f, Rat(1, 2), Rat(1, 4)),
                  precondition_error);
}
