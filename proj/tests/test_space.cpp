#include "doctest.h"

#include <random>
#include <vector>

#include "mmkit/space.hpp"
#include "support/corpus.hpp"

using mmkit::FiniteMmSpace;
using mmkit::Rat;
using mmkit::ScaleFactor;

namespace {

FiniteMmSpace::Data y03_data() {
  FiniteMmSpace::Data d;
  d.labels = {"a", "b"};
  d.dist = {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
  d.weights = {Rat(7, 10), Rat(3, 10)};
  return d;
}

mmkit::errc validate_code(FiniteMmSpace::Data data) {
  try {
    FiniteMmSpace::validate(std::move(data));
  } catch (const mmkit::validation_error& e) {
    return e.code();
  }
  throw std::runtime_error("expected validation to fail");
}

}  // namespace

TEST_CASE("validate accepts well formed spaces") {
  auto x = FiniteMmSpace::validate(y03_data());
  CHECK(x.size() == 2);
  CHECK(x.diameter() == Rat(1));
  CHECK(x.max_weight() == Rat(7, 10));
  CHECK(x.min_weight() == Rat(3, 10));
  CHECK(x.min_positive_dist() == Rat(1));

  auto p = testkit::one_point();
  CHECK(p.size() == 1);
  CHECK(p.diameter() == Rat(0));
  CHECK(p.min_positive_dist() == Rat(0));
}

TEST_CASE("validate reports the first violation") {
  {
    auto d = y03_data();
    d.labels = {};
    d.dist = {};
    d.weights = {};
    CHECK(validate_code(std::move(d)) == mmkit::errc::dimension_mismatch);
  }
  {
    auto d = y03_data();
    d.weights.pop_back();
    CHECK(validate_code(std::move(d)) == mmkit::errc::dimension_mismatch);
  }
  {
    auto d = y03_data();
    d.dist[0].pop_back();
    CHECK(validate_code(std::move(d)) == mmkit::errc::dimension_mismatch);
  }
  {
    auto d = y03_data();
    d.dist[0][0] = Rat(1, 2);
    CHECK(validate_code(std::move(d)) == mmkit::errc::asymmetric_matrix);
  }
  {
    auto d = y03_data();
    d.dist[0][1] = Rat(2);
    CHECK(validate_code(std::move(d)) == mmkit::errc::asymmetric_matrix);
  }
  {
    auto d = y03_data();
    d.dist[0][1] = Rat(0);
    d.dist[1][0] = Rat(0);
    CHECK(validate_code(std::move(d)) ==
          mmkit::errc::zero_distance_distinct_points);
  }
  {
    auto d = y03_data();
    d.dist[0][1] = Rat(-1);
    d.dist[1][0] = Rat(-1);
    CHECK(validate_code(std::move(d)) ==
          mmkit::errc::zero_distance_distinct_points);
  }
  {
    FiniteMmSpace::Data d;
    d.labels = {"a", "b", "c"};
    d.dist = {{Rat(0), Rat(1), Rat(5)},
              {Rat(1), Rat(0), Rat(1)},
              {Rat(5), Rat(1), Rat(0)}};
    d.weights = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    CHECK(validate_code(std::move(d)) == mmkit::errc::triangle_violation);
  }
  {
    auto d = y03_data();
    d.weights = {Rat(11, 10), Rat(-1, 10)};
    CHECK(validate_code(std::move(d)) == mmkit::errc::nonpositive_weight);
  }
  {
    auto d = y03_data();
    d.weights = {Rat(1), Rat(1, 10)};
    CHECK(validate_code(std::move(d)) == mmkit::errc::weight_sum_not_one);
  }
}

TEST_CASE("scale multiplies distances and keeps weights") {
  auto x = testkit::x3();
  auto tx = scale(x, ScaleFactor(Rat(11, 10)));
  CHECK(tx.dist(0, 1) == Rat(11, 10));
  CHECK(tx.dist(0, 2) == Rat(11, 5));
  CHECK(tx.dist(1, 2) == Rat(33, 10));
  CHECK(tx.weights() == x.weights());
  CHECK(tx.labels() == x.labels());

  CHECK_THROWS_AS(ScaleFactor(Rat(0)), mmkit::precondition_error);
  CHECK_THROWS_AS(ScaleFactor(Rat(-1)), mmkit::precondition_error);
}

TEST_CASE("scale is a group action") {
  std::mt19937_64 rng(7001);
  const Rat factors[] = {Rat(1, 3), Rat(1, 2), Rat(2), Rat(7)};
  for (int i = 0; i < 8; ++i) {
    auto x = testkit::random_space(rng, 2 + i % 5);
    // scale(X, 1) is exactly X.
    auto ox = scale(x, ScaleFactor(Rat(1)));
    CHECK(ox.dist_matrix() == x.dist_matrix());
    CHECK(ox.weights() == x.weights());
    for (const Rat& s : factors) {
      for (const Rat& t : factors) {
        auto two_step = scale(scale(x, ScaleFactor(s)), ScaleFactor(t));
        auto one_step = scale(x, ScaleFactor(Rat(s * t)));
        CHECK(two_step.dist_matrix() == one_step.dist_matrix());
        CHECK(is_mm_isomorphic(two_step, one_step));
      }
    }
  }
}

TEST_CASE("scale output revalidates") {
  std::mt19937_64 rng(7002);
  for (int i = 0; i < 10; ++i) {
    auto x = testkit::random_space(rng, 2 + i % 6);
    auto tx = scale(x, ScaleFactor(Rat(3, 7)));
    FiniteMmSpace::Data d;
    d.labels = tx.labels();
    d.dist = tx.dist_matrix();
    d.weights = tx.weights();
    CHECK_NOTHROW(FiniteMmSpace::validate(std::move(d)));
  }
}

TEST_CASE("is_mm_isomorphic ignores labels and point order") {
  auto x = testkit::make_space({"a", "b"}, {{"0", "1"}, {"1", "0"}},
                               {"7/10", "3/10"});
  auto y = testkit::make_space({"q", "p"}, {{"0", "1"}, {"1", "0"}},
                               {"3/10", "7/10"});
  CHECK(is_mm_isomorphic(x, y));

  // Same metric, different measure: not isomorphic.
  auto z = testkit::make_space({"a", "b"}, {{"0", "1"}, {"1", "0"}},
                               {"1/2", "1/2"});
  CHECK_FALSE(is_mm_isomorphic(x, z));

  // Same measure, different metric: not isomorphic.
  auto w = testkit::make_space({"a", "b"}, {{"0", "2"}, {"2", "0"}},
                               {"7/10", "3/10"});
  CHECK_FALSE(is_mm_isomorphic(x, w));

  CHECK_FALSE(is_mm_isomorphic(x, testkit::one_point()));
}

TEST_CASE("is_mm_isomorphic is an equivalence on a sample") {
  std::mt19937_64 rng(7003);
  std::vector<FiniteMmSpace> sample;
  for (int i = 0; i < 6; ++i) {
    auto x = testkit::random_space(rng, 2 + i % 4);
    sample.push_back(x);
    // A relabelled, reordered copy of x joins the sample.
    std::size_t n = x.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < n; ++j) perm[j] = (j + 1) % n;
    FiniteMmSpace::Data d;
    d.labels.resize(n);
    d.dist.assign(n, std::vector<Rat>(n));
    d.weights.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      d.labels[a] = "r" + std::to_string(a);
      d.weights[a] = x.weight(perm[a]);
      for (std::size_t b = 0; b < n; ++b) d.dist[a][b] = x.dist(perm[a], perm[b]);
    }
    sample.push_back(FiniteMmSpace::validate(std::move(d)));
  }
  for (const auto& a : sample) CHECK(is_mm_isomorphic(a, a));
  for (const auto& a : sample) {
    for (const auto& b : sample) {
      CHECK(is_mm_isomorphic(a, b) == is_mm_isomorphic(b, a));
      for (const auto& c : sample) {
        if (is_mm_isomorphic(a, b) && is_mm_isomorphic(b, c)) {
          CHECK(is_mm_isomorphic(a, c));
        }
      }
    }
  }
}
