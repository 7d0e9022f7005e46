#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "pellabel/applications.hpp"
#include "test_helpers.hpp"

using pellabel::Comb;
using pellabel::CurveConfig;

TEST_CASE("unique-zero gate", "[applications]") {
  const auto no = pellabel::kdiff_unique_zero<double>(2, 2);
  CHECK_FALSE(no.exists_unique_zero);
  CHECK(no.required_degree == 2);

  const auto yes = pellabel::kdiff_unique_zero<double>(2, 3);
  CHECK(yes.exists_unique_zero);
  CHECK(yes.required_degree == 3);
  CHECK(yes.zero_order == 6);

  const auto g3 = pellabel::kdiff_unique_zero<double>(3, 2);
  CHECK(g3.exists_unique_zero);
  CHECK(g3.required_degree == 4);

  CHECK_THROWS_AS(pellabel::kdiff_unique_zero<double>(1, 2), pellabel::validation_error);
}

TEST_CASE("unique-zero witnesses are constructed and verified", "[applications]") {
  const auto a = pellabel::kdiff_unique_zero<double>(2, 3, true);
  REQUIRE(a.witness.has_value());
  CHECK(a.witness->final_residual < 1e-10);

  const auto b = pellabel::kdiff_unique_zero<double>(3, 2, true);
  REQUIRE(b.witness.has_value());

  // k = 1 needs no solver run: the witness is a branch-point differential.
  const auto c = pellabel::kdiff_unique_zero<double>(4, 1, true);
  CHECK(c.exists_unique_zero);
  CHECK_FALSE(c.witness.has_value());
  CHECK(!c.note.empty());
}

TEST_CASE("conjugate-support range gate", "[applications]") {
  // g=3, k=2: the interval collapses to the single point 8.
  CHECK(pellabel::kdiff_conjugate_range(3, 2, 8));
  CHECK_FALSE(pellabel::kdiff_conjugate_range(3, 2, 7));
  CHECK_FALSE(pellabel::kdiff_conjugate_range(3, 2, 9));

  // g=2, k=3: the lower bound (k+1)g - (k-1) = 6 already rejects n = 4.
  CHECK_FALSE(pellabel::kdiff_conjugate_range(2, 3, 4));
  const auto rep = pellabel::kdiff_conjugate_report<double>(2, 3, 4);
  CHECK(rep.conjugate_range.first == 6);
  CHECK(rep.conjugate_range.second == 6);

  // n = 2k(g-1) reduces to the unique-zero gate.
  for (auto [g, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 5}, {6, 6}})
    CHECK(pellabel::kdiff_conjugate_range(g, k, 2 * k * (g - 1)));
  CHECK_FALSE(pellabel::kdiff_conjugate_range(2, 2, 4));
}

TEST_CASE("torsion report on the symmetric genus 1 curve", "[applications]") {
  const CurveConfig<double> c({-2.0, -1.0, 1.0, 2.0});
  const auto report = pellabel::torsion_report(c, 50);
  REQUIRE(report.divisor_order.has_value());
  CHECK(*report.divisor_order == 2);
  CHECK(report.candidate_point_orders == std::vector<int>{2, 4});
  CHECK(report.forbidden_range_check);
}

TEST_CASE("torsion report on the unit band", "[applications]") {
  const CurveConfig<double> c({-1.0, 1.0});
  const auto report = pellabel::torsion_report(c, 50);
  CHECK(report.jacobian_trivial);
  CHECK(!report.notes.empty());
}

TEST_CASE("generic genus 2 curve carries no detectable torsion", "[applications]") {
  std::mt19937 rng(43);
  const CurveConfig<double> c = test_helpers::random_curve(rng, 2);
  const auto report = pellabel::torsion_report(c, 50);
  CHECK_FALSE(report.divisor_order.has_value());
  CHECK_FALSE(report.verdict.solvable);
}

TEST_CASE("single-step degeneration equals a direct solve", "[applications]") {
  const Comb<double> comb(2, {1}, {1.0});
  const auto family = pellabel::degeneration_family(comb, 1, 1);
  REQUIRE(family.completed);
  REQUIRE(family.steps.size() == 1);
  const auto direct = pellabel::solve(comb);
  const auto& got = family.steps[0].result.curve.endpoints();
  const auto& want = direct.curve.endpoints();
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == Catch::Approx(want[i]).margin(1e-12));
}

TEST_CASE("shrinking one tooth closes up the curve", "[applications]") {
  const Comb<double> comb(2, {1}, {1.0});
  const auto family = pellabel::degeneration_family(comb, 1, 8);
  REQUIRE(family.completed);
  REQUIRE(family.steps.size() == 8);
  for (size_t i = 1; i < family.steps.size(); ++i) {
    // The pinched gap closes at every step; its width tracks the halved
    // tooth once the family is deep enough.
    CHECK(family.steps[i].shrink_gap < family.steps[i - 1].shrink_gap);
    CHECK(family.steps[i].r_vector == comb.r_vector());
  }
  const auto& tail = family.steps;
  for (size_t i = 5; i < tail.size(); ++i) {
    CHECK(tail[i].min_endpoint_gap < tail[i - 1].min_endpoint_gap);
    CHECK(tail[i].shrink_gap / tail[i - 1].shrink_gap == Catch::Approx(0.5).margin(0.03));
  }
}

TEST_CASE("degeneration of the degree 3 genus 2 comb", "[applications]") {
  const Comb<double> comb(3, {1, 2}, {1.0, 1.0});
  const auto family = pellabel::degeneration_family(comb, 1, 3);
  REQUIRE(family.completed);
  for (const auto& step : family.steps) {
    CHECK(step.r_vector == std::vector<int>{1, 1, 1});
    CHECK(step.result.final_residual < 1e-10);
  }
}

TEST_CASE("degeneration input validation", "[applications]") {
  const Comb<double> comb(2, {1}, {1.0});
  CHECK_THROWS_AS(pellabel::degeneration_family(comb, 2, 3), pellabel::validation_error);
  CHECK_THROWS_AS(pellabel::degeneration_family(comb, 0, 3), pellabel::validation_error);
  CHECK_THROWS_AS(pellabel::degeneration_family(comb, 1, 0), pellabel::validation_error);
}
