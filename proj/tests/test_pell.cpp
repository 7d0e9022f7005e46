#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "pellabel/canonical.hpp"
#include "pellabel/pell.hpp"
#include "test_helpers.hpp"

using pellabel::CanonicalData;
using pellabel::CurveConfig;
using pellabel::PellSolution;
using pellabel::PellVerdict;
using pellabel::Poly;

namespace {

/// Brute-force oracle: compositions of r into g+1 positive parts with gcd 1,
/// enumerated by odometer rather than recursion.
std::vector<std::vector<int>> composition_oracle(int r, int g) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(static_cast<size_t>(g) + 1, 1);
  while (true) {
    if (std::accumulate(v.begin(), v.end(), 0) == r) {
      int gc = 0;
      for (int x : v) gc = std::gcd(gc, x);
      if (gc == 1) out.push_back(v);
    }
    size_t i = 0;
    while (i < v.size() && v[i] == r) {
      v[i] = 1;
      ++i;
    }
    if (i == v.size()) break;
    ++v[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("detection on the unit band", "[pell]") {
  const CurveConfig<double> c({-1.0, 1.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect(c, data, 10);
  REQUIRE(v.solvable);
  CHECK(*v.degree == 1);
  REQUIRE(v.r_vector.size() == 1);
  CHECK(v.r_vector[0] == 1);
  CHECK(v.primitive);
}

TEST_CASE("detection on the symmetric genus 1 curve", "[pell]") {
  const CurveConfig<double> c({-2.0, -1.0, 1.0, 2.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect(c, data, 10);
  REQUIRE(v.solvable);
  CHECK(*v.degree == 2);
  CHECK(v.r_vector == std::vector<int>{1, 1});
  CHECK(v.primitive);
  for (double dist : v.certificate) CHECK(dist < 1e-10);
}

TEST_CASE("generic curves are not solvable", "[pell]") {
  std::mt19937 rng(31);
  const CurveConfig<double> c = test_helpers::random_curve(rng, 2);
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect(c, data, 50);
  CHECK_FALSE(v.solvable);
  CHECK(!v.note.empty());
}

TEST_CASE("detector never certifies a degree at or below the genus", "[pell]") {
  std::mt19937 rng(37);
  for (int genus = 1; genus <= 3; ++genus) {
    for (int trial = 0; trial < 100; ++trial) {
      const CurveConfig<double> c = test_helpers::random_curve(rng, genus);
      const CanonicalData<double> data = pellabel::canonical(c);
      const PellVerdict<double> v = pellabel::detect(c, data, genus);
      CHECK_FALSE(v.solvable);
    }
  }
}

TEST_CASE("degree 5 solution on the unit band is the chebyshev polynomial", "[pell]") {
  const CurveConfig<double> c({-1.0, 1.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect_at(data, 5);
  REQUIRE(v.solvable);
  CHECK(v.r_vector == std::vector<int>{5});
  CHECK_FALSE(v.primitive);  // gcd 5: the composition of lower-degree solutions

  const PellSolution<double> sol = pellabel::synthesize(c, data, v);
  const std::vector<double> t5{0.0, 5.0, 0.0, -20.0, 0.0, 16.0};
  for (int i = 0; i <= 5; ++i) CHECK(sol.P[i] == Catch::Approx(t5[static_cast<size_t>(i)]).margin(1e-9));
  const std::vector<double> u4{1.0, 0.0, -12.0, 0.0, 16.0};
  for (int i = 0; i <= 4; ++i) CHECK(sol.Q[i] == Catch::Approx(u4[static_cast<size_t>(i)]).margin(1e-8));
  CHECK(sol.c == 1.0);
  CHECK(sol.residual < 1e-10);
  CHECK(sol.band_root_counts == std::vector<int>{5});
  CHECK(sol.sup_defect < 1e-9);
}

TEST_CASE("explicit genus 1 solution", "[pell]") {
  const CurveConfig<double> c({-2.0, -1.0, 1.0, 2.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect(c, data, 10);
  REQUIRE(v.solvable);
  const PellSolution<double> sol = pellabel::synthesize(c, data, v);

  // Monic form: P = x^2 - 5/2, Q = 1, c = 9/4.
  CHECK(sol.P_monic[2] == Catch::Approx(1.0).margin(1e-9));
  CHECK(sol.P_monic[1] == Catch::Approx(0.0).margin(1e-9));
  CHECK(sol.P_monic[0] == Catch::Approx(-2.5).margin(1e-8));
  REQUIRE(sol.Q_monic.degree() == 0);
  CHECK(sol.Q_monic[0] == Catch::Approx(1.0).margin(1e-8));
  CHECK(sol.c_monic == Catch::Approx(2.25).margin(1e-8));

  CHECK(sol.residual < 1e-8);
  CHECK(sol.band_root_counts == v.r_vector);
  CHECK(sol.theta_endpoint_defect < 1e-9);
}

TEST_CASE("band root counts match the verdict on an asymmetric curve", "[pell]") {
  // Witness from the inverse direction is exercised elsewhere; here, force a
  // higher degree on the unit band split by an affine map and check counts.
  const CurveConfig<double> c({-1.0, 1.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  for (int r : {2, 3, 7}) {
    const PellVerdict<double> v = pellabel::detect_at(data, r);
    REQUIRE(v.solvable);
    const PellSolution<double> sol = pellabel::synthesize(c, data, v);
    CHECK(sol.band_root_counts == v.r_vector);
    CHECK(sol.residual < 1e-9);
  }
}

TEST_CASE("equioscillation on each band", "[pell]") {
  const CurveConfig<double> c({-2.0, -1.0, 1.0, 2.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect(c, data, 10);
  const PellSolution<double> sol = pellabel::synthesize(c, data, v);
  const Poly<double> dp = sol.P.derivative();
  for (int j = 0; j <= c.genus(); ++j) {
    std::vector<double> ext{c.band_lo(j)};
    for (double t : pellabel::roots_in_interval(dp, c.band_lo(j), c.band_hi(j))) ext.push_back(t);
    ext.push_back(c.band_hi(j));
    REQUIRE(static_cast<int>(ext.size()) == v.r_vector[static_cast<size_t>(j)] + 1);
    for (size_t i = 0; i < ext.size(); ++i) {
      const double val = sol.P(ext[i]);
      CHECK(std::abs(std::abs(val) - 1.0) < 1e-7);
      if (i > 0) CHECK(sol.P(ext[i - 1]) * val < 0);
    }
  }
}

TEST_CASE("verdict and solution are invariant under affine rescaling", "[pell]") {
  const CurveConfig<double> c({-2.0, -1.0, 1.0, 2.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect(c, data, 10);
  const PellSolution<double> sol = pellabel::synthesize(c, data, v);

  const double alpha = 1.7, beta = 0.4;
  std::vector<double> moved;
  for (double e : c.endpoints()) moved.push_back(alpha * e + beta);
  const CurveConfig<double> cm((std::vector<double>(moved)));
  const CanonicalData<double> dm = pellabel::canonical(cm);
  const PellVerdict<double> vm = pellabel::detect(cm, dm, 10);
  REQUIRE(vm.solvable);
  CHECK(*vm.degree == *v.degree);
  CHECK(vm.r_vector == v.r_vector);

  const PellSolution<double> sm = pellabel::synthesize(cm, dm, vm);
  // P of the moved curve composed with the map equals P of the original.
  const Poly<double> back = sm.P.compose_affine(alpha, beta);
  for (int i = 0; i <= back.degree(); ++i)
    CHECK(back[i] == Catch::Approx(sol.P[i]).margin(1e-8));
}

TEST_CASE("verification certificates", "[pell]") {
  const CurveConfig<double> c({-1.0, 1.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellVerdict<double> v = pellabel::detect_at(data, 3);
  PellSolution<double> sol = pellabel::synthesize(c, data, v);

  const auto good = pellabel::verify(c, sol);
  CHECK(good.pass);
  CHECK(good.residual < 1e-11);
  CHECK(good.logderiv_rel_err < 1e-6);
  CHECK(good.division_rem < 1e-10);
  CHECK(good.division_qq_err < 1e-8);

  // Injected constant-term defect is detected at its own magnitude.
  std::vector<double> bad = sol.P.coeffs();
  bad[0] += 1e-3;
  sol.P = Poly<double>(bad);
  const auto broken = pellabel::verify(c, sol);
  CHECK_FALSE(broken.pass);
  CHECK(broken.residual > 1e-5);
  CHECK(broken.residual < 1e-1);
}

TEST_CASE("genus 1 verification passes", "[pell]") {
  const CurveConfig<double> c({-2.0, -1.0, 1.0, 2.0});
  const CanonicalData<double> data = pellabel::canonical(c);
  const PellSolution<double> sol =
      pellabel::synthesize(c, data, pellabel::detect(c, data, 10));
  const auto cert = pellabel::verify(c, sol);
  CHECK(cert.pass);
}

TEST_CASE("primitive partition enumeration", "[pell]") {
  CHECK(pellabel::enumerate_primitive_partitions(3, 2) ==
        std::vector<std::vector<int>>{{1, 1, 1}});

  const auto p41 = pellabel::enumerate_primitive_partitions(4, 1);
  CHECK(p41 == std::vector<std::vector<int>>{{1, 3}, {3, 1}});

  auto p52 = pellabel::enumerate_primitive_partitions(5, 2);
  std::sort(p52.begin(), p52.end());
  CHECK(p52.size() == 6);
  CHECK(p52 == composition_oracle(5, 2));

  for (int r = 1; r <= 7; ++r)
    for (int g = 0; g <= 3; ++g) {
      auto mine = pellabel::enumerate_primitive_partitions(r, g);
      std::sort(mine.begin(), mine.end());
      CHECK(mine == composition_oracle(r, g));
    }
}
