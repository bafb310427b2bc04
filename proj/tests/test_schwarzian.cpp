#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "singerkit/min_principle.hpp"
#include "singerkit/rng.hpp"
#include "singerkit/schwarzian.hpp"

using namespace singerkit;

namespace {

MapSpec logistic(double mu) {
  return MapSpec::compile("mu*x*(1-x)", {{"mu", mu}}, Interval{0.0, 1.0});
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("closed form: logistic Sf(x) = -6/(1-2x)^2 for every mu") {
  for (double mu : {2.5, 3.3, 3.8, 4.0}) {
    const MapSpec f = logistic(mu);
    for (int i = 0; i < 200; ++i) {
      const double x = 0.003 + 0.994 * i / 199.0;
      if (std::abs(x - 0.5) < 1e-3) continue;
      const SchwarzianValue s = schwarzian_at(f, x, 1);
      REQUIRE(s.defined);
      const double oracle = -6.0 / ((1.0 - 2.0 * x) * (1.0 - 2.0 * x));
      CHECK(std::abs(s.value - oracle) <= 1e-10 * std::abs(oracle));
    }
  }
}

TEST_CASE("identity map has zero Schwarzian exactly") {
  const MapSpec id = MapSpec::compile("x", {}, Interval{0.0, 1.0});
  for (double x : {0.1, 0.37, 0.92}) {
    const SchwarzianValue s = schwarzian_at(id, x, 1);
    CHECK(s.defined);
    CHECK(s.value == 0.0);
  }
}

TEST_CASE("undefined at critical points of the iterate") {
  CHECK_FALSE(schwarzian_at(logistic(3.8), 0.5, 1).defined);
  CHECK_FALSE(schwarzian_at(logistic(4.0), 0.5, 2).defined);
  CHECK_THROWS_AS(schwarzian_at(logistic(3.8), 0.3, 0), ConfigError);
}

TEST_CASE("two methods agree: spot check and random triples") {
  const MapSpec f = logistic(3.8);
  const SchwarzianValue a = schwarzian_at(f, 0.21, 6);
  const SchwarzianValue b = schwarzian_iterate_recursive(f, 0.21, 6);
  REQUIRE(a.defined);
  REQUIRE(b.defined);
  CHECK(std::abs(a.value - b.value) <= 1e-8 * std::abs(a.value));
  CHECK(schwarzian_iterate_recursive(f, 0.21, 1).value == schwarzian_at(f, 0.21, 1).value);

  Rng rng(424242);
  int exercised = 0;
  for (int trial = 0; trial < 500; ++trial) {
    MapSpec map = [&] {
      switch (rng.below(3)) {
        case 0: return logistic(rng.uniform(2.5, 4.0));
        case 1:
          return MapSpec::compile("a*x^3+b*x^2+c*x",
                                  {{"a", rng.uniform(-1.0, 1.0)},
                                   {"b", rng.uniform(-1.0, 1.0)},
                                   {"c", rng.uniform(-1.0, 1.0)}},
                                  Interval{-1.0, 1.0});
        default:
          return MapSpec::compile("a*sin(3.141592653589793*x)",
                                  {{"a", rng.uniform(0.6, 1.0)}}, Interval{0.0, 1.0});
      }
    }();
    const double x = rng.uniform(map.domain.lo, map.domain.hi);
    const int n = 1 + static_cast<int>(rng.below(10));
    const SchwarzianValue u = schwarzian_at(map, x, n);
    const SchwarzianValue v = schwarzian_iterate_recursive(map, x, n);
    if (!u.defined || !v.defined) continue;
    CAPTURE(map.id());
    CAPTURE(x);
    CAPTURE(n);
    CHECK(std::abs(u.value - v.value) <=
          1e-8 * std::max(1.0, std::max(std::abs(u.value), std::abs(v.value))));
    ++exercised;
  }
  CHECK(exercised > 300);
}

TEST_CASE("affine invariance: S(a*f+b) = Sf") {
  const MapSpec f = logistic(3.8);
  const MapSpec g = MapSpec::compile("s*(mu*x*(1-x))+t",
                                     {{"mu", 3.8}, {"s", 0.7}, {"t", -0.3}},
                                     Interval{0.0, 1.0});
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    if (std::abs(x - 0.5) < 1e-6) continue;
    const SchwarzianValue sf = schwarzian_at(f, x, 1);
    const SchwarzianValue sg = schwarzian_at(g, x, 1);
    REQUIRE(sf.defined);
    REQUIRE(sg.defined);
    CHECK(std::abs(sf.value - sg.value) <= 1e-10 * std::abs(sf.value));
  }
}

TEST_CASE("Moebius maps are annihilated") {
  const MapSpec m = MapSpec::compile("(2*x+1)/(x+3)", {}, Interval{0.0, 1.0});
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const SchwarzianValue s = schwarzian_at(m, x, 1);
    REQUIRE(s.defined);
    CHECK(std::abs(s.value) <= 1e-9);
  }
}

TEST_CASE("composition law: affine pairs have zero residual exactly") {
  const MapSpec h = MapSpec::compile("2*x+1", {}, Interval{0.0, 4.0});
  const MapSpec g = MapSpec::compile("0.5*x+0.25", {}, Interval{0.0, 1.0});
  for (double x : {0.0, 0.3, 0.77, 1.0}) {
    const auto r = verify_composition_law(h, g, x);
    REQUIRE(r.has_value());
    CHECK(*r == 0.0);
  }
}

TEST_CASE("composition law: logistic with itself and with random cubics") {
  const MapSpec f = logistic(3.8);
  const auto self = verify_composition_law(f, f, 0.3);
  REQUIRE(self.has_value());
  CHECK(*self <= 1e-9);

  Rng rng(90210);
  int exercised = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const MapSpec h = MapSpec::compile("a*x^3+b*x^2+c*x+d",
                                       {{"a", rng.uniform(-1.0, 1.0)},
                                        {"b", rng.uniform(-1.0, 1.0)},
                                        {"c", rng.uniform(-1.0, 1.0)},
                                        {"d", rng.uniform(-1.0, 1.0)}},
                                       Interval{-2.0, 2.0});
    const MapSpec g = logistic(rng.uniform(2.5, 4.0));
    const double x = rng.uniform(0.0, 1.0);
    const auto r = verify_composition_law(h, g, x);
    if (!r.has_value()) continue;
    CHECK(*r <= 1e-9);
    ++exercised;
  }
  CHECK(exercised > 900);
}

TEST_CASE("composition law rejects vanishing inner derivative") {
  const MapSpec f = logistic(3.8);
  CHECK_FALSE(verify_composition_law(f, f, 0.5).has_value());
}

TEST_CASE("identity chain at located points: logistic mu=3.8, n=1") {
  const MapSpec f = logistic(3.8);
  const CriticalPointScan scan = find_nonvanishing_critical_points(f, 2, 4096);
  CHECK_FALSE(scan.degenerate);
  REQUIRE(scan.points.size() == 2);
  // roots of 6*mu*x^2 - 6*mu*x + mu + 1 = 0
  const double off = std::sqrt(12.0 * 3.8 * (3.8 - 2.0)) / (12.0 * 3.8);
  CHECK(std::abs(scan.points[0] - (0.5 - off)) <= 1e-8);
  CHECK(std::abs(scan.points[1] - (0.5 + off)) <= 1e-8);
  for (double x : scan.points) {
    const ChainReport rep = identity_chain_check(f, 1, x);
    CHECK(rep.constraint_residual <= 1e-7);
    CHECK(rep.rearrange_a_residual <= 1e-7);
    CHECK(rep.rearrange_b_residual <= 1e-7);
    CHECK(rep.identity_residual <= 1e-7);
    CHECK(rep.quotient_sign == -1);
  }
}

TEST_CASE("identity chain at the cubic's positive-Schwarzian point") {
  const MapSpec f = MapSpec::compile("x^3/3+0.1*x", {}, Interval{-1.0, 1.0});
  // x=0: (f^2)''(0)=0 and (f^2)'(0)=0.01, so it qualifies for n=1
  const ChainReport rep = identity_chain_check(f, 1, 0.0);
  CHECK(rep.constraint_residual <= 1e-12);
  CHECK(rep.rearrange_a_residual <= 1e-12);
  CHECK(rep.rearrange_b_residual <= 1e-12);
  CHECK(rep.identity_residual <= 1e-12);
  CHECK(rep.quotient_sign == 1);  // Sf(0)=20 wins: quotient = 20*0.01 + 20
  CHECK(close_rel(rep.quotient, 20.2, 1e-9));
}

TEST_CASE("identity chain preconditions") {
  const MapSpec f = logistic(3.8);
  CHECK_THROWS_AS(identity_chain_check(f, 0, 0.3), ConfigError);
  CHECK_THROWS_AS(identity_chain_check(f, 1, 0.3), PreconditionError);  // not critical
  CHECK_THROWS_AS(identity_chain_check(f, 1, 0.5), PreconditionError);  // vanishing
}

TEST_CASE("identity chain on an affine map is exactly 0 = 0") {
  const MapSpec f = MapSpec::compile("0.5*x+0.25", {}, Interval{0.0, 1.0});
  const ChainReport rep = identity_chain_check(f, 2, 0.37);
  CHECK(rep.constraint_lhs == 0.0);
  CHECK(rep.constraint_rhs == 0.0);
  CHECK(rep.constraint_residual == 0.0);
  CHECK(rep.rearrange_a_residual == 0.0);
  CHECK(rep.rearrange_b_residual == 0.0);
  CHECK(rep.identity_residual == 0.0);
  CHECK(rep.quotient == 0.0);
  CHECK(rep.quotient_sign == 0);
}

TEST_CASE("negativity scan: logistic is all-negative on a fine grid") {
  const NegativityReport rep = negativity_scan(logistic(3.8), 1, 10000);
  CHECK(rep.defined_count == 10000);
  CHECK(rep.nonnegative_count == 0);
  CHECK(rep.all_sampled_negative);
  CHECK(rep.max_value < 0.0);
  CHECK(rep.min_value <= rep.max_value);
}

TEST_CASE("negativity scan: cubic reports Sf(0) = 20") {
  const MapSpec f = MapSpec::compile("x^3/3+0.1*x", {}, Interval{-1.0, 1.0});
  const NegativityReport rep = negativity_scan(f, 1, 4097);  // odd grid hits x=0
  CHECK_FALSE(rep.all_sampled_negative);
  CHECK(rep.nonnegative_count > 0);
  CHECK(close_rel(rep.max_value, 20.0, 1e-9));
  CHECK(std::abs(rep.max_x) <= 1e-12);
  REQUIRE(!rep.nonnegative_witnesses.empty());
  CHECK(rep.nonnegative_witnesses.front().value >= 0.0);
}

TEST_CASE("negativity scan: identity map samples are all zero") {
  const MapSpec id = MapSpec::compile("x", {}, Interval{0.0, 1.0});
  const NegativityReport rep = negativity_scan(id, 1, 512);
  CHECK(rep.defined_count == 512);
  CHECK(rep.nonnegative_count == 512);
  CHECK(rep.min_value == 0.0);
  CHECK(rep.max_value == 0.0);
  CHECK_FALSE(rep.all_sampled_negative);
}

TEST_CASE("negativity scan: constant map is undefined everywhere") {
  const NegativityReport rep = negativity_scan(logistic(0.0), 1, 256);
  CHECK(rep.defined_count == 0);
  CHECK(rep.undefined_count == 256);
  CHECK_FALSE(rep.all_sampled_negative);
  CHECK_THROWS_AS(negativity_scan(logistic(3.8), 0, 256), ConfigError);
  CHECK_THROWS_AS(negativity_scan(logistic(3.8), 1, 1), ConfigError);
}

TEST_CASE("sign propagation: all-negative scans force negative chain quotients") {
  std::vector<MapSpec> maps;
  maps.push_back(logistic(3.2));
  maps.push_back(logistic(3.5));
  maps.push_back(logistic(3.8));
  maps.push_back(MapSpec::compile("a*sin(3.141592653589793*x)", {{"a", 0.9}},
                                  Interval{0.0, 1.0}));
  for (const MapSpec& map : maps) {
    const NegativityReport neg = negativity_scan(map, 1, 2048);
    REQUIRE(neg.all_sampled_negative);
    for (int n = 1; n <= 6; ++n) {
      const CriticalPointScan scan = find_nonvanishing_critical_points(map, n + 1, 2048);
      for (double x : scan.points) {
        const ChainReport rep = identity_chain_check(map, n, x);
        CAPTURE(map.id());
        CAPTURE(n);
        CAPTURE(x);
        CHECK(rep.quotient_sign == -1);
      }
    }
  }
}
