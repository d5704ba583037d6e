#include <cmath>
#include <vector>

#include <doctest.h>

#include "../common/oracles.hpp"
#include "latentspec/errors.hpp"
#include "latentspec/nef_qvf.hpp"

using namespace latentspec;

namespace {

std::vector<Family> all_families() {
  return {Family::normal(),    Family::poisson(),  Family::binomial(20), Family::binomial(2),
          Family::negbin(10.0), Family::negbin(0.7), Family::gamma(10.0),  Family::ghs(2.0)};
}

}  // namespace

TEST_CASE("family construction") {
  CHECK(Family::from_name("binomial", 20) == Family::binomial(20));
  CHECK(Family::from_name("poisson") == Family::poisson());
  CHECK(Family::from_name("gamma", 10).s() == 10.0);
  CHECK_THROWS_AS(Family::from_name("binomial"), InvalidParameter);
  CHECK_THROWS_AS(Family::from_name("binomial", 2.5), InvalidParameter);
  CHECK_THROWS_AS(Family::from_name("poisson", 3), InvalidParameter);
  CHECK_THROWS_AS(Family::from_name("cauchy"), InvalidParameter);
  CHECK_THROWS_AS(Family::binomial(1), InvalidParameter);
  CHECK_THROWS_AS(Family::negbin(0.0), InvalidParameter);
  CHECK_THROWS_AS(Family::gamma(-1.0), InvalidParameter);
  CHECK_THROWS_AS(Family::poisson().s(), InvalidParameter);
  for (const Family& f : all_families()) CHECK(Family::from_name(f.name(), f.has_s() ? std::optional(f.s()) : std::nullopt) == f);
}

TEST_CASE("qvf coefficients") {
  const auto p = qvf_coefficients(Family::poisson());
  CHECK(p.b0 == 0.0);
  CHECK(p.b1 == 1.0);
  CHECK(p.b2 == 0.0);
  const auto b = qvf_coefficients(Family::binomial(20));
  CHECK(b.b0 == 0.0);
  CHECK(b.b1 == 1.0);
  CHECK(b.b2 == -1.0 / 20.0);
  const auto g = qvf_coefficients(Family::ghs(3.0));
  CHECK(g.b0 == 3.0);
  CHECK(g.b1 == 0.0);
  CHECK(g.b2 == 1.0 / 3.0);
  const auto n = qvf_coefficients(Family::normal());
  CHECK(n.b0 == 1.0);

  for (const Family& f : all_families()) {
    const auto c = qvf_coefficients(f);
    for (double theta : {0.1, 0.5, 1.0, 1.7, 2.0}) {
      const double v = variance_from_mean(f, theta);
      CHECK(v == doctest::Approx(c.b0 + c.b1 * theta + c.b2 * theta * theta).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(v_from_coefficients({0.0, 1.0, -1.0}, 2.0), InvalidParameter);
}

TEST_CASE("v_value examples") {
  CHECK(v_value(Family::poisson(), 5.0) == 5.0);
  CHECK(v_value(Family::binomial(20), 0.0) == 0.0);
  CHECK(v_value(Family::gamma(10.0), 3.0) == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
  CHECK(v_value(Family::negbin(10.0), 2.0) == doctest::Approx(24.0 / 11.0).epsilon(1e-15));
  CHECK(v_value(Family::normal(), -3.2) == 1.0);
  CHECK(v_value(Family::ghs(2.0), 1.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("v_value matches the generic quadratic construction") {
  for (const Family& f : all_families()) {
    const auto c = qvf_coefficients(f);
    for (double y = 0.0; y <= 25.0; y += 0.5) {
      const double direct = v_value(f, y);
      const double generic = v_from_coefficients(c, y);
      CHECK(std::abs(direct - generic) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("variance_from_mean") {
  CHECK(variance_from_mean(Family::normal(), 123.0) == 1.0);
  CHECK(variance_from_mean(Family::poisson(), 2.5) == 2.5);
  CHECK(variance_from_mean(Family::ghs(2.0), 0.0) == 2.0);
  CHECK(variance_from_mean(Family::binomial(20), 10.0) == 5.0);
  CHECK_THROWS_AS(variance_from_mean(Family::poisson(), -0.1), OutOfSupport);
  CHECK_THROWS_AS(variance_from_mean(Family::binomial(20), 21.0), OutOfSupport);
  CHECK_THROWS_AS(variance_from_mean(Family::gamma(10.0), 0.0), OutOfSupport);
  CHECK_THROWS_AS(variance_from_mean(Family::negbin(10.0), -1.0), OutOfSupport);

  for (int i = 0; i <= 200; ++i) {
    const double t = 20.0 * i / 200.0;
    CHECK(variance_from_mean(Family::binomial(20), t) >= 0.0);
    CHECK(variance_from_mean(Family::poisson(), t) >= 0.0);
    CHECK(variance_from_mean(Family::negbin(10.0), t) >= 0.0);
    CHECK(variance_from_mean(Family::ghs(2.0), t - 10.0) >= 0.0);
    if (t > 0.0) CHECK(variance_from_mean(Family::gamma(10.0), t) >= 0.0);
  }
}

TEST_CASE("natural_link") {
  CHECK(natural_link(Family::normal(), 1.7) == 1.7);
  CHECK(natural_link(Family::gamma(10.0), 2.0) == -0.5);
  CHECK(natural_link(Family::poisson(), 1.0) == 0.0);
  CHECK(natural_link(Family::binomial(20), 10.0) == doctest::Approx(0.0));
  CHECK(natural_link(Family::negbin(10.0), 10.0) == doctest::Approx(std::log(0.5)));
  CHECK(natural_link(Family::ghs(2.0), 2.0) == doctest::Approx(std::atan(1.0)));
  CHECK_THROWS_AS(natural_link(Family::poisson(), 0.0), OutOfSupport);
  CHECK_THROWS_AS(natural_link(Family::binomial(20), 20.0), OutOfSupport);
}

TEST_CASE("in_support") {
  CHECK(in_support(Family::poisson(), 3.0));
  CHECK_FALSE(in_support(Family::poisson(), -1.0));
  CHECK_FALSE(in_support(Family::poisson(), 1.5));
  CHECK(in_support(Family::binomial(5), 5.0));
  CHECK_FALSE(in_support(Family::binomial(5), 6.0));
  CHECK(in_support(Family::gamma(2.0), 0.3));
  CHECK_FALSE(in_support(Family::gamma(2.0), 0.0));
  CHECK(in_support(Family::normal(), -4.0));
  CHECK_FALSE(in_support(Family::normal(), std::nan("")));
}

TEST_CASE("E[v(y)] = V[y] by enumeration") {
  for (int s : {2, 3, 5, 8, 12}) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const Family f = Family::binomial(s);
      const auto pmf = oracles::binomial_pmf(s, p);
      CHECK(std::abs(oracles::expected_v(f, pmf) - variance_from_mean(f, s * p)) <= 1e-9);
    }
  }
  for (double lambda : {0.5, 2.0, 8.0}) {
    const auto pmf = oracles::poisson_pmf(lambda);
    CHECK(std::abs(oracles::expected_v(Family::poisson(), pmf) - variance_from_mean(Family::poisson(), lambda)) <=
          1e-9);
  }
  for (double s : {0.7, 10.0}) {
    for (double theta : {0.5, 3.0}) {
      const Family f = Family::negbin(s);
      const auto pmf = oracles::negbin_pmf(s, s / (s + theta));
      CHECK(oracles::expected_y(pmf) == doctest::Approx(theta).epsilon(1e-9));
      CHECK(std::abs(oracles::expected_v(f, pmf) - variance_from_mean(f, theta)) <= 1e-9);
    }
  }
}
