#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "../common/oracles.hpp"
#include "latentspec/errors.hpp"
#include "latentspec/random.hpp"

using namespace latentspec;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double mean_se = 0.0;
  double var_se = 0.0;
};

Moments moments(const std::function<double()>& draw, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  double sum = 0.0;
  for (double& x : xs) sum += (x = draw());
  const double mean = sum / count;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= count - 1;
  m4 /= count;
  return {mean, m2, std::sqrt(m2 / count), std::sqrt((m4 - m2 * m2) / count)};
}

void check_moments(const std::function<double()>& draw, double mean, double var, int count = 100000) {
  const Moments m = moments(draw, count);
  CHECK(std::abs(m.mean - mean) <= 4.0 * m.mean_se);
  CHECK(std::abs(m.var - var) <= 5.0 * m.var_se);
}

void check_pmf(const std::function<double()>& draw, const std::vector<double>& pmf, int count = 100000) {
  std::vector<int> hits(pmf.size() + 1, 0);
  for (int i = 0; i < count; ++i) {
    const double x = draw();
    REQUIRE(x == std::floor(x));
    REQUIRE(x >= 0.0);
    ++hits[std::min(static_cast<std::size_t>(x), pmf.size())];
  }
  for (std::size_t y = 0; y < pmf.size(); ++y) {
    const double freq = static_cast<double>(hits[y]) / count;
    CHECK(std::abs(freq - pmf[y]) <= 5.0 * std::sqrt(pmf[y] * (1.0 - pmf[y]) / count) + 1e-4);
  }
}

}  // namespace

TEST_CASE("generator plumbing") {
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);

  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);

  Rng s0 = Rng::for_stream(7, 0), s0b = Rng::for_stream(7, 0), s1 = Rng::for_stream(7, 1);
  CHECK(s0.next_u64() == s0b.next_u64());
  CHECK(s0.next_u64() != s1.next_u64());
  CHECK(Rng::for_stream(7, 1, 0).next_u64() != Rng::for_stream(7, 1, 1).next_u64());

  Rng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform01();
    CHECK((x >= 0.0 && x < 1.0));
    const double y = u.uniform_open01();
    CHECK((y > 0.0 && y < 1.0));
  }
}

TEST_CASE("degenerate and invalid parameters") {
  Rng rng(3);
  CHECK(sample_uniform(rng, 1.0, 1.0) == 1.0);
  CHECK(sample_binomial(rng, 20, 0.0) == 0.0);
  CHECK(sample_binomial(rng, 20, 1.0) == 20.0);
  CHECK(sample_poisson(rng, 0.0) == 0.0);
  CHECK(sample_normal(rng, 2.5, 0.0) == 2.5);
  CHECK(sample(dist::Uniform{2.0, 2.0}, rng) == 2.0);
  CHECK_THROWS_AS(sample_uniform(rng, 2.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(sample_normal(rng, 0.0, -1.0), InvalidParameter);
  CHECK_THROWS_AS(sample_poisson(rng, -1.0), InvalidParameter);
  CHECK_THROWS_AS(sample_binomial(rng, 5, 1.5), InvalidParameter);
  CHECK_THROWS_AS(sample_binomial(rng, -1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(sample_negbin(rng, 0.0, 0.5), InvalidParameter);
  CHECK_THROWS_AS(sample_gamma(rng, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(sample_noncentral_chisq(rng, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("log_factorial") {
  for (double n : {0.0, 1.0, 2.0, 10.0, 100.0, 255.0, 256.0, 257.0, 1000.0, 123456.0})
    CHECK(log_factorial(n) == doctest::Approx(std::lgamma(n + 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(log_factorial(-1.0), InvalidParameter);
}

TEST_CASE("continuous sampler moments") {
  Rng rng(2024);
  check_moments([&] { return sample_normal(rng, 1.5, 2.0); }, 1.5, 4.0);
  check_moments([&] { return sample_uniform(rng, 1.0, 10.0); }, 5.5, 81.0 / 12.0);
  check_moments([&] { return sample_gamma(rng, 10.0, 2.0); }, 5.0, 2.5);
  check_moments([&] { return sample_gamma(rng, 0.5, 1.0); }, 0.5, 0.5);
  check_moments([&] { return sample(dist::Gamma{10.0, 10.0 / 3.0}, rng); }, 3.0, 0.9);
  // Noncentral chi-square: mean df + lambda, variance 2 (df + 2 lambda).
  check_moments([&] { return sample_noncentral_chisq(rng, 9.0, 1.0); }, 10.0, 22.0);
  check_moments([&] { return sample_noncentral_chisq(rng, 3.0, 0.0); }, 3.0, 6.0);
}

TEST_CASE("discrete sampler distributions") {
  Rng rng(77);
  check_pmf([&] { return sample_poisson(rng, 3.0); }, oracles::poisson_pmf(3.0));
  check_pmf([&] { return sample_binomial(rng, 20, 0.3); }, oracles::binomial_pmf(20, 0.3));
  check_pmf([&] { return sample_binomial(rng, 20, 0.85); }, oracles::binomial_pmf(20, 0.85));
  check_pmf([&] { return sample_negbin(rng, 10.0, 10.0 / 13.0); }, oracles::negbin_pmf(10.0, 10.0 / 13.0));

  // Rejection and splitting regimes.
  check_moments([&] { return sample_poisson(rng, 57.3); }, 57.3, 57.3);
  check_moments([&] { return sample_poisson(rng, 2500.0); }, 2500.0, 2500.0);
  check_moments([&] { return sample_binomial(rng, 1000, 0.4); }, 400.0, 240.0);
  check_moments([&] { return sample_binomial(rng, 100000, 0.9); }, 90000.0, 9000.0);
  check_moments([&] { return sample_negbin(rng, 10.0, 0.25); }, 30.0, 120.0);
}
