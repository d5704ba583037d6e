#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "latentspec/errors.hpp"
#include "latentspec/latent_space.hpp"
#include "latentspec/simulation.hpp"
#include "latentspec/subspace_metrics.hpp"
#include "latentspec/variance.hpp"

using namespace latentspec;

namespace {

double d(const Matrix& m, const Matrix& m_hat) {
  return subspace_distance(RowSpaceBasis(m), RowSpaceBasis(m_hat)).value;
}

}  // namespace

TEST_CASE("row-space basis checks") {
  Matrix dependent(2, 3);
  dependent << 1, 2, 3, 2, 4, 6;
  CHECK_THROWS_AS(RowSpaceBasis{dependent}, RankDeficient);
  CHECK_THROWS_AS(RowSpaceBasis{Matrix::Identity(3, 2)}, RankDeficient);
  CHECK(RowSpaceBasis(Matrix::Identity(2, 3)).orthonormal());
  CHECK_FALSE(RowSpaceBasis(2.0 * Matrix::Identity(2, 3)).orthonormal());

  Matrix rows(2, 2);
  rows << 3, 4, 0, 0;
  CHECK_THROWS_AS(normalize_rows(rows), RankDeficient);
  rows(1, 1) = -2;
  const Matrix unit = normalize_rows(rows);
  CHECK(unit(0, 0) == doctest::Approx(0.6));
  CHECK(unit(1, 1) == doctest::Approx(-1.0));

  Matrix near(2, 2);
  near << 1, 0, 1, 1e-8;
  CHECK_THROWS_AS(gram_inverse(near), RankDeficient);
}

TEST_CASE("projection matrix") {
  Matrix axis(1, 3);
  axis << 1, 0, 0;
  const Matrix p = projection_matrix(RowSpaceBasis(axis));
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  CHECK(p == expected);

  std::mt19937_64 gen(3);
  const Matrix square = testing::random_matrix(gen, 4, 4);
  CHECK(frobenius_norm(projection_matrix(RowSpaceBasis(square)) - Matrix::Identity(4, 4)) <= 1e-9);

  Matrix diag(1, 2);
  diag << 1, 1;
  diag /= std::sqrt(2.0);
  const Matrix half = projection_matrix(RowSpaceBasis(diag));
  CHECK(frobenius_norm(half - Matrix::Constant(2, 2, 0.5)) <= 1e-15);

  for (int t = 0; t < 50; ++t) {
    const Matrix b = testing::random_matrix(gen, 1 + t % 5, 6 + t % 4);
    const Matrix q = projection_matrix(RowSpaceBasis(b));
    CHECK(q == q.transpose());
    CHECK(frobenius_norm(q * q - q) <= 1e-9);
  }
}

TEST_CASE("distance examples") {
  std::mt19937_64 gen(21);
  const Matrix m = testing::orthonormal_rows(testing::random_matrix(gen, 3, 8));
  CHECK(d(m, m) <= 1e-12);

  Matrix a(1, 2), b(1, 2);
  a << 1, 0;
  b << 0, 1;
  CHECK(d(a, b) == doctest::Approx(1.0).epsilon(1e-15));

  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::NormalA;
  cfg.k = 50;
  const Matrix scenario_m = generate_scenario(cfg, 0).m;
  const Matrix q = testing::random_orthogonal(gen, 5);
  CHECK(d(scenario_m, q * testing::orthonormal_rows(scenario_m)) <= 1e-9);

  CHECK_THROWS_AS(d(Matrix::Identity(2, 3), Matrix::Identity(2, 4)), LengthMismatch);
  CHECK_THROWS_AS(d(Matrix::Zero(1, 3), Matrix::Identity(1, 3)), RankDeficient);
  CHECK_FALSE(subspace_distance(RowSpaceBasis(a), RowSpaceBasis(2.0 * b)).m_hat_orthonormal);
}

TEST_CASE("distance invariances") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 6 + t % 10;
    const Eigen::Index r = 1 + t % 4;
    const Eigen::Index r_hat = 1 + (t / 4) % 4;
    const Matrix m = testing::random_matrix(gen, r, n);
    const Matrix m_hat = testing::orthonormal_rows(testing::random_matrix(gen, r_hat, n));
    const Matrix q = testing::random_orthogonal(gen, r_hat);
    const double base = d(m, m_hat);
    CHECK(std::abs(d(m, q * m_hat) - base) <= 1e-10);

    // Scale-free in M once M's rows lie inside the estimate's span.
    Matrix stacked(r + 2, n);
    stacked << m, testing::random_matrix(gen, 2, n);
    const Matrix covering = testing::random_orthogonal(gen, r + 2) * testing::orthonormal_rows(stacked);
    const double c = scale(gen) * (t % 2 ? -1.0 : 1.0);
    CHECK(std::abs(d(c * m, covering) - d(m, covering)) <= 1e-10);
  }
}

TEST_CASE("the first term is not scale-free for a generic estimate") {
  Matrix m(1, 2), m_hat(1, 2);
  m << 1, 0;
  m_hat << 1, 1;
  m_hat /= std::sqrt(2.0);
  // By hand: the two squared terms are 1/2 and 1/2 for M, 2 and 1/2 for 2M.
  const double one = d(m, m_hat);
  const double two = d(2.0 * m, m_hat);
  CHECK(one == doctest::Approx(std::sqrt(1.0 / 2.0)).epsilon(1e-14));
  CHECK(two == doctest::Approx(std::sqrt(2.5 / 2.0)).epsilon(1e-14));
  CHECK(two > one);
}

TEST_CASE("zero distance means equal projectors") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 30; ++t) {
    const Matrix m = testing::random_matrix(gen, 3, 9);
    const Matrix m_hat = testing::random_orthogonal(gen, 3) * testing::orthonormal_rows(m);
    REQUIRE(d(m, m_hat) <= 1e-9);
    CHECK(frobenius_norm(projection_matrix(RowSpaceBasis(m)) - projection_matrix(RowSpaceBasis(m_hat))) <= 1e-8);
  }
}

TEST_CASE("fixed-rank estimates are compared by span only") {
  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::NormalA;
  cfg.k = 2000;
  const ScenarioDraw draw = generate_scenario(cfg, 3);
  const auto est = estimate_latent_space(draw.y, known_unit_dk(cfg.n), FixedRank{cfg.r});
  std::mt19937_64 gen(8);
  const double base = d(draw.m, est.m_hat);
  for (int t = 0; t < 10; ++t)
    CHECK(std::abs(d(draw.m, testing::random_orthogonal(gen, 5) * est.m_hat) - base) <= 1e-10);
}
