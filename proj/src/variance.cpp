#include "latentspec/variance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latentspec/errors.hpp"
#include "latentspec/parallel.hpp"

namespace latentspec {

VarianceEstimate estimate_dk_qvf(const DataMatrix& y, const Family& f, unsigned threads) {
  const std::size_t k = y.rows();
  const std::size_t n = y.cols();

  std::vector<std::pair<std::size_t, std::size_t>> bad;
  std::size_t bad_total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!in_support(f, y(i, j))) {
        if (bad.size() < 10) bad.emplace_back(i, j);
        ++bad_total;
      }
    }
  }
  if (bad_total > 0) {
    std::string msg = std::to_string(bad_total) + " entries outside the " + f.name() + " support, e.g.";
    for (const auto& [i, j] : bad) msg += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
    throw SupportViolation(msg, std::move(bad));
  }

  VarianceEstimate est;
  est.method = dk_method::Qvf{f};
  est.deltas.assign(n, 0.0);
  parallel_for(n, threads, [&](std::size_t j) {
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = v_value(f, y(i, j));
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    est.deltas[j] = sum / static_cast<double>(k);
  });
  est.negative_flag = std::any_of(est.deltas.begin(), est.deltas.end(), [](double d) { return d < 0.0; });
  return est;
}

VarianceEstimate estimate_dk_leek(const DataMatrix& y, std::size_t t, unsigned threads) {
  const std::size_t n = y.cols();
  if (t == n) throw DegenerateTail("Leek estimator needs t < n (empty residual sum at t = n)");
  if (t < 1 || t > n) throw InvalidParameter("Leek estimator needs 1 <= t < n");

  // Squared singular values of Y are the eigenvalues of Y^T Y = k * gram.
  const SymmetricEigen eig = sym_eigen(gram_scaled(y, threads));
  double tail = 0.0;
  for (std::size_t j = t - 1; j < n; ++j) tail += std::max(0.0, eig.values(static_cast<Eigen::Index>(j)));
  // gram already carries the 1/k factor.
  const double sigma2 = tail / static_cast<double>(n - t);

  VarianceEstimate est;
  est.method = dk_method::LeekNormal{t};
  est.deltas.assign(n, sigma2);
  return est;
}

VarianceEstimate known_unit_dk(std::size_t n) {
  VarianceEstimate est;
  est.method = dk_method::KnownUnit{};
  est.deltas.assign(n, 1.0);
  return est;
}

VarianceEstimate explicit_dk(std::vector<double> deltas) {
  for (double d : deltas)
    if (!std::isfinite(d)) throw InvalidParameter("variance correction contains NaN or Inf");
  VarianceEstimate est;
  est.method = dk_method::Explicit{};
  est.negative_flag = std::any_of(deltas.begin(), deltas.end(), [](double d) { return d < 0.0; });
  est.deltas = std::move(deltas);
  return est;
}

double dk_error(const VarianceEstimate& est, std::span<const double> truth) {
  if (est.deltas.size() != truth.size())
    throw LengthMismatch("dk_error: estimate has " + std::to_string(est.deltas.size()) +
                         " entries, truth has " + std::to_string(truth.size()));
  double worst = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) worst = std::max(worst, std::abs(est.deltas[j] - truth[j]));
  return worst;
}

}  // namespace latentspec
