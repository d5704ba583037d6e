#include "latentspec/matrix.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "latentspec/errors.hpp"
#include "latentspec/parallel.hpp"

namespace latentspec {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1) throw InvalidParameter("data matrix needs at least one row");
  if (values_.cols() < 2) throw InvalidParameter("data matrix needs at least two columns");
  if (!values_.allFinite()) throw InvalidParameter("data matrix contains NaN or Inf");
}

double frobenius_norm(const Matrix& a) {
  // Scaled accumulation keeps very large or very small entries from
  // overflowing/underflowing the sum of squares.
  double scale = 0.0;
  double ssq = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double v = std::abs(a(i, j));
      if (v == 0.0) continue;
      if (scale < v) {
        ssq = 1.0 + ssq * (scale / v) * (scale / v);
        scale = v;
      } else {
        ssq += (v / scale) * (v / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

Matrix gram_scaled(const DataMatrix& y, unsigned threads) {
  const Matrix& values = y.values();
  const auto k = values.rows();
  const auto n = values.cols();
  const double inv_k = 1.0 / static_cast<double>(k);
  Matrix g(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t col) {
    const auto i = static_cast<Eigen::Index>(col);
    const double* ci = values.col(i).data();
    for (Eigen::Index j = i; j < n; ++j) {
      const double* cj = values.col(j).data();
      double sum = 0.0;
      for (Eigen::Index l = 0; l < k; ++l) sum += ci[l] * cj[l];
      g(i, j) = sum * inv_k;
    }
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) g(j, i) = g(i, j);
  return g;
}

namespace {

void fix_sign(Matrix& vectors, Eigen::Index col) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const double v = std::abs(vectors(i, col));
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (vectors(arg, col) < 0.0) vectors.col(col) *= -1.0;
}

}  // namespace

SymmetricEigen sym_eigen(const Matrix& input, const EigenOptions& options) {
  if (input.rows() != input.cols()) throw InvalidParameter("sym_eigen needs a square matrix");
  const Eigen::Index n = input.rows();
  if (static_cast<std::size_t>(n) > options.max_dim)
    throw InvalidParameter("matrix dimension " + std::to_string(n) + " exceeds eigen cap " +
                           std::to_string(options.max_dim));
  if (!input.allFinite()) throw InvalidParameter("sym_eigen input contains NaN or Inf");

  const double norm = frobenius_norm(input);
  double asym = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(input(i, j) - input(j, i)));
  if (asym > options.tolerance * norm)
    throw NotSymmetric("matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");

  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = input(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (input(i, j) + input(j, i));
  }
  Matrix v = Matrix::Identity(n, n);

  // Absolute floor far below the requested tolerance; stops endless
  // rotations among entries that are all rounding noise.
  const double negligible = 1e-2 * DBL_EPSILON * norm;
  bool converged = n <= 1;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Negligible relative to both diagonal entries: annihilate without
        // rotating (relative-accuracy stopping rule).
        if (std::abs(apq) <= DBL_EPSILON * 0.5 * std::sqrt(std::abs(app) * std::abs(aqq)) ||
            std::abs(apq) <= negligible) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged) {
    // One last check: the final sweep may have zeroed everything.
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
    if (off != 0.0)
      throw NoConvergence("Jacobi eigensolver did not converge within " +
                          std::to_string(options.max_sweeps) + " sweeps");
  }

  for (Eigen::Index j = 0; j < n; ++j) fix_sign(v, j);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (a(x, x) != a(y, y)) return a(x, x) > a(y, y);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v(i, x) != v(i, y)) return v(i, x) > v(i, y);
    }
    return x < y;
  });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.values(j) = a(src, src);
    out.vectors.col(j) = v.col(src);
  }
  return out;
}

}  // namespace latentspec
