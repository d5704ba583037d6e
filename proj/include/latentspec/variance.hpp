#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "latentspec/matrix.hpp"
#include "latentspec/nef_qvf.hpp"

namespace latentspec {

namespace dk_method {
struct Qvf {
  Family family;
};
struct LeekNormal {
  std::size_t t;
};
struct KnownUnit {};
struct Explicit {};
}  // namespace dk_method

using DkMethod = std::variant<dk_method::Qvf, dk_method::LeekNormal, dk_method::KnownUnit, dk_method::Explicit>;

// Diagonal of the column-average variance correction D_k, one entry per
// sample column, together with how it was produced.
struct VarianceEstimate {
  std::vector<double> deltas;
  DkMethod method = dk_method::Explicit{};
  // Set when some raw delta came out negative; only possible for
  // explicitly supplied vectors, since in-support data cannot produce one.
  bool negative_flag = false;
};

// delta_j = k^-1 sum_l v(y_lj). Each column's v values are summed in sorted
// order, which makes the result independent of row order to the bit.
// Throws SupportViolation (with offending cells) if Y has an entry the
// family cannot produce.
VarianceEstimate estimate_dk_qvf(const DataMatrix& y, const Family& f, unsigned threads = 1);

// Homoskedastic estimate for Normal data with unknown row variances:
// sigma^2 = (sum_{j=t..n} a_j^2) / (k (n - t)) with a_1 >= ... >= a_n the
// singular values of Y (1-based j), replicated over all n columns.
// Requires 1 <= t < n (DegenerateTail for t = n, InvalidParameter otherwise).
VarianceEstimate estimate_dk_leek(const DataMatrix& y, std::size_t t, unsigned threads = 1);

// D_k = I, the known-variance Normal case.
VarianceEstimate known_unit_dk(std::size_t n);

VarianceEstimate explicit_dk(std::vector<double> deltas);

// max_j |est_j - truth_j|. Throws LengthMismatch.
double dk_error(const VarianceEstimate& est, std::span<const double> truth);

}  // namespace latentspec
