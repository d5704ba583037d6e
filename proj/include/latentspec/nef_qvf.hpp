#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace latentspec {

// The six natural exponential families with quadratic variance function.
enum class FamilyKind { Normal, Poisson, Binomial, NegBin, Gamma, Ghs };

// A family plus its auxiliary parameter s (trial count, size, or shape).
// Everything here is in the MEAN parameterization theta = E[y]:
//   Binomial: theta = s p          NegBin: theta = s p / (1 - p)
//   Gamma:    shape s, rate s/theta    Normal: unit variance
class Family {
 public:
  static Family normal() { return Family(FamilyKind::Normal, std::nullopt); }
  static Family poisson() { return Family(FamilyKind::Poisson, std::nullopt); }
  static Family binomial(int trials);
  static Family negbin(double size);
  static Family gamma(double shape);
  static Family ghs(double shape);

  // Builds from a lowercase kind name ("normal", "poisson", "binomial",
  // "negbin", "gamma", "ghs"); `s` is required exactly when the kind has one.
  static Family from_name(std::string_view name, std::optional<double> s = std::nullopt);

  FamilyKind kind() const noexcept { return kind_; }
  bool has_s() const noexcept { return s_.has_value(); }
  double s() const;
  std::string name() const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  Family(FamilyKind kind, std::optional<double> s) : kind_(kind), s_(s) {}

  FamilyKind kind_;
  std::optional<double> s_;
};

// V[y] = b0 + b1 E[y] + b2 E[y]^2.
struct QvfCoefficients {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

QvfCoefficients qvf_coefficients(const Family& f);

// Unbiased single-observation variance transform: E[v(y)] = V[y].
double v_value(const Family& f, double y);

// v(t) = (1 + b2)^-1 (b0 + b1 t + b2 t^2); the generic route v_value must agree with.
double v_from_coefficients(const QvfCoefficients& c, double t);

// Throws OutOfSupport when theta is outside the family's mean region.
double variance_from_mean(const Family& f, double theta);

// Canonical link eta(theta); throws OutOfSupport on the domain boundary.
double natural_link(const Family& f, double theta);

// Whether y is a possible observation (integer counts, positive reals, ...).
bool in_support(const Family& f, double y);

}  // namespace latentspec
