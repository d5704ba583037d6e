#include "latentspec/nef_qvf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latentspec/errors.hpp"

namespace latentspec {

namespace {

void require_positive(double s, const char* what) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidParameter(std::string(what) + " must be positive");
}

[[noreturn]] void out_of_support(const Family& f, double theta) {
  throw OutOfSupport("mean " + std::to_string(theta) + " outside the " + f.name() + " mean region");
}

bool is_integer(double y) { return std::isfinite(y) && std::floor(y) == y; }

}  // namespace

Family Family::binomial(int trials) {
  if (trials < 2) throw InvalidParameter("binomial trial count s must be an integer >= 2");
  return Family(FamilyKind::Binomial, static_cast<double>(trials));
}

Family Family::negbin(double size) {
  require_positive(size, "negbin size s");
  return Family(FamilyKind::NegBin, size);
}

Family Family::gamma(double shape) {
  require_positive(shape, "gamma shape s");
  return Family(FamilyKind::Gamma, shape);
}

Family Family::ghs(double shape) {
  require_positive(shape, "GHS shape s");
  return Family(FamilyKind::Ghs, shape);
}

Family Family::from_name(std::string_view name, std::optional<double> s) {
  auto need_s = [&]() -> double {
    if (!s) throw InvalidParameter("family '" + std::string(name) + "' requires parameter s");
    return *s;
  };
  auto no_s = [&] {
    if (s) throw InvalidParameter("family '" + std::string(name) + "' takes no parameter s");
  };
  if (name == "normal") {
    no_s();
    return normal();
  }
  if (name == "poisson") {
    no_s();
    return poisson();
  }
  if (name == "binomial") {
    const double v = need_s();
    if (!is_integer(v)) throw InvalidParameter("binomial s must be an integer");
    return binomial(static_cast<int>(v));
  }
  if (name == "negbin") return negbin(need_s());
  if (name == "gamma") return gamma(need_s());
  if (name == "ghs") return ghs(need_s());
  throw InvalidParameter("unknown family '" + std::string(name) + "'");
}

double Family::s() const {
  if (!s_) throw InvalidParameter(name() + " has no auxiliary parameter s");
  return *s_;
}

std::string Family::name() const {
  switch (kind_) {
    case FamilyKind::Normal: return "normal";
    case FamilyKind::Poisson: return "poisson";
    case FamilyKind::Binomial: return "binomial";
    case FamilyKind::NegBin: return "negbin";
    case FamilyKind::Gamma: return "gamma";
    case FamilyKind::Ghs: return "ghs";
  }
  return "unknown";
}

QvfCoefficients qvf_coefficients(const Family& f) {
  switch (f.kind()) {
    case FamilyKind::Normal: return {1.0, 0.0, 0.0};
    case FamilyKind::Poisson: return {0.0, 1.0, 0.0};
    case FamilyKind::Binomial: return {0.0, 1.0, -1.0 / f.s()};
    case FamilyKind::NegBin: return {0.0, 1.0, 1.0 / f.s()};
    case FamilyKind::Gamma: return {0.0, 0.0, 1.0 / f.s()};
    case FamilyKind::Ghs: return {f.s(), 0.0, 1.0 / f.s()};
  }
  return {};
}

double v_from_coefficients(const QvfCoefficients& c, double t) {
  if (c.b2 == -1.0) throw InvalidParameter("QVF coefficient b2 = -1 admits no unbiased v");
  return (c.b0 + c.b1 * t + c.b2 * t * t) / (1.0 + c.b2);
}

double v_value(const Family& f, double y) {
  switch (f.kind()) {
    case FamilyKind::Normal: return 1.0;
    case FamilyKind::Poisson: return y;
    case FamilyKind::Binomial: {
      const double s = f.s();
      return (s * y - y * y) / (s - 1.0);
    }
    case FamilyKind::NegBin: {
      const double s = f.s();
      return (s * y + y * y) / (s + 1.0);
    }
    case FamilyKind::Gamma: return y * y / (1.0 + f.s());
    case FamilyKind::Ghs: {
      const double s = f.s();
      return (s * s + y * y) / (1.0 + s);
    }
  }
  return 0.0;
}

double variance_from_mean(const Family& f, double theta) {
  if (!std::isfinite(theta)) out_of_support(f, theta);
  switch (f.kind()) {
    case FamilyKind::Normal: return 1.0;
    case FamilyKind::Poisson:
      if (theta < 0.0) out_of_support(f, theta);
      return theta;
    case FamilyKind::Binomial:
      if (theta < 0.0 || theta > f.s()) out_of_support(f, theta);
      return std::max(0.0, theta - theta * theta / f.s());
    case FamilyKind::NegBin:
      if (theta < 0.0) out_of_support(f, theta);
      return theta + theta * theta / f.s();
    case FamilyKind::Gamma:
      if (theta <= 0.0) out_of_support(f, theta);
      return theta * theta / f.s();
    case FamilyKind::Ghs: return f.s() + theta * theta / f.s();
  }
  return 0.0;
}

double natural_link(const Family& f, double theta) {
  if (!std::isfinite(theta)) out_of_support(f, theta);
  switch (f.kind()) {
    case FamilyKind::Normal: return theta;
    case FamilyKind::Poisson:
      if (theta <= 0.0) out_of_support(f, theta);
      return std::log(theta);
    case FamilyKind::Binomial: {
      const double p = theta / f.s();
      if (p <= 0.0 || p >= 1.0) out_of_support(f, theta);
      return std::log(p / (1.0 - p));
    }
    case FamilyKind::NegBin:
      if (theta <= 0.0) out_of_support(f, theta);
      return std::log(theta / (f.s() + theta));
    case FamilyKind::Gamma:
      if (theta <= 0.0) out_of_support(f, theta);
      return -1.0 / theta;
    case FamilyKind::Ghs: return std::atan(theta / f.s());
  }
  return 0.0;
}

bool in_support(const Family& f, double y) {
  if (!std::isfinite(y)) return false;
  switch (f.kind()) {
    case FamilyKind::Normal:
    case FamilyKind::Ghs: return true;
    case FamilyKind::Poisson:
    case FamilyKind::NegBin: return y >= 0.0 && is_integer(y);
    case FamilyKind::Binomial: return y >= 0.0 && y <= f.s() && is_integer(y);
    case FamilyKind::Gamma: return y > 0.0;
  }
  return false;
}

}  // namespace latentspec
