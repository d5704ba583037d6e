#include "latentspec/random.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "latentspec/errors.hpp"

namespace latentspec {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

double poisson_inversion(Rng& rng, double lambda) {
  // Sequential search; exp(-lambda) stays well above underflow for lambda < 30.
  const double u = rng.uniform01();
  double p = std::exp(-lambda);
  double cdf = p;
  double x = 0.0;
  while (u > cdf && p > 0.0) {
    x += 1.0;
    p *= lambda / x;
    cdf += p;
  }
  return x;
}

// Hormann (1993) transformed rejection with squeeze.
double poisson_ptrs(Rng& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform_open01();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - log_factorial(k))
      return k;
  }
}

double binomial_inversion(Rng& rng, long long trials, double p) {
  const double q = 1.0 - p;
  const double n = static_cast<double>(trials);
  const double qn = std::exp(n * std::log(q));
  const double np = n * p;
  const double bound = std::min(n, np + 10.0 * std::sqrt(np * q + 1.0));
  double x = 0.0;
  double px = qn;
  double u = rng.uniform01();
  while (u > px) {
    x += 1.0;
    if (x > bound) {
      x = 0.0;
      px = qn;
      u = rng.uniform01();
    } else {
      u -= px;
      px = ((n - x + 1.0) * p * px) / (x * q);
    }
  }
  return x;
}

double gamma_unit_rate(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double g = gamma_unit_rate(rng, shape + 1.0);
    return g * std::pow(rng.uniform_open01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_normal(rng, 0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t base = splitmix64(state);
  std::uint64_t combined = base ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(combined);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) { return Rng(mix_seed(seed, stream)); }

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  return Rng(mix_seed(mix_seed(seed, stream), substream));
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_open01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double log_factorial(double n) {
  constexpr int kTable = 256;
  static const std::array<double, kTable> table = [] {
    std::array<double, kTable> t{};
    t[0] = 0.0;
    for (int i = 1; i < kTable; ++i) t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] + std::log(i);
    return t;
  }();
  if (n < 0.0) throw InvalidParameter("log_factorial of a negative number");
  if (n < kTable) return table[static_cast<std::size_t>(n)];
  const double x = n + 1.0;
  const double x2 = x * x;
  const double series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2) -
                        1.0 / (1680.0 * x * x2 * x2 * x2);
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double sample_normal(Rng& rng, double mean, double sd) {
  if (!finite_all({mean, sd}) || sd < 0.0) throw InvalidParameter("normal needs finite mean and sd >= 0");
  for (;;) {
    const double u = 2.0 * rng.uniform01() - 1.0;
    const double v = 2.0 * rng.uniform01() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_uniform(Rng& rng, double a, double b) {
  if (!finite_all({a, b}) || b < a) throw InvalidParameter("uniform needs finite a <= b");
  if (a == b) return a;
  return a + (b - a) * rng.uniform01();
}

double sample_poisson(Rng& rng, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidParameter("poisson needs finite lambda >= 0");
  if (lambda == 0.0) return 0.0;
  return lambda < 30.0 ? poisson_inversion(rng, lambda) : poisson_ptrs(rng, lambda);
}

double sample_binomial(Rng& rng, long long trials, double p) {
  if (trials < 0 || !std::isfinite(p) || p < 0.0 || p > 1.0)
    throw InvalidParameter("binomial needs trials >= 0 and p in [0, 1]");
  double offset = 0.0;
  double sign = 1.0;
  for (;;) {
    if (trials == 0 || p == 0.0) return offset;
    if (p == 1.0) return offset + sign * static_cast<double>(trials);
    // Reflect to p <= 1/2: X = trials - Binomial(trials, 1 - p).
    if (p > 0.5) {
      offset += sign * static_cast<double>(trials);
      sign = -sign;
      p = 1.0 - p;
    }
    if (static_cast<double>(trials) * p < 30.0) return offset + sign * binomial_inversion(rng, trials, p);
    // Knuth: the a-th order statistic of `trials` uniforms is Beta(a, trials + 1 - a).
    const long long a = 1 + trials / 2;
    const long long b = trials + 1 - a;
    const double ga = gamma_unit_rate(rng, static_cast<double>(a));
    const double gb = gamma_unit_rate(rng, static_cast<double>(b));
    const double x = ga / (ga + gb);
    if (x >= p) {
      trials = a - 1;
      p = p / x;
    } else {
      offset += sign * static_cast<double>(a);
      trials = b - 1;
      p = (p - x) / (1.0 - x);
    }
  }
}

double sample_gamma(Rng& rng, double shape, double rate) {
  if (!finite_all({shape, rate}) || !(shape > 0.0) || !(rate > 0.0))
    throw InvalidParameter("gamma needs shape > 0 and rate > 0");
  return gamma_unit_rate(rng, shape) / rate;
}

double sample_negbin(Rng& rng, double size, double p) {
  if (!finite_all({size, p}) || !(size > 0.0) || !(p > 0.0) || p > 1.0)
    throw InvalidParameter("negbin needs size > 0 and p in (0, 1]");
  if (p == 1.0) return 0.0;
  const double lambda = sample_gamma(rng, size, p / (1.0 - p));
  return sample_poisson(rng, lambda);
}

double sample_noncentral_chisq(Rng& rng, double df, double noncentrality) {
  if (!finite_all({df, noncentrality}) || !(df > 0.0) || noncentrality < 0.0)
    throw InvalidParameter("noncentral chi-square needs df > 0 and noncentrality >= 0");
  const double j = noncentrality > 0.0 ? sample_poisson(rng, 0.5 * noncentrality) : 0.0;
  return 2.0 * gamma_unit_rate(rng, 0.5 * (df + 2.0 * j));
}

double sample(const Distribution& d, Rng& rng) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, dist::Normal>) return sample_normal(rng, p.mean, p.sd);
        if constexpr (std::is_same_v<T, dist::Uniform>) return sample_uniform(rng, p.a, p.b);
        if constexpr (std::is_same_v<T, dist::Poisson>) return sample_poisson(rng, p.lambda);
        if constexpr (std::is_same_v<T, dist::Binomial>) return sample_binomial(rng, p.trials, p.p);
        if constexpr (std::is_same_v<T, dist::NegBin>) return sample_negbin(rng, p.size, p.p);
        if constexpr (std::is_same_v<T, dist::Gamma>) return sample_gamma(rng, p.shape, p.rate);
        if constexpr (std::is_same_v<T, dist::NoncentralChiSquare>)
          return sample_noncentral_chisq(rng, p.df, p.noncentrality);
      },
      d);
}

}  // namespace latentspec
