#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

namespace latentspec {

// xoshiro256** seeded through splitmix64. Streams are derived statelessly
// from (seed, stream index), so replication i never depends on how many
// draws replication i-1 consumed.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256** (splitmix64-derived streams)";

  explicit Rng(std::uint64_t seed);
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on (0, 1); safe to take the log of.
  double uniform_open01();

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

namespace dist {
struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};
struct Uniform {
  double a = 0.0;
  double b = 1.0;
};
struct Poisson {
  double lambda = 1.0;
};
struct Binomial {
  long long trials = 1;
  double p = 0.5;
};
// Number of failures before the size-th success; mean size (1-p)/p.
// The size may be any positive real (Gamma-Poisson mixture).
struct NegBin {
  double size = 1.0;
  double p = 0.5;
};
struct Gamma {
  double shape = 1.0;
  double rate = 1.0;
};
struct NoncentralChiSquare {
  double df = 1.0;
  double noncentrality = 0.0;
};
}  // namespace dist

using Distribution = std::variant<dist::Normal, dist::Uniform, dist::Poisson, dist::Binomial, dist::NegBin,
                                  dist::Gamma, dist::NoncentralChiSquare>;

// One draw. Throws InvalidParameter on invalid parameters.
//  normal: Marsaglia polar method
//  poisson: inversion for lambda < 30, PTRS transformed rejection otherwise
//  binomial: inversion when min(p, 1-p) * trials < 30, else Knuth's
//            beta-splitting recursion down to that regime
//  negbin: Poisson(Gamma(size, p / (1 - p))) mixture
//  gamma: Marsaglia-Tsang squeeze (shape < 1 boosted by U^(1/shape))
//  noncentral chi-square: J ~ Poisson(lambda / 2), then chi-square with df + 2J
double sample(const Distribution& d, Rng& rng);

double sample_normal(Rng& rng, double mean, double sd);
double sample_uniform(Rng& rng, double a, double b);
double sample_poisson(Rng& rng, double lambda);
double sample_binomial(Rng& rng, long long trials, double p);
double sample_negbin(Rng& rng, double size, double p);
double sample_gamma(Rng& rng, double shape, double rate);
double sample_noncentral_chisq(Rng& rng, double df, double noncentrality);

// log(n!) for n >= 0, table-backed for small n and Stirling series above.
double log_factorial(double n);

}  // namespace latentspec
