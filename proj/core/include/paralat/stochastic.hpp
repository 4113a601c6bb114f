#pragma once

#include <cstdint>
#include <functional>

#include "paralat/calculus.hpp"
#include "paralat/diffusion.hpp"

namespace paralat {

// Counter-based RNG: every (seed, site, draw) triple maps to an independent
// uniform, so fields are reproducible and sites are order-independent.
std::uint64_t mix_counter(std::uint64_t seed, std::uint64_t site, std::uint64_t draw);
double uniform01(std::uint64_t seed, std::uint64_t site, std::uint64_t draw);
double gaussian01(std::uint64_t seed, std::uint64_t site, std::uint64_t draw);

struct NoiseSpec {
  enum class Law { gaussian, rademacher, uniform };
  Law law = Law::gaussian;
  double variance = 1.0; // per-site variance (|G^eps|^-1 macro, eps^2/|G| micro)
  double mean = 0.0;     // shift (micro model: -F'(0) c^eps_mu eps^2)
  std::uint64_t seed = 0;
  double p_xi = 16.0;    // moment-order metadata
};

NoiseSpec macro_white_noise(const BravaisTorus& t, std::uint64_t seed,
                            NoiseSpec::Law law = NoiseSpec::Law::gaussian);

Field sample_noise(const NoiseSpec& spec, const BravaisTorus& t);

// Exact moments E[Y^m] of the centered law scaled to the given variance.
struct MomentOracle {
  NoiseSpec::Law law = NoiseSpec::Law::gaussian;
  double variance = 1.0;
  double operator()(int power) const;
};

// Wick product Y^{<>I} = Y^I - sum_{0 != E subset I} E[Y^E] Y^{<>(I\E)}.
// Entries sharing an id are the same random variable (values must agree);
// distinct ids are independent. moment(id, power) must be exact for the law.
double wick_product(const std::vector<double>& values, const std::vector<int>& ids,
                    const std::function<double(int, int)>& moment);

// Wick powers y^{<>m} of a single variable, m = 0..nmax.
std::vector<double> wick_powers(double y, const MomentOracle& mom, int nmax);

// Discrete multiple stochastic integral
// I_n f = |G^eps|^n sum_{z_1..z_n} f(z_1..z_n) xi(z_1) <> ... <> xi(z_n),
// f given densely as a flat array of size (M^d)^n (row-major in the tuple).
double multiple_integral(int n, const std::vector<double>& f, const Field& noise,
                         const MomentOracle& mom);

// Renormalization cutoff chi: 0 on (1/4) G^, 1 outside (1/2) G^, expressed in
// unscaled-cell sup-coordinates max_i |x . a_i| (cell is <= 1/2).
struct ChiProfile {
  double inner = 0.125;
  double outer = 0.25;
};
double chi_value(const ChiProfile& chi, const BravaisBasis& basis, const Vec& freq);

// c^eps_mu = int_{G^eps^} chi/l^eps_mu, rectangle rule on the dual grid.
double renorm_constant(const JumpMeasure& mu, const BravaisTorus& t,
                       const ChiProfile& chi);

struct EnhancedNoise {
  Field xi;             // one realization of xi^eps
  Field X;              // (chi/l^eps_mu)(D) xi
  double c_eps = 0.0;   // c^eps_mu
  Field resonant_renorm; // X (.) xi - c^eps_mu
  ChiProfile chi;
};

EnhancedNoise build_enhanced(const Field& xi, const JumpMeasure& mu,
                             const ChiProfile& chi, const PartitionOfUnity& pou);

// M_eps = max of the three weighted Besov norms of (xi, X, X . xi) with
// exponents alpha + 2k/s - 2, alpha + 2k/s, 2 alpha + 4k/s - 2 and weights
// p^kappa, p^kappa, p^{2 kappa}.
struct RegularityParams {
  double alpha = 0.585;
  double kappa = 0.13;
  double sigma = 0.93;
  double p_xi = 16.0;
};
double regularity_statistic(const EnhancedNoise& e, const RegularityParams& params,
                            const PartitionOfUnity& pou);

} // namespace paralat
