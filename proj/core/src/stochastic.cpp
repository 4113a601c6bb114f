#include "paralat/stochastic.hpp"

#include <cmath>
#include <map>

namespace paralat {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t mix_counter(std::uint64_t seed, std::uint64_t site, std::uint64_t draw) {
  return splitmix(splitmix(splitmix(seed) ^ site) ^ draw);
}

double uniform01(std::uint64_t seed, std::uint64_t site, std::uint64_t draw) {
  return (mix_counter(seed, site, draw) >> 11) * 0x1.0p-53;
}

double gaussian01(std::uint64_t seed, std::uint64_t site, std::uint64_t draw) {
  // Box-Muller on two counter draws; u1 strictly positive.
  double u1 = ((mix_counter(seed, site, 2 * draw) >> 11) + 1.0) * 0x1.0p-53;
  double u2 = uniform01(seed, site, 2 * draw + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

NoiseSpec macro_white_noise(const BravaisTorus& t, std::uint64_t seed,
                            NoiseSpec::Law law) {
  NoiseSpec s;
  s.law = law;
  s.variance = 1.0 / t.cell_volume;
  s.seed = seed;
  return s;
}

Field sample_noise(const NoiseSpec& spec, const BravaisTorus& t) {
  Field f(t);
  const double sd = std::sqrt(spec.variance);
  for (std::int64_t k = 0; k < f.size(); ++k) {
    double v = 0.0;
    switch (spec.law) {
      case NoiseSpec::Law::gaussian:
        v = sd * gaussian01(spec.seed, static_cast<std::uint64_t>(k), 0);
        break;
      case NoiseSpec::Law::rademacher:
        v = (mix_counter(spec.seed, static_cast<std::uint64_t>(k), 0) & 1) ? sd : -sd;
        break;
      case NoiseSpec::Law::uniform:
        v = sd * std::sqrt(3.0) *
            (2.0 * uniform01(spec.seed, static_cast<std::uint64_t>(k), 0) - 1.0);
        break;
    }
    f[k] = spec.mean + v;
  }
  return f;
}

double MomentOracle::operator()(int power) const {
  if (power < 0) throw argument_error("moment oracle: negative power");
  if (power == 0) return 1.0;
  if (power % 2 == 1) return 0.0; // all three laws are symmetric
  int half = power / 2;
  switch (law) {
    case NoiseSpec::Law::gaussian: {
      double dfact = 1.0; // (power-1)!!
      for (int i = power - 1; i > 1; i -= 2) dfact *= i;
      return std::pow(variance, half) * dfact;
    }
    case NoiseSpec::Law::rademacher:
      return std::pow(variance, half);
    case NoiseSpec::Law::uniform: {
      double a2 = 3.0 * variance; // support [-a, a], a^2 = 3 v
      return std::pow(a2, half) / (power + 1);
    }
  }
  return 0.0;
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

} // namespace

double wick_product(const std::vector<double>& values, const std::vector<int>& ids,
                    const std::function<double(int, int)>& moment) {
  if (values.size() != ids.size())
    throw argument_error("wick_product: values/ids size mismatch");
  if (values.size() > 6)
    throw argument_error("wick_product: order capped at 6");

  // Group positions by id; entries with the same id must be the same variable.
  std::vector<int> uids;
  std::vector<double> uval;
  std::vector<int> count;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::size_t j = 0;
    for (; j < uids.size(); ++j)
      if (uids[j] == ids[i]) break;
    if (j == uids.size()) {
      uids.push_back(ids[i]);
      uval.push_back(values[i]);
      count.push_back(1);
    } else {
      if (uval[j] != values[i])
        throw argument_error("wick_product: conflicting values for one id");
      ++count[j];
    }
  }
  const int g = static_cast<int>(uids.size());

  std::map<std::vector<int>, double> memo;
  std::function<double(const std::vector<int>&)> wick = [&](const std::vector<int>& c) {
    bool empty = true;
    for (int x : c) empty = empty && x == 0;
    if (empty) return 1.0;
    auto it = memo.find(c);
    if (it != memo.end()) return it->second;

    double prod = 1.0;
    for (int j = 0; j < g; ++j) prod *= std::pow(uval[j], c[j]);

    // subtract over nonempty subsets E of the position set, counted by
    // per-group sizes e_j with multiplicity prod C(c_j, e_j)
    double sub = 0.0;
    std::vector<int> e(g, 0);
    while (true) {
      // advance mixed-radix counter
      int j = 0;
      while (j < g && e[j] == c[j]) e[j++] = 0;
      if (j == g) break;
      ++e[j];
      double mult = 1.0, mom = 1.0;
      for (int q = 0; q < g; ++q) {
        mult *= binom(c[q], e[q]);
        if (e[q] > 0) {
          double mq = moment(uids[q], e[q]);
          if (!std::isfinite(mq)) throw config_error("wick_product: missing moment");
          mom *= mq;
        }
      }
      std::vector<int> rest(g);
      for (int q = 0; q < g; ++q) rest[q] = c[q] - e[q];
      sub += mult * mom * wick(rest);
    }
    double result = prod - sub;
    memo[c] = result;
    return result;
  };
  return wick(count);
}

std::vector<double> wick_powers(double y, const MomentOracle& mom, int nmax) {
  std::vector<double> w(nmax + 1);
  w[0] = 1.0;
  for (int m = 1; m <= nmax; ++m) {
    double v = std::pow(y, m);
    for (int j = 1; j <= m; ++j) v -= binom(m, j) * mom(j) * w[m - j];
    w[m] = v;
  }
  return w;
}

double multiple_integral(int n, const std::vector<double>& f, const Field& noise,
                         const MomentOracle& mom) {
  if (n < 1 || n > 3) throw argument_error("multiple_integral: dense n must be 1..3");
  const std::int64_t s = noise.size();
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(s);
  if (total > 5e7) throw argument_error("multiple_integral: dense tensor too large");
  if (static_cast<double>(f.size()) != total)
    throw argument_error("multiple_integral: kernel size mismatch");

  // Per-site Wick powers; a tuple's Wick product factorizes over distinct sites.
  std::vector<std::array<double, 4>> wp(s);
  for (std::int64_t k = 0; k < s; ++k) {
    auto w = wick_powers(noise[k], mom, n);
    for (int m = 0; m <= n; ++m) wp[k][m] = w[m];
  }

  const double vol = noise.torus.cell_volume;
  double voln = 1.0;
  for (int i = 0; i < n; ++i) voln *= vol;

  double acc = 0.0;
  std::vector<std::int64_t> z(n, 0);
  std::int64_t count = static_cast<std::int64_t>(total);
  for (std::int64_t flat = 0; flat < count; ++flat) {
    std::int64_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      z[i] = rem % s;
      rem /= s;
    }
    double fv = f[flat];
    if (fv == 0.0) continue;
    // multiplicities per distinct site in the tuple
    double wprod = 1.0;
    for (int i = 0; i < n; ++i) {
      bool seen = false;
      for (int j = 0; j < i; ++j) seen = seen || z[j] == z[i];
      if (seen) continue;
      int m = 0;
      for (int j = 0; j < n; ++j)
        if (z[j] == z[i]) ++m;
      wprod *= wp[z[i]][m];
    }
    acc += fv * wprod;
  }
  return voln * acc;
}

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double rising_step(double s) { // 0 at s <= 0, 1 at s >= 1
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double b0 = bump(s), b1 = bump(1.0 - s);
  return b0 / (b0 + b1);
}

} // namespace

double chi_value(const ChiProfile& chi, const BravaisBasis& basis, const Vec& freq) {
  double m = 0.0;
  for (int i = 0; i < basis.d; ++i)
    m = std::max(m, std::abs(dot(freq, basis.a[i], basis.d)));
  return rising_step((m - chi.inner) / (chi.outer - chi.inner));
}

double renorm_constant(const JumpMeasure& mu, const BravaisTorus& t,
                       const ChiProfile& chi) {
  if (!(chi.inner > 0.0 && chi.outer > chi.inner))
    throw config_error("chi: need 0 < inner < outer");
  double acc = 0.0;
  for (std::int64_t m = 0; m < t.size(); ++m) {
    Vec x = t.frequency(m);
    double c = chi_value(chi, t.basis, x);
    if (c == 0.0) continue;
    double l = multiplier_l_at(mu, t, x);
    if (!(l > 0.0))
      throw numeric_error("renorm_constant: chi support meets a zero of l^eps_mu");
    acc += c / l;
  }
  return acc * t.dual_cell();
}

EnhancedNoise build_enhanced(const Field& xi, const JumpMeasure& mu,
                             const ChiProfile& chi, const PartitionOfUnity& pou) {
  if (!xi.torus.same_grid(pou.torus)) throw shape_error("build_enhanced: torus mismatch");
  const auto& t = xi.torus;
  std::vector<double> table(t.size());
  for (std::int64_t m = 0; m < t.size(); ++m) {
    Vec x = t.frequency(m);
    double c = chi_value(chi, t.basis, x);
    if (c == 0.0) {
      table[m] = 0.0;
      continue;
    }
    double l = multiplier_l_at(mu, t, x);
    if (!(l > 0.0))
      throw numeric_error("build_enhanced: chi support meets a zero of l^eps_mu");
    table[m] = c / l;
  }
  EnhancedNoise e;
  e.chi = chi;
  e.xi = xi;
  e.X = apply_multiplier_table(xi, table);
  e.c_eps = renorm_constant(mu, t, chi);
  e.resonant_renorm = resonant(e.X, xi, pou) - constant(t, e.c_eps);
  return e;
}

double regularity_statistic(const EnhancedNoise& e, const RegularityParams& params,
                            const PartitionOfUnity& pou) {
  const double shift = 2.0 * params.kappa / params.sigma;
  PNorm p = PNorm::val(params.p_xi);
  BesovParams b1{params.alpha + shift - 2.0, p, PNorm::inf(),
                 Weight::polynomial(params.kappa)};
  BesovParams b2{params.alpha + shift, p, PNorm::inf(),
                 Weight::polynomial(params.kappa)};
  BesovParams b3{2.0 * params.alpha + 2.0 * shift - 2.0, p, PNorm::inf(),
                 Weight::polynomial(2.0 * params.kappa)};
  double n1 = besov_norm(e.xi, b1, pou);
  double n2 = besov_norm(e.X, b2, pou);
  double n3 = besov_norm(e.resonant_renorm, b3, pou);
  return std::max(n1, std::max(n2, n3));
}

} // namespace paralat
