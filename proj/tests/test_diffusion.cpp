#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "paralat/diffusion.hpp"
#include "paralat/stochastic.hpp"

using namespace paralat;

namespace {

Field random_field(const BravaisTorus& t, std::uint64_t seed) {
  NoiseSpec spec;
  spec.seed = seed;
  return sample_noise(spec, t);
}

} // namespace

TEST_CASE("jump measure validation") {
  CHECK_THROWS_AS(make_measure(2, {}), config_error);
  CHECK_THROWS_AS(make_measure(2, {{{1, 0, 0}, -1.0}}), config_error);
  CHECK_THROWS_AS(make_measure(2, {{{0, 0, 0}, 1.0}}), config_error);
  // {2 e_1, e_2} only reaches the even-x sublattice
  CHECK_THROWS_AS(make_measure(2, {{{2, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}}), config_error);
  // {2 e_1, 3 e_1} generates Z in d = 1
  CHECK_NOTHROW(make_measure(1, {{{2, 0, 0}, 1.0}, {{3, 0, 0}, 0.5}}));
  JumpMeasure srw = simple_random_walk(2);
  CHECK(srw.total_rate() == doctest::Approx(1.0));
}

TEST_CASE("covariance matrix and continuum symbol of the simple random walk") {
  BravaisBasis b = square_basis(2);
  JumpMeasure srw = simple_random_walk(2);
  auto a = mu_matrix(srw, b);
  CHECK(a[0][0] == doctest::Approx(0.5));
  CHECK(a[1][1] == doctest::Approx(0.5));
  CHECK(std::abs(a[0][1]) < 1e-14);
  Vec x{0.3, -0.4, 0.0};
  // (2 pi)^2 (1/2) x . a x = pi^2 |x|^2 for a = I/2
  CHECK(continuum_symbol(srw, b, x) ==
        doctest::Approx(M_PI * M_PI * 0.25).epsilon(1e-12));
}

TEST_CASE("multiplier l at hand-computed points") {
  BravaisTorus t = build_torus(square_basis(2), 0, 8); // eps = 1
  JumpMeasure srw = simple_random_walk(2);
  CHECK(multiplier_l_at(srw, t, Vec{0.0, 0.0, 0.0}) == 0.0);
  // l((1/2, 0)) = 2 [ (1/2) sin^2(pi/2) + (1/2) sin^2(0) ] = 1
  CHECK(multiplier_l_at(srw, t, Vec{0.5, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(multiplier_l_at(srw, t, Vec{0.5, 0.5, 0.0}) == doctest::Approx(2.0));
  // positivity away from 0 on the dual grid
  auto table = multiplier_l(srw, t);
  for (std::int64_t m = 1; m < t.size(); ++m) CHECK(table[m] > 0.0);
  CHECK(table[0] == 0.0);
}

TEST_CASE("multiplier l converges to the continuum symbol at rate 2") {
  JumpMeasure srw = simple_random_walk(2);
  BravaisBasis b = square_basis(2);
  Vec x{0.7, -0.3, 0.0};
  double sym = continuum_symbol(srw, b, x);
  std::vector<double> le, lerr;
  for (int N = 2; N <= 6; ++N) {
    BravaisTorus t = build_torus(b, N, 8);
    le.push_back(std::log(t.eps));
    lerr.push_back(std::log(std::abs(multiplier_l_at(srw, t, x) - sym)));
  }
  // slope of log err vs log eps ~ 2
  double n = le.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < le.size(); ++i) {
    sx += le[i]; sy += lerr[i]; sxx += le[i] * le[i]; sxy += le[i] * lerr[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
}

TEST_CASE("generator stencil is the 5-point scheme for the SRW") {
  BravaisTorus t = build_torus(square_basis(2), 2, 16);
  JumpMeasure srw = simple_random_walk(2);
  Field f = random_field(t, 3);
  Field g = generator_apply(f, srw);
  double ieps2 = 1.0 / (t.eps * t.eps);
  for (std::int64_t k = 0; k < t.size(); ++k) {
    auto idx = t.unflatten(k);
    auto at = [&](int di, int dj) {
      std::array<int, kMaxDim> p = idx;
      p[0] += di;
      p[1] += dj;
      return f[t.wrap_flatten(p)];
    };
    double expect = ieps2 * ((at(1, 0) + at(-1, 0) + at(0, 1) + at(0, -1)) / 4.0 -
                             f[k]);
    CHECK(g[k] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("stencil and spectral generators agree") {
  BravaisTorus t = build_torus(square_basis(2), 2, 16);
  JumpMeasure mu = make_measure(
      2, {{{1, 0, 0}, 0.6}, {{0, 1, 0}, 0.3}, {{1, 1, 0}, 0.1}});
  Field f = random_field(t, 5);
  Field a = generator_apply(f, mu), b = generator_apply_spectral(f, mu);
  CHECK(linf_norm(a - b) < 1e-9 * (1.0 + linf_norm(a)));
  // both conserve total mass
  CHECK(std::abs(l1_mass(a)) < 1e-9 * linf_norm(f));
}

TEST_CASE("semigroup identities") {
  BravaisTorus t = build_torus(square_basis(2), 2, 16);
  JumpMeasure srw = simple_random_walk(2);
  Field f = random_field(t, 7);
  // t = 0 is the identity
  CHECK(linf_norm(semigroup_apply(f, 0.0, srw) - f) < 1e-12 * linf_norm(f));
  // semigroup law
  Field ab = semigroup_apply(semigroup_apply(f, 0.2, srw), 0.3, srw);
  Field c = semigroup_apply(f, 0.5, srw);
  CHECK(linf_norm(ab - c) < 1e-11 * (1.0 + linf_norm(c)));
  // constants are invariant, mass is conserved, sup norm contracts
  Field one = constant(t, 2.0);
  CHECK(linf_norm(semigroup_apply(one, 1.0, srw) - one) < 1e-11);
  Field g = semigroup_apply(f, 0.7, srw);
  CHECK(l1_mass(g) == doctest::Approx(l1_mass(f)).epsilon(1e-9));
  CHECK(linf_norm(g) <= linf_norm(f) * (1.0 + 1e-12));
  CHECK_THROWS_AS(semigroup_apply(f, -0.1, srw), argument_error);
}

TEST_CASE("semigroup damps a single mode by exp(-t l)") {
  BravaisTorus t = build_torus(square_basis(2), 1, 16);
  JumpMeasure srw = simple_random_walk(2);
  std::int64_t m0 = t.flatten({2, 3, 0});
  Vec x = t.frequency(m0);
  Field f(t);
  for (std::int64_t k = 0; k < t.size(); ++k)
    f[k] = std::cos(2.0 * M_PI * dot(x, t.point(k), 2));
  double tt = 0.37;
  double decay = std::exp(-tt * multiplier_l_at(srw, t, x));
  Field g = semigroup_apply(f, tt, srw);
  CHECK(linf_norm(g - decay * f) < 1e-11);
}

TEST_CASE("phi1 values and series branch") {
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi1(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(phi1(-1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(phi1(-1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-12));
  // series branch agrees with the direct formula just below the cutover
  CHECK(phi1(9.9e-5) ==
        doctest::Approx(std::expm1(9.9e-5) / 9.9e-5).epsilon(1e-12));
  CHECK(phi1(1e-6) == doctest::Approx(1.0 + 0.5e-6).epsilon(1e-12));
}

TEST_CASE("ETD propagator tables") {
  BravaisTorus t = build_torus(square_basis(2), 1, 8);
  JumpMeasure srw = simple_random_walk(2);
  double dt = 0.05;
  EtdPropagators etd = etd_propagators(srw, t, dt);
  auto l = multiplier_l(srw, t);
  for (std::int64_t m = 0; m < t.size(); ++m) {
    CHECK(etd.prop[m] == doctest::Approx(std::exp(-dt * l[m])).epsilon(1e-13));
    CHECK(etd.src[m] == doctest::Approx(dt * phi1(-dt * l[m])).epsilon(1e-13));
  }
  CHECK(etd.src[0] == doctest::Approx(dt));
}
