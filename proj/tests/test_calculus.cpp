#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "paralat/calculus.hpp"
#include "paralat/stochastic.hpp"

using namespace paralat;

namespace {

Field random_field(const BravaisTorus& t, std::uint64_t seed) {
  NoiseSpec spec;
  spec.seed = seed;
  return sample_noise(spec, t);
}

} // namespace

TEST_CASE("partition sums to 1 on the dual grid") {
  for (int N : {1, 2, 3}) {
    BravaisTorus t = build_torus(square_basis(2), N, 8 << N);
    PartitionOfUnity pou = build_partition(t);
    CHECK(pou.j_G == N + 1);
    for (std::int64_t m = 0; m < t.size(); ++m) {
      double s = 0.0;
      for (int j = -1; j <= pou.j_G; ++j) s += pou.block(j)[m];
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("blocks with |j - j'| > 1 have disjoint supports") {
  BravaisTorus t = build_torus(square_basis(2), 3, 64);
  PartitionOfUnity pou = build_partition(t);
  for (int j1 = -1; j1 <= pou.j_G; ++j1)
    for (int j2 = j1 + 2; j2 <= pou.j_G; ++j2)
      for (std::int64_t m = 0; m < t.size(); ++m)
        CHECK(pou.block(j1)[m] * pou.block(j2)[m] == 0.0);
}

TEST_CASE("block supports live on dyadic annuli") {
  BravaisTorus t = build_torus(square_basis(2), 3, 64);
  PartitionOfUnity pou = build_partition(t);
  for (int j = 0; j < pou.j_G; ++j) {
    for (std::int64_t m = 0; m < t.size(); ++m) {
      if (pou.block(j)[m] == 0.0) continue;
      double radius = norm2(t.frequency(m), 2);
      CHECK(radius >= 0.375 * std::ldexp(pou.r, j) - 1e-12);
      CHECK(radius <= std::ldexp(pou.r, j + 1) + 1e-12);
    }
  }
}

TEST_CASE("partition is rejected on degenerate grids") {
  // N = 0 and small M leaves no room for a dyadic decomposition with j_G >= 1
  CHECK(build_partition(build_torus(square_basis(2), 1, 8)).j_G == 2);
  CHECK_THROWS_AS(build_partition(build_torus(square_basis(2), 0, 4), 100.0),
                  config_error);
}

TEST_CASE("Littlewood-Paley reconstruction and block calculus") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f = random_field(t, 7);

  Field sum(t);
  auto blocks = all_blocks(f, pou);
  for (const auto& b : blocks) sum = sum + b;
  CHECK(linf_norm(sum - f) < 1e-11 * linf_norm(f));

  // partial_sum over everything is the identity
  Field full = partial_sum(f, pou.j_G + 1, pou);
  CHECK(linf_norm(full - f) < 1e-11 * linf_norm(f));

  // all_blocks agrees with lp_block
  for (int j = -1; j <= pou.j_G; ++j)
    CHECK(linf_norm(blocks[j + 1] - lp_block(f, j, pou)) < 1e-12);

  CHECK_THROWS_AS(lp_block(f, pou.j_G + 1, pou), argument_error);
  CHECK_THROWS_AS(lp_block(f, -2, pou), argument_error);
}

TEST_CASE("constants live in the lowest block") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field one = constant(t, 1.0);
  CHECK(linf_norm(lp_block(one, -1, pou) - one) < 1e-12);
  for (int j = 0; j <= pou.j_G; ++j)
    CHECK(linf_norm(lp_block(one, j, pou)) < 1e-12);
}

TEST_CASE("weighted Lp norms against a direct oracle") {
  BravaisTorus t = build_torus(square_basis(2), 1, 16);
  Field f = random_field(t, 13);
  Weight rho = Weight::polynomial(0.7);
  double direct = 0.0, sup = 0.0;
  for (std::int64_t k = 0; k < t.size(); ++k) {
    double w = rho(t.point(k), 2) * std::abs(f[k]);
    direct += t.cell_volume * std::pow(w, 3.0);
    sup = std::max(sup, w);
  }
  CHECK(weighted_lp(f, PNorm::val(3.0), rho) ==
        doctest::Approx(std::cbrt(direct)).epsilon(1e-12));
  CHECK(weighted_lp(f, PNorm::inf(), rho) == doctest::Approx(sup).epsilon(1e-12));
  CHECK(weighted_lp(f, PNorm::val(2.0), Weight::one()) ==
        doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
}

TEST_CASE("Besov norm of a constant has only the j = -1 term") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field c = constant(t, 2.0);
  BesovParams bp;
  bp.alpha = 0.6;
  double expect = std::pow(2.0, -0.6) * lp_norm(c, 2.0);
  CHECK(besov_norm(c, bp, pou) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("Besov norm matches its definitional block oracle") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f = random_field(t, 17);
  Weight rho = Weight::polynomial(0.3);
  for (double alpha : {-0.4, 0.0, 0.8}) {
    double sup = 0.0, sum1 = 0.0;
    for (int j = -1; j <= pou.j_G; ++j) {
      double term = std::pow(2.0, j * alpha) *
                    weighted_lp(lp_block(f, j, pou), PNorm::val(2.0), rho);
      sup = std::max(sup, term);
      sum1 += term;
    }
    BesovParams bi{alpha, PNorm::val(2.0), PNorm::inf(), rho};
    BesovParams b1{alpha, PNorm::val(2.0), PNorm::val(1.0), rho};
    CHECK(besov_norm(f, bi, pou) == doctest::Approx(sup).epsilon(1e-11));
    CHECK(besov_norm(f, b1, pou) == doctest::Approx(sum1).epsilon(1e-11));
  }
}

TEST_CASE("Bony decomposition is exact") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f = random_field(t, 23), g = random_field(t, 29);
  Field sum = paraproduct(f, g, pou) + paraproduct(g, f, pou) + resonant(f, g, pou);
  Field prod = f * g;
  CHECK(linf_norm(sum - prod) < 1e-10 * linf_norm(prod));
}

TEST_CASE("paraproduct and resonant match definitional block oracles") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f = random_field(t, 31), g = random_field(t, 37);
  auto bf = all_blocks(f, pou), bg = all_blocks(g, pou);

  Field para(t);
  for (int j = 1; j <= pou.j_G; ++j) {
    Field s(t);
    for (int i = -1; i <= j - 2; ++i) s = s + bf[i + 1];
    para = para + s * bg[j + 1];
  }
  CHECK(linf_norm(para - paraproduct(f, g, pou)) < 1e-11 * linf_norm(para));

  Field reso(t);
  for (int j1 = -1; j1 <= pou.j_G; ++j1)
    for (int j2 = std::max(-1, j1 - 1); j2 <= std::min(pou.j_G, j1 + 1); ++j2)
      reso = reso + bf[j1 + 1] * bg[j2 + 1];
  CHECK(linf_norm(reso - resonant(f, g, pou)) < 1e-11 * linf_norm(reso));
}

TEST_CASE("paraproduct with a constant low-frequency factor") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field g = random_field(t, 41);
  // 1 <~ g = g - Delta_{-1} g - Delta_0 g (S_{j-1} 1 = 1 for every j >= 1)
  Field expect = g - lp_block(g, -1, pou) - lp_block(g, 0, pou);
  CHECK(linf_norm(paraproduct(constant(t, 1.0), g, pou) - expect) <
        1e-11 * linf_norm(g));
  // g <~ 1 = 0: the constant has no blocks with j >= 1
  CHECK(linf_norm(paraproduct(g, constant(t, 1.0), pou)) < 1e-11 * linf_norm(g));
  // 1 (.) 1 = 1
  Field r = resonant(constant(t, 1.0), constant(t, 1.0), pou);
  CHECK(linf_norm(r - constant(t, 1.0)) < 1e-12);
}

TEST_CASE("commutator matches its definitional expansion") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f1 = random_field(t, 43), f2 = random_field(t, 47), f3 = random_field(t, 53);
  Field expect =
      resonant(paraproduct(f1, f2, pou), f3, pou) - f1 * resonant(f2, f3, pou);
  Field got = commutator(f1, f2, f3, pou);
  CHECK(linf_norm(got - expect) < 1e-10 * (1.0 + linf_norm(expect)));
  // trilinear scaling
  Field scaled = commutator(2.0 * f1, f2, 0.5 * f3, pou);
  CHECK(linf_norm(scaled - got) < 1e-10 * (1.0 + linf_norm(got)));
}

TEST_CASE("time kernel is a normalized bump on (1, 2)") {
  const TimeKernel& ker = default_time_kernel();
  CHECK(ker.density(0.99) == 0.0);
  CHECK(ker.density(2.01) == 0.0);
  CHECK(ker.density(1.5) > 0.0);
  CHECK(ker.cdf(1.0) == 0.0);
  CHECK(ker.cdf(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  // CDF is consistent with a fine Riemann sum of the density
  const int n = 20000;
  double acc = 0.0, du = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    double u = 1.0 + (i + 0.5) * du;
    acc += ker.density(u) * du;
    if (i % 500 == 0) CHECK(std::abs(acc - ker.cdf(u + 0.5 * du)) < 1e-4);
  }
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("q_weights sum to 1 and reduce to the tail mass for early times") {
  const TimeKernel& ker = default_time_kernel();
  for (int i : {1, 2, 4}) {
    for (int t_idx : {1, 3, 17}) {
      auto w = q_weights(i, t_idx, 0.05, ker);
      CHECK(static_cast<int>(w.size()) == t_idx + 1);
      double s = 0.0;
      for (double x : w) {
        s += x;
        CHECK(x >= -1e-14);
      }
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
  // 2^{2i} t_n < 1: the kernel has not activated, everything sits in the tail
  auto w = q_weights(1, 2, 0.05, ker); // 4 * 0.1 < 1
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w[1] == 0.0);
  CHECK(w[2] == 0.0);
}

TEST_CASE("q_weights converge to the exact kernel average") {
  const TimeKernel& ker = default_time_kernel();
  const int i = 1;
  const double tn = 1.2, lam = std::ldexp(1.0, 2 * i);
  auto fval = [](double t) { return std::sin(3.0 * t) + 0.25 * t * t; };
  // exact Q_i f(tn) = int lam phi(lam (tn - s)) f(s) ds by fine Riemann sum
  // (the kernel support lam (tn - s) in (1, 2) keeps s > 0 here, no clamp)
  const int nfine = 400000;
  const double lo = tn - 2.0 / lam, hi = tn - 1.0 / lam;
  double exact = 0.0, ds = (hi - lo) / nfine;
  for (int q = 0; q < nfine; ++q) {
    double s = lo + (q + 0.5) * ds;
    exact += lam * ker.density(lam * (tn - s)) * fval(s) * ds;
  }
  auto combined = [&](double dt, int t_idx) {
    auto w = q_weights(i, t_idx, dt, ker);
    double acc = 0.0;
    for (int k = 0; k <= t_idx; ++k) acc += w[k] * fval(k * dt);
    return acc;
  };
  double e1 = std::abs(combined(0.1, 12) - exact);
  double e2 = std::abs(combined(0.05, 24) - exact);
  CHECK(e1 < 2e-2);
  CHECK(e2 <= 0.6 * e1 + 1e-6);
}

TEST_CASE("modified paraproduct of a time-constant factor is the paraproduct") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f = random_field(t, 59), g = random_field(t, 61);
  std::vector<Field> F(9, f);
  Field got = modified_paraproduct(F, g, 8, 0.05, pou);
  Field expect = paraproduct(f, g, pou);
  CHECK(linf_norm(got - expect) < 1e-10 * (1.0 + linf_norm(expect)));
  // zero high-frequency factor
  Field zero = modified_paraproduct(F, Field(t), 8, 0.05, pou);
  CHECK(linf_norm(zero) < 1e-14);
}

TEST_CASE("parabolic norm of a time-constant trajectory") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field f = random_field(t, 67);
  std::vector<Field> F(5, f);
  double alpha = 0.5;
  BesovParams bp{alpha, PNorm::val(2.0), PNorm::inf(), Weight::one()};
  double expect = weighted_lp(f, PNorm::val(2.0), Weight::one()) + besov_norm(f, bp, pou);
  double got = parabolic_norm(F, 0.1, 0.0, alpha, PNorm::val(2.0), Weight::one(), pou);
  CHECK(got == doctest::Approx(expect).epsilon(1e-10));
  // gamma weighting kills the t = 0 slice only through the prefactor
  double gam = parabolic_norm(F, 0.1, 1.0, alpha, PNorm::val(2.0), Weight::one(), pou);
  CHECK(gam > 0.0);
}
