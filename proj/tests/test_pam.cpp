#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "paralat/pam.hpp"

using namespace paralat;

namespace {

Field smooth_bump(const BravaisTorus& t) {
  Field f(t);
  for (std::int64_t k = 0; k < t.size(); ++k) {
    Vec p = t.point(k);
    f[k] = std::exp(-norm2(p, t.basis.d));
  }
  return f;
}

PamRun base_run(std::uint64_t seed) {
  PamRun run;
  run.torus = build_torus(square_basis(2), 1, 16);
  run.mu = simple_random_walk(2);
  run.F = Nonlinearity::logistic(1.0);
  run.noise = sample_noise(macro_white_noise(run.torus, seed), run.torus);
  run.c_eps = renorm_constant(run.mu, run.torus, ChiProfile{});
  run.eps = run.torus.eps;
  run.u0 = smooth_bump(run.torus);
  run.T = 0.1;
  run.dt = 1e-3;
  return run;
}

} // namespace

TEST_CASE("nonlinearity factories") {
  Nonlinearity lin = Nonlinearity::linear(2.5);
  CHECK(lin.eval(3.0) == doctest::Approx(7.5));
  CHECK(lin.deriv(3.0) == doctest::Approx(2.5));
  CHECK(lin.fprime0 == doctest::Approx(2.5));

  Nonlinearity lg = Nonlinearity::logistic(1.5);
  CHECK(lg.eval(0.0) == 0.0);
  CHECK(lg.eval(2.0) == doctest::Approx(2.0 * (1.5 - 2.0)));
  CHECK(lg.fprime0 == doctest::Approx(1.5));
  CHECK(lg.deriv(1.0) == doctest::Approx(-0.5));

  Nonlinearity poly = Nonlinearity::polynomial({1.0, 0.0, 2.0});
  CHECK(poly.eval(2.0) == doctest::Approx(2.0 + 2.0 * 8.0));
  CHECK(poly.deriv(2.0) == doctest::Approx(1.0 + 6.0 * 4.0));
  CHECK(poly.fprime0 == doctest::Approx(1.0));
  CHECK(poly.second_deriv_bound > 0.0);
  CHECK_THROWS_AS(Nonlinearity::polynomial({}), config_error);
}

TEST_CASE("zero reaction reduces to the heat semigroup") {
  PamRun run = base_run(3);
  run.F = Nonlinearity::linear(0.0);
  run.dt = 5e-3;
  PamResult res = solve(run, 4);
  CHECK(static_cast<int>(res.snapshots.size()) == 5);
  CHECK(res.snap_dt == doctest::Approx(run.T / 4.0));
  CHECK(!res.blew_up);
  for (int s = 0; s <= 4; ++s) {
    Field expect = semigroup_apply(run.u0, s * res.snap_dt, run.mu);
    CHECK(linf_norm(res.snapshots[s] - expect) < 1e-9 * linf_norm(expect));
  }
}

TEST_CASE("linear reaction with zero noise has a closed form") {
  PamRun run = base_run(5);
  double C = 1.3;
  run.F = Nonlinearity::linear(C);
  run.noise = Field(run.torus); // xi = 0; only the -F'(0) c^eps shift acts
  run.T = 0.2;
  auto err_for = [&](double dt) {
    run.dt = dt;
    PamResult res = solve(run, 1);
    Field expect = std::exp(-C * C * run.c_eps * run.T) *
                   semigroup_apply(run.u0, run.T, run.mu);
    return linf_norm(res.snapshots[1] - expect) / linf_norm(expect);
  };
  double e1 = err_for(2e-3), e2 = err_for(1e-3);
  CHECK(e1 < 5e-3);
  // first order in dt
  double order = std::log2(e1 / e2);
  CHECK(order > 0.9);
  CHECK(order < 1.4);
}

TEST_CASE("self-convergence of the nonlinear macro solver") {
  PamRun run = base_run(7);
  run.adaptive = false;
  auto at_T = [&](double dt) {
    run.dt = dt;
    return solve(run, 1).snapshots[1];
  };
  Field u1 = at_T(4e-3), u2 = at_T(2e-3), u3 = at_T(1e-3);
  double e1 = linf_norm(u1 - u2), e2 = linf_norm(u2 - u3);
  double order = std::log2(e1 / e2);
  CHECK(order > 0.9);
  CHECK(order < 1.6);
}

TEST_CASE("unrenormalized linear dynamics grow by exp(F'(0)^2 c T) in mass") {
  // pathwise identity for linear F: dropping the -F'(0)^2 c^eps u term
  // multiplies the solution by e^{F'(0)^2 c^eps t}
  PamRun run = base_run(9);
  run.F = Nonlinearity::linear(1.0);
  run.T = 0.05;
  run.dt = 2e-4;
  PamResult ren = solve(run, 1);
  run.renormalize = false;
  PamResult unren = solve(run, 1);
  double expect = std::exp(run.c_eps * run.T);
  Field scaled = expect * ren.snapshots[1];
  CHECK(linf_norm(unren.snapshots[1] - scaled) < 5e-3 * linf_norm(scaled));
}

TEST_CASE("micro noise construction and rescaling") {
  BravaisTorus macro = build_torus(square_basis(2), 2, 16);
  BravaisTorus micro = build_torus(square_basis(2), 0, 16);
  Field xi = sample_noise(macro_white_noise(macro, 11), macro);
  double c = 0.7, fp0 = 1.4;
  Field eta = micro_noise_from_macro(xi, micro, fp0, c);
  double eps2 = macro.eps * macro.eps;
  for (std::int64_t k = 0; k < xi.size(); ++k)
    CHECK(eta[k] == doctest::Approx(eps2 * xi[k] - fp0 * c * eps2).epsilon(1e-13));

  std::vector<Field> v = {constant(micro, 2.0)};
  auto u = rescale_micro_to_macro(v, 2);
  CHECK(u[0].torus.N == 2);
  CHECK(u[0].torus.M == 16);
  CHECK(u[0][5] == doctest::Approx(16.0 * 2.0));
}

TEST_CASE("micro and macro models coincide under exact rescaling") {
  PamRun mac = base_run(13);
  mac.adaptive = false;
  mac.T = 0.05;
  mac.dt = 1e-3;
  PamResult rm = solve(mac, 2);

  int N = mac.torus.N;
  double eps2 = mac.torus.eps * mac.torus.eps;
  PamRun mic;
  mic.torus = build_torus(square_basis(2), 0, mac.torus.M);
  mic.mu = mac.mu;
  mic.F = mac.F;
  mic.noise = micro_noise_from_macro(mac.noise, mic.torus, mac.F.fprime0, mac.c_eps);
  mic.eps = mac.eps;
  mic.micro = true;
  mic.adaptive = false;
  mic.u0 = Field(mic.torus);
  for (std::int64_t k = 0; k < mic.u0.size(); ++k) mic.u0[k] = eps2 * mac.u0[k];
  mic.T = mac.T / eps2;
  mic.dt = mac.dt / eps2;
  PamResult rv = solve(mic, 2);

  auto rescaled = rescale_micro_to_macro(rv.snapshots, N);
  for (std::size_t s = 0; s < rescaled.size(); ++s)
    CHECK(linf_norm(rescaled[s] - rm.snapshots[s]) <
          1e-9 * (1.0 + linf_norm(rm.snapshots[s])));
}

TEST_CASE("universality gap") {
  BravaisTorus t = build_torus(square_basis(2), 1, 16);
  Field u = smooth_bump(t);
  CHECK(universality_gap(u, u, 0.2) == 0.0);
  CHECK_THROWS_AS(universality_gap(u, Field(t), 0.2), numeric_error);

  // quadratic perturbation: gap is first order in the coefficient
  PamRun lin = base_run(17);
  lin.F = Nonlinearity::linear(1.0);
  lin.T = 0.05;
  lin.dt = 5e-4;
  Field ul = solve(lin, 1).snapshots[1];
  auto gap_for = [&](double lam) {
    PamRun nl = lin;
    nl.F = Nonlinearity::polynomial({1.0, lam});
    return universality_gap(solve(nl, 1).snapshots[1], ul, 0.2);
  };
  double g1 = gap_for(0.01), g2 = gap_for(0.02);
  CHECK(g1 > 0.0);
  CHECK(g2 / g1 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("blow-up is reported, not thrown") {
  PamRun run = base_run(19);
  run.adaptive = false;
  run.renormalize = false;
  run.F = Nonlinearity::polynomial({0.0, 1.0}); // F(u) = u^2, strong feedback
  run.u0 = constant(run.torus, 1e80);
  run.dt = 0.01;
  run.T = 0.1;
  PamResult res = solve(run, 2);
  CHECK(res.blew_up);
  CHECK(res.blowup_step >= 0);
  CHECK(static_cast<int>(res.snapshots.size()) <= 3);
}

TEST_CASE("adaptive stepping keeps the solver stable on stiff reactions") {
  PamRun run = base_run(23);
  run.F = Nonlinearity::logistic(1.0);
  run.noise = 40.0 * run.noise; // stiff multiplicative term
  run.dt = 0.02;                // dt J > 0.5 without halving
  PamResult res = solve(run, 2);
  CHECK(!res.blew_up);
  // halving happened: more steps than T / dt
  CHECK(res.steps_taken > static_cast<std::int64_t>(run.T / run.dt) + 1);
}

TEST_CASE("paracontrolled decomposition limits") {
  BravaisTorus t = build_torus(square_basis(2), 2, 32);
  PartitionOfUnity pou = build_partition(t);
  Field X = sample_noise(macro_white_noise(t, 29), t);
  std::vector<Field> zero(4, Field(t));
  auto [sharp0, diag0] =
      paracontrolled_decompose(zero, X, 1.0, 0.01, pou, 0.3, Weight::one());
  for (const auto& f : sharp0) CHECK(linf_norm(f) == 0.0);

  std::vector<Field> u(4, smooth_bump(t));
  auto [sharp, diag] =
      paracontrolled_decompose(u, Field(t), 1.0, 0.01, pou, 0.3, Weight::one());
  for (std::size_t s = 0; s < u.size(); ++s)
    CHECK(linf_norm(sharp[s] - u[s]) < 1e-13);
  CHECK(diag.t.size() == u.size());
  CHECK(diag.norm_u[0] > 0.0);
}
