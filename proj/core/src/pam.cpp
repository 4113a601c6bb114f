#include "paralat/pam.hpp"

#include <cmath>
#include <map>

namespace paralat {

namespace {

double poly_eval(const std::vector<double>& coeffs, double u) {
  // F(u) = sum_i coeffs[i] u^{i+1}
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = (acc + coeffs[i]) * u;
  return acc;
}

double poly_deriv(const std::vector<double>& coeffs, double u) {
  double acc = 0.0, up = 1.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += (i + 1) * coeffs[i] * up;
    up *= u;
  }
  return acc;
}

void check_fprime0(const Nonlinearity& f) {
  // Richardson-extrapolated central difference at 0.
  auto diff = [&](double h) { return (f.eval(h) - f.eval(-h)) / (2.0 * h); };
  double d1 = diff(1e-3), d2 = diff(5e-4);
  double fd = (4.0 * d2 - d1) / 3.0;
  if (std::abs(fd - f.fprime0) > 1e-10 * std::max(1.0, std::abs(f.fprime0)))
    throw config_error("nonlinearity: stored F'(0) does not match the expression");
  if (std::abs(f.eval(0.0)) != 0.0)
    throw config_error("nonlinearity: F(0) must be 0");
}

} // namespace

double Nonlinearity::eval(double u) const {
  switch (kind) {
    case Kind::linear: return c * u;
    case Kind::logistic: return u * (c - u);
    case Kind::polynomial: return poly_eval(coeffs, u);
  }
  return 0.0;
}

double Nonlinearity::deriv(double u) const {
  switch (kind) {
    case Kind::linear: return c;
    case Kind::logistic: return c - 2.0 * u;
    case Kind::polynomial: return poly_deriv(coeffs, u);
  }
  return 0.0;
}

Nonlinearity Nonlinearity::linear(double c) {
  Nonlinearity f;
  f.kind = Kind::linear;
  f.c = c;
  f.fprime0 = c;
  f.second_deriv_bound = 0.0;
  check_fprime0(f);
  return f;
}

Nonlinearity Nonlinearity::logistic(double C) {
  Nonlinearity f;
  f.kind = Kind::logistic;
  f.c = C;
  f.fprime0 = C;
  f.second_deriv_bound = 2.0;
  check_fprime0(f);
  return f;
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw config_error("nonlinearity: empty coefficient list");
  Nonlinearity f;
  f.kind = Kind::polynomial;
  f.coeffs = std::move(coeffs);
  f.fprime0 = f.coeffs[0];
  double b = 0.0; // |F''| on |u| <= 1, crude bound sum (i+1) i |c_i|
  for (std::size_t i = 1; i < f.coeffs.size(); ++i)
    b += (i + 1) * i * std::abs(f.coeffs[i]);
  f.second_deriv_bound = b;
  check_fprime0(f);
  return f;
}

namespace {

Field etd_step(const Field& u, const Field& reaction, const EtdPropagators& etd,
               std::int64_t step_no, double t_now) {
  SpectralField uhat = forward(u), rhat = forward(reaction);
  for (std::int64_t m = 0; m < uhat.size(); ++m)
    uhat[m] = etd.prop[m] * uhat[m] + etd.src[m] * rhat[m];
  Field next = inverse(uhat);
  for (double v : next.v)
    if (!std::isfinite(v) || std::abs(v) > 1e100)
      throw blowup_signal(static_cast<int>(step_no), t_now);
  return next;
}

Field macro_reaction(const Field& u, const PamRun& run) {
  const double eps2 = run.eps * run.eps;
  const double shift = run.renormalize ? run.F.fprime0 * run.c_eps : 0.0;
  Field r(u.torus);
  for (std::int64_t k = 0; k < u.size(); ++k)
    r[k] = run.F.eval(eps2 * u[k]) / eps2 * (run.noise[k] - shift);
  return r;
}

Field micro_reaction(const Field& v, const PamRun& run) {
  Field r(v.torus);
  for (std::int64_t k = 0; k < v.size(); ++k)
    r[k] = run.F.eval(v[k]) * run.noise[k];
  return r;
}

// Largest local reaction Jacobian |dR/du|, for the dt stability budget.
double reaction_jacobian(const Field& u, const PamRun& run) {
  double j = 0.0;
  if (run.micro) {
    for (std::int64_t k = 0; k < u.size(); ++k)
      j = std::max(j, std::abs(run.F.deriv(u[k]) * run.noise[k]));
  } else {
    const double eps2 = run.eps * run.eps;
    const double shift = run.renormalize ? run.F.fprime0 * run.c_eps : 0.0;
    for (std::int64_t k = 0; k < u.size(); ++k)
      j = std::max(j, std::abs(run.F.deriv(eps2 * u[k]) * (run.noise[k] - shift)));
  }
  return j;
}

} // namespace

Field step_macro(const Field& u, const PamRun& run, const EtdPropagators& etd) {
  return etd_step(u, macro_reaction(u, run), etd, -1, 0.0);
}

Field step_micro(const Field& v, const PamRun& run, const EtdPropagators& etd) {
  return etd_step(v, micro_reaction(v, run), etd, -1, 0.0);
}

PamResult solve(const PamRun& run, int n_snapshots) {
  if (n_snapshots < 1) throw argument_error("solve: need at least one snapshot");
  if (!(run.dt > 0.0 && run.T > 0.0)) throw argument_error("solve: need T, dt > 0");
  check_same_grid(run.noise, run.u0, "solve");

  PamResult res;
  res.snap_dt = run.T / n_snapshots;
  std::int64_t base_steps = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(res.snap_dt / run.dt)));
  const double base_dt = res.snap_dt / static_cast<double>(base_steps);

  std::map<int, EtdPropagators> tables; // keyed by log2(substeps)
  auto table_for = [&](int k) -> const EtdPropagators& {
    auto it = tables.find(k);
    if (it == tables.end())
      it = tables.emplace(k, etd_propagators(run.mu, run.torus, std::ldexp(base_dt, -k)))
               .first;
    return it->second;
  };

  Field u = run.u0;
  res.snapshots.push_back(u);
  double t = 0.0;
  try {
    for (int s = 0; s < n_snapshots; ++s) {
      for (std::int64_t b = 0; b < base_steps; ++b) {
        int k = 0;
        if (run.adaptive) {
          double j = reaction_jacobian(u, run);
          while (k < 20 && std::ldexp(base_dt, -k) * j > 0.5) ++k;
        }
        const auto& etd = table_for(k);
        const std::int64_t sub = std::int64_t{1} << k;
        for (std::int64_t q = 0; q < sub; ++q) {
          Field r = run.micro ? micro_reaction(u, run) : macro_reaction(u, run);
          u = etd_step(u, r, etd, res.steps_taken, t);
          ++res.steps_taken;
          t += etd.dt;
        }
      }
      res.snapshots.push_back(u);
    }
  } catch (const blowup_signal& b) {
    res.blew_up = true;
    res.blowup_step = b.step;
    res.blowup_t = b.t;
  }
  return res;
}

Field micro_noise_from_macro(const Field& xi, const BravaisTorus& micro_torus,
                             double fprime0, double c_eps) {
  if (micro_torus.M != xi.torus.M || micro_torus.basis.d != xi.torus.basis.d)
    throw shape_error("micro_noise_from_macro: window mismatch");
  const double eps2 = xi.torus.eps * xi.torus.eps;
  Field eta(micro_torus);
  for (std::int64_t k = 0; k < xi.size(); ++k)
    eta[k] = eps2 * xi[k] - fprime0 * c_eps * eps2;
  return eta;
}

std::vector<Field> rescale_micro_to_macro(const std::vector<Field>& v_snaps, int N) {
  if (v_snaps.empty()) return {};
  const auto& mt = v_snaps[0].torus;
  BravaisTorus macro = build_torus(mt.basis, mt.N + N, mt.M);
  const double inv_eps2 = std::ldexp(1.0, 2 * N);
  std::vector<Field> out;
  out.reserve(v_snaps.size());
  for (const auto& v : v_snaps) {
    Field u(macro);
    for (std::int64_t k = 0; k < v.size(); ++k) u[k] = inv_eps2 * v[k];
    out.push_back(std::move(u));
  }
  return out;
}

double universality_gap(const Field& u_nl, const Field& u_lin, double kappa) {
  check_same_grid(u_nl, u_lin, "universality_gap");
  Weight w = Weight::polynomial(kappa);
  PNorm p2 = PNorm::val(2.0);
  double den = weighted_lp(u_lin, p2, w);
  if (den == 0.0) throw numeric_error("universality_gap: zero reference solution");
  return weighted_lp(u_nl - u_lin, p2, w) / den;
}

std::pair<std::vector<Field>, DecompositionDiagnostics> paracontrolled_decompose(
    const std::vector<Field>& u_snaps, const Field& X, double fprime0, double dt,
    const PartitionOfUnity& pou, double alpha, const Weight& weight) {
  std::vector<Field> scaled;
  scaled.reserve(u_snaps.size());
  for (const auto& u : u_snaps) scaled.push_back(fprime0 * u);

  std::vector<Field> sharp;
  DecompositionDiagnostics diag;
  BesovParams b_sharp{2.0 * alpha, PNorm::inf(), PNorm::inf(), weight};
  BesovParams b_u{alpha, PNorm::inf(), PNorm::inf(), weight};
  for (std::size_t n = 0; n < u_snaps.size(); ++n) {
    Field mp = modified_paraproduct(scaled, X, static_cast<int>(n), dt, pou);
    sharp.push_back(u_snaps[n] - mp);
    diag.t.push_back(n * dt);
    diag.norm_sharp.push_back(besov_norm(sharp.back(), b_sharp, pou));
    diag.norm_u.push_back(besov_norm(u_snaps[n], b_u, pou));
  }
  return {std::move(sharp), std::move(diag)};
}

} // namespace paralat
