#include "paralat/calculus.hpp"

#include <cmath>

namespace paralat {

Weight Weight::polynomial(double kappa) {
  Weight w;
  w.kind = Kind::polynomial;
  w.kappa = kappa;
  return w;
}

Weight Weight::subexponential(double sigma, double l, double t) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw argument_error("weight: sigma must be in (0,1)");
  Weight w;
  w.kind = Kind::subexponential;
  w.sigma = sigma;
  w.l = l;
  w.t = t;
  return w;
}

double Weight::operator()(const Vec& x, int d) const {
  switch (kind) {
    case Kind::one: return 1.0;
    case Kind::polynomial: return std::pow(1.0 + norm2(x, d), -kappa);
    case Kind::subexponential:
      return std::exp(-(l + t) * std::pow(1.0 + norm2(x, d), sigma));
  }
  return 1.0;
}

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// h(s): 1 for s <= 3/8, 0 for s >= 1/2, smooth monotone in between.
double radial_h(double s) {
  if (s <= 0.375) return 1.0;
  if (s >= 0.5) return 0.0;
  double u = (s - 0.375) / 0.125;
  double b0 = bump(1.0 - u), b1 = bump(u);
  return b0 / (b0 + b1);
}

} // namespace

PartitionOfUnity build_partition(const BravaisTorus& torus, double r) {
  PartitionOfUnity pou;
  pou.torus = torus;
  double inradius = torus.basis.fourier_cell_inradius();
  pou.r = (r > 0.0) ? r : 0.5 * inradius;

  // j_G = inf{ j : supp phi_j touches the boundary of the scaled cell }.
  // supp phi_j reaches |x| = 2^j r; the boundary sits at distance 2^N inradius.
  double rho = std::ldexp(inradius, torus.N);
  pou.j_G = static_cast<int>(std::ceil(std::log2(rho / pou.r) - 1e-9));
  if (pou.j_G < 1)
    throw config_error("partition: grid too coarse to resolve phi_-1 (j_G < 1); "
                       "increase N or decrease the base radius");

  const std::int64_t n = torus.size();
  // h_j(x) = h(|x| / (2^j r)) for j = 0..j_G; blocks are differences so that
  // the partition telescopes exactly.
  std::vector<std::vector<double>> h(pou.j_G + 1, std::vector<double>(n));
  for (std::int64_t m = 0; m < n; ++m) {
    double ax = norm2(torus.frequency(m), torus.basis.d);
    for (int j = 0; j <= pou.j_G; ++j)
      h[j][m] = radial_h(ax / std::ldexp(pou.r, j));
  }
  pou.blocks.assign(pou.j_G + 2, std::vector<double>(n));
  for (std::int64_t m = 0; m < n; ++m) {
    pou.blocks[0][m] = h[0][m]; // phi_{-1}
    for (int j = 0; j < pou.j_G; ++j) pou.blocks[j + 1][m] = h[j + 1][m] - h[j][m];
    pou.blocks[pou.j_G + 1][m] = 1.0 - h[pou.j_G][m]; // boundary block
  }
  return pou;
}

namespace {

void check_block_index(int j, const PartitionOfUnity& pou, const char* where) {
  if (j < -1 || j > pou.j_G)
    throw argument_error(std::string(where) + ": block index " + std::to_string(j) +
                         " outside [-1, " + std::to_string(pou.j_G) + "]");
}

Field from_spectrum_times(const SpectralField& fhat, const std::vector<double>& table) {
  SpectralField g(fhat.torus);
  for (std::int64_t m = 0; m < fhat.size(); ++m) g[m] = fhat[m] * table[m];
  return inverse(g);
}

} // namespace

Field lp_block(const Field& f, int j, const PartitionOfUnity& pou) {
  check_block_index(j, pou, "lp_block");
  if (!f.torus.same_grid(pou.torus)) throw shape_error("lp_block: torus mismatch");
  return apply_multiplier_table(f, pou.block(j));
}

Field partial_sum(const Field& f, int j, const PartitionOfUnity& pou) {
  if (j < 0 || j > pou.j_G + 1)
    throw argument_error("partial_sum: index outside [0, j_G+1]");
  if (!f.torus.same_grid(pou.torus)) throw shape_error("partial_sum: torus mismatch");
  std::vector<double> table(pou.torus.size(), 0.0);
  for (int i = -1; i < j; ++i)
    for (std::int64_t m = 0; m < pou.torus.size(); ++m) table[m] += pou.block(i)[m];
  return apply_multiplier_table(f, table);
}

std::vector<Field> all_blocks(const Field& f, const PartitionOfUnity& pou) {
  if (!f.torus.same_grid(pou.torus)) throw shape_error("all_blocks: torus mismatch");
  SpectralField fhat = forward(f);
  std::vector<Field> out;
  out.reserve(pou.j_G + 2);
  for (int j = -1; j <= pou.j_G; ++j)
    out.push_back(from_spectrum_times(fhat, pou.block(j)));
  return out;
}

double weighted_lp(const Field& f, const PNorm& p, const Weight& rho) {
  const auto& t = f.torus;
  const int d = t.basis.d;
  if (p.is_inf) {
    double m = 0.0;
    for (std::int64_t k = 0; k < f.size(); ++k)
      m = std::max(m, std::abs(rho(t.point(k), d) * f[k]));
    return m;
  }
  double s = 0.0;
  for (std::int64_t k = 0; k < f.size(); ++k)
    s += std::pow(std::abs(rho(t.point(k), d) * f[k]), p.p);
  return std::pow(t.cell_volume * s, 1.0 / p.p);
}

double besov_norm(const Field& f, const BesovParams& params, const PartitionOfUnity& pou) {
  auto blocks = all_blocks(f, pou);
  double acc = 0.0;
  for (int j = -1; j <= pou.j_G; ++j) {
    double term = std::pow(2.0, params.alpha * j) *
                  weighted_lp(blocks[j + 1], params.p, params.weight);
    if (params.q.is_inf)
      acc = std::max(acc, term);
    else
      acc += std::pow(term, params.q.p);
  }
  return params.q.is_inf ? acc : std::pow(acc, 1.0 / params.q.p);
}

Field paraproduct(const Field& f, const Field& g, const PartitionOfUnity& pou) {
  check_same_grid(f, g, "paraproduct");
  if (!f.torus.same_grid(pou.torus)) throw shape_error("paraproduct: torus mismatch");
  SpectralField fhat = forward(f), ghat = forward(g);
  const std::int64_t n = pou.torus.size();
  std::vector<double> s_table(n, 0.0); // running sum_{i < j-1} phi_i
  Field out(f.torus);
  for (int j = 1; j <= pou.j_G; ++j) {
    for (std::int64_t m = 0; m < n; ++m) s_table[m] += pou.block(j - 2)[m];
    Field sf = from_spectrum_times(fhat, s_table);
    Field dg = from_spectrum_times(ghat, pou.block(j));
    for (std::int64_t k = 0; k < out.size(); ++k) out[k] += sf[k] * dg[k];
  }
  return out;
}

Field resonant(const Field& f, const Field& g, const PartitionOfUnity& pou) {
  check_same_grid(f, g, "resonant");
  if (!f.torus.same_grid(pou.torus)) throw shape_error("resonant: torus mismatch");
  auto bf = all_blocks(f, pou);
  auto bg = all_blocks(g, pou);
  Field out(f.torus);
  for (int j1 = -1; j1 <= pou.j_G; ++j1)
    for (int j2 = std::max(-1, j1 - 1); j2 <= std::min(pou.j_G, j1 + 1); ++j2)
      for (std::int64_t k = 0; k < out.size(); ++k)
        out[k] += bf[j1 + 1][k] * bg[j2 + 1][k];
  return out;
}

Field commutator(const Field& f1, const Field& f2, const Field& f3,
                 const PartitionOfUnity& pou) {
  return resonant(paraproduct(f1, f2, pou), f3, pou) - f1 * resonant(f2, f3, pou);
}

double TimeKernel::density(double u) const {
  if (u <= 1.0 || u >= 2.0) return 0.0;
  // normalized so that the CDF table endpoint is 1
  double raw = std::exp(-1.0 / ((u - 1.0) * (2.0 - u)));
  return raw * norm_;
}

double TimeKernel::cdf(double u) const {
  if (u <= 1.0) return 0.0;
  if (u >= 2.0) return 1.0;
  double pos = (u - 1.0) * (cdf_table.size() - 1);
  auto i = static_cast<std::size_t>(pos);
  if (i >= cdf_table.size() - 1) return cdf_table.back();
  double frac = pos - i;
  return cdf_table[i] * (1.0 - frac) + cdf_table[i + 1] * frac;
}

const TimeKernel& default_time_kernel() {
  static TimeKernel ker = [] {
    TimeKernel k;
    const int n = 4096;
    std::vector<double> dens(n + 1);
    for (int i = 0; i <= n; ++i) {
      double u = 1.0 + static_cast<double>(i) / n;
      double s = (u - 1.0) * (2.0 - u);
      dens[i] = s > 0.0 ? std::exp(-1.0 / s) : 0.0;
    }
    k.cdf_table.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i)
      k.cdf_table[i] = k.cdf_table[i - 1] + 0.5 * (dens[i - 1] + dens[i]) / n;
    double total = k.cdf_table[n];
    for (auto& v : k.cdf_table) v /= total;
    k.norm_ = 1.0 / total;
    return k;
  }();
  return ker;
}

std::vector<double> q_weights(int i, int t_idx, double dt, const TimeKernel& ker) {
  if (t_idx < 0) throw argument_error("q_weights: negative time index");
  const double scale = std::ldexp(1.0, 2 * i); // 2^{2i}
  std::vector<double> w(t_idx + 1, 0.0);
  double tn = t_idx * dt;
  // segment [t_k, t_{k+1}] carries kernel mass Phi(2^{2i}(tn-t_k)) - Phi(2^{2i}(tn-t_{k+1})),
  // split evenly between the endpoint samples (trapezoid in f).
  for (int k = 0; k < t_idx; ++k) {
    double mass = ker.cdf(scale * (tn - k * dt)) - ker.cdf(scale * (tn - (k + 1) * dt));
    w[k] += 0.5 * mass;
    w[k + 1] += 0.5 * mass;
  }
  // clamped tail: f(s v 0) = f(0) for s < 0
  w[0] += 1.0 - ker.cdf(scale * tn);
  return w;
}

Field modified_paraproduct(const std::vector<Field>& F, const Field& G_t, int t_idx,
                           double dt, const PartitionOfUnity& pou,
                           const TimeKernel& ker) {
  if (t_idx < 0 || t_idx >= static_cast<int>(F.size()))
    throw argument_error("modified_paraproduct: time index out of range");
  if (!(dt > 0.0)) throw argument_error("modified_paraproduct: need dt > 0");
  check_same_grid(F[0], G_t, "modified_paraproduct");
  if (!G_t.torus.same_grid(pou.torus))
    throw shape_error("modified_paraproduct: torus mismatch");

  SpectralField ghat = forward(G_t);
  const std::int64_t n = pou.torus.size();
  std::vector<double> s_table(n, 0.0);
  Field out(G_t.torus);
  for (int j = 1; j <= pou.j_G; ++j) {
    for (std::int64_t m = 0; m < n; ++m) s_table[m] += pou.block(j - 2)[m];
    auto w = q_weights(j, t_idx, dt, ker);
    Field fbar(G_t.torus);
    for (int k = 0; k <= t_idx; ++k)
      if (w[k] != 0.0)
        for (std::int64_t x = 0; x < fbar.size(); ++x) fbar[x] += w[k] * F[k][x];
    Field sf = apply_multiplier_table(fbar, s_table);
    Field dg = from_spectrum_times(ghat, pou.block(j));
    for (std::int64_t x = 0; x < out.size(); ++x) out[x] += sf[x] * dg[x];
  }
  return out;
}

double parabolic_norm(const std::vector<Field>& F, double dt, double gamma,
                      double alpha, const PNorm& p, const Weight& weight,
                      const PartitionOfUnity& pou) {
  const int n = static_cast<int>(F.size());
  if (n == 0) return 0.0;
  auto weight_at = [&](double t) {
    Weight w = weight;
    if (w.kind == Weight::Kind::subexponential) w.t = t;
    return w;
  };
  double sup_lp = 0.0, sup_besov = 0.0, hoelder = 0.0;
  std::vector<Field> tg(n, Field(F[0].torus));
  for (int k = 0; k < n; ++k) {
    double t = k * dt;
    double tgam = (k == 0 && gamma > 0.0) ? 0.0 : std::pow(t, gamma);
    tg[k] = tgam * F[k];
    sup_lp = std::max(sup_lp, weighted_lp(tg[k], p, weight_at(t)));
    BesovParams bp{alpha, p, PNorm::inf(), weight_at(t)};
    sup_besov = std::max(sup_besov, tgam * besov_norm(F[k], bp, pou));
  }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      double gap = (l - k) * dt;
      double q = weighted_lp(tg[l] - tg[k], p, weight_at(l * dt)) /
                 std::pow(gap, 0.5 * alpha);
      hoelder = std::max(hoelder, q);
    }
  return sup_lp + hoelder + sup_besov;
}

} // namespace paralat
