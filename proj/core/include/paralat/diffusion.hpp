#pragma once

#include "paralat/spectral.hpp"

namespace paralat {

// Symmetric zero-mass jump measure mu = sum kappa(g) (1/2 d_g + 1/2 d_-g)
// - (sum kappa) d_0. Atoms are given by their integer coordinates in the
// lattice basis; the atom set must generate the full lattice.
struct JumpAtom {
  std::array<int, kMaxDim> g{};
  double kappa = 0.0;
};

struct JumpMeasure {
  int d = 0;
  std::vector<JumpAtom> atoms;
  double total_rate() const;
};

JumpMeasure make_measure(int d, std::vector<JumpAtom> atoms);
JumpMeasure simple_random_walk(int d); // kappa(e_i) = 1/d

// a^mu_ij = int y_i y_j dmu(y) = sum kappa(g) g_i g_j in physical coordinates;
// ||x||_mu^2 = 1/2 x . a^mu x. The continuum symbol is (2 pi)^2 ||x||_mu^2.
std::array<Vec, kMaxDim> mu_matrix(const JumpMeasure& mu, const BravaisBasis& basis);
double mu_norm2(const JumpMeasure& mu, const BravaisBasis& basis, const Vec& x);
double continuum_symbol(const JumpMeasure& mu, const BravaisBasis& basis, const Vec& x);

// Fourier multiplier l^eps_mu(x) = (2/eps^2) sum_g kappa(g) sin^2(eps pi x.g).
double multiplier_l_at(const JumpMeasure& mu, const BravaisTorus& t, const Vec& x);
std::vector<double> multiplier_l(const JumpMeasure& mu, const BravaisTorus& t);

// e^{t L^eps_mu} f via the diagonal spectral action e^{-t l}.
Field semigroup_apply(const Field& f, double t, const JumpMeasure& mu);

// L^eps_mu f as a real-space stencil: eps^-2 sum_g kappa(g)
// (f(.+eps g)/2 + f(.-eps g)/2 - f).
Field generator_apply(const Field& f, const JumpMeasure& mu);
Field generator_apply_spectral(const Field& f, const JumpMeasure& mu);

// phi1(z) = (e^z - 1)/z with a series branch for |z| < 1e-4.
double phi1(double z);

// ETD1 tables: prop = e^{-dt l}, src = dt phi1(-dt l), both on the dual grid.
struct EtdPropagators {
  BravaisTorus torus;
  double dt = 0.0;
  std::vector<double> prop;
  std::vector<double> src;
};
EtdPropagators etd_propagators(const JumpMeasure& mu, const BravaisTorus& t, double dt);

} // namespace paralat
