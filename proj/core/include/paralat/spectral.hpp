#pragma once

#include <functional>

#include "paralat/field.hpp"

namespace paralat {

// Lattice Fourier transform F_G f(x) = |G^eps| sum_k f(k) e^{-2 pi i k.x},
// evaluated on the dual grid. The forward of the discrete Dirac is == 1.
SpectralField forward(const Field& f);

// Inverse transform: rectangle rule over the dual grid with cell measure
// 1/(|G^eps| M^d), so inverse(forward(f)) == f in floating point.
Field inverse(const SpectralField& g);
SpectralField inverse_complex(const SpectralField& g); // no realness check

using Multiplier = std::function<double(const Vec&)>;

// inverse(m(freq) * forward(f)). For even multipliers the result is real by
// conjugate symmetry; the imaginary residue is asserted < 1e-10 relative and
// discarded.
Field apply_multiplier(const Field& f, const Multiplier& m);
Field apply_multiplier_table(const Field& f, const std::vector<double>& table);

std::vector<double> multiplier_table(const BravaisTorus& t, const Multiplier& m);

// Lattice convolution (f *_G g)(k) = |G^eps| sum_j f(j) g(k-j), computed
// spectrally via F(f *_G g) = F f . F g.
Field convolve(const Field& f, const Field& g);

// Smear function psi for the extension operator: separable mollifier step in
// unscaled-cell coordinates u_i = x . a_i, equal to 1 on |u_i| <= inner and 0
// on |u_i| >= outer, with psi(u) + psi(1-u) = 1 on the transition so that the
// R-translates sum to 1 exactly.
struct SmearProfile {
  double inner = 0.375; // in cell coordinates (cell is |u_i| <= 1/2)
  double outer = 0.625;
};

double smear_value(const SmearProfile& s, const BravaisTorus& coarse, const Vec& freq);

// Band-limited interpolation E^eps f onto the 2^r-times finer torus
// (N+r, M 2^r): zero-extend the spectrum R^eps-periodically onto the finer
// dual grid, multiply by the sampled smear, inverse-transform. Agrees with f
// at the coarse lattice points.
Field extend(const Field& f, const SmearProfile& smear, int refine);

} // namespace paralat
