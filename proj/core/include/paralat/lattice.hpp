#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "paralat/errors.hpp"

namespace paralat {

constexpr int kMaxDim = 3;
using Vec = std::array<double, kMaxDim>; // unused trailing components are 0

double dot(const Vec& a, const Vec& b, int d);
double norm2(const Vec& a, int d);

// Bravais lattice G = Z a_1 + ... + Z a_d with its reciprocal basis
// a^_i . a_j = delta_ij and cell volume |G| = |det(a_1..a_d)|.
struct BravaisBasis {
  int d = 0;
  std::array<Vec, kMaxDim> a{};    // direct basis vectors
  std::array<Vec, kMaxDim> ahat{}; // reciprocal basis vectors
  double cell_volume = 0.0;        // |G|; the Fourier cell has volume 1/|G|

  // Distance from the origin to the boundary of the (unscaled) Fourier cell
  // G^ = { sum t_i a^_i : t in [-1/2,1/2)^d }: min_i 1/(2|a_i|).
  double fourier_cell_inradius() const;
};

BravaisBasis make_basis(int d, const std::array<Vec, kMaxDim>& vectors);
BravaisBasis square_basis(int d); // identity basis in d dimensions

// Finite periodic window of the dyadically scaled lattice G^eps, eps = 2^-N,
// with M (even, power of two for FFT use) sites per direction. Index grid is
// {0..M-1}^d row-major; index k maps to the centered physical point
// eps * sum_i (k_i - M/2) a_i, and dual index m to the frequency
// sum_i m'_i/(M eps) a^_i with m' the centered alias of m in {-M/2..M/2-1}.
struct BravaisTorus {
  BravaisBasis basis;
  int N = 0;
  int M = 0;
  double eps = 1.0;         // 2^-N
  double cell_volume = 0.0; // |G^eps| = eps^d |G|

  std::int64_t size() const; // M^d

  Vec point(std::int64_t flat) const;
  Vec frequency(std::int64_t flat) const;
  int centered(int mi) const { return mi < M / 2 ? mi : mi - M; }

  std::array<int, kMaxDim> unflatten(std::int64_t flat) const;
  std::int64_t flatten(const std::array<int, kMaxDim>& idx) const;
  std::int64_t wrap_flatten(const std::array<int, kMaxDim>& idx) const; // periodic

  // Volume of one dual-grid cell: |eps^-1 G^| / M^d = 1/(|G^eps| M^d).
  double dual_cell() const;
  double window_volume() const { return cell_volume * static_cast<double>(size()); }

  // Cell coordinates of a frequency vector w.r.t. the UNSCALED cell G^:
  // u_i = x . a_i (so G^ is |u_i| <= 1/2, and eps^-1 G^ is |u_i| <= 1/(2 eps)).
  Vec cell_coords(const Vec& x) const;

  bool same_grid(const BravaisTorus& o) const;
};

BravaisTorus build_torus(const BravaisBasis& basis, int N, int M);

// [x] in the scaled Fourier cell eps^-1 G^ with x - [x] in the scaled
// reciprocal lattice R^eps = R/eps.
Vec reduce_to_cell(const Vec& x, const BravaisTorus& torus);

} // namespace paralat
