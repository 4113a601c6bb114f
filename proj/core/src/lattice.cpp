#include "paralat/lattice.hpp"

#include <cmath>
#include <cstdlib>

namespace paralat {

double dot(const Vec& a, const Vec& b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a, int d) { return std::sqrt(dot(a, a, d)); }

namespace {

// Determinant and inverse for d <= 3, written out by hand.
double det_d(const std::array<Vec, kMaxDim>& a, int d) {
  if (d == 1) return a[0][0];
  if (d == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

} // namespace

double BravaisBasis::fourier_cell_inradius() const {
  double r = 0.0;
  for (int i = 0; i < d; ++i) {
    double ri = 0.5 / norm2(a[i], d);
    if (i == 0 || ri < r) r = ri;
  }
  return r;
}

BravaisBasis make_basis(int d, const std::array<Vec, kMaxDim>& vectors) {
  if (d < 1 || d > kMaxDim) throw config_error("basis: dimension must be 1..3");
  BravaisBasis b;
  b.d = d;
  b.a = vectors;
  double det = det_d(vectors, d);
  if (std::abs(det) < 1e-14) throw config_error("basis: singular basis matrix");
  b.cell_volume = std::abs(det);

  // Reciprocal basis: rows of the inverse of the matrix whose rows are a_i,
  // i.e. a^_i . a_j = delta_ij.
  const auto& a = vectors;
  if (d == 1) {
    b.ahat[0][0] = 1.0 / a[0][0];
  } else if (d == 2) {
    // inverse of [[a00,a01],[a10,a11]]^T applied columnwise
    b.ahat[0] = Vec{a[1][1] / det, -a[1][0] / det, 0.0};
    b.ahat[1] = Vec{-a[0][1] / det, a[0][0] / det, 0.0};
  } else {
    auto cross = [](const Vec& u, const Vec& v) {
      return Vec{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                 u[0] * v[1] - u[1] * v[0]};
    };
    Vec c0 = cross(a[1], a[2]), c1 = cross(a[2], a[0]), c2 = cross(a[0], a[1]);
    for (int j = 0; j < 3; ++j) {
      b.ahat[0][j] = c0[j] / det;
      b.ahat[1][j] = c1[j] / det;
      b.ahat[2][j] = c2[j] / det;
    }
  }
  return b;
}

BravaisBasis square_basis(int d) {
  std::array<Vec, kMaxDim> v{};
  for (int i = 0; i < d; ++i) v[i][i] = 1.0;
  return make_basis(d, v);
}

std::int64_t BravaisTorus::size() const {
  std::int64_t s = 1;
  for (int i = 0; i < basis.d; ++i) s *= M;
  return s;
}

std::array<int, kMaxDim> BravaisTorus::unflatten(std::int64_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int i = basis.d - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % M);
    flat /= M;
  }
  return idx;
}

std::int64_t BravaisTorus::flatten(const std::array<int, kMaxDim>& idx) const {
  std::int64_t f = 0;
  for (int i = 0; i < basis.d; ++i) f = f * M + idx[i];
  return f;
}

std::int64_t BravaisTorus::wrap_flatten(const std::array<int, kMaxDim>& idx) const {
  std::int64_t f = 0;
  for (int i = 0; i < basis.d; ++i) {
    int w = idx[i] % M;
    if (w < 0) w += M;
    f = f * M + w;
  }
  return f;
}

Vec BravaisTorus::point(std::int64_t flat) const {
  auto idx = unflatten(flat);
  Vec p{};
  for (int i = 0; i < basis.d; ++i) {
    double c = eps * (idx[i] - M / 2);
    for (int j = 0; j < basis.d; ++j) p[j] += c * basis.a[i][j];
  }
  return p;
}

Vec BravaisTorus::frequency(std::int64_t flat) const {
  auto idx = unflatten(flat);
  Vec x{};
  for (int i = 0; i < basis.d; ++i) {
    double c = centered(idx[i]) / (M * eps);
    for (int j = 0; j < basis.d; ++j) x[j] += c * basis.ahat[i][j];
  }
  return x;
}

double BravaisTorus::dual_cell() const {
  return 1.0 / (cell_volume * static_cast<double>(size()));
}

Vec BravaisTorus::cell_coords(const Vec& x) const {
  Vec u{};
  for (int i = 0; i < basis.d; ++i) u[i] = dot(x, basis.a[i], basis.d);
  return u;
}

bool BravaisTorus::same_grid(const BravaisTorus& o) const {
  if (basis.d != o.basis.d || N != o.N || M != o.M) return false;
  for (int i = 0; i < basis.d; ++i)
    for (int j = 0; j < basis.d; ++j)
      if (basis.a[i][j] != o.basis.a[i][j]) return false;
  return true;
}

BravaisTorus build_torus(const BravaisBasis& basis, int N, int M) {
  if (N < 0) throw config_error("torus: N must be >= 0");
  if (M < 4 || M % 2 != 0) throw config_error("torus: M must be even and >= 4");
  BravaisTorus t;
  t.basis = basis;
  t.N = N;
  t.M = M;
  t.eps = std::ldexp(1.0, -N);
  t.cell_volume = basis.cell_volume;
  for (int i = 0; i < basis.d; ++i) t.cell_volume *= t.eps;
  return t;
}

Vec reduce_to_cell(const Vec& x, const BravaisTorus& torus) {
  const int d = torus.basis.d;
  // t_i = x . (eps a_i) are the coordinates of x in the basis a^_i/eps of the
  // scaled reciprocal lattice; reduce each to [-1/2, 1/2).
  Vec out{};
  for (int i = 0; i < d; ++i) {
    double t = torus.eps * dot(x, torus.basis.a[i], d);
    t -= std::floor(t + 0.5);
    for (int j = 0; j < d; ++j) out[j] += t / torus.eps * torus.basis.ahat[i][j];
  }
  return out;
}

} // namespace paralat
