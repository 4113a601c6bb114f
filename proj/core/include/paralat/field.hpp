#pragma once

#include <complex>
#include <vector>

#include "paralat/lattice.hpp"

namespace paralat {

// Real samples on the torus index grid {0..M-1}^d, row-major.
struct Field {
  BravaisTorus torus;
  std::vector<double> v;

  Field() = default;
  explicit Field(const BravaisTorus& t) : torus(t), v(t.size(), 0.0) {}
  Field(const BravaisTorus& t, std::vector<double> values)
      : torus(t), v(std::move(values)) {
    if (static_cast<std::int64_t>(v.size()) != t.size())
      throw shape_error("field: value count does not match torus");
  }

  double& operator[](std::int64_t i) { return v[i]; }
  double operator[](std::int64_t i) const { return v[i]; }
  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
};

// Complex samples on the dual grid (same index layout as Field).
struct SpectralField {
  BravaisTorus torus;
  std::vector<std::complex<double>> v;

  SpectralField() = default;
  explicit SpectralField(const BravaisTorus& t) : torus(t), v(t.size(), 0.0) {}

  std::complex<double>& operator[](std::int64_t i) { return v[i]; }
  const std::complex<double>& operator[](std::int64_t i) const { return v[i]; }
  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
};

void check_same_grid(const Field& a, const Field& b, const char* where);

// Pointwise helpers (same torus required).
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b); // pointwise product
Field operator*(double c, const Field& a);

double linf_norm(const Field& f);
double lp_norm(const Field& f, double p); // L^p(G^eps) = (|G^eps| sum |f|^p)^(1/p)
double l1_mass(const Field& f);           // |G^eps| sum f (signed)

// Discrete Dirac: |G^eps|^-1 at the physical origin (index M/2 per axis).
Field dirac(const BravaisTorus& t);
Field constant(const BravaisTorus& t, double c);

} // namespace paralat
