#include "paralat/field.hpp"

#include <cmath>

namespace paralat {

void check_same_grid(const Field& a, const Field& b, const char* where) {
  if (!a.torus.same_grid(b.torus))
    throw shape_error(std::string(where) + ": fields live on different tori");
}

Field operator+(const Field& a, const Field& b) {
  check_same_grid(a, b, "operator+");
  Field out(a.torus);
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  check_same_grid(a, b, "operator-");
  Field out(a.torus);
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Field operator*(const Field& a, const Field& b) {
  check_same_grid(a, b, "operator*");
  Field out(a.torus);
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Field operator*(double c, const Field& a) {
  Field out(a.torus);
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

double linf_norm(const Field& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double lp_norm(const Field& f, double p) {
  double s = 0.0;
  for (double x : f.v) s += std::pow(std::abs(x), p);
  return std::pow(f.torus.cell_volume * s, 1.0 / p);
}

double l1_mass(const Field& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return f.torus.cell_volume * s;
}

Field dirac(const BravaisTorus& t) {
  Field f(t);
  std::array<int, kMaxDim> origin{};
  for (int i = 0; i < t.basis.d; ++i) origin[i] = t.M / 2;
  f[t.flatten(origin)] = 1.0 / t.cell_volume;
  return f;
}

Field constant(const BravaisTorus& t, double c) {
  Field f(t);
  for (auto& x : f.v) x = c;
  return f;
}

} // namespace paralat
