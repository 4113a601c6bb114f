#include "paralat/diffusion.hpp"

#include <cmath>
#include <numeric>

namespace paralat {

double JumpMeasure::total_rate() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.kappa;
  return s;
}

namespace {

// True iff the integer columns generate Z^d: column-style Hermite reduction
// of the d x n coordinate matrix must end with |det| = 1 on the d x d part.
bool generates_lattice(int d, const std::vector<JumpAtom>& atoms) {
  std::vector<std::vector<long long>> col;
  for (const auto& a : atoms) {
    std::vector<long long> c(d);
    for (int i = 0; i < d; ++i) c[i] = a.g[i];
    col.push_back(c);
  }
  long long det = 1;
  for (int row = 0; row < d; ++row) {
    // gcd-eliminate row entries across the remaining columns
    std::size_t pivot = row;
    bool found = false;
    for (std::size_t j = row; j < col.size(); ++j)
      if (col[j][row] != 0) {
        if (!found || std::abs(col[j][row]) < std::abs(col[pivot][row])) pivot = j;
        found = true;
      }
    if (!found) return false;
    std::swap(col[row], col[pivot]);
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t j = row + 1; j < col.size(); ++j) {
        if (col[j][row] == 0) continue;
        long long q = col[j][row] / col[row][row];
        for (int i = 0; i < d; ++i) col[j][i] -= q * col[row][i];
        if (col[j][row] != 0) {
          std::swap(col[row], col[j]);
          again = true;
        }
      }
    }
    det *= col[row][row];
  }
  return det == 1 || det == -1;
}

} // namespace

JumpMeasure make_measure(int d, std::vector<JumpAtom> atoms) {
  if (atoms.empty()) throw config_error("measure.atoms: empty atom list");
  for (const auto& a : atoms) {
    if (!(a.kappa > 0.0)) throw config_error("measure.atoms: rates must be positive");
    bool zero = true;
    for (int i = 0; i < d; ++i) zero = zero && a.g[i] == 0;
    if (zero) throw config_error("measure.atoms: atom at the origin is not allowed");
  }
  if (!generates_lattice(d, atoms))
    throw config_error("measure.atoms: atoms do not generate the lattice");
  JumpMeasure mu;
  mu.d = d;
  mu.atoms = std::move(atoms);
  return mu;
}

JumpMeasure simple_random_walk(int d) {
  std::vector<JumpAtom> atoms(d);
  for (int i = 0; i < d; ++i) {
    atoms[i].g[i] = 1;
    atoms[i].kappa = 1.0 / d;
  }
  return make_measure(d, std::move(atoms));
}

namespace {

Vec physical_jump(const JumpAtom& a, const BravaisBasis& basis) {
  Vec g{};
  for (int i = 0; i < basis.d; ++i)
    for (int j = 0; j < basis.d; ++j) g[j] += a.g[i] * basis.a[i][j];
  return g;
}

} // namespace

std::array<Vec, kMaxDim> mu_matrix(const JumpMeasure& mu, const BravaisBasis& basis) {
  std::array<Vec, kMaxDim> a{};
  for (const auto& atom : mu.atoms) {
    Vec g = physical_jump(atom, basis);
    for (int i = 0; i < basis.d; ++i)
      for (int j = 0; j < basis.d; ++j) a[i][j] += atom.kappa * g[i] * g[j];
  }
  return a;
}

double mu_norm2(const JumpMeasure& mu, const BravaisBasis& basis, const Vec& x) {
  auto a = mu_matrix(mu, basis);
  double s = 0.0;
  for (int i = 0; i < basis.d; ++i)
    for (int j = 0; j < basis.d; ++j) s += x[i] * a[i][j] * x[j];
  return 0.5 * s;
}

double continuum_symbol(const JumpMeasure& mu, const BravaisBasis& basis, const Vec& x) {
  const double two_pi = 2.0 * M_PI;
  return two_pi * two_pi * mu_norm2(mu, basis, x);
}

double multiplier_l_at(const JumpMeasure& mu, const BravaisTorus& t, const Vec& x) {
  double s = 0.0;
  for (const auto& atom : mu.atoms) {
    Vec g = physical_jump(atom, t.basis);
    double sn = std::sin(t.eps * M_PI * dot(x, g, t.basis.d));
    s += atom.kappa * sn * sn;
  }
  return 2.0 / (t.eps * t.eps) * s;
}

std::vector<double> multiplier_l(const JumpMeasure& mu, const BravaisTorus& t) {
  std::vector<double> table(t.size());
  for (std::int64_t m = 0; m < t.size(); ++m)
    table[m] = multiplier_l_at(mu, t, t.frequency(m));
  return table;
}

Field semigroup_apply(const Field& f, double t, const JumpMeasure& mu) {
  if (t < 0.0) throw argument_error("semigroup_apply: negative time");
  auto l = multiplier_l(mu, f.torus);
  for (auto& v : l) v = std::exp(-t * v);
  return apply_multiplier_table(f, l);
}

Field generator_apply(const Field& f, const JumpMeasure& mu) {
  const auto& t = f.torus;
  Field out(t);
  const double inv_eps2 = 1.0 / (t.eps * t.eps);
  for (std::int64_t k = 0; k < f.size(); ++k) {
    auto idx = t.unflatten(k);
    double acc = 0.0;
    for (const auto& atom : mu.atoms) {
      auto ip = idx, im = idx;
      for (int i = 0; i < t.basis.d; ++i) {
        ip[i] += atom.g[i];
        im[i] -= atom.g[i];
      }
      acc += atom.kappa * (0.5 * f[t.wrap_flatten(ip)] + 0.5 * f[t.wrap_flatten(im)] -
                           f[k]);
    }
    out[k] = inv_eps2 * acc;
  }
  return out;
}

Field generator_apply_spectral(const Field& f, const JumpMeasure& mu) {
  auto l = multiplier_l(mu, f.torus);
  for (auto& v : l) v = -v;
  return apply_multiplier_table(f, l);
}

double phi1(double z) {
  if (std::abs(z) < 1e-4)
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return std::expm1(z) / z;
}

EtdPropagators etd_propagators(const JumpMeasure& mu, const BravaisTorus& t, double dt) {
  if (!(dt > 0.0)) throw argument_error("etd_propagators: need dt > 0");
  EtdPropagators p;
  p.torus = t;
  p.dt = dt;
  auto l = multiplier_l(mu, t);
  p.prop.resize(l.size());
  p.src.resize(l.size());
  for (std::size_t m = 0; m < l.size(); ++m) {
    p.prop[m] = std::exp(-dt * l[m]);
    p.src[m] = dt * phi1(-dt * l[m]);
  }
  return p;
}

} // namespace paralat
