#include "paralat/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace paralat {

namespace {

// FFTW plan cache. Planning is not thread-safe; execution through the
// new-array interface is. Plans are created with FFTW_UNALIGNED so they can
// run on std::vector storage.
class PlanCache {
 public:
  fftw_plan get(int d, int M, int sign) {
    std::scoped_lock lk(mu_);
    auto key = std::tuple(d, M, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::int64_t n = 1;
    for (int i = 0; i < d; ++i) n *= M;
    std::vector<std::complex<double>> buf(n);
    int dims[kMaxDim] = {M, M, M};
    fftw_plan p = fftw_plan_dft(d, dims, reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[key] = p;
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run_fft(const BravaisTorus& t, std::vector<std::complex<double>>& data, int sign) {
  fftw_plan p = cache().get(t.basis.d, t.M, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

// (-1)^(sum of index digits) for the centered-grid phase.
double parity(const BravaisTorus& t, std::int64_t flat) {
  int s = 0;
  for (int i = 0; i < t.basis.d; ++i) {
    s += static_cast<int>(flat % t.M);
    flat /= t.M;
  }
  return (s & 1) ? -1.0 : 1.0;
}

} // namespace

SpectralField forward(const Field& f) {
  const auto& t = f.torus;
  SpectralField out(t);
  std::vector<std::complex<double>> buf(f.v.begin(), f.v.end());
  run_fft(t, buf, FFTW_FORWARD);
  const double V = t.cell_volume;
  for (std::int64_t m = 0; m < out.size(); ++m) out[m] = V * parity(t, m) * buf[m];
  return out;
}

SpectralField inverse_complex(const SpectralField& g) {
  const auto& t = g.torus;
  SpectralField out(t);
  std::vector<std::complex<double>> buf(g.v);
  for (std::int64_t m = 0; m < g.size(); ++m) buf[m] *= parity(t, m);
  run_fft(t, buf, FFTW_BACKWARD);
  const double dc = t.dual_cell();
  for (std::int64_t k = 0; k < out.size(); ++k) out[k] = dc * buf[k];
  return out;
}

Field inverse(const SpectralField& g) {
  SpectralField c = inverse_complex(g);
  Field out(g.torus);
  double max_re = 0.0, max_im = 0.0;
  for (std::int64_t k = 0; k < c.size(); ++k) {
    out[k] = c[k].real();
    max_re = std::max(max_re, std::abs(c[k].real()));
    max_im = std::max(max_im, std::abs(c[k].imag()));
  }
  if (max_im > 1e-10 * std::max(max_re, 1e-100) && max_im > 1e-14)
    throw numeric_error("inverse: imaginary residue " + std::to_string(max_im) +
                        " exceeds tolerance; spectrum is not conjugate-symmetric");
  return out;
}

std::vector<double> multiplier_table(const BravaisTorus& t, const Multiplier& m) {
  std::vector<double> table(t.size());
  for (std::int64_t i = 0; i < t.size(); ++i) {
    double v = m(t.frequency(i));
    if (!std::isfinite(v)) {
      Vec x = t.frequency(i);
      std::ostringstream os;
      os << "multiplier: non-finite value at frequency (";
      for (int j = 0; j < t.basis.d; ++j) os << (j ? "," : "") << x[j];
      os << ")";
      throw numeric_error(os.str());
    }
    table[i] = v;
  }
  return table;
}

Field apply_multiplier_table(const Field& f, const std::vector<double>& table) {
  SpectralField g = forward(f);
  for (std::int64_t m = 0; m < g.size(); ++m) g[m] *= table[m];
  return inverse(g);
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  return apply_multiplier_table(f, multiplier_table(f.torus, m));
}

Field convolve(const Field& f, const Field& g) {
  check_same_grid(f, g, "convolve");
  SpectralField F = forward(f), G = forward(g);
  for (std::int64_t m = 0; m < F.size(); ++m) F[m] *= G[m];
  return inverse(F);
}

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// Smooth step: 1 at s <= 0, 0 at s >= 1, with step(s) + step(1-s) = 1.
double smooth_step(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  double b0 = bump(1.0 - s), b1 = bump(s);
  return b0 / (b0 + b1);
}

double smear_axis(const SmearProfile& sp, double u) {
  double t = std::abs(u);
  if (t <= sp.inner) return 1.0;
  if (t >= sp.outer) return 0.0;
  return smooth_step((t - sp.inner) / (sp.outer - sp.inner));
}

void validate_smear(const SmearProfile& sp) {
  if (!(sp.inner > 0.0 && sp.outer > sp.inner && sp.outer < 1.0))
    throw config_error("smear: need 0 < inner < outer < 1");
  // Partition under integer (R-)translates, checked per axis on a fine sample.
  for (int i = 0; i <= 1000; ++i) {
    double u = -0.5 + i / 1000.0;
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) s += smear_axis(sp, u + k);
    if (std::abs(s - 1.0) > 1e-8)
      throw config_error("smear: translates do not sum to 1 (off by " +
                         std::to_string(s - 1.0) + ")");
  }
}

} // namespace

double smear_value(const SmearProfile& s, const BravaisTorus& coarse, const Vec& freq) {
  // psi^eps(x) = psi(eps x); cell coordinates of eps x are eps * (x . a_i).
  double v = 1.0;
  for (int i = 0; i < coarse.basis.d; ++i)
    v *= smear_axis(s, coarse.eps * dot(freq, coarse.basis.a[i], coarse.basis.d));
  return v;
}

Field extend(const Field& f, const SmearProfile& smear, int refine) {
  if (refine < 1) throw argument_error("extend: refine must be >= 1");
  validate_smear(smear);
  const auto& ct = f.torus;
  const int d = ct.basis.d;
  BravaisTorus ft = build_torus(ct.basis, ct.N + refine, ct.M << refine);

  SpectralField chat = forward(f);
  SpectralField fine(ft);
  for (std::int64_t mf = 0; mf < ft.size(); ++mf) {
    // The fine dual grid has the same spacing (M eps is preserved); the
    // R^eps-periodic extension of the coarse spectrum is indexed by the
    // centered fine index reduced mod M.
    auto idx = ft.unflatten(mf);
    std::array<int, kMaxDim> cidx{};
    for (int i = 0; i < d; ++i) {
      int c = ft.centered(idx[i]) % ct.M;
      if (c < 0) c += ct.M;
      cidx[i] = c;
    }
    fine[mf] = chat[ct.flatten(cidx)] * smear_value(smear, ct, ft.frequency(mf));
  }
  return inverse(fine);
}

} // namespace paralat
