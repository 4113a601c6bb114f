#pragma once

#include "paralat/spectral.hpp"

namespace paralat {

// L^p / l^q exponent with a distinct encoding for infinity.
struct PNorm {
  double p = 2.0;
  bool is_inf = false;
  static PNorm val(double p) { return PNorm{p, false}; }
  static PNorm inf() { return PNorm{0.0, true}; }
};

struct Weight {
  enum class Kind { one, polynomial, subexponential };
  Kind kind = Kind::one;
  double kappa = 0.0;          // polynomial: (1+|x|)^-kappa
  double sigma = 0.5, l = 0.0, t = 0.0; // subexponential: e^{-(l+t)(1+|x|)^sigma}

  static Weight one() { return Weight{}; }
  static Weight polynomial(double kappa);
  static Weight subexponential(double sigma, double l, double t);
  double operator()(const Vec& x, int d) const;
};

// Discrete dyadic partition of unity on the scaled Fourier cell, built from a
// single radial profile reused across all eps: phi_{-1} = h(|x|/r),
// phi_j = h(|x|/(2^{j+1} r)) - h(|x|/(2^j r)) for 0 <= j < j_G, and the
// boundary block phi_{j_G} = 1 - sum_{j < j_G} phi_j. h is the mollifier step
// with h = 1 on s <= 3/8 and h = 0 on s >= 1/2, so supp phi_j is the annulus
// [3/8, 1] 2^j r and blocks with |j - j'| > 1 are disjoint.
struct PartitionOfUnity {
  BravaisTorus torus;
  int j_G = 0;    // index of the boundary block
  double r = 0.0; // base radius (from the unscaled cell)
  std::vector<std::vector<double>> blocks; // j = -1 .. j_G, sampled on dual grid

  const std::vector<double>& block(int j) const { return blocks[j + 1]; }
  int lowest() const { return -1; }
  bool same(const PartitionOfUnity& o) const {
    return torus.same_grid(o.torus) && j_G == o.j_G && r == o.r;
  }
};

// r = 0 picks the default base radius dist(0, boundary of unscaled cell)/2,
// which gives j_G = N + 1. Throws config_error if j_G < 1.
PartitionOfUnity build_partition(const BravaisTorus& torus, double r = 0.0);

// Littlewood-Paley block Delta_j f and partial sum S_j f = sum_{i<j} Delta_i f.
Field lp_block(const Field& f, int j, const PartitionOfUnity& pou);
Field partial_sum(const Field& f, int j, const PartitionOfUnity& pou);
std::vector<Field> all_blocks(const Field& f, const PartitionOfUnity& pou);

struct BesovParams {
  double alpha = 0.0;
  PNorm p = PNorm::val(2.0);
  PNorm q = PNorm::inf();
  Weight weight = Weight::one();
};

// Weighted L^p(G^eps) norm (|G^eps| sum |rho f|^p)^(1/p); p = inf gives sup.
double weighted_lp(const Field& f, const PNorm& p, const Weight& rho);

double besov_norm(const Field& f, const BesovParams& params, const PartitionOfUnity& pou);

// Bony paraproduct f <~ g = sum_{1 <= j <= j_G} S_{j-1} f . Delta_j g and the
// resonant part f (.) g = sum_{|j1-j2| <= 1} Delta_j1 f . Delta_j2 g (the
// diagonal sum starts at j = -1, so fg = f<~g + g<~f + f(.)g exactly).
Field paraproduct(const Field& f, const Field& g, const PartitionOfUnity& pou);
Field resonant(const Field& f, const Field& g, const PartitionOfUnity& pou);

// C(f1, f2, f3) = (f1 <~ f2) (.) f3 - f1 (f2 (.) f3).
Field commutator(const Field& f1, const Field& f2, const Field& f3,
                 const PartitionOfUnity& pou);

// Time-smoothing kernel for the modified paraproduct: a normalized bump on
// (1, 2) with precomputed CDF.
struct TimeKernel {
  std::vector<double> cdf_table; // CDF sampled on [1, 2]
  double norm_ = 1.0;            // density normalization
  double density(double u) const;
  double cdf(double u) const; // 0 for u <= 1, 1 for u >= 2
};
const TimeKernel& default_time_kernel();

// Per-snapshot quadrature weights for Q_i f(t_n) = int_-inf^t 2^{2i} phi(2^{2i}(t-s)) f(s v 0) ds
// on the uniform grid t_k = k dt: kernel-exact trapezoid plus the clamped tail
// f(0) (1 - Phi(2^{2i} t_n)). Weights sum to 1.
std::vector<double> q_weights(int i, int t_idx, double dt, const TimeKernel& ker);

// f <<~ g (t_n) = sum_{1 <= j <= j_G} Q_j(S_{j-1} F)(t_n) . Delta_j G(t_n).
// F holds snapshots at t_k = k dt for k = 0..n; G_t is the high-frequency
// factor at time t_n.
Field modified_paraproduct(const std::vector<Field>& F, const Field& G_t, int t_idx,
                           double dt, const PartitionOfUnity& pou,
                           const TimeKernel& ker = default_time_kernel());

// Parabolic norm L^{gamma,alpha}_{p,T}: sup_k ||t_k^g F_k||_{L^p,rho}
// + Hoelder-in-time quotient of t^g F over all grid pairs + sup_k t_k^g ||F_k||_{C^alpha_p,rho}.
// For subexponential weights the weight at time t_k uses l + t_k.
double parabolic_norm(const std::vector<Field>& F, double dt, double gamma,
                      double alpha, const PNorm& p, const Weight& weight,
                      const PartitionOfUnity& pou);

} // namespace paralat
