#pragma once

#include "paralat/stochastic.hpp"

namespace paralat {

// Reaction nonlinearity with F(0) = 0.
struct Nonlinearity {
  enum class Kind { linear, logistic, polynomial };
  Kind kind = Kind::linear;
  double c = 1.0;              // linear: F(u) = c u; logistic: F(u) = u (c - u)
  std::vector<double> coeffs;  // polynomial: F(u) = sum_i coeffs[i] u^{i+1}
  double fprime0 = 1.0;        // F'(0), validated against the expression
  double second_deriv_bound = 0.0; // ||F''||_inf metadata (on the unit range)

  double eval(double u) const;
  double deriv(double u) const;

  static Nonlinearity linear(double c);
  static Nonlinearity logistic(double C);
  static Nonlinearity polynomial(std::vector<double> coeffs);
};

struct PamRun {
  BravaisTorus torus;
  JumpMeasure mu;
  Nonlinearity F;
  Field noise;           // macro: xi^eps; micro: eta^eps (mean already shifted)
  double c_eps = 0.0;    // c^eps_mu for the macro renormalization term
  bool renormalize = true;
  double eps = 1.0;      // the macro eps (used by F^eps even on the micro lattice)
  Field u0;
  double T = 1.0;
  double dt = 1e-2;
  bool micro = false;
  bool adaptive = true;  // deterministic dt-halving when the stability budget is hit
};

// One ETD1 step u -> e^{dt L} u + dt phi1(dt L) R(u), with the macro reaction
// R(u) = F^eps(u) (xi - F'(0) c^eps) and the micro reaction R(v) = F(v) eta.
// Throws blowup_signal on non-finite values.
Field step_macro(const Field& u, const PamRun& run, const EtdPropagators& etd);
Field step_micro(const Field& v, const PamRun& run, const EtdPropagators& etd);

struct PamResult {
  std::vector<Field> snapshots; // uniform grid including t = 0 and t = T
  double snap_dt = 0.0;
  bool blew_up = false;
  int blowup_step = -1;
  double blowup_t = 0.0;
  std::int64_t steps_taken = 0;
};

// Integrate to T, recording n_snapshots+1 uniformly spaced snapshots.
PamResult solve(const PamRun& run, int n_snapshots);

// Micro noise on the unit lattice from a macro realization:
// eta(y) = eps^2 xi(eps y) - F'(0) c^eps eps^2 (same index grid).
Field micro_noise_from_macro(const Field& xi, const BravaisTorus& micro_torus,
                             double fprime0, double c_eps);

// u(t, x) = eps^-2 v(eps^-2 t, eps^-1 x): exact reindexing onto the macro
// torus with scale exponent N (no interpolation; the grids nest).
std::vector<Field> rescale_micro_to_macro(const std::vector<Field>& v_snaps, int N);

// || u_nl(T) - u_lin(T) ||_{L^2, p^kappa} / || u_lin(T) ||_{L^2, p^kappa}.
double universality_gap(const Field& u_nl, const Field& u_lin, double kappa);

struct DecompositionDiagnostics {
  std::vector<double> t;
  std::vector<double> norm_sharp; // besov 2 alpha of u#
  std::vector<double> norm_u;     // besov alpha of u
};

// u#(t) = u(t) - (F'(0) u) <<~ X; diagnostics compare the paracontrolled gain.
std::pair<std::vector<Field>, DecompositionDiagnostics> paracontrolled_decompose(
    const std::vector<Field>& u_snaps, const Field& X, double fprime0, double dt,
    const PartitionOfUnity& pou, double alpha, const Weight& weight);

} // namespace paralat
