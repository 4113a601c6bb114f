#include "paralat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace paralat {

using nlohmann::json;

int default_thread_count() {
  if (const char* env = std::getenv("PARALAT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_tasks(int threads, int n, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lk(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = f.intercept + f.slope * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct MetricRow {
  double eps;
  std::int64_t seed;
  double t;
  std::string metric;
  double value;
};

struct Sink {
  std::filesystem::path dir;
  std::string experiment;
  std::string config_hash;
  std::vector<MetricRow> rows;
  std::vector<std::string> ndjson;

  void add(double eps, std::int64_t seed, double t, const std::string& metric,
           double value) {
    rows.push_back({eps, seed, t, metric, value});
  }
  void flush() {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "metrics.csv");
    csv << "config_hash,experiment,eps,seed,t,metric,value\n";
    for (const auto& r : rows)
      csv << config_hash << ',' << experiment << ',' << fmt(r.eps) << ',' << r.seed
          << ',' << fmt(r.t) << ',' << r.metric << ',' << fmt(r.value) << '\n';
    if (!ndjson.empty()) {
      std::ofstream nd(dir / "records.ndjson");
      for (const auto& line : ndjson) nd << line << '\n';
    }
    write_manifest(dir, config_hash);
  }
};

struct Setup {
  BravaisBasis basis;
  JumpMeasure mu;
  NoiseSpec::Law law = NoiseSpec::Law::gaussian;
  Nonlinearity F;
};

Setup make_setup(const ExperimentConfig& cfg) {
  Setup s;
  std::array<Vec, kMaxDim> vecs{};
  if (cfg.basis.empty()) {
    for (int i = 0; i < cfg.d; ++i) vecs[i][i] = 1.0;
  } else {
    for (int i = 0; i < cfg.d; ++i)
      for (int j = 0; j < cfg.d; ++j) vecs[i][j] = cfg.basis[i][j];
  }
  s.basis = make_basis(cfg.d, vecs);
  if (cfg.atoms.empty()) {
    s.mu = simple_random_walk(cfg.d);
  } else {
    std::vector<JumpAtom> atoms;
    for (const auto& row : cfg.atoms) {
      JumpAtom a;
      for (int j = 0; j < cfg.d; ++j) a.g[j] = static_cast<int>(std::llround(row[j]));
      a.kappa = row[cfg.d];
      atoms.push_back(a);
    }
    s.mu = make_measure(cfg.d, atoms);
  }
  if (cfg.noise_law == "rademacher") s.law = NoiseSpec::Law::rademacher;
  if (cfg.noise_law == "uniform") s.law = NoiseSpec::Law::uniform;
  if (cfg.F_kind == "linear")
    s.F = Nonlinearity::linear(cfg.F_param);
  else if (cfg.F_kind == "logistic")
    s.F = Nonlinearity::logistic(cfg.F_param);
  else
    s.F = Nonlinearity::polynomial(cfg.F_coeffs);
  return s;
}

int level_M(const ExperimentConfig& cfg, int N) {
  return cfg.window > 0 ? (cfg.window << N) : cfg.M;
}

// ---- experiment bodies ------------------------------------------------

void fourier_selftest(const ExperimentConfig& cfg, Sink& sink) {
  std::uint64_t seed = cfg.seeds[0];
  for (int d : {1, 2}) {
    BravaisBasis basis = square_basis(d);
    for (int M : {8, 64}) {
      for (int N : {0, 2}) {
        BravaisTorus t = build_torus(basis, N, M);
        NoiseSpec spec;
        spec.seed = seed;
        Field f = sample_noise(spec, t);
        SpectralField fhat = forward(f);
        double lhs = lp_norm(f, 2.0);
        double rhs = 0.0;
        for (std::int64_t m = 0; m < fhat.size(); ++m) rhs += std::norm(fhat[m]);
        rhs = std::sqrt(rhs * t.dual_cell());
        double eps = t.eps;
        sink.add(eps, seed, 0, "parseval_residual_d" + std::to_string(d) + "_M" +
                 std::to_string(M), std::abs(lhs - rhs) / lhs);
        Field back = inverse(fhat);
        double rt = linf_norm(back - f);
        sink.add(eps, seed, 0, "roundtrip_residual_d" + std::to_string(d) + "_M" +
                 std::to_string(M), rt);
        PartitionOfUnity pou = build_partition(t);
        Field recon(t);
        for (int j = -1; j <= pou.j_G; ++j) recon = recon + lp_block(f, j, pou);
        sink.add(eps, seed, 0, "reconstruction_residual_d" + std::to_string(d) +
                 "_M" + std::to_string(M), linf_norm(recon - f) / linf_norm(f));
      }
    }
  }
  for (const auto& r : sink.rows)
    if (r.value > 1e-10) throw numeric_error("fourier-selftest: " + r.metric + " = " +
                                             fmt(r.value) + " exceeds 1e-10");
}

void besov_report(const ExperimentConfig& cfg, const Setup& s, Sink& sink) {
  std::ofstream rep(sink.dir / "besov_report.csv");
  rep << "epsilon,alpha,p,q,weight_kind,weight_param,value\n";
  double shift = 2.0 * cfg.kappa / cfg.sigma;
  std::vector<double> alphas{cfg.alpha + shift - 2.0, 0.0, cfg.alpha};
  for (int N : cfg.N_list) {
    BravaisTorus t = build_torus(s.basis, N, level_M(cfg, N));
    PartitionOfUnity pou = build_partition(t);
    for (auto seed : cfg.seeds) {
      NoiseSpec spec = macro_white_noise(t, seed, s.law);
      Field xi = sample_noise(spec, t);
      for (double a : alphas) {
        BesovParams bp{a, PNorm::val(cfg.p_xi), PNorm::inf(),
                       Weight::polynomial(cfg.kappa)};
        double v = besov_norm(xi, bp, pou);
        rep << fmt(t.eps) << ',' << fmt(a) << ',' << fmt(cfg.p_xi)
            << ",inf,polynomial," << fmt(cfg.kappa) << ',' << fmt(v) << '\n';
        sink.add(t.eps, static_cast<std::int64_t>(seed), 0,
                 "besov_alpha_" + fmt(a), v);
      }
    }
  }
}

void heat_smoothing(const ExperimentConfig& cfg, const Setup& s, Sink& sink) {
  std::vector<double> tgrid;
  for (int i = 0; i <= 12; ++i) tgrid.push_back(std::pow(10.0, -3.0 + 0.25 * i));
  struct Cell {
    int N;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int N : cfg.N_list)
    for (auto seed : cfg.seeds) cells.push_back({N, seed});
  std::vector<std::vector<MetricRow>> out(cells.size());
  parallel_tasks(cfg.threads, static_cast<int>(cells.size()), [&](int i) {
    const auto& c = cells[i];
    BravaisTorus t = build_torus(s.basis, c.N, level_M(cfg, c.N));
    PartitionOfUnity pou = build_partition(t);
    Field xi = sample_noise(macro_white_noise(t, c.seed, s.law), t);
    double base = lp_norm(xi, 2.0);
    for (double beta : {0.5, 1.0}) {
      double sup = 0.0;
      for (double tt : tgrid) {
        Field sm = semigroup_apply(xi, tt, s.mu);
        BesovParams bp{beta, PNorm::val(2.0), PNorm::inf(), Weight::one()};
        double ratio = std::pow(tt, beta / 2.0) * besov_norm(sm, bp, pou) / base;
        out[i].push_back({t.eps, static_cast<std::int64_t>(c.seed), tt,
                          "smoothing_ratio_beta_" + fmt(beta), ratio});
        sup = std::max(sup, ratio);
      }
      out[i].push_back({t.eps, static_cast<std::int64_t>(c.seed), 0,
                        "smoothing_sup_beta_" + fmt(beta), sup});
    }
  });
  for (const auto& rows : out)
    for (const auto& r : rows) sink.rows.push_back(r);
}

void renorm_scaling(const ExperimentConfig& cfg, const Setup& s, Sink& sink) {
  ChiProfile chi;
  std::vector<double> xs, ys;
  std::ofstream rep(sink.dir / "renorm_scaling.csv");
  rep << "N,eps,M,c_eps\n";
  for (int N : cfg.N_list) {
    int M = cfg.window > 0 ? (cfg.window << N) : cfg.M;
    BravaisTorus t = build_torus(s.basis, N, M);
    double c = renorm_constant(s.mu, t, chi);
    rep << N << ',' << fmt(t.eps) << ',' << M << ',' << fmt(c) << '\n';
    sink.add(t.eps, 0, 0, "c_eps", c);
    xs.push_back(N); // log2(1/eps)
    ys.push_back(c);
  }
  LinearFit f = linear_fit(xs, ys);
  rep << "fit," << fmt(f.slope) << ",slope_r2," << fmt(f.r2) << '\n';
  sink.add(0, 0, 0, "c_eps_fit_slope", f.slope);
  sink.add(0, 0, 0, "c_eps_fit_r2", f.r2);
}

void noise_enhancement(const ExperimentConfig& cfg, const Setup& s, Sink& sink) {
  ChiProfile chi;
  RegularityParams reg{cfg.alpha, cfg.kappa, cfg.sigma, cfg.p_xi};
  for (int N : cfg.N_list) {
    BravaisTorus t = build_torus(s.basis, N, level_M(cfg, N));
    PartitionOfUnity pou = build_partition(t);
    double c_eps = renorm_constant(s.mu, t, chi);
    const int n = cfg.samples;
    std::vector<double> at0(n), meps(n);
    std::uint64_t base_seed = cfg.seeds[0];
    parallel_tasks(cfg.threads, n, [&](int i) {
      NoiseSpec spec = macro_white_noise(t, mix_counter(base_seed, 0xE, i), s.law);
      Field xi = sample_noise(spec, t);
      EnhancedNoise e = build_enhanced(xi, s.mu, chi, pou);
      std::array<int, kMaxDim> origin{};
      for (int q = 0; q < t.basis.d; ++q) origin[q] = t.M / 2;
      at0[i] = e.resonant_renorm[t.flatten(origin)] + e.c_eps;
      meps[i] = regularity_statistic(e, reg, pou);
    });
    double mean = 0.0;
    for (double v : at0) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : at0) var += (v - mean) * (v - mean);
    var /= std::max(1, n - 1);
    double stderr_ = std::sqrt(var / n);
    for (int i = 0; i < n; ++i) {
      json rec;
      rec["op"] = "X_resonant_xi_at_0";
      rec["eps"] = t.eps;
      rec["M"] = t.M;
      rec["seed"] = static_cast<std::int64_t>(mix_counter(base_seed, 0xE, i));
      rec["n_samples"] = 1;
      rec["estimate"] = at0[i];
      rec["stderr"] = 0.0;
      sink.ndjson.push_back(rec.dump());
    }
    sink.add(t.eps, 0, 0, "c_eps", c_eps);
    sink.add(t.eps, 0, 0, "X_resonant_xi_mean", mean);
    sink.add(t.eps, 0, 0, "X_resonant_xi_stderr", stderr_);
    sink.add(t.eps, 0, 0, "X_resonant_xi_zscore", (mean - c_eps) / stderr_);
    std::vector<double> sorted = meps;
    std::sort(sorted.begin(), sorted.end());
    sink.add(t.eps, 0, 0, "M_eps_median", median(meps));
    sink.add(t.eps, 0, 0, "M_eps_q25", sorted[static_cast<std::size_t>(0.25 * (n - 1))]);
    sink.add(t.eps, 0, 0, "M_eps_q75", sorted[static_cast<std::size_t>(0.75 * (n - 1))]);
  }
}

void pam_macro(const ExperimentConfig& cfg, const Setup& s, Sink& sink) {
  ChiProfile chi;
  struct Cell {
    int N;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int N : cfg.N_list)
    for (auto seed : cfg.seeds) cells.push_back({N, seed});
  std::vector<std::vector<MetricRow>> out(cells.size());
  std::vector<int> blew(cells.size(), 0);
  parallel_tasks(cfg.threads, static_cast<int>(cells.size()), [&](int i) {
    const auto& c = cells[i];
    BravaisTorus t = build_torus(s.basis, c.N, level_M(cfg, c.N));
    PamRun run;
    run.torus = t;
    run.mu = s.mu;
    run.F = s.F;
    run.noise = sample_noise(macro_white_noise(t, c.seed, s.law), t);
    run.c_eps = renorm_constant(s.mu, t, chi);
    run.eps = t.eps;
    run.u0 = dirac(t);
    run.T = cfg.T;
    run.dt = cfg.dt;
    PamResult res = solve(run, 4);
    blew[i] = res.blew_up ? 1 : 0;
    for (std::size_t k = 0; k < res.snapshots.size(); ++k)
      out[i].push_back({t.eps, static_cast<std::int64_t>(c.seed),
                        static_cast<double>(k) * res.snap_dt, "l1_mass",
                        l1_mass(res.snapshots[k])});
    if (c.seed == cfg.seeds[0] && !res.blew_up) {
      FieldExtras ex;
      ex.t = cfg.T;
      ex.eps = t.eps;
      ex.role = "macro";
      write_field(sink.dir / ("terminal_N" + std::to_string(c.N) + ".field"),
                  res.snapshots.back(), ex);
    }
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const auto& r : out[i]) sink.rows.push_back(r);
    BravaisTorus t = build_torus(s.basis, cells[i].N, level_M(cfg, cells[i].N));
    sink.add(t.eps, static_cast<std::int64_t>(cells[i].seed), cfg.T, "blew_up",
             blew[i]);
  }
  for (int N : cfg.N_list) {
    double survived = 0, total = 0;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].N == N) {
        total += 1;
        survived += blew[i] ? 0 : 1;
      }
    BravaisTorus t = build_torus(s.basis, N, level_M(cfg, N));
    sink.add(t.eps, 0, cfg.T, "survival_fraction", survived / total);
  }
}

void pam_universality(const ExperimentConfig& cfg, const Setup& s, Sink& sink) {
  ChiProfile chi;
  const double necessity_fp0 = 4.0;
  struct Cell {
    int N;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int N : cfg.N_list)
    for (auto seed : cfg.seeds) cells.push_back({N, seed});
  std::vector<double> gap(cells.size(), std::nan(""));
  std::vector<double> mass_ren(cells.size(), std::nan(""));
  std::vector<double> mass_unren(cells.size(), std::nan(""));
  parallel_tasks(cfg.threads, static_cast<int>(cells.size()), [&](int i) {
    const auto& c = cells[i];
    BravaisTorus t = build_torus(s.basis, c.N, level_M(cfg, c.N));
    Field xi = sample_noise(macro_white_noise(t, c.seed, s.law), t);
    double c_eps = renorm_constant(s.mu, t, chi);

    PamRun base;
    base.torus = t;
    base.mu = s.mu;
    base.noise = xi;
    base.c_eps = c_eps;
    base.eps = t.eps;
    base.u0 = dirac(t);
    base.T = cfg.T;
    base.dt = cfg.dt;

    // shared-noise gap: full F vs its linearization at 0
    PamRun nl = base;
    nl.F = s.F;
    PamRun lin = base;
    lin.F = Nonlinearity::linear(s.F.fprime0);
    PamResult rn = solve(nl, 1), rl = solve(lin, 1);
    if (!rn.blew_up && !rl.blew_up)
      gap[i] = universality_gap(rn.snapshots.back(), rl.snapshots.back(), cfg.kappa);

    // renormalization necessity: linear runs with/without the counterterm
    PamRun ren = base;
    ren.F = Nonlinearity::linear(necessity_fp0);
    PamRun unren = ren;
    unren.renormalize = false;
    PamResult rr = solve(ren, 1), ru = solve(unren, 1);
    if (!rr.blew_up) mass_ren[i] = l1_mass(rr.snapshots.back());
    if (!ru.blew_up) mass_unren[i] = l1_mass(ru.snapshots.back());
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    BravaisTorus t = build_torus(s.basis, cells[i].N, level_M(cfg, cells[i].N));
    auto seed = static_cast<std::int64_t>(cells[i].seed);
    if (std::isfinite(gap[i])) sink.add(t.eps, seed, cfg.T, "gap", gap[i]);
    if (std::isfinite(mass_ren[i]))
      sink.add(t.eps, seed, cfg.T, "mass_renormalized", mass_ren[i]);
    if (std::isfinite(mass_unren[i]))
      sink.add(t.eps, seed, cfg.T, "mass_unrenormalized", mass_unren[i]);
  }
  for (int N : cfg.N_list) {
    std::vector<double> g, mr, mu_;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].N == N) {
        if (std::isfinite(gap[i])) g.push_back(gap[i]);
        if (std::isfinite(mass_ren[i])) mr.push_back(mass_ren[i]);
        if (std::isfinite(mass_unren[i])) mu_.push_back(mass_unren[i]);
      }
    BravaisTorus t = build_torus(s.basis, N, level_M(cfg, N));
    sink.add(t.eps, 0, cfg.T, "gap_median", median(g));
    sink.add(t.eps, 0, cfg.T, "mass_renormalized_median", median(mr));
    sink.add(t.eps, 0, cfg.T, "mass_unrenormalized_median", median(mu_));
  }
}

} // namespace

int run_experiment(const ExperimentConfig& cfg_in, const RunOptions& opt) {
  ExperimentConfig cfg = cfg_in;
  if (!opt.seeds_override.empty()) cfg.seeds = opt.seeds_override;
  if (opt.threads > 0) cfg.threads = opt.threads;
  if (opt.dry_run) return 0;

  Sink sink;
  sink.dir = opt.out.empty() ? std::filesystem::path(cfg.out_dir) : opt.out;
  sink.experiment = cfg.kind;
  sink.config_hash = sha256_hex(cfg.canonical()).substr(0, 16);
  std::filesystem::create_directories(sink.dir);

  Setup s = make_setup(cfg);
  try {
    if (cfg.kind == "fourier-selftest")
      fourier_selftest(cfg, sink);
    else if (cfg.kind == "besov-report")
      besov_report(cfg, s, sink);
    else if (cfg.kind == "heat-smoothing")
      heat_smoothing(cfg, s, sink);
    else if (cfg.kind == "renorm-scaling")
      renorm_scaling(cfg, s, sink);
    else if (cfg.kind == "noise-enhancement")
      noise_enhancement(cfg, s, sink);
    else if (cfg.kind == "pam-macro")
      pam_macro(cfg, s, sink);
    else if (cfg.kind == "pam-universality")
      pam_universality(cfg, s, sink);
    else
      throw config_error("experiment.kind: unknown experiment '" + cfg.kind + "'");
  } catch (const numeric_error&) {
    sink.flush();
    return 1;
  }
  sink.flush();
  return 0;
}

void plotdata(const std::filesystem::path& result_dir, const std::string& metric,
              std::ostream& out) {
  std::ifstream manifest(result_dir / "MANIFEST.json");
  if (!manifest)
    throw argument_error("plotdata: no MANIFEST.json in " + result_dir.string());
  std::ifstream csv(result_dir / "metrics.csv");
  if (!csv) throw argument_error("plotdata: no metrics.csv in " + result_dir.string());

  std::string line;
  std::getline(csv, line); // header
  std::vector<std::array<std::string, 7>> rows;
  std::vector<std::string> metrics;
  while (std::getline(csv, line)) {
    std::array<std::string, 7> f;
    std::stringstream ss(line);
    for (int i = 0; i < 7; ++i) std::getline(ss, f[i], ',');
    if (std::find(metrics.begin(), metrics.end(), f[5]) == metrics.end())
      metrics.push_back(f[5]);
    rows.push_back(f);
  }
  if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end()) {
    std::string alts;
    for (const auto& m : metrics) alts += (alts.empty() ? "" : ", ") + m;
    throw argument_error("plotdata: unknown metric '" + metric +
                         "'; available: " + alts);
  }
  out << "experiment,eps,seed,t,metric,value\n";
  for (const auto& f : rows)
    if (f[5] == metric)
      out << f[1] << ',' << f[2] << ',' << f[3] << ',' << f[4] << ',' << f[5] << ','
          << f[6] << '\n';
}

} // namespace paralat
