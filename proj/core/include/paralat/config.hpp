#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "paralat/errors.hpp"

namespace paralat {

// Minimal TOML-style subset: [section] / [section.sub] headers, key = value
// with integers, floats, booleans, "strings", and (nested) arrays. Comments
// start with '#'. Keys are exposed as dotted paths.
struct TomlValue {
  enum class Type { boolean, integer, real, string, array };
  Type type = Type::integer;
  bool b = false;
  long long i = 0;
  double d = 0.0;
  std::string s;
  std::vector<TomlValue> arr;

  double as_real(const std::string& path) const;
  long long as_int(const std::string& path) const;
  bool as_bool(const std::string& path) const;
  const std::string& as_string(const std::string& path) const;
  const std::vector<TomlValue>& as_array(const std::string& path) const;
};

struct TomlTable {
  std::map<std::string, TomlValue> kv;
  bool has(const std::string& path) const { return kv.count(path) > 0; }
  const TomlValue& at(const std::string& path) const;
  double real_or(const std::string& path, double def) const;
  long long int_or(const std::string& path, long long def) const;
  std::string string_or(const std::string& path, const std::string& def) const;
};

TomlTable parse_toml(const std::string& text);
TomlTable parse_toml_file(const std::filesystem::path& path);

struct ExperimentConfig {
  std::string kind; // fourier-selftest | besov-report | heat-smoothing |
                    // renorm-scaling | noise-enhancement | pam-macro | pam-universality
  // lattice block
  int d = 2;
  std::vector<std::vector<double>> basis; // empty -> identity
  std::vector<int> N_list{3};
  int M = 64;
  int window = 0;   // if > 0, per-level M = window * 2^N (fixed physical window)
  // measure block: rows [g_1..g_d, kappa]; empty -> simple random walk
  std::vector<std::vector<double>> atoms;
  // noise block
  std::string noise_law = "gaussian";
  // F block
  std::string F_kind = "logistic";
  double F_param = 1.0;
  std::vector<double> F_coeffs;
  // run block
  double T = 0.25;
  double dt = 1e-3;
  std::vector<std::uint64_t> seeds{1};
  int samples = 200; // Monte Carlo realizations (noise-enhancement)
  std::string out_dir = "out";
  int threads = 0; // 0 -> PARALAT_THREADS or hardware_concurrency
  // regularity block (noise-enhancement / besov-report)
  double alpha = 0.585, kappa = 0.13, sigma = 0.93, p_xi = 16.0;

  std::string canonical() const;   // normalized dump used for the content hash
};

// Parses and validates; throws config_error whose message starts with the
// failing field path (e.g. "measure.atoms: ...").
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_table(const TomlTable& t);

} // namespace paralat
