#include "paralat/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "paralat/diffusion.hpp"
#include "paralat/pam.hpp"

namespace paralat {

namespace {

[[noreturn]] void type_err(const std::string& path, const char* want) {
  throw config_error(path + ": expected " + want);
}

} // namespace

double TomlValue::as_real(const std::string& path) const {
  if (type == Type::real) return d;
  if (type == Type::integer) return static_cast<double>(i);
  type_err(path, "number");
}

long long TomlValue::as_int(const std::string& path) const {
  if (type == Type::integer) return i;
  type_err(path, "integer");
}

bool TomlValue::as_bool(const std::string& path) const {
  if (type == Type::boolean) return b;
  type_err(path, "boolean");
}

const std::string& TomlValue::as_string(const std::string& path) const {
  if (type == Type::string) return s;
  type_err(path, "string");
}

const std::vector<TomlValue>& TomlValue::as_array(const std::string& path) const {
  if (type == Type::array) return arr;
  type_err(path, "array");
}

const TomlValue& TomlTable::at(const std::string& path) const {
  auto it = kv.find(path);
  if (it == kv.end()) throw config_error(path + ": missing required key");
  return it->second;
}

double TomlTable::real_or(const std::string& path, double def) const {
  auto it = kv.find(path);
  return it == kv.end() ? def : it->second.as_real(path);
}

long long TomlTable::int_or(const std::string& path, long long def) const {
  auto it = kv.find(path);
  return it == kv.end() ? def : it->second.as_int(path);
}

std::string TomlTable::string_or(const std::string& path, const std::string& def) const {
  auto it = kv.find(path);
  return it == kv.end() ? def : it->second.as_string(path);
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') ++line;
    ++pos;
  }
  void skip_ws_inline() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
  }
};

TomlValue parse_value(Cursor& c);

TomlValue parse_scalar(Cursor& c) {
  TomlValue v;
  if (c.peek() == '"') {
    c.advance();
    std::string s;
    while (!c.eof() && c.peek() != '"') {
      if (c.peek() == '\n') c.fail("unterminated string");
      s.push_back(c.peek());
      c.advance();
    }
    if (c.eof()) c.fail("unterminated string");
    c.advance();
    v.type = TomlValue::Type::string;
    v.s = s;
    return v;
  }
  std::string tok;
  while (!c.eof() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                      c.peek() == '.' || c.peek() == '-' || c.peek() == '+' ||
                      c.peek() == '_' || c.peek() == 'e' || c.peek() == 'E')) {
    tok.push_back(c.peek());
    c.advance();
  }
  if (tok.empty()) c.fail("expected a value");
  if (tok == "true" || tok == "false") {
    v.type = TomlValue::Type::boolean;
    v.b = tok == "true";
    return v;
  }
  bool is_int = true;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    char ch = tok[i];
    if (ch == '.' || ch == 'e' || ch == 'E') is_int = false;
    if (ch == '_') tok.erase(i--, 1);
  }
  try {
    if (is_int) {
      v.type = TomlValue::Type::integer;
      v.i = std::stoll(tok);
    } else {
      v.type = TomlValue::Type::real;
      v.d = std::stod(tok);
    }
  } catch (const std::exception&) {
    c.fail("cannot parse value '" + tok + "'");
  }
  return v;
}

TomlValue parse_value(Cursor& c) {
  if (c.peek() == '[') {
    c.advance();
    TomlValue v;
    v.type = TomlValue::Type::array;
    while (true) {
      // arrays may span lines
      while (!c.eof() && (c.peek() == ' ' || c.peek() == '\t' || c.peek() == '\n' ||
                          c.peek() == '\r' || c.peek() == ','))
        c.advance();
      if (c.eof()) c.fail("unterminated array");
      if (c.peek() == '#') {
        while (!c.eof() && c.peek() != '\n') c.advance();
        continue;
      }
      if (c.peek() == ']') {
        c.advance();
        return v;
      }
      v.arr.push_back(parse_value(c));
    }
  }
  return parse_scalar(c);
}

} // namespace

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  Cursor c{text};
  std::string section;
  while (!c.eof()) {
    c.skip_ws_inline();
    if (c.eof()) break;
    char ch = c.peek();
    if (ch == '\n' || ch == '\r') {
      c.advance();
      continue;
    }
    if (ch == '#') {
      while (!c.eof() && c.peek() != '\n') c.advance();
      continue;
    }
    if (ch == '[') {
      c.advance();
      std::string name;
      while (!c.eof() && c.peek() != ']' && c.peek() != '\n') {
        name.push_back(c.peek());
        c.advance();
      }
      if (c.eof() || c.peek() != ']') c.fail("unterminated section header");
      c.advance();
      section = name;
      continue;
    }
    // key = value
    std::string key;
    while (!c.eof() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                        c.peek() == '_' || c.peek() == '.' || c.peek() == '-')) {
      key.push_back(c.peek());
      c.advance();
    }
    if (key.empty()) c.fail("expected a key");
    c.skip_ws_inline();
    if (c.eof() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
    c.advance();
    c.skip_ws_inline();
    std::string path = section.empty() ? key : section + "." + key;
    if (table.kv.count(path)) c.fail("duplicate key '" + path + "'");
    table.kv[path] = parse_value(c);
    c.skip_ws_inline();
    if (!c.eof() && c.peek() == '#')
      while (!c.eof() && c.peek() != '\n') c.advance();
    if (!c.eof() && c.peek() != '\n' && c.peek() != '\r')
      c.fail("trailing characters after value for '" + path + "'");
  }
  return table;
}

TomlTable parse_toml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str());
}

namespace {

std::vector<std::vector<double>> matrix_from(const TomlTable& t, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < t.at(path).as_array(path).size(); ++i) {
    const auto& rv = t.at(path).as_array(path)[i];
    std::string rp = path + "[" + std::to_string(i) + "]";
    std::vector<double> row;
    for (std::size_t j = 0; j < rv.as_array(rp).size(); ++j)
      row.push_back(rv.arr[j].as_real(rp + "[" + std::to_string(j) + "]"));
    rows.push_back(row);
  }
  return rows;
}

void validate(const ExperimentConfig& cfg) {
  static const char* kinds[] = {"fourier-selftest", "besov-report", "heat-smoothing",
                                "renorm-scaling",  "noise-enhancement",
                                "pam-macro",       "pam-universality"};
  bool known = false;
  for (const char* k : kinds) known = known || cfg.kind == k;
  if (!known) throw config_error("experiment.kind: unknown experiment '" + cfg.kind + "'");

  if (cfg.d < 1 || cfg.d > 3) throw config_error("lattice.d: must be 1..3");
  std::array<Vec, kMaxDim> vecs{};
  if (cfg.basis.empty()) {
    for (int i = 0; i < cfg.d; ++i) vecs[i][i] = 1.0;
  } else {
    if (static_cast<int>(cfg.basis.size()) != cfg.d)
      throw config_error("lattice.basis: need d rows");
    for (int i = 0; i < cfg.d; ++i) {
      if (static_cast<int>(cfg.basis[i].size()) != cfg.d)
        throw config_error("lattice.basis: need d columns per row");
      for (int j = 0; j < cfg.d; ++j) vecs[i][j] = cfg.basis[i][j];
    }
  }
  BravaisBasis basis;
  try {
    basis = make_basis(cfg.d, vecs);
  } catch (const config_error& e) {
    throw config_error(std::string("lattice.basis: ") + e.what());
  }
  if (cfg.N_list.empty()) throw config_error("lattice.N: need at least one level");
  for (int n : cfg.N_list)
    if (n < 0) throw config_error("lattice.N: levels must be >= 0");
  auto check_m = [&](int M, const std::string& path) {
    if (M < 4 || M % 2 != 0 || (M & (M - 1)) != 0)
      throw config_error(path + ": M must be an even power of two >= 4");
  };
  if (cfg.window > 0) {
    for (int n : cfg.N_list) check_m(cfg.window << n, "lattice.window");
  } else {
    check_m(cfg.M, "lattice.M");
  }

  if (!cfg.atoms.empty()) {
    std::vector<JumpAtom> atoms;
    for (std::size_t i = 0; i < cfg.atoms.size(); ++i) {
      const auto& row = cfg.atoms[i];
      std::string path = "measure.atoms[" + std::to_string(i) + "]";
      if (static_cast<int>(row.size()) != cfg.d + 1)
        throw config_error(path + ": need [g_1..g_d, kappa]");
      JumpAtom a;
      for (int j = 0; j < cfg.d; ++j) {
        a.g[j] = static_cast<int>(std::llround(row[j]));
        if (a.g[j] != row[j]) throw config_error(path + ": jump must be integer");
      }
      a.kappa = row[cfg.d];
      atoms.push_back(a);
    }
    try {
      make_measure(cfg.d, atoms);
    } catch (const config_error& e) {
      throw config_error(std::string("measure.atoms: ") + e.what());
    }
  }

  if (cfg.noise_law != "gaussian" && cfg.noise_law != "rademacher" &&
      cfg.noise_law != "uniform")
    throw config_error("noise.law: must be gaussian | rademacher | uniform");

  try {
    if (cfg.F_kind == "linear")
      Nonlinearity::linear(cfg.F_param);
    else if (cfg.F_kind == "logistic")
      Nonlinearity::logistic(cfg.F_param);
    else if (cfg.F_kind == "polynomial")
      Nonlinearity::polynomial(cfg.F_coeffs);
    else
      throw config_error("must be linear | logistic | polynomial");
  } catch (const config_error& e) {
    throw config_error(std::string("F.kind: ") + e.what());
  }

  if (!(cfg.T > 0.0)) throw config_error("run.T: must be positive");
  if (!(cfg.dt > 0.0)) throw config_error("run.dt: must be positive");
  if (cfg.seeds.empty()) throw config_error("run.seeds: need at least one seed");
  if (cfg.samples < 1) throw config_error("run.samples: must be positive");
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0))
    throw config_error("regularity.sigma: must be in (0,1)");
  if (!(cfg.p_xi > 2.0)) throw config_error("regularity.p_xi: must exceed 2");
}

} // namespace

ExperimentConfig config_from_table(const TomlTable& t) {
  ExperimentConfig cfg;
  cfg.kind = t.string_or("experiment.kind", "");
  cfg.d = static_cast<int>(t.int_or("lattice.d", 2));
  if (t.has("lattice.basis")) cfg.basis = matrix_from(t, "lattice.basis");
  if (t.has("lattice.N")) {
    cfg.N_list.clear();
    const auto& arr = t.at("lattice.N").as_array("lattice.N");
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.N_list.push_back(static_cast<int>(arr[i].as_int("lattice.N")));
  }
  cfg.M = static_cast<int>(t.int_or("lattice.M", 64));
  cfg.window = static_cast<int>(t.int_or("lattice.window", 0));
  if (t.has("measure.atoms")) cfg.atoms = matrix_from(t, "measure.atoms");
  cfg.noise_law = t.string_or("noise.law", "gaussian");
  cfg.F_kind = t.string_or("F.kind", "logistic");
  cfg.F_param = t.real_or("F.param", 1.0);
  if (t.has("F.coeffs")) {
    const auto& arr = t.at("F.coeffs").as_array("F.coeffs");
    for (const auto& v : arr) cfg.F_coeffs.push_back(v.as_real("F.coeffs"));
  }
  cfg.T = t.real_or("run.T", 0.25);
  cfg.dt = t.real_or("run.dt", 1e-3);
  if (t.has("run.seeds")) {
    cfg.seeds.clear();
    const auto& arr = t.at("run.seeds").as_array("run.seeds");
    for (const auto& v : arr)
      cfg.seeds.push_back(static_cast<std::uint64_t>(v.as_int("run.seeds")));
  }
  cfg.samples = static_cast<int>(t.int_or("run.samples", 200));
  cfg.out_dir = t.string_or("run.out", "out");
  cfg.threads = static_cast<int>(t.int_or("run.threads", 0));
  cfg.alpha = t.real_or("regularity.alpha", cfg.alpha);
  cfg.kappa = t.real_or("regularity.kappa", cfg.kappa);
  cfg.sigma = t.real_or("regularity.sigma", cfg.sigma);
  cfg.p_xi = t.real_or("regularity.p_xi", cfg.p_xi);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_table(parse_toml_file(path));
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << kind << ";d=" << d << ";basis=";
  for (const auto& r : basis) {
    for (double v : r) os << v << ",";
    os << "|";
  }
  os << ";N=";
  for (int n : N_list) os << n << ",";
  os << ";M=" << M << ";window=" << window << ";atoms=";
  for (const auto& r : atoms) {
    for (double v : r) os << v << ",";
    os << "|";
  }
  os << ";noise=" << noise_law << ";F=" << F_kind << "," << F_param << ",";
  for (double v : F_coeffs) os << v << ",";
  os << ";T=" << T << ";dt=" << dt << ";samples=" << samples << ";seeds=";
  for (auto s : seeds) os << s << ",";
  os << ";alpha=" << alpha << ";kappa=" << kappa << ";sigma=" << sigma
     << ";p_xi=" << p_xi;
  return os.str();
}

} // namespace paralat
