#include "paralat/io.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace paralat {

using nlohmann::json;

void write_field(const std::filesystem::path& path, const Field& f,
                 const FieldExtras& extras) {
  const auto& t = f.torus;
  json hdr;
  hdr["d"] = t.basis.d;
  hdr["M"] = t.M;
  hdr["N"] = t.N;
  json basis = json::array();
  for (int i = 0; i < t.basis.d; ++i) {
    json row = json::array();
    for (int j = 0; j < t.basis.d; ++j) row.push_back(t.basis.a[i][j]);
    basis.push_back(row);
  }
  hdr["basis"] = basis;
  hdr["kind"] = "field";
  hdr["dtype"] = "f64le";
  if (extras.t) hdr["t"] = *extras.t;
  if (extras.eps) hdr["eps"] = *extras.eps;
  if (extras.role) hdr["role"] = *extras.role;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw numeric_error("write_field: cannot open " + path.string());
  out << hdr.dump() << '\n';
  static_assert(sizeof(double) == 8);
  // this code assumes a little-endian host, as does the format
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
}

std::pair<Field, FieldExtras> read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw numeric_error("read_field: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  json hdr = json::parse(line);
  int d = hdr.at("d"), M = hdr.at("M"), N = hdr.at("N");
  std::array<Vec, kMaxDim> vecs{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) vecs[i][j] = hdr.at("basis")[i][j];
  BravaisTorus t = build_torus(make_basis(d, vecs), N, M);
  Field f(t);
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(f.v.size() * sizeof(double)))
    throw numeric_error("read_field: truncated payload in " + path.string());
  FieldExtras extras;
  if (hdr.contains("t")) extras.t = hdr["t"].get<double>();
  if (hdr.contains("eps")) extras.eps = hdr["eps"].get<double>();
  if (hdr.contains("role")) extras.role = hdr["role"].get<std::string>();
  return {std::move(f), extras};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void write_manifest(const std::filesystem::path& dir, const std::string& config_hash) {
  json artifacts = json::array();
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "MANIFEST.json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    json a;
    a["path"] = std::filesystem::relative(p, dir).generic_string();
    a["size"] = std::filesystem::file_size(p);
    a["sha256"] = sha256_file(p);
    artifacts.push_back(a);
  }
  json m;
  m["config_hash"] = config_hash;
  m["artifacts"] = artifacts;
  std::ofstream out(dir / "MANIFEST.json");
  out << m.dump(2) << '\n';
}

} // namespace paralat
