#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "paralat/field.hpp"

namespace paralat {

// Field file: one UTF-8 JSON header line
// {"d":..,"M":..,"N":..,"basis":[[..]],"kind":"field","dtype":"f64le", ...extras}
// followed by M^d little-endian doubles, row-major. Extras (e.g. "t", "eps",
// "role") are preserved round-trip.
struct FieldExtras {
  std::optional<double> t;
  std::optional<double> eps;
  std::optional<std::string> role;
};

void write_field(const std::filesystem::path& path, const Field& f,
                 const FieldExtras& extras = {});
std::pair<Field, FieldExtras> read_field(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// MANIFEST.json: every artifact in dir (recursively, except the manifest
// itself) with size and sha256.
void write_manifest(const std::filesystem::path& dir,
                    const std::string& config_hash);

} // namespace paralat
