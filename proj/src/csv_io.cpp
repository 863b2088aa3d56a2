#include "haarvol/csv_io.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

#include <json.hpp>

#include "haarvol/version.hpp"

namespace haarvol {

std::string format_double(double v) {
  std::array<char, 40> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

CsvFile::CsvFile(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

CsvFile::~CsvFile() { close(); }

CsvFile& CsvFile::field(double v) { return field(format_double(v)); }

CsvFile& CsvFile::field(long long v) { return field(std::to_string(v)); }

CsvFile& CsvFile::field(const std::string& v) {
  if (in_row_) out_ << ',';
  out_ << v;
  ++in_row_;
  return *this;
}

void CsvFile::end_row() {
  if (in_row_ != columns_)
    throw std::logic_error("CSV row has " + std::to_string(in_row_) + " fields, header has " +
                           std::to_string(columns_));
  out_ << '\n';
  in_row_ = 0;
}

void CsvFile::close() {
  if (out_.is_open()) out_.close();
}

std::filesystem::path meta_sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

void write_meta_sidecar(const std::filesystem::path& csv_path, std::uint64_t seed,
                        std::uint64_t config_hash,
                        const std::map<std::string, std::string>& extra) {
  nlohmann::json meta;
  meta["schema_version"] = kOutputSchemaVersion;
  meta["seed"] = seed;
  char hex[19];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  meta["config_hash"] = std::string(hex);
  meta["library_version"] = kLibraryVersion;
  for (const auto& [key, value] : extra) meta[key] = value;
  std::ofstream out(meta_sidecar_path(csv_path), std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " +
                             meta_sidecar_path(csv_path).string());
  out << meta.dump(2) << '\n';
}

}  // namespace haarvol
