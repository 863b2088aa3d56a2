#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace haarvol {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

// CSV with a fixed header row, '\n' line endings, and round-trip numeric
// formatting, so equal inputs produce byte-identical files.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::vector<std::string>& columns);
  ~CsvFile();

  CsvFile& field(double v);
  CsvFile& field(long long v);
  CsvFile& field(const std::string& v);
  void end_row();
  void close();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

// Sidecar `<name>.meta.json` next to a CSV: schema version, seed, config hash,
// library version, plus any extra string fields.
void write_meta_sidecar(const std::filesystem::path& csv_path, std::uint64_t seed,
                        std::uint64_t config_hash,
                        const std::map<std::string, std::string>& extra = {});

std::filesystem::path meta_sidecar_path(const std::filesystem::path& csv_path);

}  // namespace haarvol
