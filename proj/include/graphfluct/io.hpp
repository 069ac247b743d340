#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphfluct/measures.hpp"
#include "graphfluct/stats.hpp"

namespace gf {

// Library version plus the source revision the build was configured from.
std::string version_string();

// {"dim", "A_max", "r", "re": [...], "im": [...]}; 2D arrays are row-major over (a, b).
nlohmann::json spectral_to_json(const SpectralField& f);
SpectralField spectral_from_json(const nlohmann::json& j);

// CSV with '#'-prefixed metadata lines before the header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& meta, const std::vector<std::string>& columns);
  CsvWriter& operator<<(const std::string& cell);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(size_t v);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path, bool append = false);
  void write(const nlohmann::json& j);

 private:
  std::ofstream out_;
};

std::vector<nlohmann::json> read_jsonl(const std::string& path);

void write_histogram_csv(const std::string& path, const std::vector<std::string>& meta, const Histogram& h);
// Minimal matplotlib script drawing the histogram CSVs given; no rendering happens here.
void write_plot_script(const std::string& path, const std::vector<std::string>& histogram_csvs,
                       const std::string& title);

std::string format_double(double v);

}  // namespace gf
