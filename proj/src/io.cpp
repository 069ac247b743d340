#include "graphfluct/io.hpp"

#include <cstdio>
#include <stdexcept>

#ifndef GRAPHFLUCT_REVISION
#define GRAPHFLUCT_REVISION "unknown"
#endif

namespace gf {

using json = nlohmann::json;

std::string version_string() { return std::string("graphfluct 0.1.0+") + GRAPHFLUCT_REVISION; }

json spectral_to_json(const SpectralField& f) {
  std::vector<double> re, im;
  re.reserve(f.c.size());
  im.reserve(f.c.size());
  for (const cplx& z : f.c) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return json{{"dim", f.dim}, {"A_max", f.A}, {"r", f.r}, {"re", re}, {"im", im}};
}

SpectralField spectral_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const int A = j.at("A_max").get<int>();
  if (dim != 1 && dim != 2) throw std::invalid_argument("spectral field dim must be 1 or 2");
  SpectralField f(dim, A);
  f.r = j.value("r", 0.0);
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.value("im", std::vector<double>(re.size(), 0.0));
  if (re.size() != f.c.size() || im.size() != f.c.size()) throw std::invalid_argument("spectral field size mismatch");
  for (size_t k = 0; k < f.c.size(); ++k) f.c[k] = cplx(re[k], im[k]);
  return f;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& meta,
                     const std::vector<std::string>& columns)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& m : meta) out_ << "# " << m << '\n';
  for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::operator<<(const std::string& cell) {
  if (!first_) out_ << ',';
  first_ = false;
  if (cell.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : cell) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  } else {
    out_ << cell;
  }
  return *this;
}

CsvWriter& CsvWriter::operator<<(double v) { return *this << format_double(v); }
CsvWriter& CsvWriter::operator<<(size_t v) { return *this << std::to_string(v); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

JsonlWriter::JsonlWriter(const std::string& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
}

void JsonlWriter::write(const json& j) { out_ << j.dump() << '\n'; }

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(json::parse(line));
  return rows;
}

void write_histogram_csv(const std::string& path, const std::vector<std::string>& meta, const Histogram& h) {
  CsvWriter w(path, meta, {"left", "right", "count"});
  for (size_t k = 0; k < h.counts.size(); ++k) {
    w << h.edges[k] << h.edges[k + 1] << h.counts[k];
    w.end_row();
  }
}

void write_plot_script(const std::string& path, const std::vector<std::string>& histogram_csvs,
                       const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "import csv, sys\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n\n";
  out << "files = [";
  for (size_t i = 0; i < histogram_csvs.size(); ++i) out << (i ? ", " : "") << '"' << histogram_csvs[i] << '"';
  out << "]\n";
  out << "fig, ax = plt.subplots()\n"
         "for name in files:\n"
         "    rows = [r for r in csv.reader(open(name)) if r and not r[0].startswith('#')][1:]\n"
         "    left = [float(r[0]) for r in rows]\n"
         "    width = [float(r[1]) - float(r[0]) for r in rows]\n"
         "    total = sum(int(r[2]) for r in rows)\n"
         "    dens = [int(r[2]) / (total * w) for r, w in zip(rows, width)]\n"
         "    ax.bar(left, dens, width=width, align='edge', alpha=0.5, label=name)\n";
  out << "ax.set_title(\"" << title << "\")\nax.legend()\n"
      << "fig.savefig(sys.argv[1] if len(sys.argv) > 1 else 'histogram.png', dpi=120)\n";
}

}  // namespace gf
