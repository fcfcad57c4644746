#pragma once

// CSV records and a minimal SVG line-plot writer for the verification CLI.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphectra {

/// One verification outcome. pass means value <= bound + margin; every
/// number carries the oracle that produced it.
struct VerificationRecord {
  std::string description;
  double value = 0.0;
  std::string value_oracle;
  double bound = 0.0;
  std::string bound_oracle;
  double margin = 0.0;
  bool pass = false;
  bool refined = false;  // reran one level higher after an inconclusive pass

  static std::string csv_header() {
    return "description,value,value_oracle,bound,bound_oracle,margin,pass,refined";
  }

  std::string csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << '"' << description << "\"," << value << ',' << value_oracle << ','
       << bound << ',' << bound_oracle << ',' << margin << ','
       << (pass ? 1 : 0) << ',' << (refined ? 1 : 0);
    return os.str();
  }
};

inline void write_records_csv(const std::vector<VerificationRecord>& records,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << VerificationRecord::csv_header() << '\n';
  for (const auto& r : records) out << r.csv_row() << '\n';
}

/// Single-series polyline plot in a fixed 800x500 viewBox.
inline void write_svg_plot(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::string& title, const std::string& path) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("write_svg_plot: need matching series");
  const double W = 800.0, H = 500.0, ml = 70.0, mr = 25.0, mt = 45.0, mb = 55.0;
  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  double ymin = *std::min_element(y.begin(), y.end());
  double ymax = *std::max_element(y.begin(), y.end());
  if (ymax - ymin < 1e-12) {
    ymax += 1.0;
    ymin -= 1.0;
  }
  auto px = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double v) {
    return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
  out << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 22
        << "\" text-anchor=\"middle\" font-size=\"12\" "
           "font-family=\"sans-serif\">"
        << std::round(xv * 1e4) / 1e4 << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"12\" "
           "font-family=\"sans-serif\">"
        << std::round(yv * 1e4) / 1e4 << "</text>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << px(x[i]) << ',' << py(y[i]) << ' ';
  out << "\"/>\n</svg>\n";
}

}  // namespace sphectra
