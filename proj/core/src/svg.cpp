#include "shapestat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "shapestat/error.hpp"
#include "shapestat/landmarks.hpp"

namespace shapestat {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kHalfExtentPx = 290.0;

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double extent_of(std::span<const ComplexVector> vectors) {
  double r = 0.0;
  for (const ComplexVector& v : vectors) {
    for (const Complex& z : v) r = std::max({r, std::abs(z.real()), std::abs(z.imag())});
  }
  return r > 0.0 ? 1.1 * r : 1.0;
}

// Opens the document and the data group that maps preshape coordinates
// onto the canvas (y axis pointing up).
void open_document(std::ostringstream& os, std::string_view title, double extent) {
  const double scale = kHalfExtentPx / extent;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kCanvas
     << "\" height=\"" << kCanvas + 40.0 << "\" viewBox=\"0 0 " << kCanvas << ' '
     << kCanvas + 40.0 << "\">\n"
     << "<title>" << escape_xml(title) << "</title>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kCanvas << "\" height=\"" << kCanvas + 40.0
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kCanvas / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << escape_xml(title) << "</text>\n"
     << "<g id=\"data\" transform=\"translate(" << kCanvas / 2 << ' ' << kCanvas / 2 + 40.0
     << ") scale(" << format_double(scale) << ' ' << format_double(-scale) << ")\">\n";
}

void close_document(std::ostringstream& os) { os << "</g>\n</svg>\n"; }

void write_circle(std::ostringstream& os, const Complex& z, double r, std::string_view cls,
                  std::string_view fill) {
  os << "<circle class=\"" << cls << "\" cx=\"" << format_double(z.real()) << "\" cy=\""
     << format_double(z.imag()) << "\" r=\"" << format_double(r) << "\" fill=\"" << fill
     << "\"/>\n";
}

void write_star(std::ostringstream& os, const Complex& z, double r, std::string_view cls,
                std::string_view fill) {
  os << "<polygon class=\"" << cls << "\" points=\"";
  for (int i = 0; i < 10; ++i) {
    const double radius = (i % 2 == 0) ? r : 0.4 * r;
    const double angle = std::numbers::pi / 2.0 + i * std::numbers::pi / 5.0;
    const Complex p = z + std::polar(radius, angle);
    if (i > 0) os << ' ';
    os << format_double(p.real()) << ',' << format_double(p.imag());
  }
  os << "\" fill=\"" << fill << "\"/>\n";
}

}  // namespace

std::string render_sample_svg(std::span<const Shape> sample, const Shape& mean,
                              std::string_view title) {
  const Preshape& m = mean.rep();
  std::vector<ComplexVector> aligned;
  aligned.reserve(sample.size() + 1);
  for (const Shape& s : sample) aligned.push_back(align_rotation(s.rep(), m).vector());
  aligned.push_back(m.vector());
  const double extent = extent_of(aligned);
  aligned.pop_back();

  std::ostringstream os;
  open_document(os, title, extent);
  os << "<g id=\"observations\">\n";
  for (const ComplexVector& v : aligned) {
    for (const Complex& z : v) write_circle(os, z, 0.01 * extent, "landmark", "#4a78b5");
  }
  os << "</g>\n<g id=\"mean\">\n";
  for (const Complex& z : m.vector()) write_star(os, z, 0.035 * extent, "mean", "#c0392b");
  os << "</g>\n";
  close_document(os);
  return os.str();
}

std::string render_means_svg(std::span<const LabeledShape> means, const Shape& pooled,
                             std::string_view title) {
  static constexpr std::string_view kColors[] = {"#4a78b5", "#27ae60", "#8e44ad", "#d35400"};
  const Preshape& p = pooled.rep();
  std::vector<ComplexVector> aligned;
  for (const LabeledShape& s : means) aligned.push_back(align_rotation(s.shape.rep(), p).vector());
  aligned.push_back(p.vector());
  const double extent = extent_of(aligned);
  aligned.pop_back();

  std::ostringstream os;
  open_document(os, title, extent);
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    const std::string_view color = kColors[i % std::size(kColors)];
    os << "<g class=\"sample-mean\" data-label=\"" << escape_xml(means[i].label) << "\">\n";
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (Eigen::Index j = 0; j < aligned[i].size(); ++j) {
      if (j > 0) os << ' ';
      os << format_double(aligned[i](j).real()) << ',' << format_double(aligned[i](j).imag());
    }
    os << "\"/>\n";
    for (const Complex& z : aligned[i]) write_circle(os, z, 0.012 * extent, "landmark", color);
    os << "</g>\n";
  }
  os << "<g id=\"pooled\">\n";
  for (const Complex& z : p.vector()) write_star(os, z, 0.035 * extent, "mean", "#c0392b");
  os << "</g>\n";
  close_document(os);
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace shapestat
