#include "shapestat/landmarks.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "shapestat/error.hpp"

namespace shapestat {

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_comma(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view token, int line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    parse_error(line, "invalid number '" + std::string(token) + "'");
  }
  return value;
}

long parse_int(std::string_view token, int line) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    parse_error(line, "invalid integer '" + std::string(token) + "'");
  }
  return value;
}

struct DataLine {
  int line;
  Complex point;
  bool after_blank;
};

KAd make_kad(std::vector<Complex> pts, int line) {
  try {
    return KAd(std::span<const Complex>(pts));
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what());
  }
}

LandmarkFile parse_native(std::istream& in, std::string label) {
  std::string raw;
  int line_no = 0;
  long k = -1;
  long n = -1;
  int header_line = 0;
  std::vector<DataLine> data;
  bool pending_blank = false;
  bool any_separator = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) {
      pending_blank = true;
      continue;
    }
    if (line.front() == '#') continue;
    const auto tokens = split_ws(line);
    if (k < 0) {
      if (tokens.size() != 2) parse_error(line_no, "expected header 'k n'");
      k = parse_int(tokens[0], line_no);
      n = parse_int(tokens[1], line_no);
      if (k < kMinLandmarks || k > kMaxLandmarks) {
        parse_error(line_no, "landmark count k=" + std::to_string(k) + " outside [3, 512]");
      }
      if (n < 1) parse_error(line_no, "object count must be positive");
      header_line = line_no;
      pending_blank = false;
      continue;
    }
    if (tokens.size() != 2) parse_error(line_no, "expected 'x y'");
    const bool after_blank = pending_blank && !data.empty();
    any_separator = any_separator || after_blank;
    data.push_back({line_no, Complex(parse_double(tokens[0], line_no),
                                     parse_double(tokens[1], line_no)),
                    after_blank});
    pending_blank = false;
  }
  if (k < 0) parse_error(line_no, "missing header 'k n'");

  LandmarkFile file;
  file.label = std::move(label);
  file.k = static_cast<int>(k);

  // Group into objects: by blank-line blocks when present, else every k lines.
  std::vector<std::vector<DataLine>> blocks;
  for (const DataLine& d : data) {
    const bool new_block = blocks.empty() ||
                           (any_separator ? d.after_blank
                                          : static_cast<long>(blocks.back().size()) == k);
    if (new_block) blocks.emplace_back();
    blocks.back().push_back(d);
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (static_cast<long>(block.size()) != k) {
      throw Error(ErrorCode::ShapeMismatch,
                  "line " + std::to_string(block.back().line) + ": object " +
                      std::to_string(b + 1) + " has " + std::to_string(block.size()) +
                      " landmarks, header says k=" + std::to_string(k));
    }
  }
  if (static_cast<long>(blocks.size()) != n) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(header_line) + ": header announces " +
                    std::to_string(n) + " objects, file holds " +
                    std::to_string(blocks.size()));
  }
  for (const auto& block : blocks) {
    std::vector<Complex> pts;
    pts.reserve(block.size());
    for (const DataLine& d : block) pts.push_back(d.point);
    file.objects.push_back(make_kad(std::move(pts), block.front().line));
  }
  return file;
}

LandmarkFile parse_csv(std::istream& in, std::string label) {
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  struct Row {
    long landmark;
    Complex point;
    int line;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> objects;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split_comma(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "object" || fields[1] != "landmark" ||
          fields[2] != "x" || fields[3] != "y") {
        parse_error(line_no, "expected header 'object,landmark,x,y'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) parse_error(line_no, "expected 4 comma-separated fields");
    const std::string id(fields[0]);
    if (id.empty()) parse_error(line_no, "empty object id");
    auto [it, inserted] = objects.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.push_back({parse_int(fields[1], line_no),
                          Complex(parse_double(fields[2], line_no),
                                  parse_double(fields[3], line_no)),
                          line_no});
  }
  if (!header_seen) parse_error(line_no, "missing header 'object,landmark,x,y'");
  if (order.empty()) parse_error(line_no, "no landmark rows");

  LandmarkFile file;
  file.label = std::move(label);
  file.k = static_cast<int>(objects[order.front()].size());
  for (const std::string& id : order) {
    auto rows = objects[id];
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.landmark < b.landmark; });
    if (static_cast<int>(rows.size()) != file.k) {
      const int last = std::max_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                         return a.line < b.line;
                       })->line;
      throw Error(ErrorCode::ShapeMismatch,
                  "line " + std::to_string(last) + ": object '" + id + "' has " +
                      std::to_string(rows.size()) + " landmarks, expected k=" +
                      std::to_string(file.k));
    }
    std::vector<Complex> pts;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[j].landmark != static_cast<long>(j + 1)) {
        parse_error(rows[j].line, "object '" + id + "' landmark indices must run 1.." +
                                      std::to_string(file.k));
      }
      pts.push_back(rows[j].point);
    }
    file.objects.push_back(make_kad(std::move(pts), rows.front().line));
  }
  return file;
}

}  // namespace

LandmarkFormat parse_landmark_format(std::string_view name) {
  if (name == "native") return LandmarkFormat::Native;
  if (name == "csv") return LandmarkFormat::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown landmark format '" + std::string(name) + "'");
}

std::string_view to_string(LandmarkFormat format) noexcept {
  return format == LandmarkFormat::Native ? "native" : "csv";
}

std::vector<Shape> LandmarkFile::shapes() const {
  std::vector<Shape> out;
  out.reserve(objects.size());
  for (const KAd& z : objects) out.push_back(to_shape(z));
  return out;
}

LandmarkFile parse_landmarks(std::istream& in, LandmarkFormat format, std::string label) {
  return format == LandmarkFormat::Native ? parse_native(in, std::move(label))
                                          : parse_csv(in, std::move(label));
}

LandmarkFile parse_landmarks(const std::filesystem::path& path, LandmarkFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return parse_landmarks(in, format, path.stem().string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_landmarks(std::ostream& out, const LandmarkFile& file, LandmarkFormat format) {
  if (format == LandmarkFormat::Native) {
    out << file.k << ' ' << file.n() << '\n';
    for (const KAd& z : file.objects) {
      for (const Complex& p : z.points()) {
        out << format_double(p.real()) << ' ' << format_double(p.imag()) << '\n';
      }
    }
  } else {
    out << "object,landmark,x,y\n";
    for (int i = 0; i < file.n(); ++i) {
      const KAd& z = file.objects[static_cast<std::size_t>(i)];
      for (int j = 0; j < z.k(); ++j) {
        out << (i + 1) << ',' << (j + 1) << ',' << format_double(z.points()(j).real())
            << ',' << format_double(z.points()(j).imag()) << '\n';
      }
    }
  }
}

void write_landmarks(const std::filesystem::path& path, const LandmarkFile& file,
                     LandmarkFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  write_landmarks(out, file, format);
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace shapestat
