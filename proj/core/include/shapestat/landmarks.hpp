#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "shapestat/shape_core.hpp"

namespace shapestat {

enum class LandmarkFormat { Native, Csv };

LandmarkFormat parse_landmark_format(std::string_view name);
std::string_view to_string(LandmarkFormat format) noexcept;

/// n objects of k landmarks each, plus a sample label.
struct LandmarkFile {
  std::string label;
  int k = 0;
  std::vector<KAd> objects;

  int n() const noexcept { return static_cast<int>(objects.size()); }
  std::vector<Shape> shapes() const;
};

// Native format:
//   line 1: "k n"
//   then n blocks of k lines "x y"
// Blank lines and lines whose first non-blank character is '#' are ignored,
// except that if blank lines occur between data lines they delimit the
// objects and each block must hold exactly k landmarks.
//
// CSV format:
//   header "object,landmark,x,y", then one row per landmark. Objects appear
//   in order of first occurrence; landmark indices run 1..k within each.
//
// Numbers use '.' as the decimal separator regardless of locale.
// Errors: ParseError (with line number), ShapeMismatch, IoError.
LandmarkFile parse_landmarks(std::istream& in, LandmarkFormat format,
                             std::string label);
LandmarkFile parse_landmarks(const std::filesystem::path& path,
                             LandmarkFormat format);

/// Writes coordinates in shortest round-trip form, so parse(write(f))
/// reproduces every coordinate bit-exactly.
void write_landmarks(std::ostream& out, const LandmarkFile& file,
                     LandmarkFormat format);
void write_landmarks(const std::filesystem::path& path, const LandmarkFile& file,
                     LandmarkFormat format);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace shapestat
