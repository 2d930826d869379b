#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapestat/shape_core.hpp"

namespace shapestat {

/// Preshapes of a sample, each rotated onto `mean` by align_rotation and
/// drawn as k circles, with the mean landmarks drawn as k star polygons.
///
/// Geometry lives inside one <g> whose transform maps preshape coordinates
/// to the canvas, so every circle's (cx, cy) is the aligned landmark itself.
/// Output is a pure function of the inputs.
std::string render_sample_svg(std::span<const Shape> sample, const Shape& mean,
                              std::string_view title);

struct LabeledShape {
  std::string label;
  Shape shape;
};

/// Several sample means plus their pooled mean, aligned to the pooled mean;
/// sample means as connected circles, the pooled mean as stars.
std::string render_means_svg(std::span<const LabeledShape> means, const Shape& pooled,
                             std::string_view title);

/// Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace shapestat
