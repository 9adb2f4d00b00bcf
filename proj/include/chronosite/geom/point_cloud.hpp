#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chronosite/color.hpp"

namespace chronosite::geom {

using Point = Eigen::Vector3d;

enum class SourceKind { ScaleModelScan, Aerial, Photogrammetry, ManualScan };

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& text);

// 3D points in meters with optional parallel per-point colors.
struct PointCloud {
  std::vector<Point> points;
  std::optional<std::vector<Rgb>> colors;
  std::string source_id;
  SourceKind source_kind = SourceKind::ManualScan;

  std::size_t size() const { return points.size(); }
  bool has_colors() const { return colors.has_value(); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

// Throws InvalidCloud when points are empty, non-finite, or colors mismatch.
void validate(const PointCloud& cloud);

// Multiplies every coordinate by `unit_scale` (e.g. 500 for a 1:500 scale
// model). Throws InvalidScale unless unit_scale is finite and > 0.
PointCloud harmonize(const PointCloud& cloud, double unit_scale);

struct Extents {
  Point min;
  Point max;
  Point size() const { return max - min; }
  double diagonal() const { return size().norm(); }
};

Extents extents(const PointCloud& cloud);

}  // namespace chronosite::geom
