#include "chronosite/geom/point_cloud.hpp"

#include <cmath>

#include "chronosite/errors.hpp"

namespace chronosite::geom {

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::ScaleModelScan:
      return "scale_model_scan";
    case SourceKind::Aerial:
      return "aerial";
    case SourceKind::Photogrammetry:
      return "photogrammetry";
    case SourceKind::ManualScan:
      return "manual_scan";
  }
  return "manual_scan";
}

SourceKind source_kind_from_string(const std::string& text) {
  if (text == "scale_model_scan") return SourceKind::ScaleModelScan;
  if (text == "aerial") return SourceKind::Aerial;
  if (text == "photogrammetry") return SourceKind::Photogrammetry;
  if (text == "manual_scan") return SourceKind::ManualScan;
  throw Error("unknown cloud source kind '" + text + "'");
}

void validate(const PointCloud& cloud) {
  if (cloud.points.empty()) throw InvalidCloud("point cloud '" + cloud.source_id + "' is empty");
  for (const Point& p : cloud.points) {
    if (!p.allFinite()) throw InvalidCloud("point cloud '" + cloud.source_id + "' has a non-finite coordinate");
  }
  if (cloud.colors && cloud.colors->size() != cloud.points.size()) {
    throw InvalidCloud("point cloud '" + cloud.source_id + "' has " + std::to_string(cloud.colors->size()) +
                       " colors for " + std::to_string(cloud.points.size()) + " points");
  }
}

PointCloud harmonize(const PointCloud& cloud, double unit_scale) {
  if (!std::isfinite(unit_scale) || !(unit_scale > 0.0)) {
    throw InvalidScale("unit scale must be finite and positive");
  }
  PointCloud out = cloud;
  for (Point& p : out.points) p *= unit_scale;
  return out;
}

Extents extents(const PointCloud& cloud) {
  if (cloud.points.empty()) throw InvalidCloud("extents of an empty cloud");
  Extents e{cloud.points.front(), cloud.points.front()};
  for (const Point& p : cloud.points) {
    e.min = e.min.cwiseMin(p);
    e.max = e.max.cwiseMax(p);
  }
  return e;
}

}  // namespace chronosite::geom
