#include "chronosite/geom/merge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "chronosite/errors.hpp"

namespace chronosite::geom {

VoxelKey voxel_of(const Point& p, double voxel_size) {
  return {static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
          static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
          static_cast<std::int64_t>(std::floor(p.z() / voxel_size))};
}

namespace {

struct VoxelAccumulator {
  Point sum = Point::Zero();
  std::array<std::uint64_t, 3> color_sum{};
  std::uint64_t count = 0;
};

std::uint8_t mean_half_up(std::uint64_t sum, std::uint64_t count) {
  return static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
}

}  // namespace

PointCloud merge_clouds(std::span<const PointCloud> clouds, double voxel_size) {
  if (!std::isfinite(voxel_size) || !(voxel_size > 0.0)) {
    throw InvalidVoxelSize("voxel size must be finite and positive");
  }
  const bool colored =
      !clouds.empty() && std::all_of(clouds.begin(), clouds.end(), [](const PointCloud& c) { return c.has_colors(); });

  // The union is a set: a point repeated (same coordinates, and same color
  // when colors are kept) contributes once.
  std::set<std::tuple<double, double, double, std::uint32_t>> seen;
  std::map<VoxelKey, VoxelAccumulator> voxels;
  for (const PointCloud& cloud : clouds) {
    validate(cloud);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Point& p = cloud.points[i];
      std::uint32_t rgb = 0;
      if (colored) {
        const Rgb& c = (*cloud.colors)[i];
        rgb = (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b;
      }
      if (!seen.emplace(p.x(), p.y(), p.z(), rgb).second) continue;
      VoxelAccumulator& acc = voxels[voxel_of(p, voxel_size)];
      acc.sum += cloud.points[i];
      ++acc.count;
      if (colored) {
        const Rgb& c = (*cloud.colors)[i];
        acc.color_sum[0] += c.r;
        acc.color_sum[1] += c.g;
        acc.color_sum[2] += c.b;
      }
    }
  }

  PointCloud out;
  out.source_id = "merged";
  if (!clouds.empty()) out.source_kind = clouds.front().source_kind;
  out.points.reserve(voxels.size());
  if (colored) out.colors.emplace().reserve(voxels.size());
  for (const auto& [key, acc] : voxels) {
    out.points.push_back(acc.sum / static_cast<double>(acc.count));
    if (colored) {
      out.colors->push_back({mean_half_up(acc.color_sum[0], acc.count), mean_half_up(acc.color_sum[1], acc.count),
                             mean_half_up(acc.color_sum[2], acc.count)});
    }
  }
  return out;
}

}  // namespace chronosite::geom
