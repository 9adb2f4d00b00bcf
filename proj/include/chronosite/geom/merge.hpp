#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "chronosite/geom/point_cloud.hpp"

namespace chronosite::geom {

using VoxelKey = std::array<std::int64_t, 3>;

// floor(p / voxel_size) per axis.
VoxelKey voxel_of(const Point& p, double voxel_size);

// Set union of `clouds` (exact duplicate points, including color when colors
// are kept, count once), reduced to one point per occupied voxel: the
// centroid of the voxel's points, accumulated in input order, colored with
// the channel-wise mean rounded half-up.
// Output is ordered by voxel key (lexicographic). Colors are kept only when
// every input cloud carries them. Clouds must already share a frame.
// Throws InvalidVoxelSize unless voxel_size is finite and > 0.
PointCloud merge_clouds(std::span<const PointCloud> clouds, double voxel_size);

}  // namespace chronosite::geom
