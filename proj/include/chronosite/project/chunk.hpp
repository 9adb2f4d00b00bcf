#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chronosite/geom/point_cloud.hpp"

namespace chronosite::project {

// CSPC binary point chunk, version 1. All integers little-endian:
//
//   "CSPC" | u32 version | u64 n | n x (f32 x, f32 y, f32 z)
//   | u8 has_colors | [n x (u8 r, u8 g, u8 b)] | u32 crc32(all preceding bytes)
//
// Coordinates are narrowed to f32 on encode.
inline constexpr std::uint32_t kChunkVersion = 1;

std::vector<std::uint8_t> encode_chunk(const geom::PointCloud& cloud);

// Throws ChunkError on bad magic, version, size or checksum.
geom::PointCloud decode_chunk(std::span<const std::uint8_t> bytes);

// Point count and CRC-32 stored in an encoded chunk (not re-verified).
struct ChunkHeader {
  std::uint64_t points = 0;
  std::uint32_t crc32 = 0;
};
ChunkHeader inspect_chunk(std::span<const std::uint8_t> bytes);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace chronosite::project
