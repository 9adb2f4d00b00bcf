#include "chronosite/project/chunk.hpp"

#include <bit>
#include <cstring>

#include <zlib.h>

#include "chronosite/errors.hpp"

namespace chronosite::project {

namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'S', 'P', 'C'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[offset + i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t piece = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
    crc = ::crc32(crc, bytes.data() + offset, static_cast<uInt>(piece));
    offset += piece;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_chunk(const geom::PointCloud& cloud) {
  if (cloud.colors && cloud.colors->size() != cloud.size()) throw ChunkError("color count differs from point count");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kHeaderSize + cloud.size() * (12 + 3) + 5);
  put_le<std::uint32_t>(out, kChunkVersion);
  put_le<std::uint64_t>(out, cloud.size());
  for (const geom::Point& p : cloud.points) {
    put_le<float>(out, static_cast<float>(p.x()));
    put_le<float>(out, static_cast<float>(p.y()));
    put_le<float>(out, static_cast<float>(p.z()));
  }
  out.push_back(cloud.colors ? 1 : 0);
  if (cloud.colors) {
    for (const Rgb& c : *cloud.colors) {
      out.push_back(c.r);
      out.push_back(c.g);
      out.push_back(c.b);
    }
  }
  put_le<std::uint32_t>(out, crc32(out));
  return out;
}

ChunkHeader inspect_chunk(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize + 1 + 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ChunkError("not a CSPC chunk");
  }
  return {get_le<std::uint64_t>(bytes, 8), get_le<std::uint32_t>(bytes, bytes.size() - 4)};
}

geom::PointCloud decode_chunk(std::span<const std::uint8_t> bytes) {
  const ChunkHeader header = inspect_chunk(bytes);
  const std::uint32_t version = get_le<std::uint32_t>(bytes, 4);
  if (version != kChunkVersion) throw ChunkError("unsupported chunk version " + std::to_string(version));
  const std::uint64_t n = header.points;
  const std::size_t body = kHeaderSize + 12 * n;
  if (n > bytes.size() / 12 || bytes.size() < body + 1 + 4) throw ChunkError("chunk is truncated");
  const std::uint8_t flag = bytes[body];
  if (flag > 1) throw ChunkError("invalid color flag");
  const std::size_t expected = body + 1 + (flag == 1 ? 3 * n : 0) + 4;
  if (bytes.size() != expected) throw ChunkError("chunk size does not match its point count");
  if (crc32(bytes.first(bytes.size() - 4)) != header.crc32) throw ChunkError("chunk checksum mismatch");

  geom::PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = kHeaderSize + 12 * i;
    cloud.points.emplace_back(get_le<float>(bytes, at), get_le<float>(bytes, at + 4), get_le<float>(bytes, at + 8));
  }
  if (flag == 1) {
    cloud.colors.emplace();
    cloud.colors->reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = body + 1 + 3 * i;
      cloud.colors->push_back({bytes[at], bytes[at + 1], bytes[at + 2]});
    }
  }
  return cloud;
}

}  // namespace chronosite::project
