#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "chronosite/geom/point_cloud.hpp"

namespace chronosite::geom {

// ASCII XYZ: one "x y z" or "x y z r g b" point per line, whitespace
// separated; '#' starts a comment. All points must use the same form.
PointCloud read_xyz(std::istream& in, const std::string& source_id);

// ASCII PLY: reads element "vertex" with x, y, z (float or double) and
// optional uchar red, green, blue. Other elements and properties are skipped.
PointCloud read_ply(std::istream& in, const std::string& source_id);

// Dispatches on the extension (.xyz/.txt or .ply). The source id is the
// file stem. Throws ParseError on malformed input.
PointCloud read_cloud(const std::filesystem::path& path);

void write_xyz(std::ostream& out, const PointCloud& cloud);
void write_ply(std::ostream& out, const PointCloud& cloud);

}  // namespace chronosite::geom
