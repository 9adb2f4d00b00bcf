#include "chronosite/geom/cloud_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "chronosite/errors.hpp"

namespace chronosite::geom {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("invalid coordinate '" + std::string(token) + "'", line_no);
  }
  return value;
}

std::uint8_t parse_channel(std::string_view token, std::size_t line_no) {
  int value = -1;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0 || value > 255) {
    throw ParseError("invalid color channel '" + std::string(token) + "'", line_no);
  }
  return static_cast<std::uint8_t>(value);
}

void finish(PointCloud& cloud, std::size_t line_no) {
  if (cloud.points.empty()) throw ParseError("cloud contains no points", line_no);
}

}  // namespace

PointCloud read_xyz(std::istream& in, const std::string& source_id) {
  PointCloud cloud;
  cloud.source_id = source_id;
  std::optional<bool> colored;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto tokens = split_ws(view);
    if (tokens.empty()) continue;
    if (tokens.size() != 3 && tokens.size() != 6) {
      throw ParseError("expected 3 or 6 fields, found " + std::to_string(tokens.size()), line_no);
    }
    const bool has_color = tokens.size() == 6;
    if (!colored) {
      colored = has_color;
      if (has_color) cloud.colors.emplace();
    } else if (*colored != has_color) {
      throw ParseError("mixed colored and uncolored points", line_no);
    }
    cloud.points.emplace_back(parse_double(tokens[0], line_no), parse_double(tokens[1], line_no),
                              parse_double(tokens[2], line_no));
    if (has_color) {
      cloud.colors->push_back(
          {parse_channel(tokens[3], line_no), parse_channel(tokens[4], line_no), parse_channel(tokens[5], line_no)});
    }
  }
  finish(cloud, line_no);
  return cloud;
}

PointCloud read_ply(std::istream& in, const std::string& source_id) {
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;  // names; list properties are recorded as "list"
    std::vector<std::string> types;
  };

  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != "ply") throw ParseError("missing 'ply' magic", line_no == 0 ? 0 : line_no);

  std::vector<Element> elements;
  bool saw_format = false;
  while (true) {
    if (!next_line()) throw ParseError("header ended without end_header", line_no);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const std::string_view head = tokens[0];
    if (head == "end_header") break;
    if (head == "comment" || head == "obj_info") continue;
    if (head == "format") {
      if (tokens.size() < 2 || tokens[1] != "ascii") {
        throw ParseError("only ASCII PLY is supported", line_no);
      }
      saw_format = true;
    } else if (head == "element") {
      if (tokens.size() != 3) throw ParseError("malformed element line", line_no);
      Element e;
      e.name = std::string(tokens[1]);
      auto [ptr, ec] = std::from_chars(tokens[2].data(), tokens[2].data() + tokens[2].size(), e.count);
      if (ec != std::errc() || ptr != tokens[2].data() + tokens[2].size()) {
        throw ParseError("invalid element count", line_no);
      }
      elements.push_back(std::move(e));
    } else if (head == "property") {
      if (elements.empty()) throw ParseError("property before any element", line_no);
      if (tokens.size() >= 2 && tokens[1] == "list") {
        if (tokens.size() != 5) throw ParseError("malformed list property", line_no);
        elements.back().properties.emplace_back(tokens[4]);
        elements.back().types.emplace_back("list");
      } else {
        if (tokens.size() != 3) throw ParseError("malformed property line", line_no);
        elements.back().properties.emplace_back(tokens[2]);
        elements.back().types.emplace_back(tokens[1]);
      }
    } else {
      throw ParseError("unexpected header keyword '" + std::string(head) + "'", line_no);
    }
  }
  if (!saw_format) throw ParseError("missing format line", line_no);

  auto vertex = std::find_if(elements.begin(), elements.end(), [](const Element& e) { return e.name == "vertex"; });
  if (vertex == elements.end()) throw ParseError("no vertex element", line_no);

  auto index_of = [&](const char* name) -> std::optional<std::size_t> {
    auto it = std::find(vertex->properties.begin(), vertex->properties.end(), name);
    if (it == vertex->properties.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vertex->properties.begin());
  };
  const auto ix = index_of("x");
  const auto iy = index_of("y");
  const auto iz = index_of("z");
  if (!ix || !iy || !iz) throw ParseError("vertex element lacks x, y, z", line_no);
  for (auto idx : {*ix, *iy, *iz}) {
    const std::string& type = vertex->types[idx];
    if (type != "float" && type != "double" && type != "float32" && type != "float64") {
      throw ParseError("coordinate property must be float or double", line_no);
    }
  }
  const auto ir = index_of("red");
  const auto ig = index_of("green");
  const auto ib = index_of("blue");
  const bool colored = ir && ig && ib;
  if (colored) {
    for (auto idx : {*ir, *ig, *ib}) {
      if (vertex->types[idx] != "uchar" && vertex->types[idx] != "uint8") {
        throw ParseError("color property must be uchar", line_no);
      }
    }
  }
  if (std::find(vertex->types.begin(), vertex->types.end(), "list") != vertex->types.end()) {
    throw ParseError("list properties on vertices are not supported", line_no);
  }

  PointCloud cloud;
  cloud.source_id = source_id;
  if (colored) cloud.colors.emplace();
  for (const Element& e : elements) {
    for (std::size_t k = 0; k < e.count; ++k) {
      if (!next_line()) throw ParseError("unexpected end of data in element '" + e.name + "'", line_no);
      if (&e != &*vertex) continue;
      const auto tokens = split_ws(line);
      if (tokens.size() != e.properties.size()) {
        throw ParseError("vertex has " + std::to_string(tokens.size()) + " values, expected " +
                             std::to_string(e.properties.size()),
                         line_no);
      }
      cloud.points.emplace_back(parse_double(tokens[*ix], line_no), parse_double(tokens[*iy], line_no),
                                parse_double(tokens[*iz], line_no));
      if (colored) {
        cloud.colors->push_back({parse_channel(tokens[*ir], line_no), parse_channel(tokens[*ig], line_no),
                                 parse_channel(tokens[*ib], line_no)});
      }
    }
  }
  finish(cloud, line_no);
  return cloud;
}

PointCloud read_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  const std::string stem = path.stem().string();
  if (ext == ".ply") return read_ply(in, stem);
  if (ext == ".xyz" || ext == ".txt") return read_xyz(in, stem);
  throw ParseError("unsupported cloud extension '" + ext + "'", 0);
}

namespace {

void write_point(std::ostream& out, const Point& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", p.x(), p.y(), p.z());
  out << buf;
}

}  // namespace

void write_xyz(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    write_point(out, cloud.points[i]);
    if (cloud.colors) {
      const Rgb& c = (*cloud.colors)[i];
      out << ' ' << int(c.r) << ' ' << int(c.g) << ' ' << int(c.b);
    }
    out << '\n';
  }
}

void write_ply(std::ostream& out, const PointCloud& cloud) {
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  if (cloud.colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  write_xyz(out, cloud);
}

}  // namespace chronosite::geom
