#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chronosite/geom/point_cloud.hpp"

namespace chronosite::geom {

struct Neighbor {
  std::size_t index = 0;
  double squared_distance = 0.0;
};

// Static 3-d tree over a copy of the input points. Queries are const and
// safe to run concurrently. Equidistant candidates resolve to the lowest
// point index, so results do not depend on tree layout.
class KdTree {
 public:
  explicit KdTree(std::span<const Point> points);

  std::size_t size() const { return points_.size(); }

  // Requires a non-empty tree.
  Neighbor nearest(const Point& query) const;
  // Same result, starting from the distance to point `hint` as the bound.
  Neighbor nearest(const Point& query, std::size_t hint) const;

 private:
  static constexpr std::size_t kLeafSize = 8;

  void build(std::size_t lo, std::size_t hi);
  void search(std::size_t lo, std::size_t hi, const Point& q, Neighbor& best) const;
  void consider(std::size_t slot, const Point& q, Neighbor& best) const;

  std::vector<Point> points_;
  std::vector<std::size_t> order_;       // permutation of point indices
  std::vector<Point> slots_;             // points_ in slot order
  std::vector<std::uint8_t> split_axis_;  // per implicit node, indexed by its mid slot
};

}  // namespace chronosite::geom
