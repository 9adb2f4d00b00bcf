#include "chronosite/geom/kd_tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "chronosite/errors.hpp"

namespace chronosite::geom {

KdTree::KdTree(std::span<const Point> points)
    : points_(points.begin(), points.end()), order_(points.size()), split_axis_(points.size(), 0) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  build(0, order_.size());
  slots_.reserve(order_.size());
  for (std::size_t idx : order_) slots_.push_back(points_[idx]);
}

void KdTree::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) return;

  Point min = points_[order_[lo]];
  Point max = min;
  for (std::size_t i = lo; i < hi; ++i) {
    min = min.cwiseMin(points_[order_[i]]);
    max = max.cwiseMax(points_[order_[i]]);
  }
  Eigen::Index axis = 0;
  (max - min).maxCoeff(&axis);

  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                     const double ca = points_[a](axis);
                     const double cb = points_[b](axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  split_axis_[mid] = static_cast<std::uint8_t>(axis);
  build(lo, mid);
  build(mid + 1, hi);
}

void KdTree::consider(std::size_t slot, const Point& q, Neighbor& best) const {
  const double d = (slots_[slot] - q).squaredNorm();
  if (d < best.squared_distance || (d == best.squared_distance && order_[slot] < best.index)) {
    best = {order_[slot], d};
  }
}

void KdTree::search(std::size_t lo, std::size_t hi, const Point& q, Neighbor& best) const {
  if (hi - lo <= kLeafSize) {
    for (std::size_t i = lo; i < hi; ++i) consider(i, q, best);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const int axis = split_axis_[mid];
  const double delta = q(axis) - slots_[mid](axis);

  consider(mid, q, best);
  if (delta < 0.0) {
    search(lo, mid, q, best);
    if (delta * delta <= best.squared_distance) search(mid + 1, hi, q, best);
  } else {
    search(mid + 1, hi, q, best);
    if (delta * delta <= best.squared_distance) search(lo, mid, q, best);
  }
}

Neighbor KdTree::nearest(const Point& query) const {
  if (points_.empty()) throw DegenerateCloud("nearest-neighbor query on an empty tree");
  Neighbor best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, order_.size(), query, best);
  return best;
}

Neighbor KdTree::nearest(const Point& query, std::size_t hint) const {
  if (hint >= points_.size()) return nearest(query);
  Neighbor best{hint, (points_[hint] - query).squaredNorm()};
  search(0, order_.size(), query, best);
  return best;
}

}  // namespace chronosite::geom
