#pragma once

#include <span>

#include <Eigen/Core>

#include "chronosite/geom/point_cloud.hpp"

namespace chronosite::geom {

// p -> scale * (rotation * p) + translation. Rigid when scale == 1.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double scale = 1.0;

  static RigidTransform identity() { return {}; }

  Point apply(const Point& p) const { return scale * (rotation * p) + translation; }

  // Rotation orthonormal and proper within `tol`, scale finite and positive.
  bool is_valid(double tol = 1e-9) const;

  RigidTransform inverse() const;

  // (*this) after `first`: x -> this(first(x)).
  RigidTransform compose(const RigidTransform& first) const;

  // Angle of the rotation in radians.
  double rotation_angle() const;

  friend bool operator==(const RigidTransform& a, const RigidTransform& b) {
    return a.rotation == b.rotation && a.translation == b.translation && a.scale == b.scale;
  }
};

// Rotation by `angle` radians about `axis` (normalized internally).
Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle);

// Nearest proper rotation (SVD projection onto SO(3)).
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m);

// Throws InvalidTransform if `t` fails is_valid().
PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t);

// Closed-form least-squares transform mapping source[i] onto target[i]
// (orthogonal Procrustes via SVD, reflection-corrected). With
// `estimate_scale` the uniform scale is solved as well (Umeyama).
// Throws DegenerateCloud for fewer than 3 pairs or a rank < 2 cross-covariance.
RigidTransform estimate_transform(std::span<const Point> source, std::span<const Point> target,
                                  bool estimate_scale = false);

// Throws DegenerateCloud if the points span less than a plane.
void require_non_collinear(std::span<const Point> points, const char* what);

}  // namespace chronosite::geom
