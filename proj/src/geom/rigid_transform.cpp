#include "chronosite/geom/rigid_transform.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "chronosite/errors.hpp"

namespace chronosite::geom {

bool RigidTransform::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  if (!std::isfinite(scale) || !(scale > 0.0)) return false;
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.scale = 1.0 / scale;
  inv.translation = -(inv.scale * (inv.rotation * translation));
  return inv;
}

RigidTransform RigidTransform::compose(const RigidTransform& first) const {
  RigidTransform out;
  out.rotation = orthonormalize(rotation * first.rotation);
  out.scale = scale * first.scale;
  out.translation = scale * (rotation * first.translation) + translation;
  return out;
}

double RigidTransform::rotation_angle() const {
  const Eigen::Matrix3d skew = rotation - rotation.transpose();
  const double sin_part = 0.5 * Eigen::Vector3d(skew(2, 1), skew(0, 2), skew(1, 0)).norm();
  const double cos_part = 0.5 * (rotation.trace() - 1.0);
  return std::atan2(sin_part, cos_part);
}

Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t) {
  if (!t.is_valid()) throw InvalidTransform("rotation is not orthonormal or scale is not positive");
  PointCloud out = cloud;
  for (Point& p : out.points) p = t.apply(p);
  return out;
}

void require_non_collinear(std::span<const Point> points, const char* what) {
  if (points.size() < 3) {
    throw DegenerateCloud(std::string(what) + " has fewer than 3 points");
  }
  Point mean = Point::Zero();
  for (const Point& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Point& p : points) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d ev = eig.eigenvalues();  // ascending
  if (!(ev(2) > 0.0) || ev(1) <= 1e-12 * ev(2)) {
    throw DegenerateCloud(std::string(what) + " is collinear");
  }
}

RigidTransform estimate_transform(std::span<const Point> source, std::span<const Point> target,
                                  bool estimate_scale) {
  if (source.size() != target.size()) throw DegenerateCloud("correspondence sets differ in size");
  const std::size_t n = source.size();
  if (n < 3) throw DegenerateCloud("fewer than 3 correspondences");

  Point mean_s = Point::Zero();
  Point mean_t = Point::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mean_s += source[i];
    mean_t += target[i];
  }
  mean_s /= static_cast<double>(n);
  mean_t /= static_cast<double>(n);

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  double source_var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point ds = source[i] - mean_s;
    cross += (target[i] - mean_t) * ds.transpose();
    source_var += ds.squaredNorm();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) <= 1e-12 * sv(0)) {
    throw DegenerateCloud("correspondence set is rank-deficient");
  }

  Eigen::Vector3d sign = Eigen::Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) sign(2) = -1.0;

  RigidTransform t;
  t.rotation = svd.matrixU() * sign.asDiagonal() * svd.matrixV().transpose();
  t.scale = estimate_scale ? sv.dot(sign) / source_var : 1.0;
  if (!(t.scale > 0.0)) throw DegenerateCloud("estimated scale is not positive");
  t.translation = mean_t - t.scale * (t.rotation * mean_s);
  return t;
}

}  // namespace chronosite::geom
