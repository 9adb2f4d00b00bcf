#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chronosite/geom/point_cloud.hpp"
#include "chronosite/geom/rigid_transform.hpp"

namespace chronosite::geom {

struct IcpParams {
  std::size_t max_iterations = 50;
  double convergence_tol_m = 1e-6;
  // Fraction of worst correspondences dropped every iteration, in [0, 1).
  double trim_fraction = 0.1;
  bool estimate_scale = false;
  // Distance under which a final correspondence counts as an inlier.
  double inlier_threshold_m = 0.75;
  std::optional<RigidTransform> initial;

  friend bool operator==(const IcpParams&, const IcpParams&) = default;
};

struct RegistrationResult {
  RigidTransform transform;       // maps source into the target frame
  double rms_residual = 0.0;      // over the kept correspondences
  double max_residual = 0.0;      // over the kept correspondences
  double inlier_fraction = 0.0;   // of all source points, at inlier_threshold_m
  std::size_t iterations = 0;
  bool converged = false;
  // Trimmed RMS after each accepted iteration; non-increasing.
  std::vector<double> objective_history;
};

// Trimmed point-to-point ICP. Each iteration pairs every transformed source
// point with its nearest target point, keeps the (1 - trim_fraction)
// closest pairs and solves the closed-form least-squares update on them.
// Converged when the trimmed RMS changes by less than convergence_tol_m
// between successive iterations. Running out of iterations is not an error:
// the best transform so far is returned with converged = false.
// Throws DegenerateCloud for inputs with fewer than 3 non-collinear points.
RegistrationResult register_icp(const PointCloud& source, const PointCloud& target, const IcpParams& params = {});

struct ResidualReport {
  double rms = 0.0;
  double max = 0.0;
  double inlier_fraction = 0.0;
  double inlier_threshold_m = 0.0;
  std::size_t point_count = 0;
};

// Distances from every transformed source point to its nearest target point.
// An estimate of the alignment's margin of error, not a ground-truth error.
ResidualReport residual_report(const PointCloud& source, const PointCloud& target, const RigidTransform& t,
                               double inlier_threshold_m);

}  // namespace chronosite::geom
