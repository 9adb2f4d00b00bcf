#include "chronosite/geom/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chronosite/errors.hpp"
#include "chronosite/geom/kd_tree.hpp"

namespace chronosite::geom {

namespace {

struct Correspondence {
  std::size_t source = 0;
  std::size_t target = 0;
  double squared_distance = 0.0;
};

// Nearest-neighbor pairing of `source` under transform `t`, trimmed to the
// `keep` closest pairs. Kept pairs come back in source-index order so the
// least-squares accumulation order is fixed.
struct Evaluation {
  std::vector<Correspondence> all;
  std::vector<Correspondence> kept;
  double rms = 0.0;
  double max = 0.0;
};

// `previous` (if non-empty) seeds each search with the last pairing.
Evaluation evaluate(const PointCloud& source, const KdTree& tree, const RigidTransform& t, std::size_t keep,
                    const std::vector<Correspondence>& previous) {
  Evaluation ev;
  ev.all.resize(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Point q = t.apply(source.points[i]);
    const Neighbor nn = previous.empty() ? tree.nearest(q) : tree.nearest(q, previous[i].target);
    ev.all[i] = {i, nn.index, nn.squared_distance};
  }

  ev.kept = ev.all;
  if (keep < ev.kept.size()) {
    auto closer = [](const Correspondence& a, const Correspondence& b) {
      return a.squared_distance < b.squared_distance ||
             (a.squared_distance == b.squared_distance && a.source < b.source);
    };
    std::nth_element(ev.kept.begin(), ev.kept.begin() + static_cast<std::ptrdiff_t>(keep), ev.kept.end(), closer);
    ev.kept.resize(keep);
    std::sort(ev.kept.begin(), ev.kept.end(),
              [](const Correspondence& a, const Correspondence& b) { return a.source < b.source; });
  }

  double sum = 0.0;
  double worst = 0.0;
  for (const Correspondence& c : ev.kept) {
    sum += c.squared_distance;
    worst = std::max(worst, c.squared_distance);
  }
  ev.rms = std::sqrt(sum / static_cast<double>(ev.kept.size()));
  ev.max = std::sqrt(worst);
  return ev;
}

void check_params(const IcpParams& params) {
  if (!(params.trim_fraction >= 0.0 && params.trim_fraction < 1.0)) {
    throw Error("trim_fraction must lie in [0, 1)");
  }
  if (!(params.convergence_tol_m >= 0.0)) throw Error("convergence tolerance must be non-negative");
  if (params.initial && !params.initial->is_valid()) throw InvalidTransform("initial transform is not valid");
}

}  // namespace

RegistrationResult register_icp(const PointCloud& source, const PointCloud& target, const IcpParams& params) {
  check_params(params);
  if (source.points.size() < 3) throw DegenerateCloud("source has fewer than 3 points");
  if (target.points.size() < 3) throw DegenerateCloud("target has fewer than 3 points");
  validate(source);
  validate(target);
  require_non_collinear(source.points, "source");
  require_non_collinear(target.points, "target");

  const std::size_t n = source.size();
  const auto dropped = static_cast<std::size_t>(std::floor(params.trim_fraction * static_cast<double>(n)));
  const std::size_t keep = std::max<std::size_t>(3, n - dropped);

  const KdTree tree(target.points);
  std::vector<Point> src_kept;
  std::vector<Point> tgt_kept;

  RegistrationResult result;
  RigidTransform current = params.initial.value_or(RigidTransform::identity());
  Evaluation accepted = evaluate(source, tree, current, keep, {});
  result.objective_history.push_back(accepted.rms);

  while (true) {
    if (result.iterations >= params.max_iterations) break;

    src_kept.clear();
    tgt_kept.clear();
    for (const Correspondence& c : accepted.kept) {
      src_kept.push_back(current.apply(source.points[c.source]));
      tgt_kept.push_back(target.points[c.target]);
    }
    const RigidTransform step = estimate_transform(src_kept, tgt_kept, params.estimate_scale);
    const RigidTransform candidate = step.compose(current);
    Evaluation next = evaluate(source, tree, candidate, keep, accepted.all);
    ++result.iterations;

    if (next.rms > accepted.rms) {
      // Only reachable through rounding once the optimum is reached; keep
      // the better transform so the objective sequence stays monotone.
      result.converged = next.rms - accepted.rms < params.convergence_tol_m;
      break;
    }
    const double change = accepted.rms - next.rms;
    current = candidate;
    accepted = std::move(next);
    result.objective_history.push_back(accepted.rms);
    if (change < params.convergence_tol_m) {
      result.converged = true;
      break;
    }
  }

  result.transform = current;
  result.rms_residual = accepted.rms;
  result.max_residual = accepted.max;
  const double threshold2 = params.inlier_threshold_m * params.inlier_threshold_m;
  const auto inliers = std::count_if(accepted.all.begin(), accepted.all.end(),
                                     [&](const Correspondence& c) { return c.squared_distance <= threshold2; });
  result.inlier_fraction = static_cast<double>(inliers) / static_cast<double>(n);
  return result;
}

ResidualReport residual_report(const PointCloud& source, const PointCloud& target, const RigidTransform& t,
                               double inlier_threshold_m) {
  if (source.points.empty() || target.points.empty()) throw DegenerateCloud("residual report on an empty cloud");
  if (!t.is_valid()) throw InvalidTransform("rotation is not orthonormal or scale is not positive");

  const KdTree tree(target.points);
  ResidualReport report;
  report.inlier_threshold_m = inlier_threshold_m;
  report.point_count = source.size();
  double sum = 0.0;
  double worst = 0.0;
  std::size_t inliers = 0;
  for (const Point& p : source.points) {
    const double d2 = tree.nearest(t.apply(p)).squared_distance;
    sum += d2;
    worst = std::max(worst, d2);
    if (std::sqrt(d2) <= inlier_threshold_m) ++inliers;
  }
  report.rms = std::sqrt(sum / static_cast<double>(source.size()));
  report.max = std::sqrt(worst);
  report.inlier_fraction = static_cast<double>(inliers) / static_cast<double>(source.size());
  return report;
}

}  // namespace chronosite::geom
