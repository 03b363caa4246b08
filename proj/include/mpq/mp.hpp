#pragma once

#include "mpq/groups.hpp"
#include "mpq/sphere.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mpq {

namespace tol {
/// Exclusion radius around centers, in chart units.
inline constexpr double singularity = 1e-9;
}  // namespace tol

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 8;

/// One black hole of the multi-center metric: m / |x - center|^{n-2}.
struct MPTerm {
  double mass;
  ChartPoint center;
  /// Index of gamma in the group's element list.
  std::size_t element;
};

/// Multi-center data for the stereographic picture of S^n/Gamma from p.
///
/// terms[i] belongs to group element i + 1 (the identity has no term), with
///   mass   = 1 / |p - gamma p|^{n-2}
///   center = sigma_p(gamma p).
struct MPData {
  int n = 0;
  std::vector<MPTerm> terms;
  Chart chart;
  std::shared_ptr<const IsometryGroup> group;

  /// center of the term for element index e (e >= 1).
  const ChartPoint& center_of(std::size_t element) const { return terms.at(element - 1).center; }
};

/// Metric components at a point of the chart; always scale * identity.
struct MetricTensor {
  Matrix entries;

  double scale() const { return entries(0, 0); }
};

/// Throws DimensionTooSmall for n < 3, BadParameters for n > kMaxDim, and
/// SingularBasePoint if Gamma does not move p.
MPData build_mp(std::shared_ptr<const IsometryGroup> group, const SpherePoint& p);
MPData build_mp(const IsometryGroup& group, const SpherePoint& p);

/// Distance from x to the closest center (infinity when there are none).
double nearest_center_distance(const MPData& mp, const ChartPoint& x);

/// sum_gamma m_gamma / |x - c_gamma|^{n-2}, i.e. u - 1. Throws AtSingularity
/// within tol::singularity of a center.
double mass_potential(const MPData& mp, const ChartPoint& x);

/// u(x) = 1 + sum_gamma m_gamma / |x - c_gamma|^{n-2}.
double conformal_factor_u(const MPData& mp, const ChartPoint& x);

/// u(x)^{4/(n-2)} * identity.
MetricTensor metric_at(const MPData& mp, const ChartPoint& x);

double total_mass(const MPData& mp);

/// {"n":..,"chart":{"base":[..],"frame":[[..]]},"terms":[{"mass":..,"center":[..]}],"total_mass":..}
/// Reals use 17 significant digits; field order is fixed. frame lists the
/// frame vectors, one per row.
std::string to_json(const MPData& mp);

}  // namespace mpq
