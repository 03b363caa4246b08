#include "mpq/green.hpp"

#include "mpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mpq {

GreenEval green_sphere(const Orbit& orbit, int n, const SpherePoint& q) {
  if (n < 3) throw Error(ErrorKind::DimensionTooSmall, "Green function needs n >= 3");
  if (q.sphere_dim() != n || orbit.base.sphere_dim() != n) {
    throw Error(ErrorKind::BadParameters, "dimension mismatch in green_sphere");
  }
  std::vector<double> terms;
  terms.reserve(orbit.size());
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& pt : orbit.points) {
    const double c = chord(q, pt);
    if (c <= tol::on_orbit) {
      throw Error(ErrorKind::OnOrbit, "evaluation point lies on the orbit");
    }
    nearest = std::min(nearest, c);
    terms.push_back(std::pow(c, 2 - n));
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return {sum, nearest};
}

double green_kernel(const SpherePoint& p, const SpherePoint& q, int n) {
  return std::pow(chord(p, q), 2 - n);
}

namespace {

void require_distinct(const SpherePoint& p, const SpherePoint& q, const SpherePoint& r) {
  if (chord(p, q) <= tol::degenerate_triple || chord(p, r) <= tol::degenerate_triple ||
      chord(q, r) <= tol::degenerate_triple) {
    throw Error(ErrorKind::DegenerateTriple, "points p, q, r must be pairwise distinct");
  }
}

}  // namespace

double distance_identity_residual(const Chart& chart, const SpherePoint& q, const SpherePoint& r) {
  const SpherePoint& p = chart.base();
  require_distinct(p, q, r);
  const double lhs = 1.0 / distance(stereo_project(chart, r), stereo_project(chart, q));
  const double rhs = chord(q, p) * chord(r, p) / chord(r, q);
  return std::abs(lhs - rhs);
}

double green_transform_check(const Chart& chart, const SpherePoint& q, const SpherePoint& r) {
  const SpherePoint& p = chart.base();
  require_distinct(p, q, r);
  const int n = chart.dim();
  const double lhs =
      std::pow(distance(stereo_project(chart, r), stereo_project(chart, q)), 2 - n);
  const double rhs = std::pow(chord(q, p) * chord(r, p) / chord(r, q), n - 2);
  return std::abs(lhs - rhs);
}

}  // namespace mpq
