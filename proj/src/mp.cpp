#include "mpq/mp.hpp"

#include "mpq/error.hpp"
#include "mpq/format.hpp"

#include <cmath>
#include <limits>

namespace mpq {

MPData build_mp(std::shared_ptr<const IsometryGroup> group, const SpherePoint& p) {
  if (!group) throw Error(ErrorKind::BadParameters, "null group");
  const int n = group->dim();
  if (n < kMinDim) {
    throw Error(ErrorKind::DimensionTooSmall,
                "conformal exponent 4/(n-2) needs n >= 3, got n = " + std::to_string(n));
  }
  if (n > kMaxDim) {
    throw Error(ErrorKind::BadParameters, "dimensions above " + std::to_string(kMaxDim) +
                                              " are not supported");
  }
  const Orbit orb = orbit(*group, p);
  Chart chart(p);
  std::vector<MPTerm> terms;
  terms.reserve(orb.size() - 1);
  // Freeness at p keeps the orbit points pairwise apart, so the centers are
  // pairwise distinct and finite.
  for (std::size_t i = 1; i < orb.size(); ++i) {
    terms.push_back({std::pow(orb.chords[i], 2 - n), stereo_project(chart, orb.points[i]), i});
  }
  return MPData{n, std::move(terms), std::move(chart), std::move(group)};
}

MPData build_mp(const IsometryGroup& group, const SpherePoint& p) {
  return build_mp(std::make_shared<const IsometryGroup>(group), p);
}

double nearest_center_distance(const MPData& mp, const ChartPoint& x) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& t : mp.terms) nearest = std::min(nearest, distance(x, t.center));
  return nearest;
}

double mass_potential(const MPData& mp, const ChartPoint& x) {
  if (x.dim() != mp.n) throw Error(ErrorKind::BadParameters, "chart point has the wrong dimension");
  double sum = 0.0;
  for (const auto& t : mp.terms) {
    const double d = distance(x, t.center);
    if (d <= tol::singularity) {
      throw Error(ErrorKind::AtSingularity, "point is at a center of the metric");
    }
    sum += t.mass * std::pow(d, 2 - mp.n);
  }
  return sum;
}

double conformal_factor_u(const MPData& mp, const ChartPoint& x) {
  return 1.0 + mass_potential(mp, x);
}

MetricTensor metric_at(const MPData& mp, const ChartPoint& x) {
  const double s = std::pow(conformal_factor_u(mp, x), 4.0 / (mp.n - 2));
  return MetricTensor{s * Matrix::Identity(mp.n, mp.n)};
}

double total_mass(const MPData& mp) {
  double sum = 0.0;
  for (const auto& t : mp.terms) sum += t.mass;
  return sum;
}

namespace {

std::string vec_json(const Vector& v) {
  return format_array(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

}  // namespace

std::string to_json(const MPData& mp) {
  std::string out = "{\"n\":" + std::to_string(mp.n) + ",\"chart\":{\"base\":" +
                    vec_json(mp.chart.base().coords()) + ",\"frame\":[";
  for (int k = 0; k < mp.chart.frame().cols(); ++k) {
    if (k) out += ',';
    out += vec_json(mp.chart.frame().col(k));
  }
  out += "]},\"terms\":[";
  for (std::size_t i = 0; i < mp.terms.size(); ++i) {
    if (i) out += ',';
    out += "{\"mass\":" + format_real(mp.terms[i].mass) +
           ",\"center\":" + vec_json(mp.terms[i].center.coords) + "}";
  }
  out += "],\"total_mass\":" + format_real(total_mass(mp)) + "}";
  return out;
}

}  // namespace mpq
