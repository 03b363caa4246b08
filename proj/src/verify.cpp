#include "mpq/verify.hpp"

#include "mpq/error.hpp"
#include "mpq/format.hpp"
#include "mpq/green.hpp"
#include "mpq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mpq {

namespace {

constexpr std::uint64_t kPullbackSalt = 0x70756c6cULL;
constexpr std::uint64_t kHarmonicSalt = 0x6861726dULL;
constexpr std::uint64_t kDeckSalt = 0x6465636bULL;
constexpr std::uint64_t kCompositionSalt = 0x636f6d70ULL;

// Chord below which a random sphere point counts as sitting on the orbit.
constexpr double kOrbitExclusion = 1e-3;
constexpr std::size_t kMaxAttempts = 1'000'000;
// Above this many nontrivial elements the deck checks draw a random subset
// per sample instead of sweeping every element.
constexpr std::size_t kMaxSweep = 32;
constexpr double kJacobianStep = 1e-4;
constexpr double kLaplacianStep = 1e-2;

}  // namespace

VerificationReport make_report(std::string check, std::span<const double> residuals,
                               double tolerance, std::vector<SubCheck> details) {
  VerificationReport r;
  r.check = std::move(check);
  r.samples = residuals.size();
  r.tolerance = tolerance;
  double sum = 0.0;
  for (double v : residuals) {
    r.max_residual = std::max(r.max_residual, v);
    sum += v;
    // NaN never compares <= tolerance; make it fail loudly.
    if (std::isnan(v)) r.max_residual = std::numeric_limits<double>::infinity();
  }
  r.mean_residual = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
  r.details = std::move(details);
  r.pass = r.max_residual <= tolerance &&
           std::all_of(r.details.begin(), r.details.end(), [](const SubCheck& s) { return s.pass(); });
  return r;
}

std::string to_json(const VerificationReport& report) {
  std::string out = "{\"check\":" + json_quote(report.check) +
                    ",\"samples\":" + std::to_string(report.samples) +
                    ",\"max_residual\":" + format_real(report.max_residual) +
                    ",\"mean_residual\":" + format_real(report.mean_residual) +
                    ",\"tolerance\":" + format_real(report.tolerance) +
                    ",\"pass\":" + (report.pass ? "true" : "false");
  if (report.skipped) out += ",\"skipped\":true";
  if (!report.details.empty()) {
    out += ",\"details\":[";
    for (std::size_t i = 0; i < report.details.size(); ++i) {
      const auto& d = report.details[i];
      if (i) out += ',';
      out += "{\"name\":" + json_quote(d.name) + ",\"value\":" + format_real(d.value) +
             (d.lower_bound ? ",\"min\":" : ",\"max\":") + format_real(d.bound) +
             ",\"pass\":" + (d.pass() ? "true" : "false") + "}";
    }
    out += "]";
  }
  if (!report.info.empty()) {
    out += ",\"info\":{";
    for (std::size_t i = 0; i < report.info.size(); ++i) {
      if (i) out += ',';
      out += json_quote(report.info[i].first) + ":" + format_real(report.info[i].second);
    }
    out += "}";
  }
  return out + "}";
}

DeckMap::DeckMap(const MPData& mp, std::size_t element)
    : chart_(mp.chart), matrix_((*mp.group)[element]), element_(element) {}

ChartPoint DeckMap::operator()(const ChartPoint& x) const {
  return stereo_project(chart_, apply_isometry(matrix_, stereo_unproject(chart_, x)));
}

ChartPoint DeckMap::at_infinity() const {
  return stereo_project(chart_, apply_isometry(matrix_, chart_.base()));
}

Matrix DeckMap::jacobian(const ChartPoint& x, double h) const {
  const int n = x.dim();
  Matrix jac(n, n);
  for (int i = 0; i < n; ++i) {
    ChartPoint plus = x;
    ChartPoint minus = x;
    plus.coords[i] += h;
    minus.coords[i] -= h;
    jac.col(i) = ((*this)(plus).coords - (*this)(minus).coords) / (2.0 * h);
  }
  return jac;
}

SamplingDomain sampling_domain(const MPData& mp) {
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mp.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < mp.terms.size(); ++j) {
      closest = std::min(closest, distance(mp.terms[i].center, mp.terms[j].center));
    }
  }
  if (!std::isfinite(closest)) closest = 1.0;
  return SamplingDomain{0.05 * closest};
}

ChartPoint sample_chart_point(const MPData& mp, const SamplingDomain& domain, CounterRng& rng) {
  const int ambient = mp.n + 1;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const SpherePoint q = SpherePoint::normalized(rng.unit_vector(ambient));
    if (chord(q, mp.chart.base()) <= tol::pole) continue;
    ChartPoint x = stereo_project(mp.chart, q);
    if (x.coords.norm() >= domain.max_radius) continue;
    if (nearest_center_distance(mp, x) < domain.exclusion_radius) continue;
    return x;
  }
  throw std::runtime_error("sample_chart_point: sampling domain is empty");
}

namespace {

SpherePoint sample_off_orbit(const Orbit& orb, CounterRng& rng) {
  const int ambient = orb.base.ambient_dim();
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SpherePoint q = SpherePoint::normalized(rng.unit_vector(ambient));
    const bool near = std::any_of(orb.points.begin(), orb.points.end(), [&](const SpherePoint& pt) {
      return chord(q, pt) < kOrbitExclusion;
    });
    if (!near) return q;
  }
  throw std::runtime_error("sample_off_orbit: orbit neighbourhoods cover the sphere");
}

// Sum of (|q - p| / |q - gamma p|)^{n-2} in ascending order; equals
// G_{p,Gamma}(q) |q - p|^{n-2} with the identity term exactly 1.
double normalized_green(const Orbit& orb, int n, const SpherePoint& q) {
  const double to_base = chord(q, orb.base);
  std::vector<double> terms;
  terms.reserve(orb.size());
  for (const auto& pt : orb.points) terms.push_back(std::pow(to_base / chord(q, pt), n - 2));
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

Matrix hessian_u(const MPData& mp, const ChartPoint& x) {
  const int n = mp.n;
  Matrix h = Matrix::Zero(n, n);
  for (const auto& t : mp.terms) {
    const Vector r = x.coords - t.center.coords;
    const double d2 = r.squaredNorm();
    const double d = std::sqrt(d2);
    // d^2/dx_i dx_j of d^{2-n} = (2-n) d^{-n} (delta_ij - n r_i r_j / d^2)
    const double scale = t.mass * (2 - n) * std::pow(d, -n);
    h += scale * (Matrix::Identity(n, n) - (static_cast<double>(n) / d2) * (r * r.transpose()));
  }
  return h;
}

double fd_laplacian(const MPData& mp, const ChartPoint& x, double h) {
  // u - 1 carries all the variation; dropping the constant keeps rounding at
  // the level of the potential itself.
  const double center = mass_potential(mp, x);
  double sum = 0.0;
  for (int i = 0; i < mp.n; ++i) {
    ChartPoint plus = x;
    ChartPoint minus = x;
    plus.coords[i] += h;
    minus.coords[i] -= h;
    sum += mass_potential(mp, plus) - 2.0 * center + mass_potential(mp, minus);
  }
  return sum / (h * h);
}

std::vector<std::size_t> pick_elements(std::size_t order, CounterRng& rng) {
  std::vector<std::size_t> picked;
  if (order - 1 <= kMaxSweep) {
    for (std::size_t e = 1; e < order; ++e) picked.push_back(e);
  } else {
    for (std::size_t k = 0; k < kMaxSweep; ++k) picked.push_back(1 + rng.below(order - 1));
  }
  return picked;
}

double relative_gap(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

}  // namespace

VerificationReport check_pullback(const MPData& mp, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::BadParameters, "samples must be >= 1");
  const Orbit orb = orbit(*mp.group, mp.chart.base());
  std::vector<double> residuals(samples);
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed ^ kPullbackSalt, i);
    const SpherePoint q = sample_off_orbit(orb, rng);
    const double lhs = normalized_green(orb, mp.n, q);
    const double rhs = conformal_factor_u(mp, stereo_project(mp.chart, q));
    residuals[i] = std::abs(lhs - rhs) / rhs;
  });
  return make_report("pullback", residuals, verify_tol::pullback);
}

VerificationReport check_harmonic(const MPData& mp, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::BadParameters, "samples must be >= 1");
  const SamplingDomain domain = sampling_domain(mp);
  std::vector<double> residuals(samples);
  std::vector<double> coarse(samples);
  std::vector<double> fine(samples);
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed ^ kHarmonicSalt, i);
    const ChartPoint x = sample_chart_point(mp, domain, rng);
    const Matrix hess = hessian_u(mp, x);
    const double scale = hess.norm();
    residuals[i] = scale > 0.0 ? std::abs(hess.trace()) / scale : 0.0;
    if (!mp.terms.empty()) {
      const double h = kLaplacianStep * nearest_center_distance(mp, x);
      coarse[i] = std::abs(fd_laplacian(mp, x, h)) / scale;
      fine[i] = std::abs(fd_laplacian(mp, x, 0.5 * h)) / scale;
    }
  });
  std::vector<SubCheck> details;
  VerificationReport report;
  if (!mp.terms.empty()) {
    const double sum_coarse = std::accumulate(coarse.begin(), coarse.end(), 0.0);
    const double sum_fine = std::accumulate(fine.begin(), fine.end(), 0.0);
    const double order = std::log2(sum_coarse / sum_fine);
    details.push_back({"fd_order", order, verify_tol::fd_min_order, true});
    report = make_report("harmonic", residuals, verify_tol::harmonic, std::move(details));
    report.info.emplace_back("fd_laplacian_mean_coarse", sum_coarse / static_cast<double>(samples));
    report.info.emplace_back("fd_laplacian_mean_fine", sum_fine / static_cast<double>(samples));
  } else {
    report = make_report("harmonic", residuals, verify_tol::harmonic);
  }
  return report;
}

VerificationReport check_center_permutation(const MPData& mp) {
  const IsometryGroup& group = *mp.group;
  const std::size_t order = group.order();
  std::vector<double> residuals;
  for (std::size_t g = 1; g < order; ++g) {
    const DeckMap tau(mp, g);
    residuals.push_back(relative_gap(tau.at_infinity().coords, mp.center_of(g).coords));
    for (std::size_t b = 1; b < order; ++b) {
      const std::size_t gb = group.product(g, b);
      if (gb == 0) continue;  // tau_gamma sends c_{gamma^{-1}} to infinity
      residuals.push_back(relative_gap(tau(mp.center_of(b)).coords, mp.center_of(gb).coords));
    }
  }
  return make_report("center_permutation", residuals, verify_tol::center_permutation);
}

VerificationReport check_deck_composition(const MPData& mp, std::size_t samples,
                                          std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::BadParameters, "samples must be >= 1");
  const IsometryGroup& group = *mp.group;
  const SamplingDomain domain = sampling_domain(mp);
  std::vector<double> residuals(samples, 0.0);
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed ^ kCompositionSalt, i);
    const ChartPoint x = sample_chart_point(mp, domain, rng);
    const auto gammas = pick_elements(group.order(), rng);
    const auto betas = pick_elements(group.order(), rng);
    double worst = 0.0;
    for (std::size_t g : gammas) {
      const DeckMap tau_g(mp, g);
      for (std::size_t b : betas) {
        const ChartPoint composed = tau_g(DeckMap(mp, b)(x));
        const ChartPoint direct = DeckMap(mp, group.product(g, b))(x);
        worst = std::max(worst, relative_gap(composed.coords, direct.coords));
      }
    }
    residuals[i] = worst;
  });
  return make_report("deck_composition", residuals, verify_tol::deck_composition);
}

VerificationReport check_deck_isometry(const MPData& mp, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::BadParameters, "samples must be >= 1");
  if (mp.group->order() < 2) {
    VerificationReport skipped = make_report("deck_isometry", {}, verify_tol::deck_isometry);
    skipped.skipped = true;
    return skipped;
  }
  const SamplingDomain domain = sampling_domain(mp);
  const std::size_t order = mp.group->order();
  const double half_exponent = 0.5 * (mp.n - 2);
  std::vector<double> residuals(samples);
  std::vector<double> conformality(samples);
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed ^ kDeckSalt, i);
    const ChartPoint x = sample_chart_point(mp, domain, rng);
    const double ux = conformal_factor_u(mp, x);
    const double h = kJacobianStep * nearest_center_distance(mp, x);
    double worst = 0.0;
    double worst_conformal = 0.0;
    for (std::size_t g : pick_elements(order, rng)) {
      const DeckMap tau(mp, g);
      const Matrix jac = tau.jacobian(x, h);
      const Matrix gram = jac.transpose() * jac;
      const double mu2 = gram.trace() / mp.n;
      worst_conformal = std::max(
          worst_conformal, (gram - mu2 * Matrix::Identity(mp.n, mp.n)).cwiseAbs().maxCoeff() / mu2);
      const double mu = std::sqrt(mu2);
      const double uy = conformal_factor_u(mp, tau(x));
      worst = std::max(worst, std::abs(uy * std::pow(mu, half_exponent) - ux) / ux);
    }
    residuals[i] = worst;
    conformality[i] = worst_conformal;
  });
  const double max_conformal = *std::max_element(conformality.begin(), conformality.end());
  const VerificationReport centers = check_center_permutation(mp);
  const VerificationReport composition = check_deck_composition(mp, samples, seed);
  return make_report("deck_isometry", residuals, verify_tol::deck_isometry,
                     {{"jacobian_conformality", max_conformal, verify_tol::deck_isometry},
                      {"center_permutation", centers.max_residual, verify_tol::center_permutation},
                      {"composition", composition.max_residual, verify_tol::deck_composition}});
}

double extrapolate_to_zero(std::span<const double> abscissae, std::span<const double> values) {
  if (abscissae.size() != values.size() || abscissae.empty()) {
    throw Error(ErrorKind::BadParameters, "extrapolation needs matching, non-empty inputs");
  }
  std::vector<double> p(values.begin(), values.end());
  const std::size_t m = p.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double a = abscissae[i];
      const double b = abscissae[i + level];
      p[i] = (b * p[i] - a * p[i + 1]) / (b - a);
    }
  }
  return p[0];
}

std::vector<double> default_mass_radii() { return {0.2, 0.1, 0.05, 0.025, 0.0125}; }

VerificationReport check_mass_limit(const IsometryGroup& group, const SpherePoint& p,
                                    std::span<const double> radii) {
  if (radii.empty()) throw Error(ErrorKind::BadParameters, "need at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 1e-6) || radii[i] >= 2.0 || (i > 0 && radii[i] >= radii[i - 1])) {
      throw Error(ErrorKind::BadParameters, "radii must be decreasing and in (1e-6, 2)");
    }
  }
  const MPData mp = build_mp(group, p);
  const Orbit orb = orbit(group, p);
  const int n = mp.n;
  const Vector& base = p.coords();
  const Vector tangent = mp.chart.frame().col(0);

  std::vector<double> squares;
  std::vector<double> values;
  for (double r : radii) {
    const double t = 2.0 * std::asin(0.5 * r);
    double sum = 0.0;
    for (double side : {1.0, -1.0}) {
      const SpherePoint q =
          SpherePoint::normalized(std::cos(t) * base + side * std::sin(t) * tangent);
      sum += green_sphere(orb, n, q).value - green_kernel(p, q, n);
    }
    squares.push_back(r * r);
    values.push_back(0.5 * sum);
  }
  const double limit = extrapolate_to_zero(squares, values);
  const double expected = total_mass(mp);
  const std::vector<double> residual(radii.size(), std::abs(limit - expected));
  VerificationReport report = make_report("mass_limit", residual, verify_tol::mass_limit);
  report.info.emplace_back("limit", limit);
  report.info.emplace_back("total_mass", expected);
  return report;
}

}  // namespace mpq
