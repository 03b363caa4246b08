#pragma once

#include "mpq/groups.hpp"
#include "mpq/mp.hpp"
#include "mpq/random.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mpq {

namespace verify_tol {
inline constexpr double pullback = 1e-10;
inline constexpr double harmonic = 1e-9;
inline constexpr double fd_min_order = 1.8;
inline constexpr double deck_isometry = 1e-7;
inline constexpr double center_permutation = 1e-10;
inline constexpr double deck_composition = 1e-10;
inline constexpr double mass_limit = 1e-6;
}  // namespace verify_tol

/// Extra pass/fail criterion attached to a report. A lower bound passes when
/// value >= bound, an upper bound when value <= bound.
struct SubCheck {
  std::string name;
  double value;
  double bound;
  bool lower_bound = false;

  bool pass() const { return lower_bound ? value >= bound : value <= bound; }
};

struct VerificationReport {
  std::string check;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;
  std::vector<SubCheck> details;
  std::vector<std::pair<std::string, double>> info;
};

/// Max and mean of the residuals (mean summed in index order); pass iff
/// max <= tolerance and every detail passes.
VerificationReport make_report(std::string check, std::span<const double> residuals,
                               double tolerance, std::vector<SubCheck> details = {});

/// {"check":..,"samples":..,"max_residual":..,"mean_residual":..,"tolerance":..,"pass":..}
/// followed by "skipped", "details" and "info" when present.
std::string to_json(const VerificationReport& report);

/// tau_gamma = sigma_p o gamma o sigma_p^{-1}, the action of gamma on the chart.
class DeckMap {
 public:
  DeckMap(const MPData& mp, std::size_t element);

  std::size_t element() const noexcept { return element_; }

  /// Throws PoleProjection at the preimage of the pole (the center of gamma^{-1}).
  ChartPoint operator()(const ChartPoint& x) const;
  /// Image of the point at infinity, i.e. the center of gamma.
  ChartPoint at_infinity() const;
  /// Central-difference Jacobian with step h.
  Matrix jacobian(const ChartPoint& x, double h) const;

 private:
  Chart chart_;
  OrthMatrix matrix_;
  std::size_t element_;
};

/// Rejection-sampling domain for chart points: balls of radius
/// 0.05 * (closest center pair distance) around the centers, plus |x| < 1e3.
/// With a single center the pair distance is replaced by 1.
struct SamplingDomain {
  double exclusion_radius;
  double max_radius = 1e3;
};

SamplingDomain sampling_domain(const MPData& mp);

/// Uniform sphere point pushed through the chart, rejected until it lies in
/// the domain.
ChartPoint sample_chart_point(const MPData& mp, const SamplingDomain& domain, CounterRng& rng);

/// G_{p,Gamma}(q) |q - p|^{n-2} against u(sigma_p(q)) at random sphere points,
/// relative residual, tolerance 1e-10.
VerificationReport check_pullback(const MPData& mp, std::size_t samples, std::uint64_t seed);

/// Exact Hessian of u: residual |trace| / |Hessian|_F, tolerance 1e-9. Also
/// estimates the convergence order of the central-difference Laplacian under
/// step halving (detail "fd_order", must be >= 1.8).
VerificationReport check_harmonic(const MPData& mp, std::size_t samples, std::uint64_t seed);

/// Relative residual |u(tau x) mu^{(n-2)/2} - u(x)| / u(x) with mu the
/// conformal stretch of the finite-difference Jacobian. Details cover
/// conformality of the Jacobian, center permutation and composition.
/// Skipped for the trivial group.
VerificationReport check_deck_isometry(const MPData& mp, std::size_t samples, std::uint64_t seed);

/// tau_gamma(c_beta) = c_{gamma beta}, relative to max(1, |c_{gamma beta}|).
VerificationReport check_center_permutation(const MPData& mp);

/// tau_gamma(tau_beta(x)) = tau_{gamma beta}(x) at random x.
VerificationReport check_deck_composition(const MPData& mp, std::size_t samples, std::uint64_t seed);

/// Value at zero of the interpolating polynomial through (abscissae, values),
/// by Neville's scheme.
double extrapolate_to_zero(std::span<const double> abscissae, std::span<const double> values);

/// Chordal radii used when none are given.
std::vector<double> default_mass_radii();

/// Approaches p along a geodesic from both sides, averages
/// G_{p,Gamma}(q) - |q - p|^{2-n} over the two sides and extrapolates in r^2
/// to r = 0; residual against total_mass, tolerance 1e-6.
VerificationReport check_mass_limit(const IsometryGroup& group, const SpherePoint& p,
                                    std::span<const double> radii);

}  // namespace mpq
