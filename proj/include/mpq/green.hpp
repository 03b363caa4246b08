#pragma once

#include "mpq/groups.hpp"
#include "mpq/sphere.hpp"

namespace mpq {

namespace tol {
inline constexpr double on_orbit = 1e-9;
inline constexpr double degenerate_triple = 1e-9;
}  // namespace tol

struct GreenEval {
  double value;
  /// Chord from the evaluation point to the closest orbit point.
  double nearest_chord;
};

/// Green function of the conformal Laplacian on S^n/Gamma, lifted to the
/// sphere and left unnormalized:
///
///   G_{p,Gamma}(q) = sum_gamma |q - gamma p|^{2-n}.
///
/// Terms are added in ascending order. Requires n >= 3; throws OnOrbit when q
/// is within tol::on_orbit of an orbit point.
GreenEval green_sphere(const Orbit& orbit, int n, const SpherePoint& q);

/// |q - p|^{2-n}, the trivial-group Green function with pole p.
double green_kernel(const SpherePoint& p, const SpherePoint& q, int n);

/// Residual of the stereographic transformation law of the Green function,
///
///   | |sigma_p(r) - sigma_p(q)|^{2-n} - (|q - p| |r - p| / |r - q|)^{n-2} |,
///
/// with n the sphere dimension of the chart. Throws DegenerateTriple when two
/// of p, q, r are closer than tol::degenerate_triple.
double green_transform_check(const Chart& chart, const SpherePoint& q, const SpherePoint& r);

/// Same residual for the exponent-one form of the inversion distance law
/// (dimension independent).
double distance_identity_residual(const Chart& chart, const SpherePoint& q, const SpherePoint& r);

}  // namespace mpq
