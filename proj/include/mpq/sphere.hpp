#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace mpq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double unit_norm = 1e-12;
inline constexpr double orthogonality = 1e-10;
inline constexpr double pole = 1e-9;
}  // namespace tol

/// A point of the round sphere S^n, stored as a unit vector of R^{n+1}.
class SpherePoint {
 public:
  /// Throws InvalidPoint unless |coords| = 1 within tol::unit_norm.
  explicit SpherePoint(Vector coords);

  /// Rescales a nonzero vector onto the sphere.
  static SpherePoint normalized(const Vector& v);
  static SpherePoint basis(int ambient_dim, int index);

  const Vector& coords() const noexcept { return coords_; }
  int sphere_dim() const noexcept { return static_cast<int>(coords_.size()) - 1; }
  int ambient_dim() const noexcept { return static_cast<int>(coords_.size()); }

 private:
  struct Trusted {};
  SpherePoint(Vector coords, Trusted) : coords_(std::move(coords)) {}
  Vector coords_;
};

/// Chordal distance |a - b| in the ambient space.
double chord(const SpherePoint& a, const SpherePoint& b);
double chord(const Vector& a, const Vector& b);

/// An orthogonal (n+1)x(n+1) matrix acting linearly on S^n.
class OrthMatrix {
 public:
  /// Throws NotOrthogonal unless M^T M = I entrywise within tol::orthogonality.
  explicit OrthMatrix(Matrix entries);

  static OrthMatrix identity(int ambient_dim);

  const Matrix& entries() const noexcept { return entries_; }
  int ambient_dim() const noexcept { return static_cast<int>(entries_.rows()); }

  OrthMatrix operator*(const OrthMatrix& rhs) const;
  OrthMatrix transpose() const;

  /// Max entrywise |a - b|.
  static double distance(const OrthMatrix& a, const OrthMatrix& b);

 private:
  struct Trusted {};
  OrthMatrix(Matrix entries, Trusted) : entries_(std::move(entries)) {}
  Matrix entries_;
};

SpherePoint apply_isometry(const OrthMatrix& m, const SpherePoint& q);

/// Coordinates on the image plane <x, p> = 1/2 of the stereographic chart.
struct ChartPoint {
  Vector coords;

  int dim() const noexcept { return static_cast<int>(coords.size()); }
};

double distance(const ChartPoint& a, const ChartPoint& b);

/// Stereographic chart centred at a pole p.
///
/// The projection is the unit inversion X = p + (q - p)/|q - p|^2, whose
/// image is the affine plane <X, p> = 1/2. Chart coordinates are read in an
/// orthonormal frame of p^perp relative to the plane point p/2, so the
/// antipode -p lands on the origin and
///
///   |sigma(r) - sigma(q)| = |r - q| / (|q - p| |r - p|)
///
/// holds with no extra scale factor.
class Chart {
 public:
  /// Builds the frame deterministically: repeatedly take the standard basis
  /// vector with the largest residual against the current span, then
  /// orthonormalize (two Gram-Schmidt passes).
  explicit Chart(SpherePoint base);

  /// Explicit frame; throws BadParameters if it is not an orthonormal basis
  /// of base^perp within tol::unit_norm.
  Chart(SpherePoint base, Matrix frame);

  const SpherePoint& base() const noexcept { return base_; }
  /// Columns are the frame vectors.
  const Matrix& frame() const noexcept { return frame_; }
  int dim() const noexcept { return base_.sphere_dim(); }

  /// Ambient point of the image plane with the given chart coordinates.
  Vector plane_point(const ChartPoint& x) const;

 private:
  SpherePoint base_;
  Matrix frame_;
};

/// Throws PoleProjection if |q - p| <= tol::pole.
ChartPoint stereo_project(const Chart& chart, const SpherePoint& q);

SpherePoint stereo_unproject(const Chart& chart, const ChartPoint& x);

/// lambda(x) = 1/(1/4 + |x|^2): the inverse chart pulls the round metric back
/// to lambda^2 times the flat one, and lambda(x) = |stereo_unproject(x) - p|^2.
double conformal_factor_inverse(const ChartPoint& x);

}  // namespace mpq
