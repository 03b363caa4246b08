#include "mpq/sphere.hpp"

#include "mpq/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace mpq {

SpherePoint::SpherePoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw Error(ErrorKind::InvalidPoint, "sphere point needs at least two coordinates");
  }
  if (!coords_.allFinite() || std::abs(coords_.norm() - 1.0) > tol::unit_norm) {
    throw Error(ErrorKind::InvalidPoint, "point is not a unit vector");
  }
}

SpherePoint SpherePoint::normalized(const Vector& v) {
  const double norm = v.norm();
  if (v.size() < 2 || !std::isfinite(norm) || norm == 0.0) {
    throw Error(ErrorKind::InvalidPoint, "cannot normalize a zero or non-finite vector");
  }
  return SpherePoint(v / norm, Trusted{});
}

SpherePoint SpherePoint::basis(int ambient_dim, int index) {
  if (index < 0 || index >= ambient_dim) {
    throw Error(ErrorKind::InvalidPoint, "basis index out of range");
  }
  Vector e = Vector::Zero(ambient_dim);
  e[index] = 1.0;
  return SpherePoint(std::move(e), Trusted{});
}

double chord(const Vector& a, const Vector& b) { return (a - b).norm(); }

double chord(const SpherePoint& a, const SpherePoint& b) {
  return chord(a.coords(), b.coords());
}

OrthMatrix::OrthMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
    throw Error(ErrorKind::NotOrthogonal, "matrix must be square of size >= 2");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorKind::NotOrthogonal, "matrix has non-finite entries");
  }
  const Matrix gram = entries_.transpose() * entries_;
  const double defect =
      (gram - Matrix::Identity(entries_.rows(), entries_.cols())).cwiseAbs().maxCoeff();
  if (defect > tol::orthogonality) {
    throw Error(ErrorKind::NotOrthogonal,
                "max |M^T M - I| = " + std::to_string(defect));
  }
}

OrthMatrix OrthMatrix::identity(int ambient_dim) {
  return OrthMatrix(Matrix::Identity(ambient_dim, ambient_dim), Trusted{});
}

OrthMatrix OrthMatrix::operator*(const OrthMatrix& rhs) const {
  return OrthMatrix(entries_ * rhs.entries_, Trusted{});
}

OrthMatrix OrthMatrix::transpose() const {
  return OrthMatrix(entries_.transpose(), Trusted{});
}

double OrthMatrix::distance(const OrthMatrix& a, const OrthMatrix& b) {
  return (a.entries_ - b.entries_).cwiseAbs().maxCoeff();
}

SpherePoint apply_isometry(const OrthMatrix& m, const SpherePoint& q) {
  if (m.ambient_dim() != q.ambient_dim()) {
    throw Error(ErrorKind::BadParameters, "isometry and point dimensions differ");
  }
  // Orthogonality keeps the product on the sphere up to rounding.
  return SpherePoint::normalized(m.entries() * q.coords());
}

double distance(const ChartPoint& a, const ChartPoint& b) {
  return (a.coords - b.coords).norm();
}

namespace {

Matrix complete_frame(const Vector& base) {
  const int ambient = static_cast<int>(base.size());
  Matrix span(ambient, ambient);
  span.col(0) = base;
  Matrix frame(ambient, ambient - 1);
  std::vector<bool> used(ambient, false);

  auto residual = [&](const Vector& v, int count) {
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < count; ++j) r -= span.col(j).dot(r) * span.col(j);
    }
    return r;
  };

  for (int k = 1; k < ambient; ++k) {
    int best = -1;
    double best_norm = -1.0;
    Vector best_residual;
    for (int i = 0; i < ambient; ++i) {
      if (used[i]) continue;
      Vector r = residual(Vector::Unit(ambient, i), k);
      const double norm = r.norm();
      // Strict comparison: ties go to the lowest index.
      if (norm > best_norm) {
        best = i;
        best_norm = norm;
        best_residual = std::move(r);
      }
    }
    used[best] = true;
    span.col(k) = best_residual / best_norm;
    frame.col(k - 1) = span.col(k);
  }
  return frame;
}

}  // namespace

Chart::Chart(SpherePoint base) : base_(std::move(base)), frame_(complete_frame(base_.coords())) {}

Chart::Chart(SpherePoint base, Matrix frame) : base_(std::move(base)), frame_(std::move(frame)) {
  const int n = base_.sphere_dim();
  if (frame_.rows() != n + 1 || frame_.cols() != n) {
    throw Error(ErrorKind::BadParameters, "frame must have n columns of length n+1");
  }
  const double gram_defect =
      (frame_.transpose() * frame_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const double base_defect = (frame_.transpose() * base_.coords()).cwiseAbs().maxCoeff();
  if (gram_defect > tol::unit_norm || base_defect > tol::unit_norm) {
    throw Error(ErrorKind::BadParameters, "frame is not an orthonormal basis of base^perp");
  }
}

Vector Chart::plane_point(const ChartPoint& x) const {
  return 0.5 * base_.coords() + frame_ * x.coords;
}

ChartPoint stereo_project(const Chart& chart, const SpherePoint& q) {
  if (q.ambient_dim() != chart.base().ambient_dim()) {
    throw Error(ErrorKind::BadParameters, "point and chart dimensions differ");
  }
  const Vector diff = q.coords() - chart.base().coords();
  const double dist2 = diff.squaredNorm();
  if (std::sqrt(dist2) <= tol::pole) {
    throw Error(ErrorKind::PoleProjection, "point coincides with the chart pole");
  }
  // <p, frame> = 0, so the frame coordinates of X - p/2 reduce to these.
  return ChartPoint{chart.frame().transpose() * diff / dist2};
}

SpherePoint stereo_unproject(const Chart& chart, const ChartPoint& x) {
  if (x.dim() != chart.dim()) {
    throw Error(ErrorKind::BadParameters, "chart point has the wrong dimension");
  }
  const double s = x.coords.squaredNorm();
  const double denom = s + 0.25;
  Vector q = ((s - 0.25) / denom) * chart.base().coords() + chart.frame() * x.coords / denom;
  return SpherePoint::normalized(q);
}

double conformal_factor_inverse(const ChartPoint& x) {
  return 1.0 / (0.25 + x.coords.squaredNorm());
}

}  // namespace mpq
