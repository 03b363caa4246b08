// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are fixed here and never tuned per run.

#include "mpq/error.hpp"
#include "mpq/green.hpp"
#include "mpq/groups.hpp"
#include "mpq/mp.hpp"
#include "mpq/random.hpp"
#include "mpq/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace mpq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct NamedGroup {
  std::string label;
  IsometryGroup group;
};

std::vector<NamedGroup> named_groups() {
  std::vector<NamedGroup> out;
  for (int n = 3; n <= 6; ++n) out.push_back({"antipodal n=" + std::to_string(n), antipodal_group(n)});
  out.push_back({"lens(3;1,1)", lens_group(3, {1, 1})});
  out.push_back({"lens(4;1,1)", lens_group(4, {1, 1})});
  out.push_back({"lens(7;1,2)", lens_group(7, {1, 2})});
  return out;
}

// Default base point e_1 plus a generic seeded one.
std::vector<SpherePoint> base_points(int n) {
  CounterRng rng(2024, static_cast<std::uint64_t>(n));
  return {SpherePoint::basis(n + 1, 0), SpherePoint::normalized(rng.unit_vector(n + 1))};
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// 1. Inversion distance law, 10^4 random triples per dimension n = 2..6.
Outcome distance_identity() {
  Outcome o;
  const auto start = Clock::now();
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    double worst_n = 0.0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      CounterRng rng(1, (static_cast<std::uint64_t>(n) << 32) | i);
      const SpherePoint p = SpherePoint::normalized(rng.unit_vector(n + 1));
      const SpherePoint q = SpherePoint::normalized(rng.unit_vector(n + 1));
      const SpherePoint r = SpherePoint::normalized(rng.unit_vector(n + 1));
      worst_n = std::max(worst_n, distance_identity_residual(Chart(p), q, r));
    }
    o.require(worst_n < 1e-11, "n=" + std::to_string(n) + " residual " + sci(worst_n));
    worst = std::max(worst, worst_n);
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  o.detail = "max residual " + sci(worst) + " (tol 1e-11), " + std::to_string(elapsed) + " s" +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 2. Master pullback identity, 10^3 sphere points per group.
Outcome pullback() {
  Outcome o;
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto& g : named_groups()) {
    for (const auto& p : base_points(g.group.dim())) {
      const VerificationReport r = check_pullback(build_mp(g.group, p), 1000, 42);
      worst = std::max(worst, r.max_residual);
      o.require(r.pass && r.samples == 1000, g.label + " residual " + sci(r.max_residual));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
  o.detail = "max relative residual " + sci(worst) + " (tol 1e-10), " + std::to_string(elapsed) +
             " s" + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 3. Antipodal group on S^3 from e_4: Schwarzschild in isotropic form.
Outcome schwarzschild() {
  Outcome o;
  const MPData mp = build_mp(antipodal_group(3), SpherePoint::basis(4, 3));
  o.require(mp.terms.size() == 1, "expected exactly one term");
  if (mp.terms.size() != 1) return o;
  o.require(mp.terms[0].mass == 0.5, "mass " + std::to_string(mp.terms[0].mass));
  o.require(mp.terms[0].center.coords.norm() == 0.0, "center not at the origin");

  CounterRng rng(3, 0);
  double u_gap = 0.0;
  double sphere_gap = 0.0;
  const DeckMap tau(mp, 1);
  for (int i = 0; i < 1000; ++i) {
    const Vector dir = rng.unit_vector(3);
    const double radius = std::exp(-4.0 + 8.0 * rng.uniform());
    const ChartPoint x{radius * dir};
    const double want = 1.0 + 1.0 / (2.0 * radius);
    u_gap = std::max(u_gap, std::abs(conformal_factor_u(mp, x) - want) / want);

    // The involution maps |x| = 1/2 onto itself (each point to its antipode).
    const ChartPoint s{0.5 * dir};
    const ChartPoint image = tau(s);
    sphere_gap = std::max({sphere_gap, std::abs(image.coords.norm() - 0.5),
                           (tau(image).coords - s.coords).norm()});
  }
  o.require(u_gap < 1e-14, "u deviates from 1 + 1/(2|x|) by " + sci(u_gap));
  o.require(sphere_gap < 1e-10, "sphere |x| = 1/2 not preserved: " + sci(sphere_gap));
  o.detail = "mass 0.5, center 0, u gap " + sci(u_gap) + ", sphere gap " + sci(sphere_gap) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 4. Mass recovered from the regular part of the Green function.
Outcome mass_recovery() {
  Outcome o;
  const auto radii = default_mass_radii();
  double worst = 0.0;
  auto groups = named_groups();
  groups.push_back({"lens(5;1,2,3)", lens_group(5, {1, 2, 3})});
  for (const auto& g : groups) {
    for (const auto& p : base_points(g.group.dim())) {
      const VerificationReport r = check_mass_limit(g.group, p, radii);
      worst = std::max(worst, r.max_residual);
      o.require(r.pass, g.label + " residual " + sci(r.max_residual));
    }
  }
  const double lens_total = total_mass(build_mp(lens_group(4, {1, 1}), SpherePoint::basis(4, 0)));
  const double oracle = 0.5 + std::numbers::sqrt2;  // chords sqrt2, 2, sqrt2 at n = 3
  o.require(std::abs(lens_total - oracle) < 1e-12, "lens(4;1,1) total " + std::to_string(lens_total));
  o.require(std::abs(lens_total - 1.914213562) < 1e-9, "lens(4;1,1) total off 1.914213562");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", lens_total);
  o.detail = "max |limit - sum m| " + sci(worst) + " (tol 1e-6), lens(4;1,1) total " + buf +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 5. Harmonicity of u: exact Hessian trace and finite-difference order.
Outcome scalar_flatness() {
  Outcome o;
  double worst = 0.0;
  double min_order = std::numeric_limits<double>::infinity();
  for (const auto& g : named_groups()) {
    for (const auto& p : base_points(g.group.dim())) {
      const VerificationReport r = check_harmonic(build_mp(g.group, p), 1000, 42);
      worst = std::max(worst, r.max_residual);
      for (const auto& d : r.details) min_order = std::min(min_order, d.value);
      o.require(r.pass, g.label + " residual " + sci(r.max_residual));
    }
  }
  o.require(min_order >= 1.8, "fd order " + std::to_string(min_order));
  o.detail = "max |tr H|/|H| " + sci(worst) + " (tol 1e-9), min fd order " +
             std::to_string(min_order) + " (min 1.8)" + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 6. Deck maps: isometry, center permutation, composition.
Outcome deck_maps() {
  Outcome o;
  double iso = 0.0, perm = 0.0, comp = 0.0;
  for (const auto& g : named_groups()) {
    for (const auto& p : base_points(g.group.dim())) {
      const MPData mp = build_mp(g.group, p);
      const VerificationReport r = check_deck_isometry(mp, 200, 42);
      const VerificationReport c = check_center_permutation(mp);
      const VerificationReport k = check_deck_composition(mp, 200, 43);
      iso = std::max(iso, r.max_residual);
      perm = std::max(perm, c.max_residual);
      comp = std::max(comp, k.max_residual);
      o.require(r.pass, g.label + " deck isometry " + sci(r.max_residual));
      o.require(c.max_residual < 1e-10, g.label + " center permutation " + sci(c.max_residual));
      o.require(k.max_residual < 1e-10, g.label + " composition " + sci(k.max_residual));
    }
  }
  o.detail = "isometry " + sci(iso) + " (tol 1e-7), centers " + sci(perm) +
             " (tol 1e-10), composition " + sci(comp) + " (tol 1e-10)" +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("no error raised");
}

// 7. Failure paths.
Outcome failure_paths() {
  Outcome o;
  try {
    o.require(error_of([] { close_group({OrthMatrix(plane_rotation(4, 0, 1.0))}, 1000); }) ==
                  ErrorKind::OrderExceeded,
              "irrational rotation");
    Matrix reflect = Matrix::Identity(4, 4);
    reflect(0, 0) = -1.0;
    o.require(error_of([&] { orbit(close_group({OrthMatrix(reflect)}), SpherePoint::basis(4, 3)); }) ==
                  ErrorKind::SingularBasePoint,
              "reflection fixing p");
    o.require(error_of([] { build_mp(antipodal_group(2), SpherePoint::basis(3, 0)); }) ==
                  ErrorKind::DimensionTooSmall,
              "n = 2");
  } catch (const std::exception& e) {
    o.require(false, e.what());
  }
  o.detail = "OrderExceeded, SingularBasePoint, DimensionTooSmall";
  return o;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"1 inversion distance identity", distance_identity},
      {"2 master pullback identity", pullback},
      {"3 antipodal S^3 is Schwarzschild", schwarzschild},
      {"4 mass recovery", mass_recovery},
      {"5 scalar flatness", scalar_flatness},
      {"6 deck isometry and center permutation", deck_maps},
      {"7 failure-path contract", failure_paths},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    if (!o.pass) ++failed;
  }
  const double total = seconds_since(start);
  const bool fast = total < 60.0;
  std::printf("[%s] suite wall clock: %.2f s (target < 60 s)\n", fast ? "PASS" : "FAIL", total);
  if (!fast) ++failed;
  return failed == 0 ? 0 : 1;
}
