#pragma once

#include "mpq/sphere.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mpq {

namespace tol {
/// Two group elements are the same if their max entrywise difference is at
/// most this.
inline constexpr double element_equal = 1e-10;
/// Elements closer than this but not equal make the closure ill-conditioned.
inline constexpr double element_ambiguous = 1e-8;
/// Minimal chord |p - gamma p| for gamma != 1.
inline constexpr double free_at_base = 1e-6;
}  // namespace tol

inline constexpr std::size_t kDefaultMaxOrder = 10000;

/// Finite subgroup of O(n+1). Element 0 is the identity.
///
/// The product table is materialized for groups up to kCayleyTableLimit
/// elements; larger groups answer product() by lookup.
class IsometryGroup {
 public:
  static constexpr std::size_t kCayleyTableLimit = 1024;

  int dim() const noexcept { return dim_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<OrthMatrix>& elements() const noexcept { return elements_; }
  const OrthMatrix& operator[](std::size_t i) const { return elements_.at(i); }

  /// Index of elements[a] * elements[b].
  std::size_t product(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const { return inverses_.at(a); }

  /// Index of the element equal to m within tol::element_equal. Throws
  /// AmbiguousElements if m is only near an element.
  std::optional<std::size_t> find(const OrthMatrix& m) const;

  bool has_cayley_table() const noexcept { return !cayley_.empty(); }

  friend IsometryGroup close_group(const std::vector<OrthMatrix>& generators,
                                   std::size_t max_order);

 private:
  IsometryGroup(int dim);
  double key(const Matrix& m) const;
  std::size_t insert(OrthMatrix m);
  void finalize();

  int dim_;
  std::vector<OrthMatrix> elements_;
  std::vector<std::size_t> inverses_;
  std::vector<std::uint32_t> cayley_;
  // Sorted scalar fingerprints w1^T M w2 used to narrow lookups.
  std::multimap<double, std::size_t> index_;
  Vector w_left_, w_right_;
  double key_window_ = 0.0;
};

/// Smallest product-closed set containing the identity and the generators.
/// Throws NotOrthogonal (via OrthMatrix) for bad generators, OrderExceeded
/// past max_order, AmbiguousElements for near-equal elements. An empty
/// generator list is not allowed; use trivial_group.
IsometryGroup close_group(const std::vector<OrthMatrix>& generators,
                          std::size_t max_order = kDefaultMaxOrder);

IsometryGroup trivial_group(int dim);
IsometryGroup antipodal_group(int dim);
/// Cyclic group of order k on S^{2m-1} generated by the block rotation
/// diag(R(2 pi l_1/k), ..., R(2 pi l_m/k)). Each l_j must be coprime to k.
IsometryGroup lens_group(int k, const std::vector<int>& ls);
/// a x b acting on R^{a.dim()+1} (+) R^{b.dim()+1}.
IsometryGroup product_group(const IsometryGroup& a, const IsometryGroup& b,
                            std::size_t max_order = kDefaultMaxOrder);

/// Rotation block R(angle) in the (i, i+1) plane, identity elsewhere.
Matrix plane_rotation(int ambient_dim, int i, double angle);

struct GroupSpec {
  enum class Family { Trivial, Antipodal, Lens, Generators, Product };

  Family family = Family::Trivial;
  /// Sphere dimension n; 0 lets lens and product families infer it.
  int dim = 0;
  std::vector<int> params;
  std::vector<Matrix> generators;
  std::vector<GroupSpec> factors;
  std::size_t max_order = kDefaultMaxOrder;
};

std::string family_name(GroupSpec::Family family);
/// Throws BadParameters on an unknown name.
GroupSpec::Family parse_family(const std::string& name);

/// Sphere dimension the spec resolves to.
int resolved_dim(const GroupSpec& spec);

/// Throws BadParameters for inconsistent parameters or dimensions.
IsometryGroup named_group(const GroupSpec& spec);

/// Parses
///   {"dim": n, "family": "antipodal" | "lens" | "trivial" | "generators" | "product",
///    "params": [...], "generators": [[...row-major...]], "factors": [...], "max_order": N}
/// Generators may be flat row-major arrays or arrays of rows.
GroupSpec parse_group_spec(const std::string& json_text);

/// Orbit of the base point: points[i] = elements[i] * base.
struct Orbit {
  SpherePoint base;
  std::vector<SpherePoint> points;
  std::vector<double> chords;

  std::size_t size() const noexcept { return points.size(); }
};

/// Throws SingularBasePoint if some nontrivial element moves p by at most
/// tol::free_at_base.
Orbit orbit(const IsometryGroup& group, const SpherePoint& p);

}  // namespace mpq
