#include "mpq/groups.hpp"

#include "mpq/error.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mpq {

IsometryGroup::IsometryGroup(int dim) : dim_(dim) {
  const int ambient = dim + 1;
  w_left_.resize(ambient);
  w_right_.resize(ambient);
  for (int i = 0; i < ambient; ++i) {
    w_left_[i] = 0.5 + std::fmod((i + 1) * 0.6180339887498949, 1.0);
    w_right_[i] = 0.5 + std::fmod((i + 1) * 0.4142135623730951, 1.0);
  }
  key_window_ = 2.0 * tol::element_ambiguous * w_left_.sum() * w_right_.sum();
}

double IsometryGroup::key(const Matrix& m) const { return w_left_.dot(m * w_right_); }

std::optional<std::size_t> IsometryGroup::find(const OrthMatrix& m) const {
  const double k = key(m.entries());
  double nearest = std::numeric_limits<double>::infinity();
  for (auto it = index_.lower_bound(k - key_window_);
       it != index_.end() && it->first <= k + key_window_; ++it) {
    const double d = OrthMatrix::distance(elements_[it->second], m);
    if (d <= tol::element_equal) return it->second;
    nearest = std::min(nearest, d);
  }
  if (nearest < tol::element_ambiguous) {
    throw Error(ErrorKind::AmbiguousElements,
                "element at entrywise distance " + std::to_string(nearest) +
                    " from an existing element");
  }
  return std::nullopt;
}

std::size_t IsometryGroup::insert(OrthMatrix m) {
  const std::size_t idx = elements_.size();
  index_.emplace(key(m.entries()), idx);
  elements_.push_back(std::move(m));
  return idx;
}

void IsometryGroup::finalize() {
  const std::size_t n = elements_.size();
  inverses_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto inv = find(elements_[i].transpose());
    if (!inv) {
      throw Error(ErrorKind::AmbiguousElements, "inverse of an element is missing");
    }
    inverses_[i] = *inv;
  }
  if (n <= kCayleyTableLimit) {
    cayley_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const auto c = find(elements_[a] * elements_[b]);
        if (!c) {
          throw Error(ErrorKind::AmbiguousElements, "product of two elements is missing");
        }
        cayley_[a * n + b] = static_cast<std::uint32_t>(*c);
      }
    }
  }
}

std::size_t IsometryGroup::product(std::size_t a, std::size_t b) const {
  const std::size_t n = elements_.size();
  if (a >= n || b >= n) throw std::out_of_range("group element index");
  if (!cayley_.empty()) return cayley_[a * n + b];
  const auto c = find(elements_[a] * elements_[b]);
  if (!c) throw Error(ErrorKind::AmbiguousElements, "product of two elements is missing");
  return *c;
}

IsometryGroup close_group(const std::vector<OrthMatrix>& generators, std::size_t max_order) {
  if (generators.empty()) {
    throw Error(ErrorKind::BadParameters, "close_group needs at least one generator");
  }
  if (max_order < 1) throw Error(ErrorKind::BadParameters, "max_order must be >= 1");
  const int ambient = generators.front().ambient_dim();
  for (const auto& g : generators) {
    if (g.ambient_dim() != ambient) {
      throw Error(ErrorKind::BadParameters, "generators have different sizes");
    }
  }

  IsometryGroup group(ambient - 1);
  group.insert(OrthMatrix::identity(ambient));
  // Breadth-first: left-multiply every new element by every generator.
  for (std::size_t next = 0; next < group.elements_.size(); ++next) {
    for (const auto& g : generators) {
      OrthMatrix candidate = g * group.elements_[next];
      if (group.find(candidate)) continue;
      if (group.elements_.size() >= max_order) {
        throw Error(ErrorKind::OrderExceeded,
                    "closure exceeds " + std::to_string(max_order) + " elements");
      }
      group.insert(std::move(candidate));
    }
  }
  group.finalize();
  return group;
}

Matrix plane_rotation(int ambient_dim, int i, double angle) {
  Matrix m = Matrix::Identity(ambient_dim, ambient_dim);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m(i, i) = c;
  m(i, i + 1) = -s;
  m(i + 1, i) = s;
  m(i + 1, i + 1) = c;
  return m;
}

IsometryGroup trivial_group(int dim) {
  if (dim < 1) throw Error(ErrorKind::BadParameters, "sphere dimension must be >= 1");
  return close_group({OrthMatrix::identity(dim + 1)}, 1);
}

IsometryGroup antipodal_group(int dim) {
  if (dim < 1) throw Error(ErrorKind::BadParameters, "sphere dimension must be >= 1");
  return close_group({OrthMatrix(-Matrix::Identity(dim + 1, dim + 1))}, 2);
}

IsometryGroup lens_group(int k, const std::vector<int>& ls) {
  if (k < 1) throw Error(ErrorKind::BadParameters, "lens order k must be >= 1");
  if (ls.empty()) throw Error(ErrorKind::BadParameters, "lens needs at least one weight");
  const int ambient = 2 * static_cast<int>(ls.size());
  Matrix gen = Matrix::Identity(ambient, ambient);
  for (std::size_t j = 0; j < ls.size(); ++j) {
    if (std::gcd(ls[j], k) != 1) {
      throw Error(ErrorKind::BadParameters,
                  "lens weight " + std::to_string(ls[j]) + " is not coprime to " +
                      std::to_string(k));
    }
    const double angle = 2.0 * std::numbers::pi * ls[j] / k;
    const int i = 2 * static_cast<int>(j);
    gen.block(i, i, 2, 2) = plane_rotation(2, 0, angle);
  }
  return close_group({OrthMatrix(std::move(gen))}, static_cast<std::size_t>(k));
}

IsometryGroup product_group(const IsometryGroup& a, const IsometryGroup& b,
                            std::size_t max_order) {
  const int da = a.dim() + 1;
  const int db = b.dim() + 1;
  const int ambient = da + db;
  std::vector<OrthMatrix> gens;
  auto embed = [&](const Matrix& block, int offset, int size) {
    Matrix m = Matrix::Identity(ambient, ambient);
    m.block(offset, offset, size, size) = block;
    return OrthMatrix(std::move(m));
  };
  for (std::size_t i = 1; i < a.order(); ++i) gens.push_back(embed(a[i].entries(), 0, da));
  for (std::size_t i = 1; i < b.order(); ++i) gens.push_back(embed(b[i].entries(), da, db));
  if (gens.empty()) gens.push_back(OrthMatrix::identity(ambient));
  return close_group(gens, max_order);
}

std::string family_name(GroupSpec::Family family) {
  switch (family) {
    case GroupSpec::Family::Trivial: return "trivial";
    case GroupSpec::Family::Antipodal: return "antipodal";
    case GroupSpec::Family::Lens: return "lens";
    case GroupSpec::Family::Generators: return "generators";
    case GroupSpec::Family::Product: return "product";
  }
  return "unknown";
}

GroupSpec::Family parse_family(const std::string& name) {
  using F = GroupSpec::Family;
  for (F f : {F::Trivial, F::Antipodal, F::Lens, F::Generators, F::Product}) {
    if (family_name(f) == name) return f;
  }
  throw Error(ErrorKind::BadParameters, "unknown group family '" + name + "'");
}

namespace {

int check_dim(int given, int inferred, const std::string& what) {
  if (given != 0 && given != inferred) {
    throw Error(ErrorKind::BadParameters, what + " acts on S^" + std::to_string(inferred) +
                                              ", not S^" + std::to_string(given));
  }
  return inferred;
}

}  // namespace

int resolved_dim(const GroupSpec& spec) {
  using F = GroupSpec::Family;
  switch (spec.family) {
    case F::Trivial:
    case F::Antipodal:
      return spec.dim == 0 ? 3 : spec.dim;
    case F::Lens:
      if (spec.params.size() < 2) {
        throw Error(ErrorKind::BadParameters, "lens params are k, l_1, ..., l_m");
      }
      return check_dim(spec.dim, 2 * static_cast<int>(spec.params.size() - 1) - 1, "lens");
    case F::Generators:
      if (spec.generators.empty()) {
        throw Error(ErrorKind::BadParameters, "generators family needs generators");
      }
      return check_dim(spec.dim, static_cast<int>(spec.generators.front().rows()) - 1,
                       "generators");
    case F::Product: {
      if (spec.factors.size() != 2) {
        throw Error(ErrorKind::BadParameters, "product needs exactly two factors");
      }
      return check_dim(spec.dim, resolved_dim(spec.factors[0]) + resolved_dim(spec.factors[1]) + 1,
                       "product");
    }
  }
  throw Error(ErrorKind::BadParameters, "unknown family");
}

IsometryGroup named_group(const GroupSpec& spec) {
  using F = GroupSpec::Family;
  const int dim = resolved_dim(spec);
  if (dim < 1) throw Error(ErrorKind::BadParameters, "sphere dimension must be >= 1");
  switch (spec.family) {
    case F::Trivial:
      if (!spec.params.empty()) throw Error(ErrorKind::BadParameters, "trivial takes no params");
      return trivial_group(dim);
    case F::Antipodal:
      if (!spec.params.empty()) throw Error(ErrorKind::BadParameters, "antipodal takes no params");
      return antipodal_group(dim);
    case F::Lens:
      return lens_group(spec.params[0], {spec.params.begin() + 1, spec.params.end()});
    case F::Generators: {
      std::vector<OrthMatrix> gens;
      for (const auto& m : spec.generators) {
        if (m.rows() != dim + 1 || m.cols() != dim + 1) {
          throw Error(ErrorKind::BadParameters, "generator has the wrong size");
        }
        gens.emplace_back(m);
      }
      return close_group(gens, spec.max_order);
    }
    case F::Product:
      return product_group(named_group(spec.factors[0]), named_group(spec.factors[1]),
                           spec.max_order);
  }
  throw Error(ErrorKind::BadParameters, "unknown family");
}

namespace {

Matrix parse_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::BadParameters, "generator must be a non-empty array");
  }
  std::vector<double> flat;
  if (j.front().is_array()) {
    for (const auto& row : j) {
      if (row.size() != j.size()) throw Error(ErrorKind::BadParameters, "generator is not square");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
  } else {
    for (const auto& v : j) flat.push_back(v.get<double>());
  }
  const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
  if (static_cast<std::size_t>(side * side) != flat.size()) {
    throw Error(ErrorKind::BadParameters, "generator is not square");
  }
  Matrix m(side, side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) m(r, c) = flat[static_cast<std::size_t>(r * side + c)];
  }
  return m;
}

GroupSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadParameters, "group spec must be an object");
  GroupSpec spec;
  spec.family = parse_family(j.at("family").get<std::string>());
  spec.dim = j.value("dim", 0);
  if (j.contains("params")) spec.params = j.at("params").get<std::vector<int>>();
  if (j.contains("generators")) {
    for (const auto& g : j.at("generators")) spec.generators.push_back(parse_matrix(g));
  }
  if (j.contains("factors")) {
    for (const auto& f : j.at("factors")) spec.factors.push_back(spec_from_json(f));
  }
  if (j.contains("max_order")) spec.max_order = j.at("max_order").get<std::size_t>();
  return spec;
}

}  // namespace

GroupSpec parse_group_spec(const std::string& json_text) {
  try {
    return spec_from_json(nlohmann::json::parse(json_text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadParameters, std::string("group spec: ") + e.what());
  }
}

Orbit orbit(const IsometryGroup& group, const SpherePoint& p) {
  if (p.sphere_dim() != group.dim()) {
    throw Error(ErrorKind::BadParameters, "base point and group dimensions differ");
  }
  Orbit result{p, {}, {}};
  result.points.reserve(group.order());
  result.chords.reserve(group.order());
  result.points.push_back(p);
  result.chords.push_back(0.0);
  for (std::size_t i = 1; i < group.order(); ++i) {
    SpherePoint q = apply_isometry(group[i], p);
    const double c = chord(p, q);
    if (c <= tol::free_at_base) {
      throw Error(ErrorKind::SingularBasePoint,
                  "element " + std::to_string(i) + " moves the base point by " + std::to_string(c));
    }
    result.points.push_back(std::move(q));
    result.chords.push_back(c);
  }
  return result;
}

}  // namespace mpq
