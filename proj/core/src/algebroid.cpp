#include "lalg/algebroid.hpp"

#include <algorithm>
#include <sstream>

#include "lalg/error.hpp"

namespace lalg {

std::string ValidationReport::to_string() const {
  if (valid()) return "valid\n";
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.kind << " violation at (";
    for (std::size_t i = 0; i < v.indices.size(); ++i) os << (i ? "," : "") << v.indices[i];
    os << ")";
    if (!v.component.empty()) os << " component " << v.component;
    os << ": residual " << v.residual_text << "\n";
  }
  return os.str();
}

Algebroid::Algebroid(std::size_t base_dim, std::size_t rank, std::vector<std::string> coordinates)
    : n_(base_dim), r_(rank), coords_(std::move(coordinates)), anchor_(rank, base_dim, Scalar(0)) {
  if (rank > 24) throw DimensionError("rank above 24 is not supported");
  if (coords_.empty()) coords_ = default_names(n_);
  if (coords_.size() != n_) throw DimensionError("coordinate names do not match the base dimension");
  std::size_t pairs = r_ * (r_ > 0 ? r_ - 1 : 0) / 2;
  structure_.assign(pairs * r_, Scalar(0));
  assigned_.assign(pairs * r_, false);
}

void Algebroid::check_frame(std::size_t a) const {
  if (a >= r_) throw DimensionError("frame index " + std::to_string(a + 1) + " out of range");
}

std::size_t Algebroid::pair_index(std::size_t a, std::size_t b) const {
  // a < b; row-major over the strict upper triangle.
  return a * r_ - a * (a + 1) / 2 + (b - a - 1);
}

void Algebroid::set_anchor(std::size_t a, std::size_t i, Scalar value) {
  check_frame(a);
  if (i >= n_) throw DimensionError("coordinate index out of range");
  anchor_(a, i) = std::move(value);
}

Scalar Algebroid::structure(std::size_t c, std::size_t a, std::size_t b) const {
  check_frame(a);
  check_frame(b);
  check_frame(c);
  if (a == b) return Scalar(0);
  if (a < b) return structure_[pair_index(a, b) * r_ + c];
  return -structure_[pair_index(b, a) * r_ + c];
}

void Algebroid::set_structure(std::size_t a, std::size_t b, std::size_t c, Scalar value) {
  check_frame(a);
  check_frame(b);
  check_frame(c);
  if (a == b) {
    if (!value.is_zero())
      defects_.push_back({"antisymmetry", {a + 1, a + 1, c + 1}, "e" + std::to_string(c + 1), value,
                          value.to_string(coords_)});
    return;
  }
  if (a > b) {
    std::swap(a, b);
    value = -value;
  }
  std::size_t k = pair_index(a, b) * r_ + c;
  if (assigned_[k] && !(structure_[k] == value)) {
    Scalar res = structure_[k] - value;
    defects_.push_back({"antisymmetry", {a + 1, b + 1, c + 1}, "e" + std::to_string(c + 1), res, res.to_string(coords_)});
  }
  structure_[k] = std::move(value);
  assigned_[k] = true;
}

bool Algebroid::has_structure() const {
  for (const auto& s : structure_)
    if (!s.is_zero()) return true;
  return false;
}

Scalar Algebroid::anchor_derivative(std::size_t a, const Scalar& f) const {
  check_frame(a);
  Scalar out(0);
  if (f.is_exact() && f.numerator().is_constant() && f.denominator().empty()) return out;
  for (std::size_t i = 0; i < n_; ++i) {
    const Scalar& rho = anchor_(a, i);
    if (rho.is_zero()) continue;
    Scalar df = f.derive(i);
    if (!df.is_zero()) out += rho * df;
  }
  return out;
}

ValidationReport Algebroid::validate() const {
  ValidationReport report;
  report.violations = defects_;
  auto flag = [&](const char* kind, std::vector<std::size_t> idx, std::string comp, const Scalar& res) {
    if (vanishes(res, n_)) return;
    report.violations.push_back({kind, std::move(idx), std::move(comp), res, res.to_string(coords_)});
  };
  // rho([e_a, e_b]) = [rho(e_a), rho(e_b)]
  for (std::size_t a = 0; a < r_; ++a)
    for (std::size_t b = a + 1; b < r_; ++b)
      for (std::size_t i = 0; i < n_; ++i) {
        Scalar lhs(0);
        for (std::size_t c = 0; c < r_; ++c) {
          Scalar C = structure(c, a, b);
          if (!C.is_zero()) lhs += C * anchor_(c, i);
        }
        Scalar rhs = anchor_derivative(a, anchor_(b, i)) - anchor_derivative(b, anchor_(a, i));
        flag("anchor", {a + 1, b + 1}, coords_[i], lhs - rhs);
      }
  // Cyclic sum of [[e_a, e_b], e_c], expanded with the Leibniz rule.
  auto nested = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    Scalar out = -anchor_derivative(c, structure(e, a, b));
    for (std::size_t d = 0; d < r_; ++d) {
      Scalar C = structure(d, a, b);
      if (!C.is_zero()) out += C * structure(e, d, c);
    }
    return out;
  };
  for (std::size_t a = 0; a < r_; ++a)
    for (std::size_t b = a + 1; b < r_; ++b)
      for (std::size_t c = b + 1; c < r_; ++c)
        for (std::size_t e = 0; e < r_; ++e) {
          Scalar j = nested(a, b, c, e) + nested(b, c, a, e) + nested(c, a, b, e);
          flag("jacobi", {a + 1, b + 1, c + 1}, "e" + std::to_string(e + 1), j);
        }
  return report;
}

AlgebroidPtr checked(Algebroid alg) {
  auto report = alg.validate();
  if (!report.valid()) throw InvariantError("invalid algebroid presentation:\n" + report.to_string());
  return std::make_shared<const Algebroid>(std::move(alg));
}

AlgebroidPtr tangent(std::size_t n) {
  Algebroid a(n, n);
  for (std::size_t i = 0; i < n; ++i) a.set_anchor(i, i, Scalar(1));
  a.set_name("tangent(" + std::to_string(n) + ")");
  return checked(std::move(a));
}

AlgebroidPtr lie_algebra(std::size_t dim, const std::vector<StructureEntry>& constants) {
  Algebroid a(0, dim);
  for (const auto& e : constants) a.set_structure(e.a, e.b, e.c, e.value);
  a.set_name("lie_algebra(" + std::to_string(dim) + ")");
  return checked(std::move(a));
}

AlgebroidPtr action(std::size_t dim, const std::vector<StructureEntry>& constants, std::size_t base_dim,
                    const std::vector<std::vector<Scalar>>& fields, std::vector<std::string> coordinates) {
  if (fields.size() != dim) throw DimensionError("one vector field per Lie algebra generator is required");
  Algebroid a(base_dim, dim, std::move(coordinates));
  for (const auto& e : constants) a.set_structure(e.a, e.b, e.c, e.value);
  for (std::size_t k = 0; k < dim; ++k) {
    if (fields[k].size() != base_dim) throw DimensionError("vector field has wrong number of components");
    for (std::size_t i = 0; i < base_dim; ++i) a.set_anchor(k, i, fields[k][i]);
  }
  a.set_name("action");
  return checked(std::move(a));
}

AlgebroidPtr abelian_bundle(std::size_t n, std::size_t r) {
  Algebroid a(n, r);
  a.set_name("abelian_bundle(" + std::to_string(n) + "," + std::to_string(r) + ")");
  return checked(std::move(a));
}

AlgebroidPtr product(const AlgebroidPtr& a, const AlgebroidPtr& b) {
  std::size_t n1 = a->base_dim(), n2 = b->base_dim(), r1 = a->rank(), r2 = b->rank();
  std::vector<std::string> coords = a->coordinates();
  for (const auto& c : b->coordinates()) {
    std::string name = c;
    while (std::find(coords.begin(), coords.end(), name) != coords.end()) name += "'";
    coords.push_back(name);
  }
  Algebroid p(n1 + n2, r1 + r2, coords);
  std::size_t n = n1 + n2;
  for (std::size_t x = 0; x < r1; ++x)
    for (std::size_t i = 0; i < n1; ++i) p.set_anchor(x, i, a->anchor(x, i).embed(n, 0));
  for (std::size_t x = 0; x < r2; ++x)
    for (std::size_t i = 0; i < n2; ++i) p.set_anchor(r1 + x, n1 + i, b->anchor(x, i).embed(n, n1));
  for (std::size_t x = 0; x < r1; ++x)
    for (std::size_t y = x + 1; y < r1; ++y)
      for (std::size_t c = 0; c < r1; ++c) p.set_structure(x, y, c, a->structure(c, x, y).embed(n, 0));
  for (std::size_t x = 0; x < r2; ++x)
    for (std::size_t y = x + 1; y < r2; ++y)
      for (std::size_t c = 0; c < r2; ++c)
        p.set_structure(r1 + x, r1 + y, r1 + c, b->structure(c, x, y).embed(n, n1));
  p.set_name(a->name() + " x " + b->name());
  return checked(std::move(p));
}

AlgebroidPtr pullback(const AlgebroidPtr& a, std::size_t m) {
  std::size_t n = a->base_dim(), r = a->rank();
  std::vector<std::string> coords = a->coordinates();
  for (std::size_t j = 0; j < m; ++j) {
    std::string name = "u" + std::to_string(j + 1);
    while (std::find(coords.begin(), coords.end(), name) != coords.end()) name += "'";
    coords.push_back(name);
  }
  Algebroid p(n + m, r + m, coords);
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t i = 0; i < n; ++i) p.set_anchor(x, i, a->anchor(x, i).embed(n + m, 0));
  for (std::size_t j = 0; j < m; ++j) p.set_anchor(r + j, n + j, Scalar(1));
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t y = x + 1; y < r; ++y)
      for (std::size_t c = 0; c < r; ++c) p.set_structure(x, y, c, a->structure(c, x, y).embed(n + m, 0));
  p.set_name("pullback(" + a->name() + "," + std::to_string(m) + ")");
  return checked(std::move(p));
}

AlgebroidPtr permute(const AlgebroidPtr& a, const std::vector<std::size_t>& frame_perm,
                     const std::vector<std::size_t>& coord_perm) {
  std::size_t n = a->base_dim(), r = a->rank();
  if (frame_perm.size() != r || coord_perm.size() != n) throw DimensionError("permutation has wrong size");
  std::vector<std::string> coords(n);
  std::vector<Scalar> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    coords[coord_perm[i]] = a->coordinates()[i];
    images[i] = Scalar::variable(n, coord_perm[i]);
  }
  auto move = [&](const Scalar& s) { return n == 0 ? s : s.substitute(images); };
  Algebroid p(n, r, coords);
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t i = 0; i < n; ++i) p.set_anchor(frame_perm[x], coord_perm[i], move(a->anchor(x, i)));
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t y = x + 1; y < r; ++y)
      for (std::size_t c = 0; c < r; ++c) {
        Scalar v = a->structure(c, x, y);
        if (!v.is_zero()) p.set_structure(frame_perm[x], frame_perm[y], frame_perm[c], move(v));
      }
  p.set_name(a->name());
  return checked(std::move(p));
}

AlgebroidPtr su2() {
  auto a = std::make_shared<Algebroid>(*lie_algebra(3, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}));
  a->set_name("su(2)");
  return a;
}

AlgebroidPtr aff1() {
  auto a = std::make_shared<Algebroid>(*lie_algebra(2, {{0, 1, 1, 1}}));
  a->set_name("aff(1)");
  return a;
}

AlgebroidPtr so3_action() {
  Scalar x = Scalar::variable(3, 0), y = Scalar::variable(3, 1), z = Scalar::variable(3, 2);
  std::vector<std::vector<Scalar>> fields = {
      {Scalar(0), z, -y},
      {-z, Scalar(0), x},
      {y, -x, Scalar(0)},
  };
  auto a = std::make_shared<Algebroid>(
      *action(3, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}, 3, fields, {"x", "y", "z"}));
  a->set_name("so(3) on R^3");
  return a;
}

AlgebroidPtr so2_action() {
  Scalar x = Scalar::variable(2, 0), y = Scalar::variable(2, 1);
  auto a = std::make_shared<Algebroid>(*action(1, {}, 2, {{-y, x}}, {"x", "y"}));
  a->set_name("so(2) on R^2");
  return a;
}

AlgebroidPtr sphere_orthonormal() {
  Scalar x = Scalar::variable(2, 0), y = Scalar::variable(2, 1);
  Scalar half = Scalar(Rational(1, 2));
  Scalar s = half * (Scalar(1) + x * x + y * y);
  Algebroid a(2, 2, {"x", "y"});
  a.set_anchor(0, 0, s);
  a.set_anchor(1, 1, s);
  // [s d/dx, s d/dy] = s (s_x d/dy - s_y d/dx) = x e_2 - y e_1
  a.set_structure(0, 1, 0, -y);
  a.set_structure(0, 1, 1, x);
  a.set_name("sphere (orthonormal frame)");
  return checked(std::move(a));
}

ValidationReport validate_morphism(const Morphism& m) {
  const Algebroid& A = *m.source;
  const Algebroid& B = *m.target;
  if (m.base_map.size() != B.base_dim()) throw DimensionError("base map needs one image per target coordinate");
  if (m.bundle_map.rows() != B.rank() || m.bundle_map.cols() != A.rank())
    throw DimensionError("bundle map must be target rank x source rank");
  ValidationReport report;
  std::size_t n = A.base_dim();
  auto pull = [&](const Scalar& s) { return B.base_dim() == 0 ? s : s.substitute(m.base_map); };
  auto flag = [&](const char* kind, std::vector<std::size_t> idx, std::string comp, const Scalar& res) {
    if (vanishes(res, n)) return;
    report.violations.push_back({kind, std::move(idx), std::move(comp), res, res.to_string(A.coordinates())});
  };
  for (std::size_t a = 0; a < A.rank(); ++a)
    for (std::size_t j = 0; j < B.base_dim(); ++j) {
      Scalar lhs(0);
      for (std::size_t b = 0; b < B.rank(); ++b) {
        const Scalar& phi = m.bundle_map(b, a);
        if (!phi.is_zero()) lhs += phi * pull(B.anchor(b, j));
      }
      flag("anchor-compatibility", {a + 1}, B.coordinates()[j], lhs - A.anchor_derivative(a, m.base_map[j]));
    }
  for (std::size_t a = 0; a < A.rank(); ++a)
    for (std::size_t b = a + 1; b < A.rank(); ++b)
      for (std::size_t e = 0; e < B.rank(); ++e) {
        Scalar lhs(0);
        for (std::size_t c = 0; c < A.rank(); ++c) {
          Scalar C = A.structure(c, a, b);
          if (!C.is_zero()) lhs += C * m.bundle_map(e, c);
        }
        Scalar rhs = A.anchor_derivative(a, m.bundle_map(e, b)) - A.anchor_derivative(b, m.bundle_map(e, a));
        for (std::size_t c = 0; c < B.rank(); ++c) {
          if (m.bundle_map(c, a).is_zero()) continue;
          for (std::size_t d = 0; d < B.rank(); ++d) {
            if (c == d || m.bundle_map(d, b).is_zero()) continue;
            Scalar C = B.structure(e, c, d);
            if (!C.is_zero()) rhs += m.bundle_map(c, a) * m.bundle_map(d, b) * pull(C);
          }
        }
        flag("bracket-compatibility", {a + 1, b + 1}, "e" + std::to_string(e + 1), lhs - rhs);
      }
  return report;
}

Morphism identity_morphism(const AlgebroidPtr& a) {
  std::size_t n = a->base_dim();
  std::vector<Scalar> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(Scalar::variable(n, i));
  return {a, a, f, ScalarMatrix::identity(a->rank())};
}

Morphism anchor_morphism(const AlgebroidPtr& a) {
  std::size_t n = a->base_dim();
  std::vector<Scalar> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(Scalar::variable(n, i));
  ScalarMatrix phi(n, a->rank(), Scalar(0));
  for (std::size_t x = 0; x < a->rank(); ++x)
    for (std::size_t i = 0; i < n; ++i) phi(i, x) = a->anchor(x, i);
  return {a, tangent(n), f, phi};
}

namespace {

void check_pullback_shape(const AlgebroidPtr& a, const AlgebroidPtr& pulled) {
  if (pulled->base_dim() < a->base_dim() || pulled->rank() < a->rank() ||
      pulled->base_dim() - a->base_dim() != pulled->rank() - a->rank())
    throw DimensionError("second algebroid is not a pull-back of the first");
}

}  // namespace

Morphism zero_section(const AlgebroidPtr& a, const AlgebroidPtr& pulled) {
  check_pullback_shape(a, pulled);
  std::size_t n = a->base_dim(), m = pulled->base_dim() - n, r = a->rank();
  std::vector<Scalar> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(Scalar::variable(n, i));
  for (std::size_t j = 0; j < m; ++j) f.push_back(Scalar(0));
  ScalarMatrix phi(r + m, r, Scalar(0));
  for (std::size_t x = 0; x < r; ++x) phi(x, x) = Scalar(1);
  return {a, pulled, f, phi};
}

Morphism fiber_inclusion(const AlgebroidPtr& a, const AlgebroidPtr& pulled, const std::vector<Rational>& point) {
  check_pullback_shape(a, pulled);
  std::size_t n = a->base_dim(), m = pulled->base_dim() - n, r = a->rank();
  if (point.size() != n) throw DimensionError("base point has wrong dimension");
  std::vector<Scalar> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(Scalar(point[i]));
  for (std::size_t j = 0; j < m; ++j) f.push_back(Scalar::variable(m, j));
  ScalarMatrix phi(r + m, m, Scalar(0));
  for (std::size_t j = 0; j < m; ++j) phi(r + j, j) = Scalar(1);
  return {tangent(m), pulled, f, phi};
}

Morphism projection(const AlgebroidPtr& a, const AlgebroidPtr& pulled) {
  check_pullback_shape(a, pulled);
  std::size_t n = a->base_dim(), m = pulled->base_dim() - n, r = a->rank();
  std::vector<Scalar> f;
  for (std::size_t i = 0; i < n; ++i) f.push_back(Scalar::variable(n + m, i));
  ScalarMatrix phi(r, r + m, Scalar(0));
  for (std::size_t x = 0; x < r; ++x) phi(x, x) = Scalar(1);
  return {pulled, a, f, phi};
}

}  // namespace lalg
