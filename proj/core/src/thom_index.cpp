#include "lalg/thom_index.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lalg/error.hpp"
#include "lalg/roots.hpp"

namespace lalg {

namespace {

Mask full_mask(std::size_t bits) { return bits == 0 ? Mask{0} : static_cast<Mask>((std::uint64_t{1} << bits) - 1); }

void check_nonvanishing(const Scalar& omega, std::size_t n) {
  if (omega.is_zero()) throw DomainError("density vanishes identically");
  if (auto q = omega.as_rational()) return;
  for (int k = 0; k < 7; ++k) {
    std::vector<double> pt(n);
    for (std::size_t i = 0; i < n; ++i) pt[i] = std::sin(1.3 * k + 0.7 * static_cast<double>(i) + 0.2);
    double v;
    try {
      v = omega.eval(pt);
    } catch (const DomainError&) {
      throw DomainError("density is singular at a sample point");
    }
    if (std::abs(v) < 1e-12) throw DomainError("density vanishes at a sample point");
  }
}

Rational box_integral(const Poly& p, const std::vector<Rational>& lo, const std::vector<Rational>& hi) {
  Rational total = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      std::uint32_t k = i < e.size() ? e[i] : 0;
      Rational a = 1, b = 1;
      for (std::uint32_t j = 0; j <= k; ++j) {
        a *= lo[i];
        b *= hi[i];
      }
      term *= (b - a) / Rational(static_cast<long>(k) + 1);
    }
    total += term;
  }
  return total;
}

std::complex<double> normalize(double raw, Normalization norm) {
  double scale = std::pow(2 * std::numbers::pi, static_cast<double>(norm.pi_power));
  std::complex<double> v(raw / scale, 0);
  // Division by (sqrt -1)^b.
  switch (norm.i_power % 4) {
    case 1: return {0, -v.real()};
    case 2: return -v;
    case 3: return {0, v.real()};
    default: return v;
  }
}

std::size_t fiber_rank_of(const AlgebroidPtr& base, const AlgebroidPtr& total) {
  if (total->rank() < base->rank() || total->base_dim() < base->base_dim() ||
      total->rank() - base->rank() != total->base_dim() - base->base_dim())
    throw DimensionError("algebroid is not a pull-back of the given base");
  return total->rank() - base->rank();
}

bool has_vertical(Mask mask, std::size_t rank, std::size_t fiber_rank) {
  Mask vertical = full_mask(rank) & ~full_mask(rank - fiber_rank);
  return (mask & vertical) != 0;
}

// Coefficients restricted to the zero section, masks kept (horizontal indices only).
AlgForm restrict_to_base(const AlgForm& w, const AlgebroidPtr& base, std::size_t fiber_rank) {
  std::size_t n = base->base_dim(), r = w.algebroid()->rank();
  std::vector<Scalar> images;
  for (std::size_t i = 0; i < n; ++i) images.push_back(Scalar::variable(n, i));
  for (std::size_t j = 0; j < fiber_rank; ++j) images.push_back(Scalar(0));
  AlgForm out(base, w.bundle_rank());
  for (const auto& [mask, v] : w.terms()) {
    if (has_vertical(mask, r, fiber_rank)) continue;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) out.add(mask, i, v[i].substitute(images));
  }
  return out;
}

Scalar top_coefficient(const AlgForm& w) { return w.coefficient(full_mask(w.algebroid()->rank())); }

IndexResult zero_index(std::string note) {
  IndexResult res;
  res.integral.exact_raw = Rational(0);
  res.notes.push_back(std::move(note));
  return res;
}

std::optional<std::size_t> half_codegree(const AlgForm& nu, std::size_t r, std::vector<std::string>& notes) {
  if (!nu.is_homogeneous()) throw DimensionError("nu must be homogeneous");
  std::size_t deg = nu.is_zero() ? 0 : nu.degree();
  if (deg > r || (r - deg) % 2) {
    notes.push_back("degree mismatch: deg nu = " + std::to_string(deg) + " leaves an odd or negative codegree");
    return std::nullopt;
  }
  return (r - deg) / 2;
}

}  // namespace

AlgForm modular_cocycle(const Density& density) {
  const Algebroid& A = *density.algebroid;
  std::size_t n = A.base_dim(), r = A.rank();
  check_nonvanishing(density.omega, n);
  AlgForm theta(density.algebroid);
  for (std::size_t a = 0; a < r; ++a) {
    Scalar t = A.anchor_derivative(a, density.omega);
    if (!t.is_zero()) t = t / density.omega;
    for (std::size_t b = 0; b < r; ++b) t += A.structure(b, a, b);
    for (std::size_t i = 0; i < n; ++i) t += A.anchor(a, i).derive(i);
    if (!t.is_zero()) theta.add(Mask{1} << a, 0, t);
  }
  return theta;
}

bool is_invariant(const Density& density) { return modular_cocycle(density).vanishes(); }

std::string IntegralResult::to_string() const {
  std::ostringstream os;
  if (exact_raw && normalization.pi_power == 0 && normalization.i_power % 4 == 0) return lalg::to_string(*exact_raw);
  os.precision(15);
  os << value.real();
  if (value.imag() != 0) os << (value.imag() < 0 ? " - " : " + ") << std::abs(value.imag()) << "i";
  return os.str();
}

IntegralResult integrate(const AlgForm& alpha, const Density& density, const Domain& domain, Normalization norm,
                         const QuadratureOptions& opts) {
  const AlgebroidPtr& alg = density.algebroid;
  std::size_t n = alg->base_dim(), r = alg->rank();
  if (alpha.algebroid()->rank() != r || alpha.algebroid()->base_dim() != n)
    throw DimensionError("form and density live on different algebroids");
  if (alpha.bundle_rank() != 1) throw DimensionError("only scalar forms can be integrated");
  AlgForm theta = modular_cocycle(density);
  if (!theta.vanishes())
    throw InvariantError("density is not invariant: modular cocycle is " + theta.to_string());
  if (!alpha.is_zero() && (!alpha.is_homogeneous() || alpha.degree() != r))
    throw DimensionError("integrand must be a top-degree form (degree " + std::to_string(r) + ")");

  IntegralResult res;
  res.normalization = norm;
  Scalar f = top_coefficient(alpha) * density.omega;
  switch (domain.kind) {
    case Domain::Kind::point:
      if (n != 0) throw DimensionError("point domain needs a zero-dimensional base");
      break;
    case Domain::Kind::box:
      if (domain.lo.size() != n || domain.hi.size() != n) throw DimensionError("box dimension does not match the base");
      break;
    case Domain::Kind::plane:
      if (n == 0) throw DimensionError("plane domain needs a positive-dimensional base");
      break;
  }
  if (f.is_zero()) {
    res.exact_raw = Rational(0);
  } else if (n == 0) {
    if (auto q = f.as_rational()) res.exact_raw = *q;
    else res.value = f.eval(std::span<const double>{});
    res.evaluations = 1;
  } else if (domain.kind == Domain::Kind::box && f.is_polynomial()) {
    res.exact_raw = box_integral(f.numerator(), domain.lo, domain.hi);
  } else {
    CompiledExpr tape(f.to_expr());
    Integrand g = [&tape](std::span<const double> x) { return tape(x); };
    QuadratureResult q;
    if (domain.kind == Domain::Kind::plane) {
      q = integrate_plane(g, n, opts);
    } else {
      std::vector<double> lo, hi;
      for (std::size_t i = 0; i < n; ++i) {
        lo.push_back(domain.lo[i].get_d());
        hi.push_back(domain.hi[i].get_d());
      }
      q = integrate_box(g, lo, hi, opts);
    }
    res.value = q.value;
    res.error = q.error;
    res.evaluations = q.evaluations;
    res.converged = q.converged;
    if (!q.converged) {
      std::ostringstream os;
      os << "cubature did not reach tolerance " << opts.tolerance << " within " << opts.budget
         << " evaluations (estimate " << q.value << ", error " << q.error << ")";
      throw Error(os.str());
    }
  }
  double raw = res.exact_raw ? res.exact_raw->get_d() : res.value.real();
  res.value = normalize(raw, norm);
  res.error /= std::pow(2 * std::numbers::pi, static_cast<double>(norm.pi_power));
  return res;
}

CotangentModel cotangent_model(const AlgebroidPtr& a) { return {a, pullback(a, a->rank())}; }

SymplecticForm symplectic_form(const AlgebroidPtr& a) {
  SymplecticForm out{cotangent_model(a), AlgForm(), Scalar(0)};
  const AlgebroidPtr& P = out.model.total;
  std::size_t n = a->base_dim(), r = a->rank();
  AlgForm tautological(P);
  for (std::size_t x = 0; x < r; ++x) tautological.add(Mask{1} << x, 0, Scalar::variable(n + r, n + x));
  out.theta = -d(tautological);
  out.closed = d(out.theta).vanishes();
  AlgForm power = AlgForm::function(P, Scalar(1));
  Rational fact = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    power = wedge(power, out.theta);
    fact *= static_cast<long>(k);
  }
  out.liouville = Scalar(Rational(1) / fact) * top_coefficient(power);
  out.nondegenerate = !out.liouville.is_zero();
  return out;
}

ThomForm operator+(const ThomForm& a, const ThomForm& b) {
  if (a.fiber_rank != b.fiber_rank) throw DimensionError("Thom forms of different fiber rank");
  return normalized({a.total, a.fiber_rank, a.free + b.free, a.coefficient + b.coefficient});
}

bool operator==(const ThomForm& a, const ThomForm& b) {
  ThomForm x = normalized(a), y = normalized(b);
  return x.fiber_rank == y.fiber_rank && (x.free - y.free).vanishes() && (x.coefficient - y.coefficient).vanishes();
}

ThomForm normalized(ThomForm t) {
  std::size_t r = t.total->rank();
  AlgForm kept(t.total);
  for (const auto& [mask, v] : t.coefficient.terms())
    if (!has_vertical(mask, r, t.fiber_rank)) kept.add(mask, v);
  t.coefficient = std::move(kept);
  return t;
}

ThomForm thom_product(const ThomForm& a, const ThomForm& b) {
  if (a.fiber_rank != b.fiber_rank) throw DimensionError("Thom forms of different fiber rank");
  std::size_t m = a.fiber_rank;
  AlgForm coeff = wedge(a.free, b.coefficient);
  // b Th ^ c = (-1)^{m deg c} b ^ c Th
  for (std::size_t k = 0; k <= b.free.max_degree() && !b.free.is_zero(); ++k) {
    AlgForm ck = b.free.component(k);
    if (ck.is_zero()) continue;
    AlgForm t = wedge(a.coefficient, ck);
    coeff += (m * k) % 2 ? -t : t;
  }
  return normalized({a.total, m, wedge(a.free, b.free), coeff});
}

ThomForm thom_class(const AlgebroidPtr& a, const AlgebroidPtr& total, Orientation orientation) {
  std::size_t m = fiber_rank_of(a, total);
  if (orientation == Orientation::none) throw DomainError("Thom class needs an oriented bundle");
  Scalar sign = orientation == Orientation::positive ? Scalar(1) : Scalar(-1);
  return {total, m, AlgForm(total), AlgForm::function(total, sign)};
}

ThomForm thom_map(const AlgForm& alpha, const AlgebroidPtr& total, Orientation orientation) {
  const AlgebroidPtr& base = alpha.algebroid();
  ThomForm th = thom_class(base, total, orientation);
  AlgForm pulled = pullback_form(projection(base, total), alpha);
  return normalized({total, th.fiber_rank, AlgForm(total), wedge(pulled, th.coefficient)});
}

AlgForm fiber_integrate(const ThomForm& t, const AlgebroidPtr& base) {
  std::size_t m = fiber_rank_of(base, t.total), r = t.total->rank();
  if (m != t.fiber_rank) throw DimensionError("fiber rank does not match the base");
  for (const auto& [mask, v] : t.free.terms()) {
    Mask vertical = full_mask(r) & ~full_mask(r - m);
    if ((mask & vertical) == vertical)
      throw DomainError("Th-free part has a top vertical component and is not compactly supported along the fibers");
  }
  return restrict_to_base(t.coefficient, base, m);
}

ThomForm pullback_thom(const Morphism& mor, const ThomForm& t, std::size_t source_fiber_rank) {
  const AlgebroidPtr& T = mor.target;
  if (T->rank() != t.total->rank() || T->base_dim() != t.total->base_dim())
    throw DimensionError("morphism target is not the Thom form's algebroid");
  std::size_t rt = T->rank(), mt = t.fiber_rank, rs = mor.source->rank(), ms = source_fiber_rank;
  if (ms != mt) throw DimensionError("source and target fiber ranks differ");
  if (ms > rs) throw DimensionError("source fiber rank exceeds the source rank");
  for (std::size_t row = 0; row < rt - mt; ++row)
    for (std::size_t j = 0; j < ms; ++j)
      if (!mor.bundle_map(row, rs - ms + j).is_zero())
        throw DomainError("morphism sends a vertical frame element to a horizontal one");
  ScalarMatrix block(mt, ms, Scalar(0));
  for (std::size_t i = 0; i < mt; ++i)
    for (std::size_t j = 0; j < ms; ++j) block(i, j) = mor.bundle_map(rt - mt + i, rs - ms + j);
  Scalar det = mt == 0 ? Scalar(1) : determinant(block);
  auto q = det.as_rational();
  if (!q || *q == 0) throw DomainError("vertical block of the morphism must be constant and invertible");
  Scalar sign = *q > 0 ? Scalar(1) : Scalar(-1);
  return normalized({mor.source, ms, pullback_form(mor, t.free), sign * pullback_form(mor, t.coefficient)});
}

AlgForm zero_section_pullback(const ThomForm& t, const AlgebroidPtr& base, const AlgForm& euler) {
  Morphism iota = zero_section(base, t.total);
  return pullback_form(iota, t.free) + wedge(pullback_form(iota, t.coefficient), euler);
}

IntegralResult total_space_integral(const ThomForm& t, const SymplecticForm& sym, const Density& density,
                                    const Domain& domain, Normalization norm, const QuadratureOptions& opts) {
  const AlgebroidPtr& P = sym.model.total;
  const AlgebroidPtr& base = sym.model.base;
  if (t.total->rank() != P->rank() || t.total->base_dim() != P->base_dim())
    throw DimensionError("Thom form does not live on the cotangent model");
  std::size_t r = base->rank(), n = base->base_dim();
  if (!sym.nondegenerate) throw DomainError("symplectic form is degenerate");

  // Theta^r / r! (x) pi^* Omega is invariant on the total space exactly when Omega is.
  Density lifted{P, density.omega.embed(n + r, 0)};
  AlgForm theta = modular_cocycle(lifted);
  if (!theta.vanishes()) throw InvariantError("lifted density is not invariant: modular cocycle is " + theta.to_string());

  Mask vertical = full_mask(2 * r) & ~full_mask(r);
  for (const auto& [mask, v] : t.free.terms())
    if ((mask & vertical) == vertical)
      throw DomainError("Th-free part has a top vertical component and is not compactly supported along the fibers");

  // Th integrates to 1 on fibers oriented by the Liouville form, so c h^1..h^r ^ Th pairs
  // with Theta^r / r! to c. The fiber integral localizes at u = 0.
  ThomForm nt = normalized(t);
  AlgForm horizontal = nt.coefficient.component(r);
  std::vector<std::size_t> vidx;
  for (std::size_t j = 0; j < r; ++j) vidx.push_back(r + j);
  auto s = sym.liouville.as_rational();
  Scalar orient = s && *s < 0 ? Scalar(-1) : Scalar(1);
  AlgForm top = wedge(horizontal, AlgForm::basis(P, vidx, orient));
  Scalar paired = top_coefficient(top) / sym.liouville;
  AlgForm integrand(P);
  integrand.add(full_mask(r), 0, paired);
  AlgForm on_base = restrict_to_base(integrand, base, r);
  return integrate(on_base, density, domain, norm, opts);
}

AlgForm euler_class(const AlgebroidPtr& a, const Metric& g) {
  if (a->rank() % 2) return AlgForm(a);
  return pfaffian(curvature(levi_civita(a, g)), g);
}

IndexResult index_euler(const AlgebroidPtr& a, const Metric& g, const Density& density, const Domain& domain,
                        const QuadratureOptions& opts) {
  std::size_t r = a->rank();
  if (r % 2) {
    IndexResult res = zero_index("odd rank: the Euler form is zero");
    integrate(AlgForm(a), density, domain, {}, opts);  // still rejects a non-invariant density
    return res;
  }
  IndexResult res;
  res.integral = integrate(euler_class(a, g), density, domain, {r / 2, 0}, opts);
  return res;
}

IndexResult index_signature(const AlgebroidPtr& a, const Metric& g, const AlgForm& nu, const Density& density,
                            const Domain& domain, const QuadratureOptions& opts) {
  std::size_t r = a->rank();
  IndexResult res;
  auto k = half_codegree(nu, r, res.notes);
  if (!k) {
    res.integral = integrate(AlgForm(a), density, domain, {}, opts);
    return res;
  }
  AlgForm L = l_genus(curvature(levi_civita(a, g)), r);
  AlgForm integrand = wedge(nu, L).component(r);
  res.integral = integrate(integrand, density, domain, {*k, *k}, opts);
  return res;
}

IndexResult index_dirac(const AlgebroidPtr& a, const Metric& g, const Connection& bundle, const AlgForm& nu,
                        const Density& density, const Domain& domain, const QuadratureOptions& opts) {
  std::size_t r = a->rank();
  if (bundle.algebroid()->rank() != r || bundle.algebroid()->base_dim() != a->base_dim())
    throw DimensionError("twisting connection lives on a different algebroid");
  IndexResult res;
  auto k = half_codegree(nu, r, res.notes);
  if (!k) {
    res.integral = integrate(AlgForm(a), density, domain, {}, opts);
    return res;
  }
  AlgForm A = a_hat_genus(curvature(levi_civita(a, g)), r);
  FormMatrix RE = curvature(bundle);
  AlgForm ch = chern_character(RE, r);
  if (RE.is_zero()) res.notes.push_back("flat twisting bundle: ch reduces to its rank");
  AlgForm integrand = wedge(wedge(nu, A), ch).component(r);
  res.integral = integrate(integrand, density, domain, {*k, *k}, opts);
  return res;
}

SymbolKind parse_symbol(const std::string& token) {
  if (token == "euler_complex") return SymbolKind::euler_complex;
  if (token == "signature_complex") return SymbolKind::signature_complex;
  if (token == "spinor") return SymbolKind::spinor;
  if (token == "other") return SymbolKind::other;
  throw ParseError("unknown symbol kind '" + token + "'", 0, 0);
}

IndexResult index_general(SymbolKind symbol, const AlgebroidPtr& a, const Metric& g, const Connection* bundle,
                          const AlgForm& nu, const Density& density, const Domain& domain,
                          const QuadratureOptions& opts) {
  std::size_t r = a->rank(), p = std::max<std::size_t>(1, r / 2);
  auto reduction = [&](RootsIdentity id) {
    RootsResult rr = roots_identity(id, p, r);
    if (!rr.fitted) throw InvariantError("roots identity " + roots_identity_token(id) + " does not close");
    std::ostringstream os;
    os << "Euler division settled by the " << roots_identity_token(id) << " roots identity (sign " << rr.sign
       << ", 2^" << rr.power_of_two << ", argument scale 2^-" << rr.argument_scale << ")";
    return os.str();
  };
  IndexResult res;
  switch (symbol) {
    case SymbolKind::euler_complex: {
      std::string note = reduction(RootsIdentity::gauss_bonnet);
      if (r % 2) {
        res = zero_index("odd rank: the Euler form is zero");
        integrate(AlgForm(a), density, domain, {}, opts);
      } else {
        AlgForm integrand = wedge(nu, euler_class(a, g)).component(r);
        res.integral = integrate(integrand, density, domain, {r / 2, 0}, opts);
      }
      res.notes.insert(res.notes.begin(), note);
      return res;
    }
    case SymbolKind::signature_complex: {
      std::string note = reduction(RootsIdentity::signature);
      res = index_signature(a, g, nu, density, domain, opts);
      res.notes.insert(res.notes.begin(), note);
      return res;
    }
    case SymbolKind::spinor: {
      std::string note = reduction(RootsIdentity::dirac);
      Connection trivial = Connection::trivial(a, 1);
      res = index_dirac(a, g, bundle ? *bundle : trivial, nu, density, domain, opts);
      res.notes.insert(res.notes.begin(), note);
      return res;
    }
    case SymbolKind::other:
      break;
  }
  throw DomainError(
      "cannot divide by the Euler class for this symbol: a closed-form roots identity expressing "
      "ch(symbol) Td / e as a characteristic class is needed");
}

}  // namespace lalg
