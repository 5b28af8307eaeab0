#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "document.hpp"
#include "lalg/chern_weil.hpp"
#include "lalg/cohomology.hpp"
#include "lalg/error.hpp"
#include "lalg/groupoid.hpp"
#include "lalg/roots.hpp"
#include "lalg/thom_index.hpp"

namespace lalg::cli {

namespace {

const std::vector<std::string> kOps = {"validate", "cohomology", "charclass", "curvature", "index",
                                       "groupoid", "thom-check", "modular",   "roots"};

json scalar_json(const Scalar& s, const AlgebroidPtr& alg) { return s.to_string(alg->coordinates()); }

json form_json(const AlgForm& w) {
  json terms = json::array();
  for (const auto& [mask, v] : w.terms()) {
    json idx = json::array();
    for (auto i : indices_of(mask)) idx.push_back(i + 1);
    if (w.bundle_rank() == 1) {
      terms.push_back(json::array({idx, scalar_json(v[0], w.algebroid())}));
    } else {
      json comps = json::array();
      for (const auto& s : v) comps.push_back(scalar_json(s, w.algebroid()));
      terms.push_back(json::array({idx, comps}));
    }
  }
  return terms;
}

json report_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& v : r.violations) {
    json e;
    e["kind"] = v.kind;
    e["indices"] = v.indices;
    if (!v.component.empty()) e["component"] = v.component;
    e["residual"] = v.residual_text;
    out.push_back(e);
  }
  return out;
}

std::string rational_text(const Rational& q) { return to_string(q); }

struct ConnectionEntry {
  Connection connection;
  std::optional<Metric> metric;  // set for Levi-Civita connections
};

class Workspace {
 public:
  explicit Workspace(const Document& doc) : root_(doc, doc.root(), "") {}

  const Node& root() const { return root_; }

  Node entity(const std::string& section, const Node& ref) const {
    std::string name = ref.string();
    if (!root_.has(section) || !root_.at(section).has(name)) ref.fail("unknown entry '" + name + "' in " + section);
    return root_.at(section).at(name);
  }

  /// Algebroid as declared, possibly invalid.
  AlgebroidPtr raw_algebroid(const Node& ref) {
    std::string name = ref.string();
    if (auto it = algebroids_.find(name); it != algebroids_.end()) return it->second;
    if (building_.count(name)) ref.fail("algebroid '" + name + "' refers to itself");
    building_.insert(name);
    Node spec = entity("algebroids", ref);
    AlgebroidPtr a = build_algebroid(spec);
    auto named = std::make_shared<Algebroid>(*a);
    named->set_name(name);
    building_.erase(name);
    algebroids_[name] = named;
    return named;
  }

  /// Algebroid that passed validation; throws InvariantError otherwise.
  AlgebroidPtr algebroid(const Node& ref) {
    AlgebroidPtr a = raw_algebroid(ref);
    auto report = a->validate();
    if (!report.valid())
      throw InvariantError("algebroid '" + ref.string() + "' is not valid:\n" + report.to_string());
    return a;
  }

  Metric metric(const Node& ref, AlgebroidPtr* alg_out = nullptr) {
    Node spec = entity("metrics", ref);
    AlgebroidPtr a = algebroid(spec.at("algebroid"));
    if (alg_out) *alg_out = a;
    if (spec.has("identity") && spec.at("identity").boolean()) return Metric::identity(a->rank());
    Node m = spec.at("matrix");
    return Metric(scalar_matrix(m, a, a->rank(), a->rank()));
  }

  ConnectionEntry connection(const Node& ref) {
    bool rep = root_.has("representations") && root_.at("representations").has(ref.string());
    Node spec = entity(rep ? "representations" : "connections", ref);
    std::string kind = spec.at("kind").string();
    if (kind == "levi_civita") {
      AlgebroidPtr a;
      Metric g = metric(spec.at("metric"), &a);
      return {levi_civita(a, g), g};
    }
    AlgebroidPtr a = algebroid(spec.at("algebroid"));
    if (kind == "trivial") return {Connection::trivial(a, spec.index_or("rank", 1)), std::nullopt};
    if (kind == "adjoint") {
      if (a->base_dim() != 0) spec.at("algebroid").fail("adjoint connection needs a Lie algebra");
      return {Representation::adjoint(a).connection(), std::nullopt};
    }
    if (kind == "explicit") {
      std::size_t m = spec.at("rank").index();
      Node gamma = spec.at("gamma");
      if (gamma.size() != a->rank()) gamma.fail("one matrix per frame element is needed");
      std::vector<ScalarMatrix> mats;
      for (std::size_t k = 0; k < a->rank(); ++k) mats.push_back(scalar_matrix(gamma.at(k), a, m, m));
      return {Connection(a, m, std::move(mats)), std::nullopt};
    }
    spec.at("kind").fail("unknown connection kind '" + kind + "'");
  }

  Density density(const Node& ref) {
    Node spec = entity("densities", ref);
    AlgebroidPtr a = algebroid(spec.at("algebroid"));
    return {a, scalar(spec.at("omega"), a)};
  }

  Domain domain(const Node& ref) {
    Node spec = entity("domains", ref);
    std::string kind = spec.at("kind").string();
    if (kind == "point") return Domain::point();
    if (kind == "plane") return Domain::plane();
    if (kind == "box") {
      std::vector<Rational> lo, hi;
      Node l = spec.at("lo"), h = spec.at("hi");
      if (l.size() != h.size()) h.fail("lo and hi need the same length");
      for (std::size_t i = 0; i < l.size(); ++i) {
        lo.push_back(rational(l.at(i)));
        hi.push_back(rational(h.at(i)));
      }
      return Domain::box(lo, hi);
    }
    spec.at("kind").fail("unknown domain kind '" + kind + "'");
  }

  AlgForm form(const Node& ref) {
    Node spec = entity("forms", ref);
    AlgebroidPtr a = algebroid(spec.at("algebroid"));
    return form_terms(spec.at("terms"), a);
  }

  AlgForm form_terms(const Node& terms, const AlgebroidPtr& a) {
    AlgForm w(a);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      Node term = terms.at(t);
      if (term.size() != 2) term.fail("a term is [indices, coefficient]");
      Node idx = term.at(std::size_t{0});
      std::vector<std::size_t> indices;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        std::size_t v = idx.at(i).label();
        if (v >= a->rank()) idx.at(i).fail("frame label out of range");
        indices.push_back(v);
      }
      w += AlgForm::basis(a, indices, scalar(term.at(1), a));
    }
    return w;
  }

  FiniteGroupoid groupoid(const Node& ref) {
    std::string name = ref.string();
    if (building_.count("groupoid:" + name)) ref.fail("groupoid '" + name + "' refers to itself");
    building_.insert("groupoid:" + name);
    Node spec = entity("groupoids", ref);
    std::string kind = spec.at("kind").string();
    auto done = [&](FiniteGroupoid G) {
      building_.erase("groupoid:" + name);
      return G;
    };
    if (kind == "pair") return done(FiniteGroupoid::pair(spec.at("n").index()));
    if (kind == "cyclic") return done(FiniteGroupoid::cyclic(spec.at("n").index()));
    if (kind == "group") {
      Node t = spec.at("table");
      std::vector<std::vector<std::size_t>> table(t.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.at(i).size(); ++j) table[i].push_back(t.at(i).at(j).label());
      return done(FiniteGroupoid::group(table));
    }
    if (kind == "table") {
      std::size_t objects = spec.at("objects").index();
      Node arrows = spec.at("arrows");
      std::vector<std::size_t> s, t;
      std::vector<std::string> names;
      for (std::size_t g = 0; g < arrows.size(); ++g) {
        Node arrow = arrows.at(g);
        s.push_back(arrow.at("source").label());
        t.push_back(arrow.at("target").label());
        names.push_back(arrow.string_or("name", "g" + std::to_string(g + 1)));
      }
      Node tab = spec.at("table");
      std::vector<std::vector<long>> table(tab.size());
      for (std::size_t i = 0; i < tab.size(); ++i)
        for (std::size_t j = 0; j < tab.at(i).size(); ++j) {
          Node cell = tab.at(i).at(j);
          table[i].push_back(cell.value().is_null() ? -1 : static_cast<long>(cell.label()));
        }
      return done(FiniteGroupoid(objects, s, t, table, names));
    }
    if (kind == "union") {
      Node parts = spec.at("parts");
      if (parts.size() == 0) parts.fail("union needs at least one part");
      FiniteGroupoid G = groupoid(parts.at(std::size_t{0}));
      for (std::size_t i = 1; i < parts.size(); ++i) G = FiniteGroupoid::disjoint_union(G, groupoid(parts.at(i)));
      return done(G);
    }
    spec.at("kind").fail("unknown groupoid kind '" + kind + "'");
  }

  Scalar scalar(const Node& n, const AlgebroidPtr& a) {
    std::string text = n.scalar_text();
    try {
      return parse_scalar(text, a->coordinates());
    } catch (const ParseError& e) {
      n.fail("cannot read scalar \"" + text + "\": " + e.what());
    }
  }

  Rational rational(const Node& n) {
    std::string text = n.scalar_text();
    try {
      return parse_rational(text);
    } catch (const std::exception& e) {
      n.fail("cannot read rational \"" + text + "\"");
    }
  }

  ScalarMatrix scalar_matrix(const Node& m, const AlgebroidPtr& a, std::size_t rows, std::size_t cols) {
    if (m.size() != rows) m.fail("expected " + std::to_string(rows) + " rows");
    ScalarMatrix out(rows, cols, Scalar(0));
    for (std::size_t i = 0; i < rows; ++i) {
      Node row = m.at(i);
      if (row.size() != cols) row.fail("expected " + std::to_string(cols) + " entries");
      for (std::size_t j = 0; j < cols; ++j) out(i, j) = scalar(row.at(j), a);
    }
    return out;
  }

  std::vector<std::string> algebroid_names() const {
    std::vector<std::string> out;
    if (!root_.has("algebroids")) return out;
    for (const auto& [k, v] : *root_.at("algebroids").object()) out.push_back(k);
    return out;
  }

 private:
  void brackets(const Node& list, Algebroid& a, const AlgebroidPtr& names) {
    for (std::size_t k = 0; k < list.size(); ++k) {
      Node e = list.at(k);
      if (e.size() != 4) e.fail("a bracket entry is [a, b, c, value]");
      std::size_t x = e.at(std::size_t{0}).label(), y = e.at(1).label(), z = e.at(2).label();
      if (x >= a.rank() || y >= a.rank() || z >= a.rank()) e.fail("frame label out of range");
      a.set_structure(x, y, z, scalar(e.at(3), names));
    }
  }

  std::vector<std::string> coordinates(const Node& spec, std::size_t n) {
    std::vector<std::string> out;
    if (!spec.has("coordinates")) return default_names(n);
    Node c = spec.at("coordinates");
    if (c.size() != n) c.fail("expected " + std::to_string(n) + " coordinate names");
    for (std::size_t i = 0; i < n; ++i) out.push_back(c.at(i).string());
    return out;
  }

  AlgebroidPtr build_algebroid(const Node& spec) {
    std::string kind = spec.at("kind").string();
    if (kind == "builtin") {
      std::string name = spec.at("name").string();
      if (name == "su2") return su2();
      if (name == "aff1") return aff1();
      if (name == "so3_action") return so3_action();
      if (name == "so2_action") return so2_action();
      if (name == "sphere") return sphere_orthonormal();
      spec.at("name").fail("unknown builtin algebroid '" + name + "'");
    }
    if (kind == "tangent") {
      std::size_t n = spec.at("dim").index();
      Algebroid a(n, n, coordinates(spec, n));
      for (std::size_t i = 0; i < n; ++i) a.set_anchor(i, i, Scalar(1));
      return std::make_shared<const Algebroid>(std::move(a));
    }
    if (kind == "abelian_bundle") {
      std::size_t n = spec.at("base_dim").index();
      return std::make_shared<const Algebroid>(Algebroid(n, spec.at("rank").index(), coordinates(spec, n)));
    }
    if (kind == "lie_algebra" || kind == "action" || kind == "presentation") {
      std::size_t r = spec.at(kind == "presentation" ? "rank" : "dim").index();
      std::size_t n = 0;
      if (kind != "lie_algebra") n = spec.has("coordinates") ? spec.at("coordinates").size() : spec.at("base_dim").index();
      auto a = std::make_shared<Algebroid>(n, r, coordinates(spec, n));
      if (spec.has("brackets")) brackets(spec.at("brackets"), *a, a);
      if (kind != "lie_algebra") {
        Node rows = spec.at(kind == "action" ? "fields" : "anchor");
        if (rows.size() != r) rows.fail("expected one row per frame element");
        for (std::size_t x = 0; x < r; ++x) {
          Node row = rows.at(x);
          if (row.size() != n) row.fail("expected one entry per coordinate");
          for (std::size_t i = 0; i < n; ++i) a->set_anchor(x, i, scalar(row.at(i), a));
        }
      }
      return a;
    }
    if (kind == "product") {
      Node f = spec.at("factors");
      if (f.size() == 0) f.fail("product needs at least one factor");
      AlgebroidPtr a = algebroid(f.at(std::size_t{0}));
      for (std::size_t i = 1; i < f.size(); ++i) a = product(a, algebroid(f.at(i)));
      return a;
    }
    if (kind == "pullback") return pullback(algebroid(spec.at("of")), spec.at("fiber_dim").index());
    spec.at("kind").fail("unknown algebroid kind '" + kind + "'");
  }

  Node root_;
  std::map<std::string, AlgebroidPtr> algebroids_;
  std::set<std::string> building_;
};

struct Settings {
  std::optional<std::size_t> truncate;
  double tolerance;
  std::size_t budget;
  bool parallel;
};

struct Outcome {
  json fields = json::object();
  bool violation = false;
};

QuadratureOptions quad(const Settings& s) { return {s.tolerance, s.budget, s.parallel}; }

json integral_json(const IntegralResult& r) {
  json out;
  if (r.exact_raw) out["exact"] = r.to_string();
  out["value"] = r.value.real();
  if (r.value.imag() != 0) out["imaginary"] = r.value.imag();
  out["error"] = r.error;
  out["evaluations"] = r.evaluations;
  out["normalization"] = {{"two_pi_power", r.normalization.pi_power}, {"i_power", r.normalization.i_power}};
  return out;
}

Outcome op_validate(Workspace& ws, const Node& c) {
  Outcome o;
  AlgebroidPtr a = ws.raw_algebroid(c.at("algebroid"));
  auto report = a->validate();
  o.fields["algebroid"] = c.at("algebroid").string();
  o.fields["valid"] = report.valid();
  o.fields["violations"] = report_json(report);
  o.violation = !report.valid();
  return o;
}

Outcome op_cohomology(Workspace& ws, const Node& c) {
  Outcome o;
  AlgebroidPtr a = ws.algebroid(c.at("algebroid"));
  std::string rep_name = c.string_or("representation", "trivial");
  std::optional<Representation> rep;
  if (rep_name == "trivial") rep.emplace(Representation::trivial(a, c.index_or("rank", 1)));
  else if (rep_name == "adjoint") rep.emplace(Representation::adjoint(a));
  else rep.emplace(ws.connection(c.at("representation")).connection);
  o.fields["algebroid"] = c.at("algebroid").string();
  o.fields["representation"] = rep_name;
  if (c.has("form")) {
    AlgForm w = ws.form(c.at("form"));
    if (w.bundle_rank() != rep->bundle_rank()) throw DimensionError("form and representation have different ranks");
    bool closed = is_cocycle(w, *rep);
    o.fields["form"] = c.at("form").string();
    o.fields["cocycle"] = closed;
    if (closed) {
      auto res = find_primitive(w, *rep, c.index_or("ansatz_degree", 2));
      const char* status = res.status == PrimitiveStatus::found       ? "exact"
                           : res.status == PrimitiveStatus::not_exact ? "not exact"
                                                                      : "not found within ansatz";
      o.fields["exactness"] = status;
      if (res.primitive) o.fields["primitive"] = form_json(*res.primitive);
    }
    return o;
  }
  o.fields["betti"] = betti_numbers(*rep);
  return o;
}

Outcome op_charclass(Workspace& ws, const Node& c, const Settings& s) {
  Outcome o;
  ConnectionEntry ce = ws.connection(c.at("connection"));
  const auto& alg = ce.connection.algebroid();
  ClassSpec spec;
  try {
    spec = parse_class(c.at("class").string());
  } catch (const ParseError& e) {
    c.at("class").fail(e.what());
  }
  std::size_t T = s.truncate ? *s.truncate : c.index_or("truncate", alg->rank());
  std::optional<Metric> metric = ce.metric;
  if (c.has("metric")) metric = ws.metric(c.at("metric"));
  std::vector<std::string> notes;
  if ((spec.kind == ClassKind::pfaffian || spec.kind == ClassKind::euler) && !metric)
    notes.push_back("no metric given: Pfaffian taken in the frame");
  AlgForm w = char_class(ce.connection, spec, T, metric ? &*metric : nullptr, &notes);
  o.fields["connection"] = c.at("connection").string();
  o.fields["class"] = class_token(spec);
  o.fields["truncation"] = std::min(T, alg->rank());
  json comps = json::object();
  for (std::size_t k = 0; k <= std::min(T, alg->rank()); ++k) {
    AlgForm part = w.component(k);
    if (!part.is_zero()) comps[std::to_string(k)] = form_json(part);
  }
  o.fields["components"] = comps;
  o.fields["closed"] = d(w).vanishes();
  o.fields["notes"] = notes;
  return o;
}

Outcome op_curvature(Workspace& ws, const Node& c) {
  Outcome o;
  ConnectionEntry ce = ws.connection(c.at("connection"));
  FormMatrix R = curvature(ce.connection);
  json rows = json::array();
  for (std::size_t i = 0; i < R.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < R.size(); ++j) row.push_back(form_json(R(i, j)));
    rows.push_back(row);
  }
  o.fields["connection"] = c.at("connection").string();
  o.fields["flat"] = R.is_zero();
  o.fields["curvature"] = rows;
  FormMatrix B = covariant_derivative(R, ce.connection);
  bool bianchi = true;
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) bianchi = bianchi && B(i, j).vanishes();
  o.fields["bianchi"] = bianchi;
  if (ce.metric) {
    auto report = levi_civita_residuals(ce.connection, *ce.metric);
    o.fields["levi_civita_residuals"] = report_json(report);
    o.violation = !report.valid();
  }
  o.violation = o.violation || !bianchi;
  return o;
}

Outcome op_index(Workspace& ws, const Node& c, const Settings& s) {
  Outcome o;
  std::string kind = c.at("kind").string();
  AlgebroidPtr a;
  Metric g = ws.metric(c.at("metric"), &a);
  Density om = ws.density(c.at("density"));
  Domain dom = ws.domain(c.at("domain"));
  AlgForm nu = c.has("nu") ? ws.form(c.at("nu")) : AlgForm::function(a, Scalar(1));
  std::optional<ConnectionEntry> bundle;
  if (c.has("bundle")) bundle = ws.connection(c.at("bundle"));
  IndexResult res;
  if (kind == "euler") {
    res = index_euler(a, g, om, dom, quad(s));
  } else if (kind == "signature") {
    res = index_signature(a, g, nu, om, dom, quad(s));
  } else if (kind == "dirac") {
    Connection E = bundle ? bundle->connection : Connection::trivial(a, 1);
    res = index_dirac(a, g, E, nu, om, dom, quad(s));
  } else if (kind == "general") {
    SymbolKind sym = SymbolKind::other;
    try {
      sym = parse_symbol(c.at("symbol").string());
    } catch (const ParseError& e) {
      c.at("symbol").fail(e.what());
    }
    res = index_general(sym, a, g, bundle ? &bundle->connection : nullptr, nu, om, dom, quad(s));
  } else {
    c.at("kind").fail("unknown index kind '" + kind + "'");
  }
  o.fields["kind"] = kind;
  json integral = integral_json(res.integral);
  for (auto& [k, v] : integral.items()) o.fields[k] = v;
  o.fields["notes"] = res.notes;
  return o;
}

Outcome op_groupoid(Workspace& ws, const Node& c) {
  Outcome o;
  FiniteGroupoid G = ws.groupoid(c.at("groupoid"));
  FiniteRep E = FiniteRep::trivial(G, c.index_or("dim", 1));
  std::size_t max_degree = c.index_or("max_degree", 3);
  o.fields["groupoid"] = c.at("groupoid").string();
  o.fields["objects"] = G.objects();
  o.fields["arrows"] = G.arrows();
  o.fields["orbits"] = G.orbit_count();
  o.fields["betti"] = groupoid_betti(G, E, max_degree);
  bool dd = true;
  for (std::size_t k = 0; k < max_degree; ++k) {
    RationalMatrix D2 = groupoid_differential(G, E, k + 1) * groupoid_differential(G, E, k);
    for (std::size_t i = 0; i < D2.rows() && dd; ++i)
      for (std::size_t j = 0; j < D2.cols() && dd; ++j) dd = D2(i, j) == 0;
  }
  o.fields["d_squared_zero"] = dd;
  o.violation = !dd;
  auto function = [&](const Node& n) {
    if (n.size() != G.arrows()) n.fail("expected one value per arrow");
    ArrowFunction f;
    for (std::size_t i = 0; i < n.size(); ++i) f.push_back(ws.rational(n.at(i)));
    return f;
  };
  auto text = [](const ArrowFunction& f) {
    json out = json::array();
    for (const auto& q : f) out.push_back(rational_text(q));
    return out;
  };
  std::optional<ArrowFunction> f1, f2;
  if (c.has("f1") && c.has("f2")) {
    f1 = function(c.at("f1"));
    f2 = function(c.at("f2"));
    o.fields["convolution"] = text(convolve(G, *f1, *f2));
  }
  if (c.has("weights")) {
    Node wn = c.at("weights");
    if (wn.size() != G.objects()) wn.fail("expected one weight per object");
    std::vector<Rational> w;
    for (std::size_t i = 0; i < wn.size(); ++i) w.push_back(ws.rational(wn.at(i)));
    if (auto bad = trace_counterexample(G, w)) {
      o.violation = true;
      o.fields["weights_invariant"] = false;
      o.fields["counterexample"] = {{"f1", "delta " + G.arrow_name(bad->arrow)},
                                    {"f2", "delta " + G.arrow_name(G.inverse(bad->arrow))},
                                    {"trace_f1_f2", rational_text(bad->forward)},
                                    {"trace_f2_f1", rational_text(bad->backward)}};
    } else {
      o.fields["weights_invariant"] = true;
      if (f1) {
        o.fields["trace_f1_f2"] = rational_text(trace(G, convolve(G, *f1, *f2), w));
        o.fields["trace_f2_f1"] = rational_text(trace(G, convolve(G, *f2, *f1), w));
      }
    }
  }
  return o;
}

Outcome op_thom_check(Workspace& ws, const Node& c, const Settings& s) {
  Outcome o;
  AlgebroidPtr a = ws.algebroid(c.at("algebroid"));
  Density om = ws.density(c.at("density"));
  Domain dom = ws.domain(c.at("domain"));
  AlgForm alpha = c.has("form") ? ws.form(c.at("form")) : AlgForm::top(a);
  SymplecticForm sym = symplectic_form(a);
  ThomForm t = thom_map(alpha, sym.model.total);
  bool round_trip = (fiber_integrate(t, a) - alpha).vanishes();
  IntegralResult base = integrate(alpha, om, dom, {}, quad(s));
  IntegralResult total = total_space_integral(t, sym, om, dom, {}, quad(s));
  bool agree;
  if (base.exact_raw && total.exact_raw) agree = *base.exact_raw == *total.exact_raw;
  else agree = std::abs(base.value - total.value) <= 1e-9;
  o.fields["algebroid"] = c.at("algebroid").string();
  o.fields["symplectic_form"] = form_json(sym.theta);
  o.fields["symplectic_closed"] = sym.closed;
  o.fields["nondegenerate"] = sym.nondegenerate;
  o.fields["fiber_integral_round_trip"] = round_trip;
  o.fields["base_integral"] = integral_json(base);
  o.fields["total_integral"] = integral_json(total);
  o.fields["agree"] = agree;
  o.violation = !(sym.closed && sym.nondegenerate && round_trip && agree);
  return o;
}

Outcome op_modular(Workspace& ws, const Node& c) {
  Outcome o;
  Density om = ws.density(c.at("density"));
  AlgForm theta = modular_cocycle(om);
  o.fields["density"] = c.at("density").string();
  o.fields["cocycle"] = form_json(theta);
  o.fields["invariant"] = theta.vanishes();
  return o;
}

Outcome op_roots(const Node& c, const Settings& s) {
  Outcome o;
  RootsIdentity id = RootsIdentity::gauss_bonnet;
  try {
    id = parse_roots_identity(c.at("identity").string());
  } catch (const ParseError& e) {
    c.at("identity").fail(e.what());
  }
  std::size_t p = c.at("half_rank").index();
  std::size_t T = s.truncate ? *s.truncate : c.index_or("truncate", 2 * p);
  RootsResult r = roots_identity(id, p, T);
  auto names = default_names(p);
  o.fields["identity"] = roots_identity_token(id);
  o.fields["half_rank"] = p;
  o.fields["truncation"] = T;
  o.fields["lhs"] = r.lhs.to_string(names);
  o.fields["rhs"] = r.rhs.to_string(names);
  o.fields["residual"] = r.residual.to_string(names);
  o.fields["fitted"] = r.fitted;
  o.fields["normalization"] = {{"sign", r.sign}, {"power_of_two", r.power_of_two}, {"argument_scale", r.argument_scale}};
  o.violation = !r.fitted;
  return o;
}

Outcome dispatch(Workspace& ws, const std::string& op, const Node& c, const Settings& s) {
  if (op == "validate") return op_validate(ws, c);
  if (op == "cohomology") return op_cohomology(ws, c);
  if (op == "charclass") return op_charclass(ws, c, s);
  if (op == "curvature") return op_curvature(ws, c);
  if (op == "index") return op_index(ws, c, s);
  if (op == "groupoid") return op_groupoid(ws, c);
  if (op == "thom-check") return op_thom_check(ws, c, s);
  if (op == "modular") return op_modular(ws, c);
  if (op == "roots") return op_roots(c, s);
  c.at("op").fail("unknown op '" + op + "'");
}

std::string render_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render_text(const json& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << "[" << r["index"].get<std::size_t>() << "] " << r["op"].get<std::string>() << ": "
       << r["status"].get<std::string>() << "\n";
    for (const auto& [k, v] : r.items()) {
      if (k == "index" || k == "op" || k == "status") continue;
      if (v.is_array() && v.empty() && k == "notes") continue;
      os << "  " << k << ": " << render_value(v) << "\n";
    }
  }
  return os.str();
}

}  // namespace

RunOutput run(const std::string& text, const RunOptions& opts) {
  RunOutput out;
  if (opts.command != "run" && std::find(kOps.begin(), kOps.end(), opts.command) == kOps.end()) {
    out.err = "unknown command '" + opts.command + "'\n";
    out.exit_code = 2;
    return out;
  }
  Settings s{opts.truncate, opts.tolerance.value_or(1e-9), opts.budget.value_or(4'000'000), opts.parallel};
  json results = json::array();
  bool violation = false, failed = false;
  try {
    Document doc = Document::parse(text);
    Workspace ws(doc);
    const Node& root = ws.root();
    for (const auto& [k, v] : *root.object()) {
      static const std::set<std::string> known = {"algebroids", "metrics",   "connections", "densities",  "domains",
                                                  "forms",      "groupoids", "computations", "description",
                                                  "scalars",    "representations"};
      if (!known.count(k)) root.at(k).fail("unknown section '" + k + "'");
    }
    if (root.has("scalars") && root.at("scalars").string() != "exact")
      root.at("scalars").fail("only the exact scalar backend is available");
    std::vector<std::pair<std::size_t, Node>> todo;
    if (root.has("computations")) {
      Node comps = root.at("computations");
      for (std::size_t i = 0; i < comps.size(); ++i) {
        Node c = comps.at(i);
        std::string op = c.at("op").string();
        if (op != "run" && std::find(kOps.begin(), kOps.end(), op) == kOps.end())
          c.at("op").fail("unknown op '" + op + "'");
        if (opts.command == "run" || op == opts.command) todo.emplace_back(i, c);
      }
    }
    if (opts.command == "validate" && todo.empty()) {
      for (const auto& name : ws.algebroid_names()) {
        AlgebroidPtr a = ws.raw_algebroid(Node(doc, json(name), "/algebroids/" + name));
        auto report = a->validate();
        json r;
        r["index"] = results.size() + 1;
        r["op"] = "validate";
        r["status"] = report.valid() ? "ok" : "violation";
        r["algebroid"] = name;
        r["valid"] = report.valid();
        r["violations"] = report_json(report);
        violation = violation || !report.valid();
        results.push_back(r);
      }
    }
    for (auto& [i, c] : todo) {
      std::string op = c.at("op").string();
      json r;
      r["index"] = i + 1;
      r["op"] = op;
      try {
        Outcome o = dispatch(ws, op, c, s);
        r["status"] = o.violation ? "violation" : "ok";
        for (auto& [k, v] : o.fields.items()) r[k] = v;
        violation = violation || o.violation;
      } catch (const SchemaError&) {
        throw;
      } catch (const std::exception& e) {
        auto [line, col] = doc.locate(c.pointer());
        r["status"] = "error";
        r["error"] = e.what();
        r["line"] = line;
        r["column"] = col;
        failed = true;
      }
      results.push_back(r);
    }
  } catch (const SchemaError& e) {
    out.err = "error: line " + std::to_string(e.line()) + ", column " + std::to_string(e.column()) + ": " + e.what() + "\n";
    out.exit_code = 2;
    return out;
  }
  std::string status = failed ? "error" : violation ? "violation" : "ok";
  if (opts.json) {
    json doc;
    doc["status"] = status;
    doc["results"] = results;
    out.out = doc.dump(2) + "\n";
  } else {
    out.out = render_text(results);
  }
  out.exit_code = (failed || violation) ? 1 : 0;
  return out;
}

}  // namespace lalg::cli
