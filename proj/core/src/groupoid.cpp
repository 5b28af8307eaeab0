#include "lalg/groupoid.hpp"

#include <map>
#include <numeric>

#include "lalg/error.hpp"

namespace lalg {

FiniteGroupoid::FiniteGroupoid(std::size_t objects, std::vector<std::size_t> source, std::vector<std::size_t> target,
                               std::vector<std::vector<long>> table, std::vector<std::string> arrow_names)
    : objects_(objects), source_(std::move(source)), target_(std::move(target)), table_(std::move(table)),
      names_(std::move(arrow_names)) {
  std::size_t N = source_.size();
  if (target_.size() != N || table_.size() != N) throw DimensionError("groupoid tables have inconsistent sizes");
  if (names_.empty())
    for (std::size_t g = 0; g < N; ++g) names_.push_back("g" + std::to_string(g + 1));
  if (names_.size() != N) throw DimensionError("one name per arrow is needed");
  for (std::size_t g = 0; g < N; ++g) {
    if (source_[g] >= objects_ || target_[g] >= objects_) throw DimensionError("arrow endpoint out of range");
    if (table_[g].size() != N) throw DimensionError("composition table must be square");
  }
  auto fail = [](const std::string& what) { throw InvariantError("groupoid axiom fails: " + what); };
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N; ++h) {
      long gh = table_[g][h];
      bool composable = target_[g] == source_[h];
      if (composable != (gh >= 0))
        fail("mul(" + names_[g] + ", " + names_[h] + ") must be defined exactly when t(" + names_[g] + ") = s(" +
             names_[h] + ")");
      if (gh >= 0) {
        if (static_cast<std::size_t>(gh) >= N) throw DimensionError("composition result out of range");
        if (source_[gh] != source_[g] || target_[gh] != target_[h])
          fail("mul(" + names_[g] + ", " + names_[h] + ") has the wrong endpoints");
      }
    }
  unit_.assign(objects_, N);
  for (std::size_t x = 0; x < objects_; ++x)
    for (std::size_t e = 0; e < N && unit_[x] == N; ++e) {
      if (source_[e] != x || target_[e] != x) continue;
      bool ok = true;
      for (std::size_t g = 0; g < N && ok; ++g) {
        if (source_[g] == x && table_[e][g] != static_cast<long>(g)) ok = false;
        if (target_[g] == x && table_[g][e] != static_cast<long>(g)) ok = false;
      }
      if (ok) unit_[x] = e;
    }
  for (std::size_t x = 0; x < objects_; ++x)
    if (unit_[x] == N) fail("object " + std::to_string(x + 1) + " has no unit arrow");
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N; ++h) {
      if (table_[g][h] < 0) continue;
      for (std::size_t k = 0; k < N; ++k) {
        if (table_[h][k] < 0) continue;
        long left = table_[table_[g][h]][k], right = table_[g][table_[h][k]];
        if (left != right) fail("associativity on (" + names_[g] + ", " + names_[h] + ", " + names_[k] + ")");
      }
    }
  inverse_.assign(N, N);
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N && inverse_[g] == N; ++h)
      if (table_[g][h] == static_cast<long>(unit_[source_[g]]) && table_[h][g] == static_cast<long>(unit_[target_[g]]))
        inverse_[g] = h;
  for (std::size_t g = 0; g < N; ++g)
    if (inverse_[g] == N) fail(names_[g] + " has no inverse");
}

FiniteGroupoid FiniteGroupoid::pair(std::size_t n) {
  std::size_t N = n * n;
  std::vector<std::size_t> s(N), t(N);
  std::vector<std::vector<long>> table(N, std::vector<long>(N, -1));
  std::vector<std::string> names(N);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t g = a * n + b;
      s[g] = a;
      t[g] = b;
      names[g] = "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
      for (std::size_t c = 0; c < n; ++c) table[g][b * n + c] = static_cast<long>(a * n + c);
    }
  return FiniteGroupoid(n, s, t, table, names);
}

FiniteGroupoid FiniteGroupoid::group(const std::vector<std::vector<std::size_t>>& table) {
  std::size_t N = table.size();
  std::vector<std::vector<long>> t(N, std::vector<long>(N));
  for (std::size_t g = 0; g < N; ++g) {
    if (table[g].size() != N) throw DimensionError("group table must be square");
    for (std::size_t h = 0; h < N; ++h) t[g][h] = static_cast<long>(table[g][h]);
  }
  return FiniteGroupoid(1, std::vector<std::size_t>(N, 0), std::vector<std::size_t>(N, 0), t);
}

FiniteGroupoid FiniteGroupoid::cyclic(std::size_t n) {
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return group(table);
}

FiniteGroupoid FiniteGroupoid::disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  std::size_t Na = a.arrows(), N = Na + b.arrows(), Ma = a.objects();
  std::vector<std::size_t> s, t;
  std::vector<std::string> names;
  std::vector<std::vector<long>> table(N, std::vector<long>(N, -1));
  for (std::size_t g = 0; g < Na; ++g) {
    s.push_back(a.source(g));
    t.push_back(a.target(g));
    names.push_back(a.arrow_name(g));
    for (std::size_t h = 0; h < Na; ++h)
      if (auto gh = a.mul(g, h)) table[g][h] = static_cast<long>(*gh);
  }
  for (std::size_t g = 0; g < b.arrows(); ++g) {
    s.push_back(Ma + b.source(g));
    t.push_back(Ma + b.target(g));
    names.push_back(b.arrow_name(g) + "'");
    for (std::size_t h = 0; h < b.arrows(); ++h)
      if (auto gh = b.mul(g, h)) table[Na + g][Na + h] = static_cast<long>(Na + *gh);
  }
  return FiniteGroupoid(Ma + b.objects(), s, t, table, names);
}

std::optional<std::size_t> FiniteGroupoid::mul(std::size_t g, std::size_t h) const {
  long v = table_.at(g).at(h);
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> FiniteGroupoid::orbits() const {
  std::vector<std::size_t> parent(objects_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t g = 0; g < arrows(); ++g) {
    std::size_t a = find(source_[g]), b = find(target_[g]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::size_t> label;
  std::vector<std::size_t> out(objects_);
  for (std::size_t x = 0; x < objects_; ++x) out[x] = label.emplace(find(x), label.size()).first->second;
  return out;
}

std::size_t FiniteGroupoid::orbit_count() const {
  auto o = orbits();
  std::size_t count = 0;
  for (auto v : o) count = std::max(count, v + 1);
  return count;
}

FiniteRep FiniteRep::trivial(const FiniteGroupoid& G, std::size_t dim) {
  FiniteRep E;
  E.dims.assign(G.objects(), dim);
  E.lambda.assign(G.arrows(), RationalMatrix::identity(dim));
  return E;
}

std::vector<std::string> validate_rep(const FiniteGroupoid& G, const FiniteRep& E) {
  std::vector<std::string> out;
  if (E.dims.size() != G.objects() || E.lambda.size() != G.arrows()) {
    out.push_back("representation needs one dimension per object and one matrix per arrow");
    return out;
  }
  auto equal = [](const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a(i, j) != b(i, j)) return false;
    return true;
  };
  for (std::size_t g = 0; g < G.arrows(); ++g) {
    const auto& L = E.lambda[g];
    if (L.rows() != E.dims[G.target(g)] || L.cols() != E.dims[G.source(g)])
      out.push_back("lambda(" + G.arrow_name(g) + ") must map E_s to E_t");
  }
  if (!out.empty()) return out;
  for (std::size_t x = 0; x < G.objects(); ++x)
    if (!equal(E.lambda[G.unit(x)], RationalMatrix::identity(E.dims[x])))
      out.push_back("lambda of the unit at object " + std::to_string(x + 1) + " is not the identity");
  for (std::size_t g = 0; g < G.arrows(); ++g)
    for (std::size_t h = 0; h < G.arrows(); ++h)
      if (auto gh = G.mul(g, h))
        if (!equal(E.lambda[*gh], E.lambda[h] * E.lambda[g]))
          out.push_back("lambda(mul(" + G.arrow_name(g) + ", " + G.arrow_name(h) + ")) != lambda(" + G.arrow_name(h) +
                        ") lambda(" + G.arrow_name(g) + ")");
  return out;
}

std::vector<std::vector<std::size_t>> nerve(const FiniteGroupoid& G, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k == 0) {
    for (std::size_t x = 0; x < G.objects(); ++x) out.push_back({x});
    return out;
  }
  for (std::size_t g = 0; g < G.arrows(); ++g) out.push_back({g});
  for (std::size_t len = 1; len < k; ++len) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : out)
      for (std::size_t g = 0; g < G.arrows(); ++g)
        if (G.source(t.back()) == G.target(g)) {
          next.push_back(t);
          next.back().push_back(g);
        }
    out = std::move(next);
  }
  return out;
}

namespace {

// Position of each (tuple, component) in the cochain vector.
struct CochainIndex {
  std::map<std::vector<std::size_t>, std::size_t> offset;
  std::size_t size = 0;
};

std::size_t value_object(const FiniteGroupoid& G, const std::vector<std::size_t>& t, std::size_t k) {
  return k == 0 ? t[0] : G.target(t[0]);
}

CochainIndex index_cochains(const FiniteGroupoid& G, const FiniteRep& E, std::size_t k) {
  CochainIndex idx;
  for (const auto& t : nerve(G, k)) {
    idx.offset[t] = idx.size;
    idx.size += E.dims[value_object(G, t, k)];
  }
  return idx;
}

}  // namespace

RationalMatrix groupoid_differential(const FiniteGroupoid& G, const FiniteRep& E, std::size_t k) {
  CochainIndex from = index_cochains(G, E, k), to = index_cochains(G, E, k + 1);
  RationalMatrix D(to.size, from.size, 0);
  for (const auto& [t, row0] : to.offset) {
    std::size_t dim = E.dims[G.target(t[0])];
    auto add = [&](const std::vector<std::size_t>& face, const RationalMatrix* map, const Rational& sign) {
      std::size_t col0 = from.offset.at(face);
      for (std::size_t i = 0; i < dim; ++i) {
        if (map) {
          for (std::size_t j = 0; j < map->cols(); ++j) D(row0 + i, col0 + j) += sign * (*map)(i, j);
        } else {
          D(row0 + i, col0 + i) += sign;
        }
      }
    };
    // lambda_{g1} phi(g2, ..., g_{k+1}); for k = 0 phi at s(g1).
    std::vector<std::size_t> tail = k == 0 ? std::vector<std::size_t>{G.source(t[0])}
                                           : std::vector<std::size_t>(t.begin() + 1, t.end());
    add(tail, &E.lambda[t[0]], 1);
    for (std::size_t i = 1; i <= k; ++i) {
      // g_i composed with g_{i+1}: g_{i+1} first, then g_i.
      std::vector<std::size_t> face;
      for (std::size_t j = 0; j + 1 < i; ++j) face.push_back(t[j]);
      face.push_back(*G.mul(t[i], t[i - 1]));
      for (std::size_t j = i + 1; j < t.size(); ++j) face.push_back(t[j]);
      add(face, nullptr, i % 2 ? Rational(-1) : Rational(1));
    }
    std::vector<std::size_t> head = k == 0 ? std::vector<std::size_t>{G.target(t[0])}
                                           : std::vector<std::size_t>(t.begin(), t.end() - 1);
    add(head, nullptr, (k + 1) % 2 ? Rational(-1) : Rational(1));
  }
  return D;
}

std::vector<std::size_t> groupoid_betti(const FiniteGroupoid& G, const FiniteRep& E, std::size_t max_degree) {
  auto problems = validate_rep(G, E);
  if (!problems.empty()) throw InvariantError("not a representation: " + problems.front());
  std::vector<std::size_t> ranks(max_degree + 1), dims(max_degree + 1), out(max_degree + 1);
  for (std::size_t k = 0; k <= max_degree; ++k) {
    RationalMatrix D = groupoid_differential(G, E, k);
    dims[k] = D.cols();
    ranks[k] = rank(D);
  }
  for (std::size_t k = 0; k <= max_degree; ++k) out[k] = dims[k] - ranks[k] - (k ? ranks[k - 1] : 0);
  return out;
}

ArrowFunction convolve(const FiniteGroupoid& G, const ArrowFunction& f1, const ArrowFunction& f2) {
  std::size_t N = G.arrows();
  if (f1.size() != N || f2.size() != N) throw DimensionError("arrow functions need one value per arrow");
  ArrowFunction out(N, 0);
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N; ++h) {
      if (G.target(h) != G.target(g) || f2[h] == 0) continue;
      std::size_t gh = *G.mul(g, G.inverse(h));
      out[g] += f1[gh] * f2[h];
    }
  return out;
}

ArrowFunction unit_function(const FiniteGroupoid& G) {
  ArrowFunction f(G.arrows(), 0);
  for (std::size_t x = 0; x < G.objects(); ++x) f[G.unit(x)] = 1;
  return f;
}

ArrowFunction delta(const FiniteGroupoid& G, std::size_t g) {
  ArrowFunction f(G.arrows(), 0);
  f.at(g) = 1;
  return f;
}

namespace {

Rational raw_trace(const FiniteGroupoid& G, const ArrowFunction& f, const std::vector<Rational>& w) {
  Rational total = 0;
  for (std::size_t x = 0; x < G.objects(); ++x) total += f[G.unit(x)] * w[x];
  return total;
}

}  // namespace

std::optional<TraceCounterexample> trace_counterexample(const FiniteGroupoid& G, const std::vector<Rational>& weights) {
  if (weights.size() != G.objects()) throw DimensionError("one weight per object is needed");
  for (std::size_t g = 0; g < G.arrows(); ++g) {
    if (weights[G.source(g)] == weights[G.target(g)]) continue;
    ArrowFunction a = delta(G, g), b = delta(G, G.inverse(g));
    return TraceCounterexample{g, raw_trace(G, convolve(G, a, b), weights), raw_trace(G, convolve(G, b, a), weights)};
  }
  return std::nullopt;
}

Rational trace(const FiniteGroupoid& G, const ArrowFunction& f, const std::vector<Rational>& weights) {
  if (f.size() != G.arrows()) throw DimensionError("arrow functions need one value per arrow");
  for (const auto& w : weights)
    if (w <= 0) throw DomainError("object weights must be positive");
  if (auto bad = trace_counterexample(G, weights)) {
    const std::string& g = G.arrow_name(bad->arrow);
    throw InvariantError("weights are not constant on orbits: tau(delta_" + g + " * delta_" + g + "^-1) = " +
                         to_string(bad->forward) + " but tau(delta_" + g + "^-1 * delta_" + g +
                         ") = " + to_string(bad->backward));
  }
  return raw_trace(G, f, weights);
}

}  // namespace lalg
