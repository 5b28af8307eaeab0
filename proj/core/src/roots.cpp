#include "lalg/roots.hpp"

#include <map>

#include "lalg/error.hpp"

namespace lalg {

namespace {

// Per-root factor of the left side, already divided by the root.
Series lhs_factor(RootsIdentity id, std::size_t order) {
  std::size_t o = order + 2;
  Series q = todd_series(o);
  Series q_neg = q.rescale(-1);
  Series td = q * q_neg;
  Series num(o);
  switch (id) {
    case RootsIdentity::gauss_bonnet:
      num = (Series::one(o) - Series::exp(o, 1)) * (Series::one(o) - Series::exp(o, -1));
      break;
    case RootsIdentity::signature:
      num = Series::exp(o, -1) - Series::exp(o, 1);
      break;
    case RootsIdentity::dirac:
      num = Series::exp(o, Rational(1, 2)) - Series::exp(o, Rational(-1, 2));
      break;
  }
  return (num * td).shift_down();
}

Series rhs_factor(RootsIdentity id, std::size_t order) {
  switch (id) {
    case RootsIdentity::gauss_bonnet: {
      Series x(order);
      if (order >= 1) x[1] = 1;
      return x;
    }
    case RootsIdentity::signature: return l_series(order);
    case RootsIdentity::dirac: return a_hat_series(order);
  }
  return Series(order);
}

Poly product_over_roots(const Series& s, std::size_t p, std::size_t degree) {
  Poly out(p, 1);
  for (std::size_t j = 0; j < p; ++j) out = truncate_degree(out * series_in(s, p, j, degree), degree);
  return out;
}

std::map<std::size_t, Poly> by_degree(const Poly& p) {
  std::map<std::size_t, Poly> out;
  for (const auto& [e, c] : p.terms()) {
    std::size_t k = 0;
    for (auto v : e) k += v;
    auto it = out.try_emplace(k, Poly(p.nvars())).first;
    it->second += Poly::monomial(e, c);
  }
  return out;
}

// Exponent of 2 when |q| is a power of two.
std::optional<int> log2_exact(Rational q) {
  if (q < 0) q = -q;
  if (q == 0) return std::nullopt;
  int e = 0;
  mpz_class num = q.get_num(), den = q.get_den();
  while (num % 2 == 0) {
    num /= 2;
    ++e;
  }
  while (den % 2 == 0) {
    den /= 2;
    --e;
  }
  if (num != 1 || den != 1) return std::nullopt;
  return e;
}

Rational pow2(int e) {
  Rational r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= 2;
  return e >= 0 ? r : Rational(1) / r;
}

}  // namespace

RootsIdentity parse_roots_identity(const std::string& token) {
  if (token == "gauss_bonnet") return RootsIdentity::gauss_bonnet;
  if (token == "signature") return RootsIdentity::signature;
  if (token == "dirac") return RootsIdentity::dirac;
  throw ParseError("unknown roots identity '" + token + "'", 0, 0);
}

std::string roots_identity_token(RootsIdentity id) {
  switch (id) {
    case RootsIdentity::gauss_bonnet: return "gauss_bonnet";
    case RootsIdentity::signature: return "signature";
    case RootsIdentity::dirac: return "dirac";
  }
  return "";
}

Poly series_in(const Series& s, std::size_t nvars, std::size_t var, std::size_t degree) {
  Poly out(nvars);
  for (std::size_t k = 0; k <= degree && k <= s.order(); ++k) {
    if (s[k] == 0) continue;
    Exponents e(nvars, 0);
    e[var] = static_cast<std::uint32_t>(k);
    out += Poly::monomial(e, s[k]);
  }
  return out;
}

Poly truncate_degree(const Poly& p, std::size_t degree) {
  Poly out(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    std::size_t k = 0;
    for (auto v : e) k += v;
    if (k <= degree) out += Poly::monomial(e, c);
  }
  return out;
}

RootsResult roots_identity(RootsIdentity id, std::size_t p, std::size_t truncation) {
  if (p == 0) throw DimensionError("roots identity needs at least one root");
  std::size_t D = truncation / 2;
  RootsResult res;
  res.lhs = product_over_roots(lhs_factor(id, D), p, D);
  res.rhs = product_over_roots(rhs_factor(id, D), p, D);

  auto L = by_degree(res.lhs), R = by_degree(res.rhs);
  std::map<std::size_t, Rational> ratio;
  bool ok = true;
  for (const auto& [k, rk] : R) {
    auto it = L.find(k);
    if (it == L.end()) {
      ok = false;
      continue;
    }
    Rational lam = it->second.leading_term().second / rk.leading_term().second;
    if (!(it->second - lam * rk).is_zero()) ok = false;
    ratio[k] = lam;
  }
  for (const auto& [k, lk] : L)
    if (!R.count(k)) ok = false;

  // lambda_k = sign 2^a 2^{-b k}
  if (ok && !ratio.empty()) {
    std::vector<std::pair<std::size_t, int>> logs;
    int sign = 0;
    for (const auto& [k, lam] : ratio) {
      auto e = log2_exact(lam);
      int s = lam < 0 ? -1 : 1;
      if (!e || (sign != 0 && s != sign)) {
        ok = false;
        break;
      }
      sign = s;
      logs.emplace_back(k, *e);
    }
    if (ok) {
      int b = 0;
      if (logs.size() >= 2) {
        int dk = static_cast<int>(logs[1].first) - static_cast<int>(logs[0].first);
        int de = logs[0].second - logs[1].second;
        if (de % dk != 0) ok = false;
        else b = de / dk;
      }
      int a = logs[0].second + b * static_cast<int>(logs[0].first);
      for (const auto& [k, e] : logs)
        if (e != a - b * static_cast<int>(k)) ok = false;
      if (ok) {
        res.sign = sign;
        res.power_of_two = a;
        res.argument_scale = b;
      }
    }
  }
  Poly scaled(res.rhs.nvars());
  for (const auto& [k, rk] : R) scaled += (Rational(res.sign) * pow2(res.power_of_two - res.argument_scale * static_cast<int>(k))) * rk;
  res.residual = res.lhs - scaled;
  res.fitted = ok && res.residual.is_zero();
  return res;
}

}  // namespace lalg
