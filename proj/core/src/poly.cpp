#include "lalg/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lalg/error.hpp"

namespace lalg {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  if (s.empty()) throw ParseError("empty rational", 0, 0);
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw ParseError("malformed rational '" + text + "'", 0, 0);
    bool negative = s[0] == '-';
    std::string body = (s[0] == '-' || s[0] == '+') ? s.substr(1) : s;
    dot = body.find('.');
    std::string whole = body.substr(0, dot);
    std::string frac = body.substr(dot + 1);
    if ((whole + frac).empty() ||
        !std::all_of(whole.begin(), whole.end(), ::isdigit) ||
        !std::all_of(frac.begin(), frac.end(), ::isdigit))
      throw ParseError("malformed decimal '" + text + "'", 0, 0);
    mpz_class num(whole.empty() ? std::string("0") : whole);
    mpz_class scale = 1;
    for (char ch : frac) {
      num = num * 10 + (ch - '0');
      scale *= 10;
    }
    Rational r(num, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParseError("malformed rational '" + text + "'", 0, 0);
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + text + "'", 0, 0);
  r.canonicalize();
  return r;
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Poly::Poly(std::size_t nvars, const Rational& c) : nvars_(nvars) {
  if (c != 0) terms_.emplace(Exponents(nvars, 0), c);
}

Poly Poly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw DimensionError("variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  return monomial(e, 1);
}

Poly Poly::monomial(const Exponents& exps, const Rational& c) {
  Poly p(exps.size());
  if (c != 0) p.terms_.emplace(exps, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

std::optional<Rational> Poly::as_constant() const {
  if (!is_constant()) return std::nullopt;
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

std::size_t Poly::total_degree() const {
  if (terms_.empty()) return 0;
  const auto& e = terms_.rbegin()->first;
  return std::accumulate(e.begin(), e.end(), std::size_t{0});
}

const Poly::Terms::value_type& Poly::leading_term() const {
  if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
  return *terms_.rbegin();
}

std::size_t Poly::common_nvars(const Poly& a, const Poly& b) {
  if (a.nvars_ == b.nvars_) return a.nvars_;
  if (a.is_constant()) return b.nvars_;
  if (b.is_constant()) return a.nvars_;
  throw DimensionError("polynomials over different coordinate sets (" + std::to_string(a.nvars_) +
                       " vs " + std::to_string(b.nvars_) + " variables)");
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

namespace {

Poly promote(const Poly& p, std::size_t n) {
  if (p.nvars() == n) return p;
  auto c = p.as_constant();
  return Poly(n, *c);
}

}  // namespace

Poly& Poly::operator+=(const Poly& rhs) {
  std::size_t n = common_nvars(*this, rhs);
  if (nvars_ != n) *this = promote(*this, n);
  if (rhs.nvars_ != n) return *this += promote(rhs, n);
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  std::size_t n = common_nvars(*this, rhs);
  if (nvars_ != n) *this = promote(*this, n);
  if (rhs.nvars_ != n) return *this -= promote(rhs, n);
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  std::size_t n = Poly::common_nvars(a, b);
  if (a.nvars_ != n) return promote(a, n) * b;
  if (b.nvars_ != n) return a * promote(b, n);
  Poly out(n);
  Exponents e(n);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly& Poly::operator*=(const Poly& rhs) { return *this = *this * rhs; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.nvars_ == b.nvars_) return a.terms_ == b.terms_;
  if (a.is_constant() && b.is_constant()) return *a.as_constant() == *b.as_constant();
  return false;
}

Poly Poly::pow(unsigned e) const {
  Poly result(nvars_, 1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

Poly Poly::derive(std::size_t index) const {
  if (index >= nvars_) throw DimensionError("derivative index out of range");
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    Exponents d = e;
    d[index] -= 1;
    out.add_term(d, c * e[index]);
  }
  return out;
}

Rational Poly::eval(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
    total += t;
  }
  return total;
}

double Poly::eval(std::span<const double> point) const {
  if (point.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i] != 0) t *= std::pow(point[i], static_cast<int>(e[i]));
    total += t;
  }
  return total;
}

Poly Poly::substitute(std::span<const Poly> images) const {
  if (images.size() != nvars_) throw DimensionError("substitution needs one image per variable");
  std::size_t n = 0;
  for (const auto& im : images) n = std::max(n, im.nvars());
  Poly out(n);
  for (const auto& [e, c] : terms_) {
    Poly t(n, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i] != 0) t *= images[i].pow(e[i]);
    out += t;
  }
  return out;
}

Poly Poly::embed(std::size_t new_nvars, std::size_t offset) const {
  if (offset + nvars_ > new_nvars) throw DimensionError("embedding does not fit");
  Poly out(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exponents ne(new_nvars, 0);
    std::copy(e.begin(), e.end(), ne.begin() + static_cast<std::ptrdiff_t>(offset));
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
  if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
  std::size_t n = common_nvars(*this, divisor);
  Poly rem = promote(*this, n);
  Poly d = promote(divisor, n);
  Poly quotient(n);
  const auto& [lead_e, lead_c] = d.leading_term();
  while (!rem.is_zero()) {
    const auto& [re, rc] = rem.leading_term();
    Exponents q(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (re[i] < lead_e[i]) return std::nullopt;
      q[i] = re[i] - lead_e[i];
    }
    Poly step = Poly::monomial(q, rc / lead_c);
    quotient += step;
    rem -= step * d;
  }
  return quotient;
}

std::string Poly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
    bool wrote = false;
    if (constant || mag != 1) {
      os << lalg::to_string(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << (i < names.size() ? names[i] : "x" + std::to_string(i + 1));
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

std::string Poly::to_string() const {
  auto names = default_names(nvars_);
  return to_string(names);
}

std::vector<std::string> default_names(std::size_t n, const std::string& stem) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(stem + std::to_string(i + 1));
  return names;
}

}  // namespace lalg
