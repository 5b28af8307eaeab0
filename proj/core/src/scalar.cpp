#include "lalg/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include "lalg/error.hpp"

namespace lalg {

namespace {

// Splits p = c * monic(p), c the leading coefficient.
std::pair<Rational, Poly> make_monic(const Poly& p) {
  Rational lead = p.leading_term().second;
  Poly q = p;
  q *= Rational(1) / lead;
  return {lead, q};
}

}  // namespace

const Poly& Scalar::numerator() const {
  if (expr_) throw DomainError("numeric scalar has no polynomial numerator");
  return num_;
}

Expr Scalar::to_expr() const {
  if (expr_) return *expr_;
  Expr out = Expr::from_poly(num_);
  for (const auto& f : den_) out = out / Expr::from_poly(f.base).pow(f.power);
  return out;
}

bool Scalar::is_zero() const {
  if (expr_) return expr_->is_constant(0.0);
  return num_.is_zero();
}

std::optional<Rational> Scalar::as_rational() const {
  if (expr_ || !den_.empty()) return std::nullopt;
  return num_.as_constant();
}

Scalar& Scalar::promote_to_expr() {
  if (!expr_) {
    expr_ = to_expr();
    num_ = Poly(0);
    den_.clear();
  }
  return *this;
}

void Scalar::absorb_factor(Poly base, unsigned power) {
  if (power == 0) return;
  if (base.is_zero()) throw DomainError("division by zero");
  if (base.is_constant()) {
    Rational c = *base.as_constant();
    Rational inv = 1;
    for (unsigned k = 0; k < power; ++k) inv /= c;
    num_ *= inv;
    return;
  }
  auto [lead, monic] = make_monic(base);
  Rational inv = 1;
  for (unsigned k = 0; k < power; ++k) inv /= lead;
  num_ *= inv;
  for (auto& f : den_) {
    if (f.base == monic) {
      f.power += power;
      return;
    }
  }
  den_.push_back({std::move(monic), power});
}

void Scalar::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    while (f.power > 0) {
      auto q = num_.divide_exact(f.base);
      if (!q) break;
      num_ = std::move(*q);
      --f.power;
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(), [](const Factor& f) { return f.power == 0; }),
             den_.end());
  std::sort(den_.begin(), den_.end(), [](const Factor& a, const Factor& b) {
    if (a.base.terms() != b.base.terms()) return a.base.terms() < b.base.terms();
    return a.power < b.power;
  });
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (expr_ || rhs.expr_) {
    Expr r = rhs.to_expr();
    promote_to_expr();
    expr_ = *expr_ + r;
    return *this;
  }
  if (den_.empty() && rhs.den_.empty()) {
    num_ += rhs.num_;
    return *this;
  }
  // Common denominator: the per-factor maximum power.
  std::vector<Factor> common = den_;
  for (const auto& g : rhs.den_) {
    auto it = std::find_if(common.begin(), common.end(), [&](const Factor& f) { return f.base == g.base; });
    if (it == common.end()) common.push_back(g);
    else it->power = std::max(it->power, g.power);
  }
  auto scale_for = [&](const std::vector<Factor>& own) {
    Poly s(0, 1);
    for (const auto& f : common) {
      unsigned have = 0;
      for (const auto& g : own)
        if (g.base == f.base) have = g.power;
      if (f.power > have) s *= f.base.pow(f.power - have);
    }
    return s;
  };
  num_ = num_ * scale_for(den_) + rhs.num_ * scale_for(rhs.den_);
  den_ = std::move(common);
  cancel();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) { return *this += -rhs; }

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (expr_ || rhs.expr_) {
    Expr r = rhs.to_expr();
    promote_to_expr();
    expr_ = *expr_ * r;
    return *this;
  }
  num_ *= rhs.num_;
  if (rhs.den_.empty() && den_.empty()) return *this;
  for (const auto& f : rhs.den_) absorb_factor(f.base, f.power);
  cancel();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.is_zero()) throw DomainError("division by zero");
  if (expr_ || rhs.expr_) {
    Expr r = rhs.to_expr();
    promote_to_expr();
    expr_ = *expr_ / r;
    return *this;
  }
  for (const auto& f : rhs.den_) num_ *= f.base.pow(f.power);
  if (auto c = rhs.num_.as_constant()) {
    num_ *= Rational(1) / *c;
  } else {
    absorb_factor(rhs.num_, 1);
  }
  cancel();
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  if (out.expr_) out.expr_ = -*out.expr_;
  else out.num_ = -out.num_;
  return out;
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return Scalar(1) / pow(-e);
  Scalar result(1);
  Scalar base = *this;
  unsigned k = static_cast<unsigned>(e);
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

Scalar Scalar::derive(std::size_t index) const {
  if (expr_) return Scalar(expr_->derive(index));
  if (den_.empty()) {
    if (num_.is_constant()) return Scalar(0);
    return Scalar(num_.derive(index));
  }
  // d(n / prod f_i^k_i) = (n' F - n sum k_i f_i' F / f_i) / (prod f_i^k_i * F), F = prod f_i.
  std::size_t n = num_.nvars();
  for (const auto& f : den_) n = std::max(n, f.base.nvars());
  Poly num = num_.nvars() == n ? num_ : num_.embed(n, 0);
  Poly distinct(n, 1);
  for (const auto& f : den_) distinct *= f.base;
  Poly top = num.derive(index) * distinct;
  for (std::size_t i = 0; i < den_.size(); ++i) {
    Poly others(n, 1);
    for (std::size_t j = 0; j < den_.size(); ++j)
      if (j != i) others *= den_[j].base;
    top -= num * den_[i].base.derive(index) * others * Rational(den_[i].power);
  }
  Scalar out(top);
  for (const auto& f : den_) out.den_.push_back({f.base, f.power + 1});
  out.cancel();
  return out;
}

Scalar Scalar::substitute(std::span<const Scalar> images) const {
  if (expr_) {
    std::vector<Expr> ex;
    ex.reserve(images.size());
    for (const auto& s : images) ex.push_back(s.to_expr());
    return Scalar(expr_->substitute(ex));
  }
  auto compose = [&](const Poly& p) -> Scalar {
    if (p.is_constant()) return Scalar(*p.as_constant());
    if (images.size() != p.nvars()) throw DimensionError("substitution needs one image per coordinate");
    return p.evaluate_in<Scalar>(images, Scalar(0), Scalar(1));
  };
  Scalar out = compose(num_);
  for (const auto& f : den_) out /= compose(f.base).pow(static_cast<int>(f.power));
  return out;
}

Scalar Scalar::embed(std::size_t new_nvars, std::size_t offset) const {
  if (expr_) return Scalar(expr_->embed(offset));
  auto move = [&](const Poly& p) { return p.is_constant() ? p : p.embed(new_nvars, offset); };
  Scalar out(move(num_));
  for (const auto& f : den_) out.den_.push_back({move(f.base), f.power});
  return out;
}

double Scalar::eval(std::span<const double> point) const {
  if (expr_) return expr_->eval(point);
  auto ev = [&](const Poly& p) {
    if (p.is_constant()) return p.as_constant()->get_d();
    return p.eval(point);
  };
  double v = ev(num_);
  for (const auto& f : den_) {
    double d = ev(f.base);
    if (d == 0.0) throw DomainError("division by zero");
    v /= std::pow(d, static_cast<int>(f.power));
  }
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

Rational Scalar::eval_exact(std::span<const Rational> point) const {
  if (expr_) throw DomainError("numeric scalar has no exact value");
  auto ev = [&](const Poly& p) -> Rational {
    if (p.is_constant()) return *p.as_constant();
    return p.eval(point);
  };
  Rational v = ev(num_);
  for (const auto& f : den_) {
    Rational d = ev(f.base);
    if (d == 0) throw DomainError("division by zero");
    for (unsigned k = 0; k < f.power; ++k) v /= d;
  }
  return v;
}

std::string Scalar::to_string(std::span<const std::string> names) const {
  if (expr_) return expr_->to_string(names);
  std::string top = num_.to_string(names);
  if (den_.empty()) return top;
  std::ostringstream os;
  if (num_.terms().size() > 1) os << "(" << top << ")";
  else os << top;
  os << "/(";
  for (std::size_t i = 0; i < den_.size(); ++i) {
    if (i) os << "*";
    os << "(" << den_[i].base.to_string(names) << ")";
    if (den_[i].power > 1) os << "^" << den_[i].power;
  }
  os << ")";
  return os.str();
}

std::string Scalar::to_string() const {
  std::size_t n = 0;
  if (expr_) n = expr_->max_var();
  else {
    n = num_.nvars();
    for (const auto& f : den_) n = std::max(n, f.base.nvars());
  }
  auto names = default_names(n);
  return to_string(names);
}

Scalar exp(const Scalar& s) {
  if (s.is_zero()) return Scalar(1);
  return Scalar(exp(s.to_expr()));
}

Scalar sin(const Scalar& s) {
  if (s.is_zero()) return Scalar(0);
  return Scalar(sin(s.to_expr()));
}

Scalar cos(const Scalar& s) {
  if (s.is_zero()) return Scalar(1);
  return Scalar(cos(s.to_expr()));
}

namespace {

std::optional<mpz_class> isqrt_exact(const mpz_class& z) {
  if (z < 0) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  if (r * r != z) return std::nullopt;
  return r;
}

std::optional<Rational> sqrt_rational(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  auto n = isqrt_exact(c.get_num());
  auto d = isqrt_exact(c.get_den());
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

}  // namespace

std::optional<Poly> sqrt_exact(const Poly& p) {
  if (p.is_zero()) return p;
  if (auto c = p.as_constant()) {
    auto r = sqrt_rational(*c);
    if (!r) return std::nullopt;
    return Poly(p.nvars(), *r);
  }
  const auto& [le, lc] = p.leading_term();
  Exponents half(le.size());
  for (std::size_t i = 0; i < le.size(); ++i) {
    if (le[i] % 2) return std::nullopt;
    half[i] = le[i] / 2;
  }
  auto rc = sqrt_rational(lc);
  if (!rc) return std::nullopt;
  Poly root = Poly::monomial(half, *rc);
  Rational twice_lead = 2 * *rc;
  // Each step removes the leading term of the remainder; terms strictly decrease in grlex.
  std::size_t budget = p.terms().size() * p.terms().size() + 16;
  Poly rem = p - root * root;
  while (!rem.is_zero()) {
    if (budget-- == 0) return std::nullopt;
    const auto& [re, rcoef] = rem.leading_term();
    Exponents q(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
      if (re[i] < half[i]) return std::nullopt;
      q[i] = re[i] - half[i];
    }
    if (!GrlexLess{}(q, half)) return std::nullopt;
    Poly step = Poly::monomial(q, rcoef / twice_lead);
    rem -= step * (root + root + step);
    root += step;
  }
  return root;
}

Scalar sqrt(const Scalar& s) {
  if (s.is_exact()) {
    auto top = sqrt_exact(s.numerator());
    bool ok = top.has_value();
    Scalar out(ok ? *top : Poly(0));
    for (const auto& f : s.denominator()) {
      if (!ok) break;
      if (f.power % 2 == 0) {
        out /= Scalar(f.base).pow(static_cast<int>(f.power / 2));
      } else if (auto r = sqrt_exact(f.base)) {
        out /= Scalar(*r).pow(static_cast<int>(f.power));
      } else {
        ok = false;
      }
    }
    if (ok) return out;
  }
  return Scalar(sqrt(s.to_expr()));
}

bool vanishes(const Scalar& s, std::size_t nvars, double tolerance) {
  if (s.is_exact()) return s.is_zero();
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> pt(std::max(nvars, s.to_expr().max_var()));
  int tested = 0;
  for (int trial = 0; trial < 64 && tested < 12; ++trial) {
    for (auto& x : pt) x = dist(rng);
    try {
      double v = s.eval(pt);
      if (std::abs(v) > tolerance) return false;
      ++tested;
    } catch (const DomainError&) {
    }
  }
  return tested > 0;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::span<const std::string> names) : s_(text), names_(names) {}

  Scalar parse() {
    Scalar v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, pos_ + 1); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Scalar expr() {
    Scalar v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  Scalar term() {
    Scalar v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        Scalar d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        v /= d;
      } else {
        return v;
      }
    }
  }

  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Scalar power() {
    Scalar base = primary();
    if (!eat('^')) return base;
    skip();
    std::size_t at = pos_;
    Scalar e = unary();
    auto q = e.as_rational();
    if (q && q->get_den() == 1 && base.is_exact()) {
      if (abs(q->get_num()) > 4096) {
        pos_ = at;
        fail("exponent too large");
      }
      return base.pow(static_cast<int>(q->get_num().get_si()));
    }
    if (!q) {
      pos_ = at;
      fail("exponent must be a number");
    }
    return Scalar(base.to_expr().pow(q->get_d()));
  }

  Scalar primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      std::string lit = s_.substr(start, pos_ - start);
      try {
        return Scalar(parse_rational(lit));
      } catch (const ParseError&) {
        pos_ = start;
        fail("malformed number '" + lit + "'");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == id) return Scalar::variable(names_.size(), i);
      if (id == "exp" || id == "sqrt" || id == "sin" || id == "cos") {
        if (!eat('(')) fail("expected '(' after " + id);
        Scalar arg = expr();
        if (!eat(')')) fail("expected ')'");
        if (id == "exp") return exp(arg);
        if (id == "sin") return sin(arg);
        if (id == "cos") return cos(arg);
        return sqrt(arg);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(const std::string& text, std::span<const std::string> names) {
  return Parser(text, names).parse();
}

}  // namespace lalg
