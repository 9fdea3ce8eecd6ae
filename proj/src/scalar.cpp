#include "iserre/scalar.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace iserre {

// ---------------------------------------------------------------------------
// Monomial

bool Monomial::has_params() const {
  for (auto e : p)
    if (e != 0) return true;
  return false;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.q = q + o.q;
  for (int k = 0; k < kMaxParams; ++k) {
    int e = int(p[k]) + int(o.p[k]);
    if (e > 255) throw std::overflow_error("parameter exponent exceeds 255");
    r.p[k] = static_cast<std::uint8_t>(e);
  }
  return r;
}

// ---------------------------------------------------------------------------
// LaurentPoly

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) terms_.emplace_back(Monomial{}, mpq_class(c));
}

LaurentPoly::LaurentPoly(const mpq_class& c) {
  if (c != 0) terms_.emplace_back(Monomial{}, c);
}

LaurentPoly LaurentPoly::monomial(const Monomial& m, const mpq_class& c) {
  LaurentPoly r;
  if (c != 0) r.terms_.emplace_back(m, c);
  return r;
}

LaurentPoly LaurentPoly::q_power(int e) {
  Monomial m;
  m.q = e;
  return monomial(m);
}

LaurentPoly LaurentPoly::param(int index, int e) {
  if (index < 0 || index >= kMaxParams)
    throw std::out_of_range("parameter index out of range");
  if (e < 0 || e > 255) throw std::out_of_range("parameter exponent out of range");
  Monomial m;
  m.p[index] = static_cast<std::uint8_t>(e);
  return monomial(m);
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].first == Monomial{} && terms_[0].second == 1;
}

bool LaurentPoly::is_univariate() const {
  // Sorted with parameters first, so a parameter shows up in the last term.
  return terms_.empty() || !terms_.back().first.has_params();
}

int LaurentPoly::min_q() const {
  int m = 0;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (first || mono.q < m) m = mono.q;
    first = false;
  }
  return m;
}

int LaurentPoly::max_q() const {
  int m = 0;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (first || mono.q > m) m = mono.q;
    first = false;
  }
  return m;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {

template <class Op>
std::vector<LaurentPoly::Term> merge_terms(const std::vector<LaurentPoly::Term>& a,
                                           const std::vector<LaurentPoly::Term>& b,
                                           Op op) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, op(mpq_class(0), b[j].second));
      ++j;
    } else {
      mpq_class c = op(a[i].second, b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = merge_terms(terms_, o.terms_,
                       [](const mpq_class& x, const mpq_class& y) { return mpq_class(x + y); });
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_,
                       [](const mpq_class& x, const mpq_class& y) { return mpq_class(x - y); });
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const mpq_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    const auto& single = a.terms_.size() == 1 ? a.terms_[0] : b.terms_[0];
    const auto& other = a.terms_.size() == 1 ? b : a;
    LaurentPoly r;
    r.terms_.reserve(other.terms_.size());
    for (const auto& [m, c] : other.terms_) r.terms_.emplace_back(m * single.first, c * single.second);
    if (single.first.has_params()) std::sort(r.terms_.begin(), r.terms_.end(),
                                             [](const auto& x, const auto& y) { return x.first < y.first; });
    return r;
  }
  if (a.is_univariate() && b.is_univariate()) {
    int lo = a.terms_.front().first.q + b.terms_.front().first.q;
    int hi = a.terms_.back().first.q + b.terms_.back().first.q;
    std::vector<mpq_class> acc(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) acc[ma.q + mb.q - lo] += ca * cb;
    LaurentPoly r;
    for (int k = 0; k <= hi - lo; ++k) {
      if (acc[k] != 0) {
        Monomial m;
        m.q = lo + k;
        r.terms_.emplace_back(m, std::move(acc[k]));
      }
    }
    return r;
  }
  std::vector<LaurentPoly::Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) prod.emplace_back(ma * mb, ca * cb);
  return LaurentPoly::from_unsorted(std::move(prod));
}

LaurentPoly LaurentPoly::shifted(int dq) const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.first.q += dq;
  return r;
}

LaurentPoly LaurentPoly::bar() const {
  std::vector<Term> t = terms_;
  for (auto& x : t) x.first.q = -x.first.q;
  return from_unsorted(std::move(t));
}

LaurentPoly LaurentPoly::from_sorted(std::vector<Term> terms) {
  LaurentPoly r;
  r.terms_ = std::move(terms);
  return r;
}

LaurentPoly LaurentPoly::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  LaurentPoly r;
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().first == t.first) {
      r.terms_.back().second += t.second;
      if (r.terms_.back().second == 0) r.terms_.pop_back();
    } else if (t.second != 0) {
      r.terms_.push_back(std::move(t));
    }
  }
  return r;
}

namespace {

std::string monomial_string(const Monomial& m) {
  std::string s;
  auto add = [&](const std::string& f) {
    if (!s.empty()) s += "*";
    s += f;
  };
  if (m.q == 1) add("q");
  else if (m.q != 0) add("q^" + std::to_string(m.q));
  for (int k = 0; k < kMaxParams; ++k) {
    if (m.p[k] == 0) continue;
    std::string f = "s[" + std::to_string(k + 1) + "]";
    if (m.p[k] != 1) f += "^" + std::to_string(m.p[k]);
    add(f);
  }
  return s;
}

}  // namespace

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    mpq_class a = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::string ms = monomial_string(m);
    if (ms.empty()) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << ms;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Polynomial gcd and exact division.

namespace {

// Dense univariate integer polynomials (index = exponent of q).
using ZPoly = std::vector<mpz_class>;

void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

ZPoly to_zpoly(const LaurentPoly& p) {
  // p univariate with nonnegative exponents
  mpz_class l = 1;
  for (const auto& [m, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z(static_cast<std::size_t>(p.max_q() + 1));
  for (const auto& [m, c] : p.terms()) {
    mpq_class v = c * l;
    z[m.q] = v.get_num();
  }
  return z;
}

mpz_class zcontent(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

ZPoly zprimitive(ZPoly p) {
  trim(p);
  if (p.empty()) return p;
  mpz_class g = zcontent(p);
  if (p.back() < 0) g = -g;
  for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return p;
}

ZPoly zprem(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  const mpz_class& lb = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    std::size_t da = a.size() - 1;
    mpz_class la = a.back();
    for (auto& c : a) c *= lb;
    for (std::size_t k = 0; k <= db; ++k) a[da - db + k] -= la * b[k];
    trim(a);
    a = zprimitive(std::move(a));
  }
  return a;
}

ZPoly zgcd(ZPoly a, ZPoly b) {
  a = zprimitive(std::move(a));
  b = zprimitive(std::move(b));
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    if (b.size() == 1) return ZPoly{1};
    ZPoly r = zprem(std::move(a), b);
    a = std::move(b);
    b = zprimitive(std::move(r));
  }
  return a;
}

LaurentPoly from_zpoly_monic(const ZPoly& z) {
  std::vector<LaurentPoly::Term> t;
  mpq_class lc = z.back();
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] == 0) continue;
    Monomial m;
    m.q = static_cast<int>(k);
    t.emplace_back(m, mpq_class(z[k]) / lc);
  }
  return LaurentPoly::from_sorted(std::move(t));
}

// Sparse multivariate integer polynomials used for the parameter case.
// Variable 0 is q, variable k+1 is parameter k. Exponents are nonnegative.
// Results are only meaningful up to a rational unit.
using Exps = std::array<int, kMaxParams + 1>;
using MPoly = std::map<Exps, mpz_class>;

MPoly to_mpoly(const LaurentPoly& p) {
  mpz_class l = 1;
  for (const auto& [m, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  MPoly r;
  for (const auto& [m, c] : p.terms()) {
    Exps e{};
    e[0] = m.q;
    for (int k = 0; k < kMaxParams; ++k) e[k + 1] = m.p[k];
    mpq_class v = c * l;
    r.emplace(e, v.get_num());
  }
  return r;
}

LaurentPoly from_mpoly(const MPoly& p) {
  std::vector<LaurentPoly::Term> t;
  for (const auto& [e, c] : p) {
    Monomial m;
    m.q = e[0];
    for (int k = 0; k < kMaxParams; ++k) m.p[k] = static_cast<std::uint8_t>(e[k + 1]);
    t.emplace_back(m, mpq_class(c));
  }
  return LaurentPoly::from_unsorted(std::move(t));
}

const MPoly& mone() {
  static const MPoly one{{Exps{}, mpz_class(1)}};
  return one;
}

bool is_mone(const MPoly& p) { return p.size() == 1 && p.begin()->first == Exps{}; }

MPoly mmul(const MPoly& a, const MPoly& b) {
  MPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exps e;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      r[e] += ca * cb;
    }
  std::erase_if(r, [](const auto& t) { return t.second == 0; });
  return r;
}

void msub_inplace(MPoly& a, const MPoly& b) {
  for (const auto& [e, c] : b) {
    auto it = a.try_emplace(e, 0).first;
    it->second -= c;
    if (it->second == 0) a.erase(it);
  }
}

// Divide by the integer content and make the leading coefficient positive.
MPoly mprimitive_z(MPoly p) {
  if (p.empty()) return p;
  mpz_class g = 0;
  for (const auto& [e, c] : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (p.rbegin()->second < 0) g = -g;
  if (g != 1)
    for (auto& [e, c] : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return p;
}

// Exact division up to an integer unit; throws if b does not divide a.
MPoly mdiv(MPoly a, const MPoly& b) {
  a = mprimitive_z(std::move(a));
  MPoly bz = mprimitive_z(b);
  MPoly quo;
  const auto& [lb, cb] = *bz.rbegin();
  while (!a.empty()) {
    const auto& [la, ca] = *a.rbegin();
    Exps e;
    for (std::size_t k = 0; k < e.size(); ++k) {
      e[k] = la[k] - lb[k];
      if (e[k] < 0) throw std::invalid_argument("inexact polynomial division");
    }
    if (!mpz_divisible_p(ca.get_mpz_t(), cb.get_mpz_t()))
      throw std::invalid_argument("inexact polynomial division");
    mpz_class c = ca / cb;
    MPoly t{{e, c}};
    quo.emplace(e, c);
    msub_inplace(a, mmul(t, bz));
  }
  return quo;
}

int mdeg(const MPoly& p, int v) {
  int d = -1;
  for (const auto& [e, c] : p) d = std::max(d, e[v]);
  return d;
}

bool involves(const MPoly& p, int v) {
  for (const auto& [e, c] : p)
    if (e[v] != 0) return true;
  return false;
}

// Coefficient of v^d (as a polynomial in the remaining variables).
MPoly mcoeff(const MPoly& p, int v, int d) {
  MPoly r;
  for (const auto& [e, c] : p)
    if (e[v] == d) {
      Exps f = e;
      f[v] = 0;
      r.emplace(f, c);
    }
  return r;
}

MPoly mgcd(const MPoly& a, const MPoly& b, int nvars);

MPoly mcontent(const MPoly& p, int v) {
  MPoly g;
  for (int d = 0, D = mdeg(p, v); d <= D; ++d) {
    MPoly c = mcoeff(p, v, d);
    if (c.empty()) continue;
    g = g.empty() ? mprimitive_z(c) : mgcd(g, c, v);
    if (is_mone(g)) break;
  }
  return g;
}

MPoly mprem(MPoly a, const MPoly& b, int v) {
  int db = mdeg(b, v);
  MPoly lb = mcoeff(b, v, db);
  while (!a.empty() && mdeg(a, v) >= db) {
    int da = mdeg(a, v);
    MPoly la = mcoeff(a, v, da);
    Exps sh{};
    sh[v] = da - db;
    MPoly t = mmul(la, MPoly{{sh, mpz_class(1)}});
    a = mmul(lb, a);
    msub_inplace(a, mmul(t, b));
    a = mprimitive_z(std::move(a));
  }
  return a;
}

MPoly mgcd(const MPoly& a, const MPoly& b, int nvars) {
  if (a.empty()) return mprimitive_z(b);
  if (b.empty()) return mprimitive_z(a);
  if (nvars == 0) return mone();
  if (nvars == 1) {
    auto dense = [](const MPoly& p) {
      ZPoly z(static_cast<std::size_t>(mdeg(p, 0) + 1));
      for (const auto& [e, c] : p) z[e[0]] = c;
      return z;
    };
    ZPoly z = zgcd(dense(a), dense(b));
    MPoly r;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (z[k] == 0) continue;
      Exps e{};
      e[0] = static_cast<int>(k);
      r.emplace(e, z[k]);
    }
    return r;
  }
  int v = nvars - 1;
  if (!involves(a, v) && !involves(b, v)) return mgcd(a, b, nvars - 1);
  MPoly ca = mcontent(a, v), cb = mcontent(b, v);
  MPoly c = mgcd(ca, cb, v);
  MPoly pa = mdiv(a, ca), pb = mdiv(b, cb);
  if (mdeg(pa, v) < mdeg(pb, v)) std::swap(pa, pb);
  MPoly g;
  while (true) {
    if (pb.empty()) {
      g = pa;
      break;
    }
    if (mdeg(pb, v) == 0) {
      g = mone();
      break;
    }
    MPoly r = mprem(pa, pb, v);
    pa = std::move(pb);
    if (r.empty()) pb.clear();
    else pb = mdiv(r, mcontent(r, v));
  }
  if (involves(g, v)) g = mdiv(g, mcontent(g, v));
  return mprimitive_z(mmul(c, g));
}

// Dense univariate exact division over Q.
LaurentPoly univariate_div(const LaurentPoly& a, const LaurentPoly& b) {
  int sa = a.min_q(), sb = b.min_q();
  std::vector<mpq_class> x(static_cast<std::size_t>(a.max_q() - sa + 1));
  std::vector<mpq_class> y(static_cast<std::size_t>(b.max_q() - sb + 1));
  for (const auto& [m, c] : a.terms()) x[m.q - sa] = c;
  for (const auto& [m, c] : b.terms()) y[m.q - sb] = c;
  if (x.size() < y.size()) throw std::invalid_argument("inexact polynomial division");
  std::vector<mpq_class> quo(x.size() - y.size() + 1);
  for (std::size_t k = quo.size(); k-- > 0;) {
    mpq_class c = x[k + y.size() - 1] / y.back();
    quo[k] = c;
    if (c == 0) continue;
    for (std::size_t l = 0; l < y.size(); ++l) x[k + l] -= c * y[l];
  }
  for (const auto& c : x)
    if (c != 0) throw std::invalid_argument("inexact polynomial division");
  std::vector<LaurentPoly::Term> t;
  for (std::size_t k = 0; k < quo.size(); ++k) {
    if (quo[k] == 0) continue;
    Monomial m;
    m.q = static_cast<int>(k) + sa - sb;
    t.emplace_back(m, quo[k]);
  }
  return LaurentPoly::from_sorted(std::move(t));
}

}  // namespace

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_univariate() && b.is_univariate()) {
    if (a.is_zero()) return from_zpoly_monic(zprimitive(to_zpoly(b)));
    if (b.is_zero()) return from_zpoly_monic(zprimitive(to_zpoly(a)));
    return from_zpoly_monic(zgcd(to_zpoly(a), to_zpoly(b)));
  }
  if (a.is_zero() || b.is_zero()) {
    LaurentPoly g = a.is_zero() ? b : a;
    g *= 1 / g.leading().second;
    return g;
  }
  if (a.is_univariate() || b.is_univariate()) {
    // gcd of a q-polynomial with each parameter coefficient of the other input
    const LaurentPoly& u = a.is_univariate() ? a : b;
    const LaurentPoly& m = a.is_univariate() ? b : a;
    ZPoly g = to_zpoly(u);
    std::size_t k = 0;
    const auto& t = m.terms();
    while (k < t.size() && g.size() > 1) {
      std::size_t l = k;
      std::vector<LaurentPoly::Term> coeff;
      while (l < t.size() && t[l].first.p == t[k].first.p) {
        Monomial mono;
        mono.q = t[l].first.q;
        coeff.emplace_back(mono, t[l].second);
        ++l;
      }
      g = zgcd(std::move(g), to_zpoly(LaurentPoly::from_sorted(std::move(coeff))));
      k = l;
    }
    if (g.size() <= 1) return LaurentPoly(1);
    return from_zpoly_monic(g);
  }
  {
    // Evaluate the parameters at integer points. If the images are coprime in
    // q (with the leading q-coefficient of a surviving), the gcd is free of q
    // and equals the gcd of all q-coefficients, a much smaller problem.
    MPoly ma = to_mpoly(a), mb = to_mpoly(b);
    for (int attempt = 0; attempt < 3; ++attempt) {
      auto image = [&](const MPoly& m) {
        ZPoly z(static_cast<std::size_t>(mdeg(m, 0) + 1));
        for (const auto& [e, c] : m) {
          mpz_class t = c;
          for (int k = 1; k <= kMaxParams; ++k)
            for (int r = 0; r < e[k]; ++r) t *= 3 + 2 * k + 7 * attempt;
          z[e[0]] += t;
        }
        return z;
      };
      ZPoly ia = image(ma), ib = image(mb);
      if (ia.empty() || ia.back() == 0) continue;
      trim(ib);
      if (ib.empty()) continue;
      if (zgcd(ia, ib).size() > 1) break;
      MPoly g;
      for (const MPoly* m : {&ma, &mb}) {
        for (int d = 0, D = mdeg(*m, 0); d <= D && !is_mone(g); ++d) {
          MPoly c = mcoeff(*m, 0, d);
          if (c.empty()) continue;
          g = g.empty() ? mprimitive_z(c) : mgcd(g, c, kMaxParams + 1);
        }
      }
      LaurentPoly r = from_mpoly(g);
      r *= 1 / r.leading().second;
      return r;
    }
  }
  LaurentPoly g = from_mpoly(mgcd(to_mpoly(a), to_mpoly(b), kMaxParams + 1));
  g *= 1 / g.leading().second;
  return g;
}

LaurentPoly poly_exact_div(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return {};
  if (a.is_univariate() && b.is_univariate()) return univariate_div(a, b);
  int sa = a.min_q(), sb = b.min_q();
  LaurentPoly quo = from_mpoly(mdiv(to_mpoly(a.shifted(-sa)), to_mpoly(b.shifted(-sb)))).shifted(sa - sb);
  quo *= a.leading().second / (quo.leading().second * b.leading().second);
  return quo;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void Scalar::normalize() {
  if (den_.is_zero()) throw DivisionByZero();
  if (num_.is_zero()) {
    den_ = LaurentPoly(1);
    return;
  }
  if (den_.is_one()) return;
  if (den_.size() == 1 && !den_.leading().first.has_params()) {
    const auto& [m, c] = den_.leading();
    mpq_class ic = 1 / c;
    num_ = num_.shifted(-m.q);
    num_ *= ic;
    den_ = LaurentPoly(1);
    return;
  }
  int sn = num_.min_q(), sd = den_.min_q();
  LaurentPoly n = num_.shifted(-sn), d = den_.shifted(-sd);
  LaurentPoly g = poly_gcd(n, d);
  if (!g.is_one()) {
    n = poly_exact_div(n, g);
    d = poly_exact_div(d, g);
  }
  mpq_class lc = d.leading().second;
  if (lc != 1) {
    mpq_class il = 1 / lc;
    n *= il;
    d *= il;
  }
  num_ = n.shifted(sn - sd);
  den_ = std::move(d);
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_one()) normalize();
    else if (num_.is_zero()) den_ = LaurentPoly(1);
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) return *this = Scalar();
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ * o.num_;
    return *this;
  }
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inv(); }

Scalar Scalar::inv() const {
  if (is_zero()) throw DivisionByZero();
  return Scalar(den_, num_);
}

std::optional<Scalar> Scalar::try_inv() const {
  if (is_zero()) return std::nullopt;
  return inv();
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return inv().pow(-e);
  Scalar r(1), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Scalar Scalar::bar() const { return Scalar(num_.bar(), den_.bar()); }

Scalar Scalar::shifted(int dq) const {
  Scalar r = *this;
  r.num_ = r.num_.shifted(dq);
  return r;
}

std::string Scalar::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

void append_term(std::string& out, const Scalar& coeff, const std::string& monomial) {
  std::string c;
  if (monomial.empty()) {
    c = coeff.to_string();
    if (coeff.num().size() > 1 && coeff.is_laurent()) c = "(" + c + ")";
  } else if (coeff.is_one()) {
    c = monomial;
  } else if ((-coeff).is_one()) {
    c = "-" + monomial;
  } else if (coeff.is_laurent() && coeff.num().size() == 1) {
    c = coeff.to_string() + "*" + monomial;
  } else {
    c = "(" + coeff.to_string() + ")*" + monomial;
  }
  if (out.empty()) {
    out = c;
  } else if (c[0] == '-') {
    out += " - " + c.substr(1);
  } else {
    out += " + " + c;
  }
}

namespace {

// term := coeff ':' qexp [':' k '^' e (',' k '^' e)*] ; terms joined by ';'
std::string serialize_poly(const LaurentPoly& p) {
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += ';';
    out += c.get_str() + ':' + std::to_string(m.q);
    bool first = true;
    for (int k = 0; k < kMaxParams; ++k) {
      if (m.p[k] == 0) continue;
      out += first ? ':' : ',';
      first = false;
      out += std::to_string(k) + '^' + std::to_string(m.p[k]);
    }
  }
  return out;
}

LaurentPoly deserialize_poly(const std::string& text) {
  std::vector<LaurentPoly::Term> terms;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    std::string t = text.substr(pos, end - pos);
    pos = end + 1;
    std::size_t c1 = t.find(':');
    if (c1 == std::string::npos) throw std::invalid_argument("bad serialized term");
    std::size_t c2 = t.find(':', c1 + 1);
    Monomial m;
    m.q = std::stoi(t.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    if (c2 != std::string::npos) {
      std::stringstream ps(t.substr(c2 + 1));
      std::string item;
      while (std::getline(ps, item, ',')) {
        std::size_t h = item.find('^');
        if (h == std::string::npos) throw std::invalid_argument("bad serialized parameter");
        int k = std::stoi(item.substr(0, h)), e = std::stoi(item.substr(h + 1));
        if (k < 0 || k >= kMaxParams || e < 0 || e > 255) throw std::invalid_argument("bad serialized parameter");
        m.p[k] = static_cast<std::uint8_t>(e);
      }
    }
    mpq_class c;
    if (c.set_str(t.substr(0, c1), 10) != 0) throw std::invalid_argument("bad serialized coefficient");
    c.canonicalize();
    terms.emplace_back(m, c);
  }
  return LaurentPoly::from_unsorted(std::move(terms));
}

}  // namespace

std::string serialize(const Scalar& s) {
  if (s.is_laurent()) return serialize_poly(s.num());
  return serialize_poly(s.num()) + "|" + serialize_poly(s.den());
}

Scalar deserialize_scalar(const std::string& text) {
  std::size_t bar = text.find('|');
  if (bar == std::string::npos) return Scalar(deserialize_poly(text));
  return Scalar(deserialize_poly(text.substr(0, bar)), deserialize_poly(text.substr(bar + 1)));
}

// ---------------------------------------------------------------------------
// q-combinatorics

Scalar q_int(int m, int eps) {
  if (m == 0) return Scalar();
  if (m < 0) return -q_int(-m, eps);
  std::vector<LaurentPoly::Term> t;
  for (int k = m - 1; k >= 0; --k) {
    Monomial mono;
    mono.q = eps * (m - 1 - 2 * k);
    t.emplace_back(mono, mpq_class(1));
  }
  return Scalar(LaurentPoly::from_sorted(std::move(t)));
}

Scalar q_factorial(int m, int eps) {
  if (m < 0) throw std::invalid_argument("q_factorial of a negative integer");
  Scalar r(1);
  for (int k = 2; k <= m; ++k) r *= q_int(k, eps);
  return r;
}

Scalar q_binom(int a, int b, int eps) {
  if (b < 0) return Scalar();
  if (a >= 0 && b > a) return Scalar();
  if (a >= 0 && b > a - b) b = a - b;
  Scalar num(1), den(1);
  for (int k = 1; k <= b; ++k) {
    num *= q_int(a - k + 1, eps);
    den *= q_int(k, eps);
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Linear solving

LinearSolution solve_linear(const ScalarMatrix& a, const std::vector<Scalar>& b) {
  const std::size_t rows = a.size();
  if (b.size() != rows) throw std::invalid_argument("solve_linear: row count mismatch");
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (const auto& row : a)
    if (row.size() != cols) throw std::invalid_argument("solve_linear: ragged matrix");

  // Reduced row echelon form of the augmented matrix, built one row at a time.
  struct Row {
    std::size_t pivot;
    std::vector<Scalar> v;  // cols + 1 entries
  };
  std::vector<Row> echelon;
  LinearSolution out;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Scalar> v = a[r];
    v.push_back(b[r]);
    for (const auto& row : echelon) {
      if (v[row.pivot].is_zero()) continue;
      Scalar f = v[row.pivot];
      for (std::size_t c = 0; c <= cols; ++c)
        if (!row.v[c].is_zero()) v[c] -= f * row.v[c];
    }
    std::size_t p = 0;
    while (p < cols && v[p].is_zero()) ++p;
    if (p == cols) {
      if (!v[cols].is_zero() && out.inconsistency.empty())
        out.inconsistency = "row " + std::to_string(r) + " reduces to 0 = " + v[cols].to_string();
      continue;
    }
    Scalar f = v[p].inv();
    for (std::size_t c = p; c <= cols; ++c)
      if (!v[c].is_zero()) v[c] *= f;
    for (auto& row : echelon) {
      if (row.v[p].is_zero()) continue;
      Scalar g = row.v[p];
      for (std::size_t c = p; c <= cols; ++c)
        if (!v[c].is_zero()) row.v[c] -= g * v[c];
    }
    echelon.push_back({p, std::move(v)});
  }
  out.rank = echelon.size();
  out.consistent = out.inconsistency.empty();
  std::vector<bool> is_pivot(cols, false);
  for (const auto& row : echelon) is_pivot[row.pivot] = true;
  if (out.consistent) {
    out.solution.assign(cols, Scalar());
    for (const auto& row : echelon) out.solution[row.pivot] = row.v[cols];
  }
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> n(cols);
    n[free] = Scalar(1);
    for (const auto& row : echelon) n[row.pivot] = -row.v[free];
    out.nullspace.push_back(std::move(n));
  }
  return out;
}

void CommonDenominator::include(const Scalar& c) {
  if (c.is_laurent() || std::find(dens_.begin(), dens_.end(), c.den()) != dens_.end()) return;
  dens_.push_back(c.den());
  lcm_ = lcm_ * poly_exact_div(c.den(), poly_gcd(lcm_, c.den()));
  cofactors_.clear();
}

LaurentPoly CommonDenominator::numerator(const Scalar& c) const {
  if (c.is_laurent()) return c.num() * lcm_;
  for (const auto& [d, f] : cofactors_)
    if (d == c.den()) return c.num() * f;
  cofactors_.emplace_back(c.den(), poly_exact_div(lcm_, c.den()));
  return c.num() * cofactors_.back().second;
}

}  // namespace iserre
