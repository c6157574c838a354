#include "voacoh/scalars.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace voacoh {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw ScalarError("not a rational number: " + s);
  q.canonicalize();
  if (q.get_den() == 0) throw ScalarError("zero denominator: " + s);
  return q;
}

Rational binomial(const Rational& top, long k) {
  if (k < 0) return 0;
  Rational r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (top - i);
    r /= (i + 1);
  }
  return r;
}

Integer factorial(long n) {
  Integer r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

namespace {

// deglex with c < h: compare total degree, then the h exponent
inline bool term_greater(unsigned ec1, unsigned eh1, unsigned ec2, unsigned eh2) {
  unsigned d1 = ec1 + eh1, d2 = ec2 + eh2;
  if (d1 != d2) return d1 > d2;
  return eh1 > eh2;
}

// Univariate polynomial in c over Q, low degree first.
using UPoly = std::vector<Rational>;

void utrim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

UPoly umul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  utrim(r);
  return r;
}

UPoly usub(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  utrim(r);
  return r;
}

// a = q*b + r
void udivmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  r = a;
  q.clear();
  if (a.size() < b.size()) return;
  q.assign(a.size() - b.size() + 1, 0);
  const Rational& lb = b.back();
  while (!r.empty() && r.size() >= b.size()) {
    size_t shift = r.size() - b.size();
    Rational f = r.back() / lb;
    q[shift] = f;
    for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= f * b[j];
    r.pop_back();
    utrim(r);
  }
  utrim(q);
}

UPoly umonic(UPoly p) {
  utrim(p);
  if (p.empty()) return p;
  Rational l = p.back();
  for (auto& x : p) x /= l;
  return p;
}

UPoly ugcd(UPoly a, UPoly b) {
  utrim(a);
  utrim(b);
  while (!b.empty()) {
    UPoly q, r;
    udivmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(a);
}

UPoly udivexact(const UPoly& a, const UPoly& b) {
  UPoly q, r;
  udivmod(a, b, q, r);
  if (!r.empty()) throw ScalarError("internal: inexact univariate division");
  return q;
}

// Bivariate polynomial as a polynomial in h with coefficients in Q[c].
using BPoly = std::vector<UPoly>;

void btrim(BPoly& p) {
  while (!p.empty() && p.back().empty()) p.pop_back();
}

BPoly to_bpoly(const Poly& p) {
  BPoly r;
  for (const auto& t : p.terms()) {
    if (r.size() <= t.eh) r.resize(t.eh + 1);
    UPoly& u = r[t.eh];
    if (u.size() <= t.ec) u.resize(t.ec + 1, 0);
    u[t.ec] += t.coef;
  }
  for (auto& u : r) utrim(u);
  btrim(r);
  return r;
}

Poly from_bpoly(const BPoly& b) {
  Poly r;
  for (size_t eh = 0; eh < b.size(); ++eh)
    for (size_t ec = 0; ec < b[eh].size(); ++ec)
      if (b[eh][ec] != 0) r += Poly::monomial(b[eh][ec], ec, eh);
  return r;
}

UPoly bcontent(const BPoly& b) {
  UPoly g;
  for (const auto& u : b) {
    if (u.empty()) continue;
    g = g.empty() ? umonic(u) : ugcd(g, u);
    if (g.size() == 1) break;
  }
  return g;
}

BPoly bdiv_content(const BPoly& b, const UPoly& g) {
  BPoly r(b.size());
  for (size_t i = 0; i < b.size(); ++i)
    if (!b[i].empty()) r[i] = udivexact(b[i], g);
  return r;
}

BPoly bprimitive(const BPoly& b) {
  if (b.empty()) return b;
  return bdiv_content(b, bcontent(b));
}

// pseudo remainder of a by b in h
BPoly bprem(BPoly a, const BPoly& b) {
  const UPoly& lb = b.back();
  size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    size_t shift = a.size() - 1 - db;
    UPoly la = a.back();
    for (auto& u : a) u = umul(u, lb);
    for (size_t j = 0; j <= db; ++j) a[shift + j] = usub(a[shift + j], umul(la, b[j]));
    btrim(a);
  }
  return a;
}

BPoly bgcd(BPoly a, BPoly b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  UPoly ca = bcontent(a), cb = bcontent(b);
  UPoly cg = ugcd(ca, cb);
  a = bdiv_content(a, ca);
  b = bdiv_content(b, cb);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    BPoly r = bprem(a, b);
    a = std::move(b);
    b = bprimitive(r);
  }
  for (auto& u : a) u = umul(u, cg);
  btrim(a);
  return a;
}

}  // namespace

Poly::Poly(long v) {
  if (v != 0) terms_.push_back(Term{0, 0, Rational(v)});
}

Poly::Poly(const Rational& v) {
  if (v != 0) {
    terms_.push_back(Term{0, 0, v});
    terms_.back().coef.canonicalize();
  }
}

Poly Poly::var_c() { return monomial(1, 1, 0); }
Poly Poly::var_h() { return monomial(1, 0, 1); }

Poly Poly::monomial(const Rational& coef, unsigned ec, unsigned eh) {
  Poly p;
  if (coef != 0) {
    p.terms_.push_back(Term{static_cast<uint16_t>(ec), static_cast<uint16_t>(eh), coef});
    p.terms_.back().coef.canonicalize();
  }
  return p;
}

bool Poly::is_const() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].ec == 0 && terms_[0].eh == 0); }

Rational Poly::const_value() const {
  if (!is_const()) throw ScalarError("polynomial is not constant: " + str());
  return terms_.empty() ? Rational(0) : terms_[0].coef;
}

unsigned Poly::total_degree() const { return terms_.empty() ? 0 : terms_[0].ec + terms_[0].eh; }

unsigned Poly::degree_c() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.ec);
  return d;
}

unsigned Poly::degree_h() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.eh);
  return d;
}

bool Poly::uses_c() const { return degree_c() > 0; }
bool Poly::uses_h() const { return degree_h() > 0; }

void Poly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return term_greater(a.ec, a.eh, b.ec, b.eh); });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().ec == t.ec && out.back().eh == t.eh) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef == 0) out.pop_back();
  terms_ = std::move(out);
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && term_greater(terms_[i].ec, terms_[i].eh, o.terms_[j].ec, o.terms_[j].eh))) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() ||
               term_greater(o.terms_[j].ec, o.terms_[j].eh, terms_[i].ec, terms_[i].eh)) {
      out.push_back(o.terms_[j++]);
    } else {
      Rational s = terms_[i].coef + o.terms_[j].coef;
      if (s != 0) out.push_back(Term{terms_[i].ec, terms_[i].eh, s});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rational& q0) {
  Rational q = q0;
  q.canonicalize();
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= q;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  if (b.is_const()) return Poly(a) *= b.terms_[0].coef;
  if (a.is_const()) return Poly(b) *= a.terms_[0].coef;
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_)
      r.terms_.push_back(Poly::Term{static_cast<uint16_t>(x.ec + y.ec), static_cast<uint16_t>(x.eh + y.eh),
                                    x.coef * y.coef});
  r.canonicalize();
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    const auto& x = terms_[i];
    const auto& y = o.terms_[i];
    if (x.ec != y.ec || x.eh != y.eh || x.coef != y.coef) return false;
  }
  return true;
}

std::optional<Poly> Poly::try_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ScalarError("division by zero polynomial");
  if (b.is_const()) return Poly(a) *= (1 / b.terms_[0].coef);
  Poly rem = a, quot;
  const Term& lb = b.lead();
  while (!rem.is_zero()) {
    const Term& lr = rem.lead();
    if (lr.ec < lb.ec || lr.eh < lb.eh) return std::nullopt;
    Poly t = monomial(lr.coef / lb.coef, lr.ec - lb.ec, lr.eh - lb.eh);
    quot += t;
    rem -= t * b;
  }
  return quot;
}

Poly Poly::divexact(const Poly& a, const Poly& b) {
  auto q = try_divide(a, b);
  if (!q) throw ScalarError("inexact polynomial division: (" + a.str() + ") / (" + b.str() + ")");
  return *q;
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return Poly();
  if (a.is_zero() || b.is_zero()) {
    const Poly& x = a.is_zero() ? b : a;
    return x * Rational(1 / x.lead().coef);
  }
  if (a.is_const() || b.is_const()) return Poly(1);
  Poly g = from_bpoly(bgcd(to_bpoly(a), to_bpoly(b)));
  return g * Rational(1 / g.lead().coef);
}

Poly Poly::substitute(const std::optional<Rational>& c, const std::optional<Rational>& h) const {
  Poly r;
  for (const auto& t : terms_) {
    Rational coef = t.coef;
    unsigned ec = t.ec, eh = t.eh;
    if (c) {
      Rational p = 1;
      for (unsigned i = 0; i < t.ec; ++i) p *= *c;
      coef *= p;
      ec = 0;
    }
    if (h) {
      Rational p = 1;
      for (unsigned i = 0; i < t.eh; ++i) p *= *h;
      coef *= p;
      eh = 0;
    }
    r.terms_.push_back(Term{static_cast<uint16_t>(ec), static_cast<uint16_t>(eh), coef});
  }
  r.canonicalize();
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r(1);
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

namespace {

std::string mono_str(unsigned ec, unsigned eh) {
  std::string s;
  auto var = [&](const char* v, unsigned e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += v;
    if (e > 1) s += "^" + std::to_string(e);
  };
  var("c", ec);
  var("h", eh);
  return s;
}

}  // namespace

// Terms are printed from low to high degree, e.g. "5 + c/2", "456 - 15*c".
std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Rational a = abs(it->coef);
    bool neg = it->coef < 0;
    std::string m = mono_str(it->ec, it->eh);
    std::string body;
    if (m.empty()) {
      body = a.get_str();
    } else {
      Integer n = a.get_num(), d = a.get_den();
      if (n != 1) body = n.get_str() + "*";
      body += m;
      if (d != 1) body += "/" + d.get_str();
    }
    if (out.empty())
      out = (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
  }
  return out;
}

size_t Poly::hash() const {
  size_t h = terms_.size();
  std::hash<std::string> hs;
  for (const auto& t : terms_) {
    h = h * 31 + t.ec * 131 + t.eh * 7919;
    h ^= hs(t.coef.get_str()) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

// --- SymPoly ---

SymPoly::SymPoly(long v) {
  if (v != 0) terms_[{}] = v;
}

SymPoly SymPoly::var(const std::string& name) {
  SymPoly p;
  p.terms_[{{name, 1u}}] = 1;
  return p;
}

void SymPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  for (const auto& [m, c] : o.terms_) terms_[m] += c;
  prune();
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  for (const auto& [m, c] : o.terms_) terms_[m] -= c;
  prune();
  return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
  SymPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      auto m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      r.terms_[m] += ca * cb;
    }
  r.prune();
  return r;
}

Rational SymPoly::evaluate(const std::map<std::string, Rational>& at) const {
  Rational s = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [v, e] : m) {
      auto it = at.find(v);
      if (it == at.end()) throw ScalarError("unbound symbol " + v);
      for (unsigned i = 0; i < e; ++i) t *= it->second;
    }
    s += t;
  }
  return s;
}

std::string SymPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (const auto& [v, e] : m) os << "*" << v << (e > 1 ? "^" + std::to_string(e) : "");
  }
  return os.str();
}

}  // namespace voacoh

namespace voacoh {

namespace {

std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> rational_roots_c(const Poly& p) {
  if (p.uses_h()) throw ScalarError("rational_roots_c: polynomial depends on h");
  std::vector<Rational> out;
  if (p.is_zero() || p.is_const()) return out;
  unsigned deg = p.degree_c();
  std::vector<Rational> coef(deg + 1);
  for (const auto& t : p.terms()) coef[t.ec] = t.coef;
  Integer l = 1;
  for (const auto& q : coef) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> a(deg + 1);
  for (unsigned i = 0; i <= deg; ++i) a[i] = Integer(coef[i] * l);
  size_t low = 0;
  while (a[low] == 0) ++low;
  if (low > 0) out.push_back(0);
  auto eval = [&](const Rational& x) {
    Rational v = 0;
    for (size_t i = deg + 1; i-- > low;) v = v * x + Rational(a[i]);
    return v;
  };
  for (const auto& num : divisors(a[low]))
    for (const auto& den : divisors(a[deg]))
      for (int sign : {1, -1}) {
        Rational x = Rational(num) / Rational(den);
        if (sign < 0) x = -x;
        if (eval(x) == 0 && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<unsigned, Poly> factor_multiplicity(const Poly& p, const Poly& f) {
  if (f.is_const()) throw ScalarError("factor_multiplicity: constant factor");
  unsigned k = 0;
  Poly cur = p;
  while (!cur.is_zero()) {
    auto q = Poly::try_divide(cur, f);
    if (!q) break;
    cur = std::move(*q);
    ++k;
  }
  return {k, cur};
}

}  // namespace voacoh
