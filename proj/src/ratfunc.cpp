#include <cctype>

#include "voacoh/scalars.hpp"

namespace voacoh {

RatFunc::RatFunc(const Poly& n, const Poly& d) : num_(n), den_(d) { normalize(); }

void RatFunc::normalize() {
  if (den_.is_zero()) throw ScalarError("division by zero");
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (den_.is_const()) {
    Rational d = den_.const_value();
    if (d != 1) {
      num_ *= Rational(1 / d);
      den_ = Poly(1);
    }
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (!g.is_const()) {
    num_ = Poly::divexact(num_, g);
    den_ = Poly::divexact(den_, g);
  }
  Rational lc = den_.lead().coef;
  if (lc != 1) {
    Rational inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
}

bool RatFunc::is_one() const { return den_.is_const() && num_.is_const() && num_.const_value() == 1; }

Rational RatFunc::const_value() const {
  if (!is_const()) throw ScalarError("not a constant: " + str());
  return num_.const_value();
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.num_.is_zero()) return *this;
  if (num_.is_zero()) return *this = o;
  bool d1 = den_.is_const(), d2 = o.den_.is_const();
  if (d1 && d2) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (num_.is_zero()) return *this;
  if (o.num_.is_zero()) return *this = RatFunc();
  if (den_.is_const() && o.den_.is_const()) {
    num_ = num_ * o.num_;
    return *this;
  }
  // cancel crosswise first to keep the gcds small
  Poly g1 = Poly::gcd(num_, o.den_);
  Poly g2 = Poly::gcd(o.num_, den_);
  Poly n1 = g1.is_const() ? num_ : Poly::divexact(num_, g1);
  Poly d2 = g1.is_const() ? o.den_ : Poly::divexact(o.den_, g1);
  Poly n2 = g2.is_const() ? o.num_ : Poly::divexact(o.num_, g2);
  Poly d1 = g2.is_const() ? den_ : Poly::divexact(den_, g2);
  num_ = n1 * n2;
  den_ = d1 * d2;
  normalize();
  return *this;
}

RatFunc RatFunc::inverse() const {
  if (num_.is_zero()) throw ScalarError("division by zero");
  return RatFunc(den_, num_);
}

RatFunc& RatFunc::operator/=(const RatFunc& o) {
  if (o.is_zero()) throw ScalarError("division by zero");
  if (o.is_const()) {
    Rational inv = 1 / o.const_value();
    num_ *= inv;
    return *this;
  }
  return *this *= o.inverse();
}

RatFunc RatFunc::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  RatFunc r(1);
  for (long i = 0; i < e; ++i) r *= *this;
  return r;
}

RatFunc RatFunc::substitute(const std::map<char, Rational>& bindings) const {
  std::optional<Rational> c, h;
  for (const auto& [k, v] : bindings) {
    if (k == 'c')
      c = v;
    else if (k == 'h')
      h = v;
    else
      throw ScalarError(std::string("unknown symbol '") + k + "'");
  }
  Poly n = num_.substitute(c, h);
  Poly d = den_.substitute(c, h);
  if (d.is_zero()) {
    std::string at;
    for (const auto& [k, v] : bindings) at += std::string(at.empty() ? "" : ", ") + k + "=" + v.get_str();
    throw ScalarError("pole: denominator " + den_.str() + " vanishes at " + at);
  }
  return RatFunc(n, d);
}

std::string RatFunc::str() const {
  if (den_.is_const()) return num_.str();
  auto wrap = [](const Poly& p) {
    std::string s = p.str();
    return p.terms().size() > 1 ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(normalize_minus(s)) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
    return r;
  }

 private:
  std::string s_;
  size_t pos_ = 0;

  static std::string normalize_minus(const std::string& in) {
    std::string out;
    for (size_t i = 0; i < in.size(); ++i) {
      // U+2212 minus sign
      if (i + 2 < in.size() && static_cast<unsigned char>(in[i]) == 0xE2 &&
          static_cast<unsigned char>(in[i + 1]) == 0x88 && static_cast<unsigned char>(in[i + 2]) == 0x92) {
        out += '-';
        i += 2;
      } else {
        out += in[i];
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ScalarError("cannot parse '" + s_ + "': " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc r = term();
    for (;;) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }

  RatFunc term() {
    RatFunc r = unary();
    for (;;) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        RatFunc d = unary();
        if (d.is_zero()) fail("division by zero");
        r /= d;
      } else {
        skip();
        // implicit product such as "2c" or "3(c+1)"
        if (pos_ < s_.size() && (s_[pos_] == 'c' || s_[pos_] == 'h' || s_[pos_] == '('))
          r *= power();
        else
          return r;
      }
    }
  }

  RatFunc unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    if (eat('^')) {
      skip();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(std::stol(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  RatFunc primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!eat(')')) fail("missing ')'");
      return r;
    }
    if (ch == 'c' || ch == 'h') {
      ++pos_;
      return ch == 'c' ? RatFunc::c() : RatFunc::h();
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        size_t fs = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string ip = s_.substr(start, fs - 1 - start), fp = s_.substr(fs, pos_ - fs);
        Rational v(Integer(ip + fp), Integer("1" + std::string(fp.size(), '0')));
        v.canonicalize();
        return RatFunc(v);
      }
      return RatFunc(Rational(Integer(s_.substr(start, pos_ - start))));
    }
    fail(std::string("unexpected '") + ch + "'");
  }
};

}  // namespace

RatFunc RatFunc::parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace voacoh
