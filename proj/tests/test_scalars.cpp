#include <random>

#include "doctest.h"
#include "voacoh/scalars.hpp"

using namespace voacoh;

namespace {

RatFunc P(const char* s) { return RatFunc::parse(s); }

// Random polynomial in c, h with small integer coefficients and bounded degree.
Poly random_poly(std::mt19937& rng, unsigned max_deg) {
  std::uniform_int_distribution<int> coef(-4, 4), deg(0, static_cast<int>(max_deg)), nterms(1, 3);
  Poly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    int dc = deg(rng), dh = deg(rng);
    if (dc + dh > static_cast<int>(max_deg)) continue;
    p += Poly::monomial(coef(rng), dc, dh);
  }
  return p;
}

RatFunc random_ratfunc(std::mt19937& rng) {
  Poly n = random_poly(rng, 2);
  Poly d = random_poly(rng, 1);
  while (d.is_zero()) d = random_poly(rng, 1);
  return RatFunc(n, d);
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK((P("1/2") + P("1/3")) == P("5/6"));
  CHECK((P("1/2") + P("1/3")).str() == "5/6");
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(binomial(Rational(-1), 3) == -1);
  CHECK(binomial(Rational(5), 2) == 10);
  CHECK(factorial(5) == 120);
}

TEST_CASE("inverse pair and gcd reduction") {
  RatFunc c = RatFunc::c();
  CHECK((c / (c - 1)) * ((c - 1) / c) == RatFunc(1));
  RatFunc x = (2 * c + 2) / RatFunc(4);
  CHECK(x == P("(c+1)/2"));
  CHECK(x.str() == "1/2 + c/2");
  RatFunc y = (c * c - 1) / (2 * c - 2);
  CHECK(y == P("(c+1)/2"));
  CHECK(y.den().is_const());
  RatFunc z = P("(c*h - h)/(c^2 - 1)");
  CHECK(z == P("h/(c+1)"));
  CHECK(z.den().lead().coef == 1);
}

TEST_CASE("rendering") {
  CHECK(P("456 - 15*c").str() == "456 - 15*c");
  CHECK(P("h").str() == "h");
  CHECK(P("5 + c/2").str() == "5 + c/2");
  CHECK(P("-13/6 + c/12").str() == "-13/6 + c/12");
  CHECK(P("2*h").str() == "2*h");
  CHECK(P("1/(c-26)").str() == "1/(-26 + c)");
  CHECK(P("3c/4").str() == "3*c/4");
  CHECK(P("c^2*h + h^2").str() == "h^2 + c^2*h");
  CHECK(P("0").str() == "0");
}

TEST_CASE("parser round trip") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    RatFunc a = random_ratfunc(rng);
    CHECK(RatFunc::parse(a.str()) == a);
  }
  CHECK_THROWS_AS(RatFunc::parse("c +"), ScalarError);
  CHECK_THROWS_AS(RatFunc::parse("x"), ScalarError);
  CHECK_THROWS_AS(RatFunc::parse("1/0"), ScalarError);
}

TEST_CASE("substitution") {
  CHECK(P("c/2").substitute({{'c', Rational(1, 2)}}) == P("1/4"));
  RatFunc cpq = 1 - RatFunc(6) * RatFunc(Rational((3 - 4) * (3 - 4))) / RatFunc(12);
  CHECK(cpq == P("1/2"));
  CHECK_THROWS_AS(P("1/(c-26)").substitute({{'c', Rational(26)}}), ScalarError);
  try {
    P("1/(c-26)").substitute({{'c', Rational(26)}});
  } catch (const ScalarError& e) {
    CHECK(std::string(e.what()).find("-26 + c") != std::string::npos);
  }
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(P("c") / RatFunc(0), ScalarError);
  CHECK_THROWS_AS(RatFunc(0).inverse(), ScalarError);
}

TEST_CASE("polynomial gcd") {
  Poly c = Poly::var_c(), h = Poly::var_h();
  Poly a = (c + h) * (c - 2 * h + Poly(1)) * (h + Poly(3));
  Poly b = (c + h) * (h + Poly(3)) * (c * c + Poly(1));
  Poly g = Poly::gcd(a, b);
  CHECK(g == Poly::divexact((c + h) * (h + Poly(3)), Poly(1)) * Rational(1));
  CHECK(Poly::gcd(c * h, h * h) == h);
  CHECK(Poly::gcd(Poly(3), c) == Poly(1));
  // content only in c
  CHECK(Poly::gcd((c - 1) * h, (c - 1) * (h + Poly(1))) == c - Poly(1));
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 60; ++i) {
    RatFunc a = random_ratfunc(rng), b = random_ratfunc(rng), c = random_ratfunc(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a - a == RatFunc(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
    // canonical form is idempotent
    RatFunc again(a.num(), a.den());
    CHECK(again == a);
    CHECK(again.str() == a.str());
  }
}

TEST_CASE("nullspace") {
  CHECK(nullspace(ExactMatrix::identity(2)).empty());
  auto ns = nullspace(ExactMatrix::from_rows({{P("1"), P("1")}}));
  REQUIRE(ns.size() == 1);
  CHECK(ns[0][0] == -ns[0][1]);
  CHECK(nullspace(ExactMatrix::from_rows({{P("7 + c/4")}})).empty());
  auto ns2 = nullspace(ExactMatrix::from_rows({{P("c"), P("h"), P("1")}, {P("2*c"), P("2*h"), P("2")}}));
  CHECK(ns2.size() == 2);
}

TEST_CASE("nullspace soundness and completeness on random matrices") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> dim(1, 4), small(-2, 2);
  for (int t = 0; t < 40; ++t) {
    size_t r = dim(rng), c = dim(rng);
    ExactMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) {
        int k = small(rng);
        if (k == 0) continue;
        m.set(i, j, t % 2 ? RatFunc(k) : RatFunc(k) + (k > 0 ? RatFunc::c() : RatFunc::h()));
      }
    auto ns = nullspace(m);
    CHECK(rank(m) + ns.size() == c);
    for (const auto& v : ns)
      for (const auto& x : m.apply(v)) CHECK(x.is_zero());
  }
}

TEST_CASE("determinant") {
  CHECK(determinant(ExactMatrix::identity(3)) == RatFunc(1));
  CHECK(determinant(ExactMatrix::from_rows({{P("2*h")}})) == P("2*h"));
  CHECK(determinant(ExactMatrix::from_rows({{P("15"), P("-9")}, {P("-6"), P("34 - c")}})) == P("456 - 15*c"));
  CHECK(determinant(ExactMatrix::from_rows({{P("1/2"), P("1/3")}, {P("1/4"), P("1/5")}})) == P("1/60"));
  CHECK_THROWS_AS(determinant(ExactMatrix(2, 3)), ScalarError);
}

TEST_CASE("determinant is multiplicative") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> small(-3, 3), pick(0, 2);
  for (int t = 0; t < 30; ++t) {
    size_t n = 1 + t % 3;
    ExactMatrix a(n, n), b(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        RatFunc x(small(rng)), y(small(rng));
        if (t % 2 && pick(rng) == 0) x += RatFunc::c();
        if (t % 3 == 0 && pick(rng) == 0) y += RatFunc::h();
        a.set(i, j, x);
        b.set(i, j, y);
      }
    CHECK(determinant(a * b) == determinant(a) * determinant(b));
  }
}

TEST_CASE("solve and row space") {
  auto m = ExactMatrix::from_rows({{P("1"), P("2")}, {P("3"), P("4")}});
  auto x = solve(m, {P("5"), P("6")});
  REQUIRE(x);
  CHECK(m.apply(*x) == ScalarVector{P("5"), P("6")});
  auto sing = ExactMatrix::from_rows({{P("1"), P("1")}, {P("1"), P("1")}});
  CHECK_FALSE(solve(sing, {P("1"), P("2")}));
  RowSpace rs(3);
  CHECK(rs.add({P("1"), P("c"), P("0")}));
  CHECK_FALSE(rs.add({P("2"), P("2*c"), P("0")}));
  CHECK(rs.contains({P("h"), P("c*h"), P("0")}));
  CHECK_FALSE(rs.contains({P("0"), P("0"), P("1")}));
  CHECK(independent_rows(sing) == std::vector<size_t>{0});
}

TEST_CASE("symbolic polynomials") {
  SymPoly p = SymPoly::var("p"), q = SymPoly::var("q");
  CHECK((p + q) * (p - q) == p * p - q * q);
  CHECK(((p + q) * (p + q) - p * p - q * q - SymPoly(2) * p * q).is_zero());
  CHECK((p * q).evaluate({{"p", 3}, {"q", 4}}) == 12);
}
