#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "s2lab/jets.hpp"

using s2lab::Jet;
using s2lab::JetSpace;

TEST_CASE("jet space enumerates all multi-indices up to the order") {
  JetSpace sp(3, 4);
  CHECK(sp.size() == 35);  // C(3+4,4)
  CHECK(sp.total_degree(0) == 0);
  // derivative shift stays inside the table until the order is exhausted
  int within = 0;
  for (int p = 0; p < sp.size(); ++p)
    if (sp.total_degree(p) < 4)
      for (int a = 0; a < 3; ++a) {
        CHECK(sp.shift_up(p, a) >= 0);
        ++within;
      }
  CHECK(within > 0);
}

TEST_CASE("jet arithmetic reproduces derivatives of a rational function") {
  JetSpace sp(2, 4);
  const double x0 = 0.7, y0 = -0.4;
  Jet x = Jet::variable(sp, 0, x0);
  Jet y = Jet::variable(sp, 1, y0);
  // f = (x^2 y + 3) / (x + y^2)
  Jet f = (x * x * y + Jet(3.0)) / (x + y * y);
  auto fexact = [](double X, double Y) { return (X * X * Y + 3.0) / (X + Y * Y); };
  CHECK(f.value() == doctest::Approx(fexact(x0, y0)).epsilon(1e-14));

  // df/dx via jets vs central finite differences
  const double h = 1e-6;
  const double fd_x = (fexact(x0 + h, y0) - fexact(x0 - h, y0)) / (2 * h);
  CHECK(f.deriv(0).value() == doctest::Approx(fd_x).epsilon(1e-8));
  const double hm = 1e-4;  // larger step: the mixed stencil divides by 4h^2
  const double fd_xy = (fexact(x0 + hm, y0 + hm) - fexact(x0 + hm, y0 - hm) -
                        fexact(x0 - hm, y0 + hm) + fexact(x0 - hm, y0 - hm)) /
                       (4 * hm * hm);
  CHECK(f.deriv(0).deriv(1).value() == doctest::Approx(fd_xy).epsilon(1e-6));
}

TEST_CASE("reciprocal and sqrt are exact truncated series") {
  JetSpace sp(3, 4);
  Jet x = Jet::variable(sp, 0, 0.3);
  Jet y = Jet::variable(sp, 1, 1.1);
  Jet g = Jet(1.0) + x * x + y;
  Jet r = g * g.reciprocal();
  CHECK(r.value() == doctest::Approx(1.0).epsilon(1e-15));
  // all non-constant coefficients of g * (1/g) vanish
  for (int p = 1; p < sp.size(); ++p) CHECK(std::abs(r.coeff(p)) < 1e-13);

  Jet s = sqrt(g);
  Jet back = s * s - g;
  for (int p = 0; p < sp.size(); ++p) CHECK(std::abs(back.coeff(p)) < 1e-13);
}

TEST_CASE("derivative order budget is enforced") {
  JetSpace sp(3, 4);
  Jet x = Jet::variable(sp, 0, 0.5);
  Jet d = x;
  for (int k = 0; k < 4; ++k) d = d.deriv(0);
  CHECK(d.order() == 0);
  CHECK_THROWS_AS(d.deriv(0), std::logic_error);
}

TEST_CASE("detached constants attach on first contact") {
  JetSpace sp(3, 4);
  Jet c;  // default: detached zero
  Jet x = Jet::variable(sp, 2, 2.0);
  Jet s = c + Jet(5.0) * x;
  CHECK(s.value() == doctest::Approx(10.0));
  CHECK(s.deriv(2).value() == doctest::Approx(5.0));
}

TEST_CASE("fourth derivative of a rational function is exact") {
  JetSpace sp(1, 4);
  const double x0 = 0.2;
  Jet x = Jet::variable(sp, 0, x0);
  Jet f = (Jet(1.0) + x * x).reciprocal();
  Jet d4 = f.deriv(0).deriv(0).deriv(0).deriv(0);
  // closed form: d^4/dx^4 (1+x^2)^-1 = (24 - 240 x^2 + 120 x^4)/(1+x^2)^5
  const double exact =
      (24.0 - 240.0 * x0 * x0 + 120.0 * std::pow(x0, 4)) / std::pow(1.0 + x0 * x0, 5);
  CHECK(d4.value() == doctest::Approx(exact).epsilon(1e-12));
}
