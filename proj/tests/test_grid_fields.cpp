#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "s2lab/fields.hpp"
#include "s2lab/torus_grid.hpp"

using namespace s2lab;
constexpr double kPi = std::numbers::pi;

namespace {
std::shared_ptr<const TorusGrid> make_grid(int res, int dealias = 2,
                                           std::vector<double> periods = {}) {
  return std::make_shared<TorusGrid>(3, std::vector<int>{res}, std::move(periods), dealias);
}
}  // namespace

TEST_CASE("grid construction validates parameters") {
  CHECK_THROWS_WITH_AS(TorusGrid(2, {16}), doctest::Contains("invalid-spec"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(TorusGrid(3, {4}), doctest::Contains("invalid-spec"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(TorusGrid(3, {16}, {-1.0}), doctest::Contains("invalid-spec"),
                       std::invalid_argument);
  auto g = make_grid(8);
  CHECK(g->size() == 16 * 16 * 16);
  CHECK(g->user_size() == 8 * 8 * 8);
  CHECK(g->user_points().size() == 512);
  CHECK(g->cell_volume() == doctest::Approx(1.0 / (16.0 * 16 * 16)));
}

TEST_CASE("spectral derivative is exact on Fourier modes") {
  auto dom = make_grid(8);
  auto f = sample_scalar(dom, [](const std::vector<double>& x) {
    return std::cos(2 * kPi * x[0]) + 0.5 * std::sin(4 * kPi * x[2]);
  });
  ScalarField<TorusGrid> d0(dom), d2(dom);
  dom->deriv(f.comp(0), d0.comp(0), 0);
  dom->deriv(f.comp(0), d2.comp(0), 2);
  for (Eigen::Index p = 0; p < dom->size(); ++p) {
    const double x0 = dom->coord(p, 0), x2 = dom->coord(p, 2);
    CHECK(d0[p] == doctest::Approx(-2 * kPi * std::sin(2 * kPi * x0)).epsilon(1e-12));
    CHECK(d2[p] == doctest::Approx(2 * kPi * std::cos(4 * kPi * x2)).epsilon(1e-12));
  }
}

TEST_CASE("derivative respects axis periods") {
  auto dom = make_grid(8, 2, {2.0, 1.0, 1.0});
  auto f = sample_scalar(dom, [](const std::vector<double>& x) {
    return std::cos(2 * kPi * x[0] / 2.0);
  });
  ScalarField<TorusGrid> d0(dom);
  dom->deriv(f.comp(0), d0.comp(0), 0);
  for (Eigen::Index p = 0; p < dom->size(); ++p) {
    const double x0 = dom->coord(p, 0);
    CHECK(d0[p] == doctest::Approx(-kPi * std::sin(kPi * x0)).epsilon(1e-12));
  }
}

TEST_CASE("derivative of a constant vanishes and modes round-trip the fft") {
  auto dom = make_grid(8, 1);
  auto f = sample_scalar(dom, [](const std::vector<double>&) { return 3.25; });
  ScalarField<TorusGrid> d(dom);
  for (int a = 0; a < 3; ++a) {
    dom->deriv(f.comp(0), d.comp(0), a);
    for (Eigen::Index p = 0; p < dom->size(); ++p) CHECK(std::abs(d[p]) < 1e-14);
  }
  std::vector<std::complex<double>> freq(dom->size());
  dom->fft_forward(f.comp(0), freq.data());
  ScalarField<TorusGrid> back(dom);
  dom->fft_inverse(freq.data(), back.comp(0));
  for (Eigen::Index p = 0; p < dom->size(); ++p)
    CHECK(back[p] == doctest::Approx(3.25).epsilon(1e-14));
  // the zero mode carries the mean scaled by the point count
  CHECK(freq[0].real() == doctest::Approx(3.25 * dom->size()));
}

TEST_CASE("field arithmetic and domain checks") {
  auto dom = make_grid(8);
  auto other = make_grid(8);
  ScalarField<TorusGrid> a(dom), b(dom), c(other);
  a[0] = 2.0;
  b[0] = 3.0;
  CHECK((a + b)[0] == 5.0);
  CHECK_THROWS_WITH_AS(a += c, doctest::Contains("domain-mismatch"), std::invalid_argument);

  SymField<TorusGrid> h(dom);
  h.at(5, 0, 1) = 1.5;
  CHECK(h.at(5, 1, 0) == 1.5);  // packed symmetric storage
  CHECK(h.components() == 6);
}

TEST_CASE("metric field positivity check") {
  auto dom = make_grid(8, 1);
  auto g = MetricField<TorusGrid>::identity(dom);
  CHECK(g.min_eigenvalue() == doctest::Approx(1.0));
  g.components().at(0, 0, 1) = 2.0;  // breaks positivity at one point
  CHECK(g.min_eigenvalue() < 0.0);
  CHECK_THROWS_WITH_AS(g.require_positive_definite(), doctest::Contains("indefinite-metric"),
                       std::runtime_error);
}
