#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "s2lab/integrate.hpp"

using namespace s2lab;
using namespace s2test;

TEST_CASE("volume integral on the flat unit torus") {
  auto [grid, g] = flat_space(8);
  OperatorContext<TorusGrid> ctx(g);
  auto one = sample_scalar(grid, [](const std::vector<double>&) { return 1.0; });
  CHECK(volume_integral(one, ctx) == doctest::Approx(1.0).epsilon(1e-14));
  auto mode = sample_scalar(grid, [](const std::vector<double>& x) {
    return std::cos(2 * kPi * x[0]);
  });
  CHECK(std::abs(volume_integral(mode, ctx)) < 1e-14);
}

TEST_CASE("quadrature exactness for every mode below half-Nyquist") {
  auto [grid, g] = flat_space(8);
  OperatorContext<TorusGrid> ctx(g);
  for (int k0 = 0; k0 <= 4; ++k0)
    for (int k1 = 0; k1 <= 4; ++k1) {
      auto f = sample_scalar(grid, [=](const std::vector<double>& x) {
        return std::cos(2 * kPi * (k0 * x[0] + k1 * x[1]) + 0.3);
      });
      const double val = volume_integral(f, ctx);
      const double expect = (k0 == 0 && k1 == 0) ? std::cos(0.3) : 0.0;
      CHECK(std::abs(val - expect) < 1e-12);
    }
}

TEST_CASE("curved-volume quadrature agrees across resolutions and with a dense oracle") {
  // metric with g00 = 1 + 0.1 cos(2 pi x1): volume = int sqrt(1+0.1 cos)
  auto build = [](int res) {
    std::shared_ptr<const TorusGrid> grid =
        std::make_shared<TorusGrid>(3, std::vector<int>{res});
    auto g = MetricField<TorusGrid>::identity(grid);
    for (Eigen::Index p = 0; p < grid->size(); ++p)
      g.components().at(p, 0, 0) += 0.1 * std::cos(2 * kPi * grid->coord(p, 1));
    auto one = sample_scalar(grid, [](const std::vector<double>&) { return 1.0; });
    return volume_integral(one, g);
  };
  const double v16 = build(16);
  const double v32 = build(32);
  CHECK(std::abs(v16 - v32) < 1e-10);
  // dense 1d rectangle-rule oracle
  double oracle = 0.0;
  const int M = 1 << 16;
  for (int i = 0; i < M; ++i) oracle += std::sqrt(1.0 + 0.1 * std::cos(2 * kPi * i / M));
  oracle /= M;
  CHECK(v16 == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("l2 pairings") {
  auto [grid, g] = flat_space(8);
  OperatorContext<TorusGrid> ctx(g);
  // <g,g> = n * volume = 3
  CHECK(l2_pair(g.components(), g.components(), ctx) == doctest::Approx(3.0).epsilon(1e-13));

  // trace pairing: <g,h> = 0 for pointwise traceless h
  std::mt19937_64 rng(3);
  auto h = random_sym(grid, rng);
  auto h0 = traceless_part(h, ctx);
  CHECK(std::abs(l2_pair(g.components(), h0, ctx)) < 1e-12);

  // <Ric, g> = int R dv on a curved background, via the independent scalar
  // integral
  auto [pgrid, pg] = perturbed_space(16, 0.1);
  OperatorContext<TorusGrid> pctx(pg);
  const double lhs = l2_pair(pctx.ricci(), pg.components(), pctx);
  const double rhs = volume_integral(pctx.scalar_curvature(), pctx);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}

TEST_CASE("f_epsilon on flat backgrounds and the Einstein integrand identity") {
  auto [grid, g] = flat_space(8);
  FunctionalSpec spec(1.0 / 12.0, g);
  CHECK(std::abs(f_epsilon(spec, g)) < 1e-13);
  CHECK_THROWS_WITH_AS(FunctionalSpec(-0.1, g), doctest::Contains("invalid-spec"),
                       std::invalid_argument);

  // Einstein integrand: sigma2 - (1/(8n(n-1)) + eps) R^2 = -eps R^2 pointwise
  auto [chart, sg] = sphere_space(3, 1.0);
  Sigma2Context<ChartDomain> sctx(sg);
  const double eps = 0.05;
  for (Eigen::Index p = 0; p < chart->size(); ++p) {
    const double R = value_of(sctx.ops().scalar_curvature()[p]);
    const double integrand = value_of(sctx.sigma2()[p]) - (1.0 / 48.0 + eps) * R * R;
    CHECK(integrand == doctest::Approx(-eps * R * R).epsilon(1e-12));
  }
}

TEST_CASE("almost-Schur sides: flat vanishing, certification, dimension guard") {
  auto [grid, g] = flat_space(8);
  Sigma2Context<TorusGrid> ctx(g);
  auto sides = almost_schur_sides(ctx, 0.0, 4 * kPi * kPi);
  CHECK(std::abs(sides.lhs) < 1e-12);
  CHECK(std::abs(sides.rhs) < 1e-12);

  // perturbed torus with an honest K: the inequality holds with margin
  auto [pgrid, pg] = perturbed_space(8, 0.1);
  Sigma2Context<TorusGrid> pctx(pg);
  // K below the true Ricci lower bound must be rejected
  CHECK_THROWS_WITH_AS(almost_schur_sides(pctx, 0.0, 35.0),
                       doctest::Contains("ricci-bound-violated"), std::runtime_error);
  auto ok = almost_schur_sides(pctx, 3.0, 35.0);
  CHECK(ok.lhs <= ok.rhs);
  CHECK(ok.rhs > ok.lhs);

  // n = 4 is excluded
  s2lab::SpaceSpec four;
  four.kind = SpaceKind::FlatTorus;
  four.dim = 4;
  four.resolution = {8};
  four.dealias = 1;
  auto fs = build_grid_space(four);
  Sigma2Context<TorusGrid> fctx(fs.metric);
  CHECK_THROWS_WITH_AS(almost_schur_sides(fctx, 0.0, 1.0),
                       doctest::Contains("dimension-four"), std::invalid_argument);
}

TEST_CASE("integration is grid-only") {
  auto [chart, g] = sphere_space(3, 1.0);
  OperatorContext<ChartDomain> ctx(g);
  ScalarField<ChartDomain> f(chart);
  CHECK_THROWS_WITH_AS(volume_integral(f, ctx), doctest::Contains("chart-domain"),
                       std::domain_error);
}
