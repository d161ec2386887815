#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "s2lab/variation.hpp"

using namespace s2lab;
using namespace s2test;

namespace {

ScalarField<TorusGrid> ones_field(const std::shared_ptr<const TorusGrid>& dom) {
  return sample_scalar(dom, [](const std::vector<double>&) { return 1.0; });
}

SymField<TorusGrid> single_mode_direction(const std::shared_ptr<const TorusGrid>& dom,
                                          double a) {
  SymField<TorusGrid> h(dom);
  for (Eigen::Index p = 0; p < dom->size(); ++p)
    h.at(p, 0, 0) = a * std::cos(2 * kPi * dom->coord(p, 1));
  return h;
}

}  // namespace

TEST_CASE("fd_derivative: constants, scalar-curvature linearization, error paths") {
  auto [grid, g] = flat_space(8);
  std::mt19937_64 rng(2);
  auto f = random_scalar(grid, rng, 0.1);
  SymField<TorusGrid> h(grid);
  for (int i = 0; i < 3; ++i)
    for (Eigen::Index p = 0; p < grid->size(); ++p) h.at(p, i, i) = f[p];

  PathProbe probe(g, h);

  // constant quantity differentiates to zero at machine precision
  const auto czero = fd_derivative<double>(
      [](const MetricField<TorusGrid>&) { return 4.25; }, probe, 1);
  CHECK(std::abs(czero.value) < 1e-12);

  // d/dt R along h = f g at the flat metric equals (1-n) lap f
  const auto dr = fd_derivative<ScalarField<TorusGrid>>(
      [](const MetricField<TorusGrid>& gm) { return curvature(gm).scalar; }, probe, 1);
  OperatorContext<TorusGrid> ctx(g);
  const auto lapf = laplacian(f, ctx);
  double worst = 0.0;
  for (Eigen::Index p = 0; p < grid->size(); ++p)
    worst = std::max(worst, std::abs(dr.value[p] + 2.0 * lapf[p]));
  CHECK(worst < 1e-7);
  CHECK(dr.error_estimate < 1e-6);

  // the same derivative matches the assembled linearization gamma(h)
  const auto gam = gamma_lin(h, ctx);
  worst = 0.0;
  for (Eigen::Index p = 0; p < grid->size(); ++p)
    worst = std::max(worst, std::abs(dr.value[p] - gam[p]));
  CHECK(worst < 1e-7);

  // a direction that destroys positivity is rejected
  SymField<TorusGrid> bad(grid);
  for (Eigen::Index p = 0; p < grid->size(); ++p) bad.at(p, 0, 0) = -600.0;
  PathProbe bad_probe(g, bad);
  CHECK_THROWS_WITH_AS(fd_derivative<double>(
                           [](const MetricField<TorusGrid>&) { return 0.0; }, bad_probe, 1),
                       doctest::Contains("indefinite-along-path"), std::runtime_error);
}

TEST_CASE("fd_derivative of sigma2 matches lambda_lin") {
  auto [grid, g] = perturbed_space(16, 0.1);
  Sigma2Context<TorusGrid> ctx(g);
  std::mt19937_64 rng(17);
  auto h = random_sym(grid, rng, 0.05);
  PathProbe probe(g, h);
  const auto fd = fd_derivative<ScalarField<TorusGrid>>(
      [](const MetricField<TorusGrid>& gm) {
        return Sigma2Context<TorusGrid>(gm).sigma2();
      },
      probe, 1);
  const auto lam = lambda_lin(h, ctx);
  const double scale = lam.max_abs_value();
  double worst = 0.0;
  for (Eigen::Index p = 0; p < grid->size(); ++p)
    worst = std::max(worst, std::abs(fd.value[p] - lam[p]));
  CHECK(worst / scale < 1e-6);
}

TEST_CASE("evolution equations against finite differences") {
  // flat background, parallel direction: everything vanishes
  {
    auto [grid, g] = flat_space(8);
    SymField<TorusGrid> h(grid);
    for (Eigen::Index p = 0; p < grid->size(); ++p) {
      h.at(p, 0, 0) = 0.2;
      h.at(p, 0, 1) = 0.1;
    }
    auto reports = verify_evolution(PathProbe(g, h), "flat-parallel");
    for (const auto& r : reports) {
      CHECK(r.max_absolute_residual < 1e-11);
      CHECK(r.pass);
    }
  }
  // flat background, single cosine mode at a = 0.1
  {
    auto [grid, g] = flat_space(8);
    auto reports = verify_evolution(PathProbe(g, single_mode_direction(grid, 0.1)), "flat");
    for (const auto& r : reports) CHECK(r.max_absolute_residual < 1e-6);
  }
  // perturbed background, random direction
  {
    auto [grid, g] = perturbed_space(8, 0.1);
    std::mt19937_64 rng(23);
    auto reports =
        verify_evolution(PathProbe(g, random_sym(grid, rng, 0.05)), "perturbed");
    for (const auto& r : reports) CHECK(r.max_absolute_residual < 1e-5);
  }
}

TEST_CASE("ricci-norm variation identities") {
  {
    auto [grid, g] = flat_space(8);
    auto reports =
        verify_lemma21(PathProbe(g, single_mode_direction(grid, 0.1)), "flat");
    CHECK(reports[0].max_absolute_residual < 1e-10);  // first order: both sides zero
    CHECK(reports[1].max_absolute_residual < 1e-5);   // second order: 2|dRic|^2 only
  }
  {
    auto [grid, g] = perturbed_space(8, 0.1);
    std::mt19937_64 rng(29);
    auto reports = verify_lemma21(PathProbe(g, random_sym(grid, rng, 0.05)), "perturbed");
    CHECK(reports[0].max_absolute_residual < 1e-5);
    CHECK(reports[1].max_absolute_residual < 1e-4);
    for (const auto& r : reports) CHECK(r.pass);
  }
}

TEST_CASE("adjointness of the linearization pair") {
  // flat: both integrals vanish
  {
    auto [grid, g] = flat_space(8);
    Sigma2Context<TorusGrid> ctx(g);
    std::mt19937_64 rng(31);
    auto r = verify_adjoint(ctx, random_sym(grid, rng), random_scalar(grid, rng), "flat");
    CHECK(r.max_absolute_residual < 1e-12);
  }
  auto [grid, g] = perturbed_space(16, 0.1);
  Sigma2Context<TorusGrid> ctx(g);

  // f = 1, h = g: both sides equal -2 int sigma2 by the trace and scaling
  // identities
  {
    auto one = ones_field(grid);
    const double lam_side = volume_integral(one * lambda_lin(g.components(), ctx), ctx.ops());
    const double expect = -2.0 * volume_integral(ctx.sigma2(), ctx.ops());
    CHECK(lam_side == doctest::Approx(expect).epsilon(1e-10));
    auto r = verify_adjoint(ctx, g.components(), one, "perturbed");
    CHECK(r.relative_residual < 1e-10);
  }

  // random low-mode pairs meet the 1e-8 relative bound
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 3; ++trial) {
    auto r = verify_adjoint(ctx, random_sym(grid, rng), random_scalar(grid, rng),
                            "perturbed");
    CHECK(r.relative_residual < 1e-8);
    CHECK(r.pass);
  }
}

TEST_CASE("divergence-free projector on the flat torus") {
  auto [grid, g] = flat_space(8);
  OperatorContext<TorusGrid> ctx(g);

  // already divergence-free: returned unchanged
  auto h0 = single_mode_direction(grid, 1.0);
  auto p0 = project_div_free(h0, g);
  double diff = 0.0;
  for (int c = 0; c < 6; ++c)
    for (Eigen::Index p = 0; p < grid->size(); ++p)
      diff = std::max(diff, std::abs(p0.comp(c)[p] - h0.comp(c)[p]));
  CHECK(diff < 1e-12);

  // parallel tensors are untouched
  SymField<TorusGrid> hp(grid);
  for (Eigen::Index p = 0; p < grid->size(); ++p) hp.at(p, 0, 1) = 0.7;
  auto pp = project_div_free(hp, g);
  CHECK(std::abs(pp.at(3, 0, 1) - 0.7) < 1e-13);

  // pure gauge directions project to zero
  std::mt19937_64 rng(41);
  auto X = random_oneform(grid, rng);
  auto lie = lie_metric(X, ctx);
  CHECK(project_div_free(lie, g).max_abs_value() < 1e-10);

  // generic field: output is divergence-free and the projector is idempotent
  auto h = random_sym(grid, rng);
  auto ph = project_div_free(h, g);
  CHECK(divergence_delta(ph, ctx).max_abs_value() < 1e-10);
  auto pph = project_div_free(ph, g);
  diff = 0.0;
  for (int c = 0; c < 6; ++c)
    for (Eigen::Index p = 0; p < grid->size(); ++p)
      diff = std::max(diff, std::abs(pph.comp(c)[p] - ph.comp(c)[p]));
  CHECK(diff < 1e-12);

  // non-flat backgrounds are rejected
  auto [pgrid, pg] = perturbed_space(8, 0.1);
  std::mt19937_64 rng2(43);
  CHECK_THROWS_WITH_AS(project_div_free(random_sym(pgrid, rng2), pg),
                       doctest::Contains("non-flat-background"), std::invalid_argument);
}

TEST_CASE("second variation of the quadratic functional") {
  auto [grid, g] = flat_space(16);

  // parallel direction: both routes give zero
  {
    SymField<TorusGrid> hp(grid);
    for (Eigen::Index p = 0; p < grid->size(); ++p) hp.at(p, 1, 1) = 0.3;
    FunctionalSpec spec(0.1, g);
    auto r = second_variation_F(spec, hp);
    CHECK(std::abs(r.closed_form) < 1e-13);
    CHECK(std::abs(r.fd_value) < 1e-9);
  }

  // canonical direction h_00 = a cos(2 pi x1): closed form
  // -16 pi^4 a^2 (eps + 1/12), linear in eps, matched by the FD route
  const double a = 0.1;
  auto h = single_mode_direction(grid, a);
  std::vector<double> fd_values;
  for (double eps : {1.0 / 24, 1.0 / 12, 1.0 / 6}) {
    FunctionalSpec spec(eps, g);
    auto r = second_variation_F(spec, h);
    const double expect = -16.0 * std::pow(kPi, 4) * a * a * (eps + 1.0 / 12.0);
    CHECK(r.closed_form == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(r.fd_value - r.closed_form) / std::abs(r.closed_form) < 1e-4);
    fd_values.push_back(r.fd_value);
  }
  // eps-linearity of the FD route: slopes over {1/24,1/12,1/6} agree
  const double s1 = (fd_values[1] - fd_values[0]) / (1.0 / 12 - 1.0 / 24);
  const double s2 = (fd_values[2] - fd_values[1]) / (1.0 / 6 - 1.0 / 12);
  CHECK(std::abs(s1 - s2) / std::abs(s1) < 1e-8);

  // traceless divergence-free directions lose the eps term entirely
  {
    SymField<TorusGrid> ht(grid);
    for (Eigen::Index p = 0; p < grid->size(); ++p) {
      const double c = std::cos(2 * kPi * grid->coord(p, 2));
      ht.at(p, 0, 0) = c;
      ht.at(p, 1, 1) = -c;
    }
    OperatorContext<TorusGrid> ctx(g);
    CHECK(trace(ht, ctx).max_abs_value() < 1e-13);
    CHECK(divergence_delta(ht, ctx).max_abs_value() < 1e-13);
    FunctionalSpec sa(0.03, g), sb(0.4, g);
    auto ra = second_variation_F(sa, ht);
    auto rb = second_variation_F(sb, ht);
    CHECK(ra.closed_form == doctest::Approx(rb.closed_form).epsilon(1e-13));
    // and |lap h0|^2 = |lap h|^2 here since tr h = 0
    const auto lap_h = rough_laplacian(ht, ctx);
    const double expect = -0.25 * l2_pair(lap_h, lap_h, ctx);
    CHECK(ra.closed_form == doctest::Approx(expect).epsilon(1e-12));
  }

  // the traceless-split norm identity |lap ring(h)|^2 = |lap h|^2 -
  // (lap tr h)^2 / n pointwise on flat backgrounds
  {
    OperatorContext<TorusGrid> ctx(g);
    std::mt19937_64 rng(47);
    auto hr = random_sym(grid, rng, 0.02);  // unit-scale laplacians
    auto h0 = traceless_part(hr, ctx);
    auto lap_h = rough_laplacian(hr, ctx);
    auto lap_h0 = rough_laplacian(h0, ctx);
    auto lap_tr = laplacian(trace(hr, ctx), ctx);
    auto n2_full = inner2(lap_h, lap_h, ctx);
    auto n2_free = inner2(lap_h0, lap_h0, ctx);
    double worst = 0.0;
    for (Eigen::Index p = 0; p < grid->size(); ++p)
      worst = std::max(worst,
                       std::abs(n2_free[p] - (n2_full[p] - lap_tr[p] * lap_tr[p] / 3.0)));
    CHECK(worst < 1e-10);
  }

  // error paths
  {
    std::mt19937_64 rng(53);
    auto hr = random_sym(grid, rng);
    FunctionalSpec spec(0.1, g);
    CHECK_THROWS_WITH_AS(second_variation_F(spec, hr),
                         doctest::Contains("not-divergence-free"), std::invalid_argument);
    auto [pgrid, pg] = perturbed_space(8, 0.1);
    FunctionalSpec pspec(0.1, pg);
    CHECK_THROWS_WITH_AS(second_variation_F(pspec, single_mode_direction(pgrid, 0.1)),
                         doctest::Contains("not-flat"), std::invalid_argument);
  }
}
