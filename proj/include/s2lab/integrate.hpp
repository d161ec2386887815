#pragma once

#include "s2lab/sigma2_ops.hpp"
#include "s2lab/torus_grid.hpp"

namespace s2lab {

namespace detail {
template <class D>
void require_grid() {
  if constexpr (!std::is_same_v<D, TorusGrid>)
    throw std::domain_error("chart-domain: integration is only defined on torus grids");
}
}  // namespace detail

/// Rectangle-rule integral over the periodic grid, exact for trigonometric
/// polynomials below Nyquist. Summation order is the fixed point order, so
/// results are bit-reproducible.
template <class D>
double volume_integral(const ScalarField<D>& f, const OperatorContext<D>& ctx) {
  if constexpr (!std::is_same_v<D, TorusGrid>) {
    detail::require_grid<D>();
    return 0.0;
  } else {
    ctx.check_domain(f);
    double acc = 0.0;
    for (Eigen::Index p = 0; p < ctx.points(); ++p)
      acc += value_of(f[p]) * value_of(ctx.sqrt_det()[p]);
    return acc * ctx.domain().cell_volume();
  }
}

/// Convenience overload computing the volume element from the metric alone.
template <class D>
double volume_integral(const ScalarField<D>& f, const MetricField<D>& g) {
  if constexpr (!std::is_same_v<D, TorusGrid>) {
    detail::require_grid<D>();
    return 0.0;
  } else {
    if (f.domain_ptr().get() != g.domain_ptr().get())
      throw std::invalid_argument("domain-mismatch: field and metric domains differ");
    const int n = g.domain().dim();
    PointMat<typename D::Scalar> m(n, n);
    double acc = 0.0;
    for (Eigen::Index p = 0; p < g.domain().size(); ++p) {
      g.components().load(p, m);
      typename D::Scalar det{};
      invert_matrix(m, &det);
      acc += value_of(f[p]) * std::sqrt(value_of(det));
    }
    return acc * g.domain().cell_volume();
  }
}

template <class D>
double total_volume(const OperatorContext<D>& ctx) {
  ScalarField<D> one(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) one[p] = typename D::Scalar{1.0};
  return volume_integral(one, ctx);
}

template <class D>
double average(const ScalarField<D>& f, const OperatorContext<D>& ctx) {
  return volume_integral(f, ctx) / total_volume(ctx);
}

/// L2 pairings with indices raised by the context metric. Field kinds are
/// enforced statically: mixing kinds does not typecheck.
template <class D>
double l2_pair(const ScalarField<D>& a, const ScalarField<D>& b, const OperatorContext<D>& ctx) {
  return volume_integral(a * b, ctx);
}

template <class D>
double l2_pair(const OneFormField<D>& a, const OneFormField<D>& b,
               const OperatorContext<D>& ctx) {
  return volume_integral(inner1(a, b, ctx), ctx);
}

template <class D>
double l2_pair(const SymField<D>& a, const SymField<D>& b, const OperatorContext<D>& ctx) {
  return volume_integral(inner2(a, b, ctx), ctx);
}

// ---------------------------------------------------------------------------
// the quadratic functional and the almost-Schur inequality

/// F_eps(g) = int sigma2(g) dv_g0 - (1/(8n(n-1)) + eps) int R_g^2 dv_g0 with a
/// fixed background volume element.
struct FunctionalSpec {
  double eps = 1.0 / 12.0;
  MetricField<TorusGrid> background;

  FunctionalSpec(double eps_, MetricField<TorusGrid> g0) : eps(eps_), background(std::move(g0)) {
    if (!(eps > 0.0)) throw std::invalid_argument("invalid-spec: eps must be positive");
  }
};

inline double f_epsilon(const FunctionalSpec& spec, const MetricField<TorusGrid>& g) {
  if (g.domain_ptr().get() != spec.background.domain_ptr().get())
    throw std::invalid_argument("domain-mismatch: metric and background domains differ");
  const int n = g.domain().dim();
  const Sigma2Context<TorusGrid> sctx{g};
  ScalarField<TorusGrid> r2(g.domain_ptr());
  const auto& R = sctx.ops().scalar_curvature();
  for (Eigen::Index p = 0; p < g.domain().size(); ++p) r2[p] = R[p] * R[p];
  const double c = 1.0 / (8.0 * n * (n - 1)) + spec.eps;
  return volume_integral(sctx.sigma2(), spec.background) -
         c * volume_integral(r2, spec.background);
}

struct SchurSides {
  double lhs = 0.0;  // int (sigma2 - mean)^2 dv_g
  double rhs = 0.0;  // 8n(n-1)/(n-4)^2 (1 + nK/lambda1) int |deficit|^2 dv_g
  double deficit_norm2 = 0.0;
};

/// Both sides of the almost-Schur bound; K and lambda1 are inputs certified
/// here (Ric >= -(n-1)K pointwise), not computed.
template <class D>
SchurSides almost_schur_sides(const Sigma2Context<D>& sctx, double K, double lambda1) {
  detail::require_grid<D>();
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  if (n == 4) throw std::invalid_argument("dimension-four: the bound degenerates at n=4");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("invalid-spec: lambda1 must be positive");
  if (K < 0.0) throw std::invalid_argument("invalid-spec: K must be nonnegative");

  // pointwise certification of Ric >= -(n-1)K
  {
    Eigen::MatrixXd g(n, n), ric(n, n);
    for (Eigen::Index p = 0; p < ctx.points(); ++p) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          g(i, j) = value_of(ctx.metric().at(p, i, j));
          ric(i, j) = value_of(ctx.ricci().at(p, i, j));
        }
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ric, g,
                                                                   Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -(n - 1) * K - 1e-12)
        throw std::runtime_error("ricci-bound-violated: Ric >= -(n-1)K fails pointwise");
    }
  }

  SchurSides out;
  const double mean = average(sctx.sigma2(), ctx);
  ScalarField<D> dev = sctx.sigma2();
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    dev[p] -= typename D::Scalar{mean};
    dev[p] *= dev[p];
  }
  out.lhs = volume_integral(dev, ctx);

  ScalarField<D> one(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) one[p] = typename D::Scalar{1.0};
  SymField<D> deficit = lambda_adjoint(one, sctx);
  using S = typename D::Scalar;
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        deficit.at(p, i, j) += S{2.0 / n} * sctx.sigma2()[p] * ctx.metric().at(p, i, j);
  out.deficit_norm2 = l2_pair(deficit, deficit, ctx);
  const double c = 8.0 * n * (n - 1) / ((n - 4.0) * (n - 4.0));
  out.rhs = c * (1.0 + n * K / lambda1) * out.deficit_norm2;
  return out;
}

}  // namespace s2lab
