#pragma once

#include "s2lab/operators.hpp"

namespace s2lab {

/// Context caching the curvature stack together with the Schouten-type tensor
/// A = Ric - R/(2(n-1)) g, sigma1 = tr A and
/// sigma2 = -|Ric|^2/2 + n R^2 / (8(n-1)).
template <class D>
class Sigma2Context {
 public:
  using S = typename D::Scalar;

  explicit Sigma2Context(const MetricField<D>& g) : ops_(g) { init(); }
  explicit Sigma2Context(OperatorContext<D> ops) : ops_(std::move(ops)) { init(); }

  const OperatorContext<D>& ops() const { return ops_; }
  const std::shared_ptr<const D>& domain_ptr() const { return ops_.domain_ptr(); }
  int dim() const { return ops_.dim(); }

  const SymField<D>& a_tensor() const { return a_; }
  const ScalarField<D>& sigma1() const { return s1_; }
  const ScalarField<D>& sigma2() const { return s2_; }
  const ScalarField<D>& ricci_norm2() const { return ric2_; }

 private:
  void init() {
    const int n = ops_.dim();
    const double c = 1.0 / (2.0 * (n - 1));
    a_ = SymField<D>(ops_.domain_ptr());
    for (Eigen::Index p = 0; p < ops_.points(); ++p)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          a_.at(p, i, j) =
              ops_.ricci().at(p, i, j) - S{c} * ops_.scalar_curvature()[p] * ops_.metric().at(p, i, j);
    s1_ = trace(a_, ops_);
    ric2_ = inner2(ops_.ricci(), ops_.ricci(), ops_);
    s2_ = ScalarField<D>(ops_.domain_ptr());
    const double k = n / (8.0 * (n - 1));
    for (Eigen::Index p = 0; p < ops_.points(); ++p) {
      const S& r = ops_.scalar_curvature()[p];
      s2_[p] = S{-0.5} * ric2_[p] + S{k} * r * r;
    }
  }

  OperatorContext<D> ops_;
  SymField<D> a_;
  ScalarField<D> s1_, s2_, ric2_;
};

/// Q = -lap(sigma1)/(n-2) + 4 sigma2/(n-2)^2 + (n-4) sigma1^2 / (2(n-2)^2).
template <class D>
ScalarField<D> q_curvature(const Sigma2Context<D>& ctx) {
  const int n = ctx.dim();
  if (n == 2) throw std::invalid_argument("invalid-spec: Q-curvature needs dimension >= 3");
  ScalarField<D> out = laplacian(ctx.sigma1(), ctx.ops());
  const double c1 = -1.0 / (n - 2);
  const double c2 = 4.0 / ((n - 2) * (n - 2));
  const double c3 = (n - 4) / (2.0 * (n - 2) * (n - 2));
  using S = typename D::Scalar;
  for (Eigen::Index p = 0; p < ctx.ops().points(); ++p)
    out[p] = S{c1} * out[p] + S{c2} * ctx.sigma2()[p] + S{c3} * ctx.sigma1()[p] * ctx.sigma1()[p];
  return out;
}

// ---------------------------------------------------------------------------
// linearized scalar curvature and its adjoint

/// gamma(h) = -lap tr h + delta^2 h - <Ric, h>
template <class D>
ScalarField<D> gamma_lin(const SymField<D>& h, const OperatorContext<D>& ctx) {
  ScalarField<D> out = delta_sq(h, ctx);
  out -= laplacian(trace(h, ctx), ctx);
  out -= inner2(ctx.ricci(), h, ctx);
  return out;
}

/// gamma*(f) = hess f - (lap f) g - f Ric
template <class D>
SymField<D> gamma_adjoint(const ScalarField<D>& f, const OperatorContext<D>& ctx) {
  const int n = ctx.dim();
  SymField<D> out = hessian(f, ctx);
  const ScalarField<D> lap = trace(out, ctx);
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        out.at(p, i, j) -= lap[p] * ctx.metric().at(p, i, j) + f[p] * ctx.ricci().at(p, i, j);
  return out;
}

// ---------------------------------------------------------------------------
// linearized sigma2 and its adjoint

/// Lambda(h) = <Ric, lap h + hess tr h + 2 delta* delta h + 2 ring_R h>/2
///           - n R (lap tr h - delta^2 h + <Ric,h>) / (4(n-1)),
/// with the rough Laplacian in the first slot (the curvature corrections the
/// Lichnerowicz Laplacian would add are written out already).
template <class D>
ScalarField<D> lambda_lin(const SymField<D>& h, const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  const ScalarField<D> trh = trace(h, ctx);
  const SymField<D> hess_trh = hessian(trh, ctx);

  SymField<D> inner_arg = rough_laplacian(h, ctx);
  inner_arg += hess_trh;
  inner_arg += delta_star(divergence_delta(h, ctx), ctx) * S{2.0};
  inner_arg += ring_R(h, ctx) * S{2.0};

  ScalarField<D> out = inner2(ctx.ricci(), inner_arg, ctx);
  const ScalarField<D> lap_trh = trace(hess_trh, ctx);
  const ScalarField<D> d2h = delta_sq(h, ctx);
  const ScalarField<D> rich = inner2(ctx.ricci(), h, ctx);
  const double c = n / (4.0 * (n - 1));
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    out[p] = S{0.5} * out[p] -
             S{c} * ctx.scalar_curvature()[p] * (lap_trh[p] - d2h[p] + rich[p]);
  return out;
}

/// Lambda*(f) = lap(f Ric)/2 + delta^2(f Ric) g / 2 + delta* delta (f Ric)
///            + f ring_R(Ric) - n/(4(n-1)) (lap(f R) g - hess(f R) + f R Ric).
template <class D>
SymField<D> lambda_adjoint(const ScalarField<D>& f, const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  ctx.check_domain(f);

  const SymField<D> f_ric = f * ctx.ricci();
  SymField<D> out = rough_laplacian(f_ric, ctx) * S{0.5};

  const OneFormField<D> delta_fric = divergence_delta(f_ric, ctx);
  const ScalarField<D> d2_fric = delta_oneform(delta_fric, ctx);
  const SymField<D> ring_ric = ring_R(ctx.ricci(), ctx);

  ScalarField<D> fR(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) fR[p] = f[p] * ctx.scalar_curvature()[p];
  const SymField<D> hess_fR = hessian(fR, ctx);
  const ScalarField<D> lap_fR = trace(hess_fR, ctx);

  const SymField<D> ds_delta = delta_star(delta_fric, ctx);
  const double c = n / (4.0 * (n - 1));
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S v = out.at(p, i, j);
        v += S{0.5} * d2_fric[p] * ctx.metric().at(p, i, j);
        v += ds_delta.at(p, i, j);
        v += f[p] * ring_ric.at(p, i, j);
        v -= S{c} * (lap_fR[p] * ctx.metric().at(p, i, j) - hess_fR.at(p, i, j) +
                     fR[p] * ctx.ricci().at(p, i, j));
        out.at(p, i, j) = v;
      }
  return out;
}

/// Closed-form trace (2-n)/4 R lap f + (n-2)/2 <hess f, Ric> - 2 sigma2 f,
/// cross-checked against tr_g of the assembled adjoint before returning.
template <class D>
ScalarField<D> trace_lambda_adjoint(const ScalarField<D>& f, const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  const SymField<D> hf = hessian(f, ctx);
  const ScalarField<D> lapf = trace(hf, ctx);
  const ScalarField<D> hf_ric = inner2(hf, ctx.ricci(), ctx);
  ScalarField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    out[p] = S{(2.0 - n) / 4.0} * ctx.scalar_curvature()[p] * lapf[p] +
             S{(n - 2) / 2.0} * hf_ric[p] - S{2.0} * sctx.sigma2()[p] * f[p];

  const ScalarField<D> direct = trace(lambda_adjoint(f, sctx), ctx);
  double resid = 0.0, scale = 1.0;
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    resid = std::max(resid, std::abs(value_of(direct[p]) - value_of(out[p])));
    scale = std::max(scale, std::abs(value_of(out[p])));
  }
  if (resid > 1e-6 * scale)
    throw std::runtime_error("trace formula disagrees with assembled adjoint trace");
  return out;
}

// ---------------------------------------------------------------------------
// Einstein specialization

/// max_p |Ric - (R/n) g|_g, the certification quantity for Einstein-only code
/// paths.
template <class D>
double einstein_defect(const Sigma2Context<D>& sctx) {
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  using S = typename D::Scalar;
  SymField<D> dev = ctx.ricci();
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        dev.at(p, i, j) -= S{1.0 / n} * ctx.scalar_curvature()[p] * ctx.metric().at(p, i, j);
  const ScalarField<D> norm2 = inner2(dev, dev, ctx);
  double worst = 0.0;
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    worst = std::max(worst, std::sqrt(std::max(0.0, value_of(norm2[p]))));
  return worst;
}

template <class D>
void require_einstein(const Sigma2Context<D>& sctx, double tol = 1e-8) {
  const double r_scale = 1.0 + sctx.ops().scalar_curvature().max_abs_value();
  if (einstein_defect(sctx) >= tol * r_scale)
    throw std::runtime_error("not-einstein: Einstein certification failed");
}

/// (n-2)^2/(4n(n-1)) (R hess f - R (lap f) g - R^2/n f g); certified Einstein
/// metrics only.
template <class D>
SymField<D> einstein_lambda_adjoint(const ScalarField<D>& f, const Sigma2Context<D>& sctx) {
  require_einstein(sctx);
  using S = typename D::Scalar;
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  const double c = (n - 2.0) * (n - 2.0) / (4.0 * n * (n - 1.0));
  SymField<D> out = hessian(f, ctx);
  const ScalarField<D> lapf = trace(out, ctx);
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    const S& R = ctx.scalar_curvature()[p];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        out.at(p, i, j) =
            S{c} * (R * out.at(p, i, j) -
                    (R * lapf[p] + S{1.0 / n} * R * R * f[p]) * ctx.metric().at(p, i, j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// principal symbol and the surjectivity condition

/// Pointwise data for symbol evaluation: metric, Ricci and R frozen at one
/// point, plus the covector xi.
struct SymbolData {
  Eigen::VectorXd xi;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd inverse;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

template <class D>
SymbolData make_symbol_data(const Sigma2Context<D>& sctx, Eigen::Index p,
                            const Eigen::VectorXd& xi) {
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  SymbolData sd;
  sd.xi = xi;
  sd.metric.resize(n, n);
  sd.inverse.resize(n, n);
  sd.ricci.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      sd.metric(i, j) = value_of(ctx.metric().at(p, i, j));
      sd.inverse(i, j) = value_of(ctx.inverse().at(p, i, j));
      sd.ricci(i, j) = value_of(ctx.ricci().at(p, i, j));
    }
  sd.scalar = value_of(ctx.scalar_curvature()[p]);
  return sd;
}

/// sigma_xi(Lambda*) = |xi|^2 Ric / 2 + <xi ox xi, Ric> g / 2
///   - sym(xi ox Ric(xi#)) - n R |xi|^2 g / (4(n-1)) + n R xi ox xi / (4(n-1)).
inline Eigen::MatrixXd principal_symbol(const SymbolData& sd) {
  const int n = static_cast<int>(sd.metric.rows());
  if (sd.xi.size() != n || sd.xi.norm() == 0.0)
    throw std::invalid_argument("zero-covector: symbol needs a nonzero covector");
  const Eigen::VectorXd xi_up = sd.inverse * sd.xi;
  const double xi2 = sd.xi.dot(xi_up);
  const double xxr = xi_up.dot(sd.ricci * xi_up);  // <xi ox xi, Ric>
  const Eigen::VectorXd ric_xi = sd.ricci * xi_up;
  const double c = n / (4.0 * (n - 1.0));
  Eigen::MatrixXd sym = 0.5 * xi2 * sd.ricci + 0.5 * xxr * sd.metric;
  sym -= 0.5 * (sd.xi * ric_xi.transpose() + ric_xi * sd.xi.transpose());
  sym -= c * sd.scalar * xi2 * sd.metric;
  sym += c * sd.scalar * sd.xi * sd.xi.transpose();
  return sym;
}

/// Closed-form trace (n-2)/2 (-|xi|^2 R / 2 + <xi ox xi, Ric>); matches
/// tr_g of principal_symbol.
inline double symbol_trace(const SymbolData& sd) {
  const int n = static_cast<int>(sd.metric.rows());
  if (sd.xi.size() != n || sd.xi.norm() == 0.0)
    throw std::invalid_argument("zero-covector: symbol needs a nonzero covector");
  const Eigen::VectorXd xi_up = sd.inverse * sd.xi;
  const double xi2 = sd.xi.dot(xi_up);
  const double xxr = xi_up.dot(sd.ricci * xi_up);
  return (n - 2.0) / 2.0 * (-0.5 * xi2 * sd.scalar + xxr);
}

/// Pointwise surjectivity condition R^2 > 4 |Ric|^2 (the common equivalent of
/// both printed hypotheses; see stability_margin_* for the two original
/// forms).
template <class D>
ScalarField<D> stability_margin(const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  ScalarField<D> out(sctx.domain_ptr());
  const auto& R = sctx.ops().scalar_curvature();
  for (Eigen::Index p = 0; p < sctx.ops().points(); ++p)
    out[p] = R[p] * R[p] - S{4.0} * sctx.ricci_norm2()[p];
  return out;
}

/// sigma2 - |Ric|^2 / (2(n-1)); positive iff stability_margin is positive.
template <class D>
ScalarField<D> stability_margin_ricci_form(const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  const int n = sctx.dim();
  ScalarField<D> out(sctx.domain_ptr());
  for (Eigen::Index p = 0; p < sctx.ops().points(); ++p)
    out[p] = sctx.sigma2()[p] - S{1.0 / (2.0 * (n - 1))} * sctx.ricci_norm2()[p];
  return out;
}

/// sigma2 - R^2 / (8(n-1)); positive iff stability_margin is positive.
template <class D>
ScalarField<D> stability_margin_scalar_form(const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  const int n = sctx.dim();
  ScalarField<D> out(sctx.domain_ptr());
  const auto& R = sctx.ops().scalar_curvature();
  for (Eigen::Index p = 0; p < sctx.ops().points(); ++p)
    out[p] = sctx.sigma2()[p] - S{1.0 / (8.0 * (n - 1))} * R[p] * R[p];
  return out;
}

/// Strict inequality with a relative band: the equality case (the round
/// 4-sphere has R^2 = 4|Ric|^2 exactly) must evaluate false independent of
/// round-off sign.
template <class D>
std::vector<bool> stability_condition(const Sigma2Context<D>& sctx, double rel_tol = 1e-10) {
  const ScalarField<D> m = stability_margin(sctx);
  const auto& R = sctx.ops().scalar_curvature();
  std::vector<bool> out(sctx.ops().points());
  for (Eigen::Index p = 0; p < sctx.ops().points(); ++p) {
    const double scale =
        value_of(R[p] * R[p]) + 4.0 * value_of(sctx.ricci_norm2()[p]) + 1.0;
    out[p] = value_of(m[p]) > rel_tol * scale;
  }
  return out;
}

// ---------------------------------------------------------------------------
// dimension-3 extras

/// Sectional curvature of span(u, v) from the Weyl-free decomposition
/// R_ijkl = Ric_il g_jk + Ric_jk g_il - Ric_ik g_jl - Ric_jl g_ik
///          - R (g_il g_jk - g_ik g_jl) / 2, valid in dimension 3.
template <class D>
double sectional_dim3(const Sigma2Context<D>& sctx, Eigen::Index p, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& v) {
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  if (n != 3) throw std::invalid_argument("wrong-dimension: sectional decomposition needs n=3");
  Eigen::MatrixXd g(n, n), ric(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = value_of(ctx.metric().at(p, i, j));
      ric(i, j) = value_of(ctx.ricci().at(p, i, j));
    }
  const double R = value_of(ctx.scalar_curvature()[p]);
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rdec = ric(i, l) * g(j, k) + ric(j, k) * g(i, l) - ric(i, k) * g(j, l) -
                              ric(j, l) * g(i, k) -
                              0.5 * R * (g(i, l) * g(j, k) - g(i, k) * g(j, l));
          num += rdec * u[i] * v[j] * v[k] * u[l];
        }
  const double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
  const double denom = uu * vv - uv * uv;
  if (!(denom > 0.0))
    throw std::invalid_argument("invalid-spec: plane basis is degenerate");
  return num / denom;
}

/// Same plane contracted against the assembled Riemann tensor; test route.
template <class D>
double sectional_direct(const Sigma2Context<D>& sctx, Eigen::Index p, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& v) {
  const auto& ctx = sctx.ops();
  const int n = ctx.dim();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = value_of(ctx.metric().at(p, i, j));
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          num += value_of(ctx.riemann().at(p, i, j, k, l)) * u[i] * v[j] * v[k] * u[l];
  const double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
  return num / (uu * vv - uv * uv);
}

/// Q - (23 R^2/32 - 2 |Ric|^2); identically zero in dimension 3 when R is
/// constant, and -lap(sigma1) otherwise.
template <class D>
ScalarField<D> q_dim3_check(const Sigma2Context<D>& sctx) {
  using S = typename D::Scalar;
  if (sctx.dim() != 3)
    throw std::invalid_argument("wrong-dimension: Q reduction is specific to n=3");
  ScalarField<D> out = q_curvature(sctx);
  const auto& R = sctx.ops().scalar_curvature();
  for (Eigen::Index p = 0; p < sctx.ops().points(); ++p)
    out[p] -= S{23.0 / 32.0} * R[p] * R[p] - S{2.0} * sctx.ricci_norm2()[p];
  return out;
}

/// h - (tr h / n) g.
template <class D>
SymField<D> traceless_part(const SymField<D>& h, const OperatorContext<D>& ctx) {
  using S = typename D::Scalar;
  const int n = ctx.dim();
  const ScalarField<D> trh = trace(h, ctx);
  SymField<D> out = h;
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        out.at(p, i, j) -= S{1.0 / n} * trh[p] * ctx.metric().at(p, i, j);
  return out;
}

}  // namespace s2lab
