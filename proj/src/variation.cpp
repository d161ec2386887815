#include "s2lab/variation.hpp"

#include <Eigen/Cholesky>

#include <complex>

namespace s2lab {

namespace {

using GridSym = SymField<TorusGrid>;
using GridScalar = ScalarField<TorusGrid>;

double rel_to(double resid, double scale) { return resid / (scale + 1.0); }

}  // namespace

std::vector<VerificationReport> verify_evolution(const PathProbe& probe,
                                                 const std::string& space_label,
                                                 double tol_first) {
  Stopwatch timer;
  const OperatorContext<TorusGrid> ctx(probe.base);
  const auto& h = probe.direction;

  // d/dt Ric = -(1/2)(Delta_L h + hess tr h + 2 delta* delta h)
  GridSym closed = lichnerowicz(h, ctx);
  closed += hessian(trace(h, ctx), ctx);
  closed += delta_star(divergence_delta(h, ctx), ctx) * 2.0;
  closed *= -0.5;

  const auto fd_ric = fd_derivative<GridSym>(
      [](const MetricField<TorusGrid>& g) { return curvature(g).ricci; }, probe, 1);
  const double resid_ric = detail::fd_max_diff(fd_ric.value, closed);

  // d/dt R = -lap tr h + delta^2 h - <Ric, h>, i.e. the linearized scalar
  // curvature
  const GridScalar closed_r = gamma_lin(h, ctx);
  const auto fd_r = fd_derivative<GridScalar>(
      [](const MetricField<TorusGrid>& g) { return curvature(g).scalar; }, probe, 1);
  const double resid_r = detail::fd_max_diff(fd_r.value, closed_r);

  const double ms = timer.ms();
  std::vector<VerificationReport> out;
  out.push_back(make_report_abs("evolution-ricci", space_label, resid_ric,
                                rel_to(resid_ric, closed.max_abs_value()), tol_first, ms / 2,
                                "dRic/dt = -(Delta_L h + hess tr h + 2 d* d h)/2"));
  out.push_back(make_report_abs("evolution-scalar", space_label, resid_r,
                                rel_to(resid_r, closed_r.max_abs_value()), tol_first, ms / 2,
                                "dR/dt = -lap tr h + div div h - <Ric,h>"));
  return out;
}

std::vector<VerificationReport> verify_lemma21(const PathProbe& probe,
                                               const std::string& space_label,
                                               double tol_first, double tol_second) {
  Stopwatch timer;
  const OperatorContext<TorusGrid> ctx(probe.base);
  const auto& h = probe.direction;

  auto ric_of = [](const MetricField<TorusGrid>& g) { return curvature(g).ricci; };
  auto norm2_of = [](const MetricField<TorusGrid>& g) {
    OperatorContext<TorusGrid> c(g);
    return inner2(c.ricci(), c.ricci(), c);
  };

  const auto dric = fd_derivative<GridSym>(ric_of, probe, 1);
  const auto d2ric = fd_derivative<GridSym>(ric_of, probe, 2);
  const auto dnorm = fd_derivative<GridScalar>(norm2_of, probe, 1);
  const auto d2norm = fd_derivative<GridScalar>(norm2_of, probe, 2);

  // first order: d|Ric|^2 = 2 <Ric, dRic> - 2 <Ric o Ric, h>
  const Tensor2Field<TorusGrid> ric_ric = comp_product(ctx.ricci(), ctx.ricci(), ctx);
  GridScalar rhs1 = inner2(ctx.ricci(), dric.value, ctx) * 2.0;
  rhs1 -= inner2(ric_ric, h, ctx) * 2.0;
  const double resid1 = detail::fd_max_diff(dnorm.value, rhs1);

  // second order, with |Ric o h|^2 read as the contraction
  // (Ric o h)_ij (Ric o h)^{ji} = <Ric o h, h o Ric>; Ric o h is not
  // symmetric and the identity closes only under this index pairing
  const Tensor2Field<TorusGrid> ric_h = comp_product(ctx.ricci(), h, ctx);
  const Tensor2Field<TorusGrid> h_h = comp_product(h, h, ctx);
  GridScalar rhs2 = inner2(h_h, ric_ric, ctx) * 4.0;
  rhs2 += inner2(ric_h, transpose(ric_h), ctx) * 2.0;
  rhs2 -= inner2(ric_h, dric.value, ctx) * 8.0;
  rhs2 += inner2(dric.value, dric.value, ctx) * 2.0;
  rhs2 += inner2(ctx.ricci(), d2ric.value, ctx) * 2.0;
  const double resid2 = detail::fd_max_diff(d2norm.value, rhs2);

  const double ms = timer.ms();
  std::vector<VerificationReport> out;
  out.push_back(make_report_abs("ricci-norm-first-variation", space_label, resid1,
                                rel_to(resid1, rhs1.max_abs_value()), tol_first, ms / 2,
                                "d|Ric|^2/dt = 2<Ric,dRic> - 2<Ric o Ric,h>"));
  out.push_back(make_report_abs("ricci-norm-second-variation", space_label, resid2,
                                rel_to(resid2, rhs2.max_abs_value()), tol_second, ms / 2,
                                "five-term d^2|Ric|^2/dt^2 expansion"));
  return out;
}

VerificationReport verify_adjoint(const Sigma2Context<TorusGrid>& ctx,
                                  const SymField<TorusGrid>& h,
                                  const ScalarField<TorusGrid>& f,
                                  const std::string& space_label, double tol) {
  Stopwatch timer;
  const ScalarField<TorusGrid> lam = lambda_lin(h, ctx);
  const double lhs = volume_integral(f * lam, ctx.ops());
  const SymField<TorusGrid> adj = lambda_adjoint(f, ctx);
  const double rhs = l2_pair(adj, h, ctx.ops());
  const double resid = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  const double rel = scale > 1e-14 ? resid / scale : resid;
  return make_report_rel("l2-adjointness", space_label, resid, rel, tol, timer.ms(),
                         "int f Lambda(h) = int <Lambda*(f), h>");
}

SymField<TorusGrid> project_div_free(const SymField<TorusGrid>& h,
                                     const MetricField<TorusGrid>& flat_background) {
  const auto dom = h.domain_ptr();
  if (dom.get() != flat_background.domain_ptr().get())
    throw std::invalid_argument("domain-mismatch: direction and background domains differ");
  const int n = dom->dim();
  // flat means identity components here (coordinate lattice of the torus)
  for (Eigen::Index p = 0; p < dom->size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (std::abs(flat_background.at(p, i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
          throw std::invalid_argument(
              "non-flat-background: the Fourier projector needs the flat metric");

  const Eigen::Index N = dom->size();
  const SymIndex sym(n);
  std::vector<std::vector<std::complex<double>>> hat(sym.pairs(),
                                                     std::vector<std::complex<double>>(N));
  for (int c = 0; c < sym.pairs(); ++c) dom->fft_forward(h.comp(c), hat[c].data());

  // per mode: delta delta* acts as (|k|^2 I + k k^T)/2, so cancelling
  // delta h from h - 2 delta* omega means solving
  // (|k|^2 I + k k^T) omega = -i k . hat(h), then subtracting
  // 2 delta* omega = i(k_i omega_j + k_j omega_i)
  Eigen::VectorXd kvec(n);
  Eigen::VectorXcd rhs(n), omega(n);
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index p = 0; p < N; ++p) {
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) {
      kvec[a] = dom->wavenumber(a, dom->axis_index(p, a));
      k2 += kvec[a] * kvec[a];
    }
    if (k2 == 0.0) continue;  // zero (and pure-Nyquist) modes stay untouched
    for (int j = 0; j < n; ++j) {
      std::complex<double> s{0.0, 0.0};
      for (int i = 0; i < n; ++i)
        s += std::complex<double>(0.0, -kvec[i]) * hat[sym(i, j)][p];
      rhs[j] = s;
    }
    A = k2 * Eigen::MatrixXd::Identity(n, n) + kvec * kvec.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    omega.real() = llt.solve(rhs.real());
    omega.imag() = llt.solve(rhs.imag());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        hat[sym(i, j)][p] -= std::complex<double>(0.0, 1.0) *
                             (kvec[i] * omega[j] + kvec[j] * omega[i]);
  }

  SymField<TorusGrid> out(dom);
  for (int c = 0; c < sym.pairs(); ++c) dom->fft_inverse(hat[c].data(), out.comp(c));
  return out;
}

SecondVariationResult second_variation_F(const FunctionalSpec& spec,
                                         const SymField<TorusGrid>& h, double base_step,
                                         int levels) {
  const auto dom = h.domain_ptr();
  const int n = dom->dim();
  const auto& g0 = spec.background;
  for (Eigen::Index p = 0; p < dom->size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (std::abs(g0.at(p, i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
          throw std::invalid_argument("not-flat: the expansion is taken at a flat background");

  const OperatorContext<TorusGrid> ctx(g0);
  const double div_norm = divergence_delta(h, ctx).max_abs_value();
  if (div_norm > 1e-8 * (1.0 + h.max_abs_value()))
    throw std::invalid_argument("not-divergence-free: project the direction first");

  // closed form: -int 2 eps (lap tr h)^2 + |lap ring(h)|^2/4, all flat ops
  const ScalarField<TorusGrid> trh = trace(h, ctx);
  const ScalarField<TorusGrid> lap_trh = laplacian(trh, ctx);
  const SymField<TorusGrid> h0 = traceless_part(h, ctx);
  const SymField<TorusGrid> lap_h0 = rough_laplacian(h0, ctx);
  ScalarField<TorusGrid> integrand = inner2(lap_h0, lap_h0, ctx) * 0.25;
  integrand += lap_trh * lap_trh * (2.0 * spec.eps);
  SecondVariationResult out;
  out.closed_form = -volume_integral(integrand, g0);

  PathProbe probe(g0, h);
  probe.base_step = base_step;
  probe.levels = levels;
  const auto fd = fd_derivative<double>(
      [&spec](const MetricField<TorusGrid>& g) { return f_epsilon(spec, g); }, probe, 2);
  out.fd_value = fd.value;
  out.fd_error_estimate = fd.error_estimate;
  out.difference = std::abs(out.fd_value - out.closed_form);
  return out;
}

}  // namespace s2lab
