#include "s2lab/model_spaces.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include <algorithm>
#include <complex>
#include <random>

#include "s2lab/operators.hpp"

namespace s2lab {

namespace {

std::shared_ptr<const ChartDomain> model_chart(ChartKind kind, int n, double r) {
  ChartSpec spec;
  spec.kind = kind;
  spec.dim = n;
  spec.radius = r;
  return std::make_shared<ChartDomain>(spec);
}

std::vector<VerificationReport> kernel_reports(const std::shared_ptr<const ChartDomain>& chart,
                                               int k, double tol, double r, double sign,
                                               const std::string& label) {
  Stopwatch timer;
  const int n = chart->dim();
  if (k < 1 || k > n + 1)
    throw std::invalid_argument("invalid-spec: coordinate index must lie in 1..n+1");
  const auto g = chart_metric(chart);
  Sigma2Context<ChartDomain> sctx(g);
  const auto& ctx = sctx.ops();
  const ScalarField<ChartDomain> f = ambient_coordinate(chart, k - 1);

  const SymField<ChartDomain> hf = hessian(f, ctx);
  double hess_resid = 0.0;
  for (Eigen::Index p = 0; p < chart->size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        hess_resid = std::max(
            hess_resid, std::abs(value_of(hf.at(p, i, j)) + sign / (r * r) * value_of(f[p]) *
                                                                value_of(g.at(p, i, j))));

  const ScalarField<ChartDomain> lapf = trace(hf, ctx);
  const double R = sign * n * (n - 1) / (r * r);
  double eig_resid = 0.0;
  for (Eigen::Index p = 0; p < chart->size(); ++p)
    eig_resid = std::max(eig_resid,
                         std::abs(value_of(lapf[p]) + R / (n - 1) * value_of(f[p])));

  const double adj_resid = lambda_adjoint(f, sctx).max_abs_value();

  const double ms = timer.ms() / 3;
  std::vector<VerificationReport> out;
  out.push_back(make_report_abs("kernel-hessian", label, hess_resid, hess_resid, tol, ms,
                                "hess f + sign f g / r^2 = 0 for ambient coordinates"));
  out.push_back(make_report_abs("kernel-eigenfunction", label, eig_resid, eig_resid, tol, ms,
                                "lap f + R f/(n-1) = 0"));
  out.push_back(make_report_abs("kernel-adjoint", label, adj_resid, adj_resid, tol, ms,
                                "Lambda*(x_k) = 0"));
  return out;
}

}  // namespace

std::vector<VerificationReport> sphere_kernel_check(int n, double r, int k, double tol) {
  auto chart = model_chart(ChartKind::SphereStereographic, n, r);
  return kernel_reports(chart, k, tol, r, +1.0,
                        "sphere-" + std::to_string(n) + "-r" + std::to_string(r));
}

std::vector<VerificationReport> hyperbolic_kernel_check(int n, int k, double tol, double r) {
  auto chart = model_chart(ChartKind::HyperboloidUpper, n, r);
  return kernel_reports(chart, k, tol, r, -1.0, "hyperbolic-" + std::to_string(n));
}

Eigen::MatrixXd assemble_discrete_adjoint(const Sigma2Context<TorusGrid>& ctx) {
  const auto dom = ctx.domain_ptr();
  const int n = dom->dim();
  const Eigen::Index N = dom->user_size();
  if (N > 4096)
    throw std::invalid_argument("too-large-grid: dense assembly is capped at 4096 points");
  const SymIndex sym(n);
  const auto& upts = dom->user_points();
  const auto& res = dom->resolution();
  const auto& work = dom->working_resolution();

  // user-mode embedding with Nyquist splitting: build each band-limited delta
  // on the working grid through its user-resolution Fourier coefficients
  std::vector<double> periods(n);
  for (int a = 0; a < n; ++a) periods[a] = dom->period(a);
  TorusGrid user_grid(n, res, periods, 1);
  std::vector<std::complex<double>> user_hat(N);
  std::vector<std::complex<double>> work_hat(dom->size());
  std::vector<double> user_delta(N);

  Eigen::MatrixXd op(static_cast<Eigen::Index>(sym.pairs()) * N, N);
  ScalarField<TorusGrid> basis(dom);

  std::vector<int> kidx(n);
  for (Eigen::Index col = 0; col < N; ++col) {
    std::fill(user_delta.begin(), user_delta.end(), 0.0);
    user_delta[col] = 1.0;
    user_grid.fft_forward(user_delta.data(), user_hat.data());
    std::fill(work_hat.begin(), work_hat.end(), std::complex<double>(0.0, 0.0));
    for (Eigen::Index m = 0; m < N; ++m) {
      for (int a = 0; a < n; ++a) kidx[a] = user_grid.axis_index(m, a);
      // enumerate Nyquist splittings along each axis
      std::vector<std::pair<std::vector<int>, double>> targets{{std::vector<int>(n, 0), 1.0}};
      for (int a = 0; a < n; ++a) {
        const int r_a = res[a];
        int k = kidx[a] <= r_a / 2 ? kidx[a] : kidx[a] - r_a;
        std::vector<std::pair<std::vector<int>, double>> nxt;
        for (auto& [t, w] : targets) {
          if (r_a % 2 == 0 && k == r_a / 2) {
            auto t1 = t, t2 = t;
            t1[a] = r_a / 2;
            t2[a] = work[a] - r_a / 2;
            nxt.push_back({t1, 0.5 * w});
            nxt.push_back({t2, 0.5 * w});
          } else {
            auto t1 = t;
            t1[a] = k >= 0 ? k : work[a] + k;
            nxt.push_back({t1, w});
          }
        }
        targets = std::move(nxt);
      }
      for (const auto& [t, w] : targets) {
        Eigen::Index idx = 0;
        for (int a = 0; a < n; ++a) idx = idx * work[a] + t[a];
        work_hat[idx] += w * user_hat[m];
      }
    }
    const double scale = static_cast<double>(dom->size()) / static_cast<double>(N);
    for (auto& c : work_hat) c *= scale;
    dom->fft_inverse(work_hat.data(), basis.comp(0));

    const SymField<TorusGrid> out = lambda_adjoint(basis, ctx);
    for (int c = 0; c < sym.pairs(); ++c)
      for (Eigen::Index u = 0; u < N; ++u)
        op(static_cast<Eigen::Index>(c) * N + u, col) = out.comp(c)[upts[u]];
  }
  return op;
}

Eigen::VectorXd singular_spectrum(const Eigen::MatrixXd& op, int k) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(op);
  const Eigen::VectorXd sv = svd.singularValues();  // descending
  const int m = std::min<int>(k, static_cast<int>(sv.size()));
  Eigen::VectorXd out(m);
  for (int i = 0; i < m; ++i) out[i] = sv[sv.size() - 1 - i];
  return out;
}

int numerical_kernel_dimension(const Eigen::MatrixXd& op) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(op);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = std::max(op.rows(), op.cols()) *
                        std::numeric_limits<double>::epsilon() * (sv.size() ? sv[0] : 0.0);
  int null = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] <= cutoff) ++null;
  return null;
}

double laplace_lambda1(const MetricField<TorusGrid>& g) {
  const auto dom = g.domain_ptr();
  const int n = dom->dim();
  const Eigen::Index N = dom->user_size();
  if (N > 2000)
    throw std::invalid_argument("too-large-grid: dense eigensolve is capped at 2000 points");

  // user-resolution grid provides the spectral derivative for the basis
  std::vector<double> periods(n);
  for (int a = 0; a < n; ++a) periods[a] = dom->period(a);
  TorusGrid ugrid(n, dom->resolution(), periods, 1);

  // dense derivative matrices: column j = spectral derivative of the nodal
  // delta at user point j
  std::vector<Eigen::MatrixXd> D(n, Eigen::MatrixXd(N, N));
  {
    std::vector<double> e(N), d(N);
    for (Eigen::Index j = 0; j < N; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      for (int a = 0; a < n; ++a) {
        ugrid.deriv(e.data(), d.data(), a);
        for (Eigen::Index i = 0; i < N; ++i) D[a](i, j) = d[i];
      }
    }
  }

  // metric data restricted to the user lattice
  const auto& upts = dom->user_points();
  Eigen::VectorXd w(N);
  std::vector<Eigen::VectorXd> ginv(n * n, Eigen::VectorXd(N));
  {
    Eigen::MatrixXd m(n, n);
    double cellvol = 1.0;
    for (int a = 0; a < n; ++a) cellvol *= periods[a] / dom->resolution()[a];
    for (Eigen::Index u = 0; u < N; ++u) {
      g.components().load(upts[u], m);
      Eigen::MatrixXd mi = m.inverse();
      w[u] = std::sqrt(m.determinant()) * cellvol;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) ginv[a * n + b][u] = mi(a, b);
    }
  }

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Eigen::VectorXd scale = ginv[a * n + b].cwiseProduct(w);
      K.noalias() += D[a].transpose() * scale.asDiagonal() * D[b];
    }
  K = 0.5 * (K + K.transpose()).eval();

  const Eigen::VectorXd minv_sqrt = w.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd A = minv_sqrt.asDiagonal() * K * minv_sqrt.asDiagonal();
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const double cutoff = 1e-8 * std::max(1.0, ev[ev.size() - 1]);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) return ev[i];
  throw std::runtime_error("spectrum collapsed: no nonzero eigenvalue found");
}

double ricci_lower_bound(const OperatorContext<TorusGrid>& ctx) {
  const int n = ctx.dim();
  Eigen::MatrixXd g(n, n), ric(n, n);
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        g(i, j) = ctx.metric().at(p, i, j);
        ric(i, j) = ctx.ricci().at(p, i, j);
      }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ric, g,
                                                                 Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return std::max(0.0, -lo / (n - 1));
}

EigenTriple::EigenTriple(double a, double b, double c) {
  std::array<double, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  l1 = v[0];
  l2 = v[1];
  l3 = v[2];
}

Torus3Certificate torus3_certificate(const EigenTriple& t) {
  Torus3Certificate cert;
  const auto v = t.values();
  cert.sum = v[0] + v[1] + v[2];
  cert.sum_sq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  cert.admissible = std::abs(cert.sum + 1.0) <= 1e-9 && cert.sum_sq <= 3.0 / 8.0 + 1e-12;
  cert.pair_sums = {v[0] + v[1], v[0] + v[2], v[1] + v[2]};
  for (int i = 0; i < 3; ++i) cert.sectional[i] = cert.pair_sums[i] + 0.5;
  if (!cert.admissible) {
    cert.verdict = false;  // reported inadmissible, never as a counterexample
    return cert;
  }
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    ok = ok && cert.pair_sums[i] >= -5.0 / 6.0 - 1e-9 && cert.pair_sums[i] <= -0.5 + 1e-9;
    ok = ok && cert.sectional[i] <= 1e-9;
  }
  cert.verdict = ok;
  return cert;
}

std::vector<EigenTriple> sample_admissible_triples(int count, std::uint64_t seed) {
  // the constraint set is the disk sum(l)=-1, sum(l^2) <= 3/8 of radius
  // sqrt(3/8 - 1/3) around (-1/3,-1/3,-1/3)
  const double radius = std::sqrt(3.0 / 8.0 - 1.0 / 3.0);
  const Eigen::Vector3d center(-1.0 / 3, -1.0 / 3, -1.0 / 3);
  Eigen::Vector3d u(1.0, -1.0, 0.0), v(1.0, 1.0, -2.0);
  u.normalize();
  v.normalize();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-radius, radius);
  std::vector<EigenTriple> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const double x = d(rng), y = d(rng);
    if (x * x + y * y > radius * radius) continue;
    const Eigen::Vector3d l = center + x * u + y * v;
    out.emplace_back(l[0], l[1], l[2]);
  }
  return out;
}

}  // namespace s2lab
