#pragma once

#include <functional>

#include "s2lab/integrate.hpp"
#include "s2lab/report.hpp"
#include "s2lab/sigma2_ops.hpp"
#include "s2lab/torus_grid.hpp"

namespace s2lab {

/// Finite-difference probe along the metric path g(t) = g0 + t h.
struct PathProbe {
  MetricField<TorusGrid> base;
  SymField<TorusGrid> direction;
  double base_step = 1e-3;
  int levels = 3;  // Richardson levels, geometric step sequence of ratio 2

  PathProbe(MetricField<TorusGrid> g0, SymField<TorusGrid> h)
      : base(std::move(g0)), direction(std::move(h)) {}

  /// Throws indefinite-along-path unless g0 + t h stays positive-definite for
  /// |t| up to twice the largest probed step.
  void validate() const {
    if (levels < 2) throw std::invalid_argument("invalid-spec: need at least 2 levels");
    if (!(base_step > 0.0)) throw std::invalid_argument("invalid-spec: step must be positive");
    for (double s : {2.0 * base_step, -2.0 * base_step}) {
      if (!(base.plus_scaled(s, direction).min_eigenvalue() > 0.0))
        throw std::runtime_error(
            "indefinite-along-path: metric loses positivity along the probe");
    }
  }

  MetricField<TorusGrid> at(double t) const { return base.plus_scaled(t, direction); }
};

template <class T>
struct FdResult {
  T value;
  double error_estimate = 0.0;  // gap between the two finest extrapolants
};

namespace detail {

inline double fd_lincomb(double a, double x, double b, double y) { return a * x + b * y; }
inline double fd_max_diff(double x, double y) { return std::abs(x - y); }

template <class F>
F fd_lincomb(double a, const F& x, double b, const F& y) {
  F out = x * a;
  out += y * b;
  return out;
}

template <class F>
double fd_max_diff(const F& x, const F& y) {
  F d = x;
  d -= y;
  return d.max_abs_value();
}

}  // namespace detail

/// Central finite difference of a metric-dependent quantity along the probe
/// direction, Richardson-extrapolated over `levels` halvings of the step.
/// T is double, ScalarField<TorusGrid> or SymField<TorusGrid>.
template <class T>
FdResult<T> fd_derivative(const std::function<T(const MetricField<TorusGrid>&)>& quantity,
                          const PathProbe& probe, int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("invalid-spec: derivative order must be 1 or 2");
  probe.validate();
  const int L = probe.levels;

  T center{};
  if (order == 2) center = quantity(probe.base);

  std::vector<T> diag;  // Richardson table, previous row
  std::vector<T> row;
  double t = probe.base_step;
  for (int k = 0; k < L; ++k, t *= 0.5) {
    const T plus = quantity(probe.at(t));
    const T minus = quantity(probe.at(-t));
    T d = (order == 1)
              ? detail::fd_lincomb(0.5 / t, plus, -0.5 / t, minus)
              : detail::fd_lincomb(1.0 / (t * t),
                                   detail::fd_lincomb(1.0, plus, 1.0, minus), -2.0 / (t * t),
                                   center);
    row.assign(1, std::move(d));
    for (int m = 1; m <= k; ++m) {
      const double w = std::pow(4.0, m);
      row.push_back(detail::fd_lincomb(w / (w - 1.0), row[m - 1], -1.0 / (w - 1.0),
                                       diag[m - 1]));
    }
    diag = row;
  }
  FdResult<T> out{diag.back(), 0.0};
  if (L >= 2) out.error_estimate = detail::fd_max_diff(diag[L - 1], diag[L - 2]);
  return out;
}

/// Right-hand sides of the first-variation formulas for Ric and R, compared
/// against finite differences of the assembled curvature.
std::vector<VerificationReport> verify_evolution(const PathProbe& probe,
                                                 const std::string& space_label,
                                                 double tol_first = 1e-5);

/// First and second t-derivative identities for |Ric_{g(t)}|^2.
std::vector<VerificationReport> verify_lemma21(const PathProbe& probe,
                                               const std::string& space_label,
                                               double tol_first = 1e-5,
                                               double tol_second = 1e-4);

/// | int f Lambda(h) - int <Lambda* f, h> | / max(|lhs|, |rhs|).
VerificationReport verify_adjoint(const Sigma2Context<TorusGrid>& ctx,
                                  const SymField<TorusGrid>& h,
                                  const ScalarField<TorusGrid>& f,
                                  const std::string& space_label, double tol = 1e-8);

/// Orthogonal projection onto divergence-free symmetric tensors over a flat
/// torus background: h - 2 delta* omega with delta delta* omega = delta h
/// solved mode-by-mode in Fourier space; the zero mode of omega is fixed to
/// zero (parallel fields do not move h).
SymField<TorusGrid> project_div_free(const SymField<TorusGrid>& h,
                                     const MetricField<TorusGrid>& flat_background);

struct SecondVariationResult {
  double closed_form = 0.0;
  double fd_value = 0.0;
  double fd_error_estimate = 0.0;
  double difference = 0.0;
};

/// Second variation of F_eps at a flat background along a divergence-free
/// direction: closed form -int (2 eps (lap tr h)^2 + |lap ring(h)|^2 / 4)
/// against the Richardson second difference of the functional itself.
SecondVariationResult second_variation_F(const FunctionalSpec& spec,
                                         const SymField<TorusGrid>& h,
                                         double base_step = 1e-3, int levels = 3);

}  // namespace s2lab
