#include "s2lab/chart.hpp"

#include <cmath>
#include <stdexcept>

namespace s2lab {

namespace {

std::vector<std::vector<double>> default_points(int n, double r) {
  // deterministic spread: origin, one point per axis, staggered pairs, and
  // two generic directions with no special symmetry
  static const double generic1[] = {0.15, -0.3, 0.22, 0.12, -0.18, 0.08, 0.25};
  static const double generic2[] = {0.5, 0.1, -0.4, 0.2, 0.05, -0.15, 0.1};
  std::vector<std::vector<double>> pts;
  pts.emplace_back(n, 0.0);
  for (int a = 0; a < n; ++a) {
    std::vector<double> p(n, 0.0);
    p[a] = 0.4 * r;
    pts.push_back(p);
  }
  for (int a = 0; a < n; ++a) {
    std::vector<double> p(n, 0.0);
    p[a] = -0.25 * r;
    p[(a + 1) % n] = 0.15 * r;
    pts.push_back(p);
  }
  std::vector<double> p1(n), p2(n);
  for (int a = 0; a < n; ++a) {
    p1[a] = generic1[a % 7] * r;
    p2[a] = generic2[a % 7] * r;
  }
  pts.push_back(p1);
  pts.push_back(p2);
  return pts;
}

}  // namespace

ChartDomain::ChartDomain(ChartSpec spec) : spec_(std::move(spec)) {
  if (spec_.dim < 3) throw std::invalid_argument("invalid-spec: chart dimension must be >= 3");
  if (!(spec_.radius > 0.0)) throw std::invalid_argument("invalid-spec: radius must be positive");
  points_ = spec_.eval_points.empty() ? default_points(spec_.dim, spec_.radius)
                                      : spec_.eval_points;
  for (const auto& p : points_) {
    if (static_cast<int>(p.size()) != spec_.dim)
      throw std::invalid_argument("invalid-spec: evaluation point dimension mismatch");
    double norm2 = 0.0;
    for (double x : p) norm2 += x * x;
    if (norm2 >= 64.0 * spec_.radius * spec_.radius)
      throw std::invalid_argument("invalid-spec: evaluation point too close to chart boundary");
  }
  jets_ = std::make_shared<JetSpace>(spec_.dim, 4);
}

MetricField<ChartDomain> chart_metric(const std::shared_ptr<const ChartDomain>& dom) {
  const int n = dom->dim();
  const double r = dom->spec().radius;
  SymField<ChartDomain> g(dom);
  for (Eigen::Index p = 0; p < dom->size(); ++p) {
    std::vector<Jet> x(n);
    Jet x2 = Jet::constant(dom->jet_space(), 0.0);
    for (int a = 0; a < n; ++a) {
      x[a] = dom->variable(p, a);
      x2 += x[a] * x[a];
    }
    const Jet w = (x2 + Jet(r * r)).reciprocal();
    if (dom->spec().kind == ChartKind::SphereStereographic) {
      const Jet phi = Jet(2.0 * r * r) * w;
      const Jet phi2 = phi * phi;
      for (int i = 0; i < n; ++i) g.at(p, i, i) = phi2;
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          g.at(p, i, j) = Jet(i == j ? 1.0 : 0.0) - x[i] * x[j] * w;
    }
  }
  return MetricField<ChartDomain>(std::move(g));
}

ScalarField<ChartDomain> ambient_coordinate(const std::shared_ptr<const ChartDomain>& dom,
                                            int k) {
  const int n = dom->dim();
  if (k < 0 || k > n)
    throw std::invalid_argument("invalid-spec: ambient coordinate index out of range");
  const double r = dom->spec().radius;
  ScalarField<ChartDomain> f(dom);
  for (Eigen::Index p = 0; p < dom->size(); ++p) {
    std::vector<Jet> x(n);
    Jet x2 = Jet::constant(dom->jet_space(), 0.0);
    for (int a = 0; a < n; ++a) {
      x[a] = dom->variable(p, a);
      x2 += x[a] * x[a];
    }
    if (dom->spec().kind == ChartKind::SphereStereographic) {
      const Jet w = (x2 + Jet(r * r)).reciprocal();
      f[p] = (k < n) ? Jet(2.0 * r * r) * x[k] * w : Jet(r) * (x2 - Jet(r * r)) * w;
    } else {
      f[p] = (k < n) ? x[k] : sqrt(x2 + Jet(r * r));
    }
  }
  return f;
}

double chart_curvature_sign(const ChartDomain& dom) {
  return dom.spec().kind == ChartKind::SphereStereographic ? 1.0 : -1.0;
}

std::string chart_kind_name(ChartKind kind) {
  return kind == ChartKind::SphereStereographic ? "sphere-stereographic" : "hyperboloid-upper";
}

}  // namespace s2lab
