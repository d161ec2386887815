#pragma once

// shared fixtures for the test suites: canonical spaces and seeded low-mode
// random fields

#include <cmath>
#include <numbers>
#include <random>

#include "s2lab/operators.hpp"
#include "s2lab/spaces.hpp"

namespace s2test {

constexpr double kPi = std::numbers::pi;

inline s2lab::GridSpace flat_space(int res, int dealias = 2, double period = 1.0) {
  s2lab::SpaceSpec spec;
  spec.kind = s2lab::SpaceKind::FlatTorus;
  spec.resolution = {res};
  spec.dealias = dealias;
  spec.periods = {period};
  return s2lab::build_grid_space(spec);
}

inline s2lab::GridSpace perturbed_space(int res, double amplitude, int dealias = 2) {
  s2lab::SpaceSpec spec;
  spec.kind = s2lab::SpaceKind::PerturbedTorus;
  spec.resolution = {res};
  spec.amplitude = amplitude;
  spec.dealias = dealias;
  return s2lab::build_grid_space(spec);
}

inline s2lab::ChartSpace sphere_space(int dim, double radius) {
  s2lab::SpaceSpec spec;
  spec.kind = s2lab::SpaceKind::SphereChart;
  spec.dim = dim;
  spec.radius = radius;
  return s2lab::build_chart_space(spec);
}

inline s2lab::ChartSpace hyperbolic_space(int dim, double radius = 1.0) {
  s2lab::SpaceSpec spec;
  spec.kind = s2lab::SpaceKind::HyperbolicChart;
  spec.dim = dim;
  spec.radius = radius;
  return s2lab::build_chart_space(spec);
}

/// Random band-limited scalar: a handful of modes with |k_a| <= 2.
inline s2lab::ScalarField<s2lab::TorusGrid> random_scalar(
    const std::shared_ptr<const s2lab::TorusGrid>& dom, std::mt19937_64& rng,
    double scale = 1.0) {
  std::uniform_int_distribution<int> kd(-2, 2);
  std::uniform_real_distribution<double> ad(-1.0, 1.0);
  const int n = dom->dim();
  s2lab::ScalarField<s2lab::TorusGrid> f(dom);
  for (int m = 0; m < 6; ++m) {
    std::vector<int> k(n);
    for (int a = 0; a < n; ++a) k[a] = kd(rng);
    const double amp = scale * ad(rng);
    const double phase = kPi * ad(rng);
    for (Eigen::Index p = 0; p < dom->size(); ++p) {
      double arg = phase;
      for (int a = 0; a < n; ++a) arg += 2 * kPi * k[a] * dom->coord(p, a) / dom->period(a);
      f[p] += amp * std::cos(arg);
    }
  }
  return f;
}

inline s2lab::OneFormField<s2lab::TorusGrid> random_oneform(
    const std::shared_ptr<const s2lab::TorusGrid>& dom, std::mt19937_64& rng,
    double scale = 1.0) {
  s2lab::OneFormField<s2lab::TorusGrid> w(dom);
  for (int a = 0; a < dom->dim(); ++a) {
    auto f = random_scalar(dom, rng, scale);
    for (Eigen::Index p = 0; p < dom->size(); ++p) w.at(p, a) = f[p];
  }
  return w;
}

inline s2lab::SymField<s2lab::TorusGrid> random_sym(
    const std::shared_ptr<const s2lab::TorusGrid>& dom, std::mt19937_64& rng,
    double scale = 1.0) {
  s2lab::SymField<s2lab::TorusGrid> h(dom);
  for (int i = 0; i < dom->dim(); ++i)
    for (int j = i; j < dom->dim(); ++j) {
      auto f = random_scalar(dom, rng, scale);
      for (Eigen::Index p = 0; p < dom->size(); ++p) h.at(p, i, j) = f[p];
    }
  return h;
}

template <class Field>
double max_abs(const Field& f) {
  return f.max_abs_value();
}

}  // namespace s2test
