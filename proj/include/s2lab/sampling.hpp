#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "s2lab/fields.hpp"
#include "s2lab/torus_grid.hpp"

namespace s2lab {

/// Seeded band-limited test fields: a handful of modes with |k| <= 2 per
/// axis, amplitudes and phases drawn from the generator. Fixed seeds make
/// every suite and report bit-reproducible.
inline ScalarField<TorusGrid> random_lowmode_scalar(
    const std::shared_ptr<const TorusGrid>& dom, std::mt19937_64& rng, double scale = 1.0) {
  constexpr double kPi = std::numbers::pi;
  std::uniform_int_distribution<int> kd(-2, 2);
  std::uniform_real_distribution<double> ad(-1.0, 1.0);
  const int n = dom->dim();
  ScalarField<TorusGrid> f(dom);
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

inline OneFormField<TorusGrid> random_lowmode_oneform(
    const std::shared_ptr<const TorusGrid>& dom, std::mt19937_64& rng, double scale = 1.0) {
  OneFormField<TorusGrid> w(dom);
  for (int a = 0; a < dom->dim(); ++a) {
    const auto f = random_lowmode_scalar(dom, rng, scale);
    for (Eigen::Index p = 0; p < dom->size(); ++p) w.at(p, a) = f[p];
  }
  return w;
}

inline SymField<TorusGrid> random_lowmode_sym(const std::shared_ptr<const TorusGrid>& dom,
                                              std::mt19937_64& rng, double scale = 1.0) {
  SymField<TorusGrid> h(dom);
  for (int i = 0; i < dom->dim(); ++i)
    for (int j = i; j < dom->dim(); ++j) {
      const auto f = random_lowmode_scalar(dom, rng, scale);
      for (Eigen::Index p = 0; p < dom->size(); ++p) h.at(p, i, j) = f[p];
    }
  return h;
}

}  // namespace s2lab
