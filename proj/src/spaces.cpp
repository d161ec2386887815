#include "s2lab/spaces.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace s2lab {

namespace {
constexpr double kPi = std::numbers::pi;

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

double parse_double(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("invalid-spec: cannot parse ") + what + " '" + s +
                                "'");
  }
}

int parse_int(const std::string& s, const char* what) {
  const double v = parse_double(s, what);
  if (v != std::floor(v))
    throw std::invalid_argument(std::string("invalid-spec: ") + what + " must be an integer");
  return static_cast<int>(v);
}
}  // namespace

SpaceSpec parse_space(const std::string& shorthand) {
  SpaceSpec spec;
  spec.label = shorthand;
  std::string rest;
  if (starts_with(shorthand, "flat-torus-")) {
    spec.kind = SpaceKind::FlatTorus;
    rest = shorthand.substr(11);
  } else if (starts_with(shorthand, "perturbed-torus-")) {
    spec.kind = SpaceKind::PerturbedTorus;
    rest = shorthand.substr(16);
  } else if (starts_with(shorthand, "sphere-")) {
    spec.kind = SpaceKind::SphereChart;
    rest = shorthand.substr(7);
  } else if (starts_with(shorthand, "hyperbolic-")) {
    spec.kind = SpaceKind::HyperbolicChart;
    rest = shorthand.substr(11);
  } else {
    throw std::invalid_argument("invalid-spec: unknown space kind in '" + shorthand + "'");
  }

  std::vector<std::string> tokens;
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, '-')) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("invalid-spec: missing dimension");

  spec.dim = parse_int(tokens[0], "dimension");
  size_t next = 1;
  const bool torus =
      spec.kind == SpaceKind::FlatTorus || spec.kind == SpaceKind::PerturbedTorus;
  if (torus) {
    if (tokens.size() < 2) throw std::invalid_argument("invalid-spec: missing resolution");
    spec.resolution = {parse_int(tokens[1], "resolution")};
    next = 2;
  }
  for (size_t t = next; t < tokens.size(); ++t) {
    const std::string& s = tokens[t];
    if (s.empty()) throw std::invalid_argument("invalid-spec: empty token");
    switch (s[0]) {
      case 'a':
        spec.amplitude = parse_double(s.substr(1), "amplitude");
        break;
      case 'r':
        spec.radius = parse_double(s.substr(1), "radius");
        break;
      case 'L':
        spec.periods.assign(spec.dim, parse_double(s.substr(1), "period"));
        break;
      case 'd':
        spec.dealias = parse_int(s.substr(1), "dealias factor");
        break;
      default:
        throw std::invalid_argument("invalid-spec: unknown token '" + s + "'");
    }
  }
  if (spec.kind == SpaceKind::PerturbedTorus && spec.amplitude == 0.0)
    throw std::invalid_argument("invalid-spec: perturbed torus needs an amplitude");
  return spec;
}

std::string space_label(const SpaceSpec& spec) {
  if (!spec.label.empty()) return spec.label;
  std::ostringstream out;
  switch (spec.kind) {
    case SpaceKind::FlatTorus:
      out << "flat-torus-" << spec.dim << "-" << spec.resolution[0];
      break;
    case SpaceKind::PerturbedTorus:
      out << "perturbed-torus-" << spec.dim << "-" << spec.resolution[0] << "-a"
          << spec.amplitude;
      break;
    case SpaceKind::SphereChart:
      out << "sphere-" << spec.dim << "-r" << spec.radius;
      break;
    case SpaceKind::HyperbolicChart:
      out << "hyperbolic-" << spec.dim << "-r" << spec.radius;
      break;
  }
  return out.str();
}

std::vector<MetricMode> canonical_modes(int dim, double a) {
  std::vector<MetricMode> modes;
  auto axis_wave = [dim](int axis) {
    std::vector<int> w(dim, 0);
    w[axis] = 1;
    return w;
  };
  if (dim == 3) {
    modes.push_back({0, 0, a, axis_wave(1), 0.0});
    modes.push_back({1, 1, 0.8 * a, axis_wave(2), 0.7});
    modes.push_back({2, 2, 0.6 * a, axis_wave(0), 0.3});
    modes.push_back({0, 1, 0.5 * a, axis_wave(2), -0.5 * kPi});  // sin(2 pi x2)
    {
      std::vector<int> w(dim, 0);
      w[0] = 1;
      w[1] = 1;
      modes.push_back({0, 2, 0.4 * a, w, -0.5 * kPi});
    }
    modes.push_back({1, 2, 0.3 * a, axis_wave(0), 0.0});
    return modes;
  }
  // higher dimensions: one mode per component with decaying coefficients;
  // row sums stay below |a| * (1 + 0.45/(1-0.6)) < 2.2 |a|, so the metric is
  // diagonally dominant for |a| <= 0.3
  for (int i = 0; i < dim; ++i)
    modes.push_back({i, i, a * (1.0 - 0.15 * (i % 4)), axis_wave((i + 1) % dim), 0.35 * i});
  double c = 0.45 * a;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      modes.push_back({i, j, c, axis_wave((i + j) % dim), 0.2 * (i + j)});
      c *= 0.6;
    }
  return modes;
}

MetricField<TorusGrid> metric_from_modes(const std::shared_ptr<const TorusGrid>& grid,
                                         const std::vector<MetricMode>& modes) {
  auto g = MetricField<TorusGrid>::identity(grid);
  const int n = grid->dim();
  for (const auto& m : modes) {
    if (m.i < 0 || m.j < 0 || m.i >= n || m.j >= n)
      throw std::invalid_argument("invalid-spec: mode component out of range");
    if (static_cast<int>(m.wave.size()) != n)
      throw std::invalid_argument("invalid-spec: mode wave vector dimension mismatch");
    double* comp = g.components().comp(g.components().sym()(m.i, m.j));
    for (Eigen::Index p = 0; p < grid->size(); ++p) {
      double arg = m.phase;
      for (int a = 0; a < n; ++a)
        arg += 2.0 * kPi * m.wave[a] * grid->coord(p, a) / grid->period(a);
      comp[p] += m.amplitude * std::cos(arg);
    }
  }
  return g;
}

Space build_space(const SpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::FlatTorus:
    case SpaceKind::PerturbedTorus: {
      auto grid =
          std::make_shared<TorusGrid>(spec.dim, spec.resolution, spec.periods, spec.dealias);
      if (spec.kind == SpaceKind::FlatTorus) {
        if (spec.amplitude != 0.0 || !spec.modes.empty())
          throw std::invalid_argument("invalid-spec: flat torus takes no perturbation");
        return GridSpace{grid, MetricField<TorusGrid>::identity(grid)};
      }
      if (!(std::abs(spec.amplitude) < 0.5))
        throw std::invalid_argument("invalid-spec: amplitude must satisfy |a| < 0.5");
      std::vector<MetricMode> modes = spec.modes;
      if (modes.empty()) {
        if (!(std::abs(spec.amplitude) <= 0.3))
          throw std::invalid_argument(
              "invalid-spec: canonical perturbation family enforces |a| <= 0.3");
        modes = canonical_modes(spec.dim, spec.amplitude);
      } else {
        double total = 0.0;
        for (const auto& m : modes) total += std::abs(m.amplitude);
        if (!(total < 0.5))
          throw std::invalid_argument(
              "invalid-spec: total mode amplitude must stay below 0.5");
      }
      auto metric = metric_from_modes(grid, modes);
      metric.require_positive_definite();
      return GridSpace{grid, std::move(metric)};
    }
    case SpaceKind::SphereChart:
    case SpaceKind::HyperbolicChart: {
      ChartSpec cs;
      cs.kind = spec.kind == SpaceKind::SphereChart ? ChartKind::SphereStereographic
                                                    : ChartKind::HyperboloidUpper;
      cs.dim = spec.dim;
      cs.radius = spec.radius;
      cs.eval_points = spec.eval_points;
      auto chart = std::make_shared<ChartDomain>(cs);
      auto metric = chart_metric(chart);
      metric.require_positive_definite();
      return ChartSpace{chart, std::move(metric)};
    }
  }
  throw std::logic_error("unreachable space kind");
}

GridSpace build_grid_space(const SpaceSpec& spec) {
  Space s = build_space(spec);
  if (!is_grid_space(s))
    throw std::domain_error("chart-domain: this operation needs a torus grid");
  return std::get<GridSpace>(std::move(s));
}

ChartSpace build_chart_space(const SpaceSpec& spec) {
  Space s = build_space(spec);
  if (is_grid_space(s))
    throw std::domain_error("invalid-spec: this operation needs a chart space");
  return std::get<ChartSpace>(std::move(s));
}

}  // namespace s2lab
