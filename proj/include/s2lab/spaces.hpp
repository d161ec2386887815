#pragma once

#include <string>
#include <variant>
#include <vector>

#include "s2lab/chart.hpp"
#include "s2lab/fields.hpp"
#include "s2lab/torus_grid.hpp"

namespace s2lab {

enum class SpaceKind { FlatTorus, PerturbedTorus, SphereChart, HyperbolicChart };

/// One trigonometric mode of a metric perturbation:
/// g_ij += amplitude * cos(2 pi sum_a wave[a] x_a / L_a + phase).
struct MetricMode {
  int i = 0, j = 0;
  double amplitude = 0.0;
  std::vector<int> wave;
  double phase = 0.0;
};

/// Declarative description of a model space.
struct SpaceSpec {
  SpaceKind kind = SpaceKind::FlatTorus;
  int dim = 3;
  std::vector<int> resolution{16};
  std::vector<double> periods;
  int dealias = TorusGrid::kDefaultDealias;
  double amplitude = 0.0;
  std::vector<MetricMode> modes;  // empty selects the canonical family
  double radius = 1.0;
  std::vector<std::vector<double>> eval_points;
  std::string label;
};

struct GridSpace {
  std::shared_ptr<const TorusGrid> grid;
  MetricField<TorusGrid> metric;
};

struct ChartSpace {
  std::shared_ptr<const ChartDomain> chart;
  MetricField<ChartDomain> metric;
};

using Space = std::variant<GridSpace, ChartSpace>;

inline bool is_grid_space(const Space& s) { return std::holds_alternative<GridSpace>(s); }

/// Shorthand grammar: `<kind>-<dim>-<resolution>[-a<amplitude>]` for tori,
/// plus optional `-L<period>` and `-d<dealias>`; charts use
/// `sphere-<dim>[-r<radius>]` and `hyperbolic-<dim>[-r<radius>]`.
SpaceSpec parse_space(const std::string& shorthand);

std::string space_label(const SpaceSpec& spec);

/// The low-mode perturbation family g = delta + sum a_m (mode); coefficients
/// decay with the component so the metric stays diagonally dominant for every
/// |amplitude| <= 0.3.
std::vector<MetricMode> canonical_modes(int dim, double amplitude);

MetricField<TorusGrid> metric_from_modes(const std::shared_ptr<const TorusGrid>& grid,
                                         const std::vector<MetricMode>& modes);

Space build_space(const SpaceSpec& spec);

/// Convenience for tests and suites: build and return the grid variant or
/// throw chart-domain / wrong-kind errors.
GridSpace build_grid_space(const SpaceSpec& spec);
ChartSpace build_chart_space(const SpaceSpec& spec);

}  // namespace s2lab
