#pragma once

#include <memory>
#include <string>
#include <vector>

#include "s2lab/fields.hpp"
#include "s2lab/jets.hpp"

namespace s2lab {

enum class ChartKind { SphereStereographic, HyperboloidUpper };

/// Closed-form model space evaluated pointwise on a coordinate chart.
struct ChartSpec {
  ChartKind kind = ChartKind::SphereStereographic;
  int dim = 3;
  double radius = 1.0;
  /// Chart coordinates to evaluate at; empty selects a deterministic default
  /// set (origin, axis points, a few generic directions), all kept within
  /// |x| < 8 r so the closed forms stay well scaled.
  std::vector<std::vector<double>> eval_points;
};

/// Domain whose scalars are truncated Taylor jets: every sampled "field value"
/// carries exact partial derivatives up to total order 4, so coordinate
/// differentiation is exact and curvature/operator evaluation on the chart is
/// closed-form up to round-off. Order 4 covers the deepest operator here (the
/// adjoint map differentiates the metric four times); jets throw if an
/// operator chain ever asks for more.
class ChartDomain {
 public:
  using Scalar = Jet;

  explicit ChartDomain(ChartSpec spec);

  int dim() const { return spec_.dim; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }
  const ChartSpec& spec() const { return spec_; }
  const JetSpace& jet_space() const { return *jets_; }
  double coord(Eigen::Index p, int axis) const { return points_[p][axis]; }

  void deriv(const Jet* in, Jet* out, int axis) const {
    for (Eigen::Index p = 0; p < size(); ++p) out[p] = in[p].deriv(axis);
  }

  /// Chart coordinate x_axis as a jet field (the seeded variables).
  Jet variable(Eigen::Index p, int axis) const {
    return Jet::variable(*jets_, axis, points_[p][axis]);
  }

 private:
  ChartSpec spec_;
  std::shared_ptr<JetSpace> jets_;
  std::vector<std::vector<double>> points_;
};

/// The model metric of the chart: conformally flat stereographic sphere
/// g = (2 r^2 / (r^2 + |x|^2))^2 delta, or the induced hyperboloid metric
/// g_ij = delta_ij - x_i x_j / (r^2 + |x|^2).
MetricField<ChartDomain> chart_metric(const std::shared_ptr<const ChartDomain>& dom);

/// Ambient coordinate function X_k restricted to the model space, pulled back
/// to the chart; k runs over 0..dim (dim+1 functions). On the sphere these
/// are the first nonzero Laplace eigenfunctions, on the hyperboloid the
/// Minkowski coordinates; both satisfy hess f + delta_sign f g = 0.
ScalarField<ChartDomain> ambient_coordinate(const std::shared_ptr<const ChartDomain>& dom, int k);

/// +1 on the sphere, -1 on the hyperboloid.
double chart_curvature_sign(const ChartDomain& dom);

std::string chart_kind_name(ChartKind kind);

}  // namespace s2lab
