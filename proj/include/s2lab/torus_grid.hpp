#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace s2lab {

/// Uniform periodic grid on a flat n-torus with axis periods L_a.
///
/// Differentiation is Fourier-spectral. All calculus runs on an internal
/// working grid refined by `dealias` in every axis: pointwise products of
/// smooth periodic fields (metric inverses, Christoffel combinations) are not
/// band-limited, and evaluating them on the refined grid pushes the fold-back
/// error of their spectral tails below round-off for the low-mode metric
/// families this tool accepts. The user-facing resolution is what configs
/// name; exported samples and assembled operators live on that sub-lattice.
class TorusGrid {
 public:
  using Scalar = double;

  static constexpr int kMinResolution = 8;
  static constexpr int kDefaultDealias = 2;

  TorusGrid(int dim, std::vector<int> resolution, std::vector<double> periods = {},
            int dealias = kDefaultDealias);

  int dim() const { return dim_; }
  Eigen::Index size() const { return size_; }
  Eigen::Index user_size() const { return user_size_; }
  int dealias() const { return dealias_; }
  const std::vector<int>& resolution() const { return res_; }
  const std::vector<int>& working_resolution() const { return work_; }
  double period(int axis) const { return periods_[axis]; }
  double spacing(int axis) const { return periods_[axis] / work_[axis]; }
  double cell_volume() const { return cell_volume_; }

  double coord(Eigen::Index p, int axis) const {
    return static_cast<double>(axis_index(p, axis)) * spacing(axis);
  }
  int axis_index(Eigen::Index p, int axis) const {
    return static_cast<int>((p / strides_[axis]) % work_[axis]);
  }

  /// Working-grid indices of the user-resolution sub-lattice, in user
  /// lexicographic order.
  const std::vector<Eigen::Index>& user_points() const { return user_points_; }

  /// Spectral partial derivative along `axis` of one sampled component.
  void deriv(const double* in, double* out, int axis) const;

  /// Full n-dimensional DFT of one component (layout matches point indexing).
  void fft_forward(const double* in, std::complex<double>* out) const;
  void fft_inverse(const std::complex<double>* in, double* out) const;

  /// Angular wavenumber 2*pi*k/L attached to DFT index j along `axis`; the
  /// Nyquist index of an even axis maps to 0 so that differentiation stays a
  /// real, skew-adjoint operation.
  double wavenumber(int axis, int dft_index) const { return wavenumbers_[axis][dft_index]; }

  bool same_grid(const TorusGrid& other) const { return this == &other; }

 private:
  void transform_lines(std::complex<double>* data, int axis, bool forward) const;

  int dim_;
  std::vector<int> res_;
  std::vector<int> work_;
  std::vector<double> periods_;
  int dealias_;
  Eigen::Index size_ = 1;
  Eigen::Index user_size_ = 1;
  double cell_volume_ = 1.0;
  std::vector<Eigen::Index> strides_;
  std::vector<std::vector<double>> wavenumbers_;
  std::vector<Eigen::Index> user_points_;
};

}  // namespace s2lab
