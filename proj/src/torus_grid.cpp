#include "s2lab/torus_grid.hpp"

#include <unsupported/Eigen/FFT>

#include <numeric>
#include <stdexcept>

namespace s2lab {

TorusGrid::TorusGrid(int dim, std::vector<int> resolution, std::vector<double> periods,
                     int dealias)
    : dim_(dim), res_(std::move(resolution)), periods_(std::move(periods)), dealias_(dealias) {
  if (dim_ < 3) throw std::invalid_argument("invalid-spec: torus dimension must be >= 3");
  if (res_.size() == 1) res_.assign(dim_, res_[0]);
  if (static_cast<int>(res_.size()) != dim_)
    throw std::invalid_argument("invalid-spec: one resolution per axis expected");
  for (int r : res_)
    if (r < kMinResolution)
      throw std::invalid_argument("invalid-spec: resolution below 8 is rejected");
  if (periods_.empty()) periods_.assign(dim_, 1.0);
  if (periods_.size() == 1) periods_.assign(dim_, periods_[0]);
  if (static_cast<int>(periods_.size()) != dim_)
    throw std::invalid_argument("invalid-spec: one period per axis expected");
  for (double L : periods_)
    if (!(L > 0.0)) throw std::invalid_argument("invalid-spec: periods must be positive");
  if (dealias_ < 1) throw std::invalid_argument("invalid-spec: dealias factor must be >= 1");

  work_.resize(dim_);
  for (int a = 0; a < dim_; ++a) {
    work_[a] = res_[a] * dealias_;
    size_ *= work_[a];
    user_size_ *= res_[a];
    cell_volume_ *= periods_[a] / work_[a];
  }

  strides_.assign(dim_, 1);
  for (int a = dim_ - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * work_[a + 1];

  wavenumbers_.resize(dim_);
  for (int a = 0; a < dim_; ++a) {
    const int W = work_[a];
    wavenumbers_[a].resize(W);
    for (int j = 0; j < W; ++j) {
      int k = (j <= W / 2) ? j : j - W;
      if (W % 2 == 0 && j == W / 2) k = 0;
      wavenumbers_[a][j] = 2.0 * EIGEN_PI * k / periods_[a];
    }
  }

  user_points_.reserve(user_size_);
  std::vector<int> mi(dim_, 0);
  for (Eigen::Index u = 0; u < user_size_; ++u) {
    Eigen::Index p = 0;
    for (int a = 0; a < dim_; ++a) p += static_cast<Eigen::Index>(mi[a]) * dealias_ * strides_[a];
    user_points_.push_back(p);
    for (int a = dim_ - 1; a >= 0; --a) {
      if (++mi[a] < res_[a]) break;
      mi[a] = 0;
    }
  }
}

void TorusGrid::transform_lines(std::complex<double>* data, int axis, bool forward) const {
  thread_local Eigen::FFT<double> fft;
  const int W = work_[axis];
  const Eigen::Index stride = strides_[axis];
  const Eigen::Index lines = size_ / W;
  std::vector<std::complex<double>> in(W), out(W);
  for (Eigen::Index line = 0; line < lines; ++line) {
    // decompose the line id into (block before axis, offset after axis)
    const Eigen::Index block = line / stride;
    const Eigen::Index offset = line % stride;
    const Eigen::Index base = block * W * stride + offset;
    for (int i = 0; i < W; ++i) in[i] = data[base + i * stride];
    if (forward)
      fft.fwd(out, in);
    else
      fft.inv(out, in);
    for (int i = 0; i < W; ++i) data[base + i * stride] = out[i];
  }
}

void TorusGrid::deriv(const double* in, double* out, int axis) const {
  std::vector<std::complex<double>> buf(size_);
  for (Eigen::Index p = 0; p < size_; ++p) buf[p] = in[p];
  transform_lines(buf.data(), axis, true);
  const auto& k = wavenumbers_[axis];
  for (Eigen::Index p = 0; p < size_; ++p)
    buf[p] *= std::complex<double>(0.0, k[axis_index(p, axis)]);
  transform_lines(buf.data(), axis, false);
  for (Eigen::Index p = 0; p < size_; ++p) out[p] = buf[p].real();
}

void TorusGrid::fft_forward(const double* in, std::complex<double>* out) const {
  for (Eigen::Index p = 0; p < size_; ++p) out[p] = in[p];
  for (int a = 0; a < dim_; ++a) transform_lines(out, a, true);
}

void TorusGrid::fft_inverse(const std::complex<double>* in, double* out) const {
  std::vector<std::complex<double>> buf(in, in + size_);
  for (int a = 0; a < dim_; ++a) transform_lines(buf.data(), a, false);
  for (Eigen::Index p = 0; p < size_; ++p) out[p] = buf[p].real();
}

}  // namespace s2lab
