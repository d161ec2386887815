#pragma once

#include <stdexcept>

#include "s2lab/fields.hpp"

namespace s2lab {

template <class S>
using PointMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Gauss-Jordan inverse with value-part pivoting; works for any scalar ring
/// with division (double, Jet). Returns the determinant through `det`.
template <class S>
PointMat<S> invert_matrix(const PointMat<S>& A, S* det = nullptr) {
  const int n = static_cast<int>(A.rows());
  PointMat<S> work = A;
  PointMat<S> inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = S{i == j ? 1.0 : 0.0};
  S d{1.0};
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(value_of(work(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double cand = std::abs(value_of(work(r, col)));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("singular-metric: matrix inversion failed");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(col, j), work(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
      d = -d;
    }
    const S pivot = work(col, col);
    d *= pivot;
    for (int j = 0; j < n; ++j) {
      work(col, j) /= pivot;
      inv(col, j) /= pivot;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = work(r, col);
      for (int j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  if (det) *det = d;
  return inv;
}

/// 3-index field T_{k,(ij)} symmetric in (i,j); holds Christoffel symbols and
/// first covariant derivatives of symmetric tensors.
template <class D>
class Ten3Sym : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  Ten3Sym() = default;
  explicit Ten3Sym(std::shared_ptr<const D> dom)
      : detail::FieldBase<D>(dom, dom->dim() * SymIndex(dom->dim()).pairs()), sym_(dom->dim()) {}

  S& at(Eigen::Index p, int k, int i, int j) { return this->v_[slot(k, i, j) * this->points() + p]; }
  const S& at(Eigen::Index p, int k, int i, int j) const {
    return this->v_[slot(k, i, j) * this->points() + p];
  }
  S* comp(int k, int i, int j) { return this->v_.data() + slot(k, i, j) * this->points(); }
  const S* comp(int k, int i, int j) const {
    return this->v_.data() + slot(k, i, j) * this->points();
  }

 private:
  size_t slot(int k, int i, int j) const {
    return static_cast<size_t>(k) * sym_.pairs() + sym_(i, j);
  }
  SymIndex sym_{1};
};

/// 4-index field T_{ab,(ij)} symmetric in (i,j) only (second covariant
/// derivatives do not commute).
template <class D>
class Ten4Sym : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  Ten4Sym() = default;
  explicit Ten4Sym(std::shared_ptr<const D> dom)
      : detail::FieldBase<D>(dom, dom->dim() * dom->dim() * SymIndex(dom->dim()).pairs()),
        sym_(dom->dim()) {}

  S& at(Eigen::Index p, int a, int b, int i, int j) {
    return this->v_[slot(a, b, i, j) * this->points() + p];
  }
  const S& at(Eigen::Index p, int a, int b, int i, int j) const {
    return this->v_[slot(a, b, i, j) * this->points() + p];
  }

 private:
  size_t slot(int a, int b, int i, int j) const {
    const int n = this->domain().dim();
    return (static_cast<size_t>(a) * n + b) * sym_.pairs() + sym_(i, j);
  }
  SymIndex sym_{1};
};

/// General 2-index field with no symmetry (covariant derivative of a 1-form,
/// composition products A∘B).
template <class D>
class Tensor2Field : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  Tensor2Field() = default;
  explicit Tensor2Field(std::shared_ptr<const D> dom)
      : detail::FieldBase<D>(dom, dom->dim() * dom->dim()) {}

  S& at(Eigen::Index p, int i, int j) {
    return this->v_[(static_cast<size_t>(i) * this->domain().dim() + j) * this->points() + p];
  }
  const S& at(Eigen::Index p, int i, int j) const {
    return this->v_[(static_cast<size_t>(i) * this->domain().dim() + j) * this->points() + p];
  }
};

template <class D>
Tensor2Field<D> transpose(const Tensor2Field<D>& t) {
  Tensor2Field<D> out(t.domain_ptr());
  const int n = t.domain().dim();
  for (Eigen::Index p = 0; p < t.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.at(p, i, j) = t.at(p, j, i);
  return out;
}

/// Fully indexed Riemann tensor R_{ijkl}.
template <class D>
class RiemannField : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  RiemannField() = default;
  explicit RiemannField(std::shared_ptr<const D> dom)
      : detail::FieldBase<D>(dom, dom->dim() * dom->dim() * dom->dim() * dom->dim()) {}

  S& at(Eigen::Index p, int i, int j, int k, int l) {
    return this->v_[slot(i, j, k, l) * this->points() + p];
  }
  const S& at(Eigen::Index p, int i, int j, int k, int l) const {
    return this->v_[slot(i, j, k, l) * this->points() + p];
  }

 private:
  size_t slot(int i, int j, int k, int l) const {
    const int n = this->domain().dim();
    return ((static_cast<size_t>(i) * n + j) * n + k) * n + l;
  }
};

/// Everything the curvature stack produces for one metric.
///
/// Index conventions (fixed once for the whole tool):
///   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
///   R_ijkl  = g(R(e_i,e_j)e_k, e_l)
///   Ric_ij  = g^{kl} R_{kijl}
/// so the unit round sphere has Ric = (n-1) g and sectional curvature +1, and
/// the curvature action g^{kl} g^{st} R_{kijs} h_{lt} sends h to (tr h) g - h
/// on that sphere. The coordinate-function kernel checks on the sphere chart
/// are the acceptance gate for this orientation.
template <class D>
struct CurvaturePack {
  MetricField<D> metric;
  SymField<D> inverse;      // g^{ij}
  ScalarField<D> sqrt_det;  // sqrt(det g)
  Ten3Sym<D> christoffel;   // Gamma^k_{ij}
  RiemannField<D> riemann;  // R_{ijkl}
  SymField<D> ricci;
  ScalarField<D> scalar;
};

template <class D>
CurvaturePack<D> curvature(const MetricField<D>& g) {
  using S = typename D::Scalar;
  const auto dom = g.domain_ptr();
  const int n = dom->dim();
  const Eigen::Index N = dom->size();
  const SymIndex sym(n);

  CurvaturePack<D> pack;
  pack.metric = g;
  pack.inverse = SymField<D>(dom);
  pack.sqrt_det = ScalarField<D>(dom);

  PointMat<S> m(n, n), mi(n, n);
  for (Eigen::Index p = 0; p < N; ++p) {
    g.components().load(p, m);
    S det{};
    mi = invert_matrix(m, &det);
    if (!(value_of(det) > 0.0))
      throw std::runtime_error("indefinite-metric: determinant not positive");
    pack.inverse.store(p, mi);
    using std::sqrt;
    pack.sqrt_det[p] = sqrt(det);
  }

  // dg[a][(ij)] = d_a g_ij
  Ten3Sym<D> dg(dom);
  for (int c = 0; c < sym.pairs(); ++c) {
    auto [i, j] = sym.unpack(c);
    for (int a = 0; a < n; ++a) dom->deriv(g.components().comp(c), dg.comp(a, i, j), a);
  }

  pack.christoffel = Ten3Sym<D>(dom);
  for (Eigen::Index p = 0; p < N; ++p) {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          S s{0.0};
          for (int l = 0; l < n; ++l)
            s += pack.inverse.at(p, k, l) *
                 (dg.at(p, i, j, l) + dg.at(p, j, i, l) - dg.at(p, l, i, j));
          pack.christoffel.at(p, k, i, j) = S{0.5} * s;
        }
  }

  // dGam[a][k,(ij)] = d_a Gamma^k_{ij}
  std::vector<Ten3Sym<D>> dGam;
  dGam.reserve(n);
  for (int a = 0; a < n; ++a) {
    dGam.emplace_back(dom);
    for (int k = 0; k < n; ++k)
      for (int c = 0; c < sym.pairs(); ++c) {
        auto [i, j] = sym.unpack(c);
        dom->deriv(pack.christoffel.comp(k, i, j), dGam[a].comp(k, i, j), a);
      }
  }

  pack.riemann = RiemannField<D>(dom);
  pack.ricci = SymField<D>(dom);
  pack.scalar = ScalarField<D>(dom);
  for (Eigen::Index p = 0; p < N; ++p) {
    // R_{ijk}^l, then lower the last index
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            S up = dGam[i].at(p, l, j, k) - dGam[j].at(p, l, i, k);
            for (int mth = 0; mth < n; ++mth)
              up += pack.christoffel.at(p, mth, j, k) * pack.christoffel.at(p, l, i, mth) -
                    pack.christoffel.at(p, mth, i, k) * pack.christoffel.at(p, l, j, mth);
            pack.riemann.at(p, i, j, k, l) = up;  // temporarily R_{ijk}^l
          }
        }
    // lower: R_ijkl = R_{ijk}^m g_{ml}
    PointMat<S> low(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            S s{0.0};
            for (int mth = 0; mth < n; ++mth)
              s += pack.riemann.at(p, i, j, k, mth) * g.at(p, mth, l);
            low(k, l) = s;
          }
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) pack.riemann.at(p, i, j, k, l) = low(k, l);
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S s{0.0};
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += pack.inverse.at(p, k, l) * pack.riemann.at(p, k, i, j, l);
        pack.ricci.at(p, i, j) = s;
      }
    S r{0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r += pack.inverse.at(p, i, j) * pack.ricci.at(p, i, j);
    pack.scalar[p] = r;
  }
  return pack;
}

}  // namespace s2lab
