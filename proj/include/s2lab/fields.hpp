#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "s2lab/jets.hpp"

namespace s2lab {

/// Packing of an ordered symmetric index pair (i <= j) into a flat slot,
/// lexicographic: (0,0),(0,1),...,(0,n-1),(1,1),...
class SymIndex {
 public:
  explicit SymIndex(int n) : n_(n) {}
  int n() const { return n_; }
  int pairs() const { return n_ * (n_ + 1) / 2; }
  int operator()(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }
  std::pair<int, int> unpack(int slot) const {
    for (int i = 0; i < n_; ++i) {
      const int row = n_ - i;
      if (slot < row) return {i, i + slot};
      slot -= row;
    }
    throw std::out_of_range("sym slot");
  }

 private:
  int n_;
};

namespace detail {

template <class D>
class FieldBase {
 public:
  using Domain = D;
  using S = typename D::Scalar;

  FieldBase() = default;
  FieldBase(std::shared_ptr<const D> dom, int comps)
      : dom_(std::move(dom)), comps_(comps),
        v_(static_cast<size_t>(comps) * dom_->size(), S{}) {}

  const std::shared_ptr<const D>& domain_ptr() const { return dom_; }
  const D& domain() const { return *dom_; }
  Eigen::Index points() const { return dom_ ? dom_->size() : 0; }
  int components() const { return comps_; }

  S* comp(int c) { return v_.data() + static_cast<size_t>(c) * points(); }
  const S* comp(int c) const { return v_.data() + static_cast<size_t>(c) * points(); }

  std::vector<S>& raw() { return v_; }
  const std::vector<S>& raw() const { return v_; }

  double max_abs_value() const {
    double m = 0.0;
    for (const S& x : v_) m = std::max(m, std::abs(value_of(x)));
    return m;
  }

 protected:
  void check_same_domain(const FieldBase& o) const {
    if (dom_.get() != o.dom_.get())
      throw std::invalid_argument("domain-mismatch: fields live on different domains");
  }

  std::shared_ptr<const D> dom_;
  int comps_ = 0;
  std::vector<S> v_;
};

}  // namespace detail

template <class D>
class ScalarField : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const D> dom) : detail::FieldBase<D>(std::move(dom), 1) {}

  S& operator[](Eigen::Index p) { return this->v_[p]; }
  const S& operator[](Eigen::Index p) const { return this->v_[p]; }

  ScalarField& operator+=(const ScalarField& o) {
    this->check_same_domain(o);
    for (size_t i = 0; i < this->v_.size(); ++i) this->v_[i] += o.v_[i];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    this->check_same_domain(o);
    for (size_t i = 0; i < this->v_.size(); ++i) this->v_[i] -= o.v_[i];
    return *this;
  }
  ScalarField& operator*=(const S& c) {
    for (auto& x : this->v_) x *= c;
    return *this;
  }

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, const S& c) { return a *= c; }
  friend ScalarField operator*(const S& c, ScalarField a) { return a *= c; }
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    a.check_same_domain(b);
    ScalarField out = a;
    for (size_t i = 0; i < out.v_.size(); ++i) out.v_[i] *= b.v_[i];
    return out;
  }
};

template <class D>
class OneFormField : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  OneFormField() = default;
  explicit OneFormField(std::shared_ptr<const D> dom)
      : detail::FieldBase<D>(dom, dom->dim()) {}

  S& at(Eigen::Index p, int a) { return this->v_[static_cast<size_t>(a) * this->points() + p]; }
  const S& at(Eigen::Index p, int a) const {
    return this->v_[static_cast<size_t>(a) * this->points() + p];
  }

  OneFormField& operator+=(const OneFormField& o) {
    this->check_same_domain(o);
    for (size_t i = 0; i < this->v_.size(); ++i) this->v_[i] += o.v_[i];
    return *this;
  }
  OneFormField& operator-=(const OneFormField& o) {
    this->check_same_domain(o);
    for (size_t i = 0; i < this->v_.size(); ++i) this->v_[i] -= o.v_[i];
    return *this;
  }
  OneFormField& operator*=(const S& c) {
    for (auto& x : this->v_) x *= c;
    return *this;
  }
  friend OneFormField operator+(OneFormField a, const OneFormField& b) { return a += b; }
  friend OneFormField operator-(OneFormField a, const OneFormField& b) { return a -= b; }
  friend OneFormField operator*(OneFormField a, const S& c) { return a *= c; }
  friend OneFormField operator*(const S& c, OneFormField a) { return a *= c; }
};

/// Symmetric 2-tensor field, components stored packed (SymIndex order).
template <class D>
class SymField : public detail::FieldBase<D> {
 public:
  using S = typename D::Scalar;
  SymField() = default;
  explicit SymField(std::shared_ptr<const D> dom)
      : detail::FieldBase<D>(dom, SymIndex(dom->dim()).pairs()), sym_(dom->dim()) {}

  const SymIndex& sym() const { return sym_; }
  S& at(Eigen::Index p, int i, int j) {
    return this->v_[static_cast<size_t>(sym_(i, j)) * this->points() + p];
  }
  const S& at(Eigen::Index p, int i, int j) const {
    return this->v_[static_cast<size_t>(sym_(i, j)) * this->points() + p];
  }

  void load(Eigen::Index p, Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& m) const {
    const int n = sym_.n();
    m.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = at(p, i, j);
  }
  void store(Eigen::Index p, const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& m) {
    const int n = sym_.n();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) at(p, i, j) = m(i, j);
  }

  SymField& operator+=(const SymField& o) {
    this->check_same_domain(o);
    for (size_t i = 0; i < this->v_.size(); ++i) this->v_[i] += o.v_[i];
    return *this;
  }
  SymField& operator-=(const SymField& o) {
    this->check_same_domain(o);
    for (size_t i = 0; i < this->v_.size(); ++i) this->v_[i] -= o.v_[i];
    return *this;
  }
  SymField& operator*=(const S& c) {
    for (auto& x : this->v_) x *= c;
    return *this;
  }
  friend SymField operator+(SymField a, const SymField& b) { return a += b; }
  friend SymField operator-(SymField a, const SymField& b) { return a -= b; }
  friend SymField operator*(SymField a, const S& c) { return a *= c; }
  friend SymField operator*(const S& c, SymField a) { return a *= c; }

  /// f * h pointwise.
  friend SymField operator*(const ScalarField<D>& f, const SymField& h) {
    SymField out = h;
    const Eigen::Index N = h.points();
    for (int c = 0; c < h.components(); ++c) {
      S* dst = out.comp(c);
      for (Eigen::Index p = 0; p < N; ++p) dst[p] *= f[p];
    }
    return out;
  }

 private:
  SymIndex sym_{1};
};

/// Riemannian metric: a SymField that is positive-definite at every point.
template <class D>
class MetricField {
 public:
  using S = typename D::Scalar;
  MetricField() = default;
  explicit MetricField(SymField<D> comps) : g_(std::move(comps)) {}

  static MetricField identity(std::shared_ptr<const D> dom) {
    SymField<D> g(dom);
    const int n = dom->dim();
    for (int i = 0; i < n; ++i) {
      S* c = g.comp(g.sym()(i, i));
      for (Eigen::Index p = 0; p < g.points(); ++p) c[p] = S{1.0};
    }
    return MetricField(std::move(g));
  }

  const SymField<D>& components() const { return g_; }
  SymField<D>& components() { return g_; }
  const std::shared_ptr<const D>& domain_ptr() const { return g_.domain_ptr(); }
  const D& domain() const { return g_.domain(); }
  const S& at(Eigen::Index p, int i, int j) const { return g_.at(p, i, j); }

  /// Smallest eigenvalue of the component matrix over all points (value part
  /// for jet-valued charts).
  double min_eigenvalue() const {
    const int n = domain().dim();
    Eigen::MatrixXd m(n, n);
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < g_.points(); ++p) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = value_of(g_.at(p, i, j));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
  }

  void require_positive_definite() const {
    if (!(min_eigenvalue() > 0.0))
      throw std::runtime_error("indefinite-metric: metric is not positive-definite");
  }

  /// g + t*h, the basic path operation of the variation engine.
  MetricField plus_scaled(const S& t, const SymField<D>& h) const {
    SymField<D> out = g_;
    out += h * t;
    return MetricField(std::move(out));
  }

 private:
  SymField<D> g_;
};

/// Sample a closed-form function of the coordinates onto a domain.
template <class D, class F>
ScalarField<D> sample_scalar(const std::shared_ptr<const D>& dom, F&& f) {
  ScalarField<D> out(dom);
  std::vector<double> x(dom->dim());
  for (Eigen::Index p = 0; p < dom->size(); ++p) {
    for (int a = 0; a < dom->dim(); ++a) x[a] = dom->coord(p, a);
    out[p] = f(x);
  }
  return out;
}

}  // namespace s2lab
