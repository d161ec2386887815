#pragma once

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace s2lab {

/// Index tables for multivariate truncated Taylor arithmetic in `num_vars`
/// variables up to total degree `max_order`.
///
/// Multi-indices are enumerated by total degree (graded lexicographic), so
/// position 0 is always the constant coefficient. The product table lists all
/// coefficient triples (a, b, dst) with idx[a] + idx[b] = idx[dst], which is
/// everything a truncated series product needs.
class JetSpace {
 public:
  struct ProductTerm {
    int a, b, dst;
  };

  JetSpace(int num_vars, int max_order) : nvars_(num_vars), order_(max_order) {
    assert(num_vars >= 1 && max_order >= 1);
    std::vector<int> idx(nvars_, 0);
    enumerate(idx, 0, order_);
    size_ = static_cast<int>(indices_.size()) / nvars_;
    build_tables();
  }

  int num_vars() const { return nvars_; }
  int max_order() const { return order_; }
  int size() const { return size_; }

  int exponent(int pos, int axis) const { return indices_[pos * nvars_ + axis]; }
  int total_degree(int pos) const { return degree_[pos]; }

  /// Position of idx[pos] + e_axis, or -1 when that exceeds max_order.
  int shift_up(int pos, int axis) const { return shift_[axis * size_ + pos]; }

  const std::vector<ProductTerm>& products() const { return products_; }

 private:
  void enumerate(std::vector<int>& idx, int axis, int budget) {
    if (axis == nvars_ - 1) {
      for (int e = 0; e <= budget; ++e) {
        idx[axis] = e;
        store(idx);
      }
      idx[axis] = 0;
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      idx[axis] = e;
      enumerate(idx, axis + 1, budget - e);
    }
    idx[axis] = 0;
  }

  void store(const std::vector<int>& idx) {
    // regenerated in degree order afterwards; collect raw first
    raw_.push_back(idx);
  }

  void build_tables() {
    // order raw indices by total degree, then lexicographically
    std::sort(raw_.begin(), raw_.end(), [](const auto& a, const auto& b) {
      int da = 0, db = 0;
      for (int v : a) da += v;
      for (int v : b) db += v;
      if (da != db) return da < db;
      return a < b;
    });
    size_ = static_cast<int>(raw_.size());
    indices_.resize(static_cast<size_t>(size_) * nvars_);
    degree_.resize(size_);
    for (int p = 0; p < size_; ++p) {
      int d = 0;
      for (int a = 0; a < nvars_; ++a) {
        indices_[p * nvars_ + a] = raw_[p][a];
        d += raw_[p][a];
      }
      degree_[p] = d;
    }
    auto position = [&](const std::vector<int>& idx) -> int {
      for (int p = 0; p < size_; ++p) {
        bool eq = true;
        for (int a = 0; a < nvars_; ++a) {
          if (indices_[p * nvars_ + a] != idx[a]) {
            eq = false;
            break;
          }
        }
        if (eq) return p;
      }
      return -1;
    };
    shift_.assign(static_cast<size_t>(nvars_) * size_, -1);
    std::vector<int> tmp(nvars_);
    for (int p = 0; p < size_; ++p) {
      for (int a = 0; a < nvars_; ++a) {
        for (int b = 0; b < nvars_; ++b) tmp[b] = indices_[p * nvars_ + b];
        tmp[a] += 1;
        shift_[a * size_ + p] = position(tmp);
      }
    }
    for (int pa = 0; pa < size_; ++pa) {
      for (int pb = 0; pb < size_; ++pb) {
        if (degree_[pa] + degree_[pb] > order_) continue;
        for (int b = 0; b < nvars_; ++b)
          tmp[b] = indices_[pa * nvars_ + b] + indices_[pb * nvars_ + b];
        products_.push_back({pa, pb, position(tmp)});
      }
    }
    raw_.clear();
    raw_.shrink_to_fit();
  }

  int nvars_;
  int order_;
  int size_ = 0;
  std::vector<std::vector<int>> raw_;
  std::vector<int> indices_;  // size_ x nvars_
  std::vector<int> degree_;
  std::vector<int> shift_;  // nvars_ x size_
  std::vector<ProductTerm> products_;
};

/// Truncated multivariate Taylor expansion of a smooth function at a point.
///
/// A Jet carries the function value (coefficient of the constant term) and
/// partial-derivative data up to the JetSpace's maximum total degree. `order`
/// tracks how many coefficients are still trustworthy: every application of
/// deriv() consumes one degree, and arithmetic propagates the minimum. Chart
/// metrics are seeded at order 4, which is exactly the derivative depth the
/// adjoint operator needs; deriv() on an exhausted jet is a logic error.
///
/// A default-constructed or double-constructed Jet is a detached constant; it
/// attaches to the other operand's space on first use, which keeps plain
/// scalar literals usable inside generic tensor code.
class Jet {
 public:
  Jet() : Jet(0.0) {}
  Jet(double c) : value_only_(c) {}  // NOLINT: implicit by design

  static Jet constant(const JetSpace& sp, double c) {
    Jet j;
    j.space_ = &sp;
    j.order_ = sp.max_order();
    j.coeffs_ = Eigen::VectorXd::Zero(sp.size());
    j.coeffs_[0] = c;
    return j;
  }

  static Jet variable(const JetSpace& sp, int axis, double value) {
    Jet j = constant(sp, value);
    for (int p = 0; p < sp.size(); ++p) {
      if (sp.total_degree(p) == 1 && sp.exponent(p, axis) == 1) {
        j.coeffs_[p] = 1.0;
        break;
      }
    }
    return j;
  }

  bool attached() const { return space_ != nullptr; }
  const JetSpace* space() const { return space_; }
  int order() const { return attached() ? order_ : 1 << 20; }
  double value() const { return attached() ? coeffs_[0] : value_only_; }

  /// Taylor coefficient in front of the monomial at `pos` (already divided
  /// by the factorials, i.e. coeff = partial^alpha f / alpha!).
  double coeff(int pos) const { return attached() ? coeffs_[pos] : (pos == 0 ? value_only_ : 0.0); }

  Jet deriv(int axis) const {
    if (!attached()) return Jet(0.0);
    if (order_ < 1) throw std::logic_error("jet order exhausted: derivative budget exceeded");
    Jet out = constant(*space_, 0.0);
    out.order_ = order_ - 1;
    const int sz = space_->size();
    for (int p = 0; p < sz; ++p) {
      const int up = space_->shift_up(p, axis);
      if (up >= 0) out.coeffs_[p] = (space_->exponent(p, axis) + 1) * coeffs_[up];
    }
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    if (out.attached())
      out.coeffs_ = -out.coeffs_;
    else
      out.value_only_ = -out.value_only_;
    return out;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    auto [x, y] = align(a, b);
    if (!x.attached()) return Jet(x.value_only_ + y.value_only_);
    Jet out = x;
    out.coeffs_ += y.coeffs_;
    out.order_ = std::min(x.order_, y.order_);
    return out;
  }

  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    auto [x, y] = align(a, b);
    if (!x.attached()) return Jet(x.value_only_ * y.value_only_);
    Jet out = constant(*x.space_, 0.0);
    out.order_ = std::min(x.order_, y.order_);
    for (const auto& t : x.space_->products())
      out.coeffs_[t.dst] += x.coeffs_[t.a] * y.coeffs_[t.b];
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  /// 1/x as a truncated series; Newton iteration converges in log2(order)+1
  /// steps because the error is nilpotent.
  Jet reciprocal() const {
    if (!attached()) return Jet(1.0 / value_only_);
    if (coeffs_[0] == 0.0) throw std::domain_error("jet reciprocal at zero value");
    Jet b = constant(*space_, 1.0 / coeffs_[0]);
    const int iters = newton_iters();
    for (int i = 0; i < iters; ++i) b = b * (Jet(2.0) - (*this) * b);
    b.order_ = order_;
    return b;
  }

  friend Jet sqrt(const Jet& a) {
    if (!a.attached()) return Jet(std::sqrt(a.value_only_));
    if (a.coeffs_[0] <= 0.0) throw std::domain_error("jet sqrt at nonpositive value");
    Jet s = constant(*a.space_, std::sqrt(a.coeffs_[0]));
    const int iters = a.newton_iters();
    for (int i = 0; i < iters; ++i) s = Jet(0.5) * (s + a * s.reciprocal());
    s.order_ = a.order_;
    return s;
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.value() == b.value() && [&] {
      if (!a.attached() && !b.attached()) return true;
      auto [x, y] = align(a, b);
      return x.coeffs_ == y.coeffs_;
    }();
  }

 private:
  int newton_iters() const {
    int it = 1, covered = 1;
    while (covered < space_->max_order() + 1) {
      covered *= 2;
      ++it;
    }
    return it;
  }

  static std::pair<Jet, Jet> align(const Jet& a, const Jet& b) {
    if (a.attached() == b.attached()) return {a, b};
    if (a.attached()) return {a, constant(*a.space_, b.value_only_)};
    return {constant(*b.space_, a.value_only_), b};
  }

  const JetSpace* space_ = nullptr;
  int order_ = 0;
  double value_only_ = 0.0;
  Eigen::VectorXd coeffs_;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet& j) { return j.value(); }

}  // namespace s2lab
