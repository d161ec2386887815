#pragma once

#include "s2lab/curvature.hpp"

namespace s2lab {

/// Memoized wrapper around a metric and its curvature; every differential
/// operator takes one of these. Write-once at construction, safe to share.
template <class D>
class OperatorContext {
 public:
  explicit OperatorContext(const MetricField<D>& g) : pack_(curvature(g)) {}
  explicit OperatorContext(CurvaturePack<D> pack) : pack_(std::move(pack)) {}

  const std::shared_ptr<const D>& domain_ptr() const { return pack_.metric.domain_ptr(); }
  const D& domain() const { return pack_.metric.domain(); }
  int dim() const { return domain().dim(); }
  Eigen::Index points() const { return domain().size(); }

  const CurvaturePack<D>& pack() const { return pack_; }
  const MetricField<D>& metric() const { return pack_.metric; }
  const SymField<D>& inverse() const { return pack_.inverse; }
  const Ten3Sym<D>& christoffel() const { return pack_.christoffel; }
  const RiemannField<D>& riemann() const { return pack_.riemann; }
  const SymField<D>& ricci() const { return pack_.ricci; }
  const ScalarField<D>& scalar_curvature() const { return pack_.scalar; }
  const ScalarField<D>& sqrt_det() const { return pack_.sqrt_det; }

  template <class Field>
  void check_domain(const Field& f) const {
    if (f.domain_ptr().get() != domain_ptr().get())
      throw std::invalid_argument("domain-mismatch: field does not live on the context domain");
  }

 private:
  CurvaturePack<D> pack_;
};

// ---------------------------------------------------------------------------
// pointwise algebra

/// tr_g h = g^{ij} h_ij
template <class D>
ScalarField<D> trace(const SymField<D>& h, const OperatorContext<D>& ctx) {
  ctx.check_domain(h);
  const int n = ctx.dim();
  ScalarField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    typename D::Scalar s{0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ctx.inverse().at(p, i, j) * h.at(p, i, j);
    out[p] = s;
  }
  return out;
}

/// <a,b>_g = g^{ik} g^{jl} a_ij b_kl pointwise; accepts SymField or
/// Tensor2Field arguments in either slot.
template <class D, class FieldA, class FieldB>
ScalarField<D> inner2(const FieldA& a, const FieldB& b, const OperatorContext<D>& ctx) {
  ctx.check_domain(a);
  ctx.check_domain(b);
  const int n = ctx.dim();
  ScalarField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    typename D::Scalar s{0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += ctx.inverse().at(p, i, k) * ctx.inverse().at(p, j, l) * a.at(p, i, j) *
                 b.at(p, k, l);
    out[p] = s;
  }
  return out;
}

/// <a,b>_g = g^{ij} a_i b_j for 1-forms.
template <class D>
ScalarField<D> inner1(const OneFormField<D>& a, const OneFormField<D>& b,
                      const OperatorContext<D>& ctx) {
  ctx.check_domain(a);
  ctx.check_domain(b);
  const int n = ctx.dim();
  ScalarField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    typename D::Scalar s{0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ctx.inverse().at(p, i, j) * a.at(p, i) * b.at(p, j);
    out[p] = s;
  }
  return out;
}

/// Pairing of a 1-form with a contravariant vector field: w_a X^a.
template <class D>
ScalarField<D> pair_form_vector(const OneFormField<D>& w, const OneFormField<D>& vec) {
  const int n = w.domain().dim();
  ScalarField<D> out(w.domain_ptr());
  for (Eigen::Index p = 0; p < w.points(); ++p) {
    typename D::Scalar s{0.0};
    for (int a = 0; a < n; ++a) s += w.at(p, a) * vec.at(p, a);
    out[p] = s;
  }
  return out;
}

/// (A o B)_ij = g^{kl} A_ki B_lj; not symmetric in general, (A o B)^T = B o A.
template <class D, class FieldA, class FieldB>
Tensor2Field<D> comp_product(const FieldA& a, const FieldB& b, const OperatorContext<D>& ctx) {
  const int n = ctx.dim();
  Tensor2Field<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        typename D::Scalar s{0.0};
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += ctx.inverse().at(p, k, l) * a.at(p, k, i) * b.at(p, l, j);
        out.at(p, i, j) = s;
      }
  return out;
}

template <class D>
SymField<D> symmetrize(const Tensor2Field<D>& t) {
  const int n = t.domain().dim();
  SymField<D> out(t.domain_ptr());
  for (Eigen::Index p = 0; p < t.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        out.at(p, i, j) = typename D::Scalar{0.5} * (t.at(p, i, j) + t.at(p, j, i));
  return out;
}

/// Lower a contravariant vector field with the metric.
template <class D>
OneFormField<D> flat(const OneFormField<D>& vec, const OperatorContext<D>& ctx) {
  const int n = ctx.dim();
  OneFormField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i) {
      typename D::Scalar s{0.0};
      for (int j = 0; j < n; ++j) s += ctx.metric().at(p, i, j) * vec.at(p, j);
      out.at(p, i) = s;
    }
  return out;
}

/// Raise a 1-form with the inverse metric.
template <class D>
OneFormField<D> sharp(const OneFormField<D>& form, const OperatorContext<D>& ctx) {
  const int n = ctx.dim();
  OneFormField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i) {
      typename D::Scalar s{0.0};
      for (int j = 0; j < n; ++j) s += ctx.inverse().at(p, i, j) * form.at(p, j);
      out.at(p, i) = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// covariant derivatives

template <class D>
OneFormField<D> gradient(const ScalarField<D>& f, const OperatorContext<D>& ctx) {
  ctx.check_domain(f);
  OneFormField<D> out(ctx.domain_ptr());
  for (int a = 0; a < ctx.dim(); ++a) ctx.domain().deriv(f.comp(0), out.comp(a), a);
  return out;
}

/// nabla_a w_j = d_a w_j - Gamma^m_{aj} w_m
template <class D>
Tensor2Field<D> cov_deriv(const OneFormField<D>& w, const OperatorContext<D>& ctx) {
  ctx.check_domain(w);
  const int n = ctx.dim();
  Tensor2Field<D> out(ctx.domain_ptr());
  std::vector<typename D::Scalar> dbuf(ctx.points());
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) {
      ctx.domain().deriv(w.comp(j), dbuf.data(), a);
      for (Eigen::Index p = 0; p < ctx.points(); ++p) {
        typename D::Scalar s = dbuf[p];
        for (int m = 0; m < n; ++m) s -= ctx.christoffel().at(p, m, a, j) * w.at(p, m);
        out.at(p, a, j) = s;
      }
    }
  return out;
}

/// nabla_a h_ij = d_a h_ij - Gamma^m_{ai} h_mj - Gamma^m_{aj} h_im
template <class D>
Ten3Sym<D> cov_deriv(const SymField<D>& h, const OperatorContext<D>& ctx) {
  ctx.check_domain(h);
  const int n = ctx.dim();
  const SymIndex sym(n);
  Ten3Sym<D> out(ctx.domain_ptr());
  std::vector<typename D::Scalar> dbuf(ctx.points());
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < sym.pairs(); ++c) {
      auto [i, j] = sym.unpack(c);
      ctx.domain().deriv(h.comp(c), dbuf.data(), a);
      for (Eigen::Index p = 0; p < ctx.points(); ++p) {
        typename D::Scalar s = dbuf[p];
        for (int m = 0; m < n; ++m)
          s -= ctx.christoffel().at(p, m, a, i) * h.at(p, m, j) +
               ctx.christoffel().at(p, m, a, j) * h.at(p, i, m);
        out.at(p, a, i, j) = s;
      }
    }
  return out;
}

/// nabla_a (nabla h)_{b,ij}, with all three lower-index corrections.
template <class D>
Ten4Sym<D> second_cov_deriv(const SymField<D>& h, const OperatorContext<D>& ctx) {
  const Ten3Sym<D> T = cov_deriv(h, ctx);
  const int n = ctx.dim();
  const SymIndex sym(n);
  Ten4Sym<D> out(ctx.domain_ptr());
  std::vector<typename D::Scalar> dbuf(ctx.points());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < sym.pairs(); ++c) {
        auto [i, j] = sym.unpack(c);
        ctx.domain().deriv(T.comp(b, i, j), dbuf.data(), a);
        for (Eigen::Index p = 0; p < ctx.points(); ++p) {
          typename D::Scalar s = dbuf[p];
          for (int m = 0; m < n; ++m)
            s -= ctx.christoffel().at(p, m, a, b) * T.at(p, m, i, j) +
                 ctx.christoffel().at(p, m, a, i) * T.at(p, b, m, j) +
                 ctx.christoffel().at(p, m, a, j) * T.at(p, b, i, m);
          out.at(p, a, b, i, j) = s;
        }
      }
  return out;
}

/// hess f_ij = d_i d_j f - Gamma^m_{ij} d_m f; assembled on the upper triangle
/// so the result is symmetric by construction.
template <class D>
SymField<D> hessian(const ScalarField<D>& f, const OperatorContext<D>& ctx) {
  ctx.check_domain(f);
  const int n = ctx.dim();
  const OneFormField<D> df = gradient(f, ctx);
  SymField<D> out(ctx.domain_ptr());
  std::vector<typename D::Scalar> dbuf(ctx.points());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ctx.domain().deriv(df.comp(i), dbuf.data(), j);
      for (Eigen::Index p = 0; p < ctx.points(); ++p) {
        typename D::Scalar s = dbuf[p];
        for (int m = 0; m < n; ++m) s -= ctx.christoffel().at(p, m, i, j) * df.at(p, m);
        out.at(p, i, j) = s;
      }
    }
  return out;
}

/// Laplacian with negative spectrum: lap f = g^{ij} hess f_ij, so flat-torus
/// modes satisfy lap cos(2 pi k x) = -(2 pi k)^2 cos(2 pi k x).
template <class D>
ScalarField<D> laplacian(const ScalarField<D>& f, const OperatorContext<D>& ctx) {
  return trace(hessian(f, ctx), ctx);
}

/// Rough (connection) Laplacian on symmetric 2-tensors: g^{ab} nabla_a nabla_b h.
template <class D>
SymField<D> rough_laplacian(const SymField<D>& h, const OperatorContext<D>& ctx) {
  const Ten4Sym<D> DD = second_cov_deriv(h, ctx);
  const int n = ctx.dim();
  SymField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        typename D::Scalar s{0.0};
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += ctx.inverse().at(p, a, b) * DD.at(p, a, b, i, j);
        out.at(p, i, j) = s;
      }
  return out;
}

// ---------------------------------------------------------------------------
// divergence family

/// delta h = -div h: (delta h)_j = -g^{ik} (nabla h)_{i,kj}
template <class D>
OneFormField<D> divergence_delta(const SymField<D>& h, const OperatorContext<D>& ctx) {
  const Ten3Sym<D> T = cov_deriv(h, ctx);
  const int n = ctx.dim();
  OneFormField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int j = 0; j < n; ++j) {
      typename D::Scalar s{0.0};
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += ctx.inverse().at(p, i, k) * T.at(p, i, k, j);
      out.at(p, j) = -s;
    }
  return out;
}

/// Codifferential on 1-forms: delta w = -g^{ij} nabla_i w_j.
template <class D>
ScalarField<D> delta_oneform(const OneFormField<D>& w, const OperatorContext<D>& ctx) {
  const Tensor2Field<D> dw = cov_deriv(w, ctx);
  const int n = ctx.dim();
  ScalarField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    typename D::Scalar s{0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ctx.inverse().at(p, i, j) * dw.at(p, i, j);
    out[p] = -s;
  }
  return out;
}

/// delta^2 h = delta(delta h) = div div h.
template <class D>
ScalarField<D> delta_sq(const SymField<D>& h, const OperatorContext<D>& ctx) {
  return delta_oneform(divergence_delta(h, ctx), ctx);
}

/// delta* w = symmetrized covariant derivative, the L2 adjoint of delta.
template <class D>
SymField<D> delta_star(const OneFormField<D>& w, const OperatorContext<D>& ctx) {
  const Tensor2Field<D> dw = cov_deriv(w, ctx);
  return symmetrize(dw);
}

/// Lie derivative of the metric along a contravariant vector field:
/// L_X g = 2 delta*(X^flat).
template <class D>
SymField<D> lie_metric(const OneFormField<D>& vec, const OperatorContext<D>& ctx) {
  SymField<D> out = delta_star(flat(vec, ctx), ctx);
  return out * typename D::Scalar{2.0};
}

/// Curvature action on symmetric 2-tensors: (ring R h)_ij = g^{kl} g^{st}
/// R_{kijs} h_{lt}; on the unit sphere this is (tr h) g - h.
template <class D>
SymField<D> ring_R(const SymField<D>& h, const OperatorContext<D>& ctx) {
  ctx.check_domain(h);
  const int n = ctx.dim();
  SymField<D> out(ctx.domain_ptr());
  for (Eigen::Index p = 0; p < ctx.points(); ++p) {
    // raise h once: h^{ks} = g^{kl} g^{st} h_lt
    PointMat<typename D::Scalar> hup(n, n);
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < n; ++s) {
        typename D::Scalar acc{0.0};
        for (int l = 0; l < n; ++l)
          for (int t = 0; t < n; ++t)
            acc += ctx.inverse().at(p, k, l) * ctx.inverse().at(p, s, t) * h.at(p, l, t);
        hup(k, s) = acc;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        typename D::Scalar s{0.0};
        for (int k = 0; k < n; ++k)
          for (int t = 0; t < n; ++t) s += ctx.riemann().at(p, k, i, j, t) * hup(k, t);
        out.at(p, i, j) = s;
      }
  }
  return out;
}

/// Lichnerowicz Laplacian: lap h + 2 ring_R(h) - Ric o h - h o Ric, assembled
/// literally from its definition (no Weitzenboeck shortcut).
template <class D>
SymField<D> lichnerowicz(const SymField<D>& h, const OperatorContext<D>& ctx) {
  SymField<D> out = rough_laplacian(h, ctx);
  out += ring_R(h, ctx) * typename D::Scalar{2.0};
  const int n = ctx.dim();
  for (Eigen::Index p = 0; p < ctx.points(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        typename D::Scalar s{0.0};
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += ctx.inverse().at(p, k, l) *
                 (ctx.ricci().at(p, k, i) * h.at(p, l, j) + h.at(p, k, i) * ctx.ricci().at(p, l, j));
        out.at(p, i, j) -= s;
      }
  return out;
}

}  // namespace s2lab
