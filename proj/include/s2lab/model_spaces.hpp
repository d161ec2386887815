#pragma once

#include <array>
#include <cstdint>

#include "s2lab/report.hpp"
#include "s2lab/sigma2_ops.hpp"
#include "s2lab/spaces.hpp"

namespace s2lab {

/// Pointwise kernel verification on the stereographic sphere chart S^n(r):
/// for the ambient coordinate f = x_k (k in 1..n+1) checks
///   hess f + f g / r^2 = 0,
///   lap f + R f / (n-1) = 0 with R = n(n-1)/r^2,
///   Lambda*(f) = 0.
std::vector<VerificationReport> sphere_kernel_check(int n, double r, int k, double tol = 1e-9);

/// Hyperboloid analogue: hess f - f g / r^2 = 0 and Lambda*(f) = 0.
std::vector<VerificationReport> hyperbolic_kernel_check(int n, int k, double tol = 1e-9,
                                                        double r = 1.0);

/// The adjoint map as a dense matrix over the user-resolution lattice:
/// column j is Lambda* applied to the band-limited delta centered at user
/// point j, sampled back on the user lattice, components in packed order.
/// Rows: pairs * N, columns: N. Requires user point count <= 4096.
Eigen::MatrixXd assemble_discrete_adjoint(const Sigma2Context<TorusGrid>& ctx);

/// The k smallest singular values, ascending.
Eigen::VectorXd singular_spectrum(const Eigen::MatrixXd& op, int k);

/// Numerical kernel dimension with the conventional rank cutoff
/// max(rows, cols) * eps * sigma_max.
int numerical_kernel_dimension(const Eigen::MatrixXd& op);

/// Smallest nonzero eigenvalue of -lap_g on functions, from a symmetric
/// Galerkin matrix over the user lattice: K_ij = int <d phi_i, d phi_j>_g
/// dv_g with band-limited nodal functions phi and the same spectral
/// differentiation used everywhere else. Eigenvalues below
/// 1e-8 * max(1, lambda_max) count as zero (constants, plus the Nyquist
/// null modes of the symmetric derivative on even grids).
double laplace_lambda1(const MetricField<TorusGrid>& g);

/// K = max(0, -min_p lambda_min(Ric_p wrt g_p) / (n-1)), the constant in the
/// bound Ric >= -(n-1)K.
double ricci_lower_bound(const OperatorContext<TorusGrid>& ctx);

/// Pointwise Ricci eigenvalues of a unit-volume 3-manifold with R = -1,
/// sorted ascending.
struct EigenTriple {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  EigenTriple() = default;
  EigenTriple(double a, double b, double c);
  std::array<double, 3> values() const { return {l1, l2, l3}; }
};

/// Algebraic consequences of sum(l) = -1 and sum(l^2) <= 3/8: every pairwise
/// sum lies between the roots -5/6 and -1/2 of 12x^2 + 16x + 5, and every
/// sectional value K_ij = l_i + l_j + 1/2 is nonpositive.
struct Torus3Certificate {
  bool admissible = false;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::array<double, 3> pair_sums{};   // (l1+l2, l1+l3, l2+l3)
  std::array<double, 3> sectional{};   // pair sums + 1/2
  bool verdict = false;                // admissible and all bounds hold
};

Torus3Certificate torus3_certificate(const EigenTriple& t);

/// Rejection sampling on the admissibility disk (uniform over the constraint
/// set), reproducible for a fixed seed.
std::vector<EigenTriple> sample_admissible_triples(int count, std::uint64_t seed);

}  // namespace s2lab
