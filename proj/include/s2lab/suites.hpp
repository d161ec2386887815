#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "s2lab/report.hpp"
#include "s2lab/spaces.hpp"

namespace s2lab {

using ToleranceMap = std::map<std::string, double>;

inline double tol_or(const ToleranceMap& tols, const std::string& name, double fallback) {
  auto it = tols.find(name);
  return it == tols.end() ? fallback : it->second;
}

struct SuiteOptions {
  ToleranceMap tolerances;
  std::uint64_t seed = 7;
  double eps = 1.0 / 12.0;
  int samples = 10000;
  std::vector<double> xi;  // symbol covector; empty selects a seeded default
};

struct SuiteOutput {
  std::vector<VerificationReport> reports;
  std::vector<Series> series;
};

/// Pointwise identity battery appropriate to the space kind: curvature
/// symmetries, quadrature exactness, the trace/divergence identities of the
/// adjoint, the scaling and diffeomorphism identities of the linearization,
/// Einstein consistency and the dimension-3 Q reduction where applicable.
SuiteOutput suite_identities(const SpaceSpec& spec, const SuiteOptions& opt);

/// Finite-difference linearization checks over five probe directions,
/// including the metric itself and a pure gauge direction.
SuiteOutput suite_linearization(const SpaceSpec& spec, const SuiteOptions& opt);

/// L2 adjointness over five seeded low-mode pairs.
SuiteOutput suite_adjointness(const SpaceSpec& spec, const SuiteOptions& opt);

/// Evolution equations and the norm-variation identities against finite
/// differences.
SuiteOutput suite_evolution(const SpaceSpec& spec, const SuiteOptions& opt);

/// Divergence-free projector properties and the second variation of the
/// quadratic functional (closed form vs finite differences, eps-linearity).
SuiteOutput suite_second_variation(const SpaceSpec& spec, const SuiteOptions& opt);

/// Assembled adjoint operator: flat-kernel norm, smallest singular values,
/// in-process reproducibility; emits the singular spectrum series.
SuiteOutput suite_singularity(const SpaceSpec& spec, const SuiteOptions& opt);

/// Chart kernel candidates (all n+1 ambient coordinates plus the constant
/// rejection).
SuiteOutput suite_kernel(const SpaceSpec& spec, const SuiteOptions& opt);

/// Almost-Schur inequality with lambda1 and the Ricci bound computed from the
/// space itself.
SuiteOutput suite_schur(const SpaceSpec& spec, const SuiteOptions& opt);

/// Principal symbol evaluations at the space's points.
SuiteOutput suite_symbol(const SpaceSpec& spec, const SuiteOptions& opt);

/// Seeded Monte-Carlo certificate for the eigenvalue-triple algebra plus the
/// boundary case and the dimension-3 Q value on the unit sphere.
SuiteOutput suite_torus3(const SuiteOptions& opt);

const std::vector<std::string>& suite_names();

/// Dispatch by suite name (torus3 ignores the space).
SuiteOutput run_suite(const std::string& name, const SpaceSpec& spec, const SuiteOptions& opt);

}  // namespace s2lab
