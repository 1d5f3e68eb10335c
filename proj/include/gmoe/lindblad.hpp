// Copyright 2026 The gmoe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Gaussian dissipative semigroups  L = (γ+/2) L+ + (γ−/2) L−  with
//   L+(ρ) = 2a†ρa − aa†ρ − ρaa†,   L−(ρ) = 2aρa† − a†aρ − ρa†a.
// Attenuator: γ+ = N, γ− = N+1 (η = e^{−t}). Amplifier: γ+ = N+1, γ− = N
// (κ² = e^{t}). Additive noise: γ± = 1 (t = added photons).

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "gmoe/fock.hpp"

namespace gmoe {

struct LindbladGenerator {
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;

  static LindbladGenerator attenuator(double N);
  static LindbladGenerator amplifier(double N);
  static LindbladGenerator additive_noise();

  void validate() const;

  /// [(γ+ − γ−)N0 + γ+]·ln((N0+1)/N0), the rate at gibbs(N0).
  double gibbs_rate(double N0) const;
};

/// Population above which the top level is treated as leaked.
inline constexpr double kLeakageGuard = 1e-8;

/// L(ρ) on the truncated space. Throws cutoff-too-small when the top level
/// of ρ holds more than 1e−8.
CMatrix generator_apply(const LindbladGenerator& gen, const CMatrix& rho);
FockOperator generator_apply(const LindbladGenerator& gen, const DensityOperator& rho);

struct EvolutionReport {
  DensityOperator state;
  int steps = 0;
  double dt = 0.0;
  std::vector<double> trace_drift;  // |Tr ρ_k − 1| after each step
  double max_step_change = 0.0;     // largest ‖ρ_{k+1} − ρ_k‖₁
  double positivity_defect = 0.0;   // max(0, −λ_min) of the final state
  std::vector<double> rates;        // entropy_rate at t_0..t_steps, when requested
};

/// Step count keeping h·(γ+ + γ−)·d ≤ 1/2 and at least one step.
int default_steps(const LindbladGenerator& gen, int d, double T);

/// Classical RK4 with `steps` fixed steps (0: default_steps). Throws
/// cutoff-too-small on leakage and step-error when the trace drifts by more
/// than 1e−5, a step changes the state by more than 1e−3 in trace norm, or
/// the result is not positive within 1e−7.
EvolutionReport evolve_report(const LindbladGenerator& gen, const DensityOperator& rho, double T,
                              int steps = 0, bool record_rates = false);
DensityOperator evolve(const LindbladGenerator& gen, const DensityOperator& rho, double T, int steps = 0);

/// exp(T·L) via the dense d²×d² superoperator; d ≤ 12 only.
DensityOperator evolve_superoperator(const LindbladGenerator& gen, const DensityOperator& rho, double T);

/// −Tr[L(ρ) ln ρ] with eigenvalues floored at 1e−14. Returns +infinity when
/// L(ρ) puts more than 1e−10 of weight on eigenvectors below the floor.
double entropy_rate(const LindbladGenerator& gen, const DensityOperator& rho);

struct IntegralFormCheck {
  double entropy_change;  // S(Φ_T ρ) − S(ρ)
  double integral;        // ∫₀ᵀ rate dt on the step grid (Simpson, trapezoid if odd)
  double residual;
};

IntegralFormCheck verify_integral_form(const LindbladGenerator& gen, const DensityOperator& rho, double T,
                                       int steps = 0);

/// One-sided difference quotients [S(Φ_dt ρ) − S(ρ)]/dt and their
/// polynomial (Richardson) extrapolation to dt = 0 through all points.
struct RateConvergence {
  std::vector<double> dts;
  std::vector<double> quotients;
  double extrapolated;
  double rate;
};

RateConvergence rate_convergence(const LindbladGenerator& gen, const DensityOperator& rho,
                                 const std::vector<double>& dts);

struct InfinitesimalReport {
  double S0 = 0.0;
  double N0 = 0.0;
  int cutoff = 0;
  int samples = 0;
  double conjectured = 0.0;  // gibbs_rate(N0)
  double gibbs_rate_numeric = std::numeric_limits<double>::quiet_NaN();
  double min_rate = std::numeric_limits<double>::infinity();
  int divergent = 0;   // samples with +infinity rate
  int violations = 0;  // rate < conjectured − tolerance
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  std::vector<double> rates;
};

/// Sample 0 is gibbs(N0); the rest are thermal-tailed fixed-entropy states.
/// A cutoff of 0 selects one where the Gibbs tail is below 1e−14.
InfinitesimalReport infinitesimal_conjecture_check(const LindbladGenerator& gen, double S0, int samples,
                                                   std::uint64_t seed, int cutoff = 0,
                                                   double tolerance = 1e-4);

}  // namespace gmoe
