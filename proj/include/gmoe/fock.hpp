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

// Truncated Fock-space algebra for a single bosonic mode.
//
// Conventions: hbar = 1, q = (a + a†)/√2, p = i(a† − a)/√2, so the vacuum
// has quadrature variance 1/2. Entropies are in nats. The basis of a cutoff-d
// space is |0⟩ … |d−1⟩.

#pragma once

#include <span>
#include <vector>

#include "gmoe/error.hpp"
#include "gmoe/linalg.hpp"

namespace gmoe {

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-9;
inline constexpr double kNegativity = 1e-9;
inline constexpr double kEigenClamp = 1e-14;
inline constexpr double kNotPositive = 1e-8;
inline constexpr double kTailFailure = 1e-6;
}  // namespace tol

/// Dense operator on a cutoff-d Fock space (d ≥ 2, finite entries).
class FockOperator {
 public:
  explicit FockOperator(CMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

/// Hermitian, positive, unit-trace FockOperator. `tail_mass` is the total
/// population on the top ⌈d/8⌉ levels and is the cutoff-quality diagnostic
/// carried through every report.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix m);

  static DensityOperator pure(const CVector& psi);
  static DensityOperator number_state(int n, int d);
  static DensityOperator from_populations(const RVector& p);

  int dim() const { return op_.dim(); }
  const CMatrix& matrix() const { return op_.matrix(); }
  const FockOperator& op() const { return op_; }
  double tail_mass() const { return tail_mass_; }

  /// Zero-pads to a larger cutoff, or drops the top levels. Dropping more
  /// than 1e−6 of population throws cutoff-too-small.
  DensityOperator resized(int new_dim) const;

 private:
  FockOperator op_;
  double tail_mass_ = 0.0;
};

double tail_mass_of(const CMatrix& rho);

FockOperator annihilation_op(int d);
FockOperator creation_op(int d);
FockOperator number_op(int d);

/// D(μ) = exp(μa† − μ*a), restricted to the leading d×d block. The
/// exponential is taken on an internally padded space (eigendecomposition of
/// the Hermitian generator) so the returned block is free of truncation error
/// as long as |μ|² ≪ d.
FockOperator displacement_op(cplx mu, int d);

/// Padded working dimension used by displacement_op for a given |μ| and d.
int displacement_working_dim(double abs_mu, int d);

/// Thermal state N0ⁿ/(N0+1)ⁿ⁺¹, renormalised over the truncated block.
/// Throws cutoff-too-small when its tail_mass reaches 1e−6.
DensityOperator gibbs_state(double mean_photons, int d);

/// Smallest cutoff whose Gibbs population beyond the cutoff is below `mass`.
int gibbs_cutoff(double mean_photons, double mass = 1e-13);

/// g(N) = (N+1)ln(N+1) − N ln N, g(0) = 0.
double g_function(double n);

/// Unique N ≥ 0 with g(N) = S.
double g_inverse(double entropy);

struct EntropyConstraint {
  double S0;
  double N0;

  static EntropyConstraint from_entropy(double s0);
  static EntropyConstraint from_photons(double n0);
};

/// −Σ λ ln λ with eigenvalues below 1e−14 clamped to zero.
double von_neumann_entropy(const DensityOperator& rho);
double von_neumann_entropy(const CMatrix& rho);
double shannon_entropy(const RVector& p);

/// S(ρ‖σ) in nats; +infinity when supp ρ ⊄ supp σ. Cutoffs must match.
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);
double relative_entropy(const CMatrix& rho, const CMatrix& sigma);

/// S(ρ‖gibbs(N)) on the untruncated mode: −S(ρ) + ln(N+1) + ⟨n⟩ln((N+1)/N).
/// At N = 0 this is 0 for the vacuum and +infinity otherwise.
double relative_entropy_to_gibbs(const CMatrix& rho, double N);
double relative_entropy_to_gibbs(const DensityOperator& rho, double N);

double trace_distance(const DensityOperator& a, const DensityOperator& b);

cplx characteristic_function(const DensityOperator& rho, cplx mu);

double mean_photon(const DensityOperator& rho);
double mean_photon(const CMatrix& rho);

struct QuadratureMoments {
  double mean_q;
  double mean_p;
  double var_q;
  double var_p;
  double cov_qp;  // ⟨{q,p}⟩/2 − ⟨q⟩⟨p⟩
};

/// First and second quadrature moments, exact for states supported on the
/// truncated block.
QuadratureMoments quadrature_moments(const CMatrix& rho);

/// Joint operator on several modes, first mode most significant.
struct MultiModeOperator {
  std::vector<int> dims;
  CMatrix matrix;

  int total_dim() const;
};

MultiModeOperator tensor(const DensityOperator& a, const DensityOperator& b);
MultiModeOperator tensor(const MultiModeOperator& a, const DensityOperator& b);

/// Traces out every mode not listed in `keep`; kept modes stay in order.
MultiModeOperator partial_trace(const MultiModeOperator& omega,
                                std::span<const int> keep);

/// Single-mode reduction.
DensityOperator reduce_to_mode(const MultiModeOperator& omega, int mode);

/// Values of the normalised Hermite functions ψ_0..ψ_{count−1} at x.
RVector hermite_functions(double x, int count);

/// ⟨x|ρ|x⟩ sampled on a uniform grid. Throws grid-error when the grid is not
/// uniform, or when the density at either edge exceeds 1e−8.
RVector position_distribution(const DensityOperator& rho,
                              std::span<const double> grid);
RVector position_distribution(const CMatrix& rho, std::span<const double> grid);

/// Uniform grid of `points` samples on [−half_width, half_width].
std::vector<double> uniform_grid(double half_width, int points);

/// Half-width satisfying the position_distribution coverage rule for ρ.
double position_grid_half_width(const CMatrix& rho);

}  // namespace gmoe
