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

// Random states on the fixed-entropy shell S(ρ) = S0.

#pragma once

#include <cstdint>
#include <random>

#include "gmoe/fock.hpp"

namespace gmoe {

using Rng = std::mt19937_64;

/// Headroom below ln d required of S0 by the samplers.
inline constexpr double kShellMargin = 0.5;

/// Spectrum λ ∝ exp(β·log_weights) with β ≥ 0 root-found so that its
/// Shannon entropy equals S0 within 1e−10. β = 0 is uniform, β → ∞ collapses
/// onto the largest weight; the entropy is monotone in between.
RVector entropy_shell_spectrum(const RVector& log_weights, double S0);

struct ShellSpectrum {
  RVector p;
  double beta;  // +infinity for S0 = 0
};
ShellSpectrum entropy_shell_fit(const RVector& log_weights, double S0);

/// Parameters of a state on the shell: ρ = U·diag(λ(w))·U† with λ(w) the
/// tempered spectrum of the log-weights w.
struct ShellPoint {
  RVector log_weights;
  CMatrix unitary;
};

ShellPoint sample_shell_point(double S0, int d, std::uint64_t seed);
DensityOperator shell_state(const ShellPoint& pt, double S0);

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre
/// matrix with the phases of R's diagonal divided out.
CMatrix haar_unitary(int d, Rng& rng);

/// Random spectrum (exponentials of standard normals, tempered onto the
/// shell) conjugated by a Haar unitary on all d levels. S0 = 0 returns a
/// random pure state. Deterministic per seed; equals
/// shell_state(sample_shell_point(S0, d, seed), S0).
DensityOperator sample_fixed_entropy_state(double S0, int d, std::uint64_t seed);

/// Full-rank variant with a geometric tail: log λ_n = −n·ln((N0+1)/N0) + σξ_n,
/// tempered onto the shell, then rotated by a Haar unitary acting only on the
/// lowest `mixing_dim` levels. Suited to generators that raise the photon
/// number, where finite-rank inputs have divergent entropy rates.
DensityOperator sample_thermal_tailed_state(double S0, int d, int mixing_dim, std::uint64_t seed,
                                            double sigma = 0.5);

}  // namespace gmoe
