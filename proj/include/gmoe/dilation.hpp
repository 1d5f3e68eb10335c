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

// Two-mode Gaussian unitaries acting on a system mode A and an environment
// mode E, stored block by block over their conserved photon-number sectors.
//
// The beam splitter exp[θ(a†b − ab†)] conserves a†a + b†b; the two-mode
// squeezer exp[r(a†b† − ab)] conserves a†a − b†b. Inside a sector either
// generator is a real antisymmetric tridiagonal matrix, exponentiated through
// the eigendecomposition of its Hermitian counterpart. Reductions of
// U(ρ ⊗ ρ_E)U† are assembled directly from the sector blocks, so the joint
// state is never materialised unless asked for.

#pragma once

#include <optional>
#include <vector>

#include "gmoe/linalg.hpp"

namespace gmoe {

class SectorCoupling {
 public:
  /// Beam splitter of transmissivity η, every sector with up to `max_total`
  /// photons. Exact: sectors are finite.
  static SectorCoupling beam_splitter(double eta, int max_total);

  /// Two-mode squeezer with cosh²r = gain. Sectors are truncated so that
  /// neither mode exceeds `max_level`; boundary_mass() reports the cost.
  static SectorCoupling two_mode_squeezer(double gain, int max_level, int max_input_a, int max_input_e);

  /// U|i, m⟩ = Σ_k amp[k] |x0 + dx·k, y0 + dy·k⟩.
  struct Column {
    int x0, dx, y0, dy, len;
    const double* amp;
    int sector;
  };
  Column column(int i, int m) const;

  /// Largest number of photons either output mode can carry, plus one.
  int output_dim_a() const { return out_a_; }
  int output_dim_e() const { return out_e_; }

  /// max over sectors of |UᵀU − 1|.
  double unitarity_defect() const;

  /// Largest squared amplitude on the top truncated level of any column with
  /// input indices below (max_input_a, max_input_e). Zero for beam splitters.
  double boundary_mass() const { return boundary_mass_; }

 private:
  enum class Kind { BeamSplitter, Squeezer };
  Kind kind_ = Kind::BeamSplitter;
  std::vector<RMatrix> blocks_;
  int offset_ = 0;  // squeezer: sector index = δ + offset_
  int out_a_ = 0;
  int out_e_ = 0;
  double boundary_mass_ = 0.0;
};

/// Environment populations of a (diagonal) environment state.
struct DilationInput {
  const CMatrix& rho;
  const RVector& env_populations;
  const SectorCoupling& coupling;
};

/// Tr_E[U(ρ⊗ρ_E)U†] on the leading `out_dim` levels of A.
CMatrix reduce_to_system(const DilationInput& in, int out_dim);

/// Tr_A[U(ρ⊗ρ_E)U†] on the leading `out_dim` levels of E.
CMatrix reduce_to_environment(const DilationInput& in, int out_dim);

/// Adjoints of the two reductions with respect to Tr[X·Φ(ρ)]: maps an
/// output-side operator X back to the `in_dim` input levels.
CMatrix reduce_to_system_adjoint(const CMatrix& x, const RVector& env_populations,
                                 const SectorCoupling& coupling, int in_dim);
CMatrix reduce_to_environment_adjoint(const CMatrix& x, const RVector& env_populations,
                                      const SectorCoupling& coupling, int in_dim);

/// Full joint state on (A, E) with the given cutoffs, A most significant.
CMatrix joint_state(const DilationInput& in, int dim_a, int dim_e);

/// Entropy of U(ρ⊗ρ_E)U† computed from the Gram matrix of the evolved
/// purification (the reference-system reduction). It equals S(ρ) + S(ρ_E)
/// only to the extent the stored sector blocks are unitary. Eigenvalues of ρ
/// and environment populations below 1e−13 are left out; empty when the
/// remaining Gram matrix would exceed `max_dim`.
std::optional<double> joint_entropy_via_gram(const DilationInput& in, int max_dim = 1600);

}  // namespace gmoe
