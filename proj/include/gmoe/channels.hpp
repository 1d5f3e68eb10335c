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

// Fock-space realisations of the canonical one-mode Gaussian channels.
//
//   C_att   beam-splitter dilation with a thermal environment
//   C_amp   two-mode-squeezer dilation, system output
//   D       two-mode-squeezer dilation, environment output
//   B2      phase-averaged displacement quadrature (Gauss–Laguerre radial)
//   A1      constant thermal output
//   A2      position measurement followed by shifted thermal re-preparation
//   B1      Gaussian position-shift noise of variance 1/2
//
// The position shift is e^{ixp} = D(−x/√2), which moves the q mean to −x.

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gmoe/channel_spec.hpp"
#include "gmoe/fock.hpp"

namespace gmoe {

struct ChannelOptions {
  int env_cutoff = 0;         // 0: chosen from N so the dropped Gibbs mass is < 1e−14
  double grid_step = 0.0;     // A2/B1 position grid spacing; 0: 0.08
  bool with_joint = false;    // dilations: materialise the joint state when small
};

/// Result of a dilated channel. `output` is the system reduction and
/// `complement` the environment reduction of U(ρ⊗ρ_E)U†.
struct DilationResult {
  std::optional<MultiModeOperator> joint;
  DensityOperator output;
  DensityOperator complement;
  std::optional<double> joint_entropy;  // from the evolved purification, when affordable
  double product_entropy = 0.0;  // S(ρ) + S(ρ_E)
  double unitarity_defect = 0.0;
  double boundary_mass = 0.0;
  int env_cutoff = 0;
};

/// exp[arccos√η (a†b − ab†)] on the d_sys·d_env product space, mode A most
/// significant. Columns whose sector leaves the box are cut, so only the
/// block of total photon number below min(d_sys, d_env) is unitary.
MultiModeOperator beam_splitter_unitary(double eta, int d_sys, int d_env);

struct DilationOptions {
  int env_cutoff = 0;           // 0: dropped Gibbs mass < 1e−14
  bool with_joint = false;      // materialise U(ρ⊗ρ_E)U† (small cases only)
  int witness_max_dim = 1600;   // Gram-matrix size cap for joint_entropy; 0 skips it
};

DilationResult apply_attenuator(const DensityOperator& rho, double eta, double N, int d_env = 0,
                                bool with_joint = false);
DilationResult apply_attenuator(const DensityOperator& rho, double eta, double N, const DilationOptions& opts);

/// Environment-side reduction of the attenuator dilation.
DensityOperator weak_complementary_attenuator(const DensityOperator& rho, double eta, double N,
                                              int d_env = 0);

DilationResult apply_amplifier(const DensityOperator& rho, double kappa2, double N, int d_env = 0,
                               bool with_joint = false);

/// Environment side of a two-mode squeezer of gain 1 + κ², environment in
/// gibbs(N).
DensityOperator apply_class_D(const DensityOperator& rho, double kappa2, double N, int d_env = 0);

struct QuadratureSpec {
  int radial_nodes = 0;   // 0: smallest count integrating the output block exactly
  int output_cutoff = 0;  // 0: sized from t and the input cutoff
};

DensityOperator apply_B2(const DensityOperator& rho, double t, const QuadratureSpec& q = {});

DensityOperator apply_A1(const DensityOperator& rho, double N);

/// An empty grid selects one from position_grid_half_width(ρ).
DensityOperator apply_A2(const DensityOperator& rho, double N, std::span<const double> x_grid = {});

/// The grid samples the shift kernel; empty selects [−6.5, 6.5].
DensityOperator apply_B1(const DensityOperator& rho, std::span<const double> x_grid = {});

/// Predicted output characteristic function for classes with a closed-form
/// χ-relation (C_att, C_amp, A1, A2, B1, B2). Throws spec-error otherwise.
cplx predicted_characteristic(const DensityOperator& rho, const ChannelSpec& ch, cplx mu);

/// max over the grid of |χ_out(μ) − predicted(μ)|.
double verify_char_relation(const DensityOperator& rho, const ChannelSpec& ch,
                            std::span<const cplx> mu_grid);

/// A channel prepared for repeated application to inputs of one cutoff. The
/// map apply() is linear and unnormalised, with a fixed output cutoff chosen
/// so that for every input state the population it drops is below 1e−13
/// (checked on the maximally mixed input, which dominates all others).
class FockChannel {
 public:
  FockChannel(const ChannelSpec& spec, int input_dim, const ChannelOptions& opts = {});

  const ChannelSpec& spec() const;
  int input_dim() const;
  int output_dim() const;
  int env_cutoff() const;
  double boundary_mass() const;

  CMatrix apply(const CMatrix& rho) const;

  /// The dual map: Tr[X·apply(ρ)] = Tr[adjoint(X)·ρ] for X on the output
  /// levels.
  CMatrix adjoint(const CMatrix& x) const;

  /// apply() followed by normalisation; throws when the trace defect
  /// exceeds 1e−6.
  DensityOperator operator()(const DensityOperator& rho) const;

  struct Kernel;

 private:
  ChannelSpec spec_;
  int input_dim_;
  int output_dim_;
  std::shared_ptr<const Kernel> kernel_;
};

struct ChannelOutput {
  DensityOperator state;
  double trace_defect;  // 1 − trace before normalisation
  int env_cutoff;
  double boundary_mass;
};

/// Applies any class with default numerics and trims the output cutoff to
/// where the state's own tail population falls below 1e−15.
ChannelOutput apply_channel(const DensityOperator& rho, const ChannelSpec& ch,
                            const ChannelOptions& opts = {});

/// Drops top levels whose cumulative population is below `mass`, never
/// going under `min_dim`.
CMatrix trim_cutoff(const CMatrix& rho, int min_dim, double mass = 1e-15);

}  // namespace gmoe
