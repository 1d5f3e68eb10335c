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

// One-mode Gaussian states in the (q, p) covariance picture.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gmoe/channel_spec.hpp"
#include "gmoe/fock.hpp"

namespace gmoe {

struct GaussianState {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();

  static GaussianState thermal(double n);
  /// Zero-mean state with cov = diag(var_q, var_p).
  static GaussianState diagonal(double var_q, double var_p);

  /// Throws unphysical-state when cov is not symmetric or violates
  /// det(cov) ≥ 1/4.
  void validate() const;

  /// (cov_qq + cov_pp)/2 − 1/2 + |mean|²/2.
  double mean_photon() const;
};

/// g(√det(cov) − 1/2).
double gaussian_entropy(const GaussianState& s);

/// Class-wise affine update of (mean, cov).
GaussianState apply_gaussian_channel(const GaussianState& s, const ChannelSpec& ch);

struct InfimumRow {
  double sigma;            // the variance that is sent to zero (σq for A2, σp for B1), as σ
  double conjugate_sigma;  // the partner fixed by the entropy constraint
  double input_entropy;
  double output_entropy;
  double limit;            // g(N) for A2, S0 for B1
};

/// Output entropies of squeezed fixed-entropy inputs ρ_{σq,σp} along a
/// decreasing σ sequence. The partner standard deviation is solved from
/// σq·σp = g⁻¹(S0) + 1/2. Only A2 and B1 are accepted.
std::vector<InfimumRow> infimum_limit_experiment(const ChannelSpec& ch, double S0,
                                                 std::span<const double> sigmas);

/// Squeezed thermal state with the given zero-mean covariance, expressed on
/// a cutoff-d Fock space.
DensityOperator embed_gaussian_to_fock(const GaussianState& s, int d);

}  // namespace gmoe
