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

// k-mode beam-splitter cascade W = U^{AE_{k−1}}_{η_{k−1}} ··· U^{AE_1}_{η_1}
// acting on ρ ⊗ gibbs(N0)^{⊗(k−1)}. Each E_j meets A once, so its marginal is
// the complementary output of stage j on the A-state entering that stage.

#pragma once

#include <optional>
#include <vector>

#include "gmoe/fock.hpp"

namespace gmoe {

/// η_j = (k−j)/(k−j+1), j = 1..k−1.
std::vector<double> canonical_etas(int k);

/// η̄_j = (1−η_j)η_{j−1}···η_1 for j < k and η̄_k = ∏η_j.
std::vector<double> effective_etas(const std::vector<double>& etas);

struct CascadeReport {
  int k = 0;
  double N0 = 0.0;
  int cutoff = 0;
  bool canonical = true;
  std::vector<double> eta_list;
  std::vector<double> eta_bar_list;
  double input_entropy = 0.0;
  double joint_entropy = 0.0;           // after W
  double joint_target = 0.0;            // S(ρ) + Σ_j S(ρ_{E_j})
  std::vector<double> reduced_entropies;  // S(Ω′_A), then S(Ω′_{E_1}) .. S(Ω′_{E_{k−1}})
  double direct_channel_entropy = 0.0;  // S(E_{1/k}(ρ)), or S(E_{η̄_k}(ρ)) when non-canonical
  double subadditivity_slack = 0.0;     // Σ reduced − joint
  double bound_slack = 0.0;             // direct − g(N0)
  double relative_entropy_slack = 0.0;  // η̄_k S(ρ‖ρ0) − S(E(ρ)‖ρ0)
  double a_reduction_distance = 0.0;    // ‖Ω′_A − E_{η̄_k}(ρ)‖ (trace distance)
  double max_unitarity_defect = 0.0;
  std::vector<int> env_cutoffs;
};

/// Requires k ≥ 2, ρ.dim() ≤ d_per_mode, d_per_mode^k ≤ 10⁵ and
/// |S(ρ) − g(N0)| ≤ 1e−4. `etas` overrides the canonical sequence.
CascadeReport run_cascade(const DensityOperator& rho, int k, double N0, int d_per_mode,
                          const std::optional<std::vector<double>>& etas = std::nullopt);

struct CascadeComparison {
  double a_distance;                     // trace distance, cascade A vs direct channel
  std::vector<double> env_entropy_gaps;  // |S(Ω′_{E_j}) − S(E_{1/k}(ρ))|
};

CascadeComparison reduced_vs_direct(const DensityOperator& rho, int k, double N0, int d_per_mode);

}  // namespace gmoe
