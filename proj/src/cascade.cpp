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

#include "gmoe/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmoe/channels.hpp"
#include "gmoe/error.hpp"

namespace gmoe {

namespace {

constexpr double kMemoryBudget = 1e5;
constexpr double kEntropyPrecondition = 1e-4;

double padded_distance(const DensityOperator& a, const DensityOperator& b) {
  const int d = std::max(a.dim(), b.dim());
  return trace_distance(resized(a.matrix(), d), resized(b.matrix(), d));
}

}  // namespace

std::vector<double> canonical_etas(int k) {
  if (k < 2) throw Error(ErrorKind::DomainError, "cascade needs k >= 2");
  std::vector<double> etas;
  for (int j = 1; j < k; ++j) etas.push_back(static_cast<double>(k - j) / (k - j + 1));
  return etas;
}

std::vector<double> effective_etas(const std::vector<double>& etas) {
  std::vector<double> bar;
  double prod = 1.0;
  for (double eta : etas) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::DomainError, "transmissivities must lie in [0, 1]");
    bar.push_back((1.0 - eta) * prod);
    prod *= eta;
  }
  bar.push_back(prod);
  return bar;
}

CascadeReport run_cascade(const DensityOperator& rho, int k, double N0, int d_per_mode,
                          const std::optional<std::vector<double>>& etas) {
  if (k < 2) throw Error(ErrorKind::DomainError, "cascade needs k >= 2 (k = 1 is trivial)");
  if (!(N0 >= 0.0) || !std::isfinite(N0)) throw Error(ErrorKind::DomainError, "N0 must be finite and >= 0");
  if (rho.dim() > d_per_mode) throw Error(ErrorKind::InvalidDimension, "input exceeds the per-mode cutoff");
  if (std::pow(static_cast<double>(d_per_mode), k) > kMemoryBudget)
    throw Error(ErrorKind::ResourceError, "d^k = " + std::to_string(std::pow(d_per_mode, k)) +
                                              " exceeds the budget of 1e5 for k = " + std::to_string(k));
  CascadeReport rep;
  rep.k = k;
  rep.N0 = N0;
  rep.cutoff = d_per_mode;
  rep.input_entropy = von_neumann_entropy(rho);
  if (std::abs(rep.input_entropy - g_function(N0)) > kEntropyPrecondition)
    throw Error(ErrorKind::ConstraintError, "input entropy " + std::to_string(rep.input_entropy) +
                                                " differs from g(N0) = " + std::to_string(g_function(N0)));
  rep.eta_list = etas ? *etas : canonical_etas(k);
  if (static_cast<int>(rep.eta_list.size()) != k - 1)
    throw Error(ErrorKind::ShapeError, "need k − 1 transmissivities");
  rep.eta_bar_list = effective_etas(rep.eta_list);
  rep.canonical = !etas;
  if (etas) {
    const auto can = canonical_etas(k);
    rep.canonical = std::equal(can.begin(), can.end(), etas->begin(),
                               [](double a, double b) { return std::abs(a - b) < 1e-12; });
  }

  const DensityOperator input(resized(rho.matrix(), d_per_mode));
  DensityOperator a = input;
  std::vector<double> env_entropies;
  double joint = 0.0;
  for (int j = 0; j < k - 1; ++j) {
    DilationOptions opts;
    // Only stage 1 needs the Gram witness: later stages act on one factor of
    // a product with a fresh environment.
    opts.witness_max_dim = j == 0 ? 1 << 30 : 0;
    DilationResult stage = apply_attenuator(a, rep.eta_list[j], N0, opts);
    rep.env_cutoffs.push_back(stage.env_cutoff);
    rep.max_unitarity_defect = std::max(rep.max_unitarity_defect, stage.unitarity_defect);
    const double env_in = stage.product_entropy - von_neumann_entropy(a);
    if (j == 0) {
      joint = *stage.joint_entropy;
      rep.joint_target = stage.product_entropy;
    } else {
      joint += env_in;
      rep.joint_target += env_in;
    }
    env_entropies.push_back(von_neumann_entropy(stage.complement));
    a = stage.output;
  }
  rep.joint_entropy = joint;
  rep.reduced_entropies.push_back(von_neumann_entropy(a));
  rep.reduced_entropies.insert(rep.reduced_entropies.end(), env_entropies.begin(), env_entropies.end());

  const double eta_total = rep.eta_bar_list.back();
  DilationOptions direct_opts;
  direct_opts.witness_max_dim = 0;
  const DensityOperator direct = apply_attenuator(input, eta_total, N0, direct_opts).output;
  rep.direct_channel_entropy = von_neumann_entropy(direct);
  rep.a_reduction_distance = padded_distance(a, direct);

  double sum = 0.0;
  for (double s : rep.reduced_entropies) sum += s;
  rep.subadditivity_slack = sum - rep.joint_entropy;
  rep.bound_slack = rep.direct_channel_entropy - g_function(N0);
  if (N0 > 0.0)
    rep.relative_entropy_slack =
        eta_total * relative_entropy_to_gibbs(input, N0) - relative_entropy_to_gibbs(direct, N0);
  return rep;
}

CascadeComparison reduced_vs_direct(const DensityOperator& rho, int k, double N0, int d_per_mode) {
  const CascadeReport rep = run_cascade(rho, k, N0, d_per_mode);
  CascadeComparison out{rep.a_reduction_distance, {}};
  for (int j = 1; j < k; ++j)
    out.env_entropy_gaps.push_back(std::abs(rep.reduced_entropies[j] - rep.direct_channel_entropy));
  return out;
}

}  // namespace gmoe
