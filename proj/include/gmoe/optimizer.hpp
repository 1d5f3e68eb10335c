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

// Search for the minimal output entropy F(Φ; S0) = inf S(Φ(ρ)) over states
// with S(ρ) = S0, and the relative-entropy form of the lower bound
//   S(Φρ) − g(κ²N0 + c) = κ²·r·S(ρ‖ρ0) − S(Φρ‖Φρ0),
//   r = ln((κ²N0+c+1)/(κ²N0+c)) / ln((N0+1)/N0),   ρ0 = gibbs(N0).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmoe/channel_spec.hpp"
#include "gmoe/channels.hpp"
#include "gmoe/fock.hpp"
#include "gmoe/sampling.hpp"

namespace gmoe {

/// Default violation tolerance in nats.
inline constexpr double kViolationTolerance = 1e-4;

/// Conjectured value of F(Φ; S0): g(κ²N0 + c) for the phase-covariant
/// classes, g(N) for A1 and A2 (an infimum for A2) and S0 for B1.
double conjectured_minimum(const ChannelSpec& ch, double S0);

/// Output entropy of the Gaussian candidate at entropy S0. Phase-covariant
/// classes use gibbs(N0) in the Fock basis; A2 and B1 take the squeezed
/// Gaussian state of the covariance backend with the vanishing variance set
/// to `squeeze` (σq for A2, σp for B1).
double gaussian_candidate_entropy(const ChannelSpec& ch, double S0, double squeeze = 1e-6);

/// The objective S(Φ(ρ)) on the shell, ρ = U·diag(λ(w))·U†.
class ShellObjective {
 public:
  ShellObjective(const FockChannel& channel, double S0);

  struct Gradient {
    RVector w;  // ∂S/∂w
    CMatrix k;  // anti-Hermitian; dS/dε of U → e^{εK}U is Re Tr(k†K)
  };

  const FockChannel& channel() const { return *channel_; }
  double S0() const { return S0_; }

  double value(const ShellPoint& pt) const;
  Gradient gradient(const ShellPoint& pt) const;
  /// Forward differences with step h·max(1, |θ_i|) in every coordinate of
  /// (w, K), K expanded in the standard anti-Hermitian basis around K = 0.
  Gradient finite_difference_gradient(const ShellPoint& pt, double h) const;

 private:
  const FockChannel* channel_;
  double S0_;
};

enum class GradientMode { Analytic, FiniteDifference };

struct OptimizerConfig {
  int restarts = 8;
  int iterations = 200;
  double step = 1e-5;  // finite-difference step (relative)
  std::uint64_t seed = 0;
  GradientMode gradient = GradientMode::Analytic;
  double tolerance = kViolationTolerance;
  double gradient_tolerance = 1e-9;
  ChannelOptions channel_options{};
};

struct StateDiagnostics {
  double entropy_residual = 0.0;  // |S(ρ) − S0|
  double tail_mass = 0.0;         // population of the top input level
  double output_tail = 0.0;       // population of the top output level
};

/// One evaluated state: a scan sample, a Gaussian probe or a finished restart.
struct SampleRecord {
  int index = 0;
  std::string origin;  // "random", "gaussian-probe", "restart"
  double input_entropy = 0.0;
  double output_entropy = 0.0;
  double initial_output_entropy = 0.0;  // restarts only
  int iterations = 0;                   // restarts only
};

struct AbortedRun {
  int index = 0;
  std::string reason;
};

struct OptimizationReport {
  ChannelSpec channel;
  double S0 = 0.0;
  double N0 = 0.0;
  double conjectured_min = 0.0;
  double candidate_entropy = 0.0;  // gaussian_candidate_entropy
  double best_found = 0.0;         // +infinity when nothing was evaluated
  double gap = 0.0;                // best_found − conjectured_min
  int n_restarts = 0;
  int n_samples = 0;
  int violations = 0;  // records below conjectured_min − tolerance
  std::uint64_t seed = 0;
  int cutoff = 0;
  double tolerance = kViolationTolerance;
  std::string gradient;  // "analytic", "finite-difference" or "none"
  StateDiagnostics best_state_diagnostics;
  std::vector<SampleRecord> samples;  // sorted by index
  std::vector<AbortedRun> aborted;
  RVector best_spectrum;
  CMatrix best_unitary;
};

/// Local descent from `restarts` random shell points (restart i uses seed
/// + i, the same state conjecture_v2_scan draws for sample i). Each step
/// moves the log-weights and rotates U; the tempered spectrum keeps every
/// iterate on the shell.
OptimizationReport minimize_output_entropy(const ChannelSpec& ch, double S0, int d, const OptimizerConfig& config);

/// S(Φ(ρ)) on `n_samples` shell samples (sample i uses seed + i). For A2 and
/// B1 a ladder of squeezed Gaussian probes is appended when n_samples > 0.
OptimizationReport conjecture_v2_scan(const ChannelSpec& ch, double S0, int d, int n_samples, std::uint64_t seed,
                                      double tolerance = kViolationTolerance,
                                      const ChannelOptions& channel_options = {});

/// Both sides of the relative-entropy identity and of the inequality it
/// rewrites, with Φ(ρ0) = gibbs(κ²N0 + c).
struct RelativeEntropyCheck {
  bool applicable = true;  // false when a relative entropy is infinite
  std::string reason;
  double input_entropy = 0.0;
  double output_entropy = 0.0;
  double bound = 0.0;            // g(κ²N0 + c)
  double prefactor = 0.0;        // κ²·r
  double rel_input = 0.0;        // S(ρ‖ρ0)
  double rel_output = 0.0;       // S(Φρ‖Φρ0)
  double lhs = 0.0;              // S(Φρ) − g(κ²N0 + c)
  double rhs = 0.0;              // κ²r·S(ρ‖ρ0) − S(Φρ‖Φρ0)
  double residual = 0.0;         // |lhs − rhs|
  double slack = 0.0;            // rhs, the inequality's LHS − RHS
  double monotonicity_slack = 0.0;  // S(ρ‖ρ0) − S(Φρ‖Φρ0)
};

/// C_att, C_amp and B2 only. Requires |S(ρ) − g(N0)| ≤ 1e−5 unless
/// `enforce_shell` is false (negative controls).
RelativeEntropyCheck equiv_identity_check(const ChannelSpec& ch, const DensityOperator& rho, double N0,
                                          bool enforce_shell = true);
double equiv_identity_residual(const ChannelSpec& ch, const DensityOperator& rho, double N0);
double dds_inequality_check(const ChannelSpec& ch, const DensityOperator& rho, double N0);

/// κ²·ln((κ²N0+c+1)/(κ²N0+c)) − ln((N0+1)/N0): the monotonicity route would
/// need this to be ≥ 0.
double sufficient_condition_margin(const ChannelSpec& ch, double N0);

struct SufficientConditionScan {
  int points = 0;
  int holds = 0;             // points with margin ≥ 0
  double max_margin = 0.0;   // closest approach to holding
  ChannelSpec argmax;
  double argmax_N0 = 0.0;
};

/// Evaluates the margin on a grid over N0 and the class parameters of
/// C_att, C_amp and B2.
SufficientConditionScan scan_sufficient_condition(int grid = 24);

}  // namespace gmoe
