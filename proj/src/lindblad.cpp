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

#include "gmoe/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "gmoe/error.hpp"
#include "gmoe/sampling.hpp"

namespace gmoe {

namespace {

constexpr double kStepChangeLimit = 1e-3;
constexpr double kTraceDriftLimit = 1e-5;
constexpr double kPositivityLimit = 1e-7;
constexpr double kKernelWeight = 1e-10;

void check_leakage(const CMatrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const double top = rho(d - 1, d - 1).real();
  if (top > kLeakageGuard)
    throw Error(ErrorKind::CutoffTooSmall, "top Fock level holds " + std::to_string(top) +
                                               " (> 1e-8); raise the cutoff above " + std::to_string(d));
}

double trace_norm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// L(ρ) without the leakage guard, used for the inner RK4 stages.
CMatrix apply_unguarded(const LindbladGenerator& gen, const CMatrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const double gp = 0.5 * gen.gamma_plus, gm = 0.5 * gen.gamma_minus;
  CMatrix out(d, d);
  for (int n = 0; n < d; ++n) {
    const double up_n = n + 1 < d ? n + 1.0 : 0.0;  // (aa†)_nn on the truncated space
    for (int m = 0; m < d; ++m) {
      const double up_m = m + 1 < d ? m + 1.0 : 0.0;
      cplx v = -(gp * (up_m + up_n) + gm * (m + n)) * rho(m, n);
      if (m > 0 && n > 0) v += 2.0 * gp * std::sqrt(static_cast<double>(m) * n) * rho(m - 1, n - 1);
      if (m + 1 < d && n + 1 < d) v += 2.0 * gm * std::sqrt((m + 1.0) * (n + 1.0)) * rho(m + 1, n + 1);
      out(m, n) = v;
    }
  }
  return out;
}

}  // namespace

LindbladGenerator LindbladGenerator::attenuator(double N) {
  LindbladGenerator g{N, N + 1.0};
  g.validate();
  return g;
}

LindbladGenerator LindbladGenerator::amplifier(double N) {
  LindbladGenerator g{N + 1.0, N};
  g.validate();
  return g;
}

LindbladGenerator LindbladGenerator::additive_noise() { return {1.0, 1.0}; }

void LindbladGenerator::validate() const {
  if (!(std::isfinite(gamma_plus) && gamma_plus >= 0.0 && std::isfinite(gamma_minus) && gamma_minus >= 0.0))
    throw Error(ErrorKind::DomainError, "Lindblad rates must be finite and non-negative");
}

double LindbladGenerator::gibbs_rate(double N0) const {
  validate();
  if (!(N0 > 0.0)) throw Error(ErrorKind::DomainError, "gibbs rate needs N0 > 0");
  return ((gamma_plus - gamma_minus) * N0 + gamma_plus) * std::log1p(1.0 / N0);
}

CMatrix generator_apply(const LindbladGenerator& gen, const CMatrix& rho) {
  gen.validate();
  if (rho.rows() != rho.cols() || rho.rows() < 2) throw Error(ErrorKind::ShapeError, "need a square state, d >= 2");
  check_leakage(rho);
  return apply_unguarded(gen, rho);
}

FockOperator generator_apply(const LindbladGenerator& gen, const DensityOperator& rho) {
  return FockOperator(generator_apply(gen, rho.matrix()));
}

int default_steps(const LindbladGenerator& gen, int d, double T) {
  const double rate = (gen.gamma_plus + gen.gamma_minus) * d;
  if (T <= 0.0 || rate == 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(2.0 * T * rate)));
}

EvolutionReport evolve_report(const LindbladGenerator& gen, const DensityOperator& rho, double T, int steps,
                              bool record_rates) {
  gen.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorKind::DomainError, "evolution time must be >= 0");
  if (steps < 0) throw Error(ErrorKind::DomainError, "step count must be >= 0");
  const int d = rho.dim();
  CMatrix x = rho.matrix();
  check_leakage(x);
  if (steps == 0) {
    steps = default_steps(gen, d, T);
    // Keep the per-step change under the 1e−3 limit with a factor-2 margin.
    const double speed = trace_norm(apply_unguarded(gen, x));
    steps = std::max(steps, static_cast<int>(std::ceil(T * speed / (0.5 * kStepChangeLimit))));
  }
  EvolutionReport rep{rho, steps, T / steps, {}, 0.0, 0.0, {}};
  if (record_rates) rep.rates.push_back(entropy_rate(gen, rho));
  if (T == 0.0) {
    if (record_rates) rep.rates.resize(steps + 1, rep.rates.front());
    rep.trace_drift.assign(steps, 0.0);
    return rep;
  }
  const double h = rep.dt;
  const double root_d = std::sqrt(static_cast<double>(d));
  rep.trace_drift.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    const CMatrix k1 = apply_unguarded(gen, x);
    const CMatrix k2 = apply_unguarded(gen, x + 0.5 * h * k1);
    const CMatrix k3 = apply_unguarded(gen, x + 0.5 * h * k2);
    const CMatrix k4 = apply_unguarded(gen, x + h * k3);
    CMatrix delta = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    delta = 0.5 * (delta + delta.adjoint()).eval();
    double change = root_d * delta.norm();  // ‖·‖₁ ≤ √d‖·‖_F
    if (change > kStepChangeLimit) change = trace_norm(delta);
    rep.max_step_change = std::max(rep.max_step_change, change);
    if (change > kStepChangeLimit)
      throw Error(ErrorKind::StepError, "step " + std::to_string(s) + " changes the state by " +
                                            std::to_string(change) + " in trace norm; use more steps");
    x += delta;
    const double drift = std::abs(x.trace().real() - 1.0);
    rep.trace_drift.push_back(drift);
    if (drift > kTraceDriftLimit)
      throw Error(ErrorKind::StepError, "trace drift " + std::to_string(drift) + " at step " + std::to_string(s));
    check_leakage(x);
    if (record_rates) rep.rates.push_back(entropy_rate(gen, DensityOperator(x)));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  rep.positivity_defect = std::max(0.0, -es.eigenvalues()(0));
  if (rep.positivity_defect > kPositivityLimit)
    throw Error(ErrorKind::StepError, "evolved state has eigenvalue " + std::to_string(-rep.positivity_defect));
  rep.state = DensityOperator(x);
  return rep;
}

DensityOperator evolve(const LindbladGenerator& gen, const DensityOperator& rho, double T, int steps) {
  return evolve_report(gen, rho, T, steps).state;
}

DensityOperator evolve_superoperator(const LindbladGenerator& gen, const DensityOperator& rho, double T) {
  gen.validate();
  const int d = rho.dim();
  if (d > 12) throw Error(ErrorKind::ResourceError, "superoperator route limited to d <= 12");
  const CMatrix a = annihilation_op(d).matrix();
  const CMatrix ad = a.adjoint();
  const CMatrix id = CMatrix::Identity(d, d);
  // vec(AρB) = (Bᵀ ⊗ A) vec(ρ), column stacking.
  auto sandwich = [](const CMatrix& A, const CMatrix& B) -> CMatrix {
    return Eigen::kroneckerProduct(B.transpose(), A).eval();
  };
  const CMatrix aad = a * ad, ada = ad * a;
  CMatrix lp = 2.0 * sandwich(ad, a) - sandwich(aad, id) - sandwich(id, aad);
  CMatrix lm = 2.0 * sandwich(a, ad) - sandwich(ada, id) - sandwich(id, ada);
  CMatrix gen_super = 0.5 * gen.gamma_plus * lp + 0.5 * gen.gamma_minus * lm;
  CMatrix prop = (T * gen_super).exp();
  CVector v = Eigen::Map<const CVector>(rho.matrix().data(), d * d);
  CVector w = prop * v;
  CMatrix out = Eigen::Map<const CMatrix>(w.data(), d, d);
  return DensityOperator(0.5 * (out + out.adjoint()));
}

double entropy_rate(const LindbladGenerator& gen, const DensityOperator& rho) {
  const CMatrix l = generator_apply(gen, rho.matrix());
  HermitianEigen es = eigh(rho.matrix());
  const int d = rho.dim();
  double kernel = 0.0;
  RVector logs(d);
  for (int k = 0; k < d; ++k) {
    const double lam = es.values(k);
    if (lam < tol::kEigenClamp) {
      const CVector v = es.vectors.col(k);
      kernel += v.dot(l * v).real();
    }
    logs(k) = std::log(std::max(lam, tol::kEigenClamp));
  }
  if (kernel > kKernelWeight) return std::numeric_limits<double>::infinity();
  // −Tr[L(ρ) V diag(ln λ) V†] = −Σ_k ln λ_k ⟨v_k|L(ρ)|v_k⟩.
  const CMatrix lv = es.vectors.adjoint() * l * es.vectors;
  double rate = 0.0;
  for (int k = 0; k < d; ++k) rate -= logs(k) * lv(k, k).real();
  return rate;
}

IntegralFormCheck verify_integral_form(const LindbladGenerator& gen, const DensityOperator& rho, double T,
                                       int steps) {
  EvolutionReport rep = evolve_report(gen, rho, T, steps, true);
  const double change = von_neumann_entropy(rep.state) - von_neumann_entropy(rho);
  const auto& r = rep.rates;
  const int n = rep.steps;
  double integral = 0.0;
  if (T > 0.0) {
    if (n % 2 == 0) {
      for (int k = 0; k <= n; ++k) integral += r[k] * (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0));
      integral *= rep.dt / 3.0;
    } else {
      for (int k = 0; k < n; ++k) integral += 0.5 * (r[k] + r[k + 1]);
      integral *= rep.dt;
    }
  }
  return {change, integral, std::abs(change - integral)};
}

RateConvergence rate_convergence(const LindbladGenerator& gen, const DensityOperator& rho,
                                 const std::vector<double>& dts) {
  if (dts.size() < 2) throw Error(ErrorKind::DomainError, "need at least two step sizes");
  RateConvergence out{dts, {}, 0.0, entropy_rate(gen, rho)};
  const double s0 = von_neumann_entropy(rho);
  for (double dt : dts) {
    if (!(dt > 0.0)) throw Error(ErrorKind::DomainError, "step sizes must be positive");
    out.quotients.push_back((von_neumann_entropy(evolve(gen, rho, dt)) - s0) / dt);
  }
  // Neville's scheme: value at h = 0 of the polynomial through all (h, q(h)).
  std::vector<double> p = out.quotients;
  const size_t n = dts.size();
  for (size_t level = 1; level < n; ++level)
    for (size_t i = 0; i + level < n; ++i) {
      const double hi = dts[i], hj = dts[i + level];
      p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
    }
  out.extrapolated = p[0];
  return out;
}

InfinitesimalReport infinitesimal_conjecture_check(const LindbladGenerator& gen, double S0, int samples,
                                                   std::uint64_t seed, int cutoff, double tolerance) {
  gen.validate();
  if (!(S0 > 0.0)) throw Error(ErrorKind::DomainError, "S0 must be > 0 (rates diverge at pure states)");
  if (samples < 0) throw Error(ErrorKind::DomainError, "sample count must be >= 0");
  InfinitesimalReport rep;
  rep.S0 = S0;
  rep.N0 = g_inverse(S0);
  rep.samples = samples;
  rep.seed = seed;
  rep.tolerance = tolerance;
  rep.conjectured = gen.gibbs_rate(rep.N0);
  rep.cutoff = cutoff > 0 ? cutoff : std::max(24, 2 * gibbs_cutoff(rep.N0, 1e-14));
  if (samples == 0) return rep;
  const int mixing = std::clamp(gibbs_cutoff(rep.N0, 1e-3), 2, rep.cutoff / 3);
  for (int k = 0; k < samples; ++k) {
    const DensityOperator rho = k == 0 ? gibbs_state(rep.N0, rep.cutoff)
                                       : sample_thermal_tailed_state(S0, rep.cutoff, mixing, seed + k);
    const double r = entropy_rate(gen, rho);
    if (k == 0) rep.gibbs_rate_numeric = r;
    rep.rates.push_back(r);
    if (std::isinf(r)) {
      ++rep.divergent;
      continue;
    }
    rep.min_rate = std::min(rep.min_rate, r);
    if (r < rep.conjectured - tolerance) ++rep.violations;
  }
  return rep;
}

}  // namespace gmoe
