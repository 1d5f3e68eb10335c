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

#include "gmoe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmoe/error.hpp"
#include "gmoe/gaussian.hpp"

namespace gmoe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShellTolerance = 1e-5;
constexpr double kLogFloor = 1e-300;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr int kProbeCount = 16;
constexpr double kProbeTail = 1e-10;

bool phase_covariant(ChannelClass c) { return c != ChannelClass::A2 && c != ChannelClass::B1; }

CMatrix state_matrix(const CMatrix& u, const RVector& p) { return u * p.cast<cplx>().asDiagonal() * u.adjoint(); }

// e^{K} for anti-Hermitian K.
CMatrix exp_anti_hermitian(const CMatrix& k) { return unitary_exp(kI * k, 1.0); }

// Standard anti-Hermitian basis element for parameter index j ≥ 0:
// diagonal iE_nn first, then (E_mn − E_nm) and i(E_mn + E_nm) for m < n.
CMatrix anti_hermitian_basis(int d, int j) {
  CMatrix b = CMatrix::Zero(d, d);
  if (j < d) {
    b(j, j) = kI;
    return b;
  }
  j -= d;
  const int pair = j / 2;
  int m = 0, n = 1, count = 0;
  for (m = 0; m < d; ++m) {
    const int row = d - 1 - m;
    if (pair < count + row) {
      n = m + 1 + (pair - count);
      break;
    }
    count += row;
  }
  if (j % 2 == 0) {
    b(m, n) = 1.0;
    b(n, m) = -1.0;
  } else {
    b(m, n) = kI;
    b(n, m) = kI;
  }
  return b;
}

double top_population(const CMatrix& m) { return m.rows() ? m(m.rows() - 1, m.rows() - 1).real() : 0.0; }

struct Evaluated {
  CMatrix rho;
  double output_entropy = kInf;
  double output_tail = 0.0;
};

Evaluated evaluate(const FockChannel& f, const CMatrix& rho) {
  Evaluated e;
  e.rho = rho;
  const CMatrix out = f.apply(rho);
  e.output_entropy = von_neumann_entropy(out);
  e.output_tail = top_population(out);
  return e;
}

OptimizationReport base_report(const ChannelSpec& ch, double S0, int d, std::uint64_t seed, double tolerance) {
  ch.validate();
  if (!(S0 >= 0.0) || !std::isfinite(S0)) throw Error(ErrorKind::DomainError, "S0 must be finite and >= 0");
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 2");
  OptimizationReport rep;
  rep.channel = ch;
  rep.S0 = S0;
  rep.N0 = g_inverse(S0);
  rep.conjectured_min = conjectured_minimum(ch, S0);
  rep.candidate_entropy = gaussian_candidate_entropy(ch, S0);
  rep.best_found = kInf;
  rep.gap = kInf;
  rep.seed = seed;
  rep.cutoff = d;
  rep.tolerance = tolerance;
  return rep;
}

// Folds one evaluated state into the running report.
void record(OptimizationReport& rep, SampleRecord rec, const Evaluated& e, double S0) {
  if (rec.output_entropy < rep.conjectured_min - rep.tolerance) ++rep.violations;
  if (rec.output_entropy < rep.best_found) {
    rep.best_found = rec.output_entropy;
    const HermitianEigen es = eigh(e.rho);
    rep.best_spectrum = es.values.reverse();
    rep.best_unitary = es.vectors.rowwise().reverse();
    rep.best_state_diagnostics.entropy_residual = std::abs(rec.input_entropy - S0);
    rep.best_state_diagnostics.tail_mass = top_population(e.rho);
    rep.best_state_diagnostics.output_tail = e.output_tail;
  }
  rep.samples.push_back(std::move(rec));
}

void finish(OptimizationReport& rep) {
  std::stable_sort(rep.samples.begin(), rep.samples.end(),
                   [](const SampleRecord& a, const SampleRecord& b) { return a.index < b.index; });
  rep.gap = rep.best_found - rep.conjectured_min;
}

// Squeezed Gaussian states on the shell, from isotropic towards the corner
// where the infimum lives, as long as they fit in the cutoff.
std::vector<DensityOperator> gaussian_probes(const ChannelSpec& ch, double S0, int d) {
  std::vector<DensityOperator> out;
  const double product = g_inverse(S0) + 0.5;
  double sigma = std::sqrt(product);
  for (int k = 0; k < kProbeCount; ++k, sigma *= 0.88) {
    const double partner = product / sigma;
    const GaussianState g = ch.cls == ChannelClass::A2 ? GaussianState::diagonal(sigma * sigma, partner * partner)
                                                       : GaussianState::diagonal(partner * partner, sigma * sigma);
    try {
      const int wide = d + 40;
      const CMatrix full = embed_gaussian_to_fock(g, wide).matrix();
      const double beyond = full.diagonal().real().tail(wide - d).sum();
      if (beyond > kProbeTail) break;
      CMatrix cut = full.topLeftCorner(d, d);
      cut /= cut.trace().real();
      out.emplace_back(cut);
    } catch (const Error&) {
      break;
    }
  }
  return out;
}

}  // namespace

double conjectured_minimum(const ChannelSpec& ch, double S0) {
  ch.validate();
  switch (ch.cls) {
    case ChannelClass::A1:
    case ChannelClass::A2:
      return g_function(ch.N);
    case ChannelClass::B1:
      return S0;
    default:
      return g_function(ch.kappa2_eff() * g_inverse(S0) + ch.c_eff());
  }
}

double gaussian_candidate_entropy(const ChannelSpec& ch, double S0, double squeeze) {
  ch.validate();
  if (!phase_covariant(ch.cls)) {
    const double sigmas[] = {squeeze};
    return infimum_limit_experiment(ch, S0, sigmas).front().output_entropy;
  }
  const double n0 = g_inverse(S0);
  const int d = std::max(2, gibbs_cutoff(n0, 1e-15));
  const FockChannel f(ch, d);
  return von_neumann_entropy(f.apply(gibbs_state(n0, d).matrix()));
}

// ---------------------------------------------------------------------------
// ShellObjective

ShellObjective::ShellObjective(const FockChannel& channel, double S0) : channel_(&channel), S0_(S0) {}

double ShellObjective::value(const ShellPoint& pt) const {
  const RVector p = entropy_shell_spectrum(pt.log_weights, S0_);
  return von_neumann_entropy(channel_->apply(state_matrix(pt.unitary, p)));
}

ShellObjective::Gradient ShellObjective::gradient(const ShellPoint& pt) const {
  const ShellSpectrum fit = entropy_shell_fit(pt.log_weights, S0_);
  const CMatrix rho = state_matrix(pt.unitary, fit.p);
  const HermitianEigen out = eigh(channel_->apply(rho));
  // dS = −Tr[ln σ · Φ(dρ)] on trace-preserving directions.
  const CMatrix log_sigma = apply_spectral(out, [](double x) { return cplx(std::log(std::max(x, kLogFloor))); });
  CMatrix g = -channel_->adjoint(log_sigma);
  g = 0.5 * (g + g.adjoint()).eval();

  Gradient grad;
  grad.k = g * rho - rho * g;
  const int d = static_cast<int>(fit.p.size());
  grad.w = RVector::Zero(d);
  if (std::isfinite(fit.beta) && fit.beta > 0.0) {
    const RVector gd = (pt.unitary.adjoint() * g * pt.unitary).diagonal().real();
    const RVector& w = pt.log_weights;
    const RVector& l = fit.p;
    const double gm = l.dot(gd), wm = l.dot(w);
    const RVector gc = gd.array() - gm, wc = w.array() - wm;
    const double var_w = l.dot(wc.cwiseProduct(wc));
    const double cov = l.dot(gc.cwiseProduct(wc));
    if (var_w > 0.0) grad.w = fit.beta * l.cwiseProduct(gc - (cov / var_w) * wc);
  }
  return grad;
}

ShellObjective::Gradient ShellObjective::finite_difference_gradient(const ShellPoint& pt, double h) const {
  const int d = static_cast<int>(pt.log_weights.size());
  const double f0 = value(pt);
  Gradient grad;
  grad.w = RVector::Zero(d);
  grad.k = CMatrix::Zero(d, d);
  if (S0_ > 0.0) {
    for (int i = 0; i < d; ++i) {
      ShellPoint q = pt;
      const double step = h * std::max(1.0, std::abs(pt.log_weights(i)));
      q.log_weights(i) += step;
      grad.w(i) = (value(q) - f0) / step;
    }
  }
  const int nk = d * d;
  for (int j = 0; j < nk; ++j) {
    const CMatrix b = anti_hermitian_basis(d, j);
    ShellPoint q = pt;
    q.unitary = exp_anti_hermitian(h * b) * pt.unitary;
    const double df = (value(q) - f0) / h;
    // Re Tr(k†B) = df for every basis element B.
    if (j < d) {
      grad.k(j, j) += kI * df;
    } else {
      const int jj = j - d;
      int m = 0, n = 0;
      for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c)
          if (b(r, c) != 0.0) m = r, n = c;
      if (jj % 2 == 0) {
        grad.k(m, n) += 0.5 * df;
        grad.k(n, m) -= 0.5 * df;
      } else {
        grad.k(m, n) += 0.5 * kI * df;
        grad.k(n, m) += 0.5 * kI * df;
      }
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Searches

OptimizationReport conjecture_v2_scan(const ChannelSpec& ch, double S0, int d, int n_samples, std::uint64_t seed,
                                      double tolerance, const ChannelOptions& channel_options) {
  if (n_samples < 0) throw Error(ErrorKind::DomainError, "sample count must be >= 0");
  OptimizationReport rep = base_report(ch, S0, d, seed, tolerance);
  rep.gradient = "none";
  if (n_samples == 0) {
    finish(rep);
    return rep;
  }
  const FockChannel f(ch, d, channel_options);
  for (int i = 0; i < n_samples; ++i) {
    const DensityOperator rho = sample_fixed_entropy_state(S0, d, seed + static_cast<std::uint64_t>(i));
    const Evaluated e = evaluate(f, rho.matrix());
    if (!std::isfinite(e.output_entropy)) {
      rep.aborted.push_back({i, "non-finite output entropy"});
      continue;
    }
    SampleRecord rec;
    rec.index = i;
    rec.origin = "random";
    rec.input_entropy = von_neumann_entropy(rho);
    rec.output_entropy = e.output_entropy;
    record(rep, rec, e, S0);
    ++rep.n_samples;
  }
  if (!phase_covariant(ch.cls)) {
    int index = n_samples;
    for (const DensityOperator& probe : gaussian_probes(ch, S0, d)) {
      const Evaluated e = evaluate(f, probe.matrix());
      SampleRecord rec;
      rec.index = index++;
      rec.origin = "gaussian-probe";
      rec.input_entropy = von_neumann_entropy(probe);
      rec.output_entropy = e.output_entropy;
      if (!std::isfinite(e.output_entropy)) {
        rep.aborted.push_back({rec.index, "non-finite output entropy"});
        continue;
      }
      record(rep, rec, e, S0);
      ++rep.n_samples;
    }
  }
  finish(rep);
  return rep;
}

OptimizationReport minimize_output_entropy(const ChannelSpec& ch, double S0, int d, const OptimizerConfig& config) {
  if (config.restarts < 0 || config.iterations < 0)
    throw Error(ErrorKind::DomainError, "restarts and iterations must be >= 0");
  if (!(config.step > 0.0)) throw Error(ErrorKind::DomainError, "finite-difference step must be > 0");
  OptimizationReport rep = base_report(ch, S0, d, config.seed, config.tolerance);
  rep.gradient = config.gradient == GradientMode::Analytic ? "analytic" : "finite-difference";
  if (config.restarts == 0) {
    finish(rep);
    return rep;
  }
  const FockChannel f(ch, d, config.channel_options);
  const ShellObjective obj(f, S0);

  for (int r = 0; r < config.restarts; ++r) {
    ShellPoint x = sample_shell_point(S0, d, config.seed + static_cast<std::uint64_t>(r));
    double fx = obj.value(x);
    const double f_start = fx;
    if (!std::isfinite(fx)) {
      rep.aborted.push_back({r, "non-finite objective at the starting point"});
      continue;
    }
    double alpha = 1.0;
    int it = 0;
    std::string abort_reason;
    for (; it < config.iterations; ++it) {
      const ShellObjective::Gradient g = config.gradient == GradientMode::Analytic
                                             ? obj.gradient(x)
                                             : obj.finite_difference_gradient(x, config.step);
      const double g2 = g.w.squaredNorm() + g.k.squaredNorm();
      if (!std::isfinite(g2)) {
        abort_reason = "non-finite gradient";
        break;
      }
      if (std::sqrt(g2) < config.gradient_tolerance) break;
      bool accepted = false;
      for (int bt = 0; bt < kMaxBacktracks; ++bt) {
        ShellPoint y;
        y.log_weights = x.log_weights - alpha * g.w;
        y.unitary = exp_anti_hermitian(-alpha * g.k) * x.unitary;
        double fy;
        try {
          fy = obj.value(y);
        } catch (const Error&) {
          fy = kInf;
        }
        if (std::isfinite(fy) && fy <= fx - kArmijo * alpha * g2) {
          x = std::move(y);
          fx = fy;
          accepted = true;
          alpha *= 2.0;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    if (!abort_reason.empty()) {
      rep.aborted.push_back({r, abort_reason});
      continue;
    }
    const DensityOperator rho = shell_state(x, S0);
    const Evaluated e = evaluate(f, rho.matrix());
    SampleRecord rec;
    rec.index = r;
    rec.origin = "restart";
    rec.input_entropy = von_neumann_entropy(rho);
    rec.output_entropy = e.output_entropy;
    rec.initial_output_entropy = f_start;
    rec.iterations = it;
    record(rep, rec, e, S0);
    ++rep.n_restarts;
  }
  finish(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Relative-entropy form

RelativeEntropyCheck equiv_identity_check(const ChannelSpec& ch, const DensityOperator& rho, double N0,
                                          bool enforce_shell) {
  ch.validate();
  if (ch.cls != ChannelClass::C_att && ch.cls != ChannelClass::C_amp && ch.cls != ChannelClass::B2)
    throw Error(ErrorKind::SpecError, "the identity is checked for C_att, C_amp and B2 only");
  if (!(N0 >= 0.0) || !std::isfinite(N0)) throw Error(ErrorKind::DomainError, "N0 must be finite and >= 0");
  RelativeEntropyCheck out;
  out.input_entropy = von_neumann_entropy(rho);
  if (enforce_shell && std::abs(out.input_entropy - g_function(N0)) > kShellTolerance)
    throw Error(ErrorKind::ConstraintError, "S(rho) = " + std::to_string(out.input_entropy) +
                                                " is not g(N0) = " + std::to_string(g_function(N0)));
  const double m = ch.kappa2_eff() * N0 + ch.c_eff();
  if (N0 == 0.0 || m == 0.0) {
    out.applicable = false;
    out.reason = "the prefactor needs N0 > 0 and κ²N0 + c > 0";
    return out;
  }
  out.bound = g_function(m);
  out.prefactor = ch.kappa2_eff() * std::log1p(1.0 / m) / std::log1p(1.0 / N0);

  // Φ(ρ0) = gibbs(κ²N0 + c) exactly, and ln gibbs(N) is diagonal, so both
  // relative entropies reduce to −S + ln(N+1) + ⟨n⟩ln((N+1)/N).
  out.rel_input = relative_entropy_to_gibbs(rho, N0);
  const DensityOperator phi = apply_channel(rho, ch).state;
  out.output_entropy = von_neumann_entropy(phi);
  out.rel_output = relative_entropy_to_gibbs(phi, m);
  if (!std::isfinite(out.rel_input) || !std::isfinite(out.rel_output)) {
    out.applicable = false;
    out.reason = "infinite relative entropy";
    return out;
  }
  out.lhs = out.output_entropy - out.bound;
  out.rhs = out.prefactor * out.rel_input - out.rel_output;
  out.residual = std::abs(out.lhs - out.rhs);
  out.slack = out.rhs;
  out.monotonicity_slack = out.rel_input - out.rel_output;
  return out;
}

double equiv_identity_residual(const ChannelSpec& ch, const DensityOperator& rho, double N0) {
  const RelativeEntropyCheck c = equiv_identity_check(ch, rho, N0);
  if (!c.applicable) throw Error(ErrorKind::DomainError, "identity not applicable: " + c.reason);
  return c.residual;
}

double dds_inequality_check(const ChannelSpec& ch, const DensityOperator& rho, double N0) {
  const RelativeEntropyCheck c = equiv_identity_check(ch, rho, N0);
  if (!c.applicable) throw Error(ErrorKind::DomainError, "inequality not applicable: " + c.reason);
  return c.slack;
}

double sufficient_condition_margin(const ChannelSpec& ch, double N0) {
  ch.validate();
  if (!(N0 > 0.0)) throw Error(ErrorKind::DomainError, "N0 must be > 0");
  const double m = ch.kappa2_eff() * N0 + ch.c_eff();
  if (!(m > 0.0)) throw Error(ErrorKind::DomainError, "κ²N0 + c must be > 0");
  return ch.kappa2_eff() * std::log1p(1.0 / m) - std::log1p(1.0 / N0);
}

SufficientConditionScan scan_sufficient_condition(int grid) {
  if (grid < 2) throw Error(ErrorKind::DomainError, "grid needs at least 2 points per axis");
  auto logspace = [grid](double lo, double hi) {
    std::vector<double> v(grid);
    for (int i = 0; i < grid; ++i) v[i] = std::pow(10.0, lo + (hi - lo) * i / (grid - 1));
    return v;
  };
  SufficientConditionScan s;
  s.max_margin = -kInf;
  auto visit = [&s](const ChannelSpec& ch, double n0) {
    const double m = sufficient_condition_margin(ch, n0);
    ++s.points;
    if (m >= 0.0) ++s.holds;
    if (m > s.max_margin) {
      s.max_margin = m;
      s.argmax = ch;
      s.argmax_N0 = n0;
    }
  };
  const auto n0s = logspace(-3.0, 3.0);
  const auto envs = logspace(-3.0, 2.0);
  for (double n0 : n0s) {
    for (int i = 1; i < grid; ++i) {
      const double eta = static_cast<double>(i) / grid;
      visit(ChannelSpec::attenuator(eta, 0.0), n0);
      for (double n : envs) visit(ChannelSpec::attenuator(eta, n), n0);
    }
    for (double k2 : logspace(-3.0, 1.0)) {
      visit(ChannelSpec::amplifier(1.0 + k2, 0.0), n0);
      for (double n : envs) visit(ChannelSpec::amplifier(1.0 + k2, n), n0);
    }
    for (double t : logspace(-3.0, 2.0)) visit(ChannelSpec::b2(t), n0);
  }
  return s;
}

}  // namespace gmoe
