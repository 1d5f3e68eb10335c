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

#include "gmoe/sampling.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "gmoe/error.hpp"

namespace gmoe {

namespace {

RVector tempered(const RVector& logw, double beta) {
  RVector x = beta * logw;
  x.array() -= x.maxCoeff();
  RVector p = x.array().exp();
  return p / p.sum();
}

double entropy_of(const RVector& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

void check_shell(double S0, int d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 1");
  if (!(S0 >= 0.0) || !std::isfinite(S0)) throw Error(ErrorKind::DomainError, "S0 must be finite and >= 0");
  if (S0 > 0.0 && S0 > std::log(static_cast<double>(d)) - kShellMargin)
    throw Error(ErrorKind::ConstraintError,
                "S0 = " + std::to_string(S0) + " needs ln d >= S0 + " + std::to_string(kShellMargin) +
                    " (cutoff " + std::to_string(d) + ")");
}

CMatrix conjugate(const CMatrix& u, const RVector& p) {
  return u * p.cast<cplx>().asDiagonal() * u.adjoint();
}

}  // namespace

RVector entropy_shell_spectrum(const RVector& logw, double S0) { return entropy_shell_fit(logw, S0).p; }

ShellSpectrum entropy_shell_fit(const RVector& logw, double S0) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int d = static_cast<int>(logw.size());
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "empty spectrum");
  if (!(S0 >= 0.0) || S0 > std::log(static_cast<double>(d)))
    throw Error(ErrorKind::ConstraintError, "S0 outside [0, ln d]");
  const double spread = logw.maxCoeff() - logw.minCoeff();
  if (S0 == 0.0 || spread == 0.0) {
    if (spread == 0.0 && std::abs(S0 - std::log(static_cast<double>(d))) > 1e-10)
      throw Error(ErrorKind::ConstraintError, "flat weights only reach S0 = ln d");
    if (S0 == 0.0) {
      RVector p = RVector::Zero(d);
      Eigen::Index k;
      logw.maxCoeff(&k);
      p(k) = 1.0;
      return {p, kInf};
    }
    return {RVector::Constant(d, 1.0 / d), 0.0};
  }
  auto f = [&](double beta) { return entropy_of(tempered(logw, beta)) - S0; };
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorKind::ConstraintError, "entropy shell not reachable");
  }
  boost::uintmax_t iters = 300;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, 0.0, hi, f(0.0), f(hi), boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3),
      iters);
  double beta = 0.5 * (a + b);
  // Newton polish: dH/dβ = −β·Var_λ(log w).
  for (int k = 0; k < 4; ++k) {
    RVector p = tempered(logw, beta);
    const double mean = p.dot(logw);
    const double var = p.dot((logw.array() - mean).square().matrix());
    const double slope = -beta * var;
    if (slope == 0.0) break;
    const double step = (entropy_of(p) - S0) / slope;
    if (!std::isfinite(step) || beta - step < 0.0) break;
    beta -= step;
  }
  RVector p = tempered(logw, beta);
  if (std::abs(entropy_of(p) - S0) > 1e-10)
    throw Error(ErrorKind::ConstraintError, "shell projection residual " + std::to_string(entropy_of(p) - S0));
  return {p, beta};
}

CMatrix haar_unitary(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix z(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) z(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    q.col(j) *= std::abs(rjj) > 0.0 ? rjj / std::abs(rjj) : 1.0;
  }
  return q;
}

ShellPoint sample_shell_point(double S0, int d, std::uint64_t seed) {
  check_shell(S0, d);
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ShellPoint pt;
  if (S0 == 0.0) {
    CVector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = cplx(n(rng), n(rng));
    psi.normalize();
    // Unitary with ψ as its first column; the weights put all mass there.
    Eigen::HouseholderQR<CMatrix> qr(psi);
    pt.unitary = qr.householderQ();
    const cplx r00 = qr.matrixQR()(0, 0);
    pt.unitary.col(0) *= r00 / std::abs(r00);
    pt.log_weights = RVector::Zero(d);
    pt.log_weights(0) = 1.0;
    return pt;
  }
  pt.log_weights.resize(d);
  for (int i = 0; i < d; ++i) pt.log_weights(i) = n(rng);
  pt.unitary = haar_unitary(d, rng);
  return pt;
}

DensityOperator shell_state(const ShellPoint& pt, double S0) {
  return DensityOperator(conjugate(pt.unitary, entropy_shell_spectrum(pt.log_weights, S0)));
}

DensityOperator sample_fixed_entropy_state(double S0, int d, std::uint64_t seed) {
  return shell_state(sample_shell_point(S0, d, seed), S0);
}

DensityOperator sample_thermal_tailed_state(double S0, int d, int mixing_dim, std::uint64_t seed,
                                            double sigma) {
  check_shell(S0, d);
  if (mixing_dim < 1 || mixing_dim > d) throw Error(ErrorKind::InvalidDimension, "mixing block outside cutoff");
  if (S0 == 0.0) return DensityOperator::number_state(0, d);
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  const double n0 = g_inverse(S0);
  const double slope = std::log1p(1.0 / n0);
  RVector logw(d);
  for (int i = 0; i < d; ++i) logw(i) = -slope * i + sigma * n(rng);
  const RVector p = entropy_shell_spectrum(logw, S0);
  CMatrix u = CMatrix::Identity(d, d);
  u.topLeftCorner(mixing_dim, mixing_dim) = haar_unitary(mixing_dim, rng);
  return DensityOperator(conjugate(u, p));
}

}  // namespace gmoe
