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

#include "gmoe/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "gmoe/error.hpp"

namespace gmoe {

GaussianState GaussianState::thermal(double n) {
  if (!(n >= 0)) throw Error(ErrorKind::DomainError, "thermal photon number must be >= 0");
  return diagonal(n + 0.5, n + 0.5);
}

GaussianState GaussianState::diagonal(double var_q, double var_p) {
  GaussianState s;
  s.cov << var_q, 0.0, 0.0, var_p;
  s.validate();
  return s;
}

void GaussianState::validate() const {
  if (!mean.allFinite() || !cov.allFinite())
    throw Error(ErrorKind::UnphysicalState, "non-finite mean or covariance");
  if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12)
    throw Error(ErrorKind::UnphysicalState, "covariance matrix is not symmetric");
  if (cov(0, 0) <= 0 || cov(1, 1) <= 0 || cov.determinant() < 0.25 - 1e-10)
    throw Error(ErrorKind::UnphysicalState, "covariance violates det(cov) >= 1/4");
}

double GaussianState::mean_photon() const {
  return 0.5 * (cov(0, 0) + cov(1, 1)) - 0.5 + 0.5 * mean.squaredNorm();
}

double gaussian_entropy(const GaussianState& s) {
  s.validate();
  double nu = std::sqrt(s.cov.determinant()) - 0.5;
  if (nu < 1e-10) nu = std::max(nu, 0.0);
  return g_function(std::max(nu, 0.0));
}

GaussianState apply_gaussian_channel(const GaussianState& s, const ChannelSpec& ch) {
  ch.validate();
  s.validate();
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const double vac = ch.N + 0.5;
  GaussianState out = s;
  switch (ch.cls) {
    case ChannelClass::C_att:
      out.mean = std::sqrt(ch.eta) * s.mean;
      out.cov = ch.eta * s.cov + (1.0 - ch.eta) * vac * id;
      break;
    case ChannelClass::C_amp:
      out.mean = std::sqrt(ch.kappa2) * s.mean;
      out.cov = ch.kappa2 * s.cov + (ch.kappa2 - 1.0) * vac * id;
      break;
    case ChannelClass::D: {
      // Environment side of a two-mode squeezer: the input arrives phase
      // conjugated, p → −p.
      const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
      out.mean = std::sqrt(ch.kappa2) * z * s.mean;
      out.cov = ch.kappa2 * z * s.cov * z + (1.0 + ch.kappa2) * vac * id;
      break;
    }
    case ChannelClass::B2:
      out.cov = s.cov + ch.t * id;
      break;
    case ChannelClass::B1:
      out.cov(0, 0) += 0.5;
      break;
    case ChannelClass::A1:
      out.mean.setZero();
      out.cov = vac * id;
      break;
    case ChannelClass::A2:
      // The measured position x re-prepares ρ_E shifted by e^{ixp}, which
      // moves the q mean to −x.
      out.mean = Eigen::Vector2d(-s.mean(0), 0.0);
      out.cov << s.cov(0, 0) + vac, 0.0, 0.0, vac;
      break;
  }
  out.cov(1, 0) = out.cov(0, 1);
  return out;
}

std::vector<InfimumRow> infimum_limit_experiment(const ChannelSpec& ch, double S0,
                                                 std::span<const double> sigmas) {
  if (ch.cls != ChannelClass::A2 && ch.cls != ChannelClass::B1)
    throw Error(ErrorKind::SpecError, "infimum experiment is defined for A2 and B1 only");
  if (!(S0 >= 0)) throw Error(ErrorKind::DomainError, "S0 must be >= 0");
  const double product = g_inverse(S0) + 0.5;
  const double limit = ch.cls == ChannelClass::A2 ? g_function(ch.N) : S0;
  std::vector<InfimumRow> rows;
  rows.reserve(sigmas.size());
  for (double sigma : sigmas) {
    if (!(sigma > 0)) throw Error(ErrorKind::DomainError, "sigma values must be positive");
    const double partner = product / sigma;
    GaussianState in = ch.cls == ChannelClass::A2
                           ? GaussianState::diagonal(sigma * sigma, partner * partner)
                           : GaussianState::diagonal(partner * partner, sigma * sigma);
    GaussianState out = apply_gaussian_channel(in, ch);
    rows.push_back({sigma, partner, gaussian_entropy(in), gaussian_entropy(out), limit});
  }
  return rows;
}

DensityOperator embed_gaussian_to_fock(const GaussianState& s, int d) {
  s.validate();
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 2");
  if (s.mean.norm() > 1e-12)
    throw Error(ErrorKind::DomainError, "only zero-mean states can be embedded");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s.cov);
  const double c_min = es.eigenvalues()(0);
  const double c_max = es.eigenvalues()(1);
  const double nu = std::max(std::sqrt(c_min * c_max) - 0.5, 0.0);
  if (c_max - c_min < 1e-12 * c_max) return gibbs_state(nu, d);

  // The squeezed quadrature q_φ = q cos φ + p sin φ carries c_min.
  const double r = 0.25 * std::log(c_max / c_min);
  const double phi = std::atan2(es.eigenvectors()(1, 0), es.eigenvectors()(0, 0));

  // The squeeze spreads photons over the padded space; the result is cut
  // back to d and checked.
  const int thermal_dim = std::max(d, gibbs_cutoff(nu, 1e-16));
  const int w = thermal_dim + 2 * d + static_cast<int>(std::ceil(60.0 * r * (nu + 1.0))) + 40;
  const CMatrix a = annihilation_op(w).matrix();
  const CMatrix a2 = a * a;
  // exp[r(a² − a†²)/2] = exp(−iH) with H = i r (a² − a†²)/2.
  const CMatrix h = kI * (0.5 * r) * (a2 - a2.adjoint());
  const CMatrix sq = unitary_exp(h, 1.0);
  CMatrix th = CMatrix::Zero(w, w);
  th.topLeftCorner(thermal_dim, thermal_dim) = gibbs_state(nu, thermal_dim).matrix();
  CMatrix rho = sq * th * sq.adjoint();
  for (int m = 0; m < w; ++m)
    for (int n = 0; n < w; ++n) rho(m, n) *= std::polar(1.0, phi * (m - n));

  double dropped = 0.0;
  for (int k = d; k < w; ++k) dropped += rho(k, k).real();
  if (dropped >= tol::kTailFailure)
    throw Error(ErrorKind::CutoffTooSmall,
                "squeezed state leaves " + std::to_string(dropped) + " population above cutoff " +
                    std::to_string(d));
  CMatrix block = rho.topLeftCorner(d, d);
  block /= block.trace().real();
  return DensityOperator(block);
}

}  // namespace gmoe
