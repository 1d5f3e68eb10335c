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

#include "gmoe/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace gmoe {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_dim(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 2, got " + std::to_string(d));
}

}  // namespace

FockOperator::FockOperator(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw Error(ErrorKind::ShapeError, "operator must be square");
  require_dim(static_cast<int>(m_.rows()));
  if (!m_.allFinite()) throw Error(ErrorKind::InvalidState, "operator has non-finite entries");
}

double tail_mass_of(const CMatrix& rho) {
  const Eigen::Index d = rho.rows();
  const Eigen::Index top = (d + 7) / 8;
  double mass = 0.0;
  for (Eigen::Index n = d - top; n < d; ++n) mass += rho(n, n).real();
  return std::max(mass, 0.0);
}

DensityOperator::DensityOperator(CMatrix m) : op_(std::move(m)) {
  const CMatrix& rho = op_.matrix();
  const double herm = hermiticity_defect(rho);
  if (herm > tol::kHermitian)
    throw Error(ErrorKind::InvalidState, "not Hermitian (defect " + fmt(herm) + ")");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace)
    throw Error(ErrorKind::InvalidState, "trace " + fmt(tr) + " differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues()(0);
  if (min_eig < -tol::kNegativity)
    throw Error(ErrorKind::NotPositive, "minimum eigenvalue " + fmt(min_eig));
  op_ = FockOperator(0.5 * (rho + rho.adjoint()));
  tail_mass_ = tail_mass_of(op_.matrix());
}

DensityOperator DensityOperator::pure(const CVector& psi) {
  const CVector v = psi / psi.norm();
  return DensityOperator(v * v.adjoint());
}

DensityOperator DensityOperator::number_state(int n, int d) {
  require_dim(d);
  if (n < 0 || n >= d) throw Error(ErrorKind::DomainError, "number state outside the cutoff");
  CMatrix m = CMatrix::Zero(d, d);
  m(n, n) = 1.0;
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::from_populations(const RVector& p) {
  CMatrix m = CMatrix::Zero(p.size(), p.size());
  m.diagonal() = p.cast<cplx>();
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::resized(int new_dim) const {
  require_dim(new_dim);
  if (new_dim < dim()) {
    double dropped = 0.0;
    for (int n = new_dim; n < dim(); ++n) dropped += matrix()(n, n).real();
    if (dropped > tol::kTailFailure)
      throw Error(ErrorKind::CutoffTooSmall,
                  "shrinking to " + std::to_string(new_dim) + " drops population " + fmt(dropped));
    CMatrix m = gmoe::resized(matrix(), new_dim);
    m /= m.trace().real();
    return DensityOperator(std::move(m));
  }
  return DensityOperator(gmoe::resized(matrix(), new_dim));
}

FockOperator annihilation_op(int d) {
  require_dim(d);
  CMatrix a = CMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return FockOperator(std::move(a));
}

FockOperator creation_op(int d) { return FockOperator(annihilation_op(d).matrix().adjoint()); }

FockOperator number_op(int d) {
  require_dim(d);
  CMatrix n = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = k;
  return FockOperator(std::move(n));
}

int displacement_working_dim(double abs_mu, int d) {
  const double reach = std::sqrt(static_cast<double>(d)) + abs_mu + 7.0;
  return std::max(d + 8, static_cast<int>(std::ceil(reach * reach)));
}

FockOperator displacement_op(cplx mu, int d) {
  require_dim(d);
  const double r = std::abs(mu);
  if (r == 0.0) return FockOperator(CMatrix::Identity(d, d));
  const double phi = std::arg(mu);
  const int w = displacement_working_dim(r, d);

  // With S = diag(iⁿ), S† · i r(a† − a) · S is the real symmetric tridiagonal
  // matrix with off-diagonal r√(n+1); D(r) = S exp(−iT) S†.
  RVector diag = RVector::Zero(w);
  RVector off(w - 1);
  for (int n = 0; n < w - 1; ++n) off(n) = r * std::sqrt(n + 1.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const RMatrix& v = solver.eigenvectors();
  const RVector& lam = solver.eigenvalues();

  CVector phase(w);
  for (int k = 0; k < w; ++k) phase(k) = std::exp(-kI * lam(k));
  const CMatrix top = v.topRows(d).cast<cplx>();
  CMatrix block = top * phase.asDiagonal() * top.transpose();

  // Sandwich with S and the rotation R(φ) = diag(e^{iφn}).
  CVector left(d);
  for (int n = 0; n < d; ++n) left(n) = std::pow(kI, n) * std::exp(kI * (phi * n));
  block = left.asDiagonal() * block * left.conjugate().asDiagonal();
  return FockOperator(std::move(block));
}

DensityOperator gibbs_state(double mean_photons, int d) {
  require_dim(d);
  if (!(mean_photons >= 0.0)) throw Error(ErrorKind::DomainError, "mean photon number must be >= 0");
  RVector p = RVector::Zero(d);
  if (mean_photons == 0.0) {
    p(0) = 1.0;
  } else {
    const double ratio = mean_photons / (mean_photons + 1.0);
    for (int n = 0; n < d; ++n) p(n) = std::pow(ratio, n) / (mean_photons + 1.0);
    p /= p.sum();
  }
  DensityOperator rho = DensityOperator::from_populations(p);
  if (rho.tail_mass() >= tol::kTailFailure)
    throw Error(ErrorKind::CutoffTooSmall, "Gibbs state N=" + fmt(mean_photons) + " at cutoff " +
                                               std::to_string(d) + " has tail mass " +
                                               fmt(rho.tail_mass()) + "; suggested cutoff " +
                                               std::to_string(gibbs_cutoff(mean_photons)));
  return rho;
}

int gibbs_cutoff(double mean_photons, double mass) {
  if (mean_photons <= 0.0) return 4;
  const double ratio = mean_photons / (mean_photons + 1.0);
  const int d = static_cast<int>(std::ceil(std::log(mass) / std::log(ratio)));
  return std::max(d, 4);
}

double g_function(double n) {
  if (!(n >= 0.0)) throw Error(ErrorKind::DomainError, "g(N) requires N >= 0, got " + fmt(n));
  if (n == 0.0) return 0.0;
  return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

double g_inverse(double entropy) {
  if (!(entropy >= 0.0)) throw Error(ErrorKind::DomainError, "entropy must be >= 0, got " + fmt(entropy));
  if (entropy == 0.0) return 0.0;
  double hi = 1.0;
  while (g_function(hi) < entropy) hi *= 2.0;
  auto f = [entropy](double n) { return g_function(n) - entropy; };
  boost::uintmax_t iters = 200;
  auto [lo_x, hi_x] = boost::math::tools::toms748_solve(
      f, 0.0, hi, -entropy, g_function(hi) - entropy,
      boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), iters);
  double n = 0.5 * (lo_x + hi_x);
  // Polish with Newton on the strictly increasing g; g'(N) = ln((N+1)/N).
  for (int k = 0; k < 3 && n > 0.0; ++k) n -= f(n) / std::log1p(1.0 / n);
  return std::max(n, 0.0);
}

EntropyConstraint EntropyConstraint::from_entropy(double s0) { return {s0, g_inverse(s0)}; }

EntropyConstraint EntropyConstraint::from_photons(double n0) { return {g_function(n0), n0}; }

double shannon_entropy(const RVector& p) {
  double s = 0.0;
  for (double x : p) {
    if (x < -tol::kNotPositive) throw Error(ErrorKind::NotPositive, "eigenvalue " + fmt(x));
    if (x > tol::kEigenClamp) s -= x * std::log(x);
  }
  return s;
}

double von_neumann_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return shannon_entropy(solver.eigenvalues());
}

double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(rho.matrix()); }

double relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows())
    throw Error(ErrorKind::ShapeError, "relative entropy needs equal cutoffs (" +
                                           std::to_string(rho.rows()) + " vs " +
                                           std::to_string(sigma.rows()) + ")");
  const double neg_entropy = -von_neumann_entropy(rho);
  const HermitianEigen es = eigh(sigma);
  // ⟨w_k|ρ|w_k⟩ for every eigenvector of σ.
  const RVector weights = (es.vectors.adjoint() * rho * es.vectors).diagonal().real();
  double cross = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    const double s = es.values(k);
    if (s < 1e-12) {
      if (weights(k) > 1e-10) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weights(k) * std::log(s);
  }
  return neg_entropy - cross;
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

double relative_entropy_to_gibbs(const CMatrix& rho, double N) {
  if (!(N >= 0.0) || !std::isfinite(N)) throw Error(ErrorKind::DomainError, "N must be finite and >= 0");
  const double n = mean_photon(rho);
  if (N == 0.0) return n > 1e-12 ? std::numeric_limits<double>::infinity() : -von_neumann_entropy(rho);
  return -von_neumann_entropy(rho) + std::log1p(N) + n * std::log1p(1.0 / N);
}

double relative_entropy_to_gibbs(const DensityOperator& rho, double N) {
  return relative_entropy_to_gibbs(rho.matrix(), N);
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  return trace_distance(a.matrix(), b.matrix());
}

cplx characteristic_function(const DensityOperator& rho, cplx mu) {
  const CMatrix d = displacement_op(mu, rho.dim()).matrix();
  return (rho.matrix().cwiseProduct(d.transpose())).sum();
}

double mean_photon(const CMatrix& rho) {
  double n = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) n += static_cast<double>(k) * rho(k, k).real();
  return n;
}

double mean_photon(const DensityOperator& rho) { return mean_photon(rho.matrix()); }

QuadratureMoments quadrature_moments(const CMatrix& rho) {
  const Eigen::Index d = rho.rows();
  cplx a1 = 0.0, a2 = 0.0;
  for (Eigen::Index n = 1; n < d; ++n) a1 += rho(n, n - 1) * std::sqrt(static_cast<double>(n));
  for (Eigen::Index n = 2; n < d; ++n)
    a2 += rho(n, n - 2) * std::sqrt(static_cast<double>(n) * static_cast<double>(n - 1));
  const double nbar = mean_photon(rho);
  QuadratureMoments m{};
  m.mean_q = std::sqrt(2.0) * a1.real();
  m.mean_p = std::sqrt(2.0) * a1.imag();
  const double q2 = a2.real() + nbar + 0.5;
  const double p2 = -a2.real() + nbar + 0.5;
  m.var_q = q2 - m.mean_q * m.mean_q;
  m.var_p = p2 - m.mean_p * m.mean_p;
  m.cov_qp = a2.imag() - m.mean_q * m.mean_p;
  return m;
}

int MultiModeOperator::total_dim() const {
  int t = 1;
  for (int d : dims) t *= d;
  return t;
}

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

MultiModeOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return {{a.dim(), b.dim()}, kron(a.matrix(), b.matrix())};
}

MultiModeOperator tensor(const MultiModeOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.dims;
  dims.push_back(b.dim());
  return {std::move(dims), kron(a.matrix, b.matrix())};
}

MultiModeOperator partial_trace(const MultiModeOperator& omega, std::span<const int> keep) {
  const int modes = static_cast<int>(omega.dims.size());
  if (omega.matrix.rows() != omega.total_dim() || omega.matrix.cols() != omega.total_dim())
    throw Error(ErrorKind::ShapeError, "matrix size does not match the per-mode cutoffs");
  std::vector<bool> kept(modes, false);
  for (int k : keep) {
    if (k < 0 || k >= modes) throw Error(ErrorKind::ShapeError, "mode index " + std::to_string(k) + " out of range");
    kept[k] = true;
  }
  std::vector<int> kept_dims, traced_dims;
  for (int m = 0; m < modes; ++m) (kept[m] ? kept_dims : traced_dims).push_back(omega.dims[m]);
  int dk = 1, dt = 1;
  for (int d : kept_dims) dk *= d;
  for (int d : traced_dims) dt *= d;

  // Strides of every mode in the full index.
  std::vector<int> stride(modes, 1);
  for (int m = modes - 2; m >= 0; --m) stride[m] = stride[m + 1] * omega.dims[m + 1];

  auto full_index = [&](int kept_idx, int traced_idx) {
    int idx = 0;
    for (int m = modes - 1; m >= 0; --m) {
      int& src = kept[m] ? kept_idx : traced_idx;
      idx += (src % omega.dims[m]) * stride[m];
      src /= omega.dims[m];
    }
    return idx;
  };

  std::vector<int> table(static_cast<size_t>(dk) * dt);
  for (int i = 0; i < dk; ++i)
    for (int t = 0; t < dt; ++t) table[static_cast<size_t>(i) * dt + t] = full_index(i, t);

  CMatrix out = CMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      cplx s = 0.0;
      for (int t = 0; t < dt; ++t)
        s += omega.matrix(table[static_cast<size_t>(i) * dt + t], table[static_cast<size_t>(j) * dt + t]);
      out(i, j) = s;
    }
  return {kept_dims, std::move(out)};
}

DensityOperator reduce_to_mode(const MultiModeOperator& omega, int mode) {
  const int keep[] = {mode};
  return DensityOperator(partial_trace(omega, keep).matrix);
}

RVector hermite_functions(double x, int count) {
  RVector psi(count);
  psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (count > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int n = 1; n + 1 < count; ++n)
    psi(n + 1) = std::sqrt(2.0 / (n + 1)) * x * psi(n) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1);
  return psi;
}

RVector position_distribution(const CMatrix& rho, std::span<const double> grid) {
  if (grid.size() < 3) throw Error(ErrorKind::GridError, "grid needs at least 3 points");
  const double h = grid[1] - grid[0];
  if (!(h > 0.0)) throw Error(ErrorKind::GridError, "grid must be increasing");
  for (size_t i = 1; i < grid.size(); ++i)
    if (std::abs((grid[i] - grid[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw Error(ErrorKind::GridError, "grid spacing is not uniform");
  const int d = static_cast<int>(rho.rows());
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  RVector out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const CVector psi = hermite_functions(grid[i], d).cast<cplx>();
    out(i) = (psi.transpose() * herm * psi).value().real();
  }
  const double edge = std::max(std::abs(out(0)), std::abs(out(out.size() - 1)));
  if (edge > 1e-8)
    throw Error(ErrorKind::GridError, "position density " + fmt(edge) + " at the grid edge; widen the grid");
  return out;
}

RVector position_distribution(const DensityOperator& rho, std::span<const double> grid) {
  return position_distribution(rho.matrix(), grid);
}

std::vector<double> uniform_grid(double half_width, int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = -half_width + 2.0 * half_width * i / (points - 1);
  return grid;
}

double position_grid_half_width(const CMatrix& rho) {
  // Hermite functions up to level d−1 are negligible beyond √(2d+1) + 6.
  const double nbar = std::max(mean_photon(rho), 0.0);
  const double turning = std::sqrt(2.0 * static_cast<double>(rho.rows()) + 1.0) + 6.0;
  return std::max(5.0 * std::sqrt(nbar + 1.0), turning);
}

}  // namespace gmoe
