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

#include "gmoe/dilation.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "gmoe/error.hpp"
#include "gmoe/fock.hpp"

namespace gmoe {

namespace {

// Leading `cols` columns of exp(G) for the real antisymmetric tridiagonal G
// with G(k+1,k) = b(k); all columns when cols < 0.
RMatrix exp_antisymmetric_tridiagonal(const RVector& b, int cols = -1) {
  const int n = static_cast<int>(b.size()) + 1;
  if (cols < 0 || cols > n) cols = n;
  if (n == 1) return RMatrix::Ones(1, cols);
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(RVector::Zero(n), b, Eigen::ComputeEigenvectors);
  const RMatrix& v = es.eigenvectors();
  const RVector& lam = es.eigenvalues();
  const auto vt = v.topRows(cols).transpose();
  RMatrix c = v * lam.array().cos().matrix().asDiagonal() * vt;
  RMatrix s = v * lam.array().sin().matrix().asDiagonal() * vt;
  RMatrix u(n, cols);
  for (int y = 0; y < cols; ++y)
    for (int x = 0; x < n; ++x) {
      switch (((x - y) % 4 + 4) % 4) {
        case 0: u(x, y) = c(x, y); break;
        case 1: u(x, y) = s(x, y); break;
        case 2: u(x, y) = -c(x, y); break;
        default: u(x, y) = -s(x, y); break;
      }
    }
  return u;
}

// Same as above through the Chebyshev–Bessel series
//   exp(G) = J_0(ρ) + 2 Σ_k J_k(ρ) P_k(G/ρ),  P_{k+1} = 2X P_k + P_{k−1},
// which is real for antisymmetric G with spectral radius ≤ ρ. Cost is
// O(n·ρ) per column instead of O(n³).
RMatrix exp_antisymmetric_tridiagonal_cheb(const RVector& b, int cols) {
  const int n = static_cast<int>(b.size()) + 1;
  double rho = 0.0;
  for (int k = 0; k < n; ++k) {
    const double lo = k > 0 ? std::abs(b(k - 1)) : 0.0;
    const double hi = k + 1 < n ? std::abs(b(k)) : 0.0;
    rho = std::max(rho, lo + hi);
  }
  auto apply_x = [&](const RMatrix& v) {
    RMatrix out(n, v.cols());
    for (int c = 0; c < v.cols(); ++c)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        if (k > 0) s += b(k - 1) * v(k - 1, c);
        if (k + 1 < n) s -= b(k) * v(k + 1, c);
        out(k, c) = s / rho;
      }
    return out;
  };
  RMatrix prev = RMatrix::Identity(n, cols);
  RMatrix out = boost::math::cyl_bessel_j(0, rho) * prev;
  RMatrix cur = apply_x(prev);
  for (int k = 1;; ++k) {
    const double j = boost::math::cyl_bessel_j(k, rho);
    out += 2.0 * j * cur;
    if (k > rho && std::abs(j) < 1e-18) break;
    RMatrix next = 2.0 * apply_x(cur) + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

constexpr double kGramFloor = 1e-13;

void check_input(const DilationInput& in) {
  if (in.rho.rows() != in.rho.cols()) throw Error(ErrorKind::ShapeError, "input must be square");
  const SectorCoupling::Column probe = in.coupling.column(
      static_cast<int>(in.rho.rows()) - 1, static_cast<int>(in.env_populations.size()) - 1);
  (void)probe;
}

}  // namespace

SectorCoupling SectorCoupling::beam_splitter(double eta, int max_total) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::DomainError, "eta must lie in [0, 1]");
  if (max_total < 0) throw Error(ErrorKind::InvalidDimension, "negative sector count");
  SectorCoupling c;
  c.kind_ = Kind::BeamSplitter;
  const double theta = std::acos(std::sqrt(eta));
  c.blocks_.reserve(max_total + 1);
  for (int n = 0; n <= max_total; ++n) {
    RVector b(n);
    for (int x = 0; x < n; ++x) b(x) = theta * std::sqrt((x + 1.0) * (n - x));
    c.blocks_.push_back(exp_antisymmetric_tridiagonal(b));
  }
  c.out_a_ = c.out_e_ = max_total + 1;
  return c;
}

SectorCoupling SectorCoupling::two_mode_squeezer(double gain, int max_level, int max_input_a,
                                                 int max_input_e) {
  if (!(gain >= 1.0)) throw Error(ErrorKind::DomainError, "squeezer gain must be >= 1");
  if (max_input_a < 1 || max_input_e < 1 || max_level < std::max(max_input_a, max_input_e))
    throw Error(ErrorKind::InvalidDimension, "inconsistent squeezer truncation");
  SectorCoupling c;
  c.kind_ = Kind::Squeezer;
  const double r = std::acosh(std::sqrt(gain));
  c.offset_ = max_input_e - 1;
  c.out_a_ = c.out_e_ = max_level;
  for (int delta = -(max_input_e - 1); delta <= max_input_a - 1; ++delta) {
    const int xa = std::max(delta, 0), ye = std::max(-delta, 0);
    const int len = max_level - std::abs(delta);
    RVector b(len - 1);
    for (int s = 0; s + 1 < len; ++s) b(s) = r * std::sqrt((xa + s + 1.0) * (ye + s + 1.0));
    // Only columns reachable from inputs i < max_input_a, m < max_input_e.
    const int used = std::min(max_input_a - xa, max_input_e - ye);
    RMatrix u = len > 96 && used * 4 < len ? exp_antisymmetric_tridiagonal_cheb(b, used)
                                           : exp_antisymmetric_tridiagonal(b, used);
    const int top = std::min(2, len);
    for (int s = 0; s < used; ++s)
      c.boundary_mass_ = std::max(c.boundary_mass_, u.col(s).tail(top).squaredNorm());
    c.blocks_.push_back(std::move(u));
  }
  return c;
}

SectorCoupling::Column SectorCoupling::column(int i, int m) const {
  if (i < 0 || m < 0) throw Error(ErrorKind::ShapeError, "negative Fock index");
  if (kind_ == Kind::BeamSplitter) {
    const int n = i + m;
    if (n >= static_cast<int>(blocks_.size()))
      throw Error(ErrorKind::ShapeError, "beam splitter built for fewer photons");
    const RMatrix& u = blocks_[n];
    return {0, 1, n, -1, n + 1, u.col(i).data(), n};
  }
  const int delta = i - m;
  const int idx = delta + offset_;
  if (idx < 0 || idx >= static_cast<int>(blocks_.size()))
    throw Error(ErrorKind::ShapeError, "squeezer built for fewer input levels");
  const RMatrix& u = blocks_[idx];
  const int s_in = std::min(i, m);
  return {std::max(delta, 0), 1, std::max(-delta, 0), 1, static_cast<int>(u.rows()),
          u.col(s_in).data(), idx};
}

double SectorCoupling::unitarity_defect() const {
  double worst = 0.0;
  for (const auto& u : blocks_) {
    RMatrix e = u.transpose() * u - RMatrix::Identity(u.cols(), u.cols());
    worst = std::max(worst, e.cwiseAbs().maxCoeff());
  }
  return worst;
}

CMatrix reduce_to_system(const DilationInput& in, int out_dim) {
  check_input(in);
  const int d = static_cast<int>(in.rho.rows());
  const int de = static_cast<int>(in.env_populations.size());
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int m = 0; m < de; ++m) {
    const double p = in.env_populations(m);
    if (p == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      const auto ci = in.coupling.column(i, m);
      for (int j = 0; j < d; ++j) {
        const cplx w = p * in.rho(i, j);
        if (w == 0.0) continue;
        const auto cj = in.coupling.column(j, m);
        for (int k = 0; k < ci.len; ++k) {
          const int x = ci.x0 + ci.dx * k;
          if (x >= out_dim) continue;
          const int y = ci.y0 + ci.dy * k;
          const int kk = (y - cj.y0) * cj.dy;
          if (kk < 0 || kk >= cj.len) continue;
          const int xx = cj.x0 + cj.dx * kk;
          if (xx >= out_dim) continue;
          out(x, xx) += w * (ci.amp[k] * cj.amp[kk]);
        }
      }
    }
  }
  return out;
}

CMatrix reduce_to_environment(const DilationInput& in, int out_dim) {
  check_input(in);
  const int d = static_cast<int>(in.rho.rows());
  const int de = static_cast<int>(in.env_populations.size());
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int m = 0; m < de; ++m) {
    const double p = in.env_populations(m);
    if (p == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      const auto ci = in.coupling.column(i, m);
      for (int j = 0; j < d; ++j) {
        const cplx w = p * in.rho(i, j);
        if (w == 0.0) continue;
        const auto cj = in.coupling.column(j, m);
        for (int k = 0; k < ci.len; ++k) {
          const int y = ci.y0 + ci.dy * k;
          if (y >= out_dim) continue;
          const int x = ci.x0 + ci.dx * k;
          const int kk = (x - cj.x0) * cj.dx;
          if (kk < 0 || kk >= cj.len) continue;
          const int yy = cj.y0 + cj.dy * kk;
          if (yy >= out_dim) continue;
          out(y, yy) += w * (ci.amp[k] * cj.amp[kk]);
        }
      }
    }
  }
  return out;
}

CMatrix reduce_to_system_adjoint(const CMatrix& x, const RVector& env_populations,
                                 const SectorCoupling& coupling, int in_dim) {
  const int out_dim = static_cast<int>(x.rows());
  const int de = static_cast<int>(env_populations.size());
  CMatrix out = CMatrix::Zero(in_dim, in_dim);
  for (int m = 0; m < de; ++m) {
    const double p = env_populations(m);
    if (p == 0.0) continue;
    for (int i = 0; i < in_dim; ++i) {
      const auto ci = coupling.column(i, m);
      for (int j = 0; j < in_dim; ++j) {
        const auto cj = coupling.column(j, m);
        cplx acc = 0.0;
        for (int k = 0; k < ci.len; ++k) {
          const int xa = ci.x0 + ci.dx * k;
          if (xa >= out_dim) continue;
          const int y = ci.y0 + ci.dy * k;
          const int kk = (y - cj.y0) * cj.dy;
          if (kk < 0 || kk >= cj.len) continue;
          const int xb = cj.x0 + cj.dx * kk;
          if (xb >= out_dim) continue;
          acc += x(xb, xa) * (ci.amp[k] * cj.amp[kk]);
        }
        out(j, i) += p * acc;
      }
    }
  }
  return out;
}

CMatrix reduce_to_environment_adjoint(const CMatrix& x, const RVector& env_populations,
                                      const SectorCoupling& coupling, int in_dim) {
  const int out_dim = static_cast<int>(x.rows());
  const int de = static_cast<int>(env_populations.size());
  CMatrix out = CMatrix::Zero(in_dim, in_dim);
  for (int m = 0; m < de; ++m) {
    const double p = env_populations(m);
    if (p == 0.0) continue;
    for (int i = 0; i < in_dim; ++i) {
      const auto ci = coupling.column(i, m);
      for (int j = 0; j < in_dim; ++j) {
        const auto cj = coupling.column(j, m);
        cplx acc = 0.0;
        for (int k = 0; k < ci.len; ++k) {
          const int ya = ci.y0 + ci.dy * k;
          if (ya >= out_dim) continue;
          const int xa = ci.x0 + ci.dx * k;
          const int kk = (xa - cj.x0) * cj.dx;
          if (kk < 0 || kk >= cj.len) continue;
          const int yb = cj.y0 + cj.dy * kk;
          if (yb >= out_dim) continue;
          acc += x(yb, ya) * (ci.amp[k] * cj.amp[kk]);
        }
        out(j, i) += p * acc;
      }
    }
  }
  return out;
}

CMatrix joint_state(const DilationInput& in, int dim_a, int dim_e) {
  check_input(in);
  const int d = static_cast<int>(in.rho.rows());
  const int de = static_cast<int>(in.env_populations.size());
  const long long total = static_cast<long long>(dim_a) * dim_e;
  if (total > 4096) throw Error(ErrorKind::ResourceError, "joint state too large to materialise");
  CMatrix out = CMatrix::Zero(total, total);
  for (int m = 0; m < de; ++m) {
    const double p = in.env_populations(m);
    if (p == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      const auto ci = in.coupling.column(i, m);
      for (int j = 0; j < d; ++j) {
        const cplx w = p * in.rho(i, j);
        if (w == 0.0) continue;
        const auto cj = in.coupling.column(j, m);
        for (int k = 0; k < ci.len; ++k) {
          const int x = ci.x0 + ci.dx * k, y = ci.y0 + ci.dy * k;
          if (x >= dim_a || y >= dim_e) continue;
          for (int kk = 0; kk < cj.len; ++kk) {
            const int xx = cj.x0 + cj.dx * kk, yy = cj.y0 + cj.dy * kk;
            if (xx >= dim_a || yy >= dim_e) continue;
            out(x * dim_e + y, xx * dim_e + yy) += w * (ci.amp[k] * cj.amp[kk]);
          }
        }
      }
    }
  }
  return out;
}

std::optional<double> joint_entropy_via_gram(const DilationInput& in, int max_dim) {
  check_input(in);
  const int d = static_cast<int>(in.rho.rows());
  // Purify ρ through its eigenvectors: W = V √λ keeps only the support.
  HermitianEigen es = eigh(in.rho);
  std::vector<int> keep;
  for (int k = 0; k < d; ++k)
    if (es.values(k) > kGramFloor) keep.push_back(k);
  const int rank = static_cast<int>(keep.size());
  CMatrix w(d, rank);
  for (int c = 0; c < rank; ++c) w.col(c) = es.vectors.col(keep[c]) * std::sqrt(es.values(keep[c]));

  std::vector<int> env;
  for (int m = 0; m < in.env_populations.size(); ++m)
    if (in.env_populations(m) > kGramFloor) env.push_back(m);
  const int ne = static_cast<int>(env.size());
  if (rank * ne > max_dim) return std::nullopt;

  // G[(k,m),(l,m')] = √(p_m p_m') Σ_{x,y} conj(W_xk) ⟨x,m|U†U|y,m'⟩ W_yl.
  CMatrix gram = CMatrix::Zero(rank * ne, rank * ne);
  RMatrix overlap(d, d);
  for (int a = 0; a < ne; ++a) {
    for (int b = a; b < ne; ++b) {
      const int m = env[a], mp = env[b];
      overlap.setZero();
      bool any = false;
      for (int x = 0; x < d; ++x) {
        const auto cx = in.coupling.column(x, m);
        for (int y = 0; y < d; ++y) {
          const auto cy = in.coupling.column(y, mp);
          if (cx.sector != cy.sector) continue;
          double s = 0.0;
          for (int k = 0; k < cx.len; ++k) s += cx.amp[k] * cy.amp[k];
          overlap(x, y) = s;
          any = true;
        }
      }
      if (!any) continue;
      const double scale = std::sqrt(in.env_populations(m) * in.env_populations(mp));
      CMatrix blk = scale * (w.adjoint() * overlap.cast<cplx>() * w);
      gram.block(a * rank, b * rank, rank, rank) = blk;
      if (a != b) gram.block(b * rank, a * rank, rank, rank) = blk.adjoint();
    }
  }
  return von_neumann_entropy(gram);
}

}  // namespace gmoe
