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

#include "gmoe/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/laguerre.hpp>

#include "displacement_table.hpp"
#include "gmoe/dilation.hpp"
#include "gmoe/error.hpp"

namespace gmoe {

namespace {

constexpr double kDefaultGridStep = 0.08;
constexpr double kDroppedMass = 1e-13;
constexpr double kTraceRounding = 1e-14;
constexpr double kB1HalfWidth = 6.5;

int default_env_cutoff(double n) { return std::max(2, gibbs_cutoff(n, 1e-14)); }

RVector env_populations(double n, int d_env) {
  return gibbs_state(n, d_env).matrix().diagonal().real();
}

DensityOperator normalised(CMatrix m, double* defect = nullptr) {
  const double tr = m.trace().real();
  if (defect) *defect = 1.0 - tr;
  if (!(tr > 0)) throw Error(ErrorKind::InvalidState, "channel output has no weight");
  m /= tr;
  return DensityOperator(std::move(m));
}


// Squeezer truncation large enough that the top two levels of every used
// column carry less than 1e−20.
SectorCoupling build_squeezer(double gain, int d_in, int d_env) {
  const int base = std::max(d_in, d_env);
  if (gain == 1.0) return SectorCoupling::two_mode_squeezer(gain, base + 1, d_in, d_env);
  // Fock inputs |i,m⟩ spread to width ~ √(2g(g−1)(i+1)(m+1)) about (g−1)(i+m+1).
  const double mean = (gain - 1.0) * (d_in + d_env);
  const double width = std::sqrt(2.0 * gain * (gain - 1.0) * (d_in + 1.0) * (d_env + 1.0));
  int level = base + static_cast<int>(std::ceil(mean + 4.0 * width + 20.0));
  for (int attempt = 0; attempt < 12; ++attempt) {
    SectorCoupling c = SectorCoupling::two_mode_squeezer(gain, level, d_in, d_env);
    if (c.boundary_mass() < 1e-20) return c;
    level = static_cast<int>(level * 1.15) + 4;
  }
  throw Error(ErrorKind::ResourceError, "squeezer truncation did not converge");
}

// Gauss–Laguerre rule for weight e^{−v}: Golub–Welsch nodes refined by
// Newton, weights from v / ((n+1)² L_{n+1}(v)²) for full relative accuracy.
void gauss_laguerre(int n, RVector& nodes, RVector& log_weights) {
  RVector diag(n), off(n - 1);
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) off(k - 1) = k;
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  nodes = es.eigenvalues();
  log_weights.resize(n);
  using boost::math::laguerre;
  for (int k = 0; k < n; ++k) {
    double v = nodes(k);
    for (int it = 0; it < 3; ++it) {
      // L_n'(v) = n (L_n(v) − L_{n−1}(v)) / v
      const double ln = laguerre(n, v), lm = laguerre(n - 1, v);
      const double deriv = n * (ln - lm) / v;
      if (deriv != 0.0) v -= ln / deriv;
    }
    nodes(k) = v;
    const double l1 = laguerre(n + 1, v);
    log_weights(k) = std::log(v) - 2.0 * std::log(n + 1.0) - 2.0 * std::log(std::abs(l1));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Kernels

struct FockChannel::Kernel {
  virtual ~Kernel() = default;
  virtual CMatrix apply(const CMatrix& rho) const = 0;
  // x is out_dim × out_dim; the result is in_dim × in_dim.
  virtual CMatrix adjoint(const CMatrix& x, int in_dim) const = 0;
  int out_dim = 0;  // untrimmed output cutoff of apply()
  int env_cutoff = 0;
  double boundary_mass = 0.0;
};

namespace {

struct IdentityKernel final : FockChannel::Kernel {
  CMatrix apply(const CMatrix& rho) const override { return rho; }
  CMatrix adjoint(const CMatrix& x, int) const override { return x; }
};

struct ConstantKernel final : FockChannel::Kernel {
  CMatrix state;
  CMatrix apply(const CMatrix& rho) const override { return state * rho.trace(); }
  CMatrix adjoint(const CMatrix& x, int in_dim) const override {
    return (x.cwiseProduct(state.transpose())).sum() * CMatrix::Identity(in_dim, in_dim);
  }
};

struct DilationKernel final : FockChannel::Kernel {
  SectorCoupling coupling;
  RVector pops;
  bool environment_side = false;

  CMatrix apply(const CMatrix& rho) const override {
    DilationInput in{rho, pops, coupling};
    return environment_side ? reduce_to_environment(in, out_dim) : reduce_to_system(in, out_dim);
  }
  CMatrix adjoint(const CMatrix& x, int in_dim) const override {
    return environment_side ? reduce_to_environment_adjoint(x, pops, coupling, in_dim)
                            : reduce_to_system_adjoint(x, pops, coupling, in_dim);
  }
};

// Σ_k c_k ⟨D(r_k e^{iφ}) ρ D†⟩_φ. The phase average keeps only the terms
// with k − l = m − n.
struct PhaseAveragedKernel final : FockChannel::Kernel {
  std::vector<RMatrix> blocks;  // D(r_k), out_dim × d
  std::vector<double> weights;

  CMatrix apply(const CMatrix& rho) const override {
    const int d = static_cast<int>(rho.rows());
    CMatrix out = CMatrix::Zero(out_dim, out_dim);
    for (std::size_t q = 0; q < blocks.size(); ++q) {
      const RMatrix& b = blocks[q];
      const double c = weights[q];
      for (int delta = -(d - 1); delta <= d - 1; ++delta) {
        const int k0 = std::max(0, delta);
        const int k1 = std::min(d, d + delta);
        for (int m = std::max(0, delta); m < out_dim && m - delta < out_dim; ++m) {
          const int n = m - delta;
          cplx s = 0.0;
          for (int k = k0; k < k1; ++k) s += b(m, k) * rho(k, k - delta) * b(n, k - delta);
          out(m, n) += c * s;
        }
      }
    }
    return out;
  }

  CMatrix adjoint(const CMatrix& x, int d) const override {
    CMatrix out = CMatrix::Zero(d, d);
    for (std::size_t q = 0; q < blocks.size(); ++q) {
      const RMatrix& b = blocks[q];
      const double c = weights[q];
      for (int delta = -(d - 1); delta <= d - 1; ++delta) {
        const int k0 = std::max(0, delta);
        const int k1 = std::min(d, d + delta);
        for (int m = std::max(0, delta); m < out_dim && m - delta < out_dim; ++m) {
          const int n = m - delta;
          const cplx xv = c * x(n, m);
          for (int k = k0; k < k1; ++k) out(k - delta, k) += xv * (b(m, k) * b(n, k - delta));
        }
      }
    }
    return out;
  }
};

// Σ_x c_x D(−x/√2) A D(−x/√2)ᵀ on a uniform grid. For A2, A is the thermal
// environment and c_x = h⟨x|ρ|x⟩; for B1, A = ρ and c_x is the kernel.
struct ShiftKernel final : FockChannel::Kernel {
  bool measure = false;  // A2 when true
  std::vector<double> grid;
  std::vector<double> trap;  // trapezoid weights
  std::vector<RMatrix> blocks;
  RMatrix hermite;                 // A2: ψ_n(x_j), grid × d
  std::vector<RMatrix> prepared;   // A2: D ρ_E Dᵀ when cached
  RVector env;                     // A2: environment populations
  std::vector<double> kernel;      // B1: kernel values

  RVector grid_weights(const CMatrix& rho) const {
    RVector c(grid.size());
    if (!measure) {
      for (std::size_t j = 0; j < grid.size(); ++j) c(j) = trap[j] * kernel[j];
      return c;
    }
    const RMatrix re = rho.real();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto psi = hermite.row(j);
      c(j) = trap[j] * (psi * re * psi.transpose()).value();
    }
    return c;
  }

  CMatrix apply(const CMatrix& rho) const override {
    const RVector c = grid_weights(rho);
    if (measure) {
      RMatrix out = RMatrix::Zero(out_dim, out_dim);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (c(j) == 0.0) continue;
        if (!prepared.empty()) {
          out += c(j) * prepared[j];
        } else {
          out.noalias() += c(j) * (blocks[j] * env.asDiagonal() * blocks[j].transpose());
        }
      }
      return out.cast<cplx>();
    }
    const RMatrix re = rho.real(), im = rho.imag();
    RMatrix out_re = RMatrix::Zero(out_dim, out_dim), out_im = RMatrix::Zero(out_dim, out_dim);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (c(j) == 0.0) continue;
      const RMatrix& b = blocks[j];
      out_re.noalias() += c(j) * (b * re * b.transpose());
      out_im.noalias() += c(j) * (b * im * b.transpose());
    }
    CMatrix out(out_dim, out_dim);
    out.real() = out_re;
    out.imag() = out_im;
    return out;
  }

  CMatrix adjoint(const CMatrix& x, int d) const override {
    const RMatrix re = x.real(), im = x.imag();
    if (measure) {
      // Σ_x h·Tr[X P_x]·|x⟩⟨x| in the Fock basis of the input.
      RMatrix out = RMatrix::Zero(d, d);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (trap[j] == 0.0) continue;
        const RMatrix p = prepared.empty() ? RMatrix(blocks[j] * env.asDiagonal() * blocks[j].transpose())
                                           : prepared[j];
        const double w = trap[j] * re.cwiseProduct(p).sum();
        const auto psi = hermite.row(j);
        out.noalias() += w * (psi.transpose() * psi);
      }
      return out.cast<cplx>();
    }
    RMatrix out_re = RMatrix::Zero(d, d), out_im = RMatrix::Zero(d, d);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double c = trap[j] * kernel[j];
      if (c == 0.0 || trap[j] == 0.0) continue;
      const RMatrix& b = blocks[j];
      out_re.noalias() += c * (b.transpose() * re * b);
      out_im.noalias() += c * (b.transpose() * im * b);
    }
    CMatrix out(d, d);
    out.real() = out_re;
    out.imag() = out_im;
    return out;
  }
};

std::shared_ptr<FockChannel::Kernel> make_dilation(const ChannelSpec& ch, int d, const ChannelOptions& o) {
  auto k = std::make_shared<DilationKernel>();
  const int de = o.env_cutoff > 0 ? o.env_cutoff : default_env_cutoff(ch.N);
  k->pops = env_populations(ch.N, de);
  k->env_cutoff = de;
  if (ch.cls == ChannelClass::C_att) {
    k->coupling = SectorCoupling::beam_splitter(ch.eta, d + de - 2);
    k->out_dim = d + de - 1;
  } else {
    const double gain = ch.cls == ChannelClass::C_amp ? ch.kappa2 : 1.0 + ch.kappa2;
    k->coupling = build_squeezer(gain, d, de);
    k->environment_side = ch.cls == ChannelClass::D;
    k->out_dim = k->coupling.output_dim_a();
    k->boundary_mass = k->coupling.boundary_mass();
  }
  return k;
}

std::shared_ptr<FockChannel::Kernel> make_b2(double t, int d, int nodes_override, int out_override) {
  auto k = std::make_shared<PhaseAveragedKernel>();
  int out = out_override > 0 ? out_override
                             : d + gibbs_cutoff(t, 1e-16) +
                                   static_cast<int>(std::ceil(6.0 * std::sqrt(t * d)));
  const int n = nodes_override > 0 ? nodes_override : (out + d + 1) / 2 + 2;
  RVector v, logw;
  gauss_laguerre(n, v, logw);
  // ∫e^{−u}f(u)du with f = e^{−tu}·polynomial: substitute v = (1+t)u.
  std::vector<double> radii;
  for (int q = 0; q < n; ++q) {
    const double u = v(q) / (1.0 + t);
    const double logc = logw(q) + t * u - std::log1p(t);
    if (logc < std::log(1e-18)) continue;
    radii.push_back(std::sqrt(t * u));
    k->weights.push_back(std::exp(logc));
  }
  const double r_max = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  detail::DisplacementTable table(detail::DisplacementTable::suggested_dim(r_max, out, d));
  for (double r : radii) k->blocks.push_back(table.block(r, out, d));
  k->out_dim = out;
  return k;
}

// Rough upper photon level reached by shifting a state of the given
// photon statistics by r, weighted by how much the shift matters.
double shift_reach(double r, double weight, double mean, double spread) {
  if (weight <= 1e-17) return 0.0;
  const double z = std::sqrt(2.0 * std::log(weight / 1e-17));
  const double centre = r * r + mean;
  const double sigma = std::sqrt(r * r * (2.0 * spread + 1.0) + spread * (spread + 1.0));
  return centre + 1.5 * z * sigma + 10.0;
}

std::shared_ptr<ShiftKernel> make_shift(const ChannelSpec& ch, int d, const ChannelOptions& o,
                                        std::span<const double> grid_override, int out_override) {
  auto k = std::make_shared<ShiftKernel>();
  k->measure = ch.cls == ChannelClass::A2;
  double h = o.grid_step > 0 ? o.grid_step : kDefaultGridStep;
  if (!grid_override.empty()) {
    k->grid.assign(grid_override.begin(), grid_override.end());
    if (k->grid.size() < 3) throw Error(ErrorKind::GridError, "grid needs at least 3 points");
    h = k->grid[1] - k->grid[0];
  } else {
    const double half = k->measure ? std::sqrt(2.0 * d + 1.0) + 8.0 : kB1HalfWidth;
    const int points = 2 * static_cast<int>(std::ceil(half / h)) + 1;
    k->grid = uniform_grid(half, points);
    h = k->grid[1] - k->grid[0];
  }
  const int nx = static_cast<int>(k->grid.size());
  k->trap.assign(nx, h);
  k->trap.front() = k->trap.back() = 0.5 * h;

  int cols = d;
  double mean = 0.0, spread = 0.0;
  if (k->measure) {
    cols = default_env_cutoff(ch.N);
    if (o.env_cutoff > 0) cols = o.env_cutoff;
    k->env = env_populations(ch.N, cols);
    k->env_cutoff = cols;
    mean = spread = ch.N;
    k->hermite.resize(nx, d);
    for (int j = 0; j < nx; ++j) k->hermite.row(j) = hermite_functions(k->grid[j], d).transpose();
  } else {
    k->kernel.resize(nx);
    for (int j = 0; j < nx; ++j)
      k->kernel[j] = std::exp(-k->grid[j] * k->grid[j]) / std::sqrt(std::numbers::pi);
    mean = d - 1.0;
    spread = d - 1.0;
  }

  // Output cutoff from a weighted reach estimate; x-points whose weight
  // bound is negligible are dropped altogether.
  std::vector<char> keep(nx, 0);
  double reach = 0.0, r_max = 0.0;
  for (int j = 0; j < nx; ++j) {
    const double x = k->grid[j];
    double bound;
    if (k->measure) {
      bound = k->trap[j] * k->hermite.row(j).squaredNorm();
    } else {
      bound = k->trap[j] * k->kernel[j];
    }
    if (bound < 1e-20) continue;
    keep[j] = 1;
    const double r = std::abs(x) / std::sqrt(2.0);
    r_max = std::max(r_max, r);
    reach = std::max(reach, shift_reach(r, bound, mean, spread));
  }
  int out = out_override > 0 ? out_override : std::max(d, static_cast<int>(std::ceil(reach)));
  detail::DisplacementTable table(detail::DisplacementTable::suggested_dim(r_max, out, cols));
  k->blocks.resize(nx);
  for (int j = 0; j < nx; ++j) {
    if (!keep[j]) {
      k->trap[j] = 0.0;
      continue;
    }
    k->blocks[j] = table.block(-k->grid[j] / std::sqrt(2.0), out, cols);
  }
  k->out_dim = out;
  if (k->measure && static_cast<double>(nx) * out * out < 1.5e7) {
    k->prepared.resize(nx);
    for (int j = 0; j < nx; ++j)
      if (keep[j]) k->prepared[j] = k->blocks[j] * k->env.asDiagonal() * k->blocks[j].transpose();
  }
  return k;
}

std::shared_ptr<FockChannel::Kernel> make_kernel(const ChannelSpec& ch, int d, const ChannelOptions& o,
                                                 int out_override) {
  switch (ch.cls) {
    case ChannelClass::C_att:
    case ChannelClass::C_amp:
    case ChannelClass::D:
      return make_dilation(ch, d, o);
    case ChannelClass::B2: {
      if (ch.t == 0.0) {
        auto k = std::make_shared<IdentityKernel>();
        k->out_dim = d;
        return k;
      }
      return make_b2(ch.t, d, 0, out_override);
    }
    case ChannelClass::A1: {
      auto k = std::make_shared<ConstantKernel>();
      const int out = std::max(d, default_env_cutoff(ch.N));
      k->state = gibbs_state(ch.N, out).matrix();
      k->out_dim = out;
      k->env_cutoff = out;
      return k;
    }
    case ChannelClass::A2:
    case ChannelClass::B1:
      return make_shift(ch, d, o, {}, out_override);
  }
  throw Error(ErrorKind::SpecError, "unknown channel class");
}

}  // namespace

// ---------------------------------------------------------------------------
// FockChannel

FockChannel::FockChannel(const ChannelSpec& spec, int input_dim, const ChannelOptions& opts)
    : spec_(spec), input_dim_(input_dim) {
  spec_.validate();
  if (input_dim < 2) throw Error(ErrorKind::InvalidDimension, "input cutoff must be >= 2");
  int out_override = 0;
  const CMatrix mixed = CMatrix::Identity(input_dim, input_dim) / static_cast<double>(input_dim);
  for (int attempt = 0;; ++attempt) {
    std::shared_ptr<Kernel> kernel = make_kernel(spec_, input_dim, opts, out_override);
    const CMatrix probe = kernel->apply(mixed);
    const double defect = 1.0 - probe.trace().real();
    // The trace is only known to rounding, hence the absolute floor.
    const bool converged = input_dim * defect <= kDroppedMass || defect <= kTraceRounding;
    if (converged || attempt == 4) {
      if (!converged)
        throw Error(ErrorKind::CutoffTooSmall,
                    "channel output keeps losing population (" + std::to_string(defect) + ")");
      // Keep the levels the maximally mixed input populates.
      int keep = static_cast<int>(probe.rows());
      double tail = std::max(defect, 0.0);
      while (keep > input_dim && input_dim * (tail + probe(keep - 1, keep - 1).real()) < kDroppedMass) {
        tail += probe(keep - 1, keep - 1).real();
        --keep;
      }
      output_dim_ = keep;
      // Rebuild at the trimmed size so apply() skips levels it would drop.
      if (keep < kernel->out_dim) {
        switch (spec_.cls) {
          case ChannelClass::B2:
          case ChannelClass::A2:
          case ChannelClass::B1:
            if (spec_.cls != ChannelClass::B2 || spec_.t > 0.0) kernel = make_kernel(spec_, input_dim, opts, keep);
            break;
          case ChannelClass::C_att:
          case ChannelClass::C_amp:
          case ChannelClass::D:
            kernel->out_dim = keep;
            break;
          default:
            break;
        }
      }
      kernel_ = kernel;
      break;
    }
    out_override = static_cast<int>(kernel->out_dim * 1.4) + 8;
  }
}

const ChannelSpec& FockChannel::spec() const { return spec_; }
int FockChannel::input_dim() const { return input_dim_; }
int FockChannel::output_dim() const { return output_dim_; }
int FockChannel::env_cutoff() const { return kernel_->env_cutoff; }
double FockChannel::boundary_mass() const { return kernel_->boundary_mass; }

CMatrix FockChannel::apply(const CMatrix& rho) const {
  if (rho.rows() != input_dim_ || rho.cols() != input_dim_)
    throw Error(ErrorKind::ShapeError, "input cutoff " + std::to_string(rho.rows()) +
                                           " does not match channel cutoff " + std::to_string(input_dim_));
  CMatrix full = kernel_->apply(rho);
  if (full.rows() == output_dim_) return full;
  return full.topLeftCorner(output_dim_, output_dim_);
}

CMatrix FockChannel::adjoint(const CMatrix& x) const {
  if (x.rows() != output_dim_ || x.cols() != output_dim_)
    throw Error(ErrorKind::ShapeError, "adjoint expects an operator on the " + std::to_string(output_dim_) +
                                           " output levels");
  if (kernel_->out_dim == output_dim_) return kernel_->adjoint(x, input_dim_);
  CMatrix padded = CMatrix::Zero(kernel_->out_dim, kernel_->out_dim);
  padded.topLeftCorner(output_dim_, output_dim_) = x;
  return kernel_->adjoint(padded, input_dim_);
}

DensityOperator FockChannel::operator()(const DensityOperator& rho) const {
  double defect = 0.0;
  DensityOperator out = normalised(apply(rho.matrix()), &defect);
  if (std::abs(defect) > tol::kTailFailure)
    throw Error(ErrorKind::GridError, "channel trace defect " + std::to_string(defect));
  return out;
}

// ---------------------------------------------------------------------------
// Free functions

CMatrix trim_cutoff(const CMatrix& rho, int min_dim, double mass) {
  int keep = static_cast<int>(rho.rows());
  double tail = 0.0;
  while (keep > std::max(min_dim, 2) && tail + rho(keep - 1, keep - 1).real() < mass) {
    tail += rho(keep - 1, keep - 1).real();
    --keep;
  }
  return rho.topLeftCorner(keep, keep);
}

MultiModeOperator beam_splitter_unitary(double eta, int d_sys, int d_env) {
  if (d_sys < 1 || d_env < 1) throw Error(ErrorKind::InvalidDimension, "cutoffs must be positive");
  SectorCoupling c = SectorCoupling::beam_splitter(eta, d_sys + d_env - 2);
  const int dim = d_sys * d_env;
  CMatrix u = CMatrix::Zero(dim, dim);
  for (int i = 0; i < d_sys; ++i)
    for (int m = 0; m < d_env; ++m) {
      const auto col = c.column(i, m);
      for (int k = 0; k < col.len; ++k) {
        const int x = col.x0 + col.dx * k, y = col.y0 + col.dy * k;
        if (x < d_sys && y < d_env) u(x * d_env + y, i * d_env + m) = col.amp[k];
      }
    }
  return {{d_sys, d_env}, u};
}

namespace {

DilationResult run_dilation(const DensityOperator& rho, const SectorCoupling& coupling, double n,
                            int de, bool with_joint, int witness_max_dim = 1600) {
  const RVector pops = env_populations(n, de);
  DilationInput in{rho.matrix(), pops, coupling};
  const int d = rho.dim();
  CMatrix a = reduce_to_system(in, coupling.output_dim_a());
  CMatrix e = reduce_to_environment(in, coupling.output_dim_e());
  DilationResult r{std::nullopt,
                   normalised(trim_cutoff(a, d)),
                   normalised(trim_cutoff(e, de)),
                   witness_max_dim > 0 ? joint_entropy_via_gram(in, witness_max_dim) : std::nullopt,
                   von_neumann_entropy(rho) + shannon_entropy(pops),
                   coupling.unitarity_defect(),
                   coupling.boundary_mass(),
                   de};
  if (with_joint) {
    const int da = coupling.output_dim_a(), dE = coupling.output_dim_e();
    r.joint = MultiModeOperator{{da, dE}, joint_state(in, da, dE)};
  }
  return r;
}

int resolve_env(double n, int d_env) {
  if (d_env <= 0) return default_env_cutoff(n);
  gibbs_state(n, d_env);  // throws cutoff-too-small on an inadequate environment
  return d_env;
}

}  // namespace

DilationResult apply_attenuator(const DensityOperator& rho, double eta, double N, const DilationOptions& opts) {
  ChannelSpec::attenuator(eta, N);
  const int de = resolve_env(N, opts.env_cutoff);
  return run_dilation(rho, SectorCoupling::beam_splitter(eta, rho.dim() + de - 2), N, de, opts.with_joint,
                      opts.witness_max_dim);
}

DilationResult apply_attenuator(const DensityOperator& rho, double eta, double N, int d_env, bool with_joint) {
  return apply_attenuator(rho, eta, N, DilationOptions{d_env, with_joint});
}

DensityOperator weak_complementary_attenuator(const DensityOperator& rho, double eta, double N, int d_env) {
  ChannelSpec::attenuator(eta, N);
  const int de = resolve_env(N, d_env);
  const RVector pops = env_populations(N, de);
  SectorCoupling c = SectorCoupling::beam_splitter(eta, rho.dim() + de - 2);
  DilationInput in{rho.matrix(), pops, c};
  return normalised(trim_cutoff(reduce_to_environment(in, c.output_dim_e()), de));
}

DilationResult apply_amplifier(const DensityOperator& rho, double kappa2, double N, int d_env, bool with_joint) {
  ChannelSpec::amplifier(kappa2, N);
  const int de = resolve_env(N, d_env);
  return run_dilation(rho, build_squeezer(kappa2, rho.dim(), de), N, de, with_joint);
}

DensityOperator apply_class_D(const DensityOperator& rho, double kappa2, double N, int d_env) {
  ChannelSpec::class_d(kappa2, N);
  const int de = resolve_env(N, d_env);
  const RVector pops = env_populations(N, de);
  SectorCoupling c = build_squeezer(1.0 + kappa2, rho.dim(), de);
  DilationInput in{rho.matrix(), pops, c};
  return normalised(trim_cutoff(reduce_to_environment(in, c.output_dim_e()), 2));
}

DensityOperator apply_B2(const DensityOperator& rho, double t, const QuadratureSpec& q) {
  ChannelSpec::b2(t);
  if (t == 0.0) return rho;
  auto k = make_b2(t, rho.dim(), q.radial_nodes, q.output_cutoff);
  double defect = 0.0;
  CMatrix out = k->apply(rho.matrix());
  DensityOperator r = normalised(trim_cutoff(out, rho.dim()), nullptr);
  defect = 1.0 - out.trace().real();
  if (std::abs(defect) > tol::kTailFailure)
    throw Error(ErrorKind::GridError, "B2 quadrature trace defect " + std::to_string(defect) +
                                          "; raise the output cutoff or the node count");
  return r;
}

DensityOperator apply_A1(const DensityOperator& rho, double N) {
  ChannelSpec::a1(N);
  return gibbs_state(N, std::max(rho.dim(), default_env_cutoff(N)));
}

namespace {

DensityOperator apply_shift(const DensityOperator& rho, const ChannelSpec& ch, std::span<const double> x_grid) {
  std::vector<double> grid(x_grid.begin(), x_grid.end());
  if (grid.empty()) {
    if (ch.cls == ChannelClass::A2) {
      const double half = position_grid_half_width(rho.matrix());
      grid = uniform_grid(half, 2 * static_cast<int>(std::ceil(half / kDefaultGridStep)) + 1);
    } else {
      grid = uniform_grid(kB1HalfWidth, 2 * static_cast<int>(std::ceil(kB1HalfWidth / kDefaultGridStep)) + 1);
    }
  }
  if (ch.cls == ChannelClass::A2) {
    position_distribution(rho, grid);  // coverage and uniformity checks
  } else {
    if (grid.size() < 3) throw Error(ErrorKind::GridError, "grid needs at least 3 points");
    const double edge = std::max(std::exp(-grid.front() * grid.front()), std::exp(-grid.back() * grid.back()));
    if (edge / std::sqrt(std::numbers::pi) > 1e-8)
      throw Error(ErrorKind::GridError, "B1 kernel is not negligible at the grid edge");
  }
  int out_override = 0;
  for (int attempt = 0; attempt < 5; ++attempt) {
    auto k = make_shift(ch, rho.dim(), {}, grid, out_override);
    CMatrix out = k->apply(rho.matrix());
    const double defect = 1.0 - out.trace().real();
    if (std::abs(defect) <= 1e-12 || attempt == 4) {
      if (std::abs(defect) > tol::kTailFailure)
        throw Error(ErrorKind::GridError, "shift quadrature trace defect " + std::to_string(defect));
      return normalised(trim_cutoff(out, rho.dim()));
    }
    out_override = static_cast<int>(k->out_dim * 1.4) + 8;
  }
  throw Error(ErrorKind::GridError, "unreachable");
}

}  // namespace

DensityOperator apply_A2(const DensityOperator& rho, double N, std::span<const double> x_grid) {
  return apply_shift(rho, ChannelSpec::a2(N), x_grid);
}

DensityOperator apply_B1(const DensityOperator& rho, std::span<const double> x_grid) {
  return apply_shift(rho, ChannelSpec::b1(), x_grid);
}

ChannelOutput apply_channel(const DensityOperator& rho, const ChannelSpec& ch, const ChannelOptions& opts) {
  ch.validate();
  switch (ch.cls) {
    case ChannelClass::A2:
    case ChannelClass::B1: {
      ChannelSpec spec = ch;
      // Honour a caller grid step through a freshly built grid.
      if (opts.grid_step > 0) {
        const double half = ch.cls == ChannelClass::A2 ? position_grid_half_width(rho.matrix()) : kB1HalfWidth;
        auto grid = uniform_grid(half, 2 * static_cast<int>(std::ceil(half / opts.grid_step)) + 1);
        return {apply_shift(rho, spec, grid), 0.0, ch.cls == ChannelClass::A2 ? default_env_cutoff(ch.N) : 0, 0.0};
      }
      return {apply_shift(rho, spec, {}), 0.0, ch.cls == ChannelClass::A2 ? default_env_cutoff(ch.N) : 0, 0.0};
    }
    default:
      break;
  }
  auto k = make_kernel(ch, rho.dim(), opts, 0);
  CMatrix out = k->apply(rho.matrix());
  const double defect = 1.0 - out.trace().real();
  if (std::abs(defect) > tol::kTailFailure)
    throw Error(ErrorKind::CutoffTooSmall, "channel trace defect " + std::to_string(defect));
  return {normalised(trim_cutoff(out, rho.dim())), defect, k->env_cutoff, k->boundary_mass};
}

cplx predicted_characteristic(const DensityOperator& rho, const ChannelSpec& ch, cplx mu) {
  const double a2 = std::norm(mu);
  switch (ch.cls) {
    case ChannelClass::C_att:
      return characteristic_function(rho, std::sqrt(ch.eta) * mu) *
             std::exp(-(1.0 - ch.eta) * (ch.N + 0.5) * a2);
    case ChannelClass::C_amp:
      return characteristic_function(rho, std::sqrt(ch.kappa2) * mu) *
             std::exp(-(ch.kappa2 - 1.0) * (ch.N + 0.5) * a2);
    case ChannelClass::B2:
      return characteristic_function(rho, mu) * std::exp(-ch.t * a2);
    case ChannelClass::A1:
      return std::exp(-(ch.N + 0.5) * a2);
    case ChannelClass::A2:
      return characteristic_function(rho, cplx(0.0, -mu.imag())) * std::exp(-(ch.N + 0.5) * a2);
    case ChannelClass::B1:
      return characteristic_function(rho, mu) * std::exp(-0.5 * mu.imag() * mu.imag());
    case ChannelClass::D:
      break;
  }
  throw Error(ErrorKind::SpecError, "no characteristic-function relation for " + std::string(to_string(ch.cls)));
}

double verify_char_relation(const DensityOperator& rho, const ChannelSpec& ch, std::span<const cplx> mu_grid) {
  ch.validate();
  if (ch.cls == ChannelClass::D)
    throw Error(ErrorKind::SpecError, "no characteristic-function relation for class D");
  const DensityOperator out = apply_channel(rho, ch).state;
  double worst = 0.0;
  for (cplx mu : mu_grid)
    worst = std::max(worst, std::abs(characteristic_function(out, mu) - predicted_characteristic(rho, ch, mu)));
  return worst;
}

}  // namespace gmoe
