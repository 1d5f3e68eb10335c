// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Exact ⟨m|D(μ)|n⟩ for m < rows, n < cols. Column 0 is the coherent state;
/// D|n+1⟩ = (a† − μ*) D|n⟩ / √(n+1) because D a† D† = a† − μ*.
inline CMatrix displacement_exact(cplx mu, int rows, int cols) {
  // Carried in long double: the recursion amplifies rounding for |μ| ≳ 2.
  using lc = std::complex<long double>;
  const lc m(mu.real(), mu.imag());
  CMatrix out(rows, cols);
  std::vector<lc> col(rows), next(rows);
  col[0] = std::exp(-0.5L * std::norm(m));
  for (int r = 1; r < rows; ++r) col[r] = col[r - 1] * m / std::sqrt(static_cast<long double>(r));
  for (int n = 0; n < cols; ++n) {
    for (int r = 0; r < rows; ++r) out(r, n) = cplx(static_cast<double>(col[r].real()), static_cast<double>(col[r].imag()));
    if (n + 1 == cols) break;
    for (int r = 0; r < rows; ++r) {
      lc raised = r > 0 ? std::sqrt(static_cast<long double>(r)) * col[r - 1] : lc(0.0L);
      next[r] = (raised - std::conj(m) * col[r]) / std::sqrt(n + 1.0L);
    }
    col.swap(next);
  }
  return out;
}

/// −Σ p ln p for a plain probability vector.
inline double shannon(const RVector& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0) s -= x * std::log(x);
  return s;
}

/// Closed-form g(N).
inline double g(double n) { return n == 0.0 ? 0.0 : (n + 1) * std::log(n + 1) - n * std::log(n); }

/// Geometric populations of a thermal state, not renormalised.
inline RVector thermal_populations(double n, int d) {
  RVector p(d);
  for (int k = 0; k < d; ++k) p(k) = std::pow(n / (n + 1), k) / (n + 1);
  return p;
}

/// Ginibre-ensemble random density matrix on `d` levels.
inline CMatrix random_density(int d, std::mt19937_64& rng, int rank = -1) {
  if (rank < 0) rank = d;
  std::normal_distribution<double> n01;
  CMatrix g(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = cplx(n01(rng), n01(rng));
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// Haar unitary from QR of a complex Gaussian matrix with phase fix.
inline CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = cplx(n01(rng), n01(rng));
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

/// Trapezoid rule on a uniform grid.
inline double trapezoid(const RVector& f, double h) {
  double s = 0.5 * (f(0) + f(f.size() - 1));
  for (Eigen::Index i = 1; i + 1 < f.size(); ++i) s += f(i);
  return s * h;
}

}  // namespace oracle
