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

#include "gmoe/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gmoe {

HermitianEigen eigh(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix apply_spectral(const HermitianEigen& eig,
                       const std::function<cplx(double)>& f) {
  CVector fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

CMatrix unitary_exp(const CMatrix& hermitian, double t) {
  return apply_spectral(eigh(hermitian),
                        [t](double x) { return std::exp(-kI * (t * x)); });
}

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u, Eigen::Index block) {
  block = std::min(block, u.cols());
  const CMatrix cols = u.leftCols(block);
  const CMatrix gram = cols.adjoint() * cols;
  return (gram - CMatrix::Identity(block, block)).cwiseAbs().maxCoeff();
}

CMatrix resized(const CMatrix& m, Eigen::Index dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  const Eigen::Index k = std::min(dim, m.rows());
  out.topLeftCorner(k, k) = m.topLeftCorner(k, k);
  return out;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index dim = std::max(a.rows(), b.rows());
  const CMatrix diff = resized(a, dim) - resized(b, dim);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (diff + diff.adjoint()),
                                                Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace gmoe
