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

#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace gmoe {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

struct HermitianEigen {
  RVector values;  // ascending
  CMatrix vectors;
};

/// Eigendecomposition of the Hermitian part of `m`.
HermitianEigen eigh(const CMatrix& m);

/// Applies a scalar function to the spectrum: V f(Λ) V†.
CMatrix apply_spectral(const HermitianEigen& eig,
                       const std::function<cplx(double)>& f);

/// exp(-i t H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& hermitian, double t = 1.0);

/// Largest |x| over the entries of (m - m†).
double hermiticity_defect(const CMatrix& m);

/// max |(U†U - 1)_{ij}| restricted to the leading `block` × `block` corner.
double unitarity_defect(const CMatrix& u, Eigen::Index block);

/// (1/2)‖a − b‖₁ for Hermitian arguments; the smaller one is zero padded.
double trace_distance(const CMatrix& a, const CMatrix& b);

/// Embeds `m` in the top-left corner of a `dim`×`dim` zero matrix, or keeps
/// the top-left `dim`×`dim` block when shrinking.
CMatrix resized(const CMatrix& m, Eigen::Index dim);

}  // namespace gmoe
