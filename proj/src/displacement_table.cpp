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

#include "displacement_table.hpp"

#include <algorithm>
#include <cmath>

#include "gmoe/error.hpp"

namespace gmoe::detail {

DisplacementTable::DisplacementTable(int working_dim) {
  if (working_dim < 2) throw Error(ErrorKind::InvalidDimension, "working dimension must be >= 2");
  RVector diag = RVector::Zero(working_dim);
  RVector off(working_dim - 1);
  for (int n = 0; n + 1 < working_dim; ++n) off(n) = std::sqrt(n + 1.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

RMatrix DisplacementTable::block(double r, int rows, int cols) const {
  const int w = working_dim();
  if (rows > w || cols > w) throw Error(ErrorKind::ShapeError, "block exceeds working dimension");
  RVector cs(w), sn(w);
  for (int j = 0; j < w; ++j) {
    cs(j) = std::cos(r * values_(j));
    sn(j) = std::sin(r * values_(j));
  }
  const auto vr = vectors_.topRows(rows);
  const auto vc = vectors_.topRows(cols);
  RMatrix c = vr * cs.asDiagonal() * vc.transpose();
  RMatrix s = vr * sn.asDiagonal() * vc.transpose();
  RMatrix out(rows, cols);
  for (int y = 0; y < cols; ++y)
    for (int x = 0; x < rows; ++x) {
      switch (((x - y) % 4 + 4) % 4) {
        case 0: out(x, y) = c(x, y); break;
        case 1: out(x, y) = s(x, y); break;
        case 2: out(x, y) = -c(x, y); break;
        default: out(x, y) = -s(x, y); break;
      }
    }
  return out;
}

int DisplacementTable::suggested_dim(double r_max, int rows, int cols) {
  const double reach = std::sqrt(static_cast<double>(cols)) + std::abs(r_max) + 7.0;
  return std::max(rows + 8, static_cast<int>(std::ceil(reach * reach)));
}

}  // namespace gmoe::detail
