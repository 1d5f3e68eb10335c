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

#include "gmoe/linalg.hpp"

namespace gmoe::detail {

/// Blocks of D(r) = exp[r(a† − a)] for real r, all from one
/// eigendecomposition. The generator at r = 1 is conjugate (by diag(iⁿ)) to
/// the real symmetric tridiagonal T with off-diagonal √(n+1), so
///   D(r)_{xy} = Re[i^{x−y} Σ_j V_xj V_yj e^{−irλ_j}],
/// which splits into two real products C = V diag(cos rλ) Vᵀ and
/// S = V diag(sin rλ) Vᵀ selected by (x − y) mod 4.
class DisplacementTable {
 public:
  explicit DisplacementTable(int working_dim);

  int working_dim() const { return static_cast<int>(values_.size()); }

  /// Rows [0, rows) × columns [0, cols) of D(r).
  RMatrix block(double r, int rows, int cols) const;

  /// Working dimension that keeps a rows × cols block accurate for |r| ≤ r_max.
  static int suggested_dim(double r_max, int rows, int cols);

 private:
  RVector values_;
  RMatrix vectors_;
};

}  // namespace gmoe::detail
