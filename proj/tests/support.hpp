// Copyright 2026 The otm-sdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "otm/linalg.hpp"
#include "otm/rng.hpp"

namespace otm::testing {

using linalg::ComplexMatrix;
using linalg::cplx;

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, CounterRng& rng) {
  ComplexMatrix m(r, c);
  for (auto& v : m.data()) v = cplx(rng.normal(), rng.normal());
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t dim, CounterRng& rng) {
  const ComplexMatrix a = random_matrix(dim, dim, rng);
  ComplexMatrix h = a;
  h += a.adjoint();
  h *= 0.5;
  return h;
}

inline ComplexMatrix random_psd(std::size_t dim, CounterRng& rng) {
  const ComplexMatrix a = random_matrix(dim, dim, rng);
  return a * a.adjoint();
}

}  // namespace otm::testing
