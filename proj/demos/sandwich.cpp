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


// Brackets the optimal cheating probability at (n=1, m=2) from three sides:
// an explicit attack from below, the uniform dual from below, and the
// solved primal SDP.

#include <cstdio>

#include "otm/adversary.hpp"
#include "otm/gw_sdp.hpp"
#include "otm/sdp/solver.hpp"

int main() {
  using namespace otm;
  const std::size_t n = 1, m = 2;

  const auto attack = adversary::breidbart_attack(n, 1, 0, 100000, 2026, 1);
  const auto beta = gw::beta(n, m);
  const auto sol = sdp::solve(gw::build_primal_instance(n, m));

  std::printf("breidbart attack   %.4f +- %.4f (monte-carlo)\n", attack.rate(), attack.standard_error());
  std::printf("uniform dual beta  %s = %.4f (exact)\n", beta.str().c_str(), beta.to_double());
  std::printf("primal SDP         %.4f (%s, %zu iterations)\n", sol.objective,
              sdp::status_name(sol.status).c_str(), sol.iterations);
  std::printf("trivial bound      1\n");
  return sol.status == sdp::Status::kOptimal ? 0 : 1;
}
