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


// One honest run of the protocol, step by step, plus the partition of all
// queries that the token induces for the drawn key.

#include <iostream>

#include "otm/protocol.hpp"

int main() {
  using namespace otm;
  CounterRng rng(7, 0);
  const std::size_t n = 3;
  const std::uint8_t s0 = 1, s1 = 0;

  auto [key, qkey] = protocol::keygen(n, rng);
  std::cout << "secret key z     " << protocol::to_string(key.bits()) << "\n";
  const protocol::Token token(key, s0, s1);

  for (std::uint8_t b = 0; b < 2; ++b) {
    const auto y = protocol::honest_measure(qkey, b, rng);
    const auto r = token.respond({b, y});
    std::cout << "b=" << int(b) << "  measured y=" << protocol::to_string(y) << "  token says "
              << protocol::symbol_name(r.symbol) << " payload " << int(r.payload) << "\n";
  }

  const auto p = protocol::partition_sets(key);
  std::cout << "accepting queries: " << p.acc0.size() << " for b=0, " << p.acc1.size()
            << " for b=1; rejecting: " << p.rej0.size() << " + " << p.rej1.size() << "\n";
  return 0;
}
