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

/**
 * @file
 * Attack constructions against the token-based one-time memory and against
 * toy measure-and-access memories.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "otm/errors.hpp"
#include "otm/linalg.hpp"
#include "otm/protocol.hpp"
#include "otm/rng.hpp"

namespace otm::adversary {

using linalg::ComplexMatrix;
using linalg::cplx;
using protocol::Query;
using protocol::Symbol;

struct AttackStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // both secret bits recovered
  std::uint64_t queries = 0;    // token queries issued in total

  double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
  double standard_error() const {
    const double p = rate();
    return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
  }
};

inline double naive_analytic(std::size_t n) { return std::pow(0.75, static_cast<double>(n)); }

inline double breidbart_analytic(std::size_t n) {
  const double c = std::cos(std::numbers::pi / 8.0);
  return std::pow(c * c, static_cast<double>(n));
}

namespace detail {

inline void check_trials(std::size_t n, std::uint64_t trials) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
}

inline bool learned(const protocol::Response& r, Symbol want, std::uint8_t bit) {
  return r.symbol == want && r.payload == bit;
}

}  // namespace detail

/// Measure every qubit in Z, query (0, y), then reuse y as (1, y).
inline AttackStats naive_reuse_attack(std::size_t n, std::uint8_t s0, std::uint8_t s1,
                                      std::uint64_t trials, std::uint64_t seed, unsigned jobs = 1) {
  detail::check_trials(n, trials);
  AttackStats st{trials, 0, 2 * trials};
  st.successes = count_successes(trials, seed, jobs, [&](CounterRng& rng) {
    auto [key, qkey] = protocol::keygen(n, rng);
    const protocol::Token tok(std::move(key), s0, s1);
    const auto y = protocol::honest_measure(qkey, 0, rng);
    return detail::learned(tok.respond(Query{0, y}), Symbol::kAcc0, s0) &&
           detail::learned(tok.respond(Query{1, y}), Symbol::kAcc1, s1);
  });
  return st;
}

/// Measure each qubit in the basis rotated by pi/8 and submit the outcome
/// string to both queries.
inline AttackStats breidbart_attack(std::size_t n, std::uint8_t s0, std::uint8_t s1,
                                    std::uint64_t trials, std::uint64_t seed, unsigned jobs = 1) {
  detail::check_trials(n, trials);
  const double c = std::cos(std::numbers::pi / 8.0);
  const double s = std::sin(std::numbers::pi / 8.0);
  AttackStats st{trials, 0, 2 * trials};
  st.successes = count_successes(trials, seed, jobs, [&](CounterRng& rng) {
    auto [key, qkey] = protocol::keygen(n, rng);
    const protocol::Token tok(std::move(key), s0, s1);
    protocol::Bits y;
    for (auto tag : qkey.tags()) {
      const auto amp = protocol::QuantumKey::qubit_state(tag);
      const double p0 = std::norm(c * amp[0] + s * amp[1]);
      y.push_back(rng.uniform() < p0 ? 0 : 1);
    }
    return detail::learned(tok.respond(Query{0, y}), Symbol::kAcc0, s0) &&
           detail::learned(tok.respond(Query{1, y}), Symbol::kAcc1, s1);
  });
  return st;
}

/// n = 1: measure in Z and query (0, y), then try both 1-queries.
inline AttackStats exhaust_attack_n1(std::uint8_t s0, std::uint8_t s1, std::uint64_t trials,
                                     std::uint64_t seed, unsigned jobs = 1) {
  detail::check_trials(1, trials);
  AttackStats st{trials, 0, 3 * trials};
  st.successes = count_successes(trials, seed, jobs, [&](CounterRng& rng) {
    auto [key, qkey] = protocol::keygen(1, rng);
    const protocol::Token tok(std::move(key), s0, s1);
    const auto y = protocol::honest_measure(qkey, 0, rng);
    const auto r0 = tok.respond(Query{0, y});
    const auto a = tok.respond(Query{1, {0}});
    const auto b = tok.respond(Query{1, {1}});
    const auto& r1 = a.symbol == Symbol::kAcc1 ? a : b;
    return detail::learned(r0, Symbol::kAcc0, s0) && detail::learned(r1, Symbol::kAcc1, s1);
  });
  return st;
}

// ---------------------------------------------------------------------------
// Measure-and-access memories.

inline constexpr std::size_t kMaxStatevectorQubits = 12;
inline constexpr std::uint8_t kInvalidKey = 2;

struct ToyMaInstance {
  std::size_t n = 1;
  std::vector<std::uint8_t> f;  // 0, 1 or kInvalidKey for every key y
  std::vector<cplx> psi;
  ComplexMatrix U0, U1;
  std::vector<std::uint64_t> K0, K1;
  std::uint8_t s0 = 0, s1 = 0;

  std::size_t dim() const { return std::size_t{1} << n; }
  std::size_t delta0() const { return K0.size(); }
  std::size_t delta1() const { return K1.size(); }
};

/// Toy memory: psi is uniform over K0 (U0 = I) and U1 is a Householder
/// reflection taking psi to the uniform superposition over K1.
inline ToyMaInstance make_toy_ma(std::size_t n, std::size_t delta0, std::size_t delta1,
                                 std::uint8_t s0, std::uint8_t s1, CounterRng& rng) {
  if (n == 0 || n > kMaxStatevectorQubits)
    throw SizeCapError("toy memories support 1 <= n <= " + std::to_string(kMaxStatevectorQubits));
  const std::size_t dim = std::size_t{1} << n;
  if (delta0 < 1 || delta1 < 1 || delta0 + delta1 > dim)
    throw InvalidArgument("need delta0, delta1 >= 1 and delta0 + delta1 <= 2^n");
  if (s0 > 1 || s1 > 1) throw InvalidArgument("secret bits must be 0 or 1");
  ToyMaInstance inst;
  inst.n = n;
  inst.s0 = s0;
  inst.s1 = s1;
  std::vector<std::uint64_t> keys(dim);
  std::iota(keys.begin(), keys.end(), 0);
  shuffle(keys, rng);
  inst.K0.assign(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(delta0));
  inst.K1.assign(keys.begin() + static_cast<std::ptrdiff_t>(delta0),
                 keys.begin() + static_cast<std::ptrdiff_t>(delta0 + delta1));
  std::sort(inst.K0.begin(), inst.K0.end());
  std::sort(inst.K1.begin(), inst.K1.end());
  inst.f.assign(dim, kInvalidKey);
  for (auto y : inst.K0) inst.f[y] = s0;
  for (auto y : inst.K1) inst.f[y] = s1;
  inst.psi.assign(dim, 0.0);
  std::vector<cplx> phi(dim, 0.0);
  for (auto y : inst.K0) inst.psi[y] = 1.0 / std::sqrt(static_cast<double>(delta0));
  for (auto y : inst.K1) phi[y] = 1.0 / std::sqrt(static_cast<double>(delta1));
  inst.U0 = ComplexMatrix::identity(dim);
  std::vector<cplx> w(dim);
  double wn = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    w[i] = inst.psi[i] - phi[i];
    wn += std::norm(w[i]);
  }
  inst.U1 = ComplexMatrix::identity(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (w[i] == cplx{}) continue;
    for (std::size_t j = 0; j < dim; ++j) inst.U1(i, j) -= 2.0 * w[i] * std::conj(w[j]) / wn;
  }
  return inst;
}

namespace detail {

inline std::uint64_t sample(const std::vector<double>& probs, CounterRng& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (u < probs[i]) return i;
    u -= probs[i];
  }
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0) return i;
  return 0;
}

}  // namespace detail

/// Extract s0 honestly, measuring the key register; undo U0 on the collapsed
/// state, apply U1 and measure again.
inline AttackStats bounded_key_attack(const ToyMaInstance& inst, std::uint64_t trials,
                                      std::uint64_t seed, unsigned jobs = 1) {
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
  const std::size_t dim = inst.dim();
  const auto a = inst.U0.apply(inst.psi);
  std::vector<double> first(dim);
  for (std::size_t y = 0; y < dim; ++y) first[y] = std::norm(a[y]);
  const ComplexMatrix V = inst.U1 * inst.U0.adjoint();
  std::vector<std::vector<double>> second(dim);
  for (std::size_t y = 0; y < dim; ++y) {
    if (first[y] == 0.0) continue;
    second[y].resize(dim);
    for (std::size_t k = 0; k < dim; ++k) second[y][k] = std::norm(V(k, y));
  }
  AttackStats st{trials, 0, 2 * trials};
  st.successes = count_successes(trials, seed, jobs, [&](CounterRng& rng) {
    const auto y1 = detail::sample(first, rng);
    if (inst.f[y1] != inst.s0) return false;
    const auto y2 = detail::sample(second[y1], rng);
    return inst.f[y2] == inst.s1;
  });
  return st;
}

/// O_f on B (x) C (x) D with C, D four-level: |y>|c>|e> -> |y>|c xor f(y)>|e>.
class ReversibleOtmOracle {
 public:
  explicit ReversibleOtmOracle(std::vector<std::uint8_t> f) : f_(std::move(f)) {}

  void apply(std::vector<cplx>& state) const {
    std::vector<cplx> out(state.size());
    for (std::size_t y = 0; y < f_.size(); ++y)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e)
          out[index(y, c ^ f_[y], e)] = state[index(y, c, e)];
    state = std::move(out);
  }

  /// XOR oracles are self-inverse.
  void apply_inverse(std::vector<cplx>& state) const { apply(state); }

  static std::size_t index(std::size_t y, std::size_t c, std::size_t e) { return (y * 4 + c) * 4 + e; }

  std::size_t key_dim() const { return f_.size(); }

 private:
  std::vector<std::uint8_t> f_;
};

struct RewindResult {
  std::uint8_t s0 = 0;
  std::uint8_t s1 = 0;
  double rewind_fidelity = 0.0;  // overlap of the B (x) C state with |psi>|0> after A0^dagger
};

namespace detail {

inline void apply_on_B(const ComplexMatrix& U, std::vector<cplx>& state, std::size_t dim) {
  std::vector<cplx> out(state.size());
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t i = 0; i < dim; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < dim; ++j) acc += U(i, j) * state[j * 16 + r];
      out[i * 16 + r] = acc;
    }
  state = std::move(out);
}

}  // namespace detail

/// Superposition rewinding: run A0 = O_f U0 coherently, copy the answer
/// register, undo A0, run A1 = O_f U1, then measure both answer registers.
inline RewindResult rewind_attack(const ToyMaInstance& inst, CounterRng& rng) {
  const std::size_t dim = inst.dim();
  const ReversibleOtmOracle oracle(inst.f);
  std::vector<cplx> state(dim * 16, 0.0);
  for (std::size_t y = 0; y < dim; ++y) state[ReversibleOtmOracle::index(y, 0, 0)] = inst.psi[y];

  detail::apply_on_B(inst.U0, state, dim);
  oracle.apply(state);
  {
    std::vector<cplx> out(state.size());
    for (std::size_t y = 0; y < dim; ++y)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e)
          out[ReversibleOtmOracle::index(y, c, e ^ c)] = state[ReversibleOtmOracle::index(y, c, e)];
    state = std::move(out);
  }
  oracle.apply_inverse(state);
  detail::apply_on_B(inst.U0.adjoint(), state, dim);

  RewindResult res;
  for (std::size_t e = 0; e < 4; ++e) {
    cplx ov{};
    for (std::size_t y = 0; y < dim; ++y)
      ov += std::conj(inst.psi[y]) * state[ReversibleOtmOracle::index(y, 0, e)];
    res.rewind_fidelity += std::norm(ov);
  }

  detail::apply_on_B(inst.U1, state, dim);
  oracle.apply(state);

  std::vector<double> pc(4, 0.0), pd(4, 0.0);
  for (std::size_t y = 0; y < dim; ++y)
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t e = 0; e < 4; ++e) {
        const double p = std::norm(state[ReversibleOtmOracle::index(y, c, e)]);
        pc[c] += p;
        pd[e] += p;
      }
  const auto d_out = detail::sample(pd, rng);
  const auto c_out = detail::sample(pc, rng);
  if (pd[d_out] < 1.0 - 1e-10 || pc[c_out] < 1.0 - 1e-10)
    throw InvalidArgument("instance violates the certainty invariant: answer registers are not classical");
  if (d_out > 1 || c_out > 1)
    throw InvalidArgument("instance violates the certainty invariant: extraction returned an invalid key");
  res.s0 = static_cast<std::uint8_t>(d_out);
  res.s1 = static_cast<std::uint8_t>(c_out);
  return res;
}

}  // namespace otm::adversary
