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
 * Conjugate-coding one-time memory on a stateless token.
 *
 * The sender draws a secret key z of 2n bits, hands the receiver the n-qubit
 * product state it encodes, and programs a token that answers a classical
 * query (b, y): for b = 0 it checks the rectilinear positions of y against
 * the key and releases s0, for b = 1 it checks the diagonal positions and
 * releases s1.
 *
 * Key layout (0-indexed): z[2i] is the basis of qubit i (0 = rectilinear,
 * 1 = diagonal) and z[2i + 1] is its value bit.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "otm/errors.hpp"
#include "otm/linalg.hpp"
#include "otm/rng.hpp"

namespace otm::protocol {

using Bits = std::vector<std::uint8_t>;

inline Bits parse_bits(std::string_view s) {
  Bits out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw InvalidArgument("bit string may only contain 0 and 1");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

inline std::string to_string(const Bits& b) {
  std::string s;
  for (auto v : b) s.push_back(static_cast<char>('0' + v));
  return s;
}

/// Big-endian integer value of a bit string (first bit most significant).
inline std::uint64_t bits_to_index(const Bits& b) {
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 1) | x;
  return v;
}

inline Bits index_to_bits(std::uint64_t v, std::size_t len) {
  Bits b(len);
  for (std::size_t i = len; i-- > 0; v >>= 1) b[i] = static_cast<std::uint8_t>(v & 1);
  return b;
}

enum class Basis : std::uint8_t { kRectilinear = 0, kDiagonal = 1 };

/// Token response alphabet: accepted 0-query, accepted 1-query, rejected
/// 0-query, rejected 1-query. The numeric value is the basis index used for
/// response registers.
enum class Symbol : std::uint8_t { kAcc0 = 0, kAcc1 = 1, kRej0 = 2, kRej1 = 3 };

inline constexpr std::array<Symbol, 4> kAllSymbols = {Symbol::kAcc0, Symbol::kAcc1,
                                                      Symbol::kRej0, Symbol::kRej1};

inline std::string_view symbol_name(Symbol s) {
  switch (s) {
    case Symbol::kAcc0: return "Acc0";
    case Symbol::kAcc1: return "Acc1";
    case Symbol::kRej0: return "Rej0";
    case Symbol::kRej1: return "Rej1";
  }
  return "?";
}

inline bool is_accept(Symbol s) { return s == Symbol::kAcc0 || s == Symbol::kAcc1; }

enum class StateTag : std::uint8_t { kZero, kOne, kPlus, kMinus };

class SecretKey {
 public:
  SecretKey(std::size_t n, Bits z) : n_(n), z_(std::move(z)) {
    if (n_ == 0) throw InvalidArgument("secret key needs n >= 1");
    if (z_.size() != 2 * n_) throw DimensionError("secret key must have exactly 2n bits");
    for (auto v : z_)
      if (v > 1) throw InvalidArgument("secret key bits must be 0 or 1");
  }

  static SecretKey from_string(std::string_view z) {
    if (z.size() % 2 != 0) throw DimensionError("secret key must have even length");
    return SecretKey(z.size() / 2, parse_bits(z));
  }

  /// Key whose 2n-bit string has big-endian value `index`.
  static SecretKey from_index(std::size_t n, std::uint64_t index) {
    return SecretKey(n, index_to_bits(index, 2 * n));
  }

  std::size_t n() const noexcept { return n_; }
  const Bits& bits() const noexcept { return z_; }
  Basis basis(std::size_t i) const { return static_cast<Basis>(z_.at(2 * i)); }
  std::uint8_t value(std::size_t i) const { return z_.at(2 * i + 1); }

  /// Number of rectilinearly encoded qubits.
  std::size_t rectilinear_count() const {
    std::size_t a = 0;
    for (std::size_t i = 0; i < n_; ++i) a += basis(i) == Basis::kRectilinear ? 1 : 0;
    return a;
  }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  std::size_t n_;
  Bits z_;
};

/// Product-state form of |x>_theta. The dense statevector is built on demand.
class QuantumKey {
 public:
  explicit QuantumKey(std::vector<StateTag> tags) : tags_(std::move(tags)) {
    if (tags_.empty()) throw InvalidArgument("quantum key needs n >= 1");
  }

  static QuantumKey from_secret(const SecretKey& z) {
    std::vector<StateTag> tags;
    for (std::size_t i = 0; i < z.n(); ++i) {
      const bool one = z.value(i) == 1;
      if (z.basis(i) == Basis::kRectilinear)
        tags.push_back(one ? StateTag::kOne : StateTag::kZero);
      else
        tags.push_back(one ? StateTag::kMinus : StateTag::kPlus);
    }
    return QuantumKey(std::move(tags));
  }

  std::size_t n() const noexcept { return tags_.size(); }
  const std::vector<StateTag>& tags() const noexcept { return tags_; }

  static std::array<linalg::cplx, 2> qubit_state(StateTag t) {
    const double h = std::numbers::sqrt2 / 2.0;
    switch (t) {
      case StateTag::kZero: return {1.0, 0.0};
      case StateTag::kOne: return {0.0, 1.0};
      case StateTag::kPlus: return {h, h};
      case StateTag::kMinus: return {h, -h};
    }
    return {0.0, 0.0};
  }

  /// Dense 2^n amplitude vector; qubit 0 is the most significant digit.
  std::vector<linalg::cplx> statevector() const {
    std::vector<linalg::cplx> psi{1.0};
    for (auto t : tags_) {
      const auto q = qubit_state(t);
      psi = linalg::kron(std::span<const linalg::cplx>(psi), std::span<const linalg::cplx>(q));
    }
    return psi;
  }

  friend bool operator==(const QuantumKey&, const QuantumKey&) = default;

 private:
  std::vector<StateTag> tags_;
};

struct Query {
  std::uint8_t b = 0;
  Bits y;

  /// Splits a combined string b o y.
  static Query from_ytilde(const Bits& ytilde) {
    if (ytilde.empty()) throw DimensionError("query string is empty");
    return Query{ytilde[0], Bits(ytilde.begin() + 1, ytilde.end())};
  }

  Bits ytilde() const {
    Bits out{b};
    out.insert(out.end(), y.begin(), y.end());
    return out;
  }
};

/// Token answer. Rejections carry payload 0.
struct Response {
  Symbol symbol = Symbol::kRej0;
  std::uint8_t payload = 0;
  friend bool operator==(const Response&, const Response&) = default;
};

inline Symbol classify(const SecretKey& z, const Query& q) {
  if (q.y.size() != z.n()) throw DimensionError("query length does not match key");
  if (q.b > 1) throw InvalidArgument("choice bit must be 0 or 1");
  const Basis checked = q.b == 0 ? Basis::kRectilinear : Basis::kDiagonal;
  for (std::size_t i = 0; i < z.n(); ++i)
    if (z.basis(i) == checked && q.y[i] != z.value(i))
      return q.b == 0 ? Symbol::kRej0 : Symbol::kRej1;
  return q.b == 0 ? Symbol::kAcc0 : Symbol::kAcc1;
}

/// Accept/reject symbol of the token on the combined query string b o y.
inline Symbol classify(const SecretKey& z, const Bits& ytilde) {
  if (ytilde.size() != z.n() + 1) throw DimensionError("query string must have n+1 bits");
  return classify(z, Query::from_ytilde(ytilde));
}

/// Stateless token: a pure function of (z, s0, s1, query).
class Token {
 public:
  Token(SecretKey z, std::uint8_t s0, std::uint8_t s1) : z_(std::move(z)), s0_(s0), s1_(s1) {
    if (s0 > 1 || s1 > 1) throw InvalidArgument("secret bits must be 0 or 1");
  }

  Response respond(const Query& q) const {
    const Symbol s = classify(z_, q);
    switch (s) {
      case Symbol::kAcc0: return {s, s0_};
      case Symbol::kAcc1: return {s, s1_};
      default: return {s, 0};
    }
  }

  const SecretKey& key() const noexcept { return z_; }
  std::size_t n() const noexcept { return z_.n(); }

 private:
  SecretKey z_;
  std::uint8_t s0_;
  std::uint8_t s1_;
};

/// Query strings grouped by the response they draw under key z.
struct PartitionSets {
  std::vector<Bits> rej0;
  std::vector<Bits> rej1;
  std::vector<Bits> acc0;
  std::vector<Bits> acc1;
};

inline PartitionSets partition_sets(const SecretKey& z) {
  PartitionSets p;
  const std::uint64_t count = std::uint64_t{1} << (z.n() + 1);
  for (std::uint64_t v = 0; v < count; ++v) {
    Bits yt = index_to_bits(v, z.n() + 1);
    switch (classify(z, yt)) {
      case Symbol::kAcc0: p.acc0.push_back(std::move(yt)); break;
      case Symbol::kAcc1: p.acc1.push_back(std::move(yt)); break;
      case Symbol::kRej0: p.rej0.push_back(std::move(yt)); break;
      case Symbol::kRej1: p.rej1.push_back(std::move(yt)); break;
    }
  }
  return p;
}

/// Uniform secret key and the quantum key it determines.
inline std::pair<SecretKey, QuantumKey> keygen(std::size_t n, CounterRng& rng) {
  if (n == 0) throw InvalidArgument("keygen needs n >= 1");
  Bits z(2 * n);
  for (auto& bit : z) bit = rng.bit() ? 1 : 0;
  SecretKey key(n, std::move(z));
  QuantumKey qk = QuantumKey::from_secret(key);
  return {std::move(key), std::move(qk)};
}

/// Honest receiver: measure in the computational basis (b = 0) or apply
/// H on every qubit first (b = 1). Product states are sampled qubit by qubit.
inline Bits honest_measure(const QuantumKey& k, std::uint8_t b, CounterRng& rng) {
  if (b > 1) throw InvalidArgument("choice bit must be 0 or 1");
  Bits y;
  y.reserve(k.n());
  for (auto t : k.tags()) {
    const bool rect = t == StateTag::kZero || t == StateTag::kOne;
    const std::uint8_t encoded = (t == StateTag::kOne || t == StateTag::kMinus) ? 1 : 0;
    const bool matched = rect == (b == 0);
    y.push_back(matched ? encoded : static_cast<std::uint8_t>(rng.bit() ? 1 : 0));
  }
  return y;
}

/// keygen, honest measurement and one token query.
inline Response run_honest(std::size_t n, std::uint8_t s0, std::uint8_t s1, std::uint8_t b,
                           CounterRng& rng) {
  auto [key, qkey] = keygen(n, rng);
  const Token token(std::move(key), s0, s1);
  return token.respond(Query{b, honest_measure(qkey, b, rng)});
}

}  // namespace otm::protocol
