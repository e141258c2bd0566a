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
 * Strategy/co-strategy SDP for the token-based one-time memory.
 *
 * Registers: Y1..Ym carry the receiver's queries (dimension d = 2^{n+1}),
 * X1 carries the quantum key (dimension 2^n) and X2..X{m+1} carry the token
 * responses. Response registers are 4-dimensional (one basis state per
 * response symbol); the secret bit is a function of the symbol, so the
 * 8-dimensional (symbol, bit) encoding is available only for cross-checks.
 * Canonical order everywhere: Y1..Ym, X1, X2..X{m+1}.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otm/errors.hpp"
#include "otm/linalg.hpp"
#include "otm/protocol.hpp"
#include "otm/rational.hpp"
#include "otm/sdp/instance.hpp"

namespace otm::gw {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::Register;
using linalg::RegisterLayout;
using protocol::Symbol;

/// Largest 4^n * d^m product that enumeration routines accept.
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 22;

struct GwLayout {
  std::size_t n = 1;
  std::size_t m = 1;
  std::size_t xdim = 4;

  GwLayout(std::size_t n_, std::size_t m_, std::size_t xdim_ = 4) : n(n_), m(m_), xdim(xdim_) {
    if (n == 0 || m == 0) throw InvalidArgument("n and m must be at least 1");
    if (n > 30 || m > 30) throw SizeCapError("register dimensions exceed 64-bit indexing");
    if (xdim != 4 && xdim != 8) throw InvalidArgument("response registers have dimension 4 or 8");
  }

  std::size_t d() const { return std::size_t{1} << (n + 1); }
  std::size_t x1_dim() const { return std::size_t{1} << n; }

  Register y(std::size_t k) const { return {"Y" + std::to_string(k), d()}; }
  Register x(std::size_t k) const {
    return {"X" + std::to_string(k), k == 1 ? x1_dim() : xdim};
  }

  /// Y1..Y_ny, X1..X_nx in canonical order.
  RegisterLayout registers(std::size_t ny, std::size_t nx) const {
    std::vector<Register> r;
    for (std::size_t k = 1; k <= ny; ++k) r.push_back(y(k));
    for (std::size_t k = 1; k <= nx; ++k) r.push_back(x(k));
    return RegisterLayout(std::move(r));
  }

  std::vector<std::string> names(std::size_t ny, std::size_t nx) const {
    return registers(ny, nx).names();
  }

  /// Classical part of registers(ny, nx): everything except X1.
  RegisterLayout classical(std::size_t ny, std::size_t nx) const {
    std::vector<Register> r;
    for (std::size_t k = 1; k <= ny; ++k) r.push_back(y(k));
    for (std::size_t k = 2; k <= nx; ++k) r.push_back(x(k));
    return RegisterLayout(std::move(r));
  }

  std::uint64_t enumeration_size() const {
    std::uint64_t s = std::uint64_t{1} << (2 * n);
    for (std::size_t k = 0; k < m; ++k) {
      if (s > kEnumerationCap) break;
      s *= d();
    }
    return s;
  }

  void require_enumerable() const {
    if (enumeration_size() > kEnumerationCap)
      throw SizeCapError("(n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                         ") exceeds the enumeration cap");
  }
};

/// Sort key placing registers in canonical order Y1..Ym, X1, X2...
inline std::size_t canonical_rank(const std::string& name) {
  const std::size_t k = std::stoul(name.substr(1));
  return name[0] == 'Y' ? k : 1000 + k;
}

/// Operator that is block diagonal in the computational basis of every
/// register except X1. Blocks are keyed by the mixed-radix index of the
/// classical registers; absent keys are zero blocks.
class BlockOperator {
 public:
  BlockOperator() = default;
  BlockOperator(RegisterLayout classical, std::size_t qdim)
      : classical_(std::move(classical)), qdim_(qdim) {}

  /// The number 1 as an operator on no registers.
  static BlockOperator scalar(double v) {
    BlockOperator b(RegisterLayout{}, 1);
    b.block(0)(0, 0) = v;
    return b;
  }

  const RegisterLayout& classical() const noexcept { return classical_; }
  std::size_t qdim() const noexcept { return qdim_; }
  bool has_x1() const noexcept { return qdim_ > 1; }
  const std::map<std::uint64_t, ComplexMatrix>& blocks() const noexcept { return blocks_; }
  std::size_t label_count() const { return classical_.total_dim(); }

  ComplexMatrix& block(std::uint64_t key) {
    auto it = blocks_.find(key);
    if (it == blocks_.end()) it = blocks_.emplace(key, ComplexMatrix(qdim_, qdim_)).first;
    return it->second;
  }

  void add(std::uint64_t key, const ComplexMatrix& m, double scale = 1.0) {
    ComplexMatrix& b = block(key);
    for (std::size_t i = 0; i < m.data().size(); ++i) b.data()[i] += scale * m.data()[i];
  }

  /// Full layout in canonical order, X1 included when present.
  RegisterLayout full_layout(std::size_t n) const {
    std::vector<Register> regs = classical_.registers();
    if (has_x1()) regs.push_back({"X1", std::size_t{1} << n});
    std::stable_sort(regs.begin(), regs.end(), [](const Register& a, const Register& b) {
      return canonical_rank(a.name) < canonical_rank(b.name);
    });
    return RegisterLayout(std::move(regs));
  }

  double trace() const {
    double t = 0.0;
    for (const auto& [k, b] : blocks_) t += b.trace().real();
    return t;
  }

  BlockOperator scaled(double s) const {
    BlockOperator out = *this;
    for (auto& [k, b] : out.blocks_) b *= s;
    return out;
  }

  /// Partial trace over one register (classical or X1).
  BlockOperator traced_out(const std::string& name) const {
    if (name == "X1") {
      if (!has_x1()) throw UnknownRegisterError(name);
      BlockOperator out(classical_, 1);
      for (const auto& [k, b] : blocks_) out.block(k)(0, 0) += b.trace();
      return out;
    }
    const std::size_t p = classical_.position(name);
    const std::vector<std::string> drop{name};
    BlockOperator out(classical_.without(drop), qdim_);
    const auto strides = classical_.strides();
    const std::uint64_t hi = strides[p] * classical_[p].dim;
    for (const auto& [k, b] : blocks_) {
      const std::uint64_t key = (k / hi) * strides[p] + k % strides[p];
      out.add(key, b);
    }
    return out;
  }

  /// Tensor with the identity on register r (classical, or X1 with dim 2^n).
  BlockOperator with_identity(const Register& r) const {
    if (r.name == "X1") {
      if (has_x1()) throw DimensionError("X1 already present");
      BlockOperator out(classical_, r.dim);
      for (const auto& [k, b] : blocks_) {
        ComplexMatrix& o = out.block(k);
        for (std::size_t i = 0; i < r.dim; ++i) o(i, i) = b(0, 0);
      }
      return out;
    }
    std::vector<Register> regs = classical_.registers();
    regs.push_back(r);
    std::stable_sort(regs.begin(), regs.end(), [](const Register& a, const Register& b) {
      return canonical_rank(a.name) < canonical_rank(b.name);
    });
    RegisterLayout nl(std::move(regs));
    const std::size_t p = nl.position(r.name);
    const auto strides = nl.strides();
    BlockOperator out(nl, qdim_);
    for (const auto& [k, b] : blocks_) {
      const std::uint64_t lo = k % strides[p];
      const std::uint64_t high = k / strides[p];
      for (std::uint64_t v = 0; v < r.dim; ++v)
        out.add(high * strides[p] * r.dim + v * strides[p] + lo, b);
    }
    return out;
  }

  double max_block_eig() const {
    double m = 0.0;
    bool first = true;
    for (const auto& [k, b] : blocks_) {
      const double e = linalg::max_eig(b);
      m = first ? e : std::max(m, e);
      first = false;
    }
    if (blocks_.size() < label_count()) m = std::max(m, 0.0);
    return m;
  }

  double min_block_eig() const {
    double m = blocks_.size() < label_count() ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& [k, b] : blocks_) m = std::min(m, linalg::min_eig(b));
    return blocks_.empty() ? 0.0 : m;
  }

  /// Calls f(row, col, value) for every stored entry in full canonical indexing.
  template <typename F>
  void for_each_entry(std::size_t n, F&& f) const {
    const RegisterLayout full = full_layout(n);
    const auto offs = linalg::detail::embedded_offsets(classical_, full);
    const std::size_t qstride = has_x1() ? full.strides()[full.position("X1")] : 0;
    for (const auto& [k, b] : blocks_)
      for (std::size_t i = 0; i < qdim_; ++i)
        for (std::size_t j = 0; j < qdim_; ++j)
          if (b(i, j) != cplx{}) f(offs[k] + i * qstride, offs[k] + j * qstride, b(i, j));
  }

  ComplexMatrix to_dense(std::size_t n) const {
    const std::size_t dim = full_layout(n).total_dim();
    if (dim > 8192) throw SizeCapError("dense materialization capped at dimension 8192");
    ComplexMatrix out(dim, dim);
    for_each_entry(n, [&](std::size_t r, std::size_t c, cplx v) { out(r, c) += v; });
    return out;
  }

  /// Blockwise a - b over the union of stored labels.
  friend BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
    require_same_layout(a, b);
    BlockOperator out = a;
    for (const auto& [k, blk] : b.blocks_) out.add(k, blk, -1.0);
    return out;
  }

  friend double max_abs_diff(const BlockOperator& a, const BlockOperator& b) {
    const BlockOperator diff = a - b;
    double m = 0.0;
    for (const auto& [k, blk] : diff.blocks_) m = std::max(m, blk.max_abs());
    return m;
  }

  static void require_same_layout(const BlockOperator& a, const BlockOperator& b) {
    if (!(a.classical_ == b.classical_) || a.qdim_ != b.qdim_)
      throw DimensionError("block operators live on different layouts");
  }

 private:
  RegisterLayout classical_;
  std::size_t qdim_ = 1;
  std::map<std::uint64_t, ComplexMatrix> blocks_;
};

// ---------------------------------------------------------------------------
// Response strings and counting.

inline ExactRational cardinality_T(std::size_t m) {
  if (m == 0) throw InvalidArgument("m must be at least 1");
  const unsigned e = static_cast<unsigned>(m);
  return ExactRational::pow(4, e) - ExactRational(2) * ExactRational::pow(3, e) +
         ExactRational::pow(2, e);
}

inline bool in_T(const std::vector<Symbol>& t) {
  const bool has0 = std::find(t.begin(), t.end(), Symbol::kAcc0) != t.end();
  const bool has1 = std::find(t.begin(), t.end(), Symbol::kAcc1) != t.end();
  return has0 && has1;
}

inline std::vector<std::vector<Symbol>> enumerate_T(std::size_t m) {
  if (m == 0) throw InvalidArgument("m must be at least 1");
  if (m > 8) throw SizeCapError("enumerate_T supports m <= 8");
  std::vector<std::vector<Symbol>> out;
  const std::uint64_t total = std::uint64_t{1} << (2 * m);
  for (std::uint64_t v = 0; v < total; ++v) {
    std::vector<Symbol> t(m);
    for (std::size_t i = 0; i < m; ++i)
      t[i] = static_cast<Symbol>((v >> (2 * (m - 1 - i))) & 3);
    if (in_T(t)) out.push_back(std::move(t));
  }
  return out;
}

namespace detail {

/// table[z][y] = classify(z, y) over all keys and single query strings.
inline std::vector<std::vector<Symbol>> response_table(std::size_t n) {
  const std::uint64_t nz = std::uint64_t{1} << (2 * n);
  const std::uint64_t ny = std::uint64_t{1} << (n + 1);
  std::vector<std::vector<Symbol>> table(nz, std::vector<Symbol>(ny));
  for (std::uint64_t z = 0; z < nz; ++z) {
    const auto key = protocol::SecretKey::from_index(n, z);
    for (std::uint64_t y = 0; y < ny; ++y)
      table[z][y] = protocol::classify(key, protocol::index_to_bits(y, n + 1));
  }
  return table;
}

/// Visits every query sequence (y_1..y_m) as a digit vector in base d.
template <typename F>
void for_each_query_sequence(std::size_t m, std::uint64_t d, F&& f) {
  std::vector<std::uint64_t> ys(m, 0);
  while (true) {
    f(ys);
    std::size_t k = m;
    while (k-- > 0) {
      if (++ys[k] < d) break;
      ys[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) return;
  }
}

inline std::uint8_t symbol_label(Symbol s, std::size_t xdim, std::uint8_t s0, std::uint8_t s1) {
  const auto v = static_cast<std::uint8_t>(s);
  if (xdim == 4) return v;
  const std::uint8_t bit = s == Symbol::kAcc0 ? s0 : (s == Symbol::kAcc1 ? s1 : 0);
  return static_cast<std::uint8_t>(2 * v + bit);
}

}  // namespace detail

/// Exhaustive |R|: the number of (query sequence, key) pairs whose response
/// string lies in T.
inline ExactRational count_R_brute(std::size_t n, std::size_t m) {
  const GwLayout g(n, m);
  g.require_enumerable();
  const auto table = detail::response_table(n);
  std::uint64_t count = 0;
  for (const auto& row : table)
    detail::for_each_query_sequence(m, g.d(), [&](const std::vector<std::uint64_t>& ys) {
      bool a0 = false;
      bool a1 = false;
      for (auto y : ys) {
        a0 = a0 || row[y] == Symbol::kAcc0;
        a1 = a1 || row[y] == Symbol::kAcc1;
      }
      count += (a0 && a1) ? 1 : 0;
    });
  return ExactRational(ExactRational::Int(count));
}

/// Closed-form |R| by inclusion-exclusion over the number of rectilinear
/// positions alpha.
inline ExactRational count_R_closed(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("n and m must be at least 1");
  const unsigned un = static_cast<unsigned>(n);
  const unsigned um = static_cast<unsigned>(m);
  ExactRational sum(0);
  for (unsigned a = 0; a <= un; ++a) {
    const ExactRational pa = ExactRational(1) / ExactRational::pow2(a + 1);
    const ExactRational pb = ExactRational(1) / ExactRational::pow2(un - a + 1);
    const ExactRational term = ExactRational(1) - ExactRational::pow(ExactRational(1) - pa, um) -
                               ExactRational::pow(ExactRational(1) - pb, um) +
                               ExactRational::pow(ExactRational(1) - pa - pb, um);
    sum += ExactRational::binomial(un, a) * term;
  }
  const ExactRational r = ExactRational::pow2(um * (un + 1) + un) * sum;
  r.to_integer();
  return r;
}

/// Dual objective |R| / (4^n d^m).
inline ExactRational beta(std::size_t n, std::size_t m) {
  const unsigned un = static_cast<unsigned>(n);
  const unsigned um = static_cast<unsigned>(m);
  return count_R_closed(n, m) / ExactRational::pow2(2 * un + um * (un + 1));
}

inline double heuristic_bound(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("n and m must be at least 1");
  return static_cast<double>(m) / std::pow(2.0, static_cast<double>(n) / 2.0);
}

/// (2 / 4^n) (1 + 1/sqrt 2)^n.
inline double lambda_max_formula(std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const double dn = static_cast<double>(n);
  return 2.0 / std::pow(4.0, dn) * std::pow(1.0 + 1.0 / std::numbers::sqrt2, dn);
}

inline double lambda_max_numeric(const BlockOperator& q) {
  return q.blocks().empty() ? 0.0 : q.max_block_eig();
}

// ---------------------------------------------------------------------------
// Q1.

namespace detail {

template <typename Keep>
BlockOperator accumulate_key_states(const GwLayout& g, std::uint8_t s0, std::uint8_t s1,
                                    Keep keep) {
  g.require_enumerable();
  const auto table = response_table(g.n);
  const std::uint64_t nz = std::uint64_t{1} << (2 * g.n);
  BlockOperator q(g.classical(g.m, g.m + 1), g.x1_dim());
  const auto strides = q.classical().strides();
  const double w = 1.0 / static_cast<double>(nz);
  for (std::uint64_t z = 0; z < nz; ++z) {
    const auto psi = protocol::QuantumKey::from_secret(protocol::SecretKey::from_index(g.n, z))
                         .statevector();
    const ComplexMatrix proj = ComplexMatrix::outer(psi);
    for_each_query_sequence(g.m, g.d(), [&](const std::vector<std::uint64_t>& ys) {
      std::vector<Symbol> t(g.m);
      for (std::size_t i = 0; i < g.m; ++i) t[i] = table[z][ys[i]];
      if (!keep(t)) return;
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < g.m; ++i) key += ys[i] * strides[i];
      for (std::size_t i = 0; i < g.m; ++i)
        key += symbol_label(t[i], g.xdim, s0, s1) * strides[g.m + i];
      q.add(key, proj, w);
    });
  }
  return q;
}

}  // namespace detail

/// Q1 = (1/4^n) sum over (t, y, z) in R of |t><t| (x) |y><y| (x) |psi_z><psi_z|.
/// `xdim` 8 selects the (symbol, secret bit) response encoding.
inline BlockOperator build_Q1(std::size_t n, std::size_t m, std::size_t xdim = 4,
                              std::uint8_t s0 = 0, std::uint8_t s1 = 1) {
  return detail::accumulate_key_states(GwLayout(n, m, xdim), s0, s1, in_T);
}

// ---------------------------------------------------------------------------
// Primal chains.

struct SolutionChain {
  std::size_t n = 1;
  std::size_t m = 1;
  double p = 0.0;
  std::vector<BlockOperator> R;  // R[0..m+1]
  std::vector<BlockOperator> P;  // P[1..m+1]; P[0] unused

  SolutionChain scaled(double s) const {
    SolutionChain c = *this;
    c.p *= s;
    for (auto& r : c.R) r = r.scaled(s);
    for (auto& q : c.P) q = q.scaled(s);
    return c;
  }
};

/// Completes a chain from R_{m+1}: P_{m+1} = R_{m+1}, R_{k-1} = Tr_{X_k} P_k,
/// P_k = Tr_{Y_k} R_k / d.
inline SolutionChain chain_from_top(const GwLayout& g, BlockOperator top, double p) {
  SolutionChain c;
  c.n = g.n;
  c.m = g.m;
  c.p = p;
  c.R.resize(g.m + 2);
  c.P.resize(g.m + 2);
  c.R[g.m + 1] = std::move(top);
  c.P[g.m + 1] = c.R[g.m + 1];
  for (std::size_t k = g.m + 1; k >= 1; --k) {
    c.R[k - 1] = c.P[k].traced_out(g.x(k).name);
    if (k - 1 >= 1)
      c.P[k - 1] = c.R[k - 1].traced_out(g.y(k - 1).name).scaled(1.0 / static_cast<double>(g.d()));
  }
  return c;
}

/// Chain with p = 1 obtained by dropping the requirement t in T.
inline SolutionChain trivial_feasible(std::size_t n, std::size_t m) {
  const GwLayout g(n, m);
  BlockOperator top = detail::accumulate_key_states(g, 0, 1, [](const auto&) { return true; });
  return chain_from_top(g, std::move(top), 1.0);
}

/// p = |T| 2^{1-n} (1 + 1/sqrt 2)^n.
inline double linear_bound_p(std::size_t n, std::size_t m) {
  return cardinality_T(m).to_double() * std::pow(2.0, 1.0 - static_cast<double>(n)) *
         std::pow(1.0 + 1.0 / std::numbers::sqrt2, static_cast<double>(n));
}

/// R_{m+1} = p/|T| sum_{t in T} |t><t| (x) I_Y (x) I/2^n, chained down to R_0 = p.
inline SolutionChain linear_bound_feasible(std::size_t n, std::size_t m) {
  const GwLayout g(n, m);
  g.require_enumerable();
  const double p = linear_bound_p(n, m);
  BlockOperator top(g.classical(m, m + 1), g.x1_dim());
  const auto ts = enumerate_T(m);
  if (!ts.empty()) {
    const auto strides = top.classical().strides();
    const ComplexMatrix block =
        ComplexMatrix::identity(g.x1_dim()) *
        cplx(p / (static_cast<double>(ts.size()) * static_cast<double>(g.x1_dim())), 0.0);
    detail::for_each_query_sequence(m, g.d(), [&](const std::vector<std::uint64_t>& ys) {
      std::uint64_t base = 0;
      for (std::size_t i = 0; i < m; ++i) base += ys[i] * strides[i];
      for (const auto& t : ts) {
        std::uint64_t key = base;
        for (std::size_t i = 0; i < m; ++i) key += static_cast<std::uint64_t>(t[i]) * strides[m + i];
        top.add(key, block);
      }
    });
  }
  return chain_from_top(g, std::move(top), p);
}

struct ChainReport {
  double min_eig_gap = 0.0;             // min eig(R_{m+1} - Q1)
  double factorization_residual = 0.0;  // max |R_k - P_k (x) I_{Y_k}|
  double trace_chain_residual = 0.0;    // max |Tr_{X_k} P_k - R_{k-1}|
  double r0_residual = 0.0;             // |R_0 - p|
  double min_psd_eig = 0.0;             // min over every R_k, P_k
  double tol = 1e-9;
  bool pass = false;
  std::string failure;
};

inline ChainReport verify_primal_chain(const SolutionChain& c, const BlockOperator& q,
                                       double tol = 1e-9) {
  if (c.R.size() != c.m + 2 || c.P.size() != c.m + 2)
    throw DimensionError("chain has the wrong number of operators");
  const GwLayout g(c.n, c.m, q.classical().size() > c.m ? q.classical()[c.m].dim : 4);
  ChainReport rep;
  rep.tol = tol;
  BlockOperator::require_same_layout(c.R[c.m + 1], q);
  rep.min_eig_gap = (c.R[c.m + 1] - q).min_block_eig();
  rep.factorization_residual = max_abs_diff(c.P[c.m + 1], c.R[c.m + 1]);
  double psd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= c.m + 1; ++k) {
    if (k <= c.m)
      rep.factorization_residual = std::max(
          rep.factorization_residual, max_abs_diff(c.P[k].with_identity(g.y(k)), c.R[k]));
    rep.trace_chain_residual =
        std::max(rep.trace_chain_residual, max_abs_diff(c.P[k].traced_out(g.x(k).name), c.R[k - 1]));
    psd = std::min({psd, c.P[k].min_block_eig(), c.R[k].min_block_eig()});
  }
  rep.min_psd_eig = psd;
  const auto& r0 = c.R[0].blocks();
  const double r0v = r0.empty() ? 0.0 : r0.begin()->second(0, 0).real();
  rep.r0_residual = std::abs(r0v - c.p);
  if (rep.min_eig_gap < -tol)
    rep.failure = "R_{m+1} - Q1 has a negative eigenvalue";
  else if (rep.factorization_residual > tol)
    rep.failure = "R_k != P_k (x) I";
  else if (rep.trace_chain_residual > tol)
    rep.failure = "Tr_{X_k} P_k != R_{k-1}";
  else if (rep.r0_residual > tol)
    rep.failure = "R_0 != p";
  else if (rep.min_psd_eig < -tol)
    rep.failure = "chain operator is not PSD";
  rep.pass = rep.failure.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Dual.

struct DualSolution {
  std::size_t n = 1;
  std::size_t m = 1;
  std::vector<BlockOperator> Y;  // Y[1..m]; Y[0] unused
  ExactRational beta;
};

/// Y_i = I / d^{m-i+1} on Y_{1..m-i+1} (x) X_{1..m-i+1}.
inline DualSolution dual_uniform(std::size_t n, std::size_t m) {
  const GwLayout g(n, m);
  DualSolution s;
  s.n = n;
  s.m = m;
  s.beta = beta(n, m);
  s.Y.resize(m + 1);
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t k = m - i + 1;
    BlockOperator y(g.classical(k, k), g.x1_dim());
    if (y.label_count() > kEnumerationCap) throw SizeCapError("dual operator too large");
    const double v = 1.0 / std::pow(static_cast<double>(g.d()), static_cast<double>(k));
    const ComplexMatrix blk = ComplexMatrix::identity(g.x1_dim()) * cplx(v, 0.0);
    for (std::uint64_t key = 0; key < y.label_count(); ++key) y.add(key, blk);
    s.Y[i] = std::move(y);
  }
  return s;
}

struct DualReport {
  std::vector<double> constraint_min_eig;  // one per constraint i = 1..m
  double equality_residual = 0.0;          // max |constraint operator| entries
  double y1_min_eig = 0.0;
  double objective = 0.0;
  ExactRational beta;
  double tol = 1e-12;
  bool pass = false;
  std::string failure;
};

/// Dual constraint operator i: -Tr_{Y_{m-i+1}}(Y_i) + Y_{i+1} (x) I_{X_{m-i+1}}.
inline BlockOperator dual_constraint(const GwLayout& g, const std::vector<BlockOperator>& ys,
                                     std::size_t i) {
  const std::size_t k = g.m - i + 1;
  const BlockOperator next = i < g.m ? ys[i + 1] : BlockOperator::scalar(1.0);
  const BlockOperator lifted = next.with_identity(g.x(k));
  return lifted - ys[i].traced_out(g.y(k).name);
}

inline DualReport verify_dual(const DualSolution& s, const BlockOperator& q, double tol = 1e-12) {
  const GwLayout g(s.n, s.m);
  if (s.Y.size() != s.m + 1) throw DimensionError("dual solution has the wrong number of operators");
  DualReport rep;
  rep.tol = tol;
  rep.beta = s.beta;
  for (std::size_t i = 1; i <= s.m; ++i) {
    const BlockOperator c = dual_constraint(g, s.Y, i);
    rep.constraint_min_eig.push_back(c.min_block_eig());
    for (const auto& [k, b] : c.blocks())
      rep.equality_residual = std::max(rep.equality_residual, b.max_abs());
  }
  rep.y1_min_eig = s.Y[1].min_block_eig();
  const BlockOperator w = q.traced_out(g.x(s.m + 1).name);
  BlockOperator::require_same_layout(w, s.Y[1]);
  for (const auto& [k, b] : w.blocks()) {
    auto it = s.Y[1].blocks().find(k);
    if (it != s.Y[1].blocks().end()) rep.objective += linalg::frobenius_inner(it->second, b);
  }
  const double bd = s.beta.to_double();
  for (std::size_t i = 0; i < rep.constraint_min_eig.size(); ++i)
    if (rep.constraint_min_eig[i] < -tol && rep.failure.empty())
      rep.failure = "dual constraint " + std::to_string(i + 1) + " violated";
  if (rep.failure.empty() && rep.y1_min_eig < -tol) rep.failure = "Y_1 is not PSD";
  if (rep.failure.empty() && std::abs(rep.objective - bd) > 1e-12 * std::max(1.0, std::abs(bd)))
    rep.failure = "objective differs from beta";
  rep.pass = rep.failure.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Streamlined SDP instances.

/// Largest constraint dimension of the streamlined instances, d^m 2^n 4^{m-1}.
inline std::uint64_t instance_max_dim(const GwLayout& g) {
  std::uint64_t dim = g.x1_dim();
  for (std::size_t k = 0; k < g.m && dim <= kEnumerationCap; ++k) dim *= g.d();
  for (std::size_t k = 1; k < g.m && dim <= kEnumerationCap; ++k) dim *= g.xdim;
  return dim;
}

inline constexpr std::uint64_t kInstanceDimCap = 4096;

inline void require_instance_size(const GwLayout& g) {
  if (instance_max_dim(g) > kInstanceDimCap)
    throw SizeCapError("(n=" + std::to_string(g.n) + ", m=" + std::to_string(g.m) +
                       ") instance needs constraint dimension " + std::to_string(instance_max_dim(g)) +
                       " > " + std::to_string(kInstanceDimCap));
}

inline std::vector<sdp::Register> instance_registers(const GwLayout& g) {
  return g.registers(g.m, g.m + 1).registers();
}

inline sdp::SparseHermitian sparse_of(const BlockOperator& b, std::size_t n) {
  sdp::SparseHermitian s;
  s.dim = b.full_layout(n).total_dim();
  b.for_each_entry(n, [&](std::size_t r, std::size_t c, cplx v) { s.entries.push_back({r, c, v}); });
  std::sort(s.entries.begin(), s.entries.end(), [](const auto& a, const auto& c) {
    return a.i != c.i ? a.i < c.i : a.j < c.j;
  });
  return s;
}

/// min Tr(P_1) subject to Tr_{X_{m+1}}(Q1) - P_m (x) I_{Y_m} <= 0 and
/// Tr_{X_{i+1}}(P_{i+1}) - P_i (x) I_{Y_i} <= 0 for i < m.
inline sdp::SdpInstance build_primal_instance(std::size_t n, std::size_t m) {
  const GwLayout g(n, m);
  require_instance_size(g);
  const BlockOperator q = build_Q1(n, m);
  sdp::SdpInstance inst;
  inst.name = "primal_n" + std::to_string(n) + "_m" + std::to_string(m);
  inst.registers = instance_registers(g);
  for (std::size_t i = 1; i <= m; ++i)
    inst.variables.push_back({"P" + std::to_string(i), g.names(i - 1, i), sdp::Cone::kPsd});
  inst.constants.push_back(sparse_of(q.traced_out(g.x(m + 1).name), n));
  for (std::size_t i = 1; i <= m; ++i) {
    sdp::Constraint c;
    c.name = "c" + std::to_string(i);
    c.registers = g.names(i, i);
    c.sense = sdp::Sense::kLe;
    if (i == m)
      c.constant = 0;
    else
      c.terms.push_back({"P" + std::to_string(i + 1), 1.0, {g.x(i + 1).name}, {}});
    c.terms.push_back({"P" + std::to_string(i), -1.0, {}, {g.y(i).name}});
    inst.constraints.push_back(std::move(c));
  }
  inst.objective = {sdp::ObjectiveSense::kMin, {{"P1", 1.0, std::nullopt}}};
  return inst;
}

/// max <Y_1, Tr_{X_{m+1}} Q1> subject to
/// -Tr_{Y_{m-i+1}}(Y_i) + Y_{i+1} (x) I_{X_{m-i+1}} >= 0, Y_{m+1} = 1, Y_1 >= 0.
inline sdp::SdpInstance build_dual_instance(std::size_t n, std::size_t m) {
  const GwLayout g(n, m);
  require_instance_size(g);
  const BlockOperator q = build_Q1(n, m);
  sdp::SdpInstance inst;
  inst.name = "dual_n" + std::to_string(n) + "_m" + std::to_string(m);
  inst.registers = instance_registers(g);
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t k = m - i + 1;
    inst.variables.push_back(
        {"Y" + std::to_string(i), g.names(k, k), i == 1 ? sdp::Cone::kPsd : sdp::Cone::kFree});
  }
  inst.constants.push_back(sparse_of(q.traced_out(g.x(m + 1).name), n));
  inst.constants.push_back(sdp::SparseHermitian::identity(g.x1_dim()));
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t k = m - i + 1;
    sdp::Constraint c;
    c.name = "d" + std::to_string(i);
    c.registers = g.names(k - 1, k);
    c.sense = sdp::Sense::kGe;
    c.terms.push_back({"Y" + std::to_string(i), -1.0, {g.y(k).name}, {}});
    if (i < m)
      c.terms.push_back({"Y" + std::to_string(i + 1), 1.0, {}, {g.x(k).name}});
    else
      c.constant = 1;
    inst.constraints.push_back(std::move(c));
  }
  inst.objective = {sdp::ObjectiveSense::kMax, {{"Y1", 1.0, std::size_t{0}}}};
  return inst;
}

/// Primal assignment (P_1..P_m) read off a chain, as dense matrices in the
/// variable layouts of build_primal_instance.
inline std::vector<ComplexMatrix> chain_to_primal_assignment(const SolutionChain& c) {
  std::vector<ComplexMatrix> xs;
  for (std::size_t i = 1; i <= c.m; ++i) xs.push_back(c.P[i].to_dense(c.n));
  return xs;
}

/// Dual assignment (Y_1..Y_m) as dense matrices.
inline std::vector<ComplexMatrix> dual_to_assignment(const DualSolution& s) {
  std::vector<ComplexMatrix> xs;
  for (std::size_t i = 1; i <= s.m; ++i) xs.push_back(s.Y[i].to_dense(s.n));
  return xs;
}

}  // namespace otm::gw
