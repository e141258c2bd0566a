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
 * Dense complex matrices over named tensor-product register layouts.
 *
 * Index convention: the leftmost register of a RegisterLayout is the most
 * significant digit of the composite index. Every module in the library
 * relies on this single convention.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "otm/errors.hpp"

namespace otm::linalg {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  /// Row-major literal, e.g. `ComplexMatrix::from_rows({{1, 0}, {0, 1}})`.
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("ragged matrix literal");
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  /// |v><v| for a column vector v.
  static ComplexMatrix outer(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  /// Matrix-vector product.
  std::vector<cplx> apply(std::span<const cplx> v) const {
    if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
    std::vector<cplx> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  cplx trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    cplx t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_hermitian(double tol = 1e-12) const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).max_abs();
}

/// Frobenius inner product Re Tr(a^dagger b).
inline double frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("inner product shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s += (std::conj(a.data()[i]) * b.data()[i]).real();
  return s;
}

struct Register {
  std::string name;
  std::size_t dim = 1;
  friend bool operator==(const Register&, const Register&) = default;
};

/// Ordered tensor-product layout of named registers.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(std::initializer_list<Register> regs)
      : RegisterLayout(std::vector<Register>(regs)) {}
  explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    std::unordered_set<std::string> seen;
    for (const auto& r : regs_) {
      if (r.dim < 1) throw DimensionError("register '" + r.name + "' has dimension 0");
      if (!seen.insert(r.name).second)
        throw DimensionError("duplicate register name '" + r.name + "'");
    }
  }

  const std::vector<Register>& registers() const noexcept { return regs_; }
  std::size_t size() const noexcept { return regs_.size(); }
  const Register& operator[](std::size_t i) const { return regs_[i]; }

  std::size_t total_dim() const noexcept {
    std::size_t d = 1;
    for (const auto& r : regs_) d *= r.dim;
    return d;
  }

  bool contains(const std::string& name) const noexcept {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register& r) { return r.name == name; });
  }

  std::size_t position(const std::string& name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
      if (regs_[i].name == name) return i;
    throw UnknownRegisterError(name);
  }

  std::size_t dim_of(const std::string& name) const { return regs_[position(name)].dim; }

  /// Index stride of each register (rightmost register has stride 1).
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(regs_.size(), 1);
    for (std::size_t i = regs_.size(); i-- > 1;) s[i - 1] = s[i] * regs_[i].dim;
    return s;
  }

  /// Registers whose names are not in `names`, in layout order.
  RegisterLayout without(std::span<const std::string> names) const {
    for (const auto& n : names) position(n);
    std::vector<Register> kept;
    for (const auto& r : regs_)
      if (std::find(names.begin(), names.end(), r.name) == names.end()) kept.push_back(r);
    return RegisterLayout(std::move(kept));
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& r : regs_) out.push_back(r.name);
    return out;
  }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

 private:
  std::vector<Register> regs_;
};

namespace detail {

/// Offsets in `target` of every composite index over the sub-layout `sub`
/// (whose registers must all appear in `target` with equal dimensions).
inline std::vector<std::size_t> embedded_offsets(const RegisterLayout& sub,
                                                 const RegisterLayout& target) {
  const auto tstrides = target.strides();
  std::vector<std::size_t> strides_in_target;
  for (const auto& r : sub.registers()) {
    const std::size_t p = target.position(r.name);
    if (target[p].dim != r.dim)
      throw DimensionError("register '" + r.name + "' dimension mismatch");
    strides_in_target.push_back(tstrides[p]);
  }
  std::vector<std::size_t> offsets(sub.total_dim(), 0);
  std::vector<std::size_t> digit(sub.size(), 0);
  for (std::size_t idx = 0; idx < offsets.size(); ++idx) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < sub.size(); ++k) off += digit[k] * strides_in_target[k];
    offsets[idx] = off;
    for (std::size_t k = sub.size(); k-- > 0;) {
      if (++digit[k] < sub[k].dim) break;
      digit[k] = 0;
    }
  }
  return offsets;
}

}  // namespace detail

/// Kronecker product; the row index of `a` is the high-order digit.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

inline std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

/// Traces out the named registers; remaining registers keep their order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const RegisterLayout& layout,
                                   std::span<const std::string> traced) {
  if (!m.is_square() || m.rows() != layout.total_dim())
    throw DimensionError("partial_trace: matrix does not match layout");
  const RegisterLayout kept = layout.without(traced);
  std::vector<Register> traced_regs;
  for (const auto& r : layout.registers())
    if (!kept.contains(r.name)) traced_regs.push_back(r);
  const RegisterLayout tl(std::move(traced_regs));
  const auto koff = detail::embedded_offsets(kept, layout);
  const auto toff = detail::embedded_offsets(tl, layout);
  ComplexMatrix out(kept.total_dim(), kept.total_dim());
  for (std::size_t r = 0; r < koff.size(); ++r)
    for (std::size_t c = 0; c < koff.size(); ++c) {
      cplx acc{};
      for (const std::size_t t : toff) acc += m(koff[r] + t, koff[c] + t);
      out(r, c) = acc;
    }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, const RegisterLayout& layout,
                                   std::initializer_list<std::string> traced) {
  const std::vector<std::string> t(traced);
  return partial_trace(m, layout, std::span<const std::string>(t));
}

/// Places `m` (an operator over `layout`) inside `target`, tensoring with the
/// identity on every register of `target` that `layout` lacks and permuting
/// the shared registers into `target` order.
inline ComplexMatrix embed(const ComplexMatrix& m, const RegisterLayout& layout,
                           const RegisterLayout& target) {
  if (!m.is_square() || m.rows() != layout.total_dim())
    throw DimensionError("embed: matrix does not match layout");
  std::vector<Register> rest;
  for (const auto& r : target.registers())
    if (!layout.contains(r.name)) rest.push_back(r);
  const RegisterLayout il(std::move(rest));
  if (layout.total_dim() * il.total_dim() != target.total_dim())
    throw DimensionError("embed: layout is not a sub-layout of target");
  const auto loff = detail::embedded_offsets(layout, target);
  const auto ioff = detail::embedded_offsets(il, target);
  ComplexMatrix out(target.total_dim(), target.total_dim());
  for (std::size_t r = 0; r < loff.size(); ++r)
    for (std::size_t c = 0; c < loff.size(); ++c) {
      const cplx v = m(r, c);
      if (v == cplx{}) continue;
      for (const std::size_t e : ioff) out(loff[r] + e, loff[c] + e) = v;
    }
  return out;
}

/// Connected components of the nonzero pattern of a square matrix. A
/// Hermitian matrix is a direct sum over these index sets, so spectral work
/// can be done block by block without approximation.
inline std::vector<std::vector<std::size_t>> connected_blocks(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) != cplx{} || m(j, i) != cplx{}) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

struct EigenSystem {
  std::vector<double> values;  // nondecreasing
  ComplexMatrix vectors;       // column k pairs with values[k]
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("expected a square matrix");
  const double tol = 1e-12 * std::max(1.0, m.max_abs());
  if (!m.is_hermitian(tol)) throw NotHermitianError();
}

/// Dense Hermitian eigensolve (Householder tridiagonalization + implicit QL).
inline void dense_eigh(const ComplexMatrix& m, std::span<const std::size_t> idx,
                       bool want_vectors, std::vector<double>& values,
                       std::vector<std::vector<cplx>>* vectors) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  bool real = true;
  for (std::size_t a = 0; a < idx.size() && real; ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (m(idx[a], idx[b]).imag() != 0.0) { real = false; break; }
  const auto opts = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (real) {
    Eigen::MatrixXd a(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c)
        a(r, c) = 0.5 * (m(idx[r], idx[c]).real() + m(idx[c], idx[r]).real());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, opts);
    for (Eigen::Index i = 0; i < k; ++i) values.push_back(es.eigenvalues()(i));
    if (vectors)
      for (Eigen::Index i = 0; i < k; ++i) {
        std::vector<cplx> v(idx.size());
        for (Eigen::Index r = 0; r < k; ++r) v[r] = es.eigenvectors()(r, i);
        vectors->push_back(std::move(v));
      }
  } else {
    Eigen::MatrixXcd a(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c)
        a(r, c) = 0.5 * (m(idx[r], idx[c]) + std::conj(m(idx[c], idx[r])));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, opts);
    for (Eigen::Index i = 0; i < k; ++i) values.push_back(es.eigenvalues()(i));
    if (vectors)
      for (Eigen::Index i = 0; i < k; ++i) {
        std::vector<cplx> v(idx.size());
        for (Eigen::Index r = 0; r < k; ++r) v[r] = es.eigenvectors()(r, i);
        vectors->push_back(std::move(v));
      }
  }
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
inline std::vector<double> hermitian_spectrum(const ComplexMatrix& m) {
  detail::require_hermitian(m);
  std::vector<double> values;
  values.reserve(m.rows());
  for (const auto& block : connected_blocks(m))
    detail::dense_eigh(m, block, false, values, nullptr);
  std::sort(values.begin(), values.end());
  return values;
}

inline double min_eig(const ComplexMatrix& m) {
  const auto s = hermitian_spectrum(m);
  return s.empty() ? 0.0 : s.front();
}

inline double max_eig(const ComplexMatrix& m) {
  const auto s = hermitian_spectrum(m);
  return s.empty() ? 0.0 : s.back();
}

inline EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
  detail::require_hermitian(m);
  const std::size_t n = m.rows();
  const auto blocks = connected_blocks(m);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> order;
  std::vector<std::vector<std::vector<cplx>>> vecs(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::vector<double> vals;
    detail::dense_eigh(m, blocks[b], true, vals, &vecs[b]);
    for (std::size_t i = 0; i < vals.size(); ++i) order.push_back({vals[i], {b, i}});
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  EigenSystem es{{}, ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < order.size(); ++k) {
    es.values.push_back(order[k].first);
    const auto [b, i] = order[k].second;
    for (std::size_t r = 0; r < blocks[b].size(); ++r) es.vectors(blocks[b][r], k) = vecs[b][i][r];
  }
  return es;
}

/// Nearest positive semidefinite matrix in Frobenius norm.
inline ComplexMatrix psd_project(const ComplexMatrix& m) {
  detail::require_hermitian(m);
  ComplexMatrix out(m.rows(), m.cols());
  for (const auto& block : connected_blocks(m)) {
    std::vector<double> vals;
    std::vector<std::vector<cplx>> vecs;
    detail::dense_eigh(m, block, true, vals, &vecs);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (vals[k] <= 0.0) continue;
      const auto& v = vecs[k];
      for (std::size_t a = 0; a < block.size(); ++a)
        for (std::size_t b = 0; b < block.size(); ++b)
          out(block[a], block[b]) += vals[k] * v[a] * std::conj(v[b]);
    }
  }
  return out;
}

}  // namespace otm::linalg
