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
 * First-order operator-splitting solver for SdpInstance.
 *
 * The problem is brought to the form
 *     min <c, x>   s.t.   A x + s = b,   x in K_x,   s in K_s
 * with one slack s_j per constraint (PSD for inequalities after sign
 * normalization, {0} for equalities). ADMM alternates a projection onto the
 * affine set, using a once-factorized (A A^T + I), with a projection onto the
 * cones, using linalg::psd_project per diagonal block.
 *
 * Iterates are stored as coordinates over a sparsity pattern fixed before the
 * first iteration: the smallest block-diagonal pattern (per variable and per
 * constraint) containing the constants, the objective weights and the
 * identity, and closed under every constraint map and its adjoint. Every step
 * of the iteration maps this pattern into itself, so nothing is lost.
 */

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "otm/errors.hpp"
#include "otm/linalg.hpp"
#include "otm/sdp/instance.hpp"
#include "otm/sdp/verify.hpp"

namespace otm::sdp {

enum class Status { kOptimal, kMaxIters, kInfeasibleSuspected };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kMaxIters: return "max-iters";
    case Status::kInfeasibleSuspected: return "infeasible-suspected";
  }
  return "unknown";
}

struct SolveOptions {
  double tol = 1e-6;
  std::size_t max_iters = 200000;
  std::uint64_t seed = 0;
  double alpha = 1.6;
  double rho = 1.0;
  std::size_t max_dim = 4096;
  std::size_t ruiz_passes = 10;
  std::function<void(std::size_t, double, double, double)> on_progress;
};

struct SdpSolution {
  std::vector<ComplexMatrix> x;
  double objective = 0.0;
  Status status = Status::kMaxIters;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double wall_ms = 0.0;
  CertificateReport certificate;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

/// Block pattern of one matrix: disjoint index sets, each filled densely.
struct BlockPattern {
  std::size_t dim = 0;
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> comp_offset;  // first coordinate of each component
  std::size_t offset = 0;                // first coordinate in the global vector
  std::unordered_map<std::uint64_t, std::size_t> coord;

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& c : comps) s += c.size() * c.size();
    return s;
  }

  void build(UnionFind& uf, std::size_t global_offset) {
    offset = global_offset;
    std::unordered_map<std::size_t, std::size_t> root_to_comp;
    comps.clear();
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t r = uf.find(i);
      auto [it, fresh] = root_to_comp.emplace(r, comps.size());
      if (fresh) comps.emplace_back();
      comps[it->second].push_back(i);
    }
    comp_offset.clear();
    coord.clear();
    std::size_t pos = global_offset;
    for (const auto& c : comps) {
      comp_offset.push_back(pos);
      for (std::size_t a : c)
        for (std::size_t b : c) coord[static_cast<std::uint64_t>(a) * dim + b] = pos++;
    }
  }

  std::size_t at(std::size_t r, std::size_t c) const {
    auto it = coord.find(static_cast<std::uint64_t>(r) * dim + c);
    if (it == coord.end()) throw std::logic_error("entry outside the closed pattern");
    return it->second;
  }
};

/// Index tables realizing one constraint term as an entrywise map.
struct TermMap {
  std::size_t var = 0;
  std::size_t con = 0;
  double coeff = 1.0;
  std::vector<std::size_t> var_a, var_t;  // var index -> (kept, traced)
  std::vector<std::size_t> con_a, con_e;  // constraint index -> (kept, identity)
  std::vector<std::size_t> kv, tv, kc, ic;

  TermMap(const SdpInstance& inst, std::size_t c, const Term& t, double sign) {
    var = inst.variable_index(t.var);
    con = c;
    coeff = sign * t.coeff;
    const RegisterLayout vl = inst.layout(inst.variables[var].registers);
    const RegisterLayout cl = inst.layout(inst.constraints[c].registers);
    const RegisterLayout kept = vl.without(t.partial_trace);
    std::vector<Register> tr;
    for (const auto& r : vl.registers())
      if (!kept.contains(r.name)) tr.push_back(r);
    const RegisterLayout traced(std::move(tr));
    std::vector<Register> id;
    for (const auto& r : cl.registers())
      if (!kept.contains(r.name)) id.push_back(r);
    const RegisterLayout ident(std::move(id));
    kv = linalg::detail::embedded_offsets(kept, vl);
    tv = linalg::detail::embedded_offsets(traced, vl);
    kc = linalg::detail::embedded_offsets(kept, cl);
    ic = linalg::detail::embedded_offsets(ident, cl);
    var_a.assign(vl.total_dim(), 0);
    var_t.assign(vl.total_dim(), 0);
    for (std::size_t a = 0; a < kv.size(); ++a)
      for (std::size_t k = 0; k < tv.size(); ++k) {
        var_a[kv[a] + tv[k]] = a;
        var_t[kv[a] + tv[k]] = k;
      }
    con_a.assign(cl.total_dim(), 0);
    con_e.assign(cl.total_dim(), 0);
    for (std::size_t a = 0; a < kc.size(); ++a)
      for (std::size_t e = 0; e < ic.size(); ++e) {
        con_a[kc[a] + ic[e]] = a;
        con_e[kc[a] + ic[e]] = e;
      }
  }

  template <typename F>
  void forward(std::size_t r, std::size_t c, F&& f) const {
    if (var_t[r] != var_t[c]) return;
    for (std::size_t e : ic) f(kc[var_a[r]] + e, kc[var_a[c]] + e);
  }

  template <typename F>
  void adjoint(std::size_t r, std::size_t c, F&& f) const {
    if (con_e[r] != con_e[c]) return;
    for (std::size_t t : tv) f(kv[con_a[r]] + t, kv[con_a[c]] + t);
  }
};

template <typename F>
void for_each_pair(UnionFind& uf, std::size_t dim, F&& f) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dim; ++i) groups[uf.find(i)].push_back(i);
  for (const auto& [root, idx] : groups)
    for (std::size_t a : idx)
      for (std::size_t b : idx) f(a, b);
}

using Vec = Eigen::VectorXcd;

/// Hermitian projection of one pattern component onto the PSD cone.
inline void project_component(Vec& v, std::size_t off, std::size_t k) {
  ComplexMatrix m(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) m(a, b) = v[static_cast<Eigen::Index>(off + a * k + b)];
  ComplexMatrix h = m + m.adjoint();
  h *= 0.5;
  const ComplexMatrix p = linalg::psd_project(h);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) v[static_cast<Eigen::Index>(off + a * k + b)] = p(a, b);
}

inline void symmetrize_component(Vec& v, std::size_t off, std::size_t k) {
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      const auto i = static_cast<Eigen::Index>(off + a * k + b);
      const auto j = static_cast<Eigen::Index>(off + b * k + a);
      const cplx s = 0.5 * (v[i] + std::conj(v[j]));
      v[i] = s;
      v[j] = std::conj(s);
    }
}

}  // namespace detail

/// Solves `inst`; residuals in the returned certificate are recomputed by
/// verify_certificate at 10 * tol. The iteration is deterministic, so
/// `opts.seed` does not influence the result.
inline SdpSolution solve(const SdpInstance& inst, const SolveOptions& opts = {}) {
  using detail::BlockPattern;
  using detail::TermMap;
  using detail::UnionFind;
  using detail::Vec;
  const auto t0 = std::chrono::steady_clock::now();
  inst.validate();
  if (inst.max_constraint_dim() > opts.max_dim)
    throw SizeCapError("largest constraint dimension " + std::to_string(inst.max_constraint_dim()) +
                       " exceeds the solver cap " + std::to_string(opts.max_dim));
  const std::size_t nv = inst.variables.size();
  const std::size_t nc = inst.constraints.size();

  std::vector<double> sign(nc, 1.0);
  for (std::size_t c = 0; c < nc; ++c)
    if (inst.constraints[c].sense == Sense::kGe) sign[c] = -1.0;

  std::vector<TermMap> maps;
  for (std::size_t c = 0; c < nc; ++c)
    for (const auto& t : inst.constraints[c].terms) maps.emplace_back(inst, c, t, sign[c]);

  // Pattern closure.
  std::vector<UnionFind> vuf, cuf;
  std::vector<std::size_t> vdim(nv), cdim(nc);
  for (std::size_t v = 0; v < nv; ++v) vuf.emplace_back(vdim[v] = inst.variable_dim(v));
  for (std::size_t c = 0; c < nc; ++c) cuf.emplace_back(cdim[c] = inst.constraint_dim(c));
  for (std::size_t c = 0; c < nc; ++c)
    if (const auto& k = inst.constraints[c].constant)
      for (const auto& e : inst.constants[*k].entries) cuf[c].unite(e.i, e.j);
  for (const auto& t : inst.objective.terms)
    if (t.weight)
      for (const auto& e : inst.constants[*t.weight].entries)
        vuf[inst.variable_index(t.var)].unite(e.i, e.j);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& tm : maps) {
      detail::for_each_pair(vuf[tm.var], vdim[tm.var], [&](std::size_t r, std::size_t c) {
        tm.forward(r, c, [&](std::size_t R, std::size_t C) { changed |= cuf[tm.con].unite(R, C); });
      });
      detail::for_each_pair(cuf[tm.con], cdim[tm.con], [&](std::size_t R, std::size_t C) {
        tm.adjoint(R, C, [&](std::size_t r, std::size_t c) { changed |= vuf[tm.var].unite(r, c); });
      });
    }
  }
  std::vector<BlockPattern> vp(nv), cp(nc);
  std::size_t nx = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    vp[v].dim = vdim[v];
    vp[v].build(vuf[v], nx);
    nx += vp[v].size();
  }
  std::size_t ns = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    cp[c].dim = cdim[c];
    cp[c].build(cuf[c], ns);
    ns += cp[c].size();
  }

  // A, b, c in coordinates.
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& tm : maps) {
    const auto& pv = vp[tm.var];
    const auto& pc = cp[tm.con];
    for (std::size_t q = 0; q < pv.comps.size(); ++q) {
      const auto& comp = pv.comps[q];
      const std::size_t k = comp.size();
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
          const std::size_t col = pv.comp_offset[q] + a * k + b;
          tm.forward(comp[a], comp[b], [&](std::size_t R, std::size_t C) {
            trip.emplace_back(static_cast<int>(pc.at(R, C)), static_cast<int>(col), tm.coeff);
          });
        }
    }
  }
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(nx));
  A.setFromTriplets(trip.begin(), trip.end());
  Vec b = Vec::Zero(static_cast<Eigen::Index>(ns));
  for (std::size_t c = 0; c < nc; ++c)
    if (const auto& k = inst.constraints[c].constant)
      for (const auto& e : inst.constants[*k].entries)
        b[static_cast<Eigen::Index>(cp[c].at(e.i, e.j))] -= sign[c] * e.v;
  Vec cvec = Vec::Zero(static_cast<Eigen::Index>(nx));
  const double osign = inst.objective.sense == ObjectiveSense::kMax ? -1.0 : 1.0;
  for (const auto& t : inst.objective.terms) {
    const std::size_t v = inst.variable_index(t.var);
    if (t.weight) {
      for (const auto& e : inst.constants[*t.weight].entries)
        cvec[static_cast<Eigen::Index>(vp[v].at(e.i, e.j))] += osign * t.coeff * e.v;
    } else {
      for (std::size_t i = 0; i < vdim[v]; ++i)
        cvec[static_cast<Eigen::Index>(vp[v].at(i, i))] += osign * t.coeff;
    }
  }

  // Block Ruiz equilibration: one positive scalar per constraint (rows) and
  // per variable (columns), so every cone is preserved.
  std::vector<std::size_t> row_block(ns), col_block(nx);
  for (std::size_t c = 0; c < nc; ++c)
    std::fill(row_block.begin() + static_cast<std::ptrdiff_t>(cp[c].offset),
              row_block.begin() + static_cast<std::ptrdiff_t>(cp[c].offset + cp[c].size()), c);
  for (std::size_t v = 0; v < nv; ++v)
    std::fill(col_block.begin() + static_cast<std::ptrdiff_t>(vp[v].offset),
              col_block.begin() + static_cast<std::ptrdiff_t>(vp[v].offset + vp[v].size()), v);
  std::vector<double> D(nc, 1.0), E(nv, 1.0);
  for (std::size_t pass = 0; pass < opts.ruiz_passes; ++pass) {
    std::vector<double> rn(nc, 0.0), cn(nv, 0.0);
    for (int k = 0; k < A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
        const double v = D[row_block[it.row()]] * it.value() * E[col_block[it.col()]];
        rn[row_block[it.row()]] = std::max(rn[row_block[it.row()]], std::abs(v));
        cn[col_block[it.col()]] = std::max(cn[col_block[it.col()]], std::abs(v));
      }
    for (std::size_t c = 0; c < nc; ++c)
      if (rn[c] > 0) D[c] /= std::sqrt(rn[c]);
    for (std::size_t v = 0; v < nv; ++v)
      if (cn[v] > 0) E[v] /= std::sqrt(cn[v]);
  }
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      it.valueRef() *= D[row_block[it.row()]] * E[col_block[it.col()]];
  for (Eigen::Index i = 0; i < b.size(); ++i) b[i] *= D[row_block[i]];
  for (Eigen::Index i = 0; i < cvec.size(); ++i) cvec[i] *= E[col_block[i]];

  Eigen::SparseMatrix<double> G = A * A.transpose();
  for (Eigen::Index i = 0; i < G.rows(); ++i) G.coeffRef(i, i) += 1.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(G);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("factorization of A A^T + I failed");
  const Eigen::SparseMatrix<double> At = A.transpose();

  auto project_cones = [&](Vec& vx, Vec& vs) {
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t q = 0; q < vp[v].comps.size(); ++q) {
        const std::size_t k = vp[v].comps[q].size();
        if (inst.variables[v].cone == Cone::kPsd)
          detail::project_component(vx, vp[v].comp_offset[q], k);
        else
          detail::symmetrize_component(vx, vp[v].comp_offset[q], k);
      }
    for (std::size_t c = 0; c < nc; ++c) {
      if (inst.constraints[c].sense == Sense::kEq) {
        vs.segment(static_cast<Eigen::Index>(cp[c].offset), static_cast<Eigen::Index>(cp[c].size()))
            .setZero();
        continue;
      }
      for (std::size_t q = 0; q < cp[c].comps.size(); ++q)
        detail::project_component(vs, cp[c].comp_offset[q], cp[c].comps[q].size());
    }
  };
  auto solve_gram = [&](const Vec& r) {
    const Eigen::VectorXd re = ldlt.solve(Eigen::VectorXd(r.real()));
    const Eigen::VectorXd im = ldlt.solve(Eigen::VectorXd(r.imag()));
    Vec y(r.size());
    y.real() = re;
    y.imag() = im;
    return y;
  };

  const auto Nx = static_cast<Eigen::Index>(nx);
  const auto Ns = static_cast<Eigen::Index>(ns);
  Vec vx = Vec::Zero(Nx), vs = Vec::Zero(Ns), lx = Vec::Zero(Nx), ls = Vec::Zero(Ns);
  double rho = opts.rho;
  double prev_obj = 0.0;
  SdpSolution sol;
  double rp = 0.0, rd = 0.0;
  bool converged = false;
  std::size_t it = 0;
  for (it = 1; it <= opts.max_iters; ++it) {
    const Vec wx = vx - lx - cvec / rho;
    const Vec ws = vs - ls;
    const Vec y = solve_gram(Vec(A.cast<cplx>() * wx) + ws - b);
    const Vec ux = wx - At.cast<cplx>() * y;
    const Vec us = ws - y;
    const Vec hx = opts.alpha * ux + (1.0 - opts.alpha) * vx;
    const Vec hs = opts.alpha * us + (1.0 - opts.alpha) * vs;
    Vec nvx = hx + lx;
    Vec nvs = hs + ls;
    project_cones(nvx, nvs);
    lx += hx - nvx;
    ls += hs - nvs;
    const double du = std::sqrt((ux - nvx).squaredNorm() + (us - nvs).squaredNorm());
    const double dv = std::sqrt((nvx - vx).squaredNorm() + (nvs - vs).squaredNorm());
    const double un = std::sqrt(ux.squaredNorm() + us.squaredNorm());
    const double vn = std::sqrt(nvx.squaredNorm() + nvs.squaredNorm());
    const double ln = std::sqrt(lx.squaredNorm() + ls.squaredNorm());
    vx = std::move(nvx);
    vs = std::move(nvs);
    rp = du / (1.0 + std::max(un, vn));
    rd = rho * dv / (1.0 + rho * ln);
    const double obj = cvec.dot(vx).real();
    const double dobj = std::abs(obj - prev_obj) / (1.0 + std::abs(obj));
    prev_obj = obj;
    if (opts.on_progress && it % 1000 == 0) opts.on_progress(it, rp, rd, osign * obj);
    if (rp <= opts.tol && rd <= opts.tol && dobj <= opts.tol) {
      converged = true;
      break;
    }
    if (it % 25 == 0) {
      double scale = 1.0;
      if (rp > 10.0 * rd) scale = 2.0;
      else if (rd > 10.0 * rp) scale = 0.5;
      if (scale != 1.0 && rho * scale >= 1e-6 && rho * scale <= 1e6) {
        rho *= scale;
        lx /= scale;
        ls /= scale;
      }
    }
  }
  sol.iterations = std::min(it, opts.max_iters);
  sol.primal_residual = rp;
  sol.dual_residual = rd;
  const bool stuck = sol.iterations >= 1000 && rp > 1e3 * opts.tol;
  sol.status = converged ? Status::kOptimal : (stuck ? Status::kInfeasibleSuspected : Status::kMaxIters);

  sol.x.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    ComplexMatrix x(vdim[v], vdim[v]);
    for (std::size_t q = 0; q < vp[v].comps.size(); ++q) {
      const auto& comp = vp[v].comps[q];
      const std::size_t k = comp.size();
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = 0; c < k; ++c)
          x(comp[a], comp[c]) = E[v] * vx[static_cast<Eigen::Index>(vp[v].comp_offset[q] + a * k + c)];
    }
    ComplexMatrix h = x + x.adjoint();
    h *= 0.5;
    sol.x.push_back(std::move(h));
  }
  sol.certificate = verify_certificate(inst, sol.x, 10.0 * opts.tol);
  sol.objective = sol.certificate.objective;
  sol.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

}  // namespace otm::sdp
