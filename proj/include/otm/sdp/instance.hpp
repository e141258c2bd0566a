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
 * Language-neutral description of a multi-variable Hermitian SDP.
 *
 * Every constraint has the form  sum_k coeff_k * M_k(X_{v_k}) + C  (sense) 0
 * where M_k traces out some registers of the variable and tensors the result
 * with identities on others, landing on the constraint's registers. Register
 * order inside a constraint may differ from the variable's; the map permutes.
 */

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "otm/errors.hpp"
#include "otm/linalg.hpp"

namespace otm::sdp {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::Register;
using linalg::RegisterLayout;

enum class Cone { kPsd, kFree };

/// Constraint sense: LE means (terms + C) is negative semidefinite.
enum class Sense { kLe, kGe, kEq };

enum class ObjectiveSense { kMin, kMax };

struct SparseEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  cplx v;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Hermitian matrix given by its nonzero entries (both triangles).
struct SparseHermitian {
  std::size_t dim = 0;
  std::vector<SparseEntry> entries;

  static SparseHermitian from_dense(const ComplexMatrix& m, double drop = 0.0) {
    SparseHermitian s{m.rows(), {}};
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (std::abs(m(i, j)) > drop) s.entries.push_back({i, j, m(i, j)});
    return s;
  }

  static SparseHermitian identity(std::size_t dim) {
    SparseHermitian s{dim, {}};
    for (std::size_t i = 0; i < dim; ++i) s.entries.push_back({i, i, 1.0});
    return s;
  }

  ComplexMatrix dense() const {
    ComplexMatrix m(dim, dim);
    for (const auto& e : entries) m(e.i, e.j) += e.v;
    return m;
  }

  friend bool operator==(const SparseHermitian&, const SparseHermitian&) = default;
};

struct Variable {
  std::string name;
  std::vector<std::string> registers;
  Cone cone = Cone::kPsd;
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  std::string var;
  double coeff = 1.0;
  std::vector<std::string> partial_trace;
  std::vector<std::string> tensor_identity;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::string name;
  std::vector<std::string> registers;
  Sense sense = Sense::kLe;
  std::vector<Term> terms;
  std::optional<std::size_t> constant;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// coeff * <W, X_var>; W is the identity when `weight` is empty.
struct ObjectiveTerm {
  std::string var;
  double coeff = 1.0;
  std::optional<std::size_t> weight;
  friend bool operator==(const ObjectiveTerm&, const ObjectiveTerm&) = default;
};

struct Objective {
  ObjectiveSense sense = ObjectiveSense::kMin;
  std::vector<ObjectiveTerm> terms;
  friend bool operator==(const Objective&, const Objective&) = default;
};

struct SdpInstance {
  std::string name;
  std::vector<Register> registers;
  std::vector<Variable> variables;
  std::vector<SparseHermitian> constants;
  std::vector<Constraint> constraints;
  Objective objective;

  friend bool operator==(const SdpInstance&, const SdpInstance&) = default;

  const Register& reg(const std::string& name) const {
    for (const auto& r : registers)
      if (r.name == name) return r;
    throw UnknownRegisterError(name);
  }

  RegisterLayout layout(const std::vector<std::string>& names) const {
    std::vector<Register> regs;
    for (const auto& n : names) regs.push_back(reg(n));
    return RegisterLayout(std::move(regs));
  }

  std::size_t variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
      if (variables[i].name == name) return i;
    throw InvalidArgument("unknown variable '" + name + "'");
  }

  std::size_t variable_dim(std::size_t v) const {
    return layout(variables[v].registers).total_dim();
  }

  std::size_t constraint_dim(std::size_t c) const {
    return layout(constraints[c].registers).total_dim();
  }

  std::size_t max_constraint_dim() const {
    std::size_t d = 0;
    for (std::size_t c = 0; c < constraints.size(); ++c) d = std::max(d, constraint_dim(c));
    return d;
  }

  /// Structural checks; throws DimensionError / InvalidArgument.
  void validate() const {
    RegisterLayout(std::vector<Register>(registers));
    std::set<std::string> names;
    for (const auto& v : variables) {
      if (!names.insert(v.name).second) throw InvalidArgument("duplicate variable " + v.name);
      layout(v.registers);
    }
    for (const auto& k : constants) {
      for (const auto& e : k.entries)
        if (e.i >= k.dim || e.j >= k.dim) throw DimensionError("constant entry out of range");
      if (!k.dense().is_hermitian(1e-12)) throw NotHermitianError();
    }
    for (const auto& c : constraints) {
      const RegisterLayout cl = layout(c.registers);
      if (c.constant) {
        if (*c.constant >= constants.size())
          throw InvalidArgument("constraint " + c.name + " references a missing constant");
        if (constants[*c.constant].dim != cl.total_dim())
          throw DimensionError("constraint " + c.name + " constant has the wrong dimension");
      }
      for (const auto& t : c.terms) check_term(t, cl, c.name);
    }
    for (const auto& t : objective.terms) {
      const std::size_t v = variable_index(t.var);
      if (t.weight) {
        if (*t.weight >= constants.size()) throw InvalidArgument("objective weight missing");
        if (constants[*t.weight].dim != variable_dim(v))
          throw DimensionError("objective weight has the wrong dimension");
      }
    }
  }

  void check_term(const Term& t, const RegisterLayout& cl, const std::string& cname) const {
    const auto& var = variables[variable_index(t.var)];
    std::multiset<std::string> lhs;
    for (const auto& r : var.registers) lhs.insert(r);
    for (const auto& r : t.partial_trace) {
      auto it = lhs.find(r);
      if (it == lhs.end())
        throw DimensionError("constraint " + cname + ": traced register " + r +
                             " is not on variable " + t.var);
      lhs.erase(it);
    }
    for (const auto& r : t.tensor_identity) lhs.insert(r);
    std::multiset<std::string> want;
    for (const auto& n : cl.names()) want.insert(n);
    if (lhs != want)
      throw DimensionError("constraint " + cname + ": term on " + t.var +
                           " does not land on the constraint registers");
  }
};

/// Dense image of one term, computed with the generic linalg routines.
inline ComplexMatrix apply_term_dense(const SdpInstance& inst, const Term& t,
                                      const ComplexMatrix& x, const RegisterLayout& target) {
  const auto& var = inst.variables[inst.variable_index(t.var)];
  const RegisterLayout vl = inst.layout(var.registers);
  const RegisterLayout kept = vl.without(t.partial_trace);
  ComplexMatrix reduced = t.partial_trace.empty()
                              ? x
                              : linalg::partial_trace(x, vl, std::span<const std::string>(t.partial_trace));
  ComplexMatrix out = linalg::embed(reduced, kept, target);
  out *= t.coeff;
  return out;
}

/// Dense left-hand side  sum_k coeff_k M_k(X) + C  of constraint `c`.
inline ComplexMatrix constraint_operator_dense(const SdpInstance& inst, std::size_t c,
                                               const std::vector<ComplexMatrix>& xs) {
  const auto& con = inst.constraints[c];
  const RegisterLayout cl = inst.layout(con.registers);
  ComplexMatrix acc = con.constant ? inst.constants[*con.constant].dense()
                                   : ComplexMatrix(cl.total_dim(), cl.total_dim());
  for (const auto& t : con.terms) acc += apply_term_dense(inst, t, xs[inst.variable_index(t.var)], cl);
  return acc;
}

inline double objective_value(const SdpInstance& inst, const std::vector<ComplexMatrix>& xs) {
  double f = 0.0;
  for (const auto& t : inst.objective.terms) {
    const auto& x = xs[inst.variable_index(t.var)];
    const double w = t.weight ? linalg::frobenius_inner(inst.constants[*t.weight].dense(), x)
                              : x.trace().real();
    f += t.coeff * w;
  }
  return f;
}

}  // namespace otm::sdp
