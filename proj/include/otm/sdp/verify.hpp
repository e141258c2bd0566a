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

#include <algorithm>
#include <string>
#include <vector>

#include "otm/errors.hpp"
#include "otm/linalg.hpp"
#include "otm/sdp/instance.hpp"

namespace otm::sdp {

struct Check {
  std::string name;
  double violation = 0.0;
  bool ok = true;
};

struct CertificateReport {
  double objective = 0.0;
  std::vector<Check> constraints;
  std::vector<Check> cones;
  double max_violation = 0.0;
  std::string worst;
  double tol = 0.0;
  bool pass = false;
};

/// Recomputes every constraint and cone residual from raw assignments with
/// the dense linalg routines (partial_trace, embed, hermitian_spectrum).
inline CertificateReport verify_certificate(const SdpInstance& inst,
                                            const std::vector<ComplexMatrix>& xs, double tol) {
  if (xs.size() != inst.variables.size())
    throw DimensionError("assignment has " + std::to_string(xs.size()) + " matrices, instance has " +
                         std::to_string(inst.variables.size()) + " variables");
  for (std::size_t v = 0; v < xs.size(); ++v)
    if (!xs[v].is_square() || xs[v].rows() != inst.variable_dim(v))
      throw DimensionError("assignment for " + inst.variables[v].name + " has the wrong shape");
  CertificateReport rep;
  rep.tol = tol;
  auto note = [&](std::vector<Check>& list, const std::string& name, double viol) {
    list.push_back({name, viol, viol <= tol});
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.worst = name;
    }
  };
  for (std::size_t v = 0; v < xs.size(); ++v) {
    const auto& var = inst.variables[v];
    ComplexMatrix h = xs[v];
    const double asym = linalg::max_abs_diff(h, h.adjoint());
    double viol = asym;
    if (var.cone == Cone::kPsd) {
      h += h.adjoint();
      h *= 0.5;
      viol = std::max(viol, std::max(0.0, -linalg::min_eig(h)));
    }
    note(rep.cones, var.name, viol);
  }
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    ComplexMatrix mat = constraint_operator_dense(inst, c, xs);
    ComplexMatrix herm = mat + mat.adjoint();
    herm *= 0.5;
    double viol = 0.0;
    switch (inst.constraints[c].sense) {
      case Sense::kLe: viol = std::max(0.0, linalg::max_eig(herm)); break;
      case Sense::kGe: viol = std::max(0.0, -linalg::min_eig(herm)); break;
      case Sense::kEq: viol = mat.max_abs(); break;
    }
    note(rep.constraints, inst.constraints[c].name, viol);
  }
  rep.objective = objective_value(inst, xs);
  rep.pass = std::all_of(rep.cones.begin(), rep.cones.end(), [](const Check& k) { return k.ok; }) &&
             std::all_of(rep.constraints.begin(), rep.constraints.end(),
                         [](const Check& k) { return k.ok; });
  return rep;
}

}  // namespace otm::sdp
