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
 * JSON serialization of SdpInstance / SdpSolution and SDPA sparse export.
 */

#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "otm/errors.hpp"
#include "otm/sdp/instance.hpp"
#include "otm/sdp/solver.hpp"

namespace otm::sdp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInstanceSchemaVersion = "1.0";

inline std::string sense_name(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=0";
    case Sense::kGe: return ">=0";
    case Sense::kEq: return "=0";
  }
  return "?";
}

inline Sense parse_sense(const std::string& s) {
  if (s == "<=0") return Sense::kLe;
  if (s == ">=0") return Sense::kGe;
  if (s == "=0") return Sense::kEq;
  throw InvalidArgument("unknown constraint sense '" + s + "'");
}

inline Json to_json(const SparseHermitian& h) {
  Json entries = Json::array();
  for (const auto& e : h.entries) entries.push_back({e.i, e.j, e.v.real(), e.v.imag()});
  return {{"dim", h.dim}, {"entries", entries}};
}

inline Json to_json(const SdpInstance& inst) {
  Json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["name"] = inst.name;
  Json regs = Json::array();
  for (const auto& r : inst.registers) regs.push_back({{"name", r.name}, {"dim", r.dim}});
  j["layout"] = {{"registers", regs}};
  Json vars = Json::array();
  for (std::size_t v = 0; v < inst.variables.size(); ++v) {
    const auto& var = inst.variables[v];
    vars.push_back({{"name", var.name},
                    {"dim", inst.variable_dim(v)},
                    {"registers", var.registers},
                    {"cone", var.cone == Cone::kPsd ? "psd" : "free"}});
  }
  j["variables"] = vars;
  Json consts = Json::array();
  for (const auto& c : inst.constants) consts.push_back(to_json(c));
  j["constants"] = consts;
  Json cons = Json::array();
  for (const auto& c : inst.constraints) {
    Json terms = Json::array();
    for (const auto& t : c.terms)
      terms.push_back({{"var", t.var},
                       {"coeff", t.coeff},
                       {"pre_op", {{"partial_trace", t.partial_trace}}},
                       {"post_op", {{"tensor_identity", t.tensor_identity}}}});
    Json cj = {{"name", c.name}, {"registers", c.registers}, {"sense", sense_name(c.sense)}, {"terms", terms}};
    cj["constant_block_ref"] = c.constant ? Json(*c.constant) : Json(nullptr);
    cons.push_back(cj);
  }
  j["constraints"] = cons;
  Json obj = Json::array();
  for (const auto& t : inst.objective.terms)
    obj.push_back({{"var", t.var},
                   {"coeff", t.coeff},
                   {"weight_ref", t.weight ? Json(*t.weight) : Json(nullptr)}});
  j["objective"] = {{"sense", inst.objective.sense == ObjectiveSense::kMin ? "min" : "max"},
                    {"terms", obj}};
  return j;
}

inline SdpInstance instance_from_json(const Json& j) {
  try {
    SdpInstance inst;
    inst.name = j.value("name", "");
    for (const auto& r : j.at("layout").at("registers"))
      inst.registers.push_back({r.at("name").get<std::string>(), r.at("dim").get<std::size_t>()});
    for (const auto& v : j.at("variables")) {
      const std::string cone = v.at("cone").get<std::string>();
      if (cone != "psd" && cone != "free") throw InvalidArgument("unknown cone '" + cone + "'");
      inst.variables.push_back({v.at("name").get<std::string>(),
                                v.at("registers").get<std::vector<std::string>>(),
                                cone == "psd" ? Cone::kPsd : Cone::kFree});
    }
    for (const auto& c : j.at("constants")) {
      SparseHermitian h{c.at("dim").get<std::size_t>(), {}};
      for (const auto& e : c.at("entries"))
        h.entries.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                             cplx(e.at(2).get<double>(), e.at(3).get<double>())});
      inst.constants.push_back(std::move(h));
    }
    for (const auto& c : j.at("constraints")) {
      Constraint con;
      con.name = c.at("name").get<std::string>();
      con.registers = c.at("registers").get<std::vector<std::string>>();
      con.sense = parse_sense(c.at("sense").get<std::string>());
      for (const auto& t : c.at("terms"))
        con.terms.push_back({t.at("var").get<std::string>(), t.at("coeff").get<double>(),
                             t.at("pre_op").at("partial_trace").get<std::vector<std::string>>(),
                             t.at("post_op").at("tensor_identity").get<std::vector<std::string>>()});
      const auto& ref = c.at("constant_block_ref");
      if (!ref.is_null()) con.constant = ref.get<std::size_t>();
      inst.constraints.push_back(std::move(con));
    }
    const auto& o = j.at("objective");
    const std::string sense = o.at("sense").get<std::string>();
    if (sense != "min" && sense != "max") throw InvalidArgument("unknown objective sense '" + sense + "'");
    inst.objective.sense = sense == "min" ? ObjectiveSense::kMin : ObjectiveSense::kMax;
    for (const auto& t : o.at("terms")) {
      ObjectiveTerm ot{t.at("var").get<std::string>(), t.at("coeff").get<double>(), std::nullopt};
      if (t.contains("weight_ref") && !t.at("weight_ref").is_null())
        ot.weight = t.at("weight_ref").get<std::size_t>();
      inst.objective.terms.push_back(std::move(ot));
    }
    inst.validate();
    return inst;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed instance JSON: ") + e.what());
  }
}

inline Json to_json(const SdpSolution& sol, const SdpInstance& inst) {
  Json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["instance"] = inst.name;
  j["objective"] = sol.objective;
  j["status"] = status_name(sol.status);
  j["iterations"] = sol.iterations;
  j["wall_ms"] = sol.wall_ms;
  j["residual_max"] = sol.certificate.max_violation;
  j["certificate_pass"] = sol.certificate.pass;
  Json vars = Json::array();
  for (std::size_t v = 0; v < sol.x.size(); ++v)
    vars.push_back({{"name", inst.variables[v].name},
                    {"value", to_json(SparseHermitian::from_dense(sol.x[v], 0.0))}});
  j["variables"] = vars;
  return j;
}

// ---------------------------------------------------------------------------
// SDPA sparse format.

namespace detail {

/// Basis element k of Hermitian D x D matrices: diagonal units, then for
/// i < j the real symmetric pair, then the imaginary antisymmetric pair.
struct HermitianBasis {
  std::size_t dim;
  std::size_t count() const { return dim * dim; }
  std::vector<SparseEntry> element(std::size_t k) const {
    if (k < dim) return {{k, k, 1.0}};
    k -= dim;
    const std::size_t pairs = dim * (dim - 1) / 2;
    const bool imag = k >= pairs;
    if (imag) k -= pairs;
    std::size_t i = 0;
    while (k >= dim - 1 - i) {
      k -= dim - 1 - i;
      ++i;
    }
    const std::size_t j = i + 1 + k;
    if (!imag) return {{i, j, 1.0}, {j, i, 1.0}};
    return {{i, j, cplx(0, 1)}, {j, i, cplx(0, -1)}};
  }
};

}  // namespace detail

inline std::string export_sdpa(const SdpInstance& inst, std::size_t max_scalars = 200000) {
  inst.validate();
  struct Block {
    std::size_t dim;
    std::size_t var = 0;
    std::size_t con = 0;
    bool is_var;
    double tau;
  };
  std::vector<Block> blocks;
  for (std::size_t v = 0; v < inst.variables.size(); ++v)
    if (inst.variables[v].cone == Cone::kPsd) blocks.push_back({inst.variable_dim(v), v, 0, true, 1.0});
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    const std::size_t d = inst.constraint_dim(c);
    switch (inst.constraints[c].sense) {
      case Sense::kLe: blocks.push_back({d, 0, c, false, -1.0}); break;
      case Sense::kGe: blocks.push_back({d, 0, c, false, 1.0}); break;
      case Sense::kEq:
        blocks.push_back({d, 0, c, false, 1.0});
        blocks.push_back({d, 0, c, false, -1.0});
        break;
    }
  }
  std::vector<std::size_t> var_first(inst.variables.size());
  std::size_t m = 0;
  for (std::size_t v = 0; v < inst.variables.size(); ++v) {
    var_first[v] = m;
    m += inst.variable_dim(v) * inst.variable_dim(v);
  }
  if (m > max_scalars)
    throw SizeCapError("sdpa export needs " + std::to_string(m) + " scalar variables");

  std::vector<std::vector<detail::TermMap>> term_maps(inst.constraints.size());
  for (std::size_t c = 0; c < inst.constraints.size(); ++c)
    for (const auto& t : inst.constraints[c].terms) term_maps[c].emplace_back(inst, c, t, 1.0);

  // (matno, blkno, i, j) -> value, 1-indexed, upper triangle.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, double> F;
  auto put = [&](std::size_t mat, std::size_t blk, std::size_t dim, std::size_t r, std::size_t c, cplx z) {
    auto add = [&](std::size_t i, std::size_t j, double v) {
      if (v == 0.0 || i > j) return;
      F[{mat, blk + 1, i + 1, j + 1}] += v;
    };
    add(r, c, z.real());
    add(r, c + dim, -z.imag());
    add(r + dim, c, z.imag());
    add(r + dim, c + dim, z.real());
  };
  std::vector<double> cost(m, 0.0);
  const double osign = inst.objective.sense == ObjectiveSense::kMax ? -1.0 : 1.0;
  for (std::size_t v = 0; v < inst.variables.size(); ++v) {
    const detail::HermitianBasis basis{inst.variable_dim(v)};
    for (std::size_t k = 0; k < basis.count(); ++k) {
      const std::size_t mat = var_first[v] + k + 1;
      const auto elem = basis.element(k);
      for (const auto& t : inst.objective.terms) {
        if (inst.variable_index(t.var) != v) continue;
        for (const auto& e : elem) {
          const cplx w = t.weight ? inst.constants[*t.weight].dense()(e.i, e.j)
                                  : (e.i == e.j ? cplx(1.0) : cplx(0.0));
          cost[mat - 1] += osign * t.coeff * (std::conj(w) * e.v).real();
        }
      }
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& blk = blocks[b];
        if (blk.is_var) {
          if (blk.var == v)
            for (const auto& e : elem) put(mat, b, blk.dim, e.i, e.j, e.v);
          continue;
        }
        for (const auto& tm : term_maps[blk.con]) {
          if (tm.var != v) continue;
          for (const auto& e : elem)
            tm.forward(e.i, e.j, [&](std::size_t R, std::size_t C) {
              put(mat, b, blk.dim, R, C, blk.tau * tm.coeff * e.v);
            });
        }
      }
    }
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    if (blk.is_var || !inst.constraints[blk.con].constant) continue;
    for (const auto& e : inst.constants[*inst.constraints[blk.con].constant].entries)
      put(0, b, blk.dim, e.i, e.j, -blk.tau * e.v);
  }

  std::ostringstream os;
  char buf[128];
  os << "\"" << (inst.name.empty() ? "sdp" : inst.name)
     << ": Hermitian blocks realified as [[Re,-Im],[Im,Re]]\"\n";
  os << m << " = mDIM\n" << blocks.size() << " = nBLOCK\n";
  for (std::size_t b = 0; b < blocks.size(); ++b) os << (b ? " " : "") << 2 * blocks[b].dim;
  os << " = bLOCKsTRUCT\n";
  for (std::size_t i = 0; i < m; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", cost[i] + 0.0);
    os << (i ? " " : "") << buf;
  }
  os << "\n";
  for (const auto& [key, v] : F) {
    if (v == 0.0) continue;
    const auto& [mat, blk, i, j] = key;
    std::snprintf(buf, sizeof buf, "%zu %zu %zu %zu %.17g\n", mat, blk, i, j, v);
    os << buf;
  }
  return os.str();
}

inline std::string export_instance(const SdpInstance& inst, const std::string& format) {
  if (format == "json") return to_json(inst).dump(1) + "\n";
  if (format == "sdpa-sparse" || format == "sdpa") return export_sdpa(inst);
  throw InvalidArgument("unsupported export format '" + format + "'");
}

}  // namespace otm::sdp
