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
 * Command-line front end. `run` is the whole program; tools/otm.cpp only
 * forwards argv to it, so tests can drive every command in-process.
 *
 * Exit codes: 0 pass, 1 assertion failure, 2 usage, 3 size cap,
 * 4 solver non-convergence.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "otm/adversary.hpp"
#include "otm/errors.hpp"
#include "otm/gw_sdp.hpp"
#include "otm/protocol.hpp"
#include "otm/rational.hpp"
#include "otm/rng.hpp"
#include "otm/sdp/io.hpp"
#include "otm/sdp/solver.hpp"

namespace otm::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1.0";

enum Exit : int { kPass = 0, kFail = 1, kUsage = 2, kCap = 3, kNoConvergence = 4 };

/// Shortest round-trip decimal form, shared by text and JSON output.
inline std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline Json tagged(double v, const char* provenance) {
  return {{"value", v}, {"provenance", provenance}};
}

inline Json rational_json(const ExactRational& r) {
  return {{"numerator", r.numerator().str()},
          {"denominator", r.denominator().str()},
          {"float", r.to_double()},
          {"provenance", "formula"}};
}

inline Json report_header(Json params) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["versions"] = {{"artifact", kArtifactVersion}, {"schema", kReportSchemaVersion}};
  j["params"] = std::move(params);
  return j;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << s << "\n";
  return s;
}

inline Json attack_json(const adversary::AttackStats& st, double analytic, const char* label) {
  Json j = {{"rate", tagged(st.rate(), "monte-carlo")},
            {"stderr", st.standard_error()},
            {"trials", st.trials},
            {"successes", st.successes},
            {"queries", st.queries},
            {"label", label}};
  if (!std::isnan(analytic)) j["analytic"] = tagged(analytic, "formula");
  return j;
}

inline bool within_band(const adversary::AttackStats& st, double analytic, double sigma) {
  const double sd = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(st.trials));
  return std::abs(st.rate() - analytic) <= sigma * std::max(sd, st.standard_error()) + 1e-15;
}

struct Options {
  // shared
  std::size_t n = 8;
  std::size_t m = 2;
  std::uint64_t trials = 1000;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool json = false;
  int s0 = 1;
  int s1 = 0;
  int b = 0;
  // attack
  std::string strategy;
  std::size_t delta0 = 0;
  std::size_t delta1 = 0;
  std::size_t instances = 100;
  double sigma = 4.0;
  // sdp
  std::string which = "primal";
  std::string format = "json";
  std::string in;
  std::string out;
  double tol = 1e-6;
  std::size_t max_iters = 200000;
  // count-r / report
  bool brute = false;
  std::string m_list = "2,3";
  bool solve = false;
  // token
  std::string z;
  std::string y;
};

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n < 1) throw InvalidArgument("--n must be at least 1");
  const std::uint64_t seed = resolve_seed(o.seed, err);
  const auto s0 = static_cast<std::uint8_t>(o.s0);
  const auto s1 = static_cast<std::uint8_t>(o.s1);
  const auto b = static_cast<std::uint8_t>(o.b);
  const std::uint8_t want = b == 0 ? s0 : s1;
  const std::uint64_t ok = count_successes(o.trials, seed, o.jobs, [&](CounterRng& rng) {
    const auto r = protocol::run_honest(o.n, s0, s1, b, rng);
    return protocol::is_accept(r.symbol) && r.payload == want;
  });
  const double rate = static_cast<double>(ok) / static_cast<double>(o.trials);
  if (o.json) {
    Json j = report_header({{"n", o.n}, {"seed", seed}, {"trials", o.trials}});
    j["simulate"] = {{"s0", o.s0}, {"s1", o.s1}, {"b", o.b}, {"successes", ok},
                     {"rate", tagged(rate, "monte-carlo")}};
    emit(out, j);
  } else {
    out << ok << "/" << o.trials << " honest runs returned s_b = " << int(want) << " (n=" << o.n
        << ", b=" << o.b << ", seed=" << seed << ")\n";
  }
  return ok == o.trials ? kPass : kFail;
}

inline int cmd_attack(const Options& o, std::ostream& out, std::ostream& err, bool n_given) {
  const std::uint64_t seed = resolve_seed(o.seed, err);
  const auto s0 = static_cast<std::uint8_t>(o.s0);
  const auto s1 = static_cast<std::uint8_t>(o.s1);
  Json params = {{"n", o.n}, {"seed", seed}, {"trials", o.trials}};
  Json attacks;
  bool pass = true;
  std::ostringstream text;
  if (o.strategy == "naive" || o.strategy == "breidbart") {
    if (o.delta0 || o.delta1) throw InvalidArgument("--delta0/--delta1 apply to bounded-key only");
    const bool naive = o.strategy == "naive";
    const auto st = naive ? adversary::naive_reuse_attack(o.n, s0, s1, o.trials, seed, o.jobs)
                          : adversary::breidbart_attack(o.n, s0, s1, o.trials, seed, o.jobs);
    const double a = naive ? adversary::naive_analytic(o.n) : adversary::breidbart_analytic(o.n);
    pass = within_band(st, a, o.sigma);
    attacks[o.strategy] = attack_json(st, a, "derived");
    text << o.strategy << ": rate " << num(st.rate()) << " +- " << num(st.standard_error())
         << " (analytic " << num(a) << ", " << num(o.sigma) << " sigma band: " << (pass ? "inside" : "OUTSIDE")
         << ")\n";
  } else if (o.strategy == "exhaust-n1") {
    if (n_given && o.n != 1) throw InvalidArgument("exhaust-n1 runs at n = 1 only");
    params["n"] = 1;
    const auto st = adversary::exhaust_attack_n1(s0, s1, o.trials, seed, o.jobs);
    pass = st.successes == st.trials;
    attacks["exhaust_n1"] = attack_json(st, 1.0, "reference");
    text << "exhaust-n1: rate " << num(st.rate()) << " over " << st.trials << " trials, "
         << st.queries / st.trials << " queries per trial\n";
  } else if (o.strategy == "bounded-key") {
    if (o.delta0 == 0 || o.delta1 == 0) throw InvalidArgument("bounded-key needs --delta0 and --delta1");
    CounterRng rng(seed, 0);
    const auto inst = adversary::make_toy_ma(o.n, o.delta0, o.delta1, s0, s1, rng);
    const auto st = adversary::bounded_key_attack(inst, o.trials, seed, o.jobs);
    const double delta = static_cast<double>(std::max(o.delta0, o.delta1));
    const double bound = 1.0 / (delta * delta);
    pass = st.rate() >= bound - 3.0 * st.standard_error();
    attacks["bounded_key"] = attack_json(st, bound, "reference");
    attacks["bounded_key"]["delta0"] = o.delta0;
    attacks["bounded_key"]["delta1"] = o.delta1;
    text << "bounded-key: rate " << num(st.rate()) << " +- " << num(st.standard_error())
         << " (bound 1/Delta^2 = " << num(bound) << ": " << (pass ? "holds" : "VIOLATED") << ")\n";
  } else if (o.strategy == "rewind") {
    const std::size_t d0 = o.delta0 ? o.delta0 : 2;
    const std::size_t d1 = o.delta1 ? o.delta1 : 2;
    CounterRng rng(seed, 0);
    std::uint64_t ok = 0;
    for (std::size_t i = 0; i < o.instances; ++i) {
      const auto bs0 = static_cast<std::uint8_t>(rng.bit());
      const auto bs1 = static_cast<std::uint8_t>(rng.bit());
      const auto inst = adversary::make_toy_ma(o.n, d0, d1, bs0, bs1, rng);
      const auto r = adversary::rewind_attack(inst, rng);
      ok += (r.s0 == bs0 && r.s1 == bs1) ? 1 : 0;
    }
    pass = ok == o.instances;
    params["trials"] = o.instances;
    attacks["rewind"] = {{"instances", o.instances},
                         {"successes", ok},
                         {"rate", tagged(static_cast<double>(ok) / static_cast<double>(o.instances), "numeric")},
                         {"label", "reference"}};
    text << "rewind: both bits extracted on " << ok << "/" << o.instances << " random instances (n=" << o.n
         << ")\n";
  } else {
    throw InvalidArgument("unknown strategy '" + o.strategy + "'");
  }
  if (o.json) {
    Json j = report_header(params);
    j["attacks"] = attacks;
    emit(out, j);
  } else {
    out << text.str();
  }
  return pass ? kPass : kFail;
}

inline int cmd_sdp_build(const Options& o, std::ostream& out) {
  if (o.which != "primal" && o.which != "dual") throw InvalidArgument("--which must be primal or dual");
  const auto inst = o.which == "primal" ? gw::build_primal_instance(o.n, o.m) : gw::build_dual_instance(o.n, o.m);
  const std::string text = sdp::export_instance(inst, o.format);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + o.out);
    f << text;
    out << "wrote " << inst.name << " (" << inst.variables.size() << " variables, "
        << inst.constraints.size() << " constraints, largest constraint dimension "
        << inst.max_constraint_dim() << ") to " << o.out << "\n";
  }
  return kPass;
}

inline int cmd_sdp_solve(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream f(o.in);
  if (!f) throw InvalidArgument("cannot read " + o.in);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("cannot parse ") + o.in + ": " + e.what());
  }
  const auto inst = sdp::instance_from_json(j);
  sdp::SolveOptions so;
  so.tol = o.tol;
  so.max_iters = o.max_iters;
  so.seed = o.seed.value_or(0);
  const auto sol = sdp::solve(inst, so);
  if (!o.out.empty()) {
    std::ofstream g(o.out, std::ios::binary);
    g << sdp::to_json(sol, inst).dump(1) << "\n";
  }
  if (o.json) {
    Json r = report_header({{"instance", inst.name}, {"tol", o.tol}});
    r["sdp"] = {{"primal_value", tagged(sol.objective, "numeric")},
                {"status", sdp::status_name(sol.status)},
                {"residual_max", sol.certificate.max_violation},
                {"iters", sol.iterations},
                {"wall_ms", sol.wall_ms}};
    emit(out, r);
  } else {
    out << std::fixed << std::setprecision(4) << sol.objective << " " << sdp::status_name(sol.status) << "\n"
        << std::defaultfloat;
    out << "objective " << num(sol.objective) << ", iterations " << sol.iterations << ", max residual "
        << num(sol.certificate.max_violation) << ", certificate " << (sol.certificate.pass ? "pass" : "FAIL")
        << ", " << num(sol.wall_ms) << " ms\n";
  }
  if (sol.status != sdp::Status::kOptimal) {
    err << "solver stopped with status " << sdp::status_name(sol.status) << "\n";
    return kNoConvergence;
  }
  return sol.certificate.pass ? kPass : kFail;
}

inline int cmd_sdp_verify(const Options& o, std::ostream& out) {
  Json r = report_header({{"n", o.n}, {"m", o.m}, {"which", o.which}});
  bool pass = false;
  std::ostringstream text;
  if (o.which == "trivial" || o.which == "linear") {
    const auto q = gw::build_Q1(o.n, o.m);
    const auto chain = o.which == "trivial" ? gw::trivial_feasible(o.n, o.m) : gw::linear_bound_feasible(o.n, o.m);
    const auto rep = gw::verify_primal_chain(chain, q, o.tol);
    pass = rep.pass;
    r["chain"] = {{"p", tagged(chain.p, "formula")},
                  {"min_eig_gap", rep.min_eig_gap},
                  {"factorization_residual", rep.factorization_residual},
                  {"trace_chain_residual", rep.trace_chain_residual},
                  {"r0_residual", rep.r0_residual},
                  {"min_psd_eig", rep.min_psd_eig},
                  {"tol", rep.tol},
                  {"pass", rep.pass}};
    text << o.which << " chain (n=" << o.n << ", m=" << o.m << ") at p = " << num(chain.p) << "\n"
         << "  min eig(R_{m+1} - Q1)      " << num(rep.min_eig_gap) << "\n"
         << "  factorization residual     " << num(rep.factorization_residual) << "\n"
         << "  trace-chain residual       " << num(rep.trace_chain_residual) << "\n"
         << "  |R_0 - p|                  " << num(rep.r0_residual) << "\n"
         << "  min eig over chain         " << num(rep.min_psd_eig) << "\n"
         << (rep.pass ? "PASS" : "FAIL: " + rep.failure) << "\n";
  } else if (o.which == "dual") {
    const auto q = gw::build_Q1(o.n, o.m);
    const auto dual = gw::dual_uniform(o.n, o.m);
    const auto rep = gw::verify_dual(dual, q, std::min(o.tol, 1e-12));
    pass = rep.pass;
    r["dual"] = {{"objective", tagged(rep.objective, "numeric")},
                 {"beta", rational_json(rep.beta)},
                 {"constraint_min_eig", rep.constraint_min_eig},
                 {"equality_residual", rep.equality_residual},
                 {"y1_min_eig", rep.y1_min_eig},
                 {"pass", rep.pass}};
    text << "uniform dual (n=" << o.n << ", m=" << o.m << ")\n  objective " << num(rep.objective)
         << "  beta = " << rep.beta << "\n";
    for (std::size_t i = 0; i < rep.constraint_min_eig.size(); ++i)
      text << "  constraint " << i + 1 << " min eig " << num(rep.constraint_min_eig[i]) << "\n";
    text << "  equality residual " << num(rep.equality_residual) << "\n"
         << (rep.pass ? "PASS" : "FAIL: " + rep.failure) << "\n";
  } else {
    throw InvalidArgument("--which must be trivial, linear or dual");
  }
  if (o.json) emit(out, r);
  else out << text.str();
  return pass ? kPass : kFail;
}

inline int cmd_count_r(const Options& o, std::ostream& out) {
  const auto closed = gw::count_R_closed(o.n, o.m);
  std::optional<ExactRational> brute;
  if (o.brute) {
    if (o.m > 8) throw SizeCapError("--brute supports m <= 8");
    brute = gw::count_R_brute(o.n, o.m);
  }
  const auto t = gw::cardinality_T(o.m);
  const auto b = gw::beta(o.n, o.m);
  const bool match = !brute || *brute == closed;
  if (o.json) {
    Json j = report_header({{"n", o.n}, {"m", o.m}});
    j["cardinalities"] = {{"T", t.str()}, {"R", closed.str()}};
    if (brute) {
      j["cardinalities"]["R_brute"] = brute->str();
      j["cardinalities"]["match"] = match;
    }
    j["beta"] = rational_json(b);
    emit(out, j);
  } else {
    out << "|T| = " << t << "\n|R| closed = " << closed << "\n";
    if (brute) out << "|R| brute  = " << *brute << "\n" << (match ? "MATCH" : "MISMATCH") << "\n";
    out << "beta = " << b << " = " << num(b.to_double()) << "\n";
  }
  return match ? kPass : kFail;
}

inline std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size() || v == 0)
      throw InvalidArgument("bad entry '" + item + "' in --m list");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("--m list is empty");
  return out;
}

inline int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(o.seed, err);
  const auto ms = parse_list(o.m_list);
  Json j = report_header({{"n", o.n}, {"m_list", ms}, {"seed", seed}, {"trials", o.trials}});
  Json entries = Json::array();
  std::ostringstream text;
  text << "report n=" << o.n << " seed=" << seed << "\n";
  bool ok = true;
  for (const std::size_t m : ms) {
    Json e;
    e["m"] = m;
    const auto t = gw::cardinality_T(m);
    const auto r = gw::count_R_closed(o.n, m);
    const auto b = gw::beta(o.n, m);
    e["cardinalities"] = {{"T", t.str()}, {"R", r.str()}};
    const bool enumerable = o.n <= 30 && m <= 8 && gw::GwLayout(o.n, m).enumeration_size() <= gw::kEnumerationCap;
    if (enumerable) {
      const auto rb = gw::count_R_brute(o.n, m);
      e["cardinalities"]["R_brute"] = rb.str();
      e["cardinalities"]["match"] = rb == r;
      ok = ok && rb == r;
    }
    e["beta"] = rational_json(b);
    e["lambda_max"] = {{"formula", tagged(gw::lambda_max_formula(o.n), "formula")}};
    if (enumerable && m <= 3) e["lambda_max"]["numeric"] = tagged(gw::lambda_max_numeric(gw::build_Q1(o.n, m)), "numeric");
    const double h = gw::heuristic_bound(o.n, m);
    e["bounds"] = {{"linear_p", tagged(gw::linear_bound_p(o.n, m), "formula")},
                   {"heuristic", tagged(h, "formula")},
                   {"beta_over_heuristic", tagged(b.to_double() / h, "formula")},
                   {"heuristic_meaningful", h < 1.0}};
    text << "m=" << m << "  |T|=" << t << "  |R|=" << r << "  beta=" << b << " (" << num(b.to_double())
         << ")  heuristic=" << num(h) << "  linear p=" << num(gw::linear_bound_p(o.n, m)) << "\n";
    if (o.solve && m <= 3) {
      try {
        const auto inst = gw::build_primal_instance(o.n, m);
        sdp::SolveOptions so;
        so.tol = o.tol;
        so.max_iters = o.max_iters;
        const auto sol = sdp::solve(inst, so);
        e["sdp"] = {{"primal_value", tagged(sol.objective, "numeric")},
                    {"status", sdp::status_name(sol.status)},
                    {"residual_max", sol.certificate.max_violation},
                    {"iters", sol.iterations},
                    {"wall_ms", sol.wall_ms}};
        text << "      sdp primal " << num(sol.objective) << " (" << sdp::status_name(sol.status) << ")\n";
      } catch (const SizeCapError& ex) {
        text << "      sdp omitted: " << ex.what() << "\n";
      }
    }
    entries.push_back(e);
  }
  j["entries"] = entries;
  Json attacks;
  const auto nv = adversary::naive_reuse_attack(o.n, 1, 0, o.trials, seed, o.jobs);
  attacks["naive"] = attack_json(nv, adversary::naive_analytic(o.n), "derived");
  const auto bb = adversary::breidbart_attack(o.n, 1, 0, o.trials, seed + 1, o.jobs);
  attacks["breidbart"] = attack_json(bb, adversary::breidbart_analytic(o.n), "derived");
  text << "attacks (" << o.trials << " trials): naive " << num(nv.rate()) << "  breidbart " << num(bb.rate());
  if (o.n == 1 && *std::max_element(ms.begin(), ms.end()) >= 3) {
    const auto ex = adversary::exhaust_attack_n1(1, 0, o.trials, seed + 2, o.jobs);
    attacks["exhaust_n1"] = attack_json(ex, 1.0, "reference");
    text << "  exhaust-n1 " << num(ex.rate());
  }
  text << "\n";
  j["attacks"] = attacks;
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + o.out);
    f << j.dump(2) << "\n";
  }
  if (o.json) emit(out, j);
  else out << text.str();
  return ok ? kPass : kFail;
}

inline int cmd_token(const Options& o, std::ostream& out) {
  const auto key = protocol::SecretKey::from_string(o.z);
  const protocol::Token tok(key, static_cast<std::uint8_t>(o.s0), static_cast<std::uint8_t>(o.s1));
  const protocol::Query q{static_cast<std::uint8_t>(o.b), protocol::parse_bits(o.y)};
  const auto r = tok.respond(q);
  if (o.json) {
    Json j = report_header({{"n", key.n()}});
    j["response"] = {{"symbol", std::string(protocol::symbol_name(r.symbol))}, {"payload", r.payload}};
    emit(out, j);
  } else {
    out << (protocol::is_accept(r.symbol) ? std::to_string(r.payload) : std::string("⊥")) << "\n";
  }
  return kPass;
}

/// Entire CLI. Never calls exit().
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"one-time-memory token: protocol, attacks and SDP security analysis", "otm"};
  app.require_subcommand(1);
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "RNG seed (entropy when omitted; the chosen seed is printed)");
    c->add_option("--jobs", o.jobs, "worker threads for Monte-Carlo trials")->check(CLI::Range(1u, 256u));
  };
  auto bit = CLI::IsMember({0, 1});

  auto* sim = app.add_subcommand("simulate", "honest protocol runs");
  sim->add_option("--n", o.n, "qubits")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  sim->add_option("--s0", o.s0)->check(bit);
  sim->add_option("--s1", o.s1)->check(bit);
  sim->add_option("--b", o.b)->check(bit);
  sim->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  sim->add_flag("--json", o.json);
  add_seed(sim);

  auto* att = app.add_subcommand("attack", "run an attack strategy");
  att->add_option("--strategy", o.strategy)
      ->required()
      ->check(CLI::IsMember({"naive", "breidbart", "exhaust-n1", "rewind", "bounded-key"}));
  auto* att_n = att->add_option("--n", o.n, "qubits")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  att->add_option("--delta0", o.delta0);
  att->add_option("--delta1", o.delta1);
  att->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  att->add_option("--instances", o.instances, "random instances for rewind")->check(CLI::PositiveNumber);
  att->add_option("--sigma", o.sigma, "acceptance band in standard errors");
  att->add_option("--s0", o.s0)->check(bit);
  att->add_option("--s1", o.s1)->check(bit);
  att->add_flag("--json", o.json);
  add_seed(att);

  auto* sdpc = app.add_subcommand("sdp", "build, solve or verify SDPs");
  sdpc->require_subcommand(1);
  auto* build = sdpc->add_subcommand("build", "write the streamlined primal or dual instance");
  build->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  build->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  build->add_option("--which", o.which)->check(CLI::IsMember({"primal", "dual"}));
  build->add_option("--format", o.format)->check(CLI::IsMember({"json", "sdpa-sparse"}));
  build->add_option("--out", o.out);
  auto* solve = sdpc->add_subcommand("solve", "solve an instance file");
  solve->add_option("--in", o.in)->required();
  solve->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", o.max_iters)->check(CLI::PositiveNumber);
  solve->add_option("--out", o.out, "write the solution JSON here");
  solve->add_option("--seed", o.seed, "accepted for uniformity; the iteration is deterministic");
  solve->add_flag("--json", o.json);
  auto* verify = sdpc->add_subcommand("verify", "check a closed-form solution");
  verify->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  verify->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  verify->add_option("--which", o.which)->required()->check(CLI::IsMember({"trivial", "linear", "dual"}));
  verify->add_option("--tol", o.tol, "residual tolerance");
  verify->add_flag("--json", o.json);

  auto* cr = app.add_subcommand("count-r", "exact |R|, |T| and beta");
  cr->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  cr->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  cr->add_flag("--brute", o.brute, "also enumerate and compare");
  cr->add_flag("--json", o.json);

  auto* rep = app.add_subcommand("report", "all quantities for an (n, m) grid");
  rep->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  rep->add_option("--m,--m-list", o.m_list, "comma-separated m values");
  rep->add_option("--out", o.out);
  rep->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  rep->add_flag("--solve", o.solve, "also solve the primal SDP where the solver cap allows");
  rep->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  rep->add_flag("--json", o.json);
  add_seed(rep);

  auto* tok = app.add_subcommand("token", "evaluate the token on one query");
  tok->add_option("--z", o.z, "secret key, 2n bits")->required();
  tok->add_option("--y", o.y, "query string, n bits")->required();
  tok->add_option("--b", o.b)->check(bit);
  tok->add_option("--s0", o.s0)->check(bit);
  tok->add_option("--s1", o.s1)->check(bit);
  tok->add_flag("--json", o.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  // Defaults that differ by command.
  if (*rep && rep->count("--trials") == 0) o.trials = 100000;
  if (*att && att->count("--trials") == 0) o.trials = 100000;
  if (*att && att->count("--n") == 0) o.n = o.strategy == "bounded-key" || o.strategy == "rewind" ? 3 : 1;
  if (*verify && verify->count("--tol") == 0) o.tol = 1e-9;
  if (*rep && rep->count("--tol") == 0) o.tol = 1e-4;

  try {
    if (*sim) return cmd_simulate(o, out, err);
    if (*att) return cmd_attack(o, out, err, att_n->count() > 0);
    if (*build) return cmd_sdp_build(o, out);
    if (*solve) return cmd_sdp_solve(o, out, err);
    if (*verify) return cmd_sdp_verify(o, out);
    if (*cr) return cmd_count_r(o, out);
    if (*rep) return cmd_report(o, out, err);
    if (*tok) return cmd_token(o, out);
  } catch (const SizeCapError& e) {
    err << "size cap: " << e.what() << "\n";
    return kCap;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}

}  // namespace otm::cli
