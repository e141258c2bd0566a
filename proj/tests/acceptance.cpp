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


// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            run all
//   acceptance --only N   run criterion N

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otm/adversary.hpp"
#include "otm/gw_sdp.hpp"
#include "otm/protocol.hpp"
#include "otm/sdp/solver.hpp"

using namespace otm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double binom_sd(double p, std::uint64_t trials) { return std::sqrt(p * (1.0 - p) / double(trials)); }

Outcome c1_primal_n1_m2() {
  sdp::SolveOptions o;
  o.tol = 1e-6;
  const auto sol = sdp::solve(gw::build_primal_instance(1, 2), o);
  const bool ok = sol.status == sdp::Status::kOptimal && std::abs(sol.objective - 0.85) <= 0.01 &&
                  sol.certificate.pass;
  return {ok, fmt("objective %.6f, status %s, certificate %s, %zu iterations", sol.objective,
                  sdp::status_name(sol.status).c_str(), sol.certificate.pass ? "pass" : "fail", sol.iterations)};
}

Outcome c2_primal_n1_m3() {
  sdp::SolveOptions o;
  o.tol = 1e-4;
  const auto sol = sdp::solve(gw::build_primal_instance(1, 3), o);
  const bool ok = sol.status == sdp::Status::kOptimal && std::abs(sol.objective - 1.0) <= 0.01 &&
                  sol.certificate.pass;
  return {ok, fmt("objective %.6f, status %s, certificate %s, %zu iterations", sol.objective,
                  sdp::status_name(sol.status).c_str(), sol.certificate.pass ? "pass" : "fail", sol.iterations)};
}

Outcome c3_dual_exact() {
  bool ok = true;
  std::ostringstream d;
  const std::pair<std::size_t, ExactRational> want[] = {{2, ExactRational(1, 4)}, {3, ExactRational(15, 32)}};
  for (const auto& [m, b] : want) {
    const auto rep = gw::verify_dual(gw::dual_uniform(1, m), gw::build_Q1(1, m), 1e-12);
    double worst = rep.equality_residual;
    for (double e : rep.constraint_min_eig) worst = std::max(worst, -e);
    ok = ok && rep.pass && rep.beta == b && worst <= 1e-12;
    d << "beta(1," << m << ") = " << rep.beta << " residual " << worst << "; ";
  }
  return {ok, d.str()};
}

Outcome c4_count_r() {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto c = gw::count_R_closed(n, m), b = gw::count_R_brute(n, m);
      ok = ok && c == b;
      d << c << (c == b ? "" : "!=" + b.str()) << (n == 3 && m == 3 ? "" : " ");
    }
  return {ok, "closed = brute on the 3x3 grid: " + d.str()};
}

Outcome c5_lambda_max() {
  double worst = 0.0;
  std::ostringstream d;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 2; m <= 3; ++m) {
      const double num = gw::lambda_max_numeric(gw::build_Q1(n, m));
      const double f = gw::lambda_max_formula(n);
      worst = std::max(worst, std::abs(num - f));
      if (m == 2) d << "n=" << n << ": numeric " << num << " formula " << f << "; ";
    }
  d << "max |diff| " << worst;
  return {worst <= 1e-9, d.str()};
}

Outcome c6_chains() {
  bool ok = true;
  double worst = 0.0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto q = gw::build_Q1(n, m);
      for (const auto& c : {gw::trivial_feasible(n, m), gw::linear_bound_feasible(n, m)}) {
        const auto rep = gw::verify_primal_chain(c, q, 1e-9);
        ok = ok && rep.pass;
        worst = std::max({worst, -rep.min_eig_gap, rep.factorization_residual, rep.trace_chain_residual,
                          rep.r0_residual, -rep.min_psd_eig});
      }
      const double p = gw::cardinality_T(m).to_double() * std::pow(2.0, 1.0 - double(n)) *
                       std::pow(1.0 + 1.0 / std::numbers::sqrt2, double(n));
      ok = ok && std::abs(gw::linear_bound_feasible(n, m).p - p) <= 1e-12 * std::max(1.0, p);
    }
  return {ok, fmt("trivial (p=1) and linear chains, n,m <= 3: worst residual %.3g", worst)};
}

Outcome c7_cardinality() {
  const std::int64_t want[] = {0, 2, 18};
  bool ok = true;
  std::ostringstream d;
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto f = gw::cardinality_T(m);
    const auto e = gw::enumerate_T(m).size();
    ok = ok && f == ExactRational(want[m - 1]) && f == ExactRational(static_cast<std::int64_t>(e));
    d << "|T(" << m << ")| = " << f << " (enumerated " << e << ") ";
  }
  return {ok, d.str()};
}

Outcome c8_honest() {
  const std::uint64_t trials = 10000;
  const std::uint64_t ok = count_successes(trials, 8, 1, [](CounterRng& rng) {
    const auto b = static_cast<std::uint8_t>(rng.bit());
    const std::uint8_t s0 = 1, s1 = 0;
    const auto r = protocol::run_honest(8, s0, s1, b, rng);
    return protocol::is_accept(r.symbol) && r.payload == (b == 0 ? s0 : s1);
  });
  return {ok == trials, fmt("%llu/%llu honest runs at n=8 returned s_b", (unsigned long long)ok,
                            (unsigned long long)trials)};
}

Outcome c9_attacks() {
  bool ok = true;
  std::ostringstream d;
  const std::uint64_t trials = 100000;
  double worst = 0.0;
  for (std::size_t n : {1u, 2u, 4u, 8u}) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto a = adversary::naive_reuse_attack(n, 1, 0, trials, 100 + n);
    const auto b = adversary::breidbart_attack(n, 1, 0, trials, 200 + n);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const double za = std::abs(a.rate() - adversary::naive_analytic(n)) / binom_sd(adversary::naive_analytic(n), trials);
    const double zb = std::abs(b.rate() - adversary::breidbart_analytic(n)) /
                      binom_sd(adversary::breidbart_analytic(n), trials);
    worst = std::max({worst, za, zb});
    ok = ok && za <= 4.0 && zb <= 4.0 && secs < 60.0;
  }
  const auto e = adversary::exhaust_attack_n1(0, 1, 10000, 300);
  ok = ok && e.successes == e.trials;
  d << "naive/breidbart worst deviation " << worst << " sigma over n in {1,2,4,8}; exhaust-n1 " << e.successes << "/"
    << e.trials;
  return {ok, d.str()};
}

Outcome c10_sandwich() {
  sdp::SolveOptions o;
  o.tol = 1e-6;
  const auto sol = sdp::solve(gw::build_primal_instance(1, 2), o);
  const auto att = adversary::breidbart_attack(1, 1, 0, 100000, 400);
  const double b = gw::beta(1, 2).to_double();
  const double lower = att.rate() - 3.0 * att.standard_error();
  const bool ok = sol.status == sdp::Status::kOptimal && lower <= sol.objective && b <= sol.objective + 10 * o.tol;
  return {ok, fmt("breidbart %.5f - 3sd = %.5f <= SDP %.6f; beta %.5f <= SDP + 10 tol", att.rate(), lower,
                  sol.objective, b)};
}

Outcome c11_rewind() {
  CounterRng rng(500);
  int ok = 0;
  double fid = 1.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.below(2);
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t d0 = 1 + rng.below(dim / 2);
    const std::size_t d1 = 1 + rng.below(dim - d0);
    const auto s0 = static_cast<std::uint8_t>(rng.bit()), s1 = static_cast<std::uint8_t>(rng.bit());
    const auto inst = adversary::make_toy_ma(n, d0, d1, s0, s1, rng);
    const auto r = adversary::rewind_attack(inst, rng);
    ok += (r.s0 == s0 && r.s1 == s1) ? 1 : 0;
    fid = std::min(fid, r.rewind_fidelity);
  }
  return {ok == 100 && std::abs(fid - 1.0) <= 1e-10, fmt("%d/100 random instances, min rewind fidelity %.12f", ok, fid)};
}

Outcome c12_bounded_key() {
  CounterRng rng(600);
  bool ok = true;
  std::ostringstream d;
  for (std::size_t delta : {1u, 2u, 4u}) {
    const std::size_t n = delta == 4 ? 4 : 3;
    const auto inst = adversary::make_toy_ma(n, delta, delta, 1, 0, rng);
    const auto st = adversary::bounded_key_attack(inst, 100000, 700 + delta);
    const double bound = 1.0 / double(delta * delta);
    const bool pass = st.rate() >= bound - 3.0 * st.standard_error();
    ok = ok && pass;
    d << "Delta=" << delta << ": " << st.rate() << " vs " << bound << "; ";
  }
  return {ok, d.str()};
}

Outcome c13_large_n() {
  bool ok = true;
  std::ostringstream d;
  ExactRational prev(-1);
  for (std::size_t m = 1; m <= 10; ++m) {
    const auto b = gw::beta(40, m);
    ok = ok && b > prev && b <= ExactRational(1);
    prev = b;
    if (m == 5 || m == 10)
      d << "beta(40," << m << ") = " << b.to_double() << ", heuristic " << gw::heuristic_bound(40, m)
        << ", ratio " << b.to_double() / gw::heuristic_bound(40, m) << "; ";
  }
  return {ok, "strictly increasing and <= 1 for m = 1..10; " + d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "SDP primal (n=1, m=2) = 0.85 +- 0.01", 60, c1_primal_n1_m2},
      {2, "SDP primal (n=1, m=3) = 1.00 +- 0.01", 1800, c2_primal_n1_m3},
      {3, "dual beta exact: 1/4 and 15/32", 1, c3_dual_exact},
      {4, "closed |R| = brute |R| on {1,2,3}^2", 120, c4_count_r},
      {5, "lambda_max numeric = (2/4^n)(1+1/sqrt2)^n within 1e-9", 300, c5_lambda_max},
      {6, "feasibility chains (p = 1 and linear p)", 600, c6_chains},
      {7, "|T| = 0, 2, 18", 10, c7_cardinality},
      {8, "honest protocol correctness at n = 8", 60, c8_honest},
      {9, "attack statistics within 4 sigma", 240, c9_attacks},
      {10, "sandwich at (n=1, m=2)", 120, c10_sandwich},
      {11, "rewinding attack 100/100", 60, c11_rewind},
      {12, "bounded-key attack >= 1/Delta^2", 180, c12_bounded_key},
      {13, "large-n exact beta(40, m)", 10, c13_large_n},
  };

  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] %2d  %-52s  %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
