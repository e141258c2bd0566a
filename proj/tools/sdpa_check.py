#!/usr/bin/env python3
# Copyright 2026 The otm-sdp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solve an SDPA sparse export with cvxpy and compare against `otm sdp solve`.

Usage: sdpa_check.py OTM_BINARY [--n N] [--m M] [--which primal|dual]

The (1, 2) primal takes about 20 s with SCS; the dual export is much larger.
"""

import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import cvxpy as cp
import numpy as np


def read_sdpa(text):
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith(('"', '*'))]
    m = int(lines[0].split()[0])
    nblock = int(lines[1].split()[0])
    sizes = [abs(int(s)) for s in lines[2].split("=")[0].replace(",", " ").split()][:nblock]
    c = np.array([float(s) for s in lines[3].split()])
    F = [[np.zeros((s, s)) for s in sizes] for _ in range(m + 1)]
    for line in lines[4:]:
        k, b, i, j, v = line.split()
        k, b, i, j, v = int(k), int(b) - 1, int(i) - 1, int(j) - 1, float(v)
        F[k][b][i, j] = v
        F[k][b][j, i] = v
    return c, F, sizes


def solve_sdpa(c, F, sizes):
    x = cp.Variable(len(c))
    cons = []
    for b, s in enumerate(sizes):
        expr = sum(x[k] * F[k + 1][b] for k in range(len(c)) if F[k + 1][b].any()) - F[0][b]
        cons.append((expr + expr.T) / 2 >> 0)
    prob = cp.Problem(cp.Minimize(c @ x), cons)
    prob.solve(solver=cp.SCS, eps=1e-7, max_iters=200000)
    return prob.value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("otm")
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--which", default="primal", choices=["primal", "dual"])
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()

    base = [args.otm, "sdp", "build", "--n", str(args.n), "--m", str(args.m), "--which", args.which]
    sdpa = subprocess.run(base + ["--format", "sdpa-sparse"], capture_output=True, text=True, check=True)
    c, F, sizes = read_sdpa(sdpa.stdout)
    value = solve_sdpa(c, F, sizes)

    with tempfile.TemporaryDirectory() as tmp:
        inst = Path(tmp) / "inst.json"
        subprocess.run(base + ["--out", str(inst)], check=True, capture_output=True)
        # Maximisation problems are exported with a negated cost.
        ours_sign = -1.0 if json.loads(inst.read_text())["objective"]["sense"] == "max" else 1.0
        out = subprocess.run([args.otm, "sdp", "solve", "--in", str(inst), "--tol", "1e-7"],
                             capture_output=True, text=True)
    native = float(out.stdout.split()[0])
    cvx = ours_sign * value
    print(f"cvxpy {cvx:.6f}  otm {native:.6f}")
    if abs(cvx - native) > args.tol:
        print("MISMATCH")
        return 1
    print("ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
