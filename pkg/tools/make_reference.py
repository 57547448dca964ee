#!/usr/bin/env python3
"""Regenerate tests/data/reference_spectrum.json from an independent stack.

Solves the same radial problem the package solves, but with none of the
package's machinery: scipy.special.k0 for the potential and DOP853
shooting in raw s — outward node counts for the state count, a
geometric mismatch scan for brackets, brentq for the final eigenvalues.
Different Bessel implementation, different integrator family, different
variable — any agreement with the package is evidence, not tautology.

Usage: python3 tools/make_reference.py [out.json]
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.special import k0

S_MIN = 1e-6
S_MATCH = 1.0

# (C, m) channels of the acceptance grid, with a domain long enough to
# hold the shallowest state of the channel (s_max >~ 35/kappa_min).
CHANNELS = [
    (0.3, 0, 1500.0), (0.3, 1, 200.0), (0.3, 2, 200.0),
    (0.5, 0, 500.0), (0.5, 1, 200.0), (0.5, 2, 200.0),
    (1.0, 0, 150.0), (1.0, 1, 200.0), (1.0, 2, 200.0),
    (1.9, 0, 80.0), (1.9, 1, 200.0), (1.9, 2, 200.0),
    (5.0, 0, 500.0), (5.0, 1, 150.0), (5.0, 2, 200.0),
    (10.0, 0, 60.0), (10.0, 1, 40.0), (10.0, 2, 200.0),
]


def _rhs(C: float, m: int, eps: float):
    def rhs(s, y):
        v = (m * m - 0.25) / (s * s) - C * k0(s)
        return [y[1], (v - eps) * y[0]]
    return rhs


def _outward(C: float, m: int, eps: float, s_to: float, t_eval=None):
    nu = m + 0.5
    return solve_ivp(_rhs(C, m, eps), (S_MIN, s_to),
                     [S_MIN**nu, nu * S_MIN**(nu - 1.0)],
                     method="DOP853", rtol=1e-12, atol=1e-300,
                     t_eval=t_eval)


def count_states(C: float, m: int, s_max: float) -> int:
    """Nodes of the outward solution at eps -> 0^- (oscillation theorem)."""
    grid = np.geomspace(S_MIN, s_max, 4000)
    sol = _outward(C, m, -1e-12, s_max, t_eval=grid)
    phi = sol.y[0]
    return int(np.sum(np.sign(phi[1:]) * np.sign(phi[:-1]) < 0))


def mismatch(C: float, m: int, s_max: float, eps: float) -> float:
    """Normalized Wronskian of outward/inward DOP853 sweeps at S_MATCH."""
    kap = math.sqrt(-eps)
    # start the inward sweep close enough that its backward growth
    # e^{kap (s_b - S_MATCH)} stays far below overflow
    s_b = min(s_max, S_MATCH + 350.0 / kap)
    out = _outward(C, m, eps, S_MATCH)
    inn = solve_ivp(_rhs(C, m, eps), (s_b, S_MATCH), [1.0, -kap],
                    method="DOP853", rtol=1e-12, atol=1e-300)
    oa, ob = out.y[0][-1], out.y[1][-1]
    ia, ib = inn.y[0][-1], inn.y[1][-1]
    return (oa * ib - ob * ia) / math.sqrt(
        (oa * oa + ob * ob) * (ia * ia + ib * ib))


def channel_eigs(C: float, m: int, s_max: float) -> list[float]:
    n = count_states(C, m, s_max)
    if n == 0:
        return []
    for points in (80, 320, 1280):
        ladder = -np.geomspace(1.2 * C * C, 1e-10, points)
        vals = [mismatch(C, m, s_max, e) for e in ladder]
        brackets = [(ladder[i], ladder[i + 1])
                    for i in range(points - 1)
                    if vals[i] * vals[i + 1] < 0.0]
        if len(brackets) >= n:
            break
    if len(brackets) != n:
        raise RuntimeError(
            f"C={C} m={m}: {n} states but {len(brackets)} brackets")
    return sorted(brentq(lambda e: mismatch(C, m, s_max, e), lo, hi,
                         xtol=1e-13, rtol=8.9e-16)
                  for lo, hi in brackets)


def main(out_path: str) -> None:
    entries = []
    for C, m, s_max in CHANNELS:
        eigs = channel_eigs(C, m, s_max)
        entries.append({"C": C, "m": m, "s_max": s_max,
                        "eigenvalues": eigs})
        print(f"C={C} m={m} s_max={s_max}: {eigs}", flush=True)
    payload = {
        "method": "scipy k0 + DOP853 shooting (rtol 1e-12), node-count "
                  "states, mismatch-scan brackets, brentq xtol 1e-13",
        "s_min": S_MIN,
        "s_match": S_MATCH,
        "entries": entries,
    }
    Path(out_path).write_text(json.dumps(payload, indent=1) + "\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else
         str(Path(__file__).resolve().parent.parent
             / "tests" / "data" / "reference_spectrum.json"))
