"""Semi-infinite quadrature robust to log endpoint singularities.

Double-exponential rules: tanh-sinh on finite panels, exp-sinh on the
infinite tail, both driven by the same level-halving trapezoid loop with
|I_h - I_{h/2}| as the error estimate.  Node positions are computed as
distances from the panel endpoints so that integrands with ln(x - a)
behavior lose no accuracy to cancellation.

Integrands must accept and return float64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_T_MAX = 4.5          # |t| beyond this the DE weights are < 1e-30
_H0 = 0.5             # level-0 step in the transformed variable
_MAX_LEVEL = 11
_TAIL_RUN = 5         # consecutive negligible nodes that truncate the tail

DEFAULT_ABS_TOL = 1e-12

_EPS = np.finfo(np.float64).eps


class QuadratureError(RuntimeError):
    """Non-convergence or invalid integrand values."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be >= 0")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


def _tanh_sinh_nodes(t, a, b):
    """Nodes and weights on (a, b); positions kept as endpoint offsets."""
    rad = 0.5 * (b - a)
    u = 0.5 * np.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    g = 2.0 * e / (1.0 + e)               # 1 - |tanh(u)|
    x = np.where(u < 0.0, a + rad * g, b - rad * g)
    w = rad * 0.5 * np.pi * np.cosh(t) * (4.0 * e / (1.0 + e) ** 2)
    inside = (x > a) & (x < b)
    return x[inside], w[inside]


def _exp_sinh_nodes(t, a):
    """Nodes and weights on (a, inf)."""
    u = 0.5 * np.pi * np.sinh(t)
    ex = np.exp(u)
    x = a + ex
    w = 0.5 * np.pi * np.cosh(t) * ex
    inside = x > a
    return x[inside], w[inside]


def _eval_tail_guarded(f, x, w, threshold):
    """Evaluate w*f(x) for tail nodes sorted by position.

    Stops after _TAIL_RUN consecutive contributions below threshold, so the
    integrand is never probed at absurdly large arguments.
    """
    total = 0.0
    evals = 0
    run = 0
    chunk = 8
    for i in range(0, x.size, chunk):
        xs = x[i:i + chunk]
        fx = np.asarray(f(xs), dtype=np.float64)
        if np.any(np.isnan(fx)):
            raise QuadratureError("integrand returned NaN")
        contrib = w[i:i + chunk] * fx
        evals += xs.size
        for c in contrib:
            if run >= _TAIL_RUN:
                break
            total += c
            run = run + 1 if abs(c) < threshold else 0
        if run >= _TAIL_RUN:
            break
    return total, evals


def _level_sum(f, nodes, abs_tol, infinite):
    """Contribution of one node batch, tail-guarded on infinite panels."""
    x, w = nodes
    if x.size == 0:
        return 0.0, 0
    if not infinite:
        fx = np.asarray(f(x), dtype=np.float64)
        if np.any(np.isnan(fx)):
            raise QuadratureError("integrand returned NaN")
        return float(np.sum(w * fx)), x.size
    # split tail nodes (large x, ascending) from the singular-end cluster
    order = np.argsort(x)
    x, w = x[order], w[order]
    cut = np.searchsorted(x, x[0] + 1.0) if x.size > 1 else x.size
    head_x, head_w = x[:cut], w[:cut]
    total = 0.0
    evals = 0
    if head_x.size:
        fx = np.asarray(f(head_x), dtype=np.float64)
        if np.any(np.isnan(fx)):
            raise QuadratureError("integrand returned NaN")
        total += float(np.sum(head_w * fx))
        evals += head_x.size
    t, e = _eval_tail_guarded(f, x[cut:], w[cut:], abs_tol / 100.0)
    return total + t, evals + e


def integrate_interval(f, a, b, abs_tol=DEFAULT_ABS_TOL):
    """Integrate f over (a, b), b possibly np.inf, to abs_tol.

    Returns a QuadratureResult; raises QuadratureError on NaN from the
    integrand or if the level budget is exhausted before convergence.
    """
    if not (abs_tol > 0.0):
        raise ValueError("abs_tol must be > 0")
    if not (np.isfinite(a) and a < b):
        raise ValueError("need finite a < b")
    infinite = np.isinf(b)
    make = (lambda t: _exp_sinh_nodes(t, a)) if infinite \
        else (lambda t: _tanh_sinh_nodes(t, a, b))

    h = _H0
    t0 = np.arange(-_T_MAX, _T_MAX + 0.5 * h, h)
    s, evals = _level_sum(f, make(t0), abs_tol, infinite)
    value = h * s
    prev = value
    err = np.inf
    for _ in range(1, _MAX_LEVEL + 1):
        h *= 0.5
        t_new = np.arange(-_T_MAX + h, _T_MAX, 2.0 * h)
        s_new, e_new = _level_sum(f, make(t_new), abs_tol, infinite)
        evals += e_new
        value = 0.5 * prev + h * s_new
        err = abs(value - prev)
        prev = value
        if err <= max(abs_tol, 10.0 * _EPS * abs(value)):
            return QuadratureResult(value, max(err, _EPS * abs(value)), evals)
    raise QuadratureError(
        f"no convergence on ({a}, {b}): last estimate {value!r}, "
        f"error {err:.3e} > tolerance {abs_tol:.3e}")


def integrate_semi_infinite(f, abs_tol=DEFAULT_ABS_TOL):
    """Integrate f over (0, inf).

    Splits at 1 so the tanh-sinh panel absorbs a possible logarithmic
    singularity at the origin and the exp-sinh panel the decaying tail.
    """
    r0 = integrate_interval(f, 0.0, 1.0, abs_tol=0.5 * abs_tol)
    r1 = integrate_interval(f, 1.0, np.inf, abs_tol=0.5 * abs_tol)
    return QuadratureResult(
        r0.value + r1.value,
        r0.abs_error_estimate + r1.abs_error_estimate,
        r0.evaluations + r1.evaluations)


def integrate_split_log(f, r, abs_tol=DEFAULT_ABS_TOL):
    """Integrate f over (0, inf) when f has a |ln(r/s)|-type kink at s = r."""
    if not (r > 0.0 and np.isfinite(r)):
        raise ValueError("split point r must be positive and finite")
    r0 = integrate_interval(f, 0.0, r, abs_tol=0.5 * abs_tol)
    r1 = integrate_interval(f, r, np.inf, abs_tol=0.5 * abs_tol)
    return QuadratureResult(
        r0.value + r1.value,
        r0.abs_error_estimate + r1.abs_error_estimate,
        r0.evaluations + r1.evaluations)
