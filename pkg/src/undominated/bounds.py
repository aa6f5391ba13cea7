"""Numerical alpha-versus-k guarantees.

Every integral is a closed-form antiderivative; root finding is plain
bisection and the one-dimensional minimisation is golden-section search.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import InputError
from .lottery import ActivationSpec

RESIDUAL_TOL = 1e-10
_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class BoundRow:
    k: int
    lower: float
    thm1: float
    thm4: float
    thm4_t: float
    dp: float


CSV_FIELDS = ("k", "lower", "thm1", "thm4", "thm4_t", "dp")


def bisect(f, lo: float, hi: float, tol: float = RESIDUAL_TOL, max_iter: int = 400) -> float:
    """Root of ``f`` on ``[lo, hi]`` where ``f(lo)`` and ``f(hi)`` differ in sign.

    Stops once ``|f(mid)| <= tol`` and the bracket has stopped shrinking, or
    after ``max_iter`` halvings.
    """
    flo = f(lo)
    if flo == 0:
        return lo
    if (flo > 0) == (f(hi) > 0):
        raise ValueError("root is not bracketed")
    mid = lo
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0 or (abs(fm) <= tol and hi - lo <= tol):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= 4 * math.ulp(hi):
            break
    return mid


def golden_section(f, lo: float, hi: float, tol: float = RESIDUAL_TOL) -> float:
    """Minimiser of a unimodal ``f`` on ``[lo, hi]`` to interval width ``tol``."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2


def _check_k(k):
    if int(k) != k or k < 1:
        raise InputError("k must be a positive integer")


def theorem1_alpha(k: int) -> float:
    """Smallest alpha with alpha / (1 - ln alpha) >= 2 / (k + 1)."""
    _check_k(k)
    goal = 2 / (k + 1)
    if goal >= 1:
        return 1.0
    return bisect(lambda a: a / (1 - math.log(a)) - goal, 1e-300, 1.0)


def theorem4_condition(t: float, k: int) -> float:
    """Left minus right side of the shifted-ReLU condition at shift ``t``."""
    alpha = t ** k - t + 1
    return k / (k + 1) * (alpha ** ((k + 1) / k) - t ** (k + 1)) - (1 - t * t) / 2


def theorem4_alpha(k: int) -> tuple[float, float]:
    """Best alpha reachable with a shifted-ReLU activation, and its shift ``t``.

    ``alpha = t**k - t + 1`` decreases in ``t`` up to ``k**(-1/(k-1))``; the
    condition holds on ``[0, t*]`` and fails just beyond, so ``t*`` is the
    bisection root on ``[0, k**(-1/(k-1))]``.
    """
    _check_k(k)
    if k == 1:
        return 1.0, 0.0
    hi = k ** (-1 / (k - 1))
    t = bisect(lambda t: theorem4_condition(t, k), 0.0, hi)
    return t ** k - t + 1, t


def theorem5_objective(gamma: float) -> float:
    return 4 * math.log(1 / gamma) / (1 - gamma) ** 2


def theorem5_constant() -> tuple[float, float]:
    """Minimum over gamma in (0, 1) of 4 ln(1/gamma) / (1 - gamma)**2."""
    gamma = golden_section(theorem5_objective, 1e-6, 1 - 1e-6)
    return theorem5_objective(gamma), gamma


def lower_bound_alpha(k: int) -> float:
    _check_k(k)
    return float(Fraction(2, k + 1))


def lower_bound_fraction(k: int) -> Fraction:
    _check_k(k)
    return Fraction(2, k + 1)


def meat_condition_holds(alpha, k: int, g: ActivationSpec) -> bool:
    """Integral of g on [0, alpha] >= integral of g(x**k) on [1 - alpha, 1]."""
    _check_k(k)
    if not 0 < alpha <= 1:
        raise InputError("alpha must lie in (0, 1]")
    if g.k != k:
        raise InputError("activation k and committee size k differ")
    return g.lower_integral(alpha) >= g.upper_integral(alpha)


def dp_table(k_max: int, base: str = "thm1") -> list[float]:
    """``dp[k]`` for ``k = 1..k_max`` (index 0 unused)."""
    _check_k(k_max)
    if base not in ("thm1", "thm4"):
        raise InputError("base must be 'thm1' or 'thm4'")
    start = theorem1_alpha if base == "thm1" else (lambda k: theorem4_alpha(k)[0])
    dp = [math.nan] * (k_max + 1)
    for k in range(1, k_max + 1):
        best = start(k)
        for kp in range(1, k):
            r = kp / k
            cand = r * r * dp[kp] + 4 * math.log(k / kp) / (k - kp)
            if cand < best:
                best = cand
        dp[k] = best
    return dp


def theorem7_table(k_max: int, base: str = "thm1") -> list[BoundRow]:
    dp = dp_table(k_max, base)
    rows = []
    for k in range(1, k_max + 1):
        a4, t4 = theorem4_alpha(k)
        rows.append(BoundRow(k, lower_bound_alpha(k), theorem1_alpha(k), a4, t4, dp[k]))
    return rows


def first_dp_improvement(k_max: int, base: str = "thm1") -> int | None:
    """Smallest k whose dp value is strictly below the base bound."""
    dp = dp_table(k_max, base)
    start = theorem1_alpha if base == "thm1" else (lambda k: theorem4_alpha(k)[0])
    for k in range(1, k_max + 1):
        if dp[k] < start(k):
            return k
    return None


def rows_to_csv(rows, precision: int | None = 6) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        vals = [getattr(r, f) for f in CSV_FIELDS[1:]]
        fmt = (lambda x: f"{x:.{precision}f}") if precision is not None else repr
        w.writerow([r.k, *map(fmt, vals)])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([asdict(r) for r in rows])


def figure_series(k_max: int) -> list[tuple[int, float, float, float]]:
    """``(k, thm4 alpha, 2/(k+1), 16/k)`` for re-plotting the comparison figure."""
    return [(k, theorem4_alpha(k)[0], lower_bound_alpha(k), 16 / k) for k in range(1, k_max + 1)]
