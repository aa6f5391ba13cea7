"""Exhaustive and exact checks tying the bounds to concrete instances.

Reports carry one record per case; ``margin`` is signed so that a case
passes when its margin is positive (strict checks) or non-negative.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .core import (DEFAULT_NODE_BUDGET, Committee, CommitteeDistribution, Election, _check_budget,
                   as_threshold, dominator_count, iter_max_domination, rank_committee)
from .lottery import ActivationSpec
from .profiles import gen_cycle_product, gen_full_factorial

SUITES = ("thm6", "cor1", "claim-high")


@dataclass
class Case:
    instance: str
    quantity: object
    bound: object
    margin: object
    passed: bool


@dataclass
class VerificationReport:
    suite: str
    passed: bool
    details: list = field(default_factory=list)

    def to_json(self) -> str:
        def enc(x):
            if isinstance(x, Fraction):
                return {"num": x.numerator, "den": x.denominator, "float": float(x)}
            if isinstance(x, Committee):
                return list(x)
            raise TypeError(type(x))
        return json.dumps(asdict(self), default=enc, sort_keys=True)


def verify_theorem6(k: int, t: int, budget: int | None = DEFAULT_NODE_BUDGET) -> VerificationReport:
    """Every size-``k`` committee of the ``(k+1)``-cycle times ``t``-cycle
    election is dominated by at least ``2/(k+1) * (1 - 1/t)`` of the voters.

    The bound is checked as ``count * (k+1) * t >= 2 * (t-1) * n``.
    """
    e = gen_cycle_product(k + 1, t)
    n = e.num_voters
    _check_budget(math.comb(e.num_candidates, k), budget)
    rhs = 2 * (t - 1) * n
    details = []
    for members, a, count in iter_max_domination(e, k):
        lhs = count * (k + 1) * t
        details.append(Case(f"S={Committee(members)} worst={a}", Fraction(count, n),
                            Fraction(2 * (t - 1), (k + 1) * t), Fraction(lhs - rhs, (k + 1) * t * n),
                            lhs >= rhs))
    return VerificationReport("thm6", all(c.passed for c in details), details)


def verify_cor1_tightness(m: int, k: int) -> VerificationReport:
    """On the all-rankings election, the uniform lottery over size-``k``
    committees leaves every candidate at exactly ``(1/(k+1)) (1 - k/m)``
    expected domination."""
    if not 1 <= k < m:
        raise ValueError("need 1 <= k < m")
    e = gen_full_factorial(m)
    committees = [members for members, _, _ in iter_max_domination(e, k)]
    weight = Fraction(1, len(committees))
    expected = Fraction(1, k + 1) * (1 - Fraction(k, m))
    details = []
    for a in e.candidates:
        total = sum(dominator_count(e, a, S) for S in committees)
        value = weight * Fraction(total, e.num_voters)
        margin = value - expected
        details.append(Case(f"m={m} k={k} a={a}", value, expected, margin, margin == 0))
    return VerificationReport("cor1", all(c.passed for c in details), details)


def _exact_g(g: ActivationSpec, x):
    if g.kind == "identity" or (g.kind == "kth-root" and g.k == 1):
        return x
    return g.value(float(x))


def verify_claim_high(e: Election, d: CommitteeDistribution, alpha,
                      g: ActivationSpec) -> VerificationReport:
    """Expected bottom-``alpha n`` activated committee rank beats the
    integral of g over ``[0, alpha]`` (strictly).

    For each support committee ``S`` the ``floor(alpha n)`` smallest values
    of ``g(rank_v(S))`` are summed (ties by voter id, which does not change
    the sum). Exact when ``d`` is rational and ``g`` is the identity.
    """
    alpha = as_threshold(alpha)
    q = math.floor(alpha * e.num_voters)
    n = e.num_voters
    exact = d.exact and (g.kind == "identity" or (g.kind == "kth-root" and g.k == 1))
    zero = Fraction(0) if exact else 0.0
    expectation = zero
    details = []
    for S, w in d:
        vals = sorted(((_exact_g(g, rank_committee(e, d, v, S)), v) for v in e.voters))
        low = sum((x for x, _ in vals[:q]), zero) / n
        expectation += w * low
    bound = g.lower_integral(alpha) if exact else float(g.lower_integral(alpha))
    margin = expectation - bound
    details.append(Case(f"n={n} m={e.num_candidates} support={len(d)} alpha={alpha} g={g}",
                        expectation, bound, margin, margin > 0))
    return VerificationReport("claim-high", margin > 0, details)
