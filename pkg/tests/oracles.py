"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's numeric paths; elections are plain lists
of rankings.
"""

import itertools
import math
from fractions import Fraction


def place(ranking, c):
    return ranking.index(c)


def count_dominators(rankings, a, S):
    if a in S:
        return 0
    return sum(all(place(r, a) < place(r, s) for s in S) for r in rankings)


def worst_outside(rankings, S):
    m = len(rankings[0])
    outside = [a for a in range(1, m + 1) if a not in S]
    if not outside:
        return 0, 0
    counts = [(count_dominators(rankings, a, S), -a) for a in outside]
    c, neg_a = max(counts)
    return -neg_a, c


def undominated(rankings, S, alpha):
    _, c = worst_outside(rankings, S)
    return Fraction(c, len(rankings)) < alpha


def dimension(rankings):
    m = len(rankings[0])
    for k in range(1, m + 1):
        for S in itertools.combinations(range(1, m + 1), k):
            if undominated(rankings, S, Fraction(1, 2)):
                return k, S
    raise AssertionError


def exists_undominated(rankings, k, alpha):
    m = len(rankings[0])
    if k >= m:
        return True
    return any(undominated(rankings, S, alpha) for S in itertools.combinations(range(1, m + 1), k))


def committee_key(ranking, S):
    """Indicator vector of ``S`` read down the voter's ranking; larger is better."""
    return tuple(1 if c in S else 0 for c in ranking)


def best_response(rankings, y, k, alpha, h):
    """Enumerate every (a, U) with |U| = floor(alpha n)."""
    n, m = len(rankings), len(rankings[0])
    q = math.floor(alpha * n)
    best = None
    for a in range(1, m + 1):
        vals = []
        for r in rankings:
            s = sum(y[b - 1] for b in r[place(r, a) + 1:])
            vals.append(h(s))
        for U in itertools.combinations(range(n), q):
            v = sum(vals[i] for i in U) / n
            if best is None or v > best[0] + 1e-12:
                best = (v, a)
    return best


def uniform_committee_expectation(rankings, a, k):
    m = len(rankings[0])
    combos = list(itertools.combinations(range(1, m + 1), k))
    total = sum(count_dominators(rankings, a, S) for S in combos)
    return Fraction(total, len(combos) * len(rankings))
