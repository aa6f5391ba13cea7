"""Committee search strategies.

Every strategy returns a ``SearchResult`` whose certificate is recomputed by
the exact engine, so a reported committee is never trusted on the strength
of the algorithm that produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (DEFAULT_NODE_BUDGET, Committee, Election, _check_budget, _undominated,
                   as_threshold, is_alpha_undominated, iter_max_domination, max_domination)
from .errors import InputError, NotConverged, SamplingExhausted
from .lottery import (ActivationSpec, SolverOptions, below_mass, sample_committee,
                      solve_undominated_lottery)

STRATEGIES = ("brute", "greedy", "lottery", "recursive")
RESAMPLE_BUDGET = 50


@dataclass
class Certificate:
    worst: int
    count: int
    fraction: Fraction

    @classmethod
    def of(cls, e: Election, S) -> "Certificate":
        a, c = max_domination(e, S)
        return cls(a, c, Fraction(c, e.num_voters))


@dataclass
class SearchResult:
    committee: Committee | None
    certificate: Certificate | None
    strategy: str
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.committee is not None


@dataclass(frozen=True)
class RecursiveParams:
    gamma: float = 0.28467
    beta: float | None = None

    def __post_init__(self):
        if self.beta is None:
            object.__setattr__(self, "beta", self.gamma ** 2)
        if not 0 < self.gamma < 1 or not 0 < self.beta < 1:
            raise InputError("gamma and beta must lie in (0, 1)")
        if self.beta >= self.gamma:
            raise InputError("beta must be smaller than gamma")


def _full(e: Election, strategy: str) -> SearchResult:
    S = Committee(e.candidates)
    return SearchResult(S, Certificate(0, 0, Fraction(0)), strategy, {"trivial": True})


def _finish(e, S, alpha, strategy, stats) -> SearchResult:
    """Attach the exact certificate; drop the committee if it fails ``alpha``."""
    cert = Certificate.of(e, S)
    if alpha is not None and not _undominated(cert.count, e.num_voters, alpha):
        stats["best"] = S
        stats["best_certificate"] = cert
        return SearchResult(None, None, strategy, stats)
    return SearchResult(S, cert, strategy, stats)


def brute_force_search(e: Election, k: int, alpha, budget: int | None = DEFAULT_NODE_BUDGET) -> SearchResult:
    """Lexicographically first alpha-undominated committee of size ``k``.

    When none exists, ``stats["best"]`` holds the first committee with the
    smallest worst-case dominator count.
    """
    alpha = as_threshold(alpha)
    if k < 1:
        raise InputError("k must be positive")
    if k >= e.num_candidates:
        return _full(e, "brute")
    _check_budget(math.comb(e.num_candidates, k), budget)
    n = e.num_voters
    best = None
    nodes = 0
    for members, a, count in iter_max_domination(e, k):
        nodes += 1
        if _undominated(count, n, alpha):
            S = Committee(members)
            return SearchResult(S, Certificate(a, count, Fraction(count, n)), "brute", {"nodes": nodes})
        if best is None or count < best[2]:
            best = (members, a, count)
    stats = {"nodes": nodes, "best": Committee(best[0]),
             "best_certificate": Certificate(best[1], best[2], Fraction(best[2], n))}
    return SearchResult(None, None, "brute", stats)


def greedy_halving(e: Election, k: int | None = None, alpha=None) -> SearchResult:
    """Pick the candidate beating the most remaining candidates by strict
    majority, drop everything it beats, repeat.

    If the pick beats nobody strictly, the candidates it ties with are
    dropped too. With ``k`` and ``alpha`` given, the committee is reported
    only when it has at most ``k`` members and passes ``alpha``.
    """
    alpha = None if alpha is None else as_threshold(alpha)
    n = e.num_voters
    P = e.pairwise_counts()
    remaining = list(e.candidates)
    chosen = []
    rounds = 0
    while remaining:
        rounds += 1
        rem = np.asarray(remaining) - 1
        sub = 2 * P[np.ix_(rem, rem)]
        wins = (sub > n).sum(axis=1)
        i = int(np.argmax(wins))
        c = remaining[i]
        chosen.append(c)
        drop = sub[i] > n
        if not drop.any():
            drop = sub[i] == n
        drop[i] = True
        remaining = [r for r, d in zip(remaining, drop) if not d]
    S = Committee(chosen)
    stats = {"rounds": rounds}
    if k is not None and len(S) > k:
        stats["best"] = S
        stats["best_certificate"] = Certificate.of(e, S)
        return SearchResult(None, None, "greedy", stats)
    return _finish(e, S, alpha, "greedy", stats)


def _pad(S: Committee, y, k: int) -> Committee:
    if len(S) >= k:
        return S
    extra = [int(i) + 1 for i in np.argsort(-np.asarray(y), kind="stable") if int(i) + 1 not in S]
    return Committee(list(S) + extra[: k - len(S)])


def _child_seed(seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, *path])


def lottery_search(e: Election, k: int, alpha, g: ActivationSpec | None = None,
                   max_samples: int = 200, seed: int = 0,
                   opts: SolverOptions | None = None) -> SearchResult:
    """Solve the confined-adversary lottery, then sample committees from it.

    Each sample is ``k`` i.i.d. draws, padded back to ``k`` members with the
    highest-probability unused candidates, and kept if it verifies.
    """
    alpha = as_threshold(alpha)
    if k < 1:
        raise InputError("k must be positive")
    if k >= e.num_candidates:
        return _full(e, "lottery")
    g = g or ActivationSpec("kth-root", k)
    sol = solve_undominated_lottery(e, k, alpha, g, opts)
    y = sol.weights
    stats = {"solver_value": sol.value, "solver_target": sol.target,
             "solver_iterations": sol.iterations}
    best = None
    for i in range(max_samples):
        S = _pad(sample_committee(y, k, _child_seed(seed, i)), y, k)
        cert = Certificate.of(e, S)
        if _undominated(cert.count, e.num_voters, alpha):
            stats["samples"] = i + 1
            return SearchResult(S, cert, "lottery", stats)
        if best is None or cert.count < best[1].count:
            best = (S, cert)
    stats.update(samples=max_samples, best=best[0], best_certificate=best[1])
    return SearchResult(None, None, "lottery", stats)


def _best_single(e: Election) -> Committee:
    counts = [(c, max_domination(e, [c])[1]) for c in e.candidates]
    return Committee([min(counts, key=lambda x: (x[1], x[0]))[0]])


def _recurse(e: Election, k: int, params: RecursiveParams, seed: int, depth: int,
             opts: SolverOptions | None, lottery_alpha: Fraction, stats: dict) -> list[int]:
    if k == 1:
        return list(_best_single(e))
    block = math.ceil((1 - params.gamma) * k)
    rest = k - block
    beta_hat = params.beta ** (1 / block)
    g = ActivationSpec("relu-comp", block, max(0.0, 2 * beta_hat - 1))
    try:
        y = solve_undominated_lottery(e, block, lottery_alpha, g, opts).weights
    except NotConverged as exc:
        stats.setdefault("unconverged_levels", []).append(depth)
        y = exc.best.weights
    n = e.num_voters
    for attempt in range(RESAMPLE_BUDGET):
        S = sample_committee(y, block, _child_seed(seed, depth, attempt))
        # Upper envelope of rank_v(S): mass of committees whose favourite is
        # not above v's favourite in S. Still below rank_v(a) for any a > S.
        mass = below_mass(e, y)
        rows = np.arange(n)
        fav = np.asarray(S.members)[np.argmin(e.position[:, np.asarray(S.members) - 1], axis=1)] - 1
        r = (mass[rows, fav] + y[fav]) ** block
        W = [v + 1 for v in np.flatnonzero(r < params.beta)]
        if len(W) <= params.beta * n:
            break
    else:
        raise SamplingExhausted(f"level {depth}: no sample met |W| <= beta n in {RESAMPLE_BUDGET} tries")
    stats.setdefault("levels", []).append({"size": len(S), "voters": n, "left_out": len(W),
                                           "attempts": attempt + 1})
    chosen = list(S)
    if rest == 0 or not W:
        return chosen
    return chosen + _recurse(e.restrict_voters(W), rest, params, seed, depth + 1,
                             opts, lottery_alpha, stats)


def recursive_search(e: Election, k: int, params: RecursiveParams | None = None, seed: int = 0,
                     alpha=None, opts: SolverOptions | None = None, lottery_alpha=1) -> SearchResult:
    """Sample a ``ceil((1 - gamma) k)`` block from a shifted-ReLU lottery,
    recurse with ``floor(gamma k)`` seats on the voters who rank the block
    below ``beta``, and return the union.

    ``k == 1`` delegates to ``brute_force_search`` (which needs ``alpha``).
    """
    params = params or RecursiveParams()
    alpha = None if alpha is None else as_threshold(alpha)
    if k < 1:
        raise InputError("k must be positive")
    if k == 1:
        if alpha is None:
            raise InputError("k = 1 delegates to brute force, which needs alpha")
        res = brute_force_search(e, 1, alpha)
        res.stats["delegated"] = "brute"
        return res
    if k >= e.num_candidates:
        return _full(e, "recursive")
    stats = {}
    chosen = _recurse(e, k, params, seed, 0, opts, as_threshold(lottery_alpha), stats)
    return _finish(e, Committee(chosen), alpha, "recursive", stats)


def run_strategy(e: Election, strategy: str, k: int, alpha, seed: int = 0,
                 params: RecursiveParams | None = None, g: ActivationSpec | None = None) -> SearchResult:
    if strategy == "brute":
        return brute_force_search(e, k, alpha)
    if strategy == "greedy":
        return greedy_halving(e, k, alpha)
    if strategy == "lottery":
        return lottery_search(e, k, alpha, g=g, seed=seed)
    if strategy == "recursive":
        return recursive_search(e, k, params, seed=seed, alpha=alpha)
    raise InputError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
