"""Confined-adversary game over candidate lotteries.

The defender picks a lottery ``y`` over candidates; committees are ``k``
i.i.d. draws from it. The attacker picks a candidate ``a`` and a set ``U``
of at most ``alpha * n`` voters and is paid

    (1/n) * sum_{v in U} g(rank_v(a)),   rank_v(a) = (sum_{b below a for v} y_b) ** k

Writing ``s`` for the inner sum, the payoff depends on ``h(s) = g(s**k)``,
which is convex for every activation in the catalogue, so the defender's
worst-case loss ``phi(y)`` is convex on the simplex and can be driven down by
entropic mirror descent.

Lotteries are plain numpy vectors indexed by ``candidate - 1``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Committee, CommitteeDistribution, Election, as_threshold
from .errors import InputError, NotConverged

KINDS = ("identity", "kth-root", "relu-comp")
_TIE = 1e-12


@dataclass(frozen=True)
class ActivationSpec:
    """An activation ``g`` from the catalogue.

    ``identity``   g(x) = x,                    h(s) = s**k
    ``kth-root``   g(x) = x**(1/k),             h(s) = s
    ``relu-comp``  g(x) = max(0, x**(1/k) - t), h(s) = max(0, s - t)
    """

    kind: str
    k: int
    t: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown activation {self.kind!r}; choose from {KINDS}")
        if int(self.k) != self.k or self.k < 1:
            raise InputError("activation k must be a positive integer")
        if self.kind == "relu-comp" and not 0 <= self.t < 1:
            raise InputError("relu shift t must lie in [0, 1)")

    @classmethod
    def parse(cls, text: str, k: int) -> "ActivationSpec":
        """``identity``, ``kth-root`` or ``relu:T``."""
        if text.startswith("relu"):
            _, _, t = text.partition(":")
            try:
                return cls("relu-comp", k, float(t) if t else 0.0)
            except ValueError:
                raise InputError(f"bad relu shift in {text!r}") from None
        return cls(text, k)

    def __str__(self):
        return f"relu:{self.t}" if self.kind == "relu-comp" else self.kind

    def value(self, x):
        """g(x) for x in [0, 1]."""
        if not 0 <= x <= 1:
            raise InputError(f"activation argument {x} outside [0, 1]")
        if self.kind == "identity":
            return x
        root = x if self.k == 1 else float(x) ** (1.0 / self.k)
        if self.kind == "kth-root":
            return root
        return max(0.0, float(root) - self.t)

    def composed(self, s):
        """h(s) = g(s**k), vectorised."""
        s = np.asarray(s, dtype=float)
        if self.kind == "identity":
            return s ** self.k
        if self.kind == "kth-root":
            return s
        return np.maximum(0.0, s - self.t)

    def composed_slope(self, s):
        """A subgradient of h; right derivative at the relu kink."""
        s = np.asarray(s, dtype=float)
        if self.kind == "identity":
            return self.k * s ** (self.k - 1)
        if self.kind == "kth-root":
            return np.ones_like(s)
        return (s >= self.t).astype(float)

    def lower_integral(self, alpha):
        """Closed form of the integral of g over [0, alpha]."""
        k = self.k
        if self.kind == "identity":
            return alpha * alpha / 2
        if self.kind == "kth-root":
            if k == 1:
                return alpha * alpha / 2
            return k / (k + 1) * float(alpha) ** ((k + 1) / k)
        a, t = float(alpha), self.t
        if a <= t ** k:
            return 0.0
        return k / (k + 1) * (a ** ((k + 1) / k) - t ** (k + 1)) - t * (a - t ** k)

    def upper_integral(self, alpha):
        """Closed form of the integral of h over [1 - alpha, 1]."""
        k = self.k
        if self.kind == "identity":
            return (1 - (1 - alpha) ** (k + 1)) / (k + 1)
        if self.kind == "kth-root":
            return (1 - (1 - alpha) ** 2) / 2
        a, t = float(alpha), self.t
        lo = max(1 - a, t)
        return ((1 - t) ** 2 - (lo - t) ** 2) / 2


def activation_value(g: ActivationSpec, x):
    return g.value(x)


@dataclass
class SolverOptions:
    """Mirror-descent settings.

    ``stop_at_target`` ends the run at the first iterate whose worst-case
    loss is already at or below the target. ``seed`` is recorded for
    provenance; the solver itself is deterministic.
    """

    max_iterations: int = 20000
    tolerance: float = 1e-4
    step_scale: float = 1.0
    seed: int = 0
    stop_at_target: bool = True

    def __post_init__(self):
        if self.tolerance <= 0:
            raise InputError("tolerance must be positive")
        if self.max_iterations < 1:
            raise InputError("max_iterations must be positive")


@dataclass
class LotteryResult:
    weights: np.ndarray
    value: float
    target: float
    iterations: int
    attacker: tuple = field(default=())

    @property
    def converged(self) -> bool:
        return self.value <= self.target


def as_lottery(y, m: int | None = None) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or (m is not None and y.size != m):
        raise InputError(f"lottery must be a vector of length {m}")
    if (y < 0).any() or abs(y.sum() - 1) > 1e-12:
        raise InputError("lottery must be a probability vector")
    return y


def uniform_lottery(m: int) -> np.ndarray:
    return np.full(m, 1.0 / m)


def below_mass(e: Election, y) -> np.ndarray:
    """``s[v-1, a-1]`` = lottery mass voter ``v`` ranks strictly below ``a``."""
    order = np.asarray(e.rankings) - 1
    y_ord = np.asarray(y, dtype=float)[order]
    suffix = y_ord[:, ::-1].cumsum(axis=1)[:, ::-1] - y_ord
    s = np.take_along_axis(suffix, e.position, axis=1)
    return np.clip(s, 0.0, 1.0)


def candidate_rank_under_lottery(e: Election, y, k: int, v: int, a: int):
    """Probability that ``k`` i.i.d. draws from ``y`` all sit below ``a`` for ``v``.

    Exact when ``y`` holds ``Fraction`` entries.
    """
    v, a = e._voter(v), e._candidate(a)
    row = e.position[v - 1]
    mass = sum((y[b] for b in range(e.num_candidates) if row[b] > row[a - 1]),
               Fraction(0) if isinstance(y[0], Fraction) else 0.0)
    return mass ** k


def expected_domination(e: Election, y, k: int, a: int):
    """Expected fraction of voters preferring ``a`` to a committee of ``k``
    i.i.d. draws from ``y``."""
    total = sum(candidate_rank_under_lottery(e, y, k, v, a) for v in e.voters)
    return total / e.num_voters


def expected_domination_all(e: Election, y, k: int) -> np.ndarray:
    """Vectorised ``expected_domination`` for every candidate (float)."""
    return (below_mass(e, y) ** k).mean(axis=0)


def _payoffs(e: Election, y, g: ActivationSpec, q: int):
    s = below_mass(e, y)
    H = g.composed(s)
    if q == 0:
        return s, H, np.zeros(e.num_candidates)
    top = -np.partition(-H, q - 1, axis=0)[:q] if q < e.num_voters else H
    return s, H, top.sum(axis=0) / e.num_voters


def _pick(values) -> int:
    best = values.max()
    return int(np.flatnonzero(values >= best - _TIE)[0])


def attacker_best_response(e: Election, y, k: int, alpha, g: ActivationSpec):
    """Best pure attack ``(a, U, value)`` against lottery ``y``.

    ``U`` holds the ``floor(alpha * n)`` voters with the largest
    ``g(rank_v(a))`` (ties to the lower voter id), returned sorted ascending;
    ``a`` maximises the payoff with ties to the lower candidate id.
    """
    alpha = as_threshold(alpha)
    if g.k != k:
        raise InputError("activation k and committee size k differ")
    q = math.floor(alpha * e.num_voters)
    _, H, values = _payoffs(e, y, g, q)
    a = _pick(values)
    U = np.argsort(-H[:, a], kind="stable")[:q]
    return a + 1, tuple(sorted(int(v) + 1 for v in U)), float(values[a])


def _subgradient(e: Election, s, g: ActivationSpec, a: int, U) -> np.ndarray:
    idx = np.asarray(U, dtype=np.int64) - 1
    if idx.size == 0:
        return np.zeros(e.num_candidates)
    pos = e.position[idx]
    below = pos > pos[:, a - 1][:, None]
    slope = g.composed_slope(s[idx, a - 1])
    return (slope[:, None] * below).sum(axis=0) / e.num_voters


def solve_undominated_lottery(e: Election, k: int, alpha, g: ActivationSpec,
                              opts: SolverOptions | None = None) -> LotteryResult:
    """Minimise the attacker's best-response value over candidate lotteries.

    Entropic mirror descent with step ``step_scale / sqrt(iteration)``,
    keeping the best iterate. The target is the closed-form integral of
    ``h`` over ``[1 - alpha, 1]``, which the optimum is known to beat.

    Raises ``NotConverged`` (carrying the best result) when the best value
    still exceeds ``target + tolerance`` after ``max_iterations``.
    """
    opts = opts or SolverOptions()
    alpha = as_threshold(alpha)
    if g.k != k:
        raise InputError("activation k and committee size k differ")
    m, n = e.num_candidates, e.num_voters
    q = math.floor(alpha * n)
    target = float(g.upper_integral(alpha))

    y = uniform_lottery(m)
    best = None
    it = 0
    for it in range(1, opts.max_iterations + 1):
        s, H, values = _payoffs(e, y, g, q)
        a = _pick(values) + 1
        value = float(values[a - 1])
        if best is None or value < best.value:
            U = np.argsort(-H[:, a - 1], kind="stable")[:q] + 1
            best = LotteryResult(y.copy(), value, target, it, (a, tuple(sorted(U.tolist()))))
            if opts.stop_at_target and value <= target:
                break
        else:
            U = np.argsort(-H[:, a - 1], kind="stable")[:q] + 1
        grad = _subgradient(e, s, g, a, U)
        logits = np.log(np.maximum(y, 1e-300)) - opts.step_scale / math.sqrt(it) * grad
        logits -= logits.max()
        y = np.exp(logits)
        y /= y.sum()
    best.iterations = it
    if best.value > target + opts.tolerance:
        raise NotConverged(
            f"best value {best.value:.6g} exceeds target {target:.6g} after {it} iterations", best)
    return best


def sample_committee(y, k: int, seed: int) -> Committee:
    """``k`` i.i.d. draws from ``y``, deduplicated (size at most ``k``)."""
    if k < 1:
        raise InputError("k must be positive")
    p = np.asarray(y, dtype=float)
    p = p / p.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.choice(p.size, size=k, p=p)
    return Committee((draws + 1).tolist())


def expand_product(y, k: int) -> CommitteeDistribution:
    """Explicit distribution of the committee formed by ``k`` i.i.d. draws
    from ``y`` (``m**k`` ordered draws, merged by set). Exact for
    ``Fraction`` weights."""
    y = list(y)
    exact = all(isinstance(w, Fraction) for w in y)
    acc = defaultdict(lambda: Fraction(0) if exact else 0.0)
    support = [i for i, w in enumerate(y) if w]
    for draw in itertools.product(support, repeat=k):
        w = Fraction(1) if exact else 1.0
        for i in draw:
            w *= y[i]
        acc[Committee(i + 1 for i in draw)] += w
    pairs = sorted(acc.items())
    if not exact:
        total = sum(w for _, w in pairs)
        pairs = [(c, w / total) for c, w in pairs]
    return CommitteeDistribution.from_pairs(pairs)
