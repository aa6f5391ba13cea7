"""Elections, committees and the exact domination engine.

Candidates and voters are 1-based dense integers. All threshold comparisons
are done on integer cross-products so that the strict ``< alpha`` in the
definition of an alpha-undominated committee is honoured exactly, including
the boundary cases where ``alpha * n`` is an integer.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError

DEFAULT_NODE_BUDGET = 10_000_000
_BATCH = 4096


class Election:
    """A preference profile of strict rankings.

    Parameters
    ----------
    rankings : sequence of sequences of int
        One ranking per voter, most-preferred candidate first. Every ranking
        must be a permutation of ``1..m``.

    Attributes
    ----------
    num_candidates, num_voters : int
    rankings : tuple of tuple of int
    position : numpy.ndarray
        ``position[v - 1, c - 1]`` is the 0-based place of candidate ``c`` in
        voter ``v``'s ranking (0 = favourite).
    """

    __slots__ = ("rankings", "num_voters", "num_candidates", "position", "_beats")

    def __init__(self, rankings: Iterable[Sequence[int]]):
        rows = tuple(tuple(int(c) for c in r) for r in rankings)
        if not rows:
            raise InputError("an election needs at least one voter")
        m = len(rows[0])
        if m < 1:
            raise InputError("an election needs at least one candidate")
        expected = set(range(1, m + 1))
        for i, r in enumerate(rows, start=1):
            if len(r) != m or set(r) != expected:
                raise InputError(f"voter {i}: ranking is not a permutation of 1..{m}")
        self.rankings = rows
        self.num_voters = len(rows)
        self.num_candidates = m
        order = np.asarray(rows, dtype=np.int64) - 1
        pos = np.empty_like(order)
        rows_idx = np.arange(len(rows))[:, None]
        pos[rows_idx, order] = np.arange(m)
        pos.setflags(write=False)
        self.position = pos
        self._beats = None

    def __eq__(self, other):
        if not isinstance(other, Election):
            return NotImplemented
        return self.rankings == other.rankings

    def __hash__(self):
        return hash(self.rankings)

    def __repr__(self):
        return f"Election(m={self.num_candidates}, n={self.num_voters})"

    @property
    def candidates(self) -> range:
        return range(1, self.num_candidates + 1)

    @property
    def voters(self) -> range:
        return range(1, self.num_voters + 1)

    def restrict_voters(self, voters: Iterable[int]) -> "Election":
        """Sub-election on the given voters (same candidate set)."""
        return Election(self.rankings[self._voter(v) - 1] for v in voters)

    def pairwise_counts(self) -> np.ndarray:
        """``P[a-1, b-1]`` = number of voters ranking ``a`` above ``b``."""
        if self._beats is None:
            pos = self.position
            beats = (pos[:, :, None] < pos[:, None, :]).sum(axis=0)
            beats.setflags(write=False)
            self._beats = beats
        return self._beats

    def _voter(self, v) -> int:
        v = int(v)
        if not 1 <= v <= self.num_voters:
            raise InputError(f"voter {v} out of range 1..{self.num_voters}")
        return v

    def _candidate(self, a) -> int:
        a = int(a)
        if not 1 <= a <= self.num_candidates:
            raise InputError(f"candidate {a} out of range 1..{self.num_candidates}")
        return a

    def _committee(self, S) -> "Committee":
        S = S if isinstance(S, Committee) else Committee(S)
        if S.members[-1] > self.num_candidates:
            raise InputError(f"committee {S} mentions a candidate outside 1..{self.num_candidates}")
        return S


@dataclass(frozen=True)
class Committee:
    """A nonempty set of candidate ids, stored sorted ascending."""

    members: tuple

    def __post_init__(self):
        try:
            members = tuple(sorted({int(c) for c in self.members}))
        except (TypeError, ValueError):
            raise InputError(f"bad committee members: {self.members!r}") from None
        if not members:
            raise InputError("a committee must be nonempty")
        if members[0] < 1:
            raise InputError("candidate ids start at 1")
        object.__setattr__(self, "members", members)

    @classmethod
    def parse(cls, text: str) -> "Committee":
        """Parse ``"1,4"`` (spaces and braces tolerated)."""
        body = text.strip().strip("{}")
        try:
            ids = [int(tok) for tok in body.replace(" ", ",").split(",") if tok]
        except ValueError:
            raise InputError(f"cannot parse committee {text!r}") from None
        return cls(ids)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, c):
        return c in self.members

    def __lt__(self, other):
        return self.members < other.members

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def as_threshold(alpha) -> Fraction:
    """Coerce ``alpha`` to an exact fraction in (0, 1].

    Accepts ``Fraction``, ``int``, ``(num, den)`` pairs and ``"P/Q"`` strings.
    Floats are rejected on purpose: the boundary of ``< alpha`` matters.
    """
    if isinstance(alpha, bool) or isinstance(alpha, float):
        raise InputError("alpha must be an exact fraction, not a float")
    if isinstance(alpha, tuple):
        alpha = Fraction(*alpha)
    elif isinstance(alpha, str):
        try:
            alpha = Fraction(alpha.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse alpha {alpha!r}") from None
    elif isinstance(alpha, Rational):
        alpha = Fraction(alpha)
    else:
        raise InputError(f"unsupported alpha type {type(alpha).__name__}")
    if not 0 < alpha <= 1:
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


@dataclass(frozen=True)
class CommitteeDistribution:
    """Finite-support distribution over committees.

    Weights are either all ``Fraction`` (exact) or floats. Construct with
    ``CommitteeDistribution.from_pairs`` to validate.
    """

    support: tuple

    def __post_init__(self):
        pairs = tuple((c if isinstance(c, Committee) else Committee(c), w) for c, w in self.support)
        if not pairs:
            raise InputError("empty distribution")
        seen = set()
        for c, w in pairs:
            if c in seen:
                raise InputError(f"committee {c} appears twice in the support")
            seen.add(c)
            if w < 0:
                raise InputError(f"negative weight for {c}")
        total = sum(w for _, w in pairs)
        exact = all(isinstance(w, Rational) for _, w in pairs)
        if (total != 1) if exact else abs(total - 1) > 1e-12:
            raise InputError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "support", pairs)

    @classmethod
    def from_pairs(cls, pairs) -> "CommitteeDistribution":
        if isinstance(pairs, dict):
            pairs = pairs.items()
        return cls(tuple(pairs))

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Rational) for _, w in self.support)

    def __iter__(self):
        return iter(self.support)

    def __len__(self):
        return len(self.support)


class Ordering(enum.Enum):
    FIRST_ABOVE = "first-above"
    SECOND_ABOVE = "second-above"
    EQUAL = "equal"


def prefers(e: Election, v: int, a: int, b: int) -> bool:
    """True iff voter ``v`` ranks ``a`` strictly above ``b``."""
    v, a, b = e._voter(v), e._candidate(a), e._candidate(b)
    return bool(e.position[v - 1, a - 1] < e.position[v - 1, b - 1])


def _beats_committee(e: Election, v: int, a: int, S: Committee) -> bool:
    row = e.position[v - 1]
    pa = row[a - 1]
    return all(pa < row[s - 1] for s in S)


def domination_counts(e: Election, S) -> np.ndarray:
    """Vector of ``|a > S|`` for every candidate (0-based index ``a - 1``)."""
    S = e._committee(S)
    idx = np.asarray(S.members) - 1
    best = e.position[:, idx].min(axis=1)
    return (e.position < best[:, None]).sum(axis=0)


def dominator_count(e: Election, a: int, S) -> int:
    """Number of voters who prefer ``a`` to every member of ``S``."""
    a = e._candidate(a)
    S = e._committee(S)
    if a in S:
        return 0
    return int(domination_counts(e, S)[a - 1])


def max_domination(e: Election, S) -> tuple[int, int]:
    """Worst outside candidate for ``S`` and its dominator count.

    Ties go to the smallest candidate id. Returns ``(0, 0)`` when ``S`` is
    the whole candidate set.
    """
    S = e._committee(S)
    if len(S) == e.num_candidates:
        return 0, 0
    counts = domination_counts(e, S).astype(np.int64)
    counts[np.asarray(S.members) - 1] = -1
    a = int(np.argmax(counts))
    return a + 1, int(counts[a])


def _undominated(count: int, n: int, alpha: Fraction) -> bool:
    return count * alpha.denominator < alpha.numerator * n


def is_alpha_undominated(e: Election, S, alpha) -> bool:
    """True iff every outside candidate is preferred to all of ``S`` by
    strictly fewer than ``alpha * n`` voters."""
    alpha = as_threshold(alpha)
    _, count = max_domination(e, S)
    return _undominated(count, e.num_voters, alpha)


def stability_constant(e: Election, S) -> Fraction:
    """``|S| * max_a |a > S| / n``; ``S`` is c-stable exactly for larger c."""
    S = e._committee(S)
    _, count = max_domination(e, S)
    return Fraction(len(S) * count, e.num_voters)


def _favourite(row, members) -> int:
    return min(members, key=lambda c: row[c - 1])


def compare_committees(e: Election, v: int, S, S2) -> Ordering:
    """Voter ``v``'s (total) preference between two committees.

    Different favourites decide strictly. With a shared favourite, a proper
    superset wins; otherwise the favourites of the two set differences are
    compared.
    """
    v = e._voter(v)
    S, S2 = e._committee(S), e._committee(S2)
    if S == S2:
        return Ordering.EQUAL
    row = e.position[v - 1]
    f1, f2 = _favourite(row, S), _favourite(row, S2)
    if f1 != f2:
        return Ordering.FIRST_ABOVE if row[f1 - 1] < row[f2 - 1] else Ordering.SECOND_ABOVE
    a, b = set(S), set(S2)
    if b < a:
        return Ordering.FIRST_ABOVE
    if a < b:
        return Ordering.SECOND_ABOVE
    d1, d2 = _favourite(row, a - b), _favourite(row, b - a)
    return Ordering.FIRST_ABOVE if row[d1 - 1] < row[d2 - 1] else Ordering.SECOND_ABOVE


def rank_candidate(e: Election, d: CommitteeDistribution, v: int, a: int):
    """Probability that a committee drawn from ``d`` sits strictly below ``a``
    for voter ``v``. Exact when ``d`` has rational weights."""
    v, a = e._voter(v), e._candidate(a)
    return sum((w for S, w in d if a not in S and _beats_committee(e, v, a, e._committee(S))),
               Fraction(0) if d.exact else 0.0)


def rank_committee(e: Election, d: CommitteeDistribution, v: int, S):
    """Probability that a committee drawn from ``d`` is weakly below ``S``
    for voter ``v``."""
    v = e._voter(v)
    S = e._committee(S)
    return sum((w for S2, w in d if compare_committees(e, v, S, S2) is not Ordering.SECOND_ABOVE),
               Fraction(0) if d.exact else 0.0)


def _check_budget(nodes: int, budget: int | None):
    if budget is not None and nodes > budget:
        raise BudgetExceeded(f"enumeration needs {nodes} nodes, budget is {budget}")


def iter_max_domination(e: Election, k: int, chunk: int = _BATCH):
    """Yield ``(committee_tuple, worst_candidate, count)`` for every size-``k``
    committee in lexicographic order. Vectorised in batches."""
    m = e.num_candidates
    if k == m:
        yield tuple(range(1, m + 1)), 0, 0
        return
    pos = e.position
    combos = itertools.combinations(range(m), k)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, chunk)),
                            dtype=np.int64)
        if block.size == 0:
            return
        block = block.reshape(-1, k)
        best = pos[:, block].min(axis=2)                      # (n, C)
        counts = (pos[:, :, None] < best[:, None, :]).sum(axis=0)  # (m, C)
        cols = np.arange(block.shape[0])
        counts[block.T, cols[None, :]] = -1
        worst = counts.argmax(axis=0)
        value = counts[worst, cols]
        for row, a, c in zip(block.tolist(), worst.tolist(), value.tolist()):
            yield tuple(x + 1 for x in row), a + 1, c


def condorcet_dimension(e: Election, budget: int | None = DEFAULT_NODE_BUDGET) -> tuple[int, Committee]:
    """Size of the smallest 1/2-undominated committee and the lexicographically
    first such committee.

    Raises ``BudgetExceeded`` before enumerating a level whose cumulative node
    count would pass ``budget``.
    """
    half = Fraction(1, 2)
    n, m = e.num_voters, e.num_candidates
    nodes = 0
    for k in range(1, m + 1):
        nodes += math.comb(m, k)
        _check_budget(nodes, budget)
        for members, _, count in iter_max_domination(e, k):
            if _undominated(count, n, half):
                return k, Committee(members)
    raise AssertionError("the full candidate set is always undominated")
