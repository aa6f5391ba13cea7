"""Plain-text profile format and generators for the standard instance families.

Format::

    # comment lines start with '#'
    m n
    1 2 3          one voter per line, most preferred first
    w 4 3 1 2      'w <count>' repeats the ranking <count> times

Blank lines are ignored, CRLF is accepted. ``n`` counts voters after
replication.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .core import Election
from .errors import BudgetExceeded, InputError, ProfileError

FACTORIAL_BUDGET = 5040


def parse_election(text: str) -> Election:
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ProfileError("header must be 'm n'", lineno)
            try:
                m, n = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ProfileError("header must be two integers", lineno) from None
            if m < 1 or n < 1:
                raise ProfileError("m and n must be positive", lineno)
            header = (m, n)
            continue
        count = 1
        if tokens[0] == "w":
            try:
                count = int(tokens[1])
            except (IndexError, ValueError):
                raise ProfileError("'w' must be followed by a count", lineno) from None
            if count < 1:
                raise ProfileError("replication count must be positive", lineno)
            tokens = tokens[2:]
        try:
            ranking = tuple(int(t) for t in tokens)
        except ValueError:
            raise ProfileError("malformed ranking: non-integer token", lineno) from None
        if sorted(ranking) != list(range(1, header[0] + 1)):
            raise ProfileError(f"malformed ranking: not a permutation of 1..{header[0]}", lineno)
        rows.extend([ranking] * count)
    if header is None:
        raise ProfileError("empty profile")
    if len(rows) != header[1]:
        raise ProfileError(f"count mismatch: header says {header[1]} voters, body has {len(rows)}")
    return Election(rows)


def serialize_election(e: Election) -> str:
    lines = [f"{e.num_candidates} {e.num_voters}"]
    lines.extend(" ".join(map(str, r)) for r in e.rankings)
    return "\n".join(lines) + "\n"


def read_election(path) -> Election:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_election(fh.read())


def write_election(e: Election, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_election(e))


def gen_cyclic(m: int) -> Election:
    """Voter ``i`` ranks ``i, i+1, ..., m, 1, ..., i-1``."""
    if m < 1:
        raise InputError("m must be positive")
    return Election([(i + j) % m + 1 for j in range(m)] for i in range(m))


def gen_cycle_product(s: int, t: int) -> Election:
    """Product of an ``s``-cycle and a ``t``-cycle.

    Voter and candidate ``(p, q)`` both get id ``p*t + q + 1``. Voter
    ``(p, q)`` orders candidates by ``(x - p) mod s``, then ``(y - q) mod t``.
    """
    if s < 2 or t < 2:
        raise InputError("both cycle lengths must be at least 2")
    rows = []
    for p in range(s):
        for q in range(t):
            rows.append([((p + dx) % s) * t + (q + dy) % t + 1
                         for dx in range(s) for dy in range(t)])
    return Election(rows)


_MINIMAL_DIM3 = (
    (1, 4, 2, 3, 6, 5),
    (2, 5, 3, 1, 4, 6),
    (3, 6, 1, 2, 5, 4),
    (4, 3, 6, 1, 2, 5),
    (5, 1, 4, 2, 3, 6),
    (6, 2, 5, 3, 1, 4),
)


def gen_minimal_dim3() -> Election:
    """Six voters, six candidates, Condorcet dimension 3."""
    return Election(_MINIMAL_DIM3)


def _shuffle(rng: np.random.Generator, m: int) -> list[int]:
    # Fisher-Yates, high index down, j uniform in [0, i].
    perm = list(range(1, m + 1))
    for i in range(m - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def gen_impartial_culture(n: int, m: int, seed: int) -> Election:
    """``n`` i.i.d. uniform rankings over ``m`` candidates.

    Uses numpy's PCG64 generator seeded with ``seed`` and an explicit
    Fisher-Yates shuffle per voter, so the output depends only on
    ``(n, m, seed)``.
    """
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    return Election(_shuffle(rng, m) for _ in range(n))


def gen_full_factorial(m: int, budget: int = FACTORIAL_BUDGET) -> Election:
    """One voter per permutation of ``1..m``, in lexicographic order."""
    if m < 1:
        raise InputError("m must be positive")
    if math.factorial(m) > budget:
        raise BudgetExceeded(f"{m}! voters exceeds budget {budget}")
    return Election(itertools.permutations(range(1, m + 1)))


FAMILIES = ("cyclic", "cycle-product", "minimal-dim3", "impartial", "factorial")
