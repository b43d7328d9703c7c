"""t-greedy sets, greedy sums and the worst greedy ratio of a vector."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import IndexSet, SparseVector, project

DEFAULT_SET_CAP = 100_000


@dataclass(frozen=True)
class GreedyOutcome:
    set: IndexSet
    sum: SparseVector
    ratio: float


def is_greedy_set(x: SparseVector, A: IndexSet, t: float) -> bool:
    """min over A of |x_i| >= t * max over the complement of |x_i|."""
    inside = [abs(x[i]) for i in A]
    outside = [abs(v) for i, v in x.entries.items() if i not in set(A.elements)]
    lo = min(inside, default=math.inf)
    hi = max(outside, default=0.0)
    return lo >= t * hi


def _check_args(support_size: int, m: int, t: float) -> None:
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > support_size:
        raise ValueError(f"m={m} exceeds the support size {support_size}")


def greedy_index_sets(moduli: dict[int, float], m: int, t: float, cap: int = DEFAULT_SET_CAP) -> list[tuple[int, ...]]:
    """All m-subsets of the keys that are t-greedy for the given moduli, as sorted tuples.

    Each set is found from its minimum modulus mu: indices with t*|x| > mu are
    forced in, any further members come from {mu <= |x|, t*|x| <= mu}, and at
    least one member has modulus exactly mu.
    """
    _check_args(len(moduli), m, t)
    if m == 0:
        return [()]
    items = sorted(moduli.items())
    found: list[tuple[int, ...]] = []
    total = 0
    for mu in sorted({v for _, v in items}):
        forced = [i for i, v in items if t * v > mu]
        middle = [i for i, v in items if v >= mu and t * v <= mu]
        exact = [i for i in middle if moduli[i] == mu]
        r = m - len(forced)
        if r < 1 or r > len(middle) or not exact:
            continue
        total += math.comb(len(middle), r) - math.comb(len(middle) - len(exact), r)
        if total > cap:
            raise ValueError(f"more than {cap} greedy sets; raise the cap to enumerate them")
        exact_set = set(exact)
        for extra in itertools.combinations(middle, r):
            if exact_set.intersection(extra):
                found.append(tuple(sorted(forced + list(extra))))
    return sorted(found)


def greedy_sets(x: SparseVector, m: int, t: float, cap: int = DEFAULT_SET_CAP) -> list[IndexSet]:
    moduli = {i: abs(v) for i, v in x.entries.items()}
    return [IndexSet(A) for A in greedy_index_sets(moduli, m, t, cap)]


def worst_greedy_ratio(space, x: SparseVector, m: int, t: float, cap: int = DEFAULT_SET_CAP) -> GreedyOutcome:
    """The t-greedy set of size m maximizing ||P_A x|| / ||x||; ties go to the first set in sorted order."""
    if not x:
        raise ValueError("x must be nonzero")
    sets = greedy_sets(x, m, t, cap)
    width = max(1, x.max_index)
    dense = x.dense(width)
    rows = np.zeros((len(sets), width))
    for r, A in enumerate(sets):
        cols = [i - 1 for i in A]
        rows[r, cols] = dense[cols]
    ratios = space.norms(rows) / space.evaluate(x)
    best = int(np.argmax(ratios))
    A = sets[best]
    return GreedyOutcome(A, project(x, A), float(ratios[best]))
