"""Loop-by-loop definitions of the restricted constants, used as an independent oracle on tiny budgets."""

import itertools

from gapgreedy.core import IndexSet, SparseVector
from gapgreedy.greedy import is_greedy_set


def sizes(n, N, s):
    return [k for k in range(1, s + 1) if n is None or k in n.elements_upto(s)]


def signed(A, eps):
    return SparseVector(dict(zip(A, map(float, eps))))


def patterns(k):
    return list(itertools.product((1, -1), repeat=k))


def subsets(N, k):
    return list(itertools.combinations(range(1, N + 1), k))


def grid_points(N, grid, allowed=None):
    """Grid vectors on 1..N that vanish outside ``allowed``."""
    allowed = range(1, N + 1) if allowed is None else sorted(allowed)
    for vals in itertools.product(grid, repeat=len(allowed)):
        yield SparseVector(dict(zip(allowed, vals)))


def democracy(space, n, N, s, super_=False, ordered=False):
    ks = sizes(n, N, s)
    best = 0.0
    for ka in ks:
        for kb in ks:
            if kb < ka or (super_ and not ordered and ka != kb):
                continue
            for A in subsets(N, ka):
                for B in subsets(N, kb):
                    if ordered and not max(A) < min(B):
                        continue
                    for ea in (patterns(ka) if super_ else [(1,) * ka]):
                        for eb in (patterns(kb) if super_ else [(1,) * kb]):
                            best = max(best, space.evaluate(signed(A, ea)) / space.evaluate(signed(B, eb)))
    return best


def ucc(space, n, N, s):
    best = 0.0
    for k in sizes(n, N, s):
        for A in subsets(N, k):
            vals = [space.evaluate(signed(A, e)) for e in patterns(k)]
            best = max(best, max(vals) / min(vals))
    return best


def succ(space, n, N, s):
    best = 0.0
    for kb in range(1, s + 1):
        for B in subsets(N, kb):
            for eb in patterns(kb):
                den = space.evaluate(signed(B, eb))
                for ka in sizes(n, N, s):
                    for pos in itertools.combinations(range(kb), ka):
                        A = [B[p] for p in pos]
                        best = max(best, space.evaluate(signed(A, [eb[p] for p in pos])) / den)
    return best


def ul(space, n, N, s, grid):
    nz = [g for g in grid if g != 0]
    lower = upper = 0.0
    for k in sizes(n, N, s):
        for A in subsets(N, k):
            ones = space.evaluate(signed(A, (1,) * k))
            for e in patterns(k):
                upper = max(upper, space.evaluate(signed(A, e)) / ones)
            for coeffs in itertools.product(nz, repeat=k):
                x = SparseVector(dict(zip(A, coeffs)))
                lower = max(lower, min(abs(c) for c in coeffs) * ones / space.evaluate(x))
    return lower, upper


def qglc(space, n, N, s, grid):
    best = 0.0
    for k in sizes(n, N, s):
        for A in subsets(N, k):
            off = set(range(1, N + 1)) - set(A)
            xs = list(grid_points(N, grid, off))
            for e in patterns(k):
                ind = signed(A, e)
                num = space.evaluate(ind)
                best = max(best, max(num / space.evaluate(ind + x) for x in xs))
    return best


def slc(space, n, N, s, grid):
    best = 0.0
    for k in sizes(n, N, s):
        for A in subsets(N, k):
            for B in subsets(N, k):
                if set(A) & set(B):
                    continue
                off = set(range(1, N + 1)) - set(A) - set(B)
                for x in grid_points(N, grid, off):
                    num = max(space.evaluate(x + signed(A, e)) for e in patterns(k))
                    den = min(space.evaluate(x + signed(B, e)) for e in patterns(k))
                    best = max(best, num / den)
    return best


def quasi_greedy(space, n, N, s, grid, t):
    best = 0.0
    for x in grid_points(N, grid):
        if not x:
            continue
        nx = space.evaluate(x)
        for k in sizes(n, N, s):
            if k > len(x):
                continue
            for A in itertools.combinations(x.support, k):
                if is_greedy_set(x, IndexSet(A), t):
                    best = max(best, space.evaluate(SparseVector({i: x[i] for i in A})) / nx)
    return best
