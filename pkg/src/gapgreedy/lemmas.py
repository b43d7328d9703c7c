"""Norming functionals and the subset-selection certificate for sums of vectors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import SparseVector
from .gaps import GapSequence, classify

BRANCH_TOL = 1e-9


class CertificateError(RuntimeError):
    """A selection could not be certified (numerical inconsistency or a failed dichotomy)."""


@dataclass(frozen=True)
class NormingFunctional:
    coefficients: SparseVector
    attained_at: SparseVector
    dual_norm_estimate: float
    branch: str

    def __call__(self, y: SparseVector) -> float:
        return sum(v * y[i] for i, v in self.coefficients.entries.items())

    def to_json(self) -> dict:
        return {
            "coefficients": self.coefficients.to_json(),
            "attained_at": self.attained_at.to_json(),
            "dual_norm_estimate": self.dual_norm_estimate,
            "branch": self.branch,
        }


def _probe_rows(f: SparseVector, width: int) -> np.ndarray:
    """Unit vectors, the sign vector of f and its prefixes: cheap witnesses for the dual norm."""
    rows = list(np.eye(width))
    signs = np.sign(f.dense(width))
    rows.append(signs)
    rows.extend(np.where(np.arange(width) <= k, signs, 0.0) for k in range(width))
    return np.array([r for r in rows if r.any()])


def norming_functional(space, x: SparseVector, tol: float = BRANCH_TOL) -> NormingFunctional:
    """A functional of norm one attaining ||x|| at x, read off the first active branch."""
    if not x:
        raise ValueError("x must be nonzero")
    width = x.max_index
    dense = x.dense(width)
    norm = space.evaluate(x)
    scale = max(1.0, norm)
    for branch, value in space.branch_values(dense):
        if value >= norm - tol * scale:
            f = space.branch_functional(branch, dense)
            attained = sum(v * x[i] for i, v in f.entries.items())
            if abs(attained - norm) <= 1e-9 * scale:
                break
    else:
        raise CertificateError(f"no branch of {space.name} attains the norm {norm!r} at x")
    probe_width = max(width, f.max_index)
    probes = _probe_rows(f, probe_width)
    fd = f.dense(probe_width)
    dual = float(np.max(np.abs(probes @ fd) / space.norms(probes))) if len(probes) else 0.0
    return NormingFunctional(f, x, max(dual, 1.0), branch)


@dataclass(frozen=True)
class SmallCase:
    """Every subset sum is bounded by a multiple of the largest single vector."""

    bound: float
    max_value: float
    largest: int

    def to_json(self) -> dict:
        return {"kind": "small_case", "bound": self.bound, "max_value": self.max_value, "largest_index": self.largest}


@dataclass(frozen=True)
class Subset:
    """A subset B with |B| in the gap sequence whose sum controls every subset sum up to the factor."""

    B: tuple[int, ...]
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": "subset", "B": list(self.B), "certificate": self.certificate}


def _as_indexed(xs) -> tuple[list[int], list[SparseVector]]:
    if isinstance(xs, Mapping):
        keys = sorted(xs)
        return keys, [xs[k] for k in keys]
    xs = list(xs)
    return list(range(1, len(xs) + 1)), xs


def _subset_table(space, vectors: Sequence[SparseVector], max_size: int):
    """Norms of every subset sum, with subsets encoded as boolean masks in lexicographic bit order."""
    k = len(vectors)
    if k == 0:
        raise ValueError("need at least one vector")
    if k > max_size:
        raise ValueError(f"{k} vectors exceed the enumeration budget of {max_size}")
    width = max(1, max(v.max_index for v in vectors))
    V = np.array([v.dense(width) for v in vectors])
    masks = np.array(list(itertools.product((0.0, 1.0), repeat=k)))
    return masks, space.norms(masks @ V), V


def _maximizing_subset(masks, values, tol=1e-12):
    """Largest value; near-ties prefer more elements, then the earlier mask."""
    top = values.max()
    near = np.flatnonzero(values >= top - tol * max(1.0, top))
    sizes = masks[near].sum(axis=1)
    return int(near[np.argmax(sizes)])


def _quotient_bound(n: GapSequence, size: int) -> int:
    """Quotient-gap bound over the range reaching past size; a short ruleless prefix is taken as complete."""
    try:
        horizon = n.horizon_index(size)
    except IndexError:
        horizon = len(n.prefix)
    if horizon < 2:
        return 1
    return classify(n, horizon).quotient_bound


def _orders_upto(n: GapSequence, size: int) -> list[int]:
    try:
        return n.elements_upto(size)
    except IndexError:
        return [v for v in n.prefix if v <= size]


def _largest_order_upto(n: GapSequence, size: int) -> int:
    return max(_orders_upto(n, size))


def _proof_selection(space, keys, vectors, n, max_size):
    """Shared core: maximizing D, its norming functional and the top-ranked subset of D."""
    masks, values, V = _subset_table(space, vectors, max_size)
    d = _maximizing_subset(masks, values)
    D = [j for j, on in enumerate(masks[d]) if on]
    max_value = float(values[d])
    singles = space.norms(V)
    if len(D) < n.first:
        return None, dict(max_value=max_value, singles=singles, masks=masks, values=values, V=V)
    target = SparseVector.from_dense(V[D].sum(axis=0))
    y = norming_functional(space, target)
    scores = np.array([y(vectors[j]) for j in D])
    floor = -1e-9 * max(1.0, max_value)
    if scores.min() < floor:
        raise CertificateError(f"norming functional is negative on the maximizing set: {scores.min()!r}")
    size = _largest_order_upto(n, len(D))
    order = sorted(range(len(D)), key=lambda r: (-scores[r], D[r]))
    chosen = sorted(D[r] for r in order[:size])
    l = _quotient_bound(n, len(D))
    info = dict(
        max_value=max_value, singles=singles, masks=masks, values=values, V=V,
        D=[keys[j] for j in D], chosen=chosen, l=l, order=size,
        functional=y, scores=scores,
    )
    return chosen, info


def select_subset(space, xs, n: GapSequence, max_size: int = 16) -> SmallCase | Subset:
    """Either all subset sums are at most (n_1 - 1) max ||x_j||, or a subset B of size in n
    satisfies max_E ||sum_E x_j|| <= l ||sum_B x_j|| with l the quotient-gap bound."""
    keys, vectors = _as_indexed(xs)
    chosen, info = _proof_selection(space, keys, vectors, n, max_size)
    singles = info["singles"]
    if chosen is None:
        bound = (n.first - 1) * float(singles.max())
        if info["max_value"] > bound + 1e-9 * max(1.0, bound):
            raise CertificateError("small-case bound violated")
        return SmallCase(bound, info["max_value"], keys[int(np.argmax(singles))])
    subset_norm = float(space.norms(info["V"][chosen].sum(axis=0))[0])
    l = info["l"]
    slack = l * subset_norm - info["max_value"]
    if slack < -1e-9 * max(1.0, info["max_value"]):
        raise CertificateError(f"subset certificate fails with slack {slack!r}")
    return Subset(
        tuple(keys[j] for j in chosen),
        {
            "max_value": info["max_value"],
            "maximizing_set": info["D"],
            "l": l,
            "subset_norm": subset_norm,
            "factor": l,
            "slack": slack,
            "functional": info["functional"].coefficients.to_json(),
            "functional_branch": info["functional"].branch,
            "functional_values": [float(v) for v in info["scores"]],
        },
    )


def max_over_signs(space, vectors: Sequence[SparseVector], max_size: int = 16) -> tuple[float, tuple[int, ...]]:
    """max over sign choices of ||sum lambda_j x_j||; equals the max over the coefficient cube by convexity."""
    k = len(vectors)
    if k > max_size:
        raise ValueError(f"{k} vectors exceed the enumeration budget of {max_size}")
    width = max(1, max(v.max_index for v in vectors))
    V = np.array([v.dense(width) for v in vectors])
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=k)))
    vals = space.norms(signs @ V)
    r = int(np.argmax(vals))
    return float(vals[r]), tuple(int(s) for s in signs[r])


def select_subset_signed(space, xs, bs, n: GapSequence, max_size: int = 16) -> SmallCase | Subset:
    """Signed variant: coefficient-cube maxima of sum a_j x_j against weighted sums of b_j x_j.

    The proof applies the unsigned selection to y_j = b_j x_j. Its small case
    controls the cube maximum by 2 (n_1 - 1) max ||y_j||, which can exceed
    2 (n_1 - 1) max ||x_j|| when |b_j| > 1. In that situation every subset of
    admissible size is tried before giving up with CertificateError.
    """
    keys, vectors = _as_indexed(xs)
    bs = [float(b) for b in bs]
    if len(bs) != len(vectors):
        raise ValueError("one weight per vector is required")
    if any(abs(b) < 1 for b in bs):
        raise ValueError("weights must satisfy |b_j| >= 1")
    ys = [v * b for v, b in zip(vectors, bs)]
    cube_max, signs = max_over_signs(space, vectors, max_size)
    chosen, info = _proof_selection(space, keys, ys, n, max_size)
    tol = 1e-9 * max(1.0, cube_max)
    if chosen is None:
        singles_x = np.array([space.evaluate(v) for v in vectors])
        bound = 2 * (n.first - 1) * float(singles_x.max())
        if cube_max <= bound + tol:
            return SmallCase(bound, cube_max, keys[int(np.argmax(singles_x))])
        return _fallback_signed(space, keys, ys, n, cube_max, signs, tol)
    l = info["l"]
    subset_norm = float(space.norms(info["V"][chosen].sum(axis=0))[0])
    slack = 2 * l * subset_norm - cube_max
    if slack < -tol:
        raise CertificateError(f"signed subset certificate fails with slack {slack!r}")
    return Subset(
        tuple(keys[j] for j in chosen),
        {
            "max_value": cube_max,
            "maximizing_signs": list(signs),
            "maximizing_set": info["D"],
            "l": l,
            "subset_norm": subset_norm,
            "factor": 2 * l,
            "slack": slack,
            "functional": info["functional"].coefficients.to_json(),
            "functional_branch": info["functional"].branch,
            "functional_values": [float(v) for v in info["scores"]],
        },
    )


def _fallback_signed(space, keys, ys, n, cube_max, signs, tol):
    width = max(1, max(v.max_index for v in ys))
    Y = np.array([v.dense(width) for v in ys])
    l = _quotient_bound(n, len(ys))
    orders = _orders_upto(n, len(ys))
    best = None
    for k in orders:
        for B in itertools.combinations(range(len(ys)), k):
            val = float(space.norms(Y[list(B)].sum(axis=0))[0])
            if best is None or val > best[0]:
                best = (val, B)
    if best is None or 2 * l * best[0] < cube_max - tol:
        raise CertificateError("neither branch of the signed dichotomy holds for this instance")
    val, B = best
    return Subset(
        tuple(keys[j] for j in B),
        {
            "max_value": cube_max,
            "maximizing_signs": list(signs),
            "l": l,
            "subset_norm": val,
            "factor": 2 * l,
            "slack": 2 * l * val - cube_max,
            "fallback": True,
        },
    )


def verify_certificate(space, xs, n: GapSequence, result, bs=None) -> bool:
    """Re-check a returned certificate by exhaustive enumeration."""
    keys, vectors = _as_indexed(xs)
    if bs is None:
        masks, values, V = _subset_table(space, vectors, 20)
        lhs = float(values.max())
        factor = 1.0
        weighted = vectors
    else:
        lhs, _ = max_over_signs(space, vectors, 20)
        factor = 2.0
        weighted = [v * float(b) for v, b in zip(vectors, bs)]
    tol = 1e-9 * max(1.0, lhs)
    if isinstance(result, SmallCase):
        singles = max(space.evaluate(v) for v in vectors)
        return lhs <= factor * (n.first - 1) * singles + tol
    pos = {k: j for j, k in enumerate(keys)}
    if not set(result.B) <= set(keys) or len(result.B) not in _orders_upto(n, len(result.B)):
        return False
    total = SparseVector()
    for k in result.B:
        total = total + weighted[pos[k]]
    l = _quotient_bound(n, len(vectors))
    return lhs <= factor * l * space.evaluate(total) + tol
