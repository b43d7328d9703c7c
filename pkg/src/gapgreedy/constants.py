"""Restricted-exact estimators for the basis constants.

Each estimator returns the exact maximum of its defining ratio over a finite
search class (indices 1..N, cardinalities from the gap sequence up to s, a
coefficient grid), together with a witness that attains it. The value is a
lower bound for the true constant.

Ties are resolved by taking the first maximizer in the enumeration order:
cardinality ascending, then sets in lexicographic order, then sign patterns
in product order with +1 before -1, then grid vectors in product order.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import SparseVector
from .gaps import GapSequence

DEFAULT_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)
ROW_CHUNK = 200_000


class BudgetError(ValueError):
    """The requested search class is larger than the configured limit."""


@dataclass(frozen=True)
class SearchBudget:
    N: int
    s: int
    grid: tuple[float, ...] = DEFAULT_GRID
    samples: int = 0
    seed: int = 0
    limit: int = 20_000_000
    max_support: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(sorted(float(g) for g in self.grid)))
        if not self.N >= self.s >= 1:
            raise ValueError("need N >= s >= 1")
        g = set(self.grid)
        if not {-1.0, 0.0, 1.0} <= g:
            raise ValueError("grid must contain -1, 0 and 1")
        if any(-v not in g for v in g) or any(abs(v) > 1 for v in g):
            raise ValueError("grid must be symmetric and lie in [-1, 1]")
        if self.samples < 0:
            raise ValueError("samples must be nonnegative")
        if self.max_support is not None and self.max_support < 0:
            raise ValueError("max_support must be nonnegative")

    def replace(self, **changes) -> "SearchBudget":
        data = asdict(self)
        data.update(changes)
        return SearchBudget(**data)

    def to_json(self) -> dict:
        return asdict(self) | {"grid": list(self.grid)}

    @classmethod
    def from_json(cls, obj) -> "SearchBudget":
        obj = dict(obj)
        if "grid" in obj:
            obj["grid"] = tuple(obj["grid"])
        return cls(**obj)


@dataclass(frozen=True)
class ConstantEstimate:
    name: str
    value: float
    witness: dict
    search_class: dict
    exact_within_class: bool = True

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "witness": self.witness,
            "search_class": self.search_class,
            "exact_within_class": self.exact_within_class,
        }


# ---------------------------------------------------------------------------
# shared machinery


def cardinalities(n: GapSequence | None, budget: SearchBudget) -> list[int]:
    """Set sizes in n (all of 1..s when n is None) that do not exceed s."""
    if n is None:
        return list(range(1, budget.s + 1))
    return [k for k in n.elements_upto(budget.s) if k >= 1]


def _need_cards(cards, what):
    if not cards:
        raise ValueError(f"{what}: no element of the gap sequence lies within the cardinality cap")


def _space_key(space) -> str:
    return json.dumps(space.config(), sort_keys=True)


def _norms(space, X: np.ndarray) -> np.ndarray:
    if len(X) <= ROW_CHUNK:
        return space.norms(X)
    return np.concatenate([space.norms(X[i : i + ROW_CHUNK]) for i in range(0, len(X), ROW_CHUNK)])


def _check_count(count: int, budget: SearchBudget, what: str) -> None:
    if count > budget.limit:
        raise BudgetError(f"{what}: {count} evaluations exceed the limit {budget.limit}")


def _sign_rows(k: int, fix_first: bool) -> np.ndarray:
    """All sign patterns of length k in product order (+1 before -1)."""
    if k == 0:
        return np.ones((1, 0))
    if fix_first:
        combos = list(itertools.product((1.0, -1.0), repeat=k - 1))
        rest = np.array(combos, dtype=float).reshape(len(combos), k - 1)
        return np.hstack([np.ones((len(rest), 1)), rest])
    return np.array(list(itertools.product((1.0, -1.0), repeat=k)), dtype=float)


def _sign_index(patterns: np.ndarray) -> np.ndarray:
    """Row index of each pattern (first entry +1) inside _sign_rows(k, True)."""
    k = patterns.shape[1]
    if k <= 1:
        return np.zeros(len(patterns), dtype=int)
    weights = 2 ** np.arange(k - 2, -1, -1)
    return ((patterns[:, 1:] < 0).astype(int) @ weights).astype(int)


@dataclass
class IndicatorTable:
    """Norms of all signed indicators of one cardinality inside 1..N.

    ``norms[c, e]`` is the norm of the set ``sets[c]`` with the sign pattern
    ``signs[e]``; patterns start with +1 because flipping every sign keeps
    the norm. Column 0 is the unsigned indicator.
    """

    k: int
    sets: list[tuple[int, ...]]
    signs: np.ndarray
    norms: np.ndarray
    position: dict = field(default_factory=dict)


_TABLES: dict = {}


def indicator_table(space, N: int, k: int, signed: bool = True) -> IndicatorTable:
    key = (_space_key(space), N, k, signed)
    hit = _TABLES.get(key) or (_TABLES.get(key[:3] + (True,)) if not signed else None)
    if hit is not None:
        return hit
    sets = list(itertools.combinations(range(1, N + 1), k))
    signs = _sign_rows(k, True) if signed else np.ones((1, k))
    C, S = len(sets), len(signs)
    X = np.zeros((C, S, N))
    if k:
        idx = np.array(sets) - 1
        X[np.arange(C)[:, None, None], np.arange(S)[None, :, None], idx[:, None, :]] = signs[None, :, :]
    norms = _norms(space, X.reshape(C * S, N)).reshape(C, S)
    table = IndicatorTable(k, sets, signs, norms, {A: c for c, A in enumerate(sets)})
    if len(_TABLES) > 256:
        _TABLES.clear()
    _TABLES[key] = table
    return table


def _vec(indices, values) -> list:
    return SparseVector({int(i): float(v) for i, v in zip(indices, values)}).to_json()


def _signed(A, signs) -> list:
    return _vec(A, signs)


def _class(budget: SearchBudget, cards, **extra) -> dict:
    out = {"N": budget.N, "s": budget.s, "cardinalities": list(cards)}
    out.update(extra)
    return out


def grid_vectors(N: int, grid, max_support: int | None, nonzero: bool = False) -> np.ndarray:
    """All vectors in grid^N with at most max_support nonzero entries, in product order."""
    grid = np.asarray(sorted(grid), dtype=float)
    zero = np.flatnonzero(grid == 0)
    if len(zero) == 0 or max_support is None or max_support >= N:
        codes = np.indices((len(grid),) * N).reshape(N, -1).T if N else np.zeros((1, 0), dtype=int)
        X = grid[codes]
        if nonzero:
            X = X[(X != 0).any(axis=1)]
        return X
    # build only the sparse rows, then restore product order
    nz = np.flatnonzero(grid != 0)
    blocks = []
    for j in range(0 if not nonzero else 1, max_support + 1):
        for pos in itertools.combinations(range(N), j):
            vals = np.array(list(itertools.product(nz, repeat=j)), dtype=int).reshape(len(nz) ** j, j)
            codes = np.full((len(vals), N), zero[0], dtype=int)
            codes[:, list(pos)] = vals
            blocks.append(codes)
    if not blocks:
        return np.zeros((0, N))
    codes = np.concatenate(blocks)
    codes = codes[np.lexsort(codes.T[::-1])]
    return grid[codes]


def _grid_count(N, grid, max_support) -> int:
    nz = sum(1 for g in grid if g != 0)
    top = N if max_support is None else min(N, max_support)
    return sum(math.comb(N, j) * nz**j for j in range(top + 1))


def reevaluate(space, estimate: ConstantEstimate) -> float:
    """Recompute the ratio stored in a witness from its two vectors."""
    w = estimate.witness
    num = space.evaluate(SparseVector.from_json(w["numerator"]))
    den = space.evaluate(SparseVector.from_json(w["denominator"]))
    return w.get("scale", 1.0) * num / den


# ---------------------------------------------------------------------------
# indicator constants


def _extremes(space, N, cards, signed):
    """Per cardinality: (max norm, argmax (c, e)), (min norm, argmin (c, e)), table."""
    out = {}
    for k in cards:
        T = indicator_table(space, N, k, signed)
        vals = T.norms if signed else T.norms[:, :1]
        flat_max = int(np.argmax(vals))
        flat_min = int(np.argmin(vals))
        out[k] = (
            (float(vals.flat[flat_max]), divmod(flat_max, vals.shape[1])),
            (float(vals.flat[flat_min]), divmod(flat_min, vals.shape[1])),
            T,
        )
    return out


def _indicator_witness(T, c, e):
    A = T.sets[c]
    return list(A), [int(v) for v in T.signs[e]]


def _pair_estimate(name, space, n, budget, signed, equal_sizes):
    cards = cardinalities(n, budget)
    _need_cards(cards, name)
    _check_count(sum(math.comb(budget.N, k) * (2 ** max(k - 1, 0) if signed else 1) for k in cards), budget, name)
    ext = _extremes(space, budget.N, cards, signed)
    best = None
    for ka in cards:
        for kb in cards:
            if kb < ka or (equal_sizes and kb != ka):
                continue
            (num, (ca, ea)), _, Ta = ext[ka]
            _, (den, (cb, eb)), Tb = ext[kb]
            ratio = num / den
            if best is None or ratio > best[0]:
                best = (ratio, Ta, ca, ea, Tb, cb, eb)
    ratio, Ta, ca, ea, Tb, cb, eb = best
    A, eps = _indicator_witness(Ta, ca, ea)
    B, eps_b = _indicator_witness(Tb, cb, eb)
    witness = {"A": A, "eps": eps, "B": B, "eps_prime": eps_b,
               "numerator": _signed(A, eps), "denominator": _signed(B, eps_b)}
    size_rule = "|A|=|B|" if equal_sizes else "|A|<=|B|"
    return ConstantEstimate(name, ratio, witness, _class(budget, cards, sizes=size_rule, signs=signed))


def democracy_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    """max ||1_A|| / ||1_B|| over |A| <= |B|, both sizes in n."""
    return _pair_estimate("democracy", space, n, budget, signed=False, equal_sizes=False)


def superdemocracy_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    """max ||1_{eps A}|| / ||1_{eps' B}|| over |A| = |B| in n and all sign patterns."""
    return _pair_estimate("superdemocracy", space, n, budget, signed=True, equal_sizes=True)


def _ordered_pair_estimate(name, space, n, budget, signed):
    cards = cardinalities(n, budget)
    _need_cards(cards, name)
    N = budget.N
    _check_count(sum(math.comb(N, k) * (2 ** max(k - 1, 0) if signed else 1) for k in cards), budget, name)
    per = {}
    for k in cards:
        T = indicator_table(space, N, k, signed)
        vals = T.norms if signed else T.norms[:, :1]
        per[k] = (T, vals.max(axis=1), vals.argmax(axis=1), vals.min(axis=1), vals.argmin(axis=1),
                  np.array([A[-1] for A in T.sets]), np.array([A[0] for A in T.sets]))
    best = None
    for ka in cards:
        for kb in cards:
            if kb < ka or ka + kb > N:
                continue
            Ta, num, enum, _, _, maxA, _ = per[ka]
            Tb, _, _, den, eden, _, minB = per[kb]
            ratio = num[:, None] / den[None, :]
            ratio = np.where(maxA[:, None] < minB[None, :], ratio, -np.inf)
            flat = int(np.argmax(ratio))
            val = float(ratio.flat[flat])
            if val > -np.inf and (best is None or val > best[0]):
                ca, cb = divmod(flat, ratio.shape[1])
                best = (val, Ta, ca, int(enum[ca]), Tb, cb, int(eden[cb]))
    if best is None:
        raise ValueError(f"{name}: no pair A < B fits inside 1..{N}")
    val, Ta, ca, ea, Tb, cb, eb = best
    A, eps = _indicator_witness(Ta, ca, ea)
    B, eps_b = _indicator_witness(Tb, cb, eb)
    witness = {"A": A, "eps": eps, "B": B, "eps_prime": eps_b,
               "numerator": _signed(A, eps), "denominator": _signed(B, eps_b)}
    return ConstantEstimate(name, val, witness, _class(budget, cards, sizes="|A|<=|B|, A<B", signs=signed))


def conservative_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    """max ||1_A|| / ||1_B|| over A < B, |A| <= |B|, sizes in n."""
    return _ordered_pair_estimate("conservative", space, n, budget, signed=False)


def superconservative_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    return _ordered_pair_estimate("superconservative", space, n, budget, signed=True)


def ucc_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    """max over one set A of ||1_{eps A}|| / ||1_{eps' A}||."""
    cards = cardinalities(n, budget)
    _need_cards(cards, "ucc")
    _check_count(sum(math.comb(budget.N, k) * 2 ** max(k - 1, 0) for k in cards), budget, "ucc")
    best = None
    for k in cards:
        T = indicator_table(space, budget.N, k, True)
        ratio = T.norms.max(axis=1) / T.norms.min(axis=1)
        c = int(np.argmax(ratio))
        if best is None or ratio[c] > best[0]:
            best = (float(ratio[c]), T, c, int(T.norms[c].argmax()), int(T.norms[c].argmin()))
    val, T, c, e1, e2 = best
    A = list(T.sets[c])
    eps, eps_b = [int(v) for v in T.signs[e1]], [int(v) for v in T.signs[e2]]
    witness = {"A": A, "eps": eps, "eps_prime": eps_b,
               "numerator": _signed(A, eps), "denominator": _signed(A, eps_b)}
    return ConstantEstimate("ucc", val, witness, _class(budget, cards))


def succ_constant(space, n: GapSequence | None, budget: SearchBudget, reading: str = "restriction") -> ConstantEstimate:
    """max ||1_{eps A}|| / ||1_{eps' B}|| over A inside B, |A| in n, |B| <= s.

    With reading="restriction" eps is eps' restricted to A; with
    reading="independent" eps ranges over all patterns on A.
    """
    if reading not in ("restriction", "independent"):
        raise ValueError("reading must be 'restriction' or 'independent'")
    cards = cardinalities(n, budget)
    _need_cards(cards, "succ")
    N, s = budget.N, budget.s
    count = sum(math.comb(N, b) * 2 ** (b - 1) * sum(math.comb(b, a) for a in cards if a <= b) for b in range(1, s + 1))
    _check_count(count, budget, "succ")
    tables = {k: indicator_table(space, N, k, True) for k in set(cards) | set(range(1, s + 1))}
    best = None
    for b in range(1, s + 1):
        TB = tables[b]
        subs = [(a, pos) for a in cards if a <= b for pos in itertools.combinations(range(b), a)]
        for cb, B in enumerate(TB.sets):
            den = TB.norms[cb]
            for a, pos in subs:
                TA = tables[a]
                A = tuple(B[p] for p in pos)
                ca = TA.position[A]
                if reading == "restriction":
                    restricted = TB.signs[:, list(pos)]
                    normalized = restricted * restricted[:, :1]
                    num = TA.norms[ca, _sign_index(normalized)]
                    ratio = num / den
                    e = int(np.argmax(ratio))
                    cand = (float(ratio[e]), B, e, A, restricted[e])
                else:
                    ea = int(TA.norms[ca].argmax())
                    e = int(den.argmin())
                    cand = (float(TA.norms[ca, ea] / den[e]), B, e, A, TA.signs[ea])
                if best is None or cand[0] > best[0]:
                    best = cand + (TB,)
    val, B, e, A, eps_a, TB = best
    eps_b = [int(v) for v in TB.signs[e]]
    eps = [int(v) for v in eps_a]
    witness = {"A": list(A), "eps": eps, "B": list(B), "eps_prime": eps_b,
               "numerator": _signed(A, eps), "denominator": _signed(B, eps_b)}
    return ConstantEstimate("succ", val, witness, _class(budget, cards, reading=reading, outer_sizes=f"1..{s}"))


# ---------------------------------------------------------------------------
# UL constants


def _lower_ul_rows(A, budget: SearchBudget, k: int) -> np.ndarray:
    """Coefficient rows on A: nonzero grid values (first entry positive) plus seeded samples."""
    nz = sorted({abs(g) for g in budget.grid if g != 0})
    values = sorted(set(nz) | {-v for v in nz})
    first = [v for v in values if v > 0]
    grid_rows = np.array(list(itertools.product(first, *([values] * (k - 1))))).reshape(-1, k)
    if not budget.samples:
        return grid_rows
    rng = np.random.default_rng([budget.seed, *A])
    lo = min(nz)
    mags = rng.uniform(lo, 1.0, size=(budget.samples, k))
    signs = rng.choice([-1.0, 1.0], size=(budget.samples, k))
    signs[:, 0] = 1.0
    return np.vstack([grid_rows, mags * signs])


def ul_constants(space, n: GapSequence | None, budget: SearchBudget) -> tuple[ConstantEstimate, ConstantEstimate]:
    """(C_1, C_2): lower and upper unconditional-like constants.

    C_2 maximizes ||1_{eps A}|| / ||1_A|| (sign patterns are the extreme
    points of the coefficient cube). C_1 maximizes min|a| ||1_A|| / ||sum a_i e_i||
    over nonzero grid coefficients and seeded random samples.
    """
    cards = cardinalities(n, budget)
    _need_cards(cards, "ul")
    N = budget.N
    nz = len({abs(g) for g in budget.grid if g != 0})
    _check_count(sum(math.comb(N, k) * ((2 * nz) ** k // 2 + budget.samples) for k in cards), budget, "ul")

    best2 = None
    best1 = None
    for k in cards:
        T = indicator_table(space, N, k, True)
        ratio2 = T.norms / T.norms[:, :1]
        flat = int(np.argmax(ratio2))
        if best2 is None or ratio2.flat[flat] > best2[0]:
            best2 = (float(ratio2.flat[flat]), T, *divmod(flat, ratio2.shape[1]))
        for c, A in enumerate(T.sets):
            coeffs = _lower_ul_rows(A, budget, k)
            X = np.zeros((len(coeffs), N))
            X[:, np.array(A) - 1] = coeffs
            mins = np.abs(coeffs).min(axis=1)
            ratio1 = mins * T.norms[c, 0] / _norms(space, X)
            r = int(np.argmax(ratio1))
            if best1 is None or ratio1[r] > best1[0]:
                best1 = (float(ratio1[r]), A, coeffs[r], float(mins[r]))
    val2, T, c, e = best2
    A2, eps = _indicator_witness(T, c, e)
    w2 = {"A": A2, "eps": eps, "numerator": _signed(A2, eps), "denominator": _signed(A2, [1] * len(A2))}
    val1, A1, coeffs, mn = best1
    w1 = {"A": list(A1), "coefficients": [float(v) for v in coeffs], "scale": mn,
          "numerator": _signed(A1, [1] * len(A1)), "denominator": _vec(A1, coeffs)}
    cls = _class(budget, cards)
    return (
        ConstantEstimate("ul_lower", val1, w1, cls | {"grid": list(budget.grid), "samples": budget.samples, "seed": budget.seed}),
        ConstantEstimate("ul_upper", val2, w2, cls | {"coefficients": "sign patterns"}),
    )


# ---------------------------------------------------------------------------
# constants with a perturbation vector x


def _qglc_rows(A, N, budget, base: np.ndarray) -> np.ndarray:
    """Grid vectors supported off A, plus seeded samples with |x_i| <= 1."""
    idx = np.array(A) - 1
    rows = base[~(base[:, idx] != 0).any(axis=1)]
    if not budget.samples:
        return rows
    rng = np.random.default_rng([budget.seed, *A])
    free = np.setdiff1d(np.arange(N), idx)
    samp = np.zeros((budget.samples, N))
    samp[:, free] = rng.uniform(-1.0, 1.0, size=(budget.samples, len(free)))
    if budget.max_support is not None:
        for r in range(budget.samples):
            drop = rng.permutation(free)[budget.max_support:]
            samp[r, drop] = 0.0
    return np.vstack([rows, samp])


def qglc_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    """max ||1_{eps A}|| / ||1_{eps A} + x|| over x with |x_i| <= 1 supported off A."""
    cards = cardinalities(n, budget)
    _need_cards(cards, "qglc")
    N = budget.N
    base = grid_vectors(N, budget.grid, budget.max_support)
    count = sum(math.comb(N, k) * 2 ** max(k - 1, 0) * (_grid_count(N - k, budget.grid, budget.max_support) + budget.samples) for k in cards)
    _check_count(count, budget, "qglc")
    best = None
    for k in cards:
        T = indicator_table(space, N, k, True)
        for c, A in enumerate(T.sets):
            xs = _qglc_rows(A, N, budget, base)
            idx = np.array(A) - 1
            S = len(T.signs)
            X = np.repeat(xs[None, :, :], S, axis=0)
            X[:, :, idx] = T.signs[:, None, :]
            den = _norms(space, X.reshape(-1, N)).reshape(S, len(xs))
            jmin = den.argmin(axis=1)
            ratio = T.norms[c] / den[np.arange(S), jmin]
            e = int(np.argmax(ratio))
            if best is None or ratio[e] > best[0]:
                best = (float(ratio[e]), A, T.signs[e], xs[jmin[e]])
    val, A, eps, x = best
    eps = [int(v) for v in eps]
    num = SparseVector({i: float(v) for i, v in zip(A, eps)})
    den = num + SparseVector.from_dense(x)
    witness = {"A": list(A), "eps": eps, "x": SparseVector.from_dense(x).to_json(),
               "numerator": num.to_json(), "denominator": den.to_json()}
    return ConstantEstimate("qglc", val, witness, _class(
        budget, cards, grid=list(budget.grid), max_support=budget.max_support,
        samples=budget.samples, seed=budget.seed))


def slc_constant(space, n: GapSequence | None, budget: SearchBudget) -> ConstantEstimate:
    """max ||x + 1_{eps A}|| / ||x + 1_{eps' B}|| over disjoint |A| = |B| in n, x off A and B."""
    cards = cardinalities(n, budget)
    _need_cards(cards, "slc")
    N = budget.N
    base = grid_vectors(N, budget.grid, budget.max_support)
    count = sum(math.comb(N, k) * 2**k * len(base) for k in cards if 2 * k <= N)
    _check_count(count, budget, "slc")
    supp = base != 0
    best = None
    for k in cards:
        if 2 * k > N:
            continue
        sets = list(itertools.combinations(range(1, N + 1), k))
        signs = _sign_rows(k, False)
        S = len(signs)
        masks = np.zeros((len(sets), N), dtype=bool)
        for c, A in enumerate(sets):
            masks[c, np.array(A) - 1] = True
        # F[c, g]: max over signs of ||x_g + 1_{eps A_c}||; G: the min; nan when x_g meets A_c
        F = np.full((len(sets), len(base)), np.nan)
        G = np.full((len(sets), len(base)), np.nan)
        Fe = np.zeros((len(sets), len(base)), dtype=int)
        Ge = np.zeros((len(sets), len(base)), dtype=int)
        for c, A in enumerate(sets):
            ok = ~(supp & masks[c]).any(axis=1)
            xs = base[ok]
            X = np.repeat(xs[None, :, :], S, axis=0)
            X[:, :, np.array(A) - 1] = signs[:, None, :]
            vals = _norms(space, X.reshape(-1, N)).reshape(S, len(xs))
            F[c, ok], Fe[c, ok] = vals.max(axis=0), vals.argmax(axis=0)
            G[c, ok], Ge[c, ok] = vals.min(axis=0), vals.argmin(axis=0)
        disjoint = ~(masks[:, None, :] & masks[None, :, :]).any(axis=2)
        for g in range(len(base)):
            f, h = F[:, g], G[:, g]
            ratio = f[:, None] / h[None, :]
            ratio = np.where(disjoint & ~np.isnan(ratio), ratio, -np.inf)
            flat = int(np.argmax(ratio))
            val = float(ratio.flat[flat])
            if val > -np.inf and (best is None or val > best[0]):
                ca, cb = divmod(flat, len(sets))
                best = (val, sets[ca], signs[Fe[ca, g]], sets[cb], signs[Ge[cb, g]], base[g])
    if best is None:
        raise ValueError("slc: no disjoint pair fits inside 1..N")
    val, A, eps, B, eps_b, x = best
    xv = SparseVector.from_dense(x)
    eps, eps_b = [int(v) for v in eps], [int(v) for v in eps_b]
    witness = {"A": list(A), "eps": eps, "B": list(B), "eps_prime": eps_b, "x": xv.to_json(),
               "numerator": (xv + SparseVector(dict(zip(A, map(float, eps))))).to_json(),
               "denominator": (xv + SparseVector(dict(zip(B, map(float, eps_b))))).to_json()}
    return ConstantEstimate("slc", val, witness, _class(
        budget, cards, sizes="|A|=|B|, disjoint", grid=list(budget.grid), max_support=budget.max_support))


def quasi_greedy_constant(space, n: GapSequence | None, budget: SearchBudget, t: float = 1.0) -> ConstantEstimate:
    """max ||P_A x|| / ||x|| over grid vectors x and t-greedy sets A of x with |A| in n."""
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    cards = cardinalities(n, budget)
    _need_cards(cards, "quasi_greedy")
    N = budget.N
    base = grid_vectors(N, budget.grid, budget.max_support, nonzero=True)
    _check_count(len(base), budget, "quasi_greedy")
    absx = np.abs(base)
    xnorm = _norms(space, base)
    best = None
    evaluated = len(base)
    for k in cards:
        for A in itertools.combinations(range(1, N + 1), k):
            idx = np.array(A) - 1
            inside = absx[:, idx]
            rest = np.delete(absx, idx, axis=1)
            lo = inside.min(axis=1)
            hi = rest.max(axis=1) if rest.shape[1] else np.zeros(len(base))
            ok = (lo > 0) & (lo >= t * hi)
            if not ok.any():
                continue
            rows = np.flatnonzero(ok)
            evaluated += len(rows)
            _check_count(evaluated, budget, "quasi_greedy")
            P = np.zeros((len(rows), N))
            P[:, idx] = base[rows][:, idx]
            ratio = _norms(space, P) / xnorm[rows]
            r = int(np.argmax(ratio))
            if best is None or ratio[r] > best[0]:
                best = (float(ratio[r]), A, base[rows[r]])
    if best is None:
        raise ValueError("quasi_greedy: no grid vector has a greedy set of an admissible size")
    val, A, x = best
    xv = SparseVector.from_dense(x)
    num = SparseVector({i: xv[i] for i in A})
    witness = {"A": list(A), "t": t, "x": xv.to_json(), "numerator": num.to_json(), "denominator": xv.to_json()}
    return ConstantEstimate("quasi_greedy", val, witness, _class(
        budget, cards, t=t, grid=list(budget.grid), max_support=budget.max_support))


# ---------------------------------------------------------------------------
# count-based estimators for the head/tail block space
#
# Its norm only depends on how many coordinates of each sign and size lie in
# the head 1..m and in the tail, so whole orbits of sets can be scored at once.


def _pq_witness_vectors(m, head_A, head_B, head_x, tail_A, tail_B, tail_x):
    """Lay out signed head/tail blocks left to right and return numerator and denominator vectors."""
    pos = 1
    num, den, xs = {}, {}, {}
    for signs in head_A:
        num[pos] = signs
        pos += 1
    for signs in head_B:
        den[pos] = signs
        pos += 1
    for v in head_x:
        xs[pos] = v
        pos += 1
    assert pos <= m + 1
    pos = m + 1
    for _ in range(tail_A):
        num[pos] = 1.0
        pos += 1
    for _ in range(tail_B):
        den[pos] = 1.0
        pos += 1
    for v in tail_x:
        xs[pos] = v
        pos += 1
    x = SparseVector(xs)
    return x + SparseVector(num), x + SparseVector(den), x


def pq_orbit_superdemocracy(space) -> ConstantEstimate:
    """Exact superdemocracy over all signed sets of size m inside 1..2m."""
    prm = space.params
    m, p, q = prm.m, prm.p, prm.q
    h = np.arange(m + 1, dtype=float)
    num = np.maximum.reduce([h, h ** (1 / p), (m - h) ** (1 / q)])
    den = np.maximum.reduce([h % 2, h ** (1 / p), (m - h) ** (1 / q)])
    a, b = int(np.argmax(num)), int(np.argmin(den))
    value = float(num[a] / den[b])
    head_b = [1.0 if j < (b + b % 2) // 2 else -1.0 for j in range(b)]
    numer, _, _ = _pq_witness_vectors(m, [1.0] * a, [], [], m - a, 0, [])
    _, denom, _ = _pq_witness_vectors(m, [], head_b, [], 0, m - b, [])
    witness = {"head_A": a, "head_B": b, "numerator": numer.to_json(), "denominator": denom.to_json()}
    return ConstantEstimate("superdemocracy", value, witness,
                            {"kind": "orbit", "N": 2 * m, "cardinalities": [m], "signs": True})


def _lattice_distance(y: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from y >= 0 to {-b, -b+2, ..., b}."""
    r = np.mod(y + b, 2.0)
    inside = np.minimum(r, 2.0 - r)
    return np.where(y >= b, y - b, inside)


def pq_orbit_slc(space, grid=DEFAULT_GRID) -> ConstantEstimate:
    """Exact SLC value over an orbit class with N = 4m and |A| = |B| = m.

    The perturbation x has u head coordinates equal to v and w <= m tail
    coordinates equal to tau, with v, tau nonzero grid values.
    """
    prm = space.params
    m, p, q = prm.m, prm.p, prm.q
    mods = sorted({abs(g) for g in grid if g != 0})
    W = np.concatenate([[0.0]] + [np.arange(1, m + 1) * tau**q for tau in mods])
    W_src = [(0, 0.0)] + [(w, tau) for tau in mods for w in range(1, m + 1)]
    best = None
    for v in mods:
        for u in range(0, m + 1):
            if u == 0 and v != mods[0]:
                continue
            y, U = u * v, u * v**p
            b = np.arange(0, m - u + 1, dtype=float)
            D = np.maximum.reduce([
                np.broadcast_to(_lattice_distance(np.full_like(b, y), b), (len(W), len(b))),
                np.broadcast_to((b + U) ** (1 / p), (len(W), len(b))),
                (m - b[None, :] + W[:, None]) ** (1 / q),
            ])
            run_min = np.minimum.accumulate(D, axis=1)
            a = np.arange(0, m - u + 1, dtype=float)
            Nval = np.maximum.reduce([
                np.broadcast_to(a + y, (len(W), len(a))),
                np.broadcast_to((a + U) ** (1 / p), (len(W), len(a))),
                (m - a[None, :] + W[:, None]) ** (1 / q),
            ])
            ratio = Nval / run_min[:, ::-1]
            flat = int(np.argmax(ratio))
            val = float(ratio.flat[flat])
            if best is None or val > best[0]:
                wi, ai = divmod(flat, len(a))
                bmax = m - u - ai
                bi = int(np.argmin(D[wi, : bmax + 1]))
                best = (val, v, u, wi, ai, bi)
    val, v, u, wi, ai, bi = best
    w, tau = W_src[wi]
    # B's head signs: signed sum as close as possible to -u*v
    target = -u * v
    lattice = np.arange(-bi, bi + 1, 2)
    t = int(lattice[np.argmin(np.abs(lattice - target))]) if bi else 0
    plus = (bi + t) // 2
    head_B = [1.0] * plus + [-1.0] * (bi - plus)
    numer, denom, x = _pq_witness_vectors(m, [1.0] * ai, head_B, [v] * u, m - ai, m - bi, [tau] * w)
    witness = {"head_A": ai, "head_B": bi, "u": u, "v": v, "w": w, "tau": tau,
               "x": x.to_json(), "numerator": numer.to_json(), "denominator": denom.to_json()}
    return ConstantEstimate("slc", val, witness, {
        "kind": "orbit", "N": 4 * m, "cardinalities": [m],
        "x_family": "u head entries v, w <= m tail entries tau", "grid": list(grid)})


def pq_orbit_slc_unperturbed(space) -> ConstantEstimate:
    """The orbit SLC value restricted to x = 0."""
    prm = space.params
    m, p, q = prm.m, prm.p, prm.q
    a = np.arange(m + 1, dtype=float)
    num = np.maximum.reduce([a, a ** (1 / p), (m - a) ** (1 / q)])
    den = np.maximum.reduce([a % 2, a ** (1 / p), (m - a) ** (1 / q)])
    best = None
    for ai in range(m + 1):
        bmax = m - ai
        bi = int(np.argmin(den[: bmax + 1]))
        val = float(num[ai] / den[bi])
        if best is None or val > best[0]:
            best = (val, ai, bi)
    val, ai, bi = best
    plus = (bi + bi % 2) // 2
    numer, denom, _ = _pq_witness_vectors(m, [1.0] * ai, [1.0] * plus + [-1.0] * (bi - plus), [], m - ai, m - bi, [])
    witness = {"head_A": ai, "head_B": bi, "numerator": numer.to_json(), "denominator": denom.to_json()}
    return ConstantEstimate("slc", val, witness, {"kind": "orbit", "N": 4 * m, "cardinalities": [m], "x_family": "zero"})


ESTIMATORS = {
    "democracy": democracy_constant,
    "superdemocracy": superdemocracy_constant,
    "conservative": conservative_constant,
    "superconservative": superconservative_constant,
    "ucc": ucc_constant,
    "succ": succ_constant,
    "qglc": qglc_constant,
    "slc": slc_constant,
    "quasi_greedy": quasi_greedy_constant,
}


def estimate(name: str, space, n: GapSequence | None, budget: SearchBudget, **options) -> list[ConstantEstimate]:
    """Run one estimator by name; the UL pair comes back as two estimates."""
    if name in ("ul", "ul_lower", "ul_upper"):
        lower, upper = ul_constants(space, n, budget)
        return {"ul": [lower, upper], "ul_lower": [lower], "ul_upper": [upper]}[name]
    if name not in ESTIMATORS:
        raise KeyError(f"unknown constant {name!r}")
    return [ESTIMATORS[name](space, n, budget, **options)]
