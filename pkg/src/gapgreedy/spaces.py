"""Norm oracles for the reference and example sequence spaces.

Every space evaluates norms on batches: ``norms(X)`` takes a 2-D array whose
row r holds the coefficients of one vector, column j being index j + 1.
``evaluate`` is the single-vector convenience over ``SparseVector``.

All spaces here dominate the sup norm and have normalized unit vectors, so
the coordinate functionals have norm one as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import IndexSet, SparseVector

TOL = 1e-12


def _as_rows(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError("expected a 2-D array of coefficient rows")
    return X


def _column_slice(X: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Columns for indices lo..hi (1-based, inclusive), zero padded past the width."""
    width = hi - lo + 1
    out = np.zeros((X.shape[0], width))
    stop = min(hi, X.shape[1])
    if stop >= lo:
        out[:, : stop - lo + 1] = X[:, lo - 1 : stop]
    return out


def _lp_rows(X: np.ndarray, p: float) -> np.ndarray:
    if X.shape[1] == 0:
        return np.zeros(X.shape[0])
    A = np.abs(X)
    if math.isinf(p):
        return A.max(axis=1)
    if p == 1:
        return A.sum(axis=1)
    if p == 2:
        return np.sqrt(np.einsum("ij,ij->i", A, A))
    # scale by the row max to avoid overflow for large p
    top = A.max(axis=1)
    safe = np.where(top > 0, top, 1.0)
    return top * np.sum((A / safe[:, None]) ** p, axis=1) ** (1.0 / p)


class NormedBasisSpace:
    """Base class: a norm on finitely supported sequences plus declared constants."""

    name = "space"
    alpha1 = 1.0
    alpha2 = 1.0
    schauder_constant: float | None = 1.0
    horizon: int | None = None

    def norms(self, X) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, x: SparseVector) -> float:
        if self.horizon is not None and x.max_index > self.horizon:
            raise ValueError(f"support reaches {x.max_index}, beyond horizon {self.horizon}")
        return float(self.norms(x.dense(max(1, x.max_index)))[0])

    __call__ = evaluate

    def branch_values(self, x: np.ndarray) -> list[tuple[str, float]]:
        """Values of the norm's branches at one dense vector, in tie-break order."""
        raise NotImplementedError

    def branch_functional(self, branch: str, x: np.ndarray) -> SparseVector:
        """A functional of dual norm at most one attaining the branch value at x."""
        raise NotImplementedError

    def config(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# l_p


def lp_space_norm(p: float, x: SparseVector) -> float:
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return x.lp_norm(p)


def _lp_dual(x: np.ndarray, p: float, offset: int = 0) -> dict[int, float]:
    """Norming coefficients of the l_p norm of a dense block starting at index offset+1."""
    a = np.abs(x)
    if not a.any():
        return {}
    if math.isinf(p):
        j = int(np.argmax(a))
        return {offset + j + 1: float(np.sign(x[j]))}
    if p == 1:
        return {offset + j + 1: float(np.sign(v)) for j, v in enumerate(x) if v != 0}
    norm = float(_lp_rows(x[None, :], p)[0])
    coef = np.sign(x) * (a / norm) ** (p - 1)
    return {offset + j + 1: float(c) for j, c in enumerate(coef) if c != 0}


class LpSpace(NormedBasisSpace):
    def __init__(self, p: float = 2.0):
        p = float(p)
        if not p >= 1:
            raise ValueError(f"p must be >= 1, got {p}")
        self.p = p
        self.name = f"lp(p={p:g})"

    def norms(self, X) -> np.ndarray:
        return _lp_rows(_as_rows(X), self.p)

    def branch_values(self, x):
        return [("lp", float(_lp_rows(x[None, :], self.p)[0]))]

    def branch_functional(self, branch, x):
        return SparseVector(_lp_dual(x, self.p))

    def config(self):
        return {"space": "lp", "params": {"p": "inf" if math.isinf(self.p) else self.p}}


# ---------------------------------------------------------------------------
# block space with a signed-sum branch, an l_p head and an l_q tail


@dataclass(frozen=True)
class PqBlockParams:
    """Exponents and block length of the head/tail space.

    With ``strict`` set the construction conditions are enforced; a toy
    instance (for example p = q = 2) needs ``strict=False``.
    """

    p: float
    q: float
    epsilon: float
    m: int
    delta: float | None = None
    M: float | None = None
    strict: bool = True

    def __post_init__(self):
        if self.m < 1 or self.m % 2:
            raise ValueError("block length m must be an even positive integer")
        if self.p < 1 or self.q < 1:
            raise ValueError("exponents must be >= 1")
        if self.strict:
            if not (0 < self.epsilon < 1 < self.q < self.p):
                raise ValueError("need 0 < epsilon < 1 < q < p")
            failing = [name for name, (lhs, rhs, ok) in self.conditions().items() if not ok]
            if failing:
                raise ValueError(f"construction conditions fail: {failing}")

    @property
    def gap_exponent(self) -> float:
        """1/q - 1/(p + epsilon)."""
        return 1 / self.q - 1 / (self.p + self.epsilon)

    def conditions(self, tol: float = 1e-12) -> dict[str, tuple[float, float, bool]]:
        """Each condition as (lhs, rhs, holds) in the form lhs <= rhs."""
        g = self.gap_exponent
        out = {"cond1": (1 - 1 / self.q, g)}
        if self.delta is not None:
            out["cond3"] = ((2 - self.delta) * g, 1 - 1 / self.p)
        m = self.m
        out["largem"] = (2 + 2 ** (1 / self.p) * m ** (1 / self.q - 1 / self.p), m**g)
        if self.M is not None:
            out["largem_M"] = (self.M**2, m ** (1 - 1 / self.p))
        result = {}
        for name, (lhs, rhs) in out.items():
            strict_ineq = name.startswith("largem")
            ok = lhs < rhs if strict_ineq else lhs <= rhs + tol
            result[name] = (lhs, rhs, ok)
        return result

    @classmethod
    def smallest_block(cls, p, q, epsilon, delta=None, M=None, limit=10**6) -> "PqBlockParams":
        """The least even m for which the size conditions hold."""
        for m in range(2, limit + 1, 2):
            trial = cls(p, q, epsilon, m, delta, M, strict=False)
            conds = trial.conditions()
            if conds["largem"][2] and conds.get("largem_M", (0, 0, True))[2]:
                return cls(p, q, epsilon, m, delta, M, strict=True)
        raise ValueError("no admissible block length below the search limit")

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q, "epsilon": self.epsilon, "m": self.m,
            "delta": self.delta, "M": self.M, "strict": self.strict,
        }


class PqBlockSpace(NormedBasisSpace):
    """max{|a_1+...+a_m|, ||(a_1..a_m)||_p, ||(a_{m+1}, ...)||_q}."""

    def __init__(self, params: PqBlockParams):
        self.params = params
        self.name = f"pq_block(m={params.m},p={params.p:g},q={params.q:g})"
        m, p = params.m, params.p
        # partial sums S_j for j < m are bounded by j^(1-1/p) times the head norm
        self.schauder_constant = max(1.0, (m - 1) ** (1 - 1 / p))

    def norms(self, X) -> np.ndarray:
        X = _as_rows(X)
        m = self.params.m
        head = _column_slice(X, 1, m)
        tail = X[:, m:]
        return np.maximum.reduce([
            np.abs(head.sum(axis=1)),
            _lp_rows(head, self.params.p),
            _lp_rows(tail, self.params.q),
        ])

    def branch_values(self, x):
        m = self.params.m
        head = _column_slice(x[None, :], 1, m)[0]
        return [
            ("sum", abs(float(head.sum()))),
            ("lp_block", float(_lp_rows(head[None, :], self.params.p)[0])),
            ("lq_tail", float(_lp_rows(x[None, m:], self.params.q)[0])),
        ]

    def branch_functional(self, branch, x):
        m = self.params.m
        head = _column_slice(x[None, :], 1, m)[0]
        if branch == "sum":
            s = float(np.sign(head.sum())) or 1.0
            return SparseVector({j: s for j in range(1, m + 1)})
        if branch == "lp_block":
            return SparseVector(_lp_dual(head, self.params.p))
        return SparseVector(_lp_dual(x[m:], self.params.q, offset=m))

    def config(self):
        return {"space": "pq_block", "params": self.params.to_json()}


def pq_block_norm(params: PqBlockParams, x: SparseVector) -> float:
    return PqBlockSpace(params).evaluate(x)


# ---------------------------------------------------------------------------
# functional-class space


@dataclass(frozen=True)
class Level51:
    n_k: int
    n_k_next: int
    m: int
    B: IndexSet

    def to_json(self) -> dict:
        B = self.B.elements
        if B and B[-1] - B[0] + 1 == len(B):
            return {"n_k": self.n_k, "n_k_next": self.n_k_next, "m": self.m, "B_interval": [B[0], B[-1]]}
        return {"n_k": self.n_k, "n_k_next": self.n_k_next, "m": self.m, "B": list(B)}


@dataclass(frozen=True)
class Example51Params:
    """Level data for the functional-class norm.

    ``n_k0_plus1`` fixes the weight of the first level. ``violations`` lists the
    recursive constraints that fail; it must be empty unless ``relaxed``.
    """

    n_k0_plus1: int
    levels: tuple[Level51, ...]
    relaxed: bool = False
    violations: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.levels:
            raise ValueError("at least one level is required")
        problems = []
        prev_next = self.n_k0_plus1
        prev = None
        for i, lv in enumerate(self.levels, start=1):
            if lv.m < 1:
                raise ValueError(f"level {i}: m must be positive")
            if not lv.B:
                raise ValueError(f"level {i}: B must be nonempty")
            # needed for the solver to be exact, so never relaxed
            if lv.m + 2 > lv.n_k_next:
                raise ValueError(f"level {i}: need m + 2 <= n_(k+1) for an exact functional-class sup")
            if i == 1 and not lv.m > 4:
                problems.append("m_1 > 4")
            if not lv.m**2 < lv.n_k:
                problems.append(f"m_{i}^2 < n_k{i}")
            if not lv.n_k + 2 * lv.m < lv.n_k_next:
                problems.append(f"n_k{i} + 2 m_{i} < n_(k{i}+1)")
            if not prev_next**2 < lv.n_k:
                problems.append(f"n_(k{i - 1}+1)^2 < n_k{i}")
            if not lv.m < lv.B.elements[0]:
                problems.append(f"m_{i} < B_{i}")
            if len(lv.B) != lv.n_k + lv.m:
                problems.append(f"|B_{i}| = n_k{i} + m_{i}")
            if prev is not None:
                if not prev.m * prev.n_k_next**3 < lv.m:
                    problems.append(f"m_{i - 1} n_(k{i - 1}+1)^3 < m_{i}")
                if not prev.B < lv.B:
                    problems.append(f"B_{i - 1} < B_{i}")
            prev_next, prev = lv.n_k_next, lv
        if problems and not self.relaxed:
            raise ValueError(f"level constraints fail: {problems}")
        object.__setattr__(self, "violations", tuple(problems))

    def weight(self, i: int) -> float:
        """1 / n_(k_(i-1)+1)^2 for level i (1-based)."""
        base = self.n_k0_plus1 if i == 1 else self.levels[i - 2].n_k_next
        return 1.0 / base**2

    @classmethod
    def from_json(cls, obj) -> "Example51Params":
        levels = []
        for lv in obj["levels"]:
            if "B_interval" in lv:
                lo, hi = lv["B_interval"]
                B = IndexSet.interval(int(lo), int(hi))
            else:
                B = IndexSet(lv["B"])
            levels.append(Level51(int(lv["n_k"]), int(lv["n_k_next"]), int(lv["m"]), B))
        return cls(int(obj["n_k0_plus1"]), tuple(levels), bool(obj.get("relaxed", False)))

    def to_json(self) -> dict:
        return {
            "n_k0_plus1": self.n_k0_plus1,
            "levels": [lv.to_json() for lv in self.levels],
            "relaxed": self.relaxed,
        }


def _fclass_table(X: np.ndarray, level: Level51):
    """Per-row objective over the half-integer budget split P in B.

    Returns (values, k_grid) with values[r, k] the best value when the positive
    and negative masses placed in B both equal k/2.
    """
    R, N = X.shape
    members = set(level.B.elements)
    in_B = np.array([j in members for j in range(1, N + 1)], dtype=bool)
    outside = np.abs(X[:, ~in_B])
    extra = len(level.B) - int(in_B.sum())
    m = level.m
    pad = min(extra, m + 1)
    vals_B = np.concatenate([X[:, in_B], np.zeros((R, pad))], axis=1)

    out_desc = -np.sort(-outside, axis=1)
    hcum = np.concatenate([np.zeros((R, 1)), np.cumsum(out_desc, axis=1)], axis=1)

    desc = -np.sort(-vals_B, axis=1)
    asc = np.sort(vals_B, axis=1)
    zero_col = np.zeros((R, 1))
    desc_p = np.concatenate([desc, zero_col], axis=1)
    asc_p = np.concatenate([asc, zero_col], axis=1)
    topcum = np.concatenate([zero_col, np.cumsum(desc, axis=1)], axis=1)
    botcum = np.concatenate([zero_col, np.cumsum(asc, axis=1)], axis=1)

    kmax = min(m, len(level.B))
    table = np.empty((R, kmax + 1))
    for k in range(kmax + 1):
        fl, half = divmod(k, 2)
        fr = 0.5 * half
        top = topcum[:, fl] + fr * desc_p[:, fl]
        bot = botcum[:, fl] + fr * asc_p[:, fl]
        table[:, k] = hcum[:, min(m - k, outside.shape[1])] + top - bot
    return table


def f_class_sup_rows(params: Example51Params, i: int, X) -> np.ndarray:
    """sup over the level-i functional class of |sum_j f_j x_j|, for each row.

    The feasible set is symmetric, so the absolute value equals the plain
    maximum. Splitting by the mass P that f places on each sign inside B gives
    a concave piecewise-linear objective with breakpoints at half-integers,
    so scanning P over {0, 1/2, 1, ...} is exact.
    """
    X = _as_rows(X)
    return _fclass_table(X, params.levels[i - 1]).max(axis=1)


def f_class_sup(params: Example51Params, i: int, x: SparseVector) -> float:
    return float(f_class_sup_rows(params, i, x.dense(max(1, x.max_index)))[0])


def f_class_argmax(params: Example51Params, i: int, x: np.ndarray) -> SparseVector:
    """An optimal functional of the level-i class at dense x."""
    level = params.levels[i - 1]
    table = _fclass_table(x[None, :], level)[0]
    k = int(np.argmax(table))
    P = k / 2
    N = len(x)
    B = set(level.B.elements)
    f: dict[int, float] = {}

    outside = sorted((j for j in range(1, N + 1) if j not in B and x[j - 1] != 0),
                     key=lambda j: (-abs(x[j - 1]), j))
    for j in outside[: level.m - k]:
        f[j] = float(np.sign(x[j - 1]))

    # B members in x's range first, then spare zero coordinates of B beyond it
    members = [j for j in level.B if j <= N]
    spare = [j for j in level.B if j > N][: level.m + 1]
    pool = members + spare
    val = {j: (x[j - 1] if j <= N else 0.0) for j in pool}
    desc = sorted(pool, key=lambda j: (-val[j], j))
    asc = sorted(pool, key=lambda j: (val[j], j))

    def spread(order, mass, sign):
        full, frac = int(mass), mass - int(mass)
        for j in order[:full]:
            f[j] = f.get(j, 0.0) + sign
        if frac:
            j = order[full]
            f[j] = f.get(j, 0.0) + sign * frac

    spread(desc, P, 1.0)
    spread(asc, P, -1.0)
    return SparseVector(f)


class Example51Space(NormedBasisSpace):
    """max{||x||_inf, sup_i w_i F_i(x)} with F_i the functional-class sup."""

    schauder_constant = None

    def __init__(self, params: Example51Params):
        self.params = params
        self.name = f"example51(levels={len(params.levels)}{',relaxed' if params.relaxed else ''})"

    def norms(self, X) -> np.ndarray:
        X = _as_rows(X)
        out = _lp_rows(X, math.inf)
        for i in range(1, len(self.params.levels) + 1):
            out = np.maximum(out, self.params.weight(i) * f_class_sup_rows(self.params, i, X))
        return out

    def branch_values(self, x):
        rows = x[None, :]
        vals = [("sup", float(_lp_rows(rows, math.inf)[0]))]
        for i in range(1, len(self.params.levels) + 1):
            vals.append((f"fclass:{i}", self.params.weight(i) * float(f_class_sup_rows(self.params, i, rows)[0])))
        return vals

    def branch_functional(self, branch, x):
        if branch == "sup":
            return SparseVector(_lp_dual(x, math.inf))
        i = int(branch.split(":")[1])
        return self.params.weight(i) * f_class_argmax(self.params, i, x)

    def config(self):
        return {"space": "example51", "params": self.params.to_json()}


def example51_norm(params: Example51Params, x: SparseVector) -> float:
    return Example51Space(params).evaluate(x)


# ---------------------------------------------------------------------------
# signed-prefix block space and its unconditional variant


@dataclass(frozen=True)
class OikhbergParams:
    """Per-level weights c_i and block lengths m_i; blocks are consecutive from index 1."""

    weights: tuple[float, ...]
    lengths: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if len(self.weights) != len(self.lengths) or not self.lengths:
            raise ValueError("need one weight per block length, at least one level")
        if any(m < 1 for m in self.lengths) or any(c <= 0 for c in self.weights):
            raise ValueError("block lengths and weights must be positive")

    @classmethod
    def from_gaps(cls, pairs) -> "OikhbergParams":
        """Levels from consecutive gap pairs (n_k, n_(k+1))."""
        pairs = tuple((int(a), int(b)) for a, b in pairs)
        if not pairs:
            raise ValueError("need at least one level")
        if pairs[0][0] <= 4:
            raise ValueError("the first level needs n_k > 4")
        for a, b in pairs:
            if b <= a:
                raise ValueError(f"pair ({a}, {b}) is not increasing")
        for (a1, b1), (a2, b2) in zip(pairs, pairs[1:]):
            if not b2 * a1 > b1 * a2:
                raise ValueError("level ratios n_(k+1)/n_k must strictly increase")
        weights = tuple((b / a) ** 0.25 for a, b in pairs)
        lengths = tuple(math.isqrt(a * b) for a, b in pairs)
        return cls(weights, lengths, pairs)

    @property
    def offsets(self) -> tuple[int, ...]:
        """tilde m_i: the number of indices before block i."""
        out, acc = [], 0
        for m in self.lengths:
            out.append(acc)
            acc += m
        return tuple(out)

    @property
    def halves(self) -> tuple[int, ...]:
        return tuple(m // 2 for m in self.lengths)

    @property
    def total_length(self) -> int:
        return sum(self.lengths)

    def block(self, i: int) -> IndexSet:
        t = self.offsets[i - 1]
        return IndexSet.interval(t + 1, t + self.lengths[i - 1])

    def sign_vector(self, i: int) -> np.ndarray:
        """(-1)^theta(j) across block i: +1 on the first half-length, (-1)^j after."""
        t, m, beta = self.offsets[i - 1], self.lengths[i - 1], self.halves[i - 1]
        j = np.arange(t + 1, t + m + 1)
        return np.where(j <= t + beta, 1.0, np.where(j % 2 == 0, 1.0, -1.0))

    @classmethod
    def from_json(cls, obj) -> "OikhbergParams":
        if "pairs" in obj:
            return cls.from_gaps(obj["pairs"])
        levels = obj["levels"]
        return cls(tuple(float(lv["c"]) for lv in levels), tuple(int(lv["m"]) for lv in levels))

    def to_json(self) -> dict:
        if self.pairs is not None:
            return {"pairs": [list(p) for p in self.pairs]}
        return {"levels": [{"c": c, "m": m} for c, m in zip(self.weights, self.lengths)]}


class OikhbergSpace(NormedBasisSpace):
    """max{||a||_2, sup_i (c_i/sqrt m_i) max_l |signed prefix sum of block i up to l|}."""

    unconditional = False

    def __init__(self, params: OikhbergParams):
        self.params = params
        self.name = ("oikhberg_uncond" if self.unconditional else "oikhberg") + f"(levels={len(params.lengths)})"

    def _block_values(self, X: np.ndarray, i: int) -> np.ndarray:
        prm = self.params
        t, m, c = prm.offsets[i - 1], prm.lengths[i - 1], prm.weights[i - 1]
        if t >= X.shape[1]:
            return np.zeros(X.shape[0])
        block = _column_slice(X, t + 1, t + m)
        if self.unconditional:
            raw = np.abs(block).sum(axis=1)
        else:
            raw = np.abs(np.cumsum(block * prm.sign_vector(i), axis=1)).max(axis=1)
        return c / math.sqrt(m) * raw

    def norms(self, X) -> np.ndarray:
        X = _as_rows(X)
        out = _lp_rows(X, 2.0)
        for i in range(1, len(self.params.lengths) + 1):
            out = np.maximum(out, self._block_values(X, i))
        return out

    def branch_values(self, x):
        rows = x[None, :]
        vals = [(f"prefix:{i}", float(self._block_values(rows, i)[0])) for i in range(1, len(self.params.lengths) + 1)]
        return vals + [("l2", float(_lp_rows(rows, 2.0)[0]))]

    def branch_functional(self, branch, x):
        if branch == "l2":
            return SparseVector(_lp_dual(x, 2.0))
        i = int(branch.split(":")[1])
        prm = self.params
        t, m, c = prm.offsets[i - 1], prm.lengths[i - 1], prm.weights[i - 1]
        block = _column_slice(x[None, :], t + 1, t + m)[0]
        scale = c / math.sqrt(m)
        if self.unconditional:
            return SparseVector({t + j + 1: scale * float(np.sign(v)) for j, v in enumerate(block) if v != 0})
        signs = prm.sign_vector(i)
        sums = np.cumsum(block * signs)
        ell = int(np.argmax(np.abs(sums)))
        s = float(np.sign(sums[ell])) or 1.0
        return SparseVector({t + j + 1: scale * s * signs[j] for j in range(ell + 1)})

    def config(self):
        return {"space": "oikhberg_uncond" if self.unconditional else "oikhberg", "params": self.params.to_json()}


class OikhbergUnconditionalSpace(OikhbergSpace):
    unconditional = True


def oikhberg_norm(params: OikhbergParams, x: SparseVector) -> float:
    return OikhbergSpace(params).evaluate(x)


def oikhberg_unconditional_norm(params: OikhbergParams, x: SparseVector) -> float:
    return OikhbergUnconditionalSpace(params).evaluate(x)


# ---------------------------------------------------------------------------


def measure_alpha(space: NormedBasisSpace, N: int, tol: float = 1e-9) -> tuple[float, float]:
    """Measured sup ||e_i|| and a lower estimate of sup ||e_i*|| over i <= N.

    The dual estimate maximizes |x_i| / ||x|| over unit vectors and signed
    pairs e_i +- e_j. Raises when either value exceeds the declared constant.
    """
    if space.horizon is not None and N > space.horizon:
        raise ValueError("N exceeds the space horizon")
    eye = np.eye(N)
    alpha1 = float(space.norms(eye).max())
    rows, coord = [eye], list(range(N))
    for i in range(N):
        for j in range(N):
            if j != i:
                for sign in (1.0, -1.0):
                    v = eye[i].copy()
                    v[j] = sign
                    rows.append(v[None, :])
                    coord.append(i)
    test = np.vstack(rows)
    ratios = np.abs(test[np.arange(len(test)), coord]) / space.norms(test)
    alpha2 = float(ratios.max())
    if alpha1 > space.alpha1 + tol or alpha2 > space.alpha2 + tol:
        raise ValueError(
            f"{space.name}: measured alphas ({alpha1}, {alpha2}) exceed declared "
            f"({space.alpha1}, {space.alpha2})"
        )
    return alpha1, alpha2


def space_from_config(cfg: dict) -> NormedBasisSpace:
    kind = cfg.get("space")
    params = cfg.get("params", {})
    if kind == "lp":
        p = params.get("p", 2)
        return LpSpace(math.inf if p in ("inf", "infinity", math.inf) else float(p))
    if kind == "pq_block":
        return PqBlockSpace(PqBlockParams(
            p=float(params["p"]), q=float(params["q"]), epsilon=float(params.get("epsilon", 0.5)),
            m=int(params["m"]), delta=params.get("delta"), M=params.get("M"),
            strict=bool(params.get("strict", True)),
        ))
    if kind == "example51":
        return Example51Space(Example51Params.from_json(params))
    if kind == "oikhberg":
        return OikhbergSpace(OikhbergParams.from_json(params))
    if kind == "oikhberg_uncond":
        return OikhbergUnconditionalSpace(OikhbergParams.from_json(params))
    raise ValueError(f"unknown space kind {kind!r}")
