"""Finitely supported vectors, index sets, sign patterns and coordinate projections.

Scalars are real doubles. Indices are positive integers and a vector stores
only its nonzero coefficients, so its support is exactly its key set.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np


@dataclass(frozen=True)
class FieldConfig:
    """Scalar field descriptor. Only the real field is supported."""

    kappa: int = 1

    def __post_init__(self):
        if self.kappa != 1:
            raise ValueError("only real scalars are supported (kappa must be 1)")


REAL = FieldConfig()


def _check_index(i) -> int:
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
        raise TypeError(f"index must be an integer, got {i!r}")
    i = int(i)
    if i < 1:
        raise ValueError(f"indices are positive integers, got {i}")
    return i


class IndexSet:
    """Finite sorted set of positive integers."""

    __slots__ = ("_items",)

    def __init__(self, elements: Iterable[int] = ()):
        self._items = tuple(sorted({_check_index(i) for i in elements}))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IndexSet":
        """The integers lo, lo+1, ..., hi (empty when hi < lo)."""
        return cls(range(lo, hi + 1))

    @classmethod
    def disjoint_union(cls, *parts: "IndexSet") -> "IndexSet":
        seen: set[int] = set()
        for part in parts:
            overlap = seen.intersection(part)
            if overlap:
                raise ValueError(f"sets overlap at {sorted(overlap)}")
            seen.update(part)
        return cls(seen)

    @property
    def elements(self) -> tuple[int, ...]:
        return self._items

    def __iter__(self) -> Iterator[int]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, i) -> bool:
        return i in set(self._items) if len(self._items) > 16 else i in self._items

    def __eq__(self, other) -> bool:
        if isinstance(other, IndexSet):
            return self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __lt__(self, other: "IndexSet") -> bool:
        # A < B means max A < min B; vacuous when either side is empty
        if not self._items or not other._items:
            return True
        return self._items[-1] < other._items[0]

    def __or__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self._items + other._items)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(set(self._items) & set(other._items))

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(set(self._items) - set(other._items))

    def isdisjoint(self, other: "IndexSet") -> bool:
        return set(self._items).isdisjoint(other._items)

    def issubset(self, other: "IndexSet") -> bool:
        return set(self._items).issubset(other._items)

    def __repr__(self) -> str:
        return f"IndexSet({list(self._items)})"


class SignPattern:
    """A choice of sign in {-1, +1} for every index of a set."""

    __slots__ = ("_domain", "_signs")

    def __init__(self, domain: IndexSet, signs: Mapping[int, int] | Iterable[int]):
        if not isinstance(domain, IndexSet):
            domain = IndexSet(domain)
        if isinstance(signs, Mapping):
            mapping = {_check_index(i): int(s) for i, s in signs.items()}
        else:
            values = [int(s) for s in signs]
            if len(values) != len(domain):
                raise ValueError("one sign per domain element is required")
            mapping = dict(zip(domain, values))
        if set(mapping) != set(domain):
            raise ValueError("signs must be defined on exactly the domain")
        if any(s not in (-1, 1) for s in mapping.values()):
            raise ValueError("signs must be -1 or +1")
        self._domain = domain
        self._signs = MappingProxyType(mapping)

    @classmethod
    def ones(cls, domain: IndexSet) -> "SignPattern":
        return cls(domain, [1] * len(domain))

    @classmethod
    def alternating(cls, domain: IndexSet, first: int = 1) -> "SignPattern":
        return cls(domain, [first * (-1) ** k for k in range(len(domain))])

    @property
    def domain(self) -> IndexSet:
        return self._domain

    @property
    def signs(self) -> Mapping[int, int]:
        return self._signs

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self._signs[i] for i in self._domain)

    def restrict(self, subset: IndexSet) -> "SignPattern":
        if not subset.issubset(self._domain):
            raise ValueError("restriction target is not a subset of the domain")
        return SignPattern(subset, {i: self._signs[i] for i in subset})

    def __getitem__(self, i: int) -> int:
        return self._signs[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, SignPattern):
            return self._domain == other._domain and dict(self._signs) == dict(other._signs)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._domain, self.as_tuple()))

    def __repr__(self) -> str:
        return f"SignPattern({list(self._domain)}, {list(self.as_tuple())})"


class SparseVector:
    """Finitely supported real sequence stored as {index: nonzero value}."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, float] | None = None):
        clean = {}
        for i, v in (entries or {}).items():
            i = _check_index(i)
            v = float(v)
            if not np.isfinite(v):
                raise ValueError(f"coefficient at {i} is not finite")
            if v != 0.0:
                clean[i] = v
        self._entries = MappingProxyType(dict(sorted(clean.items())))

    @property
    def entries(self) -> Mapping[int, float]:
        return self._entries

    @property
    def support(self) -> IndexSet:
        return IndexSet(self._entries)

    def __getitem__(self, i: int) -> float:
        return self._entries.get(i, 0.0)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    @property
    def max_index(self) -> int:
        return next(reversed(self._entries)) if self._entries else 0

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self._entries)
        for i, v in other._entries.items():
            out[i] = out.get(i, 0.0) + v
        return SparseVector(out)

    def __neg__(self) -> "SparseVector":
        return SparseVector({i: -v for i, v in self._entries.items()})

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-other)

    def __mul__(self, t: float) -> "SparseVector":
        return SparseVector({i: t * v for i, v in self._entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseVector):
            return dict(self._entries) == dict(other._entries)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def sup_norm(self) -> float:
        return max((abs(v) for v in self._entries.values()), default=0.0)

    def lp_norm(self, p: float) -> float:
        vals = np.abs(np.fromiter(self._entries.values(), dtype=float, count=len(self._entries)))
        if vals.size == 0:
            return 0.0
        if np.isinf(p):
            return float(vals.max())
        return float(np.sum(vals**p) ** (1.0 / p))

    def dense(self, length: int | None = None) -> np.ndarray:
        """Coefficients e_1*(x), ..., e_length*(x) as an array."""
        n = self.max_index if length is None else length
        if n < self.max_index:
            raise ValueError(f"vector has support beyond {n}")
        out = np.zeros(n)
        for i, v in self._entries.items():
            out[i - 1] = v
        return out

    @classmethod
    def from_dense(cls, values) -> "SparseVector":
        return cls({k + 1: float(v) for k, v in enumerate(np.asarray(values, dtype=float)) if v != 0.0})

    def to_json(self) -> list[list]:
        return [[i, v] for i, v in self._entries.items()]

    @classmethod
    def from_json(cls, pairs) -> "SparseVector":
        return make_vector([(int(i), float(v)) for i, v in pairs])

    def __repr__(self) -> str:
        return f"SparseVector({dict(self._entries)})"


def make_vector(pairs: Iterable[tuple[int, float]]) -> SparseVector:
    """Build a vector from (index, value) pairs; repeated indices are rejected."""
    entries: dict[int, float] = {}
    for i, v in pairs:
        i = _check_index(i)
        if i in entries:
            raise ValueError(f"duplicate index {i}")
        entries[i] = float(v)
    return SparseVector(entries)


def indicator(A: IndexSet, eps: SignPattern | None = None) -> SparseVector:
    """The signed indicator sum of eps_n e_n over n in A (all ones when eps is None)."""
    if eps is None:
        return SparseVector({i: 1.0 for i in A})
    if eps.domain != A:
        raise ValueError("sign pattern domain does not match the set")
    return SparseVector({i: float(eps[i]) for i in A})


def project(x: SparseVector, A: IndexSet | Iterable[int]) -> SparseVector:
    keep = set(A)
    return SparseVector({i: v for i, v in x.entries.items() if i in keep})


def partial_sum(x: SparseVector, m: int) -> SparseVector:
    if m < 0:
        raise ValueError("partial sum order must be nonnegative")
    return SparseVector({i: v for i, v in x.entries.items() if i <= m})
