"""Strictly increasing integer sequences and their gap classification."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

RULE_KINDS = ("geometric", "arithmetic", "double-exponential", "none")
UNBOUNDED_TREND = "unbounded-trend"


class GapSequence:
    """An explicit strictly increasing prefix, optionally extended by a rule.

    Rules:
      * geometric, param r > 1: next = ceil(prev * r)
      * arithmetic, param d >= 1: next = prev + d
      * double-exponential, param e > 1: next = prev ** e
      * none: the sequence is only known on its prefix
    """

    def __init__(self, prefix, rule: str = "none", param: float | None = None):
        prefix = [int(v) for v in prefix]
        if not prefix:
            raise ValueError("prefix must be nonempty")
        if prefix[0] < 1:
            raise ValueError("sequence elements are positive integers")
        if any(b <= a for a, b in zip(prefix, prefix[1:])):
            raise ValueError("prefix must be strictly increasing")
        if rule not in RULE_KINDS:
            raise ValueError(f"unknown rule {rule!r}; expected one of {RULE_KINDS}")
        if rule == "geometric" and not (param is not None and param > 1):
            raise ValueError("geometric rule needs ratio > 1")
        if rule == "arithmetic" and not (param is not None and int(param) == param and param >= 1):
            raise ValueError("arithmetic rule needs an integer step >= 1")
        if rule == "double-exponential" and not (param is not None and param > 1):
            raise ValueError("double-exponential rule needs exponent > 1")
        if rule == "double-exponential" and prefix[-1] < 2:
            raise ValueError("double-exponential rule needs a last prefix element >= 2")
        self._prefix = tuple(prefix)
        self.rule = rule
        self.param = None if rule == "none" else param
        self._cache = list(prefix)
        self._lock = threading.Lock()

    # constructors -------------------------------------------------------
    @classmethod
    def naturals(cls) -> "GapSequence":
        return cls([1], "arithmetic", 1)

    @classmethod
    def geometric(cls, first: int, ratio: float) -> "GapSequence":
        return cls([first], "geometric", ratio)

    @classmethod
    def arithmetic(cls, first: int, step: int) -> "GapSequence":
        return cls([first], "arithmetic", step)

    @classmethod
    def from_json(cls, obj) -> "GapSequence":
        if isinstance(obj, (list, tuple)):
            return cls(obj)
        rule = obj.get("rule") or {"kind": "none"}
        return cls(obj["prefix"], rule.get("kind", "none"), rule.get("param"))

    def to_json(self) -> dict:
        return {"prefix": list(self._prefix), "rule": {"kind": self.rule, "param": self.param}}

    # element access -----------------------------------------------------
    @property
    def prefix(self) -> tuple[int, ...]:
        return self._prefix

    @property
    def first(self) -> int:
        return self._prefix[0]

    def _next(self, prev: int) -> int:
        if self.rule == "geometric":
            nxt = math.ceil(prev * self.param)
        elif self.rule == "arithmetic":
            nxt = prev + int(self.param)
        else:
            nxt = int(round(prev**self.param))
        return max(nxt, prev + 1)

    def _extend_to(self, k: int) -> None:
        if k <= len(self._cache):
            return
        if self.rule == "none":
            raise IndexError(f"element {k} lies beyond the prefix and no rule is set")
        with self._lock:
            while len(self._cache) < k:
                self._cache.append(self._next(self._cache[-1]))

    def __getitem__(self, k: int) -> int:
        """The element n_k, 1-based."""
        if k < 1:
            raise IndexError("sequence indices start at 1")
        self._extend_to(k)
        return self._cache[k - 1]

    def head(self, K: int) -> list[int]:
        self._extend_to(K)
        return list(self._cache[:K])

    def _reach(self, bound: int) -> None:
        """Extend until some element exceeds bound (or raise without a rule)."""
        while self._cache[-1] <= bound:
            if self.rule == "none":
                raise IndexError(f"the prefix ends at {self._cache[-1]} and cannot reach {bound}")
            self._extend_to(len(self._cache) + 1)

    def elements_upto(self, bound: int) -> list[int]:
        """All elements <= bound. A ruleless prefix must already reach bound."""
        if self._cache[-1] < bound:
            self._reach(bound - 1)
        return [v for v in self._cache if v <= bound]

    def horizon_index(self, bound: int) -> int:
        """Smallest k with n_k > bound."""
        self._reach(bound)
        return next(k for k, v in enumerate(self._cache, start=1) if v > bound)

    def __repr__(self) -> str:
        return f"GapSequence({list(self._prefix)}, rule={self.rule!r}, param={self.param!r})"


@dataclass(frozen=True)
class GapClassification:
    quotient_bound: int
    additive_bound: int
    quotient_trend: bool
    additive_trend: bool
    inspected_horizon: int

    @property
    def quotient_label(self):
        return UNBOUNDED_TREND if self.quotient_trend else self.quotient_bound

    @property
    def additive_label(self):
        return UNBOUNDED_TREND if self.additive_trend else self.additive_bound


def _increasing_tail(values, length: int = 3) -> bool:
    tail = values[-length:]
    return len(tail) == length and all(b > a for a, b in zip(tail, tail[1:]))


def classify(n: GapSequence, K: int) -> GapClassification:
    """Least integers bounding the quotient and additive gaps over n_1..n_K.

    The trend flags record that the last three gaps strictly increase. They are
    advisory only: no finite prefix proves unboundedness.
    """
    if K < 2:
        raise ValueError("need a horizon K >= 2")
    try:
        vals = n.head(K)
    except IndexError as exc:
        raise ValueError(f"prefix too short for horizon {K}") from exc
    pairs = list(zip(vals, vals[1:]))
    quotients = [-(-b // a) for a, b in pairs]
    # trend uses exact rationals, compared by cross multiplication
    ratio_rising = len(pairs) >= 3 and all(
        b2 * a1 > b1 * a2 for (a1, b1), (a2, b2) in zip(pairs[-3:], pairs[-2:])
    )
    additive = [b - a for a, b in pairs]
    return GapClassification(
        quotient_bound=max(quotients),
        additive_bound=max(additive),
        quotient_trend=ratio_rising,
        additive_trend=_increasing_tail(additive),
        inspected_horizon=K,
    )


def classify_for_cardinality(n: GapSequence, s: int) -> GapClassification:
    """Classification over the range needed by sets of size up to s."""
    return classify(n, max(2, n.horizon_index(s)))


def k0_below(n: GapSequence, m: int) -> int:
    """Largest k with n_k < m. A ruleless prefix counts as the whole sequence."""
    if m <= n.first:
        raise ValueError(f"m={m} must exceed n_1={n.first}")
    k = 1
    while True:
        try:
            nxt = n[k + 1]
        except IndexError:
            return k
        if nxt >= m:
            return k
        k += 1


def member(n: GapSequence, m: int) -> bool:
    if m < 1:
        raise ValueError("m must be a positive integer")
    if n.rule == "none" and m > n.prefix[-1]:
        raise ValueError(f"{m} lies beyond the prefix of a ruleless sequence")
    k = 1
    while n[k] < m:
        k += 1
    return n[k] == m
