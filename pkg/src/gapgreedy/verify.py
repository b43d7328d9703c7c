"""Inequality harness: both sides of every transfer bound on configured spaces and gap sequences.

A check compares a class-exact lower value against an upper bound built from
restricted constants (direction ``restricted<=paper_upper``), or a known lower
bound against an explicit witness (``paper_lower<=witness``). Exact identities
use a relative tolerance. Every check records the inputs needed to recompute it.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import constants as C
from .core import IndexSet, SignPattern, SparseVector, indicator
from .gaps import GapSequence, classify_for_cardinality
from .spaces import Example51Space, OikhbergSpace, PqBlockSpace, space_from_config

TOL = 1e-9
EXACT_RTOL = 1e-12
GROWTH_MARGIN = 2e-9
PAIR_CAP = 2

UPPER = "restricted<=paper_upper"
LOWER = "paper_lower<=witness"
EXACT = "exact"
GROWTH = "strict_growth"
CONDITION = "parameter_condition"
NOTICE = "notice"
DIRECTIONS = (UPPER, LOWER, EXACT, GROWTH, CONDITION, NOTICE)

GROUPS = ("transfer", "ex5.1", "ex5.2", "rem5.3", "prop4.8")


class ConfigError(ValueError):
    """The run configuration is malformed or names something unknown."""


@dataclass
class BoundCheck:
    id: str
    lhs: float | None
    rhs: float | None
    direction: str
    inputs: dict = field(default_factory=dict)
    relaxed: bool = False
    note: str = ""
    status: str = ""
    slack: float | None = None

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if not self.status:
            self.evaluate()

    def evaluate(self) -> None:
        if self.lhs is None or self.rhs is None or not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            self.slack = None
            self.status = self.status or "warn"
            return
        self.slack = self.rhs - self.lhs
        if self.direction == EXACT:
            ok = abs(self.slack) <= EXACT_RTOL * max(abs(self.rhs), 1e-300)
        else:
            ok = self.slack >= -TOL
        self.status = "pass" if ok else ("warn" if self.relaxed else "fail")

    def to_json(self) -> dict:
        return {
            "id": self.id, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
            "status": self.status, "direction": self.direction, "relaxed": self.relaxed,
            "note": self.note, "inputs": self.inputs,
        }

    @classmethod
    def from_json(cls, obj) -> "BoundCheck":
        return cls(obj["id"], obj["lhs"], obj["rhs"], obj["direction"], obj.get("inputs", {}),
                   obj.get("relaxed", False), obj.get("note", ""), obj["status"], obj.get("slack"))


def _error(check_id: str, exc: Exception, inputs=None) -> BoundCheck:
    return BoundCheck(check_id, None, None, NOTICE, inputs or {}, note=f"{type(exc).__name__}: {exc}", status="error")


def _skip(check_id: str, reason: str, inputs=None) -> BoundCheck:
    return BoundCheck(check_id, None, None, NOTICE, inputs or {}, note=reason, status="warn")


@dataclass
class VerificationReport:
    checks: list[BoundCheck]
    config: dict
    seed: int
    timestamp: str | None = None

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "warn": 0, "error": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def failed(self) -> bool:
        return self.counts["fail"] > 0

    def to_json(self) -> dict:
        out = {
            "seed": self.seed,
            "config": self.config,
            "environment": {"python": platform.python_version(), "numpy": np.__version__},
            "summary": self.counts,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["id", "lhs", "rhs", "slack", "status"])
            for c in self.checks:
                writer.writerow([c.id, _fmt(c.lhs), _fmt(c.rhs), _fmt(c.slack), c.status])
            return buf.getvalue()
        raise ValueError(f"unknown format {fmt!r}")


def _fmt(v):
    return "" if v is None else repr(float(v))


# ---------------------------------------------------------------------------
# configuration

GEOMETRIC_TWO = {"prefix": [1], "rule": {"kind": "geometric", "param": 2}}
ODD_NUMBERS = {"prefix": [1], "rule": {"kind": "arithmetic", "param": 2}}
FROM_TWO = {"prefix": [2, 3], "rule": {"kind": "arithmetic", "param": 3}}
OIKHBERG_TOY = {"pairs": [[5, 6], [6, 35], [35, 245]]}
OIKHBERG_GAPS = {"prefix": [1, 2, 3, 5, 6, 35, 245]}
EX51_FAITHFUL = {"n_k0_plus1": 2, "levels": [{"n_k": 26, "n_k_next": 37, "m": 5, "B_interval": [6, 36]}]}
EX51_GAPS = {"prefix": [1, 2, 3, 4, 5, 26, 37]}
PQ_FAITHFUL = {"p": 3.1, "q": 1.6, "epsilon": 0.9, "m": 468, "delta": 0.25, "M": 2}


def pq_faithful_gaps(m: int, q: float) -> dict:
    """{m} followed by every integer beyond m^q + m."""
    return {"prefix": [m, math.floor(m**q + m) + 1], "rule": {"kind": "arithmetic", "param": 1}}


DEFAULT_CONFIG = {
    "seed": 0,
    "budget": {"N": 6, "s": 3},
    "room_budget": {"N": 4, "s": 2, "max_support": 1},
    "spaces": [
        {"label": "l2", "space": {"space": "lp", "params": {"p": 2}},
         "gaps": [GEOMETRIC_TWO, ODD_NUMBERS, FROM_TWO], "groups": ["transfer"]},
        {"label": "pq_toy", "space": {"space": "pq_block", "params": {"p": 2, "q": 2, "epsilon": 0.5, "m": 2, "strict": False}},
         "gaps": [GEOMETRIC_TWO, FROM_TWO], "groups": ["transfer"]},
        {"label": "oikhberg_toy", "space": {"space": "oikhberg", "params": OIKHBERG_TOY},
         "gaps": [OIKHBERG_GAPS, GEOMETRIC_TWO], "groups": ["transfer", "ex5.2"],
         "example_budget": {"N": 8, "s": 6, "limit": 40_000_000}},
        {"label": "oikhberg_unconditional_toy", "space": {"space": "oikhberg_uncond", "params": OIKHBERG_TOY},
         "gaps": [OIKHBERG_GAPS, ODD_NUMBERS], "groups": ["transfer", "rem5.3"],
         "example_budget": {"N": 5, "s": 3}},
        {"label": "fclass_faithful", "space": {"space": "example51", "params": EX51_FAITHFUL},
         "gaps": [EX51_GAPS, FROM_TWO], "groups": ["transfer", "ex5.1"],
         "example_budget": {"N": 10, "s": 5}},
        {"label": "pq_faithful", "space": {"space": "pq_block", "params": PQ_FAITHFUL},
         "gaps": [pq_faithful_gaps(468, 1.6)], "groups": ["prop4.8"]},
    ],
}


def default_config() -> dict:
    return json.loads(json.dumps(DEFAULT_CONFIG))


def normalize_config(cfg: dict) -> dict:
    """Validate names and fill defaults; raises ConfigError on anything malformed."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    out = {
        "seed": int(cfg.get("seed", 0)),
        "budget": dict(cfg.get("budget", DEFAULT_CONFIG["budget"])),
        "room_budget": dict(cfg.get("room_budget", DEFAULT_CONFIG["room_budget"])),
        "spaces": [],
    }
    for key in ("suite", "timestamp", "fixture_rhs_offset", "output"):
        if key in cfg:
            out[key] = cfg[key]
    try:
        C.SearchBudget.from_json(out["budget"])
        C.SearchBudget.from_json(out["room_budget"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad budget: {exc}") from exc
    shared_gaps = list(cfg.get("gaps", []))
    if "suite" in out and not (isinstance(out["suite"], list) and all(isinstance(x, str) for x in out["suite"])):
        raise ConfigError("suite must be a list of check id prefixes")
    labels = set()
    for entry in cfg.get("spaces", []):
        if not isinstance(entry, dict) or "space" not in entry:
            raise ConfigError("each space entry needs a 'space' object")
        label = str(entry.get("label", entry["space"].get("space", "space")))
        if label in labels:
            raise ConfigError(f"duplicate space label {label!r}")
        labels.add(label)
        groups = list(entry.get("groups", ["transfer"]))
        unknown = [g for g in groups if g not in GROUPS]
        if unknown:
            raise ConfigError(f"unknown check groups {unknown}")
        try:
            space_from_config(entry["space"])
            for g in entry.get("gaps", shared_gaps):
                GapSequence.from_json(g)
            for key in ("budget", "example_budget"):
                if key in entry:
                    C.SearchBudget.from_json(entry[key])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"space {label!r}: {exc}") from exc
        norm = {"label": label, "space": entry["space"], "gaps": list(entry.get("gaps", shared_gaps)), "groups": groups}
        if not norm["gaps"] and any(g != "prop4.8" for g in groups):
            raise ConfigError(f"space {label!r}: no gap sequences configured")
        for key in ("budget", "example_budget"):
            if key in entry:
                norm[key] = entry[key]
        out["spaces"].append(norm)
    return out


# ---------------------------------------------------------------------------
# estimate cache shared by the checks of one task


class _Estimates:
    def __init__(self, space):
        self.space = space
        self._cache = {}

    def get(self, name, n, budget: C.SearchBudget, **options) -> C.ConstantEstimate:
        key = (name, None if n is None else json.dumps(n.to_json()), json.dumps(budget.to_json(), sort_keys=True),
               tuple(sorted(options.items())))
        if key not in self._cache:
            if name in ("ul_lower", "ul_upper"):
                lower, upper = C.ul_constants(self.space, n, budget)
                self._cache[("ul_lower",) + key[1:]] = lower
                self._cache[("ul_upper",) + key[1:]] = upper
            else:
                self._cache[key] = C.estimate(name, self.space, n, budget, **options)[0]
        return self._cache[key]

    def value(self, name, n, budget, **options) -> float:
        return self.get(name, n, budget, **options).value


def _bmax(*vals):
    return max(vals)


# ---------------------------------------------------------------------------
# transfer checks


@dataclass
class _Ctx:
    est: _Estimates
    n: GapSequence
    budget: C.SearchBudget
    room: C.SearchBudget
    c0: float
    alpha: float
    lq: int
    la: int
    K: float | None
    n1: int

    def nat(self, name, **opt):
        return self.est.value(name, None, self.budget, **opt)

    def gap(self, name, **opt):
        return self.est.value(name, self.n, self.budget, **opt)


def _needs_K(fn):
    fn.needs_schauder = True
    return fn


def _t_prop22i(x):
    Ku = x.gap("ucc")
    return x.nat("ucc"), _bmax(x.c0, Ku + Ku * x.la * x.alpha + x.la * x.alpha), {"K_u": Ku, "l_additive": x.la}


@_needs_K
def _t_prop22ii(x):
    Ku = x.gap("ucc")
    return x.nat("ucc"), _bmax(x.c0, (2 * x.lq - 1) * Ku * x.K), {"K_u": Ku, "K": x.K, "l": x.lq}


def _t_prop24i(which):
    def check(x):
        Cj = x.gap(which)
        return x.nat(which), _bmax(x.c0, Cj + x.la * x.alpha + Cj * x.la * x.alpha), {which: Cj, "l_additive": x.la}
    return check


def _t_prop24ii(which):
    @_needs_K
    def check(x):
        Cj = x.gap(which)
        return x.nat(which), _bmax(x.c0, x.K**2 * Cj + 2 * (x.lq - 1) * Cj * x.K), {which: Cj, "K": x.K, "l": x.lq}
    return check


def _t_schauder_transfer(name):
    @_needs_K
    def check(x):
        D = x.gap(name)
        return x.nat(name), _bmax(x.c0, x.lq * x.K * D), {name: D, "K": x.K, "l": x.lq}
    return check


def _t_ucc_transfer(lhs_name, rhs_name, power=1):
    def check(x):
        Ku = x.nat("ucc")
        D = x.gap(rhs_name)
        return x.nat(lhs_name), _bmax(x.c0, x.lq * Ku**power * D), {rhs_name: D, "K_u_all_sizes": Ku, "l": x.lq}
    return check


def _t_lem36i2(x):
    Ku = x.nat("ucc")
    D = x.gap("democracy")
    rhs = min(_bmax(x.c0, x.lq * Ku**2 * D), 2 * _bmax(x.c0, x.lq * Ku * D))
    return x.nat("superdemocracy"), rhs, {"democracy": D, "K_u_all_sizes": Ku, "l": x.lq}


def _t_additive(name, small):
    def check(x):
        D = x.gap(name)
        floor = x.n1 * x.alpha if small == "n1" else x.c0
        return x.nat(name), _bmax(floor, D * (1 + x.la * x.alpha) + x.la * x.alpha), {name: D, "l_additive": x.la}
    return check


def _t_prop43(x):
    cap = None if x.budget.max_support is None else x.budget.max_support + x.budget.s
    Cql = x.est.value("qglc", x.n, x.budget.replace(max_support=cap))
    return x.nat("qglc"), _bmax(x.c0, x.lq * Cql), {"qglc": Cql, "l": x.lq, "rhs_max_support": cap}


def _t_prop45(x):
    K = x.gap("succ")
    return x.nat("succ"), _bmax(x.c0, x.lq * K), {"succ": K, "l": x.lq}


def _t_lem46(x):
    room = x.budget.replace(N=x.budget.N + x.budget.s, max_support=0)
    D = x.est.value("slc", x.n, room)
    return x.gap("superdemocracy"), D**2, {"slc_unperturbed": D, "rhs_N": room.N}


def _pair_budget(x):
    return x.budget.replace(max_support=x.budget.max_support if x.budget.max_support is not None else PAIR_CAP)


def _t_prop47a(x):
    lhs_budget = _pair_budget(x)
    room = lhs_budget.replace(N=lhs_budget.N + lhs_budget.s)
    D = x.est.value("slc", x.n, room)
    lhs = x.est.value("qglc", x.n, lhs_budget)
    return lhs, 1 + D, {"slc": D, "rhs_N": room.N, "max_support": lhs_budget.max_support}


def _t_prop47b(x):
    Cql = x.gap("qglc")
    Ds = x.gap("superdemocracy")
    return x.gap("slc"), 1 + Cql * (1 + Ds), {"qglc": Cql, "superdemocracy": Ds}


def _t_thm410(x):
    """Unrestricted SLC on a small window against the gap-restricted SLC on a wider one.

    Both sides are in-class maxima, so they only bound the true constants from
    below. The right side is increasing in the restricted constant, hence
    bound(restricted) <= bound(true); the check is a consistency test, not a proof.
    """
    room = x.room
    cards = C.cardinalities(x.n, room)
    if not cards:
        raise ValueError("room budget holds no element of the gap sequence")
    nmax = max(cards)
    l = classify_for_cardinality(x.n, room.s).quotient_bound
    cap = None if room.max_support is None else room.max_support + room.s
    rhs_budget = room.replace(N=room.N + (1 + l) * nmax, s=nmax, max_support=cap)
    D = x.est.value("slc", x.n, rhs_budget)
    lhs = x.est.value("slc", None, room)
    return lhs, _bmax(1 + 2 * x.c0, 1 + 2 * D**2 * (1 + l)), {
        "slc": D, "l": l, "lhs_budget": room.to_json(), "rhs_budget": rhs_budget.to_json()}


def _t_prop411(kind, t):
    def check(x):
        Cq = x.gap("quasi_greedy", t=t)
        C1 = x.gap("ul_lower")
        if kind == "i":
            C2 = x.gap("ul_upper")
            D = x.gap("democracy")
            rhs = _bmax(x.c0, Cq * (1 + (x.lq - 1) * C1 * C2 * D))
            info = {"quasi_greedy": Cq, "ul_lower": C1, "ul_upper": C2, "democracy": D}
        else:
            D = x.gap("superdemocracy")
            rhs = _bmax(x.c0, Cq * (1 + (x.lq - 1) * C1 * D))
            info = {"quasi_greedy": Cq, "ul_lower": C1, "superdemocracy": D}
        return x.nat("quasi_greedy", t=t), rhs, info | {"l": x.lq, "t": t}
    return check


TRANSFER_CHECKS = {
    "prop2.2.i": _t_prop22i,
    "prop2.2.ii": _t_prop22ii,
    "prop2.4.i.lower": _t_prop24i("ul_lower"),
    "prop2.4.i.upper": _t_prop24i("ul_upper"),
    "prop2.4.ii.lower": _t_prop24ii("ul_lower"),
    "prop2.4.ii.upper": _t_prop24ii("ul_upper"),
    "prop3.4.i": _t_schauder_transfer("democracy"),
    "prop3.4.ii": _t_schauder_transfer("superdemocracy"),
    "lem3.6.i.1": _t_ucc_transfer("democracy", "democracy"),
    "lem3.6.i.2": _t_lem36i2,
    "lem3.6.ii": _t_ucc_transfer("superdemocracy", "superdemocracy"),
    "prop3.7.ii": _t_additive("superdemocracy", "n1"),
    "prop3.7.iii": _t_additive("democracy", "c0"),
    "lem3.9.i": _t_schauder_transfer("conservative"),
    "lem3.9.ii": _t_schauder_transfer("superconservative"),
    "lem3.10.i.1": _t_ucc_transfer("conservative", "conservative"),
    "lem3.10.i.2": _t_ucc_transfer("superconservative", "conservative", power=2),
    "lem3.10.ii": _t_ucc_transfer("superconservative", "superconservative"),
    "lem3.11.ii": _t_additive("superconservative", "c0"),
    "lem3.11.iii": _t_additive("conservative", "c0"),
    "prop4.3": _t_prop43,
    "prop4.5": _t_prop45,
    "lem4.6": _t_lem46,
    "prop4.7.a": _t_prop47a,
    "prop4.7.b": _t_prop47b,
    "thm4.10": _t_thm410,
    "prop4.11.i.t1": _t_prop411("i", 1.0),
    "prop4.11.ii.t1": _t_prop411("ii", 1.0),
    "prop4.11.i.t0.5": _t_prop411("i", 0.5),
    "prop4.11.ii.t0.5": _t_prop411("ii", 0.5),
}


def _selected(check_name: str, suite) -> bool:
    return suite is None or any(check_name.startswith(prefix) for prefix in suite)


def _transfer_task(label, space_cfg, gap_cfg, gap_index, budget_json, room_json, suite) -> list[dict]:
    space = space_from_config(space_cfg)
    n = GapSequence.from_json(gap_cfg)
    budget = C.SearchBudget.from_json(budget_json)
    room = C.SearchBudget.from_json(room_json)
    relaxed = bool(getattr(getattr(space, "params", None), "relaxed", False))
    base_inputs = {"space": space_cfg, "gaps": gap_cfg, "budget": budget.to_json(), "room_budget": room.to_json()}
    suffix = f"@{label}:g{gap_index}"
    try:
        cls = classify_for_cardinality(n, budget.s)
    except (IndexError, ValueError) as exc:
        return [_error("transfer" + suffix, exc, base_inputs).to_json()]
    alpha = space.alpha1 * space.alpha2
    ctx = _Ctx(_Estimates(space), n, budget, room, (n.first - 1) * alpha, alpha,
               cls.quotient_bound, cls.additive_bound, space.schauder_constant, n.first)
    shared = base_inputs | {"n_1": n.first, "alpha1": space.alpha1, "alpha2": space.alpha2,
                            "l_quotient": cls.quotient_bound, "l_additive": cls.additive_bound,
                            "quotient_trend": cls.quotient_trend, "additive_trend": cls.additive_trend}
    out = []
    for name, fn in TRANSFER_CHECKS.items():
        if not _selected(name, suite):
            continue
        cid = name + suffix
        if getattr(fn, "needs_schauder", False) and ctx.K is None:
            out.append(_skip(cid, "no Schauder constant is declared for this space", shared))
            continue
        try:
            lhs, rhs, info = fn(ctx)
        except (ValueError, IndexError) as exc:
            out.append(_error(cid, exc, shared))
            continue
        out.append(BoundCheck(cid, float(lhs), float(rhs), UPPER, shared | {"rhs_terms": info}, relaxed=relaxed))
    return [c.to_json() for c in out]


# ---------------------------------------------------------------------------
# construction-specific checks


def _norm(space, x: SparseVector) -> float:
    return space.evaluate(x)


def _ex51_task(label, space_cfg, gap_cfg, budget_json, suite) -> list[dict]:
    space = space_from_config(space_cfg)
    if not isinstance(space, Example51Space):
        raise ConfigError(f"{label}: the ex5.1 group needs an example51 space")
    prm = space.params
    n = GapSequence.from_json(gap_cfg)
    budget = C.SearchBudget.from_json(budget_json)
    relaxed = prm.relaxed
    est = _Estimates(space)
    inputs = {"space": space_cfg, "gaps": gap_cfg, "budget": budget.to_json()}
    out = []
    if relaxed:
        out.append(BoundCheck(f"ex5.1.params@{label}", None, None, NOTICE, inputs, relaxed=True,
                              note=f"relaxed parameters, failing constraints: {list(prm.violations)}", status="warn"))

    def add(cid, fn, direction):
        if not _selected(cid, suite):
            return
        full = f"{cid}@{label}"
        try:
            lhs, rhs, info = fn()
            out.append(BoundCheck(full, float(lhs), float(rhs), direction, inputs | info, relaxed=relaxed))
        except (ValueError, IndexError) as exc:
            out.append(_error(full, exc, inputs))

    add("ex5.1.b", lambda: (est.value("superdemocracy", n, budget), 2.0, {}), UPPER)
    add("ex5.1.c.lower", lambda: (est.value("ul_lower", n, budget), 2.0, {}), UPPER)
    add("ex5.1.c.upper", lambda: (est.value("ul_upper", n, budget), 2.0, {}), UPPER)

    level = prm.levels[0]
    lower = level.m / (2 * prm.n_k0_plus1**2)
    B = level.B
    D = IndexSet(B.elements[: level.n_k])
    E = IndexSet.interval(B.elements[0] - level.m, B.elements[0] - 1)
    norm_B = _norm(space, indicator(B))
    norm_D = _norm(space, indicator(D))
    norm_E = _norm(space, indicator(E))
    sets = {"B": [B.elements[0], B.elements[-1]], "D": [D.elements[0], D.elements[-1]], "E": [E.elements[0], E.elements[-1]]}
    add("ex5.1.d.subset", lambda: (lower, norm_D, {"sets": sets, "bound": "m/(2 n^2)"}), LOWER)
    add("ex5.1.d.ratio", lambda: (lower / 1.0, norm_D / norm_B, {"sets": sets}), LOWER)
    add("ex5.1.e.block", lambda: (norm_B, 1.0, {"sets": sets}), UPPER)
    add("ex5.1.e.before", lambda: (lower, norm_E, {"sets": sets}), LOWER)
    add("ex5.1.e.ratio", lambda: (lower / 1.0, norm_E / norm_B, {"sets": sets}), LOWER)
    return [c.to_json() for c in out]


def oikhberg_witness_ratios(space: OikhbergSpace) -> list[dict]:
    """Per level: ||1_B|| / ||1_{alt B}|| and ||1_B|| / ||1_D|| for the half-blocks B < D."""
    prm = space.params
    rows = []
    for i in range(1, len(prm.lengths) + 1):
        t, beta = prm.offsets[i - 1], prm.halves[i - 1]
        B = IndexSet.interval(t + 1, t + beta)
        D = IndexSet.interval(t + beta + 1, t + 2 * beta)
        ones = _norm(space, indicator(B))
        alt = _norm(space, indicator(B, SignPattern.alternating(B)))
        rows.append({"level": i, "B": [t + 1, t + beta], "D": [t + beta + 1, t + 2 * beta],
                     "unconditional_ratio": ones / alt, "conservative_ratio": ones / _norm(space, indicator(D))})
    return rows


def _ex52_task(label, space_cfg, gap_cfg, budget_json, suite) -> list[dict]:
    space = space_from_config(space_cfg)
    if not isinstance(space, OikhbergSpace) or space.unconditional:
        raise ConfigError(f"{label}: the ex5.2 group needs an oikhberg space")
    n = GapSequence.from_json(gap_cfg)
    budget = C.SearchBudget.from_json(budget_json)
    est = _Estimates(space)
    inputs = {"space": space_cfg, "gaps": gap_cfg, "budget": budget.to_json()}
    slc_budget = budget.replace(max_support=3 if budget.max_support is None else budget.max_support)
    half_budget = budget.replace(max_support=5 if budget.max_support is None else budget.max_support)
    root2 = math.sqrt(2)
    plan = [
        ("ex5.2.a.t1", lambda: est.value("quasi_greedy", n, budget, t=1.0), 2.0, budget),
        ("ex5.2.a.t0.5", lambda: est.value("quasi_greedy", n, half_budget, t=0.5), 4.0, half_budget),
        ("ex5.2.b", lambda: est.value("superdemocracy", n, budget), root2, budget),
        ("ex5.2.d", lambda: est.value("slc", n, slc_budget), 3 + 2 * root2, slc_budget),
        ("ex5.2.e.lower", lambda: est.value("ul_lower", n, budget), root2, budget),
        ("ex5.2.e.upper", lambda: est.value("ul_upper", n, budget), root2, budget),
    ]
    out = []
    for cid, fn, bound, used in plan:
        if not _selected(cid, suite):
            continue
        full = f"{cid}@{label}"
        try:
            out.append(BoundCheck(full, float(fn()), bound, UPPER, inputs | {"budget": used.to_json()}))
        except (ValueError, IndexError) as exc:
            out.append(_error(full, exc, inputs))
    rows = oikhberg_witness_ratios(space)
    for key, tag in (("conservative_ratio", "ex5.2.f"), ("unconditional_ratio", "ex5.2.h")):
        for a, b in zip(rows, rows[1:]):
            cid = f"{tag}.level{a['level']}<level{b['level']}"
            if _selected(cid, suite):
                out.append(BoundCheck(f"{cid}@{label}", a[key] + GROWTH_MARGIN, b[key], GROWTH,
                                      {"space": space_cfg, "levels": [a, b], "ratio": key}))
    return [c.to_json() for c in out]


def _rem53_task(label, space_cfg, budget_json, seed, suite) -> list[dict]:
    space = space_from_config(space_cfg)
    if not isinstance(space, OikhbergSpace) or not space.unconditional:
        raise ConfigError(f"{label}: the rem5.3 group needs an oikhberg_uncond space")
    budget = C.SearchBudget.from_json(budget_json)
    N = budget.N
    X = C.grid_vectors(N, budget.grid, budget.max_support, nonzero=True)
    base = space.norms(X)
    signs = C._sign_rows(N, False)
    inputs = {"space": space_cfg, "budget": budget.to_json()}
    out = []

    if _selected("rem5.3.signs", suite):
        worst = max(float(np.max(space.norms(X * s) / base)) for s in signs)
        out.append(BoundCheck(f"rem5.3.signs@{label}", worst, 1.0, UPPER, inputs))
    if _selected("rem5.3.projections", suite):
        masks = (signs > 0).astype(float)
        worst = max(float(np.max(space.norms(X * mk) / base)) for mk in masks)
        out.append(BoundCheck(f"rem5.3.projections@{label}", worst, 1.0, UPPER, inputs))
    if _selected("rem5.3.subsequence", suite):
        firsts = [t + 1 for t in space.params.offsets]
        worst, rows = 1.0, []
        for k in range(1, len(firsts) + 1):
            vals = []
            for S in itertools.combinations(firsts, k):
                vals.append(_norm(space, indicator(IndexSet(S))))
            rows.append({"size": k, "min": min(vals), "max": max(vals), "sqrt_size": math.sqrt(k)})
            worst = max(worst, max(vals) / min(vals), max(vals) / math.sqrt(k))
        out.append(BoundCheck(f"rem5.3.subsequence@{label}", worst, 1.0, UPPER,
                              {"space": space_cfg, "indices": firsts, "norms": rows}))
    return [c.to_json() for c in out]


def _prop48_task(label, space_cfg, suite) -> list[dict]:
    space = space_from_config(space_cfg)
    if not isinstance(space, PqBlockSpace):
        raise ConfigError(f"{label}: the prop4.8 group needs a pq_block space")
    prm = space.params
    m, p, q = prm.m, prm.p, prm.q
    inputs = {"space": space_cfg}
    out = []
    for name, (lhs, rhs, _) in prm.conditions().items():
        cid = f"prop4.8.{name}"
        if _selected(cid, suite):
            strict = name.startswith("largem")
            # strict conditions need a positive gap; the others allow equality up to rounding
            out.append(BoundCheck(f"{cid}@{label}", lhs + (GROWTH_MARGIN if strict else 0.0), rhs, CONDITION, inputs))
    block = IndexSet.interval(1, m)
    if _selected("prop4.8.ones", suite):
        out.append(BoundCheck(f"prop4.8.ones@{label}", _norm(space, indicator(block)), float(m), EXACT, inputs))
    if _selected("prop4.8.alternating", suite):
        alt = _norm(space, indicator(block, SignPattern.alternating(block)))
        out.append(BoundCheck(f"prop4.8.alternating@{label}", alt, m ** (1 / p), EXACT, inputs))
    sd = slc = None
    if _selected("prop4.8.superdemocracy", suite) or _selected("lem4.6", suite):
        sd = C.pq_orbit_superdemocracy(space)
    if _selected("prop4.8.superdemocracy", suite):
        out.append(BoundCheck(f"prop4.8.superdemocracy@{label}", m ** (1 - 1 / p), sd.value, LOWER,
                              inputs | {"estimate": sd.to_json()}))
    if _selected("prop4.8.slc", suite):
        slc = C.pq_orbit_slc(space)
        out.append(BoundCheck(f"prop4.8.slc@{label}", slc.value, m**prm.gap_exponent, UPPER,
                              inputs | {"estimate": slc.to_json()}))
    if _selected("lem4.6", suite):
        base = C.pq_orbit_slc_unperturbed(space)
        out.append(BoundCheck(f"lem4.6@{label}:orbit", sd.value, base.value**2, UPPER,
                              inputs | {"superdemocracy": sd.value, "slc_unperturbed": base.value}))
    return [c.to_json() for c in out]


# ---------------------------------------------------------------------------
# orchestration


def _tasks(cfg: dict) -> list[tuple]:
    suite = cfg.get("suite")
    seed = cfg["seed"]
    tasks = []
    for entry in cfg["spaces"]:
        label = entry["label"]
        budget = dict(cfg["budget"]) | dict(entry.get("budget", {}))
        budget["seed"] = seed
        ex_budget = dict(entry.get("example_budget", budget)) | {"seed": seed}
        gaps = entry["gaps"]
        for group in entry["groups"]:
            if group == "transfer":
                for gi, g in enumerate(gaps):
                    tasks.append((_transfer_task, (label, entry["space"], g, gi, budget, cfg["room_budget"], suite)))
            elif group == "ex5.1":
                tasks.append((_ex51_task, (label, entry["space"], gaps[0], ex_budget, suite)))
            elif group == "ex5.2":
                tasks.append((_ex52_task, (label, entry["space"], gaps[0], ex_budget, suite)))
            elif group == "rem5.3":
                tasks.append((_rem53_task, (label, entry["space"], ex_budget, seed, suite)))
            elif group == "prop4.8":
                tasks.append((_prop48_task, (label, entry["space"], suite)))
    return tasks


def _run(task):
    fn, args = task
    return fn(*args)


def run_suite(config: dict | None = None, jobs: int = 1, seed: int | None = None) -> VerificationReport:
    """Execute every configured check; the result does not depend on ``jobs``."""
    cfg = normalize_config(default_config() if config is None else config)
    if seed is not None:
        cfg["seed"] = int(seed)
    tasks = _tasks(cfg)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, tasks))
    else:
        results = [_run(t) for t in tasks]
    checks = [BoundCheck.from_json(c) for chunk in results for c in chunk]
    for prefix, offset in (cfg.get("fixture_rhs_offset") or {}).items():
        for c in checks:
            if c.id.startswith(prefix) and c.rhs is not None:
                c.rhs = c.rhs - float(offset)
                c.status = ""
                c.evaluate()
    checks.sort(key=lambda c: c.id)
    return VerificationReport(checks, cfg, cfg["seed"], cfg.get("timestamp"))
