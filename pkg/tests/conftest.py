import math

import numpy as np
import pytest

from gapgreedy.spaces import (
    Example51Params,
    Example51Space,
    LpSpace,
    OikhbergParams,
    OikhbergSpace,
    OikhbergUnconditionalSpace,
    PqBlockParams,
    PqBlockSpace,
    space_from_config,
)
from gapgreedy.verify import EX51_FAITHFUL, OIKHBERG_TOY, PQ_FAITHFUL

PQ_TOY = {"space": "pq_block", "params": {"p": 2, "q": 2, "epsilon": 0.5, "m": 2, "strict": False}}
SMALL_OIKHBERG = {"levels": [{"c": 2, "m": 4}]}
RELAXED_EX51 = {"n_k0_plus1": 2, "relaxed": True,
                "levels": [{"n_k": 10, "n_k_next": 20, "m": 3, "B_interval": [4, 16]}]}


def all_space_configs():
    """One config per kind, covering the instances used across the suite."""
    return {
        "l1": {"space": "lp", "params": {"p": 1}},
        "l2": {"space": "lp", "params": {"p": 2}},
        "l3": {"space": "lp", "params": {"p": 3}},
        "linf": {"space": "lp", "params": {"p": "inf"}},
        "pq_toy": PQ_TOY,
        "pq_faithful": {"space": "pq_block", "params": PQ_FAITHFUL},
        "fclass_faithful": {"space": "example51", "params": EX51_FAITHFUL},
        "fclass_relaxed": {"space": "example51", "params": RELAXED_EX51},
        "oikhberg_toy": {"space": "oikhberg", "params": OIKHBERG_TOY},
        "oikhberg_small": {"space": "oikhberg", "params": SMALL_OIKHBERG},
        "oikhberg_uncond_toy": {"space": "oikhberg_uncond", "params": OIKHBERG_TOY},
    }


SPACE_CONFIGS = all_space_configs()


@pytest.fixture(params=sorted(SPACE_CONFIGS))
def any_space(request):
    return space_from_config(SPACE_CONFIGS[request.param])


@pytest.fixture
def l2():
    return LpSpace(2)


@pytest.fixture
def pq_toy():
    return space_from_config(PQ_TOY)


@pytest.fixture(scope="session")
def pq_faithful():
    return PqBlockSpace(PqBlockParams(**PQ_FAITHFUL))


@pytest.fixture
def oikhberg_toy():
    return OikhbergSpace(OikhbergParams.from_json(OIKHBERG_TOY))


@pytest.fixture
def oikhberg_uncond_toy():
    return OikhbergUnconditionalSpace(OikhbergParams.from_json(OIKHBERG_TOY))


@pytest.fixture
def oikhberg_small():
    return OikhbergSpace(OikhbergParams.from_json(SMALL_OIKHBERG))


@pytest.fixture
def fclass_faithful():
    return Example51Space(Example51Params.from_json(EX51_FAITHFUL))


def random_rows(rng, count, width, density=0.5):
    """Dense rows with random sparsity and mixed scales."""
    X = rng.normal(size=(count, width)) * rng.choice([0.1, 1.0, 10.0], size=(count, 1))
    X[rng.random((count, width)) > density] = 0.0
    return X


def rel_close(a, b, rtol=1e-12):
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


__all__ = ["math", "np", "random_rows", "rel_close", "SPACE_CONFIGS"]
