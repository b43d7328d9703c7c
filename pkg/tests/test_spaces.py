import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SPACE_CONFIGS, random_rows, rel_close
from fclass_oracles import coordinates, grid_sup, lp_sup, single_level
from gapgreedy.core import IndexSet, SignPattern, indicator, make_vector, partial_sum, project
from gapgreedy.spaces import (
    Example51Params,
    OikhbergParams,
    PqBlockParams,
    example51_norm,
    f_class_sup,
    f_class_sup_rows,
    lp_space_norm,
    measure_alpha,
    oikhberg_norm,
    oikhberg_unconditional_norm,
    pq_block_norm,
    space_from_config,
)
from gapgreedy.verify import EX51_FAITHFUL, OIKHBERG_TOY, PQ_FAITHFUL

SMALL = OikhbergParams.from_json({"levels": [{"c": 2, "m": 4}]})
TOY_PQ = PqBlockParams(2, 2, 0.5, 2, strict=False)


def test_lp_examples():
    assert lp_space_norm(2, make_vector([(1, 1), (2, 1)])) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert lp_space_norm(math.inf, make_vector([(1, 3), (2, -1)])) == 3
    assert lp_space_norm(1, make_vector([])) == 0
    with pytest.raises(ValueError):
        lp_space_norm(0.5, make_vector([(1, 1)]))


def test_pq_block_examples(pq_faithful):
    m, p = pq_faithful.params.m, pq_faithful.params.p
    block = IndexSet.interval(1, m)
    assert rel_close(pq_faithful.evaluate(indicator(block)), m)
    alt = indicator(block, SignPattern.alternating(block))
    assert rel_close(pq_faithful.evaluate(alt), m ** (1 / p))
    assert pq_faithful.evaluate(make_vector([(m + 1, 1.0)])) == 1.0
    assert pq_block_norm(TOY_PQ, make_vector([(1, 1), (2, 1)])) == 2


def test_pq_tail_is_lq(pq_faithful, rng=np.random.default_rng(3)):
    m, q = pq_faithful.params.m, pq_faithful.params.q
    X = np.zeros((50, m + 20))
    X[:, m:] = rng.normal(size=(50, 20))
    expected = (np.abs(X[:, m:]) ** q).sum(axis=1) ** (1 / q)
    assert np.allclose(pq_faithful.norms(X), expected, rtol=1e-13)


def test_pq_faithful_conditions(pq_faithful):
    prm = pq_faithful.params
    assert prm.q == pytest.approx(8 / 5) and prm.p == pytest.approx(4 - prm.epsilon)
    assert all(ok for _, _, ok in prm.conditions().values())
    assert PqBlockParams.smallest_block(3.1, 1.6, 0.9, delta=0.25, M=2).m == prm.m


def test_pq_rejects_bad_parameters():
    with pytest.raises(ValueError):
        PqBlockParams(3.1, 1.6, 0.9, 3)
    with pytest.raises(ValueError):
        PqBlockParams(3.1, 1.6, 0.9, 4)  # too small for the size condition


def test_fclass_spec_example():
    prm = single_level([2, 3], 2)
    assert f_class_sup(prm, 1, make_vector([(1, 3), (2, 2)])) == pytest.approx(4.0, abs=1e-12)


def test_fclass_constant_on_B_vanishes():
    prm = single_level([2, 3, 4], 2)
    assert f_class_sup(prm, 1, make_vector([(2, 1.5), (3, 1.5), (4, 1.5)])) == pytest.approx(0.0, abs=1e-12)
    assert f_class_sup(prm, 1, make_vector([])) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_fclass_matches_highs_and_grid(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        N, m = int(rng.integers(2, 7)), int(rng.integers(1, 4))
        x = rng.normal(size=N) * (rng.random(N) < 0.8)
        B = sorted(rng.choice(np.arange(1, N + 3), size=int(rng.integers(1, 4)), replace=False).tolist())
        prm = single_level(B, m)
        got = float(f_class_sup_rows(prm, 1, x[None, :])[0])
        assert got == pytest.approx(lp_sup(x, prm.levels[0].B, m), abs=1e-6)
        if len(coordinates(x, prm.levels[0].B)) <= 6:
            assert got == pytest.approx(grid_sup(x, prm.levels[0].B, m), abs=1e-6)


def test_fclass_faithful_instance(fclass_faithful):
    prm = fclass_faithful.params
    assert not prm.relaxed and prm.violations == ()
    level = prm.levels[0]
    assert len(level.B) == level.n_k + level.m
    B = level.B
    # the level-1 class kills constants on B, so only the sup branch remains
    assert example51_norm(prm, indicator(B)) == 1.0
    for j in (1, 6, 40):
        assert fclass_faithful.evaluate(make_vector([(j, 1.0)])) == 1.0
    assert example51_norm(prm, make_vector([])) == 0.0


def test_fclass_rejects_inexact_parameters():
    bad = {"n_k0_plus1": 2, "relaxed": True, "levels": [{"n_k": 10, "n_k_next": 4, "m": 3, "B_interval": [4, 16]}]}
    with pytest.raises(ValueError):
        Example51Params.from_json(bad)


def test_fclass_constraints_enforced_unless_relaxed():
    cfg = {"n_k0_plus1": 2, "levels": [{"n_k": 10, "n_k_next": 20, "m": 3, "B_interval": [4, 16]}]}
    with pytest.raises(ValueError):
        Example51Params.from_json(cfg)
    prm = Example51Params.from_json(cfg | {"relaxed": True})
    assert "m_1 > 4" in prm.violations


def test_oikhberg_small_examples():
    assert oikhberg_norm(SMALL, make_vector([(1, 1), (2, 1)])) == pytest.approx(2.0, rel=1e-15)
    assert oikhberg_norm(SMALL, make_vector([(1, 1), (2, -1)])) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert oikhberg_norm(SMALL, make_vector([(9, 1)])) == 1.0
    assert oikhberg_unconditional_norm(SMALL, make_vector([(1, 1), (2, -1)])) == pytest.approx(2.0, rel=1e-15)
    assert oikhberg_unconditional_norm(SMALL, make_vector([(9, 1)])) == 1.0


def _prefix_brute_force(params, x):
    """Direct evaluation of the signed prefix branch, one prefix at a time."""
    best = float(np.linalg.norm(x))
    for i in range(1, len(params.lengths) + 1):
        t, m, c = params.offsets[i - 1], params.lengths[i - 1], params.weights[i - 1]
        signs = params.sign_vector(i)
        for l in range(1, m + 1):
            s = sum(signs[j] * (x[t + j] if t + j < len(x) else 0.0) for j in range(l))
            best = max(best, c / math.sqrt(m) * abs(s))
    return best


def test_oikhberg_matches_prefix_brute_force():
    params = OikhbergParams.from_json(OIKHBERG_TOY)
    space = space_from_config({"space": "oikhberg", "params": OIKHBERG_TOY})
    X = random_rows(np.random.default_rng(7), 40, params.total_length + 3)
    got = space.norms(X)
    for row, val in zip(X, got):
        assert val == pytest.approx(_prefix_brute_force(params, row), rel=1e-12)


def test_oikhberg_sign_map():
    params = OikhbergParams.from_json({"levels": [{"c": 1.5, "m": 6}, {"c": 2, "m": 5}]})
    assert list(params.sign_vector(1)) == [1, 1, 1, 1, -1, 1]
    # block 2 covers 7..11, first half-length 2 has theta = 2j
    assert list(params.sign_vector(2)) == [1, 1, -1, 1, -1]


def test_oikhberg_from_gaps():
    params = OikhbergParams.from_json(OIKHBERG_TOY)
    assert params.lengths == (5, 14, 92)
    assert params.weights[0] == pytest.approx((6 / 5) ** 0.25)
    with pytest.raises(ValueError):
        OikhbergParams.from_gaps([(4, 6)])
    with pytest.raises(ValueError):
        OikhbergParams.from_gaps([(5, 20), (20, 30)])


@pytest.mark.parametrize("name", ["l2", "pq_toy", "oikhberg_toy", "oikhberg_uncond_toy", "fclass_faithful"])
def test_measure_alpha_normalized(name):
    a1, a2 = measure_alpha(space_from_config(SPACE_CONFIGS[name]), 10)
    assert a1 == pytest.approx(1.0) and a2 <= 1.0 + 1e-12


def test_measure_alpha_l2():
    assert measure_alpha(space_from_config(SPACE_CONFIGS["l2"]), 10) == (1.0, 1.0)


def test_pq_unit_vector(pq_faithful):
    assert pq_faithful.evaluate(make_vector([(1, 1.0)])) == 1.0


def test_unknown_space_kind():
    with pytest.raises(ValueError):
        space_from_config({"space": "hilbert"})


@pytest.mark.parametrize("name", sorted(SPACE_CONFIGS))
def test_norm_axioms_random(name):
    space = space_from_config(SPACE_CONFIGS[name])
    rng = np.random.default_rng(11)
    X, Y = random_rows(rng, 200, 45), random_rows(rng, 200, 45)
    t = rng.normal(size=(200, 1)) * 5
    nx, ny = space.norms(X), space.norms(Y)
    assert np.allclose(space.norms(t * X), np.abs(t[:, 0]) * nx, rtol=1e-12, atol=0)
    assert np.all(space.norms(X + Y) <= nx + ny + 1e-12 * (nx + ny) + 1e-12)
    nonzero = (X != 0).any(axis=1)
    assert np.all(nx[nonzero] > 0) and np.all(space.norms(np.zeros((1, 45))) == 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=40), st.integers(0, 40))
def test_oikhberg_monotone_partial_sums(values, m):
    params = OikhbergParams.from_json(OIKHBERG_TOY)
    x = make_vector([(i + 1, v) for i, v in enumerate(values)])
    assert oikhberg_norm(params, partial_sum(x, m)) <= oikhberg_norm(params, x) * (1 + 1e-12) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=30), st.data())
def test_unconditional_variant_contracts_and_ignores_signs(values, data):
    params = OikhbergParams.from_json(OIKHBERG_TOY)
    x = make_vector([(i + 1, v) for i, v in enumerate(values)])
    A = data.draw(st.sets(st.integers(1, len(values))))
    flips = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=len(values), max_size=len(values)))
    y = make_vector([(i + 1, v * s) for i, (v, s) in enumerate(zip(values, flips))])
    base = oikhberg_unconditional_norm(params, x)
    assert oikhberg_unconditional_norm(params, project(x, A)) <= base * (1 + 1e-12) + 1e-12
    assert oikhberg_unconditional_norm(params, y) == pytest.approx(base, rel=1e-12, abs=1e-12)


def test_space_configs_round_trip():
    for cfg in SPACE_CONFIGS.values():
        space = space_from_config(cfg)
        again = space_from_config(space.config())
        X = random_rows(np.random.default_rng(0), 5, 30)
        assert np.array_equal(space.norms(X), again.norms(X))


def test_faithful_pq_config_is_strict():
    assert space_from_config({"space": "pq_block", "params": PQ_FAITHFUL}).params.strict
    assert Example51Params.from_json(EX51_FAITHFUL).n_k0_plus1 == 2
