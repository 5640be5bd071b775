from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from hurwitz.core import EquationError, GHEquation, eval_residual, validate_equation
from hurwitz.enumeration import (
    ResidualInstance,
    block_sorted,
    classify_coefficients,
    count_A,
    enumerate_fundamental,
    hurwitz_solvable,
    solve_residual_pair,
    tree_expand,
    tree_to_dot,
)
from hurwitz.vieta import is_fundamental, reduce

import oracles

SMALL_SUITE = [
    ((1, 1, 1), 1), ((1, 1, 1), 2), ((1, 1, 1), 3), ((1, 1, 2), 2), ((1, 1, 2), 4),
    ((1, 1, 5), 5), ((1, 2, 3), 6), ((1, 1, 3), 3), ((1, 2, 5), 10), ((1, 1, 4), 4),
    ((1, 1, 1, 1), 1), ((1, 1, 1, 1), 2), ((1, 1, 1, 1), 4), ((1, 1, 1, 6), 6),
    ((1, 1, 2, 3), 6), ((1, 1, 1, 2), 2),
    ((1, 1, 1, 1, 1), 1), ((1, 1, 1, 1, 1), 4), ((1, 1, 1, 1, 1), 5), ((1, 1, 1, 1, 6), 6),
    ((1, 1, 1, 2, 3), 6),
]


def _box(n):
    return 30 if n == 3 else 6


@pytest.mark.parametrize("a, d", SMALL_SUITE)
def test_enumerator_matches_brute_force_box(a, d):
    eq = validate_equation(a, d)
    B = _box(eq.n)
    got = set(enumerate_fundamental(eq))
    brute = set(oracles.gh_box(a, d, B))
    assert {x for x in got if max(x) <= B} == brute
    # every box solution descends to an enumerated fundamental solution
    reps = set()
    for x in product(range(1, B + 1), repeat=eq.n):
        if oracles.gh_residual(a, d, x) == 0:
            reps.add(reduce(eq, x)[0])
    assert reps <= got
    assert brute <= reps


@pytest.mark.parametrize("a, d", [((1, 1, 1), 4), ((1, 1, 1), 6), ((1, 1, 2), 6), ((1, 2, 3), 12),
                                  ((1, 1, 1, 1), 5), ((1, 1, 1, 1), 6), ((1, 1, 1, 1, 1), 6)])
def test_corollary_d_above_coefficient_sum_is_empty(a, d):
    eq = validate_equation(a, d)
    assert d > sum(a)
    assert enumerate_fundamental(eq).solutions == ()
    assert oracles.gh_box(a, d, _box(eq.n)) == []


@pytest.fixture(scope="module")
def classified():
    return {n: classify_coefficients(n) for n in (3, 4, 5)}


def test_equality_case_only_all_ones(classified):
    hits = 0
    for rows in classified.values():
        for fs in rows:
            if fs.equation.d == sum(fs.equation.a):
                hits += 1
                assert fs.solutions == ((1,) * fs.equation.n,)
    assert hits > 0


def _lemma_bound_ok(eq, x):
    small = sorted(x)[:eq.n - 2]
    lhs = eq.d
    for v in small:
        lhs *= v
    if lhs > sum(eq.a):
        return False
    return (lhs == sum(eq.a)) == (len(set(x)) == 1)


def test_lemma_bound_on_every_enumerated_solution(classified):
    checked = 0
    for rows in classified.values():
        for fs in rows:
            for x in fs:
                assert is_fundamental(fs.equation, x)
                assert _lemma_bound_ok(fs.equation, x), (fs.equation, x)
                checked += 1
    for n, d in [(14, 1), (19, 1), (95, 1), (10, 6), (13, 7), (6, 3), (9, 9)]:
        eq = GHEquation((1,) * n, d)
        for x in enumerate_fundamental(eq, "sorted"):
            assert _lemma_bound_ok(eq, x)
            checked += 1
    assert checked > 20


def test_classification_is_canonical(classified):
    for rows in classified.values():
        keys = [(fs.equation.a, fs.equation.d) for fs in rows]
        assert keys == sorted(keys)
        for fs in rows:
            assert list(fs.solutions) == sorted(set(fs.solutions))


def test_classify_parallel_matches_serial():
    serial = classify_coefficients(4, workers=1)
    parallel = classify_coefficients(4, workers=2)
    assert [(f.equation, f.solutions) for f in serial] == [(f.equation, f.solutions) for f in parallel]


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 40), st.integers(1, 12))
@settings(max_examples=200, deadline=None)
def test_residual_pair_complete(p, q, c1, c2):
    got = set(solve_residual_pair(ResidualInstance(p, q, c1, c2)))
    for y, z in got:
        assert p * y * y + q * z * z + c1 == c2 * y * z
    # every pair-fundamental solution in a generous box is found
    for y in range(1, 120):
        for z in range(1, 120):
            if p * y * y + q * z * z + c1 == c2 * y * z and 2 * q * z <= c2 * y and 2 * p * y <= c2 * z:
                assert (y, z) in got


def test_sorted_mode_requires_hurwitz_and_k_zero():
    with pytest.raises(EquationError):
        enumerate_fundamental(GHEquation((1, 1, 2), 4), "sorted")
    with pytest.raises(EquationError):
        enumerate_fundamental(GHEquation((1, 1, 1), 1, 2))
    with pytest.raises(ValueError):
        enumerate_fundamental(GHEquation((1, 1, 1), 3), "bogus")


def test_sorted_and_raw_agree():
    for n, d in [(3, 1), (3, 3), (4, 1), (4, 4), (5, 4), (6, 3), (6, 1)]:
        eq = GHEquation((1,) * n, d)
        raw = enumerate_fundamental(eq).solutions
        srt = enumerate_fundamental(eq, "sorted").solutions
        assert set(srt) == {x for x in raw if list(x) == sorted(x)}
        assert {tuple(sorted(x)) for x in raw} == set(srt)


def test_hurwitz_solvable_agrees_with_enumeration():
    for n in range(3, 17):
        for d in range((n + 1) // 2, n + 1):
            ok, x = hurwitz_solvable(n, d)
            sols = enumerate_fundamental(GHEquation((1,) * n, d), "sorted").solutions
            assert ok == bool(sols), (n, d)
            if ok:
                assert sols == (x,)
    with pytest.raises(ValueError):
        hurwitz_solvable(20, 3)


def test_count_A_small():
    assert count_A(3) == (2, [1, 3])
    for n in range(3, 16):
        count, ds = count_A(n)
        assert n in ds and count == len(ds)
        assert ds == oracles.A_oracle(n)


def test_block_sorted():
    eq = GHEquation((1, 1, 1, 6), 6)
    assert block_sorted(eq, (2, 1, 1, 1)) == (1, 1, 2, 1)
    eq = GHEquation((1, 1, 5), 5)
    assert block_sorted(eq, (2, 1, 1)) == (1, 2, 1)


def test_tree_matches_orbit_ball():
    eq = GHEquation((1, 1, 1), 3)
    nodes = tree_expand(eq, (1, 1, 1), max_height=10)
    ball = oracles.orbit_ball(eq.a, eq.d, (1, 1, 1), 10)
    assert len(nodes) == len(ball) == 10
    assert {n.tuple for n in nodes} == ball
    for node in nodes:
        assert eval_residual(eq, node.tuple) == 0
        assert reduce(eq, node.tuple)[0] == (1, 1, 1)
    assert [n.tuple for n in nodes[:4]] == [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)]
    assert (2, 5, 1) in ball


@pytest.mark.parametrize("a, d, root, H", [((1, 1, 5), 5, (1, 2, 1), 60), ((1, 1, 1), 1, (3, 3, 3), 400),
                                           ((1, 1, 1, 1), 4, (1, 1, 1, 1), 60)])
def test_tree_matches_orbit_ball_more(a, d, root, H):
    nodes = tree_expand(GHEquation(a, d), root, max_height=H)
    assert {n.tuple for n in nodes} == oracles.orbit_ball(a, d, root, H)
    assert len({n.tuple for n in nodes}) == len(nodes)


def test_tree_limits_and_errors():
    eq = GHEquation((1, 1, 1), 3)
    assert len(tree_expand(eq, (1, 1, 1), max_height=3)) == 1
    assert len(tree_expand(eq, (1, 1, 1), max_depth=2)) == 1 + 3 + 6
    with pytest.raises(ValueError):
        tree_expand(eq, (1, 2, 5), max_height=20)
    with pytest.raises(ValueError):
        tree_expand(eq, (1, 1, 1))
    with pytest.raises(ValueError):
        tree_expand(eq, (1, 1, 1), max_height=2)


def test_tree_dot():
    eq = GHEquation((1, 1, 1), 3)
    dot = tree_to_dot(tree_expand(eq, (1, 1, 1), max_height=10))
    assert dot.startswith("digraph orbit {") and dot.endswith("}\n")
    assert dot.count("[label=\"(") == 10
    assert dot.count("->") == 9
