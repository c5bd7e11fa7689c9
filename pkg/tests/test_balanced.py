import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphs import all_multigraphs, is_stable, random_connected, stabilized
from rootstrata.balanced import (
    Status,
    all_models,
    balanced_box,
    basic_inequality,
    enumerate_balanced,
    exceptional_contacts,
    is_balanced,
    is_stably_balanced,
    r2_identity_check,
)
from rootstrata.exceptions import GenusError, SizeGateError
from rootstrata.graph import DualGraph, QuasistableModel, arithmetic_genus, k_Z, omega_degree
from strategies import models

THREE_NODES = DualGraph.from_edges([1, 1], [(0, 1)] * 3)


def rational_verdict(model, d):
    """Status straight from the definition, in exact rationals, subset by subset."""
    X = model.derived_graph
    n = X.n_vertices
    g = arithmetic_genus(X)
    total = sum(d)
    if any(d[v] != 1 for v in X.exceptional):
        return Status.NOT_BALANCED
    stable = True
    for size in range(1, n):
        for Z in itertools.combinations(range(n), size):
            dz = sum(d[v] for v in Z)
            wz = sum(2 * X.genera[v] - 2 + X.valence(v) for v in Z)
            kz = sum((a in Z) != (b in Z) for a, b in X.edges)
            m = Fraction(total * wz, 2 * g - 2)
            if not (m - Fraction(kz, 2) <= dz <= m + Fraction(kz, 2)):
                return Status.NOT_BALANCED
            if dz == m - Fraction(kz, 2) and not set(X.non_exceptional) <= set(Z):
                stable = False
    return Status.STABLY_BALANCED if stable else Status.BALANCED


def widened_box_balanced(model, total):
    X = model.derived_graph
    gg = 2 * arithmetic_genus(X) - 2
    ranges = []
    for v in X.vertices:
        # twice the half-width the inequality allows, plus one
        centre = Fraction(total * omega_degree(X, v), gg)
        half = 2 * (abs(centre) + X.valence(v)) + 1
        ranges.append(range(math.floor(-half), math.ceil(half) + 1))
    out = []
    for cand in itertools.product(*ranges[:-1]):
        last = total - sum(cand)
        if last in ranges[-1]:
            d = cand + (last,)
            if rational_verdict(model, d) is not Status.NOT_BALANCED:
                out.append(d)
    return sorted(out)


def test_three_node_curve_degree_zero_inventory():
    found = enumerate_balanced(THREE_NODES, 0)
    got = {tuple(sorted(m.delta)): [d.values for d in ds] for m, ds in found.items()}
    assert got[()] == [(-1, 1), (0, 0), (1, -1)]
    for i in range(3):
        assert got[(i,)] == [(-1, 0, 1), (0, -1, 1)]
    for pair in itertools.combinations(range(3), 2):
        assert got[pair] == [(-1, -1, 1, 1)]
    assert got[(0, 1, 2)] == []
    for m, ds in found.items():
        for d in ds:
            assert is_stably_balanced(m, d).status is Status.STABLY_BALANCED


def test_witnesses_name_the_offending_subcurve():
    m = QuasistableModel(THREE_NODES, frozenset())
    v = is_balanced(m, (2, -2))
    assert v.status is Status.NOT_BALANCED
    (w,) = v.witnesses
    assert w.vertices == (0,) and w.kind == "upper" and (w.d_Z, w.w_Z, w.k_Z) == (2, 3, 3)
    m1 = QuasistableModel(THREE_NODES, frozenset({0}))
    v = is_balanced(m1, (0, 0, 0))
    assert v.witnesses[0].kind == "exceptional" and v.witnesses[0].vertices == (2,)
    chk = basic_inequality(m, (2, -2), [0])
    assert (chk.lhs, chk.bound, chk.holds) == (24, 18, False)


def test_lower_equality_off_the_full_curve_is_not_stable():
    # a genus-2 curve made of two elliptic tails: one node, w = (1, 1)
    g = DualGraph.from_edges([1, 1], [(0, 1)])
    m = QuasistableModel(g, frozenset())
    # total 1: d_Z must lie in [0, 1] for each component
    assert is_stably_balanced(m, (1, 0)).status is Status.BALANCED
    v = is_stably_balanced(m, (1, 0))
    assert [w.vertices for w in v.witnesses] == [(1,)]


def test_genus_and_size_gates():
    with pytest.raises(GenusError):
        is_balanced(QuasistableModel(DualGraph.from_edges([1], []), frozenset()), (0,))
    big = DualGraph.from_edges([2] * 9, [(i, i + 1) for i in range(8)])
    with pytest.raises(SizeGateError):
        enumerate_balanced(big, 0)
    with pytest.raises(ValueError):
        is_balanced(QuasistableModel(THREE_NODES, frozenset()), (1, 2, 3))


def test_rational_cross_check_thousand_cases():
    rng = random.Random(2024)
    done = 0
    while done < 1000:
        g = random_connected(rng, 3, 4, 2)
        if arithmetic_genus(g) < 2:
            continue
        delta = frozenset(e for e in range(g.n_edges) if rng.random() < 0.4)
        m = QuasistableModel(g, delta)
        X = m.derived_graph
        total = rng.randint(-4, 8)
        box = balanced_box(X, total)
        d = [rng.randint(lo - 1, hi + 1) for lo, hi in box]
        if rng.random() < 0.8:
            for v in X.exceptional:
                d[v] = 1
        d[0] += total - sum(d)
        assert is_stably_balanced(m, d).status is rational_verdict(m, d), (g, delta, d)
        done += 1


@pytest.mark.parametrize("edges,genera", [
    ([(0, 1)] * 3, [1, 1]),
    ([(0, 1), (0, 1), (1, 1)], [0, 1]),
    ([(0, 1), (1, 2), (2, 0)], [1, 0, 1]),
    ([(0, 0), (0, 0)], [0]),
])
@pytest.mark.parametrize("total", [-1, 0, 1, 3])
def test_enumeration_matches_widened_box(edges, genera, total):
    base = DualGraph.from_edges(genera, edges)
    found = enumerate_balanced(base, total)
    for m in all_models(base):
        assert [d.values for d in found[m]] == widened_box_balanced(m, total)


def test_stably_only_filter_and_parallel():
    base = DualGraph.from_edges([1, 1], [(0, 1), (0, 1)])
    every = enumerate_balanced(base, 1)
    stable = enumerate_balanced(base, 1, stably_only=True)
    for m in every:
        assert stable[m] == [d for d in every[m] if is_stably_balanced(m, d).stably_balanced]
    assert enumerate_balanced(base, 1, parallel=True) == every


def _stable_graphs():
    for n, edges in all_multigraphs(4, 6):
        g = stabilized(n, edges)
        if is_stable(g):
            yield g


def test_canonical_multiples_are_stably_balanced():
    # d = l w / r whenever r divides every l w_v
    for g in _stable_graphs():
        m = QuasistableModel(g, frozenset())
        w = [omega_degree(g, v) for v in g.vertices]
        for r in range(2, 6):
            for l in range(0, 2 * r + 1):
                if any((l * x) % r for x in w):
                    continue
                d = [l * x // r for x in w]
                assert is_stably_balanced(m, d).stably_balanced, (g, r, l)


@given(models(max_v=3, max_e=4, max_genus=2, min_genus_total=2), st.integers(-3, 6), st.integers(-2, 2), st.data())
def test_verdict_invariant_under_canonical_shift(model, total, t, data):
    X = model.derived_graph
    w = [omega_degree(X, v) for v in X.vertices]
    box = balanced_box(X, total)
    d = [data.draw(st.integers(lo - 1, hi + 1)) for lo, hi in box]
    for v in X.exceptional:
        d[v] = 1
    shifted = [a + t * b for a, b in zip(d, w)]
    assert is_stably_balanced(model, d).status is is_stably_balanced(model, shifted).status


def test_degree_shift_is_a_bijection_of_inventories():
    for base in [THREE_NODES, DualGraph.from_edges([0, 1], [(0, 1), (0, 1), (0, 0)])]:
        gg = 2 * arithmetic_genus(base) - 2
        lo, hi = enumerate_balanced(base, 1), enumerate_balanced(base, 1 + gg)
        for m in lo:
            w = [omega_degree(m.derived_graph, v) for v in m.derived_graph.vertices]
            assert sorted(tuple(a + b for a, b in zip(d, w)) for d in lo[m]) == [d.values for d in hi[m]]


@pytest.mark.parametrize("loops,genus", [(1, 1), (2, 0), (2, 1), (3, 0)])
@pytest.mark.parametrize("total", [-2, 0, 1, 5])
def test_irreducible_curves_everything_is_stably_balanced(loops, genus, total):
    base = DualGraph.from_edges([genus], [(0, 0)] * loops)
    if arithmetic_genus(base) < 2:
        pytest.skip("genus below 2")
    for m in all_models(base):
        X = m.derived_graph
        d = [total - len(m.delta)] + [1] * len(m.delta)
        assert is_stably_balanced(m, d).stably_balanced
        assert X.n_vertices == 1 + len(m.delta)


@given(models(max_v=4, max_e=5, max_genus=2, min_genus_total=2), st.integers(-3, 6), st.data())
def test_violations_come_in_complementary_pairs(model, total, data):
    X = model.derived_graph
    if X.n_vertices < 2:
        return
    box = balanced_box(X, total)
    d = [data.draw(st.integers(lo - 2, hi + 2)) for lo, hi in box]
    d[0] += total - sum(d)
    for size in range(1, X.n_vertices):
        for Z in itertools.combinations(range(X.n_vertices), size):
            Zc = [v for v in X.vertices if v not in Z]
            a, b = basic_inequality(model, d, Z), basic_inequality(model, d, Zc)
            assert a.lhs == -b.lhs and a.bound == b.bound


def test_square_roots_are_balanced_on_the_three_node_curve():
    rep = r2_identity_check(THREE_NODES, 1)
    assert rep.ok and rep.strata_checked == 4


def test_square_root_identity_with_no_blow_up():
    # Delta empty: 2 d_Z = l w_Z for every Z
    g = DualGraph.from_edges([1, 2], [(0, 1), (0, 1)])
    rep = r2_identity_check(g, 2)
    assert rep.ok
    m = QuasistableModel(g, frozenset({0}))
    assert exceptional_contacts(m.derived_graph, {0}) == 1
    assert k_Z(m.derived_graph, {0}) == 2
