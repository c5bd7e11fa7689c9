"""Hypothesis strategies for dual graphs and related data."""
from __future__ import annotations

from hypothesis import strategies as st

from rootstrata.graph import DualGraph, QuasistableModel, arithmetic_genus


@st.composite
def dual_graphs(draw, max_v=4, max_e=6, max_genus=2, min_genus_total=None, markings=False):
    n = draw(st.integers(1, max_v))
    tree = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    extra_max = max(0, max_e - len(tree))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=extra_max))
    genera = draw(st.lists(st.integers(0, max_genus), min_size=n, max_size=n))
    marks = None
    if markings:
        marks = [
            {f"p{v}_{i}": m for i, m in enumerate(draw(st.lists(st.integers(-3, 3), max_size=2)))}
            for v in range(n)
        ]
    graph = DualGraph.from_edges(genera, tree + extra, marks)
    if min_genus_total is not None and arithmetic_genus(graph) < min_genus_total:
        genera = list(genera)
        genera[0] += min_genus_total - arithmetic_genus(graph)
        graph = DualGraph.from_edges(genera, tree + extra, marks)
    return graph


@st.composite
def models(draw, **kw):
    base = draw(dual_graphs(**kw))
    delta = draw(st.sets(st.integers(0, max(0, base.n_edges - 1)), max_size=base.n_edges))
    return QuasistableModel(base, frozenset(e for e in delta if e < base.n_edges))
