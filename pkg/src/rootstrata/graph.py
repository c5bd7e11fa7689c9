"""Dual graphs of nodal curves, blow-ups at sets of nodes, and omega-degrees.

Vertices are components of the normalization, edges are nodes.  Loops and
parallel edges are allowed.  Every edge is stored as ``(tail, head)`` with
``tail <= head``; that orientation is shared by every other module (the
boundary operator, weightings, twisters).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Multigraph:
    """Bare multigraph, possibly disconnected.  Used for the derived views
    ``Gamma_C minus Delta`` and ``Sigma_X``."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("negative vertex count")
        canon = []
        for e in self.edges:
            a, b = (int(e[0]), int(e[1]))
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise ValueError(f"edge {e} refers to an unknown vertex")
            canon.append((a, b) if a <= b else (b, a))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def component_labels(self) -> tuple[int, ...]:
        """Component index of every vertex, numbered by smallest member."""
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        roots: dict[int, int] = {}
        labels = []
        for v in range(self.n_vertices):
            labels.append(roots.setdefault(find(v), len(roots)))
        return tuple(labels)

    def n_components(self) -> int:
        return len(set(self.component_labels()))

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and self.n_components() == 1

    def valence(self, v: int) -> int:
        """Number of half-edges at ``v``; a loop counts twice."""
        return sum((a == v) + (b == v) for a, b in self.edges)

    def incident_edges(self, v: int) -> list[int]:
        return [i for i, (a, b) in enumerate(self.edges) if v in (a, b)]


def betti1(graph: Multigraph) -> int:
    """First Betti number ``E - V + #components``."""
    return graph.n_edges - graph.n_vertices + graph.n_components()


@dataclass(frozen=True)
class DualGraph(Multigraph):
    """Genus-labelled connected multigraph with markings.

    ``markings[v]`` is a tuple of ``(label, m)`` pairs: the marked points
    lying on component ``v`` and the coefficient each contributes to the
    twisted line bundle ``omega^l(sum m_i sigma_i)``.  ``exceptional`` lists
    vertices that are exceptional components of a blow-up (genus 0,
    valence 2); it is empty for a base graph.
    """

    genera: tuple[int, ...] = ()
    markings: tuple[tuple[tuple[str, int], ...], ...] = ()
    exceptional: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        super().__post_init__()
        genera = tuple(int(g) for g in self.genera) or (0,) * self.n_vertices
        if len(genera) != self.n_vertices:
            raise ValueError("one genus per vertex is required")
        if any(g < 0 for g in genera):
            raise ValueError("genera must be nonnegative")
        markings = self.markings or ((),) * self.n_vertices
        if len(markings) != self.n_vertices:
            raise ValueError("one marking tuple per vertex is required")
        markings = tuple(tuple((str(k), int(m)) for k, m in mk) for mk in markings)
        object.__setattr__(self, "genera", genera)
        object.__setattr__(self, "markings", markings)
        object.__setattr__(self, "exceptional", frozenset(self.exceptional))
        if not self.is_connected():
            raise ValueError("dual graph must be connected")

    @classmethod
    def from_edges(
        cls,
        genera: Sequence[int],
        edges: Iterable[Sequence[int]],
        markings: Sequence[Mapping[str, int]] | None = None,
    ) -> "DualGraph":
        mk = None
        if markings is not None:
            mk = tuple(tuple(sorted(m.items())) for m in markings)
        return cls(len(genera), tuple(tuple(e) for e in edges), tuple(genera), mk or ())

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def non_exceptional(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if v not in self.exceptional)

    def marking_total(self, v: int) -> int:
        return sum(m for _, m in self.markings[v])

    @property
    def normalization_genus(self) -> int:
        """``g^nu``: sum of the geometric genera."""
        return sum(self.genera)

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": v, "genus": self.genera[v], "markings": dict(self.markings[v])}
                for v in self.vertices
            ],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DualGraph":
        verts = sorted(data["vertices"], key=lambda x: x["id"])
        if [x["id"] for x in verts] != list(range(len(verts))):
            raise ValueError("vertex ids must be dense from 0")
        genera = [int(x.get("genus", 0)) for x in verts]
        marks = [{str(k): int(m) for k, m in (x.get("markings") or {}).items()} for x in verts]
        edges = []
        for e in data.get("edges", []):
            if len(e) != 2:
                raise ValueError(f"malformed edge {e!r}")
            edges.append((int(e[0]), int(e[1])))
        return cls.from_edges(genera, edges, marks)


def arithmetic_genus(graph: DualGraph) -> int:
    return graph.normalization_genus + betti1(graph)


@dataclass(frozen=True)
class Multidegree:
    """Integer vector indexed by the vertices of ``graph``."""

    graph: DualGraph
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(x) for x in self.values)
        if len(values) != self.graph.n_vertices:
            raise ValueError(
                f"multidegree has {len(values)} entries, graph has {self.graph.n_vertices} vertices"
            )
        object.__setattr__(self, "values", values)

    @property
    def total(self) -> int:
        return sum(self.values)

    def on(self, vertices: Iterable[int]) -> int:
        return sum(self.values[v] for v in vertices)

    def _check(self, other: "Multidegree"):
        if other.graph != self.graph:
            raise ValueError("multidegrees live on different graphs")

    def __add__(self, other: "Multidegree") -> "Multidegree":
        self._check(other)
        return Multidegree(self.graph, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Multidegree") -> "Multidegree":
        self._check(other)
        return Multidegree(self.graph, tuple(a - b for a, b in zip(self.values, other.values)))

    def scaled(self, t: int) -> "Multidegree":
        return Multidegree(self.graph, tuple(t * a for a in self.values))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class Subcurve:
    """Nonempty proper subset of the vertices of a graph."""

    vertices: frozenset

    def __init__(self, graph: Multigraph, vertices: Iterable[int]):
        vs = frozenset(int(v) for v in vertices)
        if not vs:
            raise ValueError("a subcurve must be nonempty")
        if any(not 0 <= v < graph.n_vertices for v in vs):
            raise ValueError("subcurve refers to an unknown vertex")
        if len(vs) == graph.n_vertices:
            raise ValueError("a subcurve must be a proper subset")
        object.__setattr__(self, "vertices", vs)

    def complement(self, graph: Multigraph) -> "Subcurve":
        return Subcurve(graph, set(range(graph.n_vertices)) - self.vertices)

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __contains__(self, v):
        return v in self.vertices


def _vertex_set(Z) -> frozenset:
    return Z.vertices if isinstance(Z, Subcurve) else frozenset(Z)


def omega_degree(graph: DualGraph, v: int, l: int = 1, include_markings: bool = False) -> int:
    deg = l * (2 * graph.genera[v] - 2 + graph.valence(v))
    if include_markings:
        deg += graph.marking_total(v)
    return deg


def omega_multidegree(graph: DualGraph, l: int = 1, include_markings: bool = False) -> Multidegree:
    """Multidegree of ``omega^l`` (twisted by the markings if requested)."""
    return Multidegree(
        graph, tuple(omega_degree(graph, v, l, include_markings) for v in graph.vertices)
    )


def k_Z(graph: Multigraph, Z) -> int:
    """Number of nodes joining ``Z`` to its complement."""
    zs = _vertex_set(Z)
    return sum((a in zs) != (b in zs) for a, b in graph.edges)


def w_Z(graph: DualGraph, Z, l: int = 1) -> int:
    """Degree of ``omega^l`` on ``Z``, summed vertex by vertex (so it makes
    sense for disconnected ``Z`` too)."""
    return sum(omega_degree(graph, v, l) for v in _vertex_set(Z))


def induced_subgraph(graph: Multigraph, Z) -> Multigraph:
    zs = sorted(_vertex_set(Z))
    index = {v: i for i, v in enumerate(zs)}
    edges = tuple((index[a], index[b]) for a, b in graph.edges if a in index and b in index)
    return Multigraph(len(zs), edges)


@dataclass(frozen=True)
class QuasistableModel:
    """The blow-up ``X`` of the curve with dual graph ``base`` at the nodes ``delta``."""

    base: DualGraph
    delta: frozenset

    def __post_init__(self):
        delta = frozenset(int(e) for e in self.delta)
        bad = [e for e in delta if not 0 <= e < self.base.n_edges]
        if bad:
            raise ValueError(f"unknown edge ids {sorted(bad)}")
        object.__setattr__(self, "delta", delta)

    @property
    def delta_mask(self) -> int:
        return sum(1 << e for e in self.delta)

    @cached_property
    def exceptional_vertex(self) -> dict[int, int]:
        """Base edge id -> vertex id of its exceptional component in ``derived_graph``."""
        n = self.base.n_vertices
        return {e: n + i for i, e in enumerate(sorted(self.delta))}

    @cached_property
    def derived_graph(self) -> DualGraph:
        """``Gamma_X``: every edge of ``delta`` subdivided by a genus-0 vertex.

        Edge ``e`` in ``delta`` with ends ``(a, b)`` keeps id ``e`` as
        ``(a, E_e)``; the second half ``(b, E_e)`` is appended after the
        base edges, in increasing order of ``e``.
        """
        base = self.base
        edges = list(base.edges)
        extra = []
        for e in sorted(self.delta):
            a, b = base.edges[e]
            ex = self.exceptional_vertex[e]
            edges[e] = (a, ex)
            extra.append((b, ex))
        m = len(self.delta)
        return DualGraph(
            base.n_vertices + m,
            tuple(edges + extra),
            base.genera + (0,) * m,
            base.markings + ((),) * m,
            frozenset(self.exceptional_vertex.values()),
        )

    @cached_property
    def tilde_graph(self) -> Multigraph:
        """``Gamma_C minus Delta``: dual graph of the non-exceptional part."""
        return Multigraph(
            self.base.n_vertices,
            tuple(e for i, e in enumerate(self.base.edges) if i not in self.delta),
        )

    @cached_property
    def sigma_graph(self) -> Multigraph:
        """``Sigma_X``: components of ``X~`` joined by the exceptional components."""
        labels = self.tilde_graph.component_labels()
        return Multigraph(
            len(set(labels)),
            tuple((labels[self.base.edges[e][0]], labels[self.base.edges[e][1]]) for e in sorted(self.delta)),
        )

    @property
    def n_tilde_components(self) -> int:
        return self.tilde_graph.n_components()

    def sigma_betti1(self) -> int:
        b = betti1(self.sigma_graph)
        assert b == betti1(self.base) - betti1(self.tilde_graph)
        return b


def blow_up(base: DualGraph, delta: Iterable[int]) -> QuasistableModel:
    return QuasistableModel(base, frozenset(delta))


def sigma_graph(model: QuasistableModel) -> Multigraph:
    return model.sigma_graph


def sigma_betti1(model: QuasistableModel) -> int:
    return model.sigma_betti1()
