"""Limit r-th roots over a fixed nodal curve, counted stratum by stratum.

A limit root is recorded by its weighted subgraph: the blown-up nodes
``Delta`` and, for each of them, the vanishing orders ``(u, v)`` with
``u + v = r``.  ``u`` sits on the head of the edge, ``v`` on its tail, which
identifies weighted subgraphs with 1-chains in ``C^1(Gamma, Z/r)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .exceptions import InconsistentClassError
from .graph import (
    DualGraph,
    Multidegree,
    QuasistableModel,
    arithmetic_genus,
    betti1,
    omega_multidegree,
)
from .homology import EdgeChain, ResidueVector, boundary, iter_boundary_solutions


@dataclass(frozen=True)
class FactoredCount:
    """``coeff * r**(2 * jacobian_genus)``.

    The Jacobian factor ``r^{2 g^nu}`` is kept symbolic so that counts can be
    compared without fixing the genera of the components.
    """

    coeff: int
    r: int
    jacobian_genus: int

    @property
    def value(self) -> int:
        return self.coeff * self.r ** (2 * self.jacobian_genus)

    def __add__(self, other: "FactoredCount") -> "FactoredCount":
        if (self.r, self.jacobian_genus) != (other.r, other.jacobian_genus):
            raise ValueError("cannot add counts over different bases")
        return FactoredCount(self.coeff + other.coeff, self.r, self.jacobian_genus)

    def __mul__(self, k: int) -> "FactoredCount":
        return FactoredCount(self.coeff * k, self.r, self.jacobian_genus)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.coeff}*{self.r}^(2g^nu)"

    def to_json(self) -> dict:
        return {"coeff": self.coeff, "exp": "2g^nu", "value": self.value}


@dataclass(frozen=True)
class WeightedSubgraph:
    """Weights ``u_e`` in ``0..r-1`` per edge; 0 means the node is not blown up."""

    graph: DualGraph
    r: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != self.graph.n_edges:
            raise ValueError("one weight per edge is required")
        if self.weights and (min(self.weights) < 0 or max(self.weights) >= self.r):
            raise ValueError("weights must lie in 0..r-1")
        mask = 0
        for i, u in enumerate(self.weights):
            if u:
                mask |= 1 << i
        object.__setattr__(self, "_mask", mask)

    @classmethod
    def from_chain(cls, graph: DualGraph, chain: EdgeChain) -> "WeightedSubgraph":
        return cls(graph, chain.modulus, chain.values)

    @property
    def delta(self) -> frozenset:
        return frozenset(i for i, u in enumerate(self.weights) if u)

    @property
    def delta_mask(self) -> int:
        return self._mask

    @cached_property
    def model(self) -> QuasistableModel:
        return QuasistableModel(self.graph, self.delta)

    def as_chain(self) -> EdgeChain:
        return EdgeChain(self.r, self.weights)

    def half_edge_weights(self) -> list[tuple[int, int, int, int, int]]:
        """``(edge, head, u, tail, v)`` for each blown-up edge."""
        out = []
        for e in sorted(self.delta):
            a, b = self.graph.edges[e]
            u = self.weights[e]
            out.append((e, b, u, a, self.r - u))
        return out

    def vertex_weight_sums(self) -> tuple[int, ...]:
        """Sum of the weights on the half-edges at each vertex (not reduced)."""
        sums = [0] * self.graph.n_vertices
        for _, head, u, tail, v in self.half_edge_weights():
            sums[head] += u
            sums[tail] += v
        return tuple(sums)

    def satisfies(self, target: ResidueVector) -> bool:
        """Condition (C2) against ``target``, checked vertex by vertex."""
        r = self.r
        return all((s - t) % r == 0 for s, t in zip(self.vertex_weight_sums(), target.values))

    def sort_key(self):
        return (self.delta_mask, self.weights)


def spin_class(graph: DualGraph, r: int, l: int, use_markings: bool = True) -> ResidueVector:
    """Residues of ``deg omega^l(sum m_i sigma_i)`` on each component."""
    deg = omega_multidegree(graph, l, include_markings=use_markings)
    if deg.total % r:
        raise InconsistentClassError(
            f"r = {r} does not divide the total degree {deg.total} "
            f"(residue {deg.total % r})"
        )
    return ResidueVector(r, deg.values)


def admissible_weightings(graph: DualGraph, r: int, target: ResidueVector) -> list[WeightedSubgraph]:
    """Weighted subgraphs satisfying (C1) and (C2) for ``target``.

    Empty when the entries of ``target`` do not sum to 0 mod r.
    """
    if target.modulus != r:
        raise ValueError("target modulus differs from r")
    return [WeightedSubgraph(graph, r, c) for c in iter_boundary_solutions(graph, target)]


def limit_root_multidegree(
    weighting: WeightedSubgraph, l: int, include_markings: bool = False
) -> Multidegree:
    """Multidegree on the blown-up curve of the root with this weighting.

    Non-exceptional ``v`` gets ``(deg_v N - weights at v) / r`` with
    ``N = omega^l``; exceptional components get 1.
    """
    graph, r = weighting.graph, weighting.r
    model = weighting.model
    N = omega_multidegree(graph, l, include_markings)
    sums = weighting.vertex_weight_sums()
    values = []
    for v in graph.vertices:
        num = N[v] - sums[v]
        if num % r:
            raise InconsistentClassError(
                f"degree on component {v} is not divisible by r = {r}; (C2) fails"
            )
        values.append(num // r)
    values += [1] * len(weighting.delta)
    d = Multidegree(model.derived_graph, values)
    assert d.total * r == N.total
    return d


@dataclass
class StratumRecord:
    weighting: WeightedSubgraph
    model: QuasistableModel
    root_count: FactoredCount
    multiplicity: int
    aut_order: int
    smooth_point: bool
    limit_root_multidegree: Optional[Multidegree] = None
    balanced: Optional[object] = None  # BalancedVerdict, filled for spin data

    @property
    def gamma(self) -> int:
        return self.model.n_tilde_components

    @property
    def root_count_exponent(self) -> int:
        """Exponent of ``r`` in the materialized root count."""
        return 2 * self.root_count.jacobian_genus + betti1(self.model.tilde_graph)

    def to_json(self) -> dict:
        wt = self.weighting
        out = {
            "delta": sorted(wt.delta),
            "weights": [[u, v] for _, _, u, _, v in wt.half_edge_weights()],
            "ends": [[head, tail] for _, head, _, tail, _ in wt.half_edge_weights()],
            "root_count_exp": self.root_count_exponent,
            "root_count": self.root_count.to_json(),
            "multiplicity": self.multiplicity,
            "aut_order": self.aut_order,
            "smooth": self.smooth_point,
        }
        if self.limit_root_multidegree is not None:
            out["multidegree"] = list(self.limit_root_multidegree.values)
        if self.balanced is not None:
            out["balanced"] = self.balanced.status.value
        return out


class _ModelInfo:
    """Per-Delta quantities shared by every weighting with that support."""

    def __init__(self, graph: DualGraph, delta: frozenset, r: int):
        self.model = QuasistableModel(graph, delta)
        self.b1_tilde = betti1(self.model.tilde_graph)
        self.b1_sigma = self.model.sigma_betti1()
        self.gamma = self.model.n_tilde_components
        self.root_count = FactoredCount(r ** self.b1_tilde, r, graph.normalization_genus)


def stratum_of(weighting: WeightedSubgraph, _info: _ModelInfo | None = None) -> StratumRecord:
    graph, r = weighting.graph, weighting.r
    info = _info or _ModelInfo(graph, weighting.delta, r)
    return StratumRecord(
        weighting=weighting,
        model=info.model,
        root_count=info.root_count,
        multiplicity=r ** info.b1_sigma,
        aut_order=r ** info.gamma,
        smooth_point=info.b1_sigma == 0,
    )


@dataclass
class FiberReport:
    graph: DualGraph
    r: int
    target: ResidueVector
    strata: list[StratumRecord]
    l: Optional[int] = None
    use_markings: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def length(self) -> FactoredCount:
        """``sum multiplicity * root_count`` over all strata."""
        coeff = sum(s.multiplicity * s.root_count.coeff for s in self.strata)
        return FactoredCount(coeff, self.r, self.graph.normalization_genus)

    @property
    def expected_length(self) -> int:
        return self.r ** (2 * arithmetic_genus(self.graph))

    def to_json(self) -> dict:
        length = self.length
        out = {
            "r": self.r,
            "class": list(self.target.values),
            "genus": arithmetic_genus(self.graph),
            "normalization_genus": self.graph.normalization_genus,
            "total_length": {
                "coeff": length.value // self.expected_length,
                "exp": "2g",
                "factored": length.to_json(),
            },
            "strata": [s.to_json() for s in self.strata],
        }
        if self.l is not None:
            out["l"] = self.l
        return out


def fiber_inventory(
    graph: DualGraph,
    r: int,
    target: ResidueVector | None = None,
    l: int | None = None,
    use_markings: bool = False,
) -> FiberReport:
    """Every stratum of the fiber of limit r-th roots over ``graph``.

    Pass either an explicit residue class ``target`` or spin data ``l`` (the
    class of ``omega^l``, twisted by the markings if ``use_markings``).  With
    spin data each stratum also carries its multidegree and, when ``g >= 2``,
    its balancedness verdict.
    """
    if (target is None) == (l is None):
        raise ValueError("give exactly one of target or l")
    if l is not None:
        target = spin_class(graph, r, l, use_markings)
    if target.modulus != r or len(target) != graph.n_vertices:
        raise ValueError("target does not match the graph or r")
    if target.total() != 0:
        raise InconsistentClassError(
            f"class entries sum to {target.total()} mod {r}; no weighted subgraph exists"
        )
    check_balanced = l is not None and arithmetic_genus(graph) >= 2
    if check_balanced:
        from .balanced import is_stably_balanced

    infos: dict[int, _ModelInfo] = {}
    strata = []
    for wt in admissible_weightings(graph, r, target):
        info = infos.get(wt.delta_mask)
        if info is None:
            info = infos[wt.delta_mask] = _ModelInfo(graph, wt.delta, r)
        wt.__dict__["model"] = info.model
        rec = stratum_of(wt, info)
        if l is not None:
            rec.limit_root_multidegree = limit_root_multidegree(wt, l, use_markings)
            if check_balanced:
                rec.balanced = is_stably_balanced(info.model, rec.limit_root_multidegree)
        strata.append(rec)
    strata.sort(key=lambda s: s.weighting.sort_key())
    report = FiberReport(graph, r, target, strata, l, use_markings)
    assert report.length.value == report.expected_length, "total length differs from r^(2g)"
    return report


def check_c2(weighting: WeightedSubgraph, target: ResidueVector) -> bool:
    """(C2) via the boundary operator, for cross-checking ``satisfies``."""
    return boundary(weighting.graph, weighting.as_chain()) == target
