"""The fiber of the compactified Picard scheme side: twister multidegrees,
the strata of the closure of r-spin curves over a fixed stable curve, the
two-component dimension dichotomy, and regularity diagnostics for the
comparison map from limit roots.

A multidegree ``t`` on a quasistable model is *admissible* when

* ``t = r`` on every exceptional component,
* ``t_v = -l w_v (mod r)`` on every other component,
* ``2 |t_Z| <= k_Z r`` for every subcurve ``Z``,

and it is *realizable* when it is the multidegree of a twister, i.e. the
divergence of an integer flow ``f_e = (a_head - a_tail) / h_e`` coming from
integer potentials ``a`` and positive integers ``h``.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .balanced import BalancedVerdict, _two_g_minus_two, all_models, check_size, is_stably_balanced
from .exceptions import InconsistentClassError, SizeGateError
from .graph import (
    DualGraph,
    Multidegree,
    QuasistableModel,
    arithmetic_genus,
    betti1,
    k_Z,
    omega_degree,
)
from .strata import FactoredCount, StratumRecord, fiber_inventory
from .subcurves import MAX_VERTICES, membership, subcurve_table


@dataclass(frozen=True)
class Dimension:
    value: int
    exact: bool

    def to_json(self) -> dict:
        return {"exact" if self.exact else "bound": self.value}

    def __str__(self):
        return str(self.value) if self.exact else f"<={self.value}"


@dataclass(frozen=True)
class TwisterDegree:
    model: QuasistableModel
    t: Multidegree
    r: int
    l: int

    def root_multidegree(self) -> Multidegree:
        """``d`` with ``r d = l w + t`` off the exceptional components and 1 on them."""
        graph = self.model.derived_graph
        values = []
        for v in graph.vertices:
            if v in graph.exceptional:
                values.append(1)
            else:
                num = self.l * omega_degree(graph, v) + self.t[v]
                assert num % self.r == 0
                values.append(num // self.r)
        return Multidegree(graph, values)


def admissibility_violations(model: QuasistableModel, t, r: int, l: int) -> list[str]:
    """Direct subcurve-by-subcurve check of the admissibility clauses.

    Deliberately loop-based; the enumerator uses the vectorized tables.
    """
    graph = model.derived_graph
    t = tuple(t)
    out = []
    if sum(t) != 0:
        out.append("total")
    for v in graph.vertices:
        if v in graph.exceptional:
            if t[v] != r:
                out.append(f"exceptional:{v}")
        elif (t[v] + l * omega_degree(graph, v)) % r:
            out.append(f"residue:{v}")
    n = graph.n_vertices
    for size in range(1, n):
        for Z in itertools.combinations(range(n), size):
            if 2 * abs(sum(t[v] for v in Z)) > k_Z(graph, Z) * r:
                out.append(f"subcurve:{Z}")
    return out


ENUMERATION_LIMIT = 6  # vertices; above this realizability goes through the MILP


@lru_cache(maxsize=256)
def _order_table(graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Supply conditions for every weak order of the vertices.

    A weak order (the order of the potentials) makes every edge between
    distinct levels carry at least one unit of flow towards the lower end.
    By Gale's theorem ``t`` is the divergence of such a flow iff
    ``t_S <= -out(S)`` for every set ``S`` closed under going up an edge.
    Returns the stacked rows, right-hand sides and the start of each
    order's block; orders inducing the same edge pattern are merged.
    """
    n = graph.n_vertices
    edges = np.array([(a, b) for a, b in graph.edges if a != b], dtype=np.int64).reshape(-1, 2)
    levels = np.array(list(itertools.product(range(n), repeat=n)), dtype=np.int64)
    signs = np.sign(levels[:, edges[:, 0]] - levels[:, edges[:, 1]])
    patterns = np.unique(signs, axis=0)
    M = membership(n)
    rows, rhs, starts = [], [], []
    for pat in patterns:
        closed = np.ones(M.shape[0], dtype=bool)
        out = np.zeros(M.shape[0], dtype=np.int64)
        for (a, b), sg in zip(edges, pat):
            if sg == 0:
                continue
            hi, lo = (a, b) if sg > 0 else (b, a)
            closed &= M[:, lo] <= M[:, hi]
            out += M[:, hi] & (1 - M[:, lo])
        starts.append(len(rhs))
        rows.extend(M[closed])
        rhs.extend(-out[closed])
    return np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64), np.array(starts)


def _realizable_by_orders(graph, T: np.ndarray) -> np.ndarray:
    if graph.n_vertices == 1:
        return T[:, 0] == 0
    rows, rhs, starts = _order_table(graph)
    out = np.zeros(len(T), dtype=bool)
    step = max(1, 4_000_000 // max(1, len(rows)))
    for i in range(0, len(T), step):
        block = T[i:i + step]
        ok = (rows @ block.T <= rhs[:, None]).astype(np.int8)
        out[i:i + step] = np.minimum.reduceat(ok, starts, axis=0).any(axis=0)
    out &= T.sum(axis=1) == 0
    return out


def _realizable_by_milp(graph, t) -> bool:
    """Integer program: potentials ``a`` in ``0..n-1``, integer flows ``x`` with
    divergence ``t`` and, per edge, exactly one of head lower / tail lower /
    tie.  The lower endpoint receives the flow."""
    n = graph.n_vertices
    edges = [(a, b) for a, b in graph.edges if a != b]
    m = len(edges)
    big = max(1, sum(x for x in t if x > 0))
    # variable layout: a (n) | x (m) | p (m) | q (m)
    nv = n + 3 * m
    X = lambda i: n + i
    P = lambda i: n + m + i
    Q = lambda i: n + 2 * m + i
    rows, lo, hi = [], [], []

    def add(coeffs, lb, ub):
        row = np.zeros(nv)
        for j, c in coeffs:
            row[j] += c
        rows.append(row)
        lo.append(lb)
        hi.append(ub)

    for v in range(n):
        coeffs = [(X(i), 1) for i, (a, b) in enumerate(edges) if b == v]
        coeffs += [(X(i), -1) for i, (a, b) in enumerate(edges) if a == v]
        add(coeffs, t[v], t[v])
    for i, (a, b) in enumerate(edges):
        add([(P(i), 1), (Q(i), 1)], -np.inf, 1)
        add([(a, 1), (b, -1), (P(i), -n)], 1 - n, np.inf)
        add([(b, 1), (a, -1), (Q(i), -n)], 1 - n, np.inf)
        add([(a, 1), (b, -1), (P(i), -n), (Q(i), -n)], -np.inf, 0)
        add([(b, 1), (a, -1), (P(i), -n), (Q(i), -n)], -np.inf, 0)
        add([(X(i), 1), (P(i), -1), (Q(i), big)], 0, np.inf)
        add([(X(i), 1), (P(i), -big), (Q(i), 1)], -np.inf, 0)
    lb = np.array([0] * n + [-big] * m + [0] * (2 * m), dtype=float)
    ub = np.array([n - 1] * n + [big] * m + [1] * (2 * m), dtype=float)
    res = milp(
        c=np.zeros(nv),
        constraints=LinearConstraint(np.array(rows), lo, hi),
        integrality=np.ones(nv),
        bounds=Bounds(lb, ub),
    )
    return res.status == 0


def is_realizable(graph, t, method: str = "auto") -> bool:
    """Whether ``t`` is the multidegree of a twister on a curve with dual graph ``graph``.

    ``method`` is ``"orders"`` (exact enumeration of potential orders),
    ``"milp"`` or ``"auto"`` (orders up to ``ENUMERATION_LIMIT`` vertices).
    """
    if method not in ("auto", "orders", "milp"):
        raise ValueError(f"unknown method {method!r}")
    t = [int(x) for x in t]
    if len(t) != graph.n_vertices:
        raise ValueError("twister length does not match the vertex count")
    if sum(t) != 0:
        return False
    if not any(t):
        return True
    if all(a == b for a, b in graph.edges):
        return False
    if method == "auto":
        method = "orders" if graph.n_vertices <= ENUMERATION_LIMIT else "milp"
    if method == "orders":
        return bool(_realizable_by_orders(graph, np.array([t], dtype=np.int64))[0])
    return _realizable_by_milp(graph, t)


def _twisters_on_model(args) -> list[TwisterDegree]:
    model, r, l, require_realizable = args
    graph = model.derived_graph
    ranges = []
    for v in graph.vertices:
        if v in graph.exceptional:
            ranges.append([r])
            continue
        half = (k_Z(graph, (v,)) * r) // 2
        res = (-l * omega_degree(graph, v)) % r
        start = -half + (res + half) % r
        ranges.append(list(range(start, half + 1, r)))
    *head, last = ranges
    last_set = set(last)
    rows = []
    for pre in itertools.product(*head):
        x = -sum(pre)
        if x in last_set:
            rows.append(pre + (x,))
    if not rows:
        return []
    T = np.array(rows, dtype=np.int64)
    tab = subcurve_table(graph)
    if tab.M.shape[0]:
        TZ = tab.M @ T.T
        ok = np.all(2 * np.abs(TZ) <= (tab.k * r)[:, None], axis=0)
        T = T[ok]
    if require_realizable and len(T):
        if graph.n_vertices <= ENUMERATION_LIMIT:
            T = T[_realizable_by_orders(graph, T)]
        else:
            T = T[[is_realizable(graph, row, "milp") for row in T]]
    return [TwisterDegree(model, Multidegree(graph, tuple(int(x) for x in row)), r, l) for row in T]


def twister_candidates(
    base: DualGraph, delta, r: int, l: int, require_realizable: bool = True
) -> list[TwisterDegree]:
    """Admissible (and by default realizable) twister multidegrees on the
    blow-up of ``base`` at ``delta``, in lexicographic order."""
    _two_g_minus_two(base)
    model = QuasistableModel(base, frozenset(delta))
    if model.derived_graph.n_vertices > MAX_VERTICES:
        raise SizeGateError("derived graph too large for twister enumeration")
    return _twisters_on_model((model, r, l, require_realizable))


@dataclass
class ShatStratum:
    twister: TwisterDegree
    multidegree: Multidegree
    verdict: BalancedVerdict
    point_count: FactoredCount  # r^(2g^nu + b1(Gamma minus Delta)): roots of one twister class
    limit_root_classes: int
    dimension: Dimension
    families: Optional[FactoredCount] = None
    in_family_of: list = field(default_factory=list)

    @property
    def model(self) -> QuasistableModel:
        return self.twister.model

    @property
    def limit_root_points(self) -> FactoredCount:
        """Images of balanced limit roots in this stratum."""
        return self.point_count * self.limit_root_classes

    def to_json(self) -> dict:
        out = {
            "delta": sorted(self.model.delta),
            "twister": list(self.twister.t.values),
            "multidegree": list(self.multidegree.values),
            "balanced": self.verdict.status.value,
            "limit_root_classes": self.limit_root_classes,
            "points": self.limit_root_points.to_json(),
            "dimension": self.dimension.to_json(),
        }
        if self.families is not None:
            out["families"] = self.families.to_json()
        if self.in_family_of:
            out["in_family_of"] = [list(x) for x in self.in_family_of]
        return out


@dataclass
class ShatFiberReport:
    base: DualGraph
    r: int
    l: int
    strata: list[ShatStratum]
    all_limit_roots_balanced: bool
    riass: Optional["RiassCase"] = None

    @property
    def isolated_points(self) -> FactoredCount:
        """Limit-root points lying on exactly 0-dimensional strata."""
        total = FactoredCount(0, self.r, self.base.normalization_genus)
        for s in self.strata:
            if s.dimension.exact and s.dimension.value == 0:
                total = total + s.limit_root_points
        return total

    def strata_of_dimension(self, dim: int, exact: bool = True) -> list[ShatStratum]:
        return [s for s in self.strata if s.dimension.value == dim and s.dimension.exact == exact]

    @property
    def dimension(self) -> Dimension:
        if not self.strata:
            return Dimension(0, True)
        top = max(s.dimension.value for s in self.strata)
        # nothing exceeds the b_1 bound, so one exact stratum at the top settles it
        return Dimension(top, any(s.dimension.exact for s in self.strata if s.dimension.value == top))

    def to_json(self) -> dict:
        out = {
            "r": self.r,
            "l": self.l,
            "genus": arithmetic_genus(self.base),
            "normalization_genus": self.base.normalization_genus,
            "all_limit_roots_balanced": self.all_limit_roots_balanced,
            "dimension": self.dimension.to_json(),
            "isolated_points": self.isolated_points.to_json(),
            "strata": [s.to_json() for s in self.strata],
        }
        if self.riass is not None:
            out["riass"] = self.riass.to_json()
        return out


def _two_component(base: DualGraph) -> bool:
    """Two smooth components meeting in k >= 1 nodes, no self-nodes."""
    return base.n_vertices == 2 and all(a != b for a, b in base.edges)


def shat_fiber(base: DualGraph, r: int, l: int, parallel: bool = False) -> ShatFiberReport:
    """Flat inventory of the fiber over ``base``, one stratum per (model, twister).

    Dimensions are exact when the whole fiber is finite (every limit root is
    balanced, or the curve is of compact type) and for two-component curves;
    otherwise the bound ``b_1(Gamma_C)`` is reported.
    """
    g = arithmetic_genus(base)
    gg = _two_g_minus_two(base)
    if (l * gg) % r:
        raise InconsistentClassError(f"r = {r} does not divide l(2g-2) = {l * gg}")
    check_size(base)
    inventory = fiber_inventory(base, r, l=l)
    all_balanced = all(rec.balanced.balanced for rec in inventory.strata)
    classes: dict[tuple, int] = {}
    for rec in inventory.strata:
        if rec.balanced.balanced:
            key = (rec.model.delta, rec.limit_root_multidegree.values)
            classes[key] = classes.get(key, 0) + 1

    models = all_models(base)
    jobs = [(m, r, l, True) for m in models]
    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            per_model = list(pool.map(_twisters_on_model, jobs))
    else:
        per_model = [_twisters_on_model(j) for j in jobs]

    b1 = betti1(base)
    two = _two_component(base)
    riass = None
    if two and base.n_edges >= 2:
        riass = riass_dimension(base.n_edges, r, l, omega_degree(base, 0), omega_degree(base, 1))
    fiber_finite = all_balanced or b1 == 0

    strata = []
    for model, twisters in zip(models, per_model):
        unit = FactoredCount(r ** betti1(model.tilde_graph), r, base.normalization_genus)
        for tw in twisters:
            d = tw.root_multidegree()
            verdict = is_stably_balanced(model, d)
            assert verdict.balanced
            n_classes = classes.get((model.delta, d.values), 0)
            if fiber_finite:
                dim = Dimension(0, True)
            else:
                dim = Dimension(b1, False)
            strata.append(ShatStratum(tw, d, verdict, unit, n_classes, dim))

    if two and not fiber_finite:
        _resolve_two_component(base, r, strata)
    return ShatFiberReport(base, r, l, strata, all_balanced, riass)


def _resolve_two_component(base: DualGraph, r: int, strata: list[ShatStratum]):
    """Exact dimensions for ``C = C_1 u C_2`` meeting in ``k`` nodes.

    On ``C`` itself a nonzero stably balanced twister ``(s, -s)`` comes from
    node flows ``b_1..b_k`` of one sign summing to ``s``; each choice gives
    a ``(C*)^{k-1}`` family of gluings, hence ``binom(|s|-1, k-1) r^{2g^nu}``
    families of dimension ``k - 1``.  Degenerating a gluing parameter blows
    the node up and moves degree 1 off the component that gains ``s``; a
    stratum on a blow-up lies in such a family when its restricted degrees
    match.
    """
    k = base.n_edges
    gnu = base.normalization_genus
    families = []
    for s in strata:
        if s.model.delta:
            continue
        t0 = s.twister.t.values
        if not any(t0):
            s.dimension = Dimension(0, True)
        elif s.verdict.stably_balanced:
            size = abs(t0[0])
            s.dimension = Dimension(k - 1, True)
            s.families = FactoredCount(math.comb(size - 1, k - 1), r, gnu)
            families.append(s)
        else:
            s.dimension = Dimension(k - 1, False)
    for s in strata:
        delta = s.model.delta
        if not delta:
            continue
        if len(delta) == k:
            # X~ disconnected: never stably balanced, no family reaches it
            if s.limit_root_classes:
                s.dimension = Dimension(0, True)
            continue
        d = s.multidegree.values
        for fam in families:
            d0 = fam.multidegree.values
            shift = len(delta)
            if fam.twister.t[0] > 0:
                match = (d[0], d[1]) == (d0[0] - shift, d0[1])
            else:
                match = (d[0], d[1]) == (d0[0], d0[1] - shift)
            if match:
                s.in_family_of.append(fam.twister.t.values)
        if s.in_family_of:
            s.dimension = Dimension(betti1(s.model.tilde_graph), True)
        elif s.limit_root_classes:
            s.dimension = Dimension(0, True)


@dataclass(frozen=True)
class Step2Witness:
    j: int
    s: int


def step2_exists(k: int, r: int, l: int, w1: int) -> Optional[Step2Witness]:
    """Smallest ``s = r j - l w1`` with ``k <= |s| < k r / 2`` (positive ``s`` on ties)."""
    if k < 2 or r < 2:
        raise ValueError("need k >= 2 and r >= 2")
    lw = l * w1
    lo = (lw - k * r) // r - 1
    hi = (lw + k * r) // r + 1
    found = []
    for j in range(lo, hi + 1):
        s = r * j - lw
        if k <= abs(s) and 2 * abs(s) < k * r:
            found.append((abs(s), -s, j))
    if not found:
        return None
    _, neg_s, j = min(found)
    return Step2Witness(j, -neg_s)


@dataclass(frozen=True)
class RiassCase:
    k: int
    r: int
    l: int
    residues: tuple[int, int]
    exception: Optional[str]
    witness: Optional[Step2Witness]

    @property
    def dimension(self) -> int:
        return 0 if self.exception else self.k - 1

    @property
    def step2_dimension(self) -> int:
        return 0 if self.witness is None else self.k - 1

    @property
    def agrees(self) -> bool:
        return self.dimension == self.step2_dimension

    @property
    def via(self) -> str:
        if self.exception:
            return f"exception_list({self.exception})"
        return f"step2_witness(s={self.witness.s}, j={self.witness.j})"

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "r": self.r,
            "residues": list(self.residues),
            "dimension": self.dimension,
            "exception": self.exception,
            "step2": None if self.witness is None else {"j": self.witness.j, "s": self.witness.s},
            "agrees": self.agrees,
        }
        return out


def riass_dimension(k: int, r: int, l: int, w1: int, w2: int) -> RiassCase:
    """Fiber dimension over two smooth components meeting in ``k`` nodes.

    ``k - 1`` except in four cases where it is 0; the Step-2 integer problem
    is solved alongside so the two answers can be compared.
    """
    if k < 2 or r < 2:
        raise ValueError("need k >= 2 and r >= 2")
    if (l * (w1 + w2)) % r:
        raise InconsistentClassError(f"l(w1 + w2) = {l * (w1 + w2)} is not divisible by r = {r}")
    res = ((l * w1) % r, (l * w2) % r)
    exception = None
    if r == 2:
        exception = "i"
    elif k == 2 and res == (0, 0):
        exception = "ii"
    elif k == 3 and r == 4 and res == (2, 2):
        exception = "iii"
    elif k == 4 and r == 3 and res == (0, 0):
        exception = "iv"
    return RiassCase(k, r, l, res, exception, step2_exists(k, r, l, w1))


@dataclass
class ChiReport:
    base: DualGraph
    r: int
    l: int
    strata: list[StratumRecord]
    shat: Optional[ShatFiberReport]

    @property
    def unbalanced(self) -> list[StratumRecord]:
        return [s for s in self.strata if not s.balanced.balanced]

    @property
    def chi_regular(self) -> bool:
        return not self.unbalanced

    @property
    def shat_positive_dimensional(self) -> Optional[bool]:
        """True/False when known; None when only a bound is available."""
        if self.shat is None:
            return None
        dim = self.shat.dimension
        if dim.value == 0:
            return False
        if any(s.dimension.exact and s.dimension.value > 0 for s in self.shat.strata):
            return True
        return None

    def unbalanced_models(self) -> list[str]:
        names = []
        for s in self.unbalanced:
            name = "X_{" + ",".join(str(e + 1) for e in sorted(s.model.delta)) + "}"
            if not s.model.delta:
                name = "C"
            if name not in names:
                names.append(name)
        return names

    def summary(self) -> str:
        if self.chi_regular:
            return "all limit-root strata balanced: chi regular on this fiber"
        return "unbalanced strata present: " + ", ".join(self.unbalanced_models())

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "l": self.l,
            "chi_regular": self.chi_regular,
            "unbalanced_models": self.unbalanced_models(),
            "shat_positive_dimensional": self.shat_positive_dimensional,
            "summary": self.summary(),
            "strata": [
                {
                    "delta": sorted(s.model.delta),
                    "weights": list(s.weighting.weights),
                    "multidegree": list(s.limit_root_multidegree.values),
                    "balanced": s.balanced.status.value,
                }
                for s in self.strata
            ],
        }


def chi_diagnostics(base: DualGraph, r: int, l: int, with_shat: bool = True) -> ChiReport:
    """Balancedness of every limit-root stratum, plus whether the Picard-side
    fiber has positive-dimensional strata."""
    _two_g_minus_two(base)
    inventory = fiber_inventory(base, r, l=l)
    shat = None
    if with_shat:
        try:
            shat = shat_fiber(base, r, l)
        except SizeGateError:
            shat = None
    return ChiReport(base, r, l, inventory.strata, shat)
