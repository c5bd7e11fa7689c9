"""Basic Inequality, balanced / stably balanced multidegrees on quasistable
curves, and their exhaustive enumeration.

All comparisons are made after multiplying through by ``2(2g-2)``:

    |2(2g-2) d_Z - 2 d w_Z| <= (2g-2) k_Z

so every verdict is exact integer arithmetic.
"""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import GenusError, SizeGateError
from .graph import (
    DualGraph,
    Multidegree,
    QuasistableModel,
    arithmetic_genus,
    k_Z,
    omega_degree,
    w_Z,
)
from .subcurves import MAX_VERTICES, mask_to_vertices, subcurve_table

_CHUNK = 512


class Status(enum.Enum):
    NOT_BALANCED = "NotBalanced"
    BALANCED = "Balanced"
    STABLY_BALANCED = "StablyBalanced"


@dataclass(frozen=True)
class Witness:
    """A subcurve together with the numbers that make it a witness."""

    vertices: tuple[int, ...]
    d_Z: int
    w_Z: int
    k_Z: int
    kind: str  # "exceptional", "upper", "lower" or "extremal"


@dataclass(frozen=True)
class BalancedVerdict:
    status: Status
    witnesses: tuple[Witness, ...] = ()

    @property
    def balanced(self) -> bool:
        return self.status is not Status.NOT_BALANCED

    @property
    def stably_balanced(self) -> bool:
        return self.status is Status.STABLY_BALANCED

    def to_json(self) -> dict:
        out = {"status": self.status.value}
        if self.witnesses:
            out["witnesses"] = [
                {"Z": list(w.vertices), "d_Z": w.d_Z, "w_Z": w.w_Z, "k_Z": w.k_Z, "kind": w.kind}
                for w in self.witnesses
            ]
        return out


@dataclass(frozen=True)
class InequalityCheck:
    """``lhs = 2(2g-2) d_Z - 2 d w_Z`` against ``bound = (2g-2) k_Z``."""

    lhs: int
    bound: int

    @property
    def holds(self) -> bool:
        return abs(self.lhs) <= self.bound

    @property
    def lower_equality(self) -> bool:
        return self.lhs == -self.bound


def _two_g_minus_two(graph: DualGraph) -> int:
    g = arithmetic_genus(graph)
    if g < 2:
        raise GenusError(f"balancedness needs g >= 2, got g = {g}")
    return 2 * g - 2


def _derived_values(model: QuasistableModel, d) -> tuple[int, ...]:
    if isinstance(d, Multidegree):
        if d.graph != model.derived_graph:
            raise ValueError("multidegree is not indexed by the model's derived graph")
        return d.values
    values = tuple(int(x) for x in d)
    if len(values) != model.derived_graph.n_vertices:
        raise ValueError("multidegree length does not match the derived graph")
    return values


def basic_inequality(model: QuasistableModel, d, Z) -> InequalityCheck:
    graph = model.derived_graph
    gg = _two_g_minus_two(graph)
    values = _derived_values(model, d)
    zs = frozenset(getattr(Z, "vertices", Z))
    dz = sum(values[v] for v in zs)
    return InequalityCheck(2 * gg * dz - 2 * sum(values) * w_Z(graph, zs), gg * k_Z(graph, zs))


def _evaluate(graph: DualGraph, D: np.ndarray, total: int):
    """Rowwise verdict data for candidate multidegrees ``D`` (ncand x n).

    Returns (exc_ok, upper/lower violation present, unstable extremal present).
    """
    gg = _two_g_minus_two(graph)
    tab = subcurve_table(graph)
    exc = sorted(graph.exceptional)
    exc_ok = np.all(D[:, exc] == 1, axis=1) if exc else np.ones(len(D), dtype=bool)
    viol = np.zeros(len(D), dtype=bool)
    unstable = np.zeros(len(D), dtype=bool)
    if tab.M.shape[0] == 0:
        return exc_ok, viol, unstable
    bound = (gg * tab.k)[:, None]
    shift = (2 * total * tab.w)[:, None]
    for start in range(0, len(D), _CHUNK):
        block = D[start:start + _CHUNK]
        lhs = 2 * gg * (tab.M @ block.T) - shift
        viol[start:start + _CHUNK] = np.any(np.abs(lhs) > bound, axis=0)
        extremal = (lhs == -bound) & ~tab.contains_tilde[:, None]
        unstable[start:start + _CHUNK] = np.any(extremal, axis=0)
    return exc_ok, viol, unstable


def _witness(graph: DualGraph, values, mask: int, kind: str) -> Witness:
    zs = mask_to_vertices(mask)
    return Witness(zs, sum(values[v] for v in zs), w_Z(graph, zs), k_Z(graph, zs), kind)


def _verdict(model: QuasistableModel, d, stable: bool) -> BalancedVerdict:
    graph = model.derived_graph
    values = _derived_values(model, d)
    gg = _two_g_minus_two(graph)
    for v in sorted(graph.exceptional):
        if values[v] != 1:
            return BalancedVerdict(Status.NOT_BALANCED, (_witness(graph, values, 1 << v, "exceptional"),))
    tab = subcurve_table(graph)
    if tab.M.shape[0] == 0:
        return BalancedVerdict(Status.STABLY_BALANCED if stable else Status.BALANCED)
    total = sum(values)
    lhs = 2 * gg * (tab.M @ np.array(values, dtype=np.int64)) - 2 * total * tab.w
    bound = gg * tab.k
    bad = np.flatnonzero(np.abs(lhs) > bound)
    if bad.size:
        i = int(bad[0])
        kind = "upper" if lhs[i] > 0 else "lower"
        return BalancedVerdict(Status.NOT_BALANCED, (_witness(graph, values, i + 1, kind),))
    if not stable:
        return BalancedVerdict(Status.BALANCED)
    extremal = np.flatnonzero((lhs == -bound) & ~tab.contains_tilde)
    if extremal.size:
        return BalancedVerdict(
            Status.BALANCED,
            tuple(_witness(graph, values, int(i) + 1, "extremal") for i in extremal),
        )
    return BalancedVerdict(Status.STABLY_BALANCED)


def is_balanced(model: QuasistableModel, d) -> BalancedVerdict:
    """Balanced or NotBalanced; the witness is the smallest violating subcurve
    by bitmask (an exceptional component of wrong degree takes precedence)."""
    return _verdict(model, d, stable=False)


def is_stably_balanced(model: QuasistableModel, d) -> BalancedVerdict:
    """Upgrade to StablyBalanced when every subcurve attaining the lower bound
    contains all non-exceptional components."""
    return _verdict(model, d, stable=True)


def balanced_box(graph: DualGraph, total: int) -> list[tuple[int, int]]:
    """Per-vertex range allowed by the singleton-subcurve inequalities.

    Exceptional vertices get ``(1, 1)``.
    """
    gg = _two_g_minus_two(graph)
    box = []
    for v in graph.vertices:
        if v in graph.exceptional:
            box.append((1, 1))
            continue
        kv, wv = k_Z(graph, (v,)), omega_degree(graph, v)
        lo = -((-(2 * total * wv - gg * kv)) // (2 * gg))
        hi = (2 * total * wv + gg * kv) // (2 * gg)
        box.append((lo, hi))
    return box


def candidates_in_box(box, total: int) -> np.ndarray:
    """All integer vectors in ``box`` with the given sum, lexicographic order."""
    n = len(box)
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    *head, (lo_last, hi_last) = box
    rows = []
    for pre in itertools.product(*(range(lo, hi + 1) for lo, hi in head)):
        last = total - sum(pre)
        if lo_last <= last <= hi_last:
            rows.append(pre + (last,))
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def _balanced_on_model(args):
    model, total, stably_only = args
    graph = model.derived_graph
    D = candidates_in_box(balanced_box(graph, total), total)
    if len(D) == 0:
        return []
    exc_ok, viol, unstable = _evaluate(graph, D, total)
    keep = exc_ok & ~viol
    if stably_only:
        keep &= ~unstable
    return [Multidegree(graph, tuple(int(x) for x in row)) for row in D[keep]]


def all_models(base: DualGraph) -> list[QuasistableModel]:
    """Every blow-up of ``base``, ordered by the bitmask of the blown-up edges."""
    return [
        QuasistableModel(base, frozenset(e for e in range(base.n_edges) if mask >> e & 1))
        for mask in range(1 << base.n_edges)
    ]


def check_size(base: DualGraph):
    if base.n_vertices + base.n_edges > MAX_VERTICES:
        raise SizeGateError(
            f"|V| + |E| = {base.n_vertices + base.n_edges} exceeds the enumeration limit {MAX_VERTICES}"
        )


def enumerate_balanced(
    base: DualGraph, degree: int, stably_only: bool = False, parallel: bool = False
) -> dict[QuasistableModel, list[Multidegree]]:
    """Balanced multidegrees of total ``degree`` on every quasistable model of ``base``.

    Models with no balanced multidegree are kept with an empty list.
    """
    check_size(base)
    _two_g_minus_two(base)
    models = all_models(base)
    jobs = [(m, degree, stably_only) for m in models]
    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_balanced_on_model, jobs))
    else:
        results = [_balanced_on_model(j) for j in jobs]
    return dict(zip(models, results))


def exceptional_contacts(graph: DualGraph, Z) -> int:
    """Exceptional nodes on ``Z``: points where ``Z`` meets an exceptional
    component not contained in ``Z`` (an exceptional component attached to
    ``Z`` at both ends counts twice)."""
    zs = frozenset(Z)
    return sum(
        ((a in zs) != (b in zs)) and ((a in graph.exceptional) or (b in graph.exceptional))
        for a, b in graph.edges
    )


@dataclass
class R2Report:
    l: int
    strata_checked: int = 0
    subcurves_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def r2_identity_check(base: DualGraph, l: int) -> R2Report:
    """Check every limit square root of ``omega^l`` on ``base``.

    For each admissible weighting the limit-root multidegree must be balanced,
    and every subcurve ``Z`` made of non-exceptional components must satisfy
    ``2 d_Z = l w_Z - k'_Z``, ``k'_Z <= k_Z`` and ``k'_Z = l k_Z (mod 2)``.
    """
    from .strata import admissible_weightings, limit_root_multidegree, spin_class

    report = R2Report(l)
    for wt in admissible_weightings(base, 2, spin_class(base, 2, l)):
        model = wt.model
        graph = model.derived_graph
        d = limit_root_multidegree(wt, l)
        verdict = is_balanced(model, d)
        report.strata_checked += 1
        if not verdict.balanced:
            report.failures.append((wt, "not balanced", verdict))
        tab = subcurve_table(graph)
        dZ = tab.M @ np.array(d.values, dtype=np.int64)
        # k'_Z for every row: crossing edges that touch an exceptional vertex
        kp = np.zeros(tab.M.shape[0], dtype=np.int64)
        for a, b in graph.edges:
            if a != b and (a in graph.exceptional or b in graph.exceptional):
                kp += tab.M[:, a] ^ tab.M[:, b]
        rows = np.flatnonzero(tab.inside_tilde)
        report.subcurves_checked += rows.size
        lw = l * tab.w
        bad = rows[(2 * dZ[rows] != lw[rows] - kp[rows]) | (kp[rows] > tab.k[rows])
                   | ((kp[rows] - l * tab.k[rows]) % 2 != 0)]
        for i in bad[:5]:
            report.failures.append((wt, "identity", mask_to_vertices(int(i) + 1)))
    return report
