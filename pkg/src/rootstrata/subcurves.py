"""Vectorized quantification over all subcurves of a small graph.

Subcurve ``Z`` is encoded as the bitmask ``sum(1 << v for v in Z)``; rows of
the tables below run over masks ``1 .. 2**n - 2`` in increasing order, so
the first row satisfying a condition is the lexicographically smallest
witness.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import SizeGateError
from .graph import DualGraph, omega_degree

MAX_VERTICES = 16


@lru_cache(maxsize=None)
def membership(n: int) -> np.ndarray:
    """``(2**n - 2, n)`` 0/1 matrix; row ``i`` is the subset with mask ``i + 1``."""
    if n > MAX_VERTICES:
        raise SizeGateError(f"{n} vertices exceeds the subcurve enumeration limit {MAX_VERTICES}")
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n, dtype=np.int64)) & 1
    bits.setflags(write=False)
    return bits


def mask_to_vertices(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


@dataclass(frozen=True)
class SubcurveTable:
    """Per-subcurve ``k_Z`` and ``w_Z`` (l = 1) for one graph."""

    graph: DualGraph
    M: np.ndarray
    k: np.ndarray
    w: np.ndarray
    contains_tilde: np.ndarray
    inside_tilde: np.ndarray

    @property
    def masks(self) -> np.ndarray:
        return np.arange(1, self.M.shape[0] + 1, dtype=np.int64)


@lru_cache(maxsize=256)
def subcurve_table(graph: DualGraph) -> SubcurveTable:
    n = graph.n_vertices
    M = membership(n)
    k = np.zeros(M.shape[0], dtype=np.int64)
    for a, b in graph.edges:
        if a != b:
            k += M[:, a] ^ M[:, b]
    w = M @ np.array([omega_degree(graph, v) for v in range(n)], dtype=np.int64)
    nonexc = np.zeros(n, dtype=np.int64)
    nonexc[list(graph.non_exceptional)] = 1
    exc = 1 - nonexc
    contains_tilde = (M @ nonexc) == nonexc.sum()
    inside_tilde = (M @ exc) == 0
    return SubcurveTable(graph, M, k, w, contains_tilde, inside_tilde)
