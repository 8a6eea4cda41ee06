"""Structural subset statistics over a kernel decomposition.

For a kernel vertex set S two quantities drive everything here: the number
of kernel edges incident to S, and the total number of core edges on the
2-paths of those kernel edges.  A kernel vertex is called *well anchored*
when every connected kernel set containing it (up to a size bound) keeps
the latter quantity within a logarithmic budget and touches at least three
outside neighbors; the census reports which vertices qualify.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ValidationError
from .graphcore import KernelDecomposition, enumerate_connected_subsets

DEFAULT_EXHAUSTIVE_KERNEL_CAP = 18
DEFAULT_SUBSET_SIZE_CAP = 8


@dataclass(frozen=True)
class SubsetStats:
    """Edge accounting for one kernel vertex subset.

    ``kernel_edges`` counts kernel edges incident to the subset (a loop at
    a subset vertex counts once); ``core_path_edges`` sums the 2-path edge
    counts of those kernel edges; ``boundary`` is the number of kernel
    vertices outside the subset adjacent to it.
    """

    subset: frozenset[int]
    kernel_edges: int
    core_path_edges: int
    boundary: int


def subset_stats(decomp: KernelDecomposition,
                 subset: Iterable[int]) -> SubsetStats:
    """Compute the incident-edge, path-edge, and boundary counts for a subset."""
    if decomp.pure_cycle_flag or decomp.kernel.vertex_count == 0:
        raise ValidationError("subset_stats needs a decomposition with a kernel")
    s = frozenset(subset)
    for v in s:
        if not (0 <= v < decomp.kernel.vertex_count):
            raise ValidationError(f"subset vertex {v} is not a kernel vertex")
    kernel_edges = 0
    core_path_edges = 0
    boundary: set[int] = set()
    for j, (u, v) in enumerate(decomp.kernel.edges):
        hit = (u in s) or (v in s)
        if hit:
            kernel_edges += 1
            core_path_edges += decomp.path_edge_count(j)
        if u in s and v not in s:
            boundary.add(v)
        elif v in s and u not in s:
            boundary.add(u)
    return SubsetStats(subset=s, kernel_edges=kernel_edges,
                       core_path_edges=core_path_edges,
                       boundary=len(boundary))


@dataclass(frozen=True)
class AnchorReport:
    """Outcome of the well-anchored check at one kernel vertex.

    ``holds`` and ``witness`` are mutually exclusive; when ``truncated`` is
    set, a positive ``holds`` only means no violation was found within the
    examined size range.
    """

    vertex: int
    beta: Fraction
    holds: bool
    witness: Optional[frozenset[int]]
    truncated: bool
    subsets_examined: int
    reason: str = ""


def _size_bound(decomp: KernelDecomposition, beta: Fraction) -> int:
    k = decomp.kernel.vertex_count
    bound = (1 - beta) * k
    return math.floor(bound)


def _resolve_size_cap(decomp: KernelDecomposition, beta: Fraction,
                      size_cap: Optional[int]) -> int:
    if size_cap is not None:
        return size_cap
    if decomp.kernel.vertex_count <= DEFAULT_EXHAUSTIVE_KERNEL_CAP:
        return decomp.kernel.vertex_count
    return DEFAULT_SUBSET_SIZE_CAP


def anchor_check(decomp: KernelDecomposition, vertex: int,
                 beta: Fraction | float, n_ambient: int,
                 size_cap: Optional[int] = None) -> AnchorReport:
    """Well-anchored check at one kernel vertex.

    Scans connected kernel subsets containing the vertex, of size at most
    min((1-beta)*K, size_cap).  The vertex qualifies when every such subset
    has at least 3 outside neighbors and at most beta*|S|*ln(n_ambient)
    core path edges.  A vertex id outside the kernel fails outright with a
    distinguished reason.  When the size cap bites before the full range
    and no violation was found, the report is flagged truncated.
    """
    beta = beta if isinstance(beta, Fraction) else Fraction(beta)
    if not (0 < beta < 1):
        raise ValidationError("beta must lie in (0, 1)")
    if n_ambient < 2:
        raise ValidationError("ambient size must be at least 2")
    if decomp.pure_cycle_flag or decomp.kernel.vertex_count == 0:
        raise ValidationError("anchor check needs a decomposition with a kernel")
    if not (0 <= vertex < decomp.kernel.vertex_count):
        return AnchorReport(vertex=vertex, beta=beta, holds=False, witness=None,
                            truncated=False, subsets_examined=0,
                            reason="vertex-not-in-kernel")

    full_bound = _size_bound(decomp, beta)
    cap = _resolve_size_cap(decomp, beta, size_cap)
    effective = min(full_bound, cap)
    if effective < 1:
        return AnchorReport(vertex=vertex, beta=beta, holds=True, witness=None,
                            truncated=False, subsets_examined=0,
                            reason="vacuous")
    log_n = math.log(n_ambient)
    examined = 0
    for subset in enumerate_connected_subsets(decomp.kernel, vertex, effective):
        examined += 1
        stats = subset_stats(decomp, subset)
        if stats.boundary < 3 or stats.core_path_edges > float(beta) * len(subset) * log_n:
            return AnchorReport(vertex=vertex, beta=beta, holds=False,
                                witness=subset, truncated=False,
                                subsets_examined=examined)
    return AnchorReport(vertex=vertex, beta=beta, holds=True, witness=None,
                        truncated=effective < full_bound,
                        subsets_examined=examined)


@dataclass(frozen=True)
class CensusResult:
    holding: frozenset[int]
    fraction: Fraction
    any_truncated: bool
    reports: tuple[AnchorReport, ...]


def anchor_census(decomp: KernelDecomposition, beta: Fraction | float,
                  n_ambient: int, size_cap: Optional[int] = None) -> CensusResult:
    """Run the well-anchored check at every kernel vertex.

    A violating subset witnesses failure for all of its members, so those
    vertices are settled without their own scan.  The holding set and its
    fraction are independent of the processing order.
    """
    beta = beta if isinstance(beta, Fraction) else Fraction(beta)
    if decomp.pure_cycle_flag or decomp.kernel.vertex_count == 0:
        raise ValidationError("anchor census needs a decomposition with a kernel")
    k = decomp.kernel.vertex_count
    failed_by: dict[int, frozenset[int]] = {}
    reports: list[AnchorReport] = []
    any_truncated = False
    for v in range(k):
        if v in failed_by:
            reports.append(AnchorReport(vertex=v, beta=beta, holds=False,
                                        witness=failed_by[v], truncated=False,
                                        subsets_examined=0,
                                        reason="memoized-witness"))
            continue
        rep = anchor_check(decomp, v, beta, n_ambient, size_cap)
        reports.append(rep)
        any_truncated = any_truncated or rep.truncated
        if rep.witness is not None:
            for u in rep.witness:
                failed_by.setdefault(u, rep.witness)
    holding = frozenset(r.vertex for r in reports if r.holds)
    return CensusResult(holding=holding, fraction=Fraction(len(holding), k),
                        any_truncated=any_truncated, reports=tuple(reports))


def write_census_csv(path, result: CensusResult) -> None:
    """Write one census row per kernel vertex: vertex,holds,witness_size,truncated."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vertex", "holds", "witness_size", "truncated"])
        for rep in result.reports:
            writer.writerow([rep.vertex,
                             str(rep.holds).lower(),
                             len(rep.witness) if rep.witness is not None else "",
                             str(rep.truncated).lower()])
