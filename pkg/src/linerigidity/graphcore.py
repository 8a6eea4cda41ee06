"""Exact multigraph representation, decompositions, audits, and counting bounds.

The :class:`Multigraph` here is the universal substrate of the package:
dense integer vertex ids, an ordered edge list with parallel edges repeated
and loops stored as ``(v, v)``, and the convention that a loop contributes 2
to the degree of its vertex.  Everything downstream (two-core peeling,
kernel decomposition, subcubic pruning, expansion and spectral audits)
operates on this type and treats it as immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, ResourceCapError, ValidationError
from .rng import SplitMix64

Edge = tuple[int, int]


class Multigraph:
    """Labelled multigraph with parallel edges and loops.

    Vertices are the dense ids ``0 .. vertex_count-1``.  Edges are stored in
    input order with each pair normalized to ``(min, max)``; serialization
    preserves that order bit-exactly.  Optional ``labels`` map vertex ids to
    external names and never affect any algorithm.
    """

    __slots__ = ("vertex_count", "edges", "labels", "_degrees", "_incidence")

    def __init__(self, vertex_count: int, edges: Iterable[Edge],
                 labels: Optional[dict[int, str]] = None):
        if vertex_count < 0:
            raise ValidationError("vertex_count must be non-negative")
        norm: list[Edge] = []
        degrees = [0] * vertex_count
        for e in edges:
            u, v = e
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValidationError(
                    f"edge ({u}, {v}) has an endpoint outside [0, {vertex_count})")
            if u == v:
                degrees[u] += 2
                norm.append(e if isinstance(e, tuple) else (u, v))
            elif u < v:
                degrees[u] += 1
                degrees[v] += 1
                norm.append(e if isinstance(e, tuple) else (u, v))
            else:
                degrees[u] += 1
                degrees[v] += 1
                norm.append((v, u))
        self.vertex_count = vertex_count
        self.edges: tuple[Edge, ...] = tuple(norm)
        if labels is not None:
            for k in labels:
                if not (0 <= k < vertex_count):
                    raise ValidationError(f"label key {k} is not a vertex id")
        self.labels = dict(labels) if labels else None
        self._degrees = tuple(degrees)
        self._incidence: Optional[tuple] = None

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._degrees

    def degree(self, v: int) -> int:
        return self._degrees[v]

    def incidence_table(self) -> tuple:
        """Per-vertex edge slots as (edge_id, other_endpoint); loops twice."""
        if self._incidence is None:
            incidence: list[list[tuple[int, int]]] = \
                [[] for _ in range(self.vertex_count)]
            for idx, (u, w) in enumerate(self.edges):
                if u == w:
                    incidence[u].append((idx, u))
                    incidence[u].append((idx, u))
                else:
                    incidence[u].append((idx, w))
                    incidence[w].append((idx, u))
            self._incidence = tuple(incidence)
        return self._incidence

    def incidence(self, v: int) -> Sequence[tuple[int, int]]:
        """Edge slots at v as (edge_id, other_endpoint); loops appear twice."""
        return self.incidence_table()[v]

    def neighbors(self, v: int) -> set[int]:
        """Distinct neighbors of v, excluding v itself (loops ignored)."""
        return {w for _, w in self.incidence_table()[v] if w != v}

    def label_of(self, v: int) -> str:
        if self.labels and v in self.labels:
            return self.labels[v]
        return str(v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return (self.vertex_count == other.vertex_count
                and self.edges == other.edges
                and self.labels == other.labels)

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Multigraph(n={self.vertex_count}, m={len(self.edges)})"


def build_multigraph(n: int, edges: Iterable[Edge],
                     labels: Optional[dict[int, str]] = None) -> Multigraph:
    """Construct a multigraph, validating endpoint ranges."""
    return Multigraph(n, edges, labels)


def connected_components(g: Multigraph) -> list[tuple[int, ...]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    seen = [False] * g.vertex_count
    inc = g.incidence_table()
    comps = []
    for start in range(g.vertex_count):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for _, w in inc[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Multigraph) -> bool:
    return g.vertex_count <= 1 or len(connected_components(g)) == 1


def induced_subgraph(g: Multigraph, vertices: Iterable[int]) -> Multigraph:
    """Induced subgraph on ``vertices``, re-indexed densely in sorted order.

    When every vertex is kept the graph is returned unchanged; otherwise new
    ids follow sorted original ids and ``labels`` record the original names,
    so repeated application is stable.
    """
    keep = sorted(set(vertices))
    if keep and (keep[0] < 0 or keep[-1] >= g.vertex_count):
        raise ValidationError("induced_subgraph: vertex id out of range")
    if len(keep) == g.vertex_count:
        return g
    remap = {old: new for new, old in enumerate(keep)}
    edges = [(remap[u], remap[v]) for (u, v) in g.edges
             if u in remap and v in remap]
    labels = {remap[old]: g.label_of(old) for old in keep}
    return Multigraph(len(keep), edges, labels)


def two_core_vertices(g: Multigraph) -> tuple[int, ...]:
    """Vertices surviving iterated deletion of degree <= 1 vertices."""
    deg = list(g.degrees)
    removed = [False] * g.vertex_count
    inc = g.incidence_table()
    queue = [v for v in range(g.vertex_count) if deg[v] < 2]
    while queue:
        v = queue.pop()
        if removed[v]:
            continue
        removed[v] = True
        for _, w in inc[v]:
            if w == v or removed[w]:
                continue
            deg[w] -= 1
            if deg[w] < 2:
                queue.append(w)
    return tuple(v for v in range(g.vertex_count) if not removed[v])


def two_core(g: Multigraph) -> Multigraph:
    """Maximal subgraph of minimum degree >= 2 (possibly empty); idempotent."""
    return induced_subgraph(g, two_core_vertices(g))


# ---------------------------------------------------------------------------
# Chains: maximal paths whose interior vertices have degree exactly 2.
# Shared by kernel decomposition and by the rigid-map search in linegeom.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """A maximal degree-2 path between two branch vertices.

    ``vertex_seq`` runs from ``u`` to ``v`` inclusive; ``edge_ids`` are the
    host-graph edge indices in path order.  Loops at a branch vertex are
    chains of length 1 with ``u == v``.
    """

    u: int
    v: int
    vertex_seq: tuple[int, ...]
    edge_ids: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edge_ids)


def chain_decomposition(g: Multigraph, branch: Sequence[int]) -> list[Chain]:
    """Split the edge set of a connected graph into chains between ``branch`` vertices.

    Every vertex outside ``branch`` must have degree exactly 2.  The chains
    partition the edge set; the walk order is deterministic (branch vertices
    ascending, edge slots in edge-list order).
    """
    branch_set = set(branch)
    m = len(g.edges)
    used = [False] * m
    inc = g.incidence_table()
    chains: list[Chain] = []
    for b in sorted(branch_set):
        for edge_id, w in inc[b]:
            if used[edge_id]:
                continue
            used[edge_id] = True
            seq = [b, w]
            eids = [edge_id]
            cur = w
            while cur not in branch_set:
                nxt = None
                for e2, w2 in inc[cur]:
                    if not used[e2]:
                        nxt = (e2, w2)
                        break
                if nxt is None:
                    raise ValidationError(
                        "chain walk dead-ended; interior vertex degree != 2")
                used[nxt[0]] = True
                eids.append(nxt[0])
                seq.append(nxt[1])
                cur = nxt[1]
            chains.append(Chain(b, cur, tuple(seq), tuple(eids)))
    if not all(used):
        raise ValidationError("edges unreachable from branch vertices")
    return chains


@dataclass(frozen=True)
class KernelDecomposition:
    """A two-core component, its kernel multigraph, and the incident 2-paths.

    ``kernel`` lives on dense ids ``0..K-1``; ``kernel_vertices[i]`` is the
    core id of kernel vertex ``i``.  ``twopaths[j]`` is the full core vertex
    sequence of the 2-path realizing kernel edge ``j``, endpoints included
    (orientation is the discovery walk's, not necessarily the normalized
    edge's).  A component with no degree->=3 vertex gets an empty kernel and
    ``pure_cycle_flag`` set; an empty core (from pruning) has an empty
    kernel and the flag cleared.
    """

    core: Multigraph
    kernel: Multigraph
    kernel_vertices: tuple[int, ...]
    twopaths: tuple[tuple[int, ...], ...]
    pure_cycle_flag: bool

    def path_edge_count(self, kernel_edge_id: int) -> int:
        return len(self.twopaths[kernel_edge_id]) - 1

    def core_vertex_of(self, kernel_vertex: int) -> int:
        return self.kernel_vertices[kernel_vertex]


def kernel_decompose(component: Multigraph,
                     validate: bool = True) -> KernelDecomposition:
    """Decompose a connected min-degree-2 graph into kernel plus 2-paths.

    ``validate=False`` skips the connectivity and degree checks when the
    caller has already established them.
    """
    n = component.vertex_count
    if n == 0:
        raise ValidationError("kernel_decompose: empty graph")
    if validate:
        if not is_connected(component):
            raise ValidationError("kernel_decompose: graph is not connected")
        if any(d < 2 for d in component.degrees):
            raise ValidationError("kernel_decompose: minimum degree below 2")

    branch = [v for v in range(n) if component.degree(v) >= 3]
    if not branch:
        return KernelDecomposition(core=component,
                                   kernel=Multigraph(0, []),
                                   kernel_vertices=(),
                                   twopaths=(),
                                   pure_cycle_flag=True)
    chains = chain_decomposition(component, branch)
    kernel_vertices = tuple(sorted(branch))
    to_kernel = {cv: i for i, cv in enumerate(kernel_vertices)}
    kernel_edges = [(to_kernel[c.u], to_kernel[c.v]) for c in chains]
    labels = {i: component.label_of(cv) for i, cv in enumerate(kernel_vertices)}
    kernel = Multigraph(len(kernel_vertices), kernel_edges, labels)
    return KernelDecomposition(core=component,
                               kernel=kernel,
                               kernel_vertices=kernel_vertices,
                               twopaths=tuple(c.vertex_seq for c in chains),
                               pure_cycle_flag=False)


def prune_to_subcubic(decomp: KernelDecomposition) -> KernelDecomposition:
    """Prune a decomposition down to a 3-regular kernel (or an empty result).

    Steps, applied to the kernel in order: delete every vertex of degree at
    least 4; repeatedly delete vertices of degree at most 1; suppress
    degree-2 vertices by merging their two incident edges; keep one largest
    remaining component.  The returned decomposition is rebuilt from the
    corresponding induced core subgraph.  An empty outcome is flagged by an
    empty core, not an error.
    """
    if decomp.kernel.vertex_count == 0:
        raise ValidationError("prune_to_subcubic: decomposition has empty kernel")
    if all(d == 3 for d in decomp.kernel.degrees):
        return decomp  # nothing to delete, peel, or suppress

    # Mutable kernel view: per-edge core paths keyed by live edge ids.
    kernel = decomp.kernel
    alive = set(range(kernel.vertex_count))
    paths: dict[int, tuple[int, ...]] = {j: decomp.twopaths[j]
                                         for j in range(len(kernel.edges))}
    ends: dict[int, tuple[int, int]] = {j: kernel.edges[j]
                                        for j in range(len(kernel.edges))}
    incident: dict[int, list[int]] = {v: [] for v in alive}
    for j, (a, b) in ends.items():
        incident[a].append(j)
        if b != a:
            incident[b].append(j)

    def deg(v: int) -> int:
        return sum(2 if ends[j][0] == ends[j][1] else 1 for j in incident[v])

    def drop_edge(j: int) -> None:
        a, b = ends.pop(j)
        paths.pop(j)
        incident[a].remove(j)
        if b != a:
            incident[b].remove(j)

    def drop_vertex(v: int) -> None:
        for j in list(incident[v]):
            drop_edge(j)
        incident.pop(v)
        alive.discard(v)

    # P1: vertices of degree >= 4.
    for v in [v for v in alive if deg(v) >= 4]:
        drop_vertex(v)
    # P2: peel degree <= 1.
    queue = [v for v in alive if deg(v) <= 1]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        touched = {w for j in incident[v] for w in ends[j] if w != v}
        drop_vertex(v)
        queue.extend(w for w in touched if w in alive and deg(w) <= 1)
    # P3: suppress degree-2 vertices; a vertex whose whole degree is one loop
    # is an isolated cycle remnant and is dropped with its component.
    next_edge_id = len(kernel.edges)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if v not in alive or deg(v) != 2:
                continue
            js = incident[v]
            if len(js) == 1:  # single loop at v
                drop_vertex(v)
                changed = True
                continue
            j1, j2 = js
            a = ends[j1][0] if ends[j1][1] == v else ends[j1][1]
            b = ends[j2][0] if ends[j2][1] == v else ends[j2][1]
            p1 = paths[j1] if paths[j1][-1] == decomp.kernel_vertices[v] else paths[j1][::-1]
            p2 = paths[j2] if paths[j2][0] == decomp.kernel_vertices[v] else paths[j2][::-1]
            merged = p1 + p2[1:]
            drop_edge(j1)
            drop_edge(j2)
            incident.pop(v)
            alive.discard(v)
            ends[next_edge_id] = (a, b) if a <= b else (b, a)
            paths[next_edge_id] = merged if a <= b else merged[::-1]
            incident[a].append(next_edge_id)
            if b != a:
                incident[b].append(next_edge_id)
            next_edge_id += 1
            changed = True

    if not alive:
        empty = Multigraph(0, [])
        return KernelDecomposition(core=empty, kernel=empty, kernel_vertices=(),
                                   twopaths=(), pure_cycle_flag=False)

    # P4: keep one largest component (ties: smallest original core id).
    comp_of: dict[int, int] = {}
    comps: list[list[int]] = []
    for v in sorted(alive):
        if v in comp_of:
            continue
        stack, comp = [v], []
        comp_of[v] = len(comps)
        while stack:
            x = stack.pop()
            comp.append(x)
            for j in incident[x]:
                for w in ends[j]:
                    if w not in comp_of:
                        comp_of[w] = len(comps)
                        stack.append(w)
        comps.append(sorted(comp))
    best = max(comps, key=lambda c: (len(c), -min(decomp.kernel_vertices[v] for v in c)))
    keep = set(best)

    # Assemble the induced core subgraph from the surviving 2-paths.
    core_vertices: set[int] = {decomp.kernel_vertices[v] for v in keep}
    core_edges: list[Edge] = []
    for j in sorted(ends):
        a, b = ends[j]
        if a not in keep:
            continue
        seq = paths[j]
        core_vertices.update(seq)
        core_edges.extend((seq[i], seq[i + 1]) for i in range(len(seq) - 1))
    order = sorted(core_vertices)
    remap = {old: new for new, old in enumerate(order)}
    labels = {remap[old]: decomp.core.label_of(old) for old in order}
    core = Multigraph(len(order), [(remap[a], remap[b]) for a, b in core_edges], labels)
    return kernel_decompose(core)


def enumerate_connected_subsets(g: Multigraph, root: int,
                                max_size: int) -> Iterator[frozenset[int]]:
    """Yield every vertex set containing ``root`` that induces a connected
    subgraph and has at most ``max_size`` vertices, without duplicates.

    Standard include/exclude extension search; for maximum degree d >= 3 the
    number of outputs of size s+1 is at most (e*(d-1))**s.
    """
    if not (0 <= root < g.vertex_count):
        raise ValidationError("enumerate_connected_subsets: bad root")
    if max_size < 1:
        raise ValidationError("enumerate_connected_subsets: max_size must be >= 1")
    adj = [sorted(g.neighbors(v)) for v in range(g.vertex_count)]

    def rec(current: set[int], extension: list[int],
            banned: set[int]) -> Iterator[frozenset[int]]:
        yield frozenset(current)
        if len(current) == max_size or not extension:
            return
        ext = list(extension)
        local_ban: list[int] = []
        while ext:
            v = ext.pop(0)
            grown = [w for w in adj[v]
                     if w not in current and w not in banned and w not in ext
                     and w != v and w not in local_ban]
            current.add(v)
            yield from rec(current, ext + grown, banned | set(local_ban))
            current.discard(v)
            local_ban.append(v)

    yield from rec({root}, adj[root][:], {root})


def connected_subset_count_bound(max_degree: int, extra_vertices: int) -> float:
    """Upper bound (e*(d-1))**s on connected s+1-vertex subsets through a vertex."""
    if max_degree < 3:
        raise ValidationError("count bound requires maximum degree >= 3")
    return (math.e * (max_degree - 1)) ** extra_vertices


@dataclass(frozen=True)
class ExpansionSpec:
    """Parameters of a vertex-expansion statement: set-size fraction and ratio."""

    c: Fraction
    alpha: Fraction

    def __post_init__(self):
        if not (0 < self.c < 1):
            raise ValidationError("expansion fraction c must lie in (0, 1)")
        if self.alpha < 0:
            raise ValidationError("expansion ratio alpha must be non-negative")


def vertex_expansion_audit(g: Multigraph, c: Fraction | float,
                           mode: str = "exact",
                           sample_budget: int = 0,
                           exact_cap: int = 20,
                           rng: Optional[SplitMix64] = None) -> Fraction:
    """Worst neighborhood-expansion ratio |N(U)|/|U| over admissible sets U.

    Admissible sets are the nonempty U with |U| <= c*|V|; singletons are
    always admitted so the audit is defined on tiny graphs too.  Exact mode
    scans all subsets (graphs up to ``exact_cap`` vertices); sampled mode
    takes the minimum over ``sample_budget`` random connected subsets, which
    upper-bounds the exact answer.
    """
    n = g.vertex_count
    if n == 0:
        raise ValidationError("vertex_expansion_audit: empty graph")
    cfrac = Fraction(c) if not isinstance(c, Fraction) else c
    size_cap = max(1, math.floor(cfrac * n))

    adj_mask = [0] * n
    for v in range(n):
        for w in g.neighbors(v):
            adj_mask[v] |= 1 << w

    def ratio_of_mask(mask: int) -> Fraction:
        nb = 0
        m = mask
        while m:
            low = m & -m
            nb |= adj_mask[low.bit_length() - 1]
            m ^= low
        nb &= ~mask
        return Fraction(nb.bit_count(), mask.bit_count())

    if mode == "exact":
        if n > exact_cap:
            raise ResourceCapError(
                f"exact expansion audit capped at {exact_cap} vertices (got {n})")
        best: Fraction | None = None
        for mask in range(1, 1 << n):
            if mask.bit_count() > size_cap:
                continue
            r = ratio_of_mask(mask)
            if best is None or r < best:
                best = r
        assert best is not None
        return best
    if mode == "sampled":
        if rng is None:
            raise ValidationError("sampled expansion audit needs an rng")
        if sample_budget < 1:
            raise ValidationError("sampled expansion audit needs a positive budget")
        best = None
        for _ in range(sample_budget):
            target = 1 + rng.randrange(size_cap)
            start = rng.randrange(n)
            current = {start}
            frontier = sorted(g.neighbors(start))
            while len(current) < target and frontier:
                v = frontier.pop(rng.randrange(len(frontier)))
                if v in current:
                    continue
                current.add(v)
                frontier.extend(w for w in g.neighbors(v) if w not in current)
            mask = 0
            for v in current:
                mask |= 1 << v
            r = ratio_of_mask(mask)
            if best is None or r < best:
                best = r
        assert best is not None
        return best
    raise ValidationError(f"unknown expansion audit mode {mode!r}")


@dataclass(frozen=True)
class SpectralReport:
    """Summary of a regular graph's adjacency spectrum audit."""

    degree: int
    top_eigenvalue: float
    second_magnitude: float
    iterations: int
    tolerance_achieved: float


def adjacency_matrix(g: Multigraph) -> np.ndarray:
    """Dense adjacency matrix; parallel edges add, a loop adds 2 on the diagonal."""
    a = np.zeros((g.vertex_count, g.vertex_count))
    for u, v in g.edges:
        if u == v:
            a[u, u] += 2.0
        else:
            a[u, v] += 1.0
            a[v, u] += 1.0
    return a


def second_adjacency_eigenvalue(g: Multigraph, tolerance: float = 1e-9,
                                max_iterations: int = 10**6) -> SpectralReport:
    """Largest magnitude among the non-top adjacency eigenvalues of a
    connected regular graph.

    Power iteration runs on the orthogonal complement of the all-ones
    vector, once on A + dI and once on dI - A so both spectral ends are
    covered without a full eigendecomposition.  Convergence is declared
    when the residual norm of the running Rayleigh pair drops below the
    tolerance.
    """
    n = g.vertex_count
    if n == 0:
        raise ValidationError("second_adjacency_eigenvalue: empty graph")
    if not is_connected(g):
        raise ValidationError("second_adjacency_eigenvalue: graph is not connected")
    degs = set(g.degrees)
    if len(degs) != 1:
        raise ValidationError("second_adjacency_eigenvalue: graph is not regular")
    d = g.degrees[0]
    if n == 1:
        return SpectralReport(d, float(d), 0.0, 0, 0.0)

    a = adjacency_matrix(g)
    ones = np.ones(n) / math.sqrt(n)
    rng = SplitMix64(0x5EEDED ^ (n << 16) ^ len(g.edges))
    total_iter = 0
    worst_residual = 0.0

    def top_of(shift_sign: float) -> float:
        # Iterate M = d*I + shift_sign*A restricted to the complement of ones.
        nonlocal total_iter, worst_residual
        v = np.array([rng.random() - 0.5 for _ in range(n)])
        v -= (v @ ones) * ones
        norm = np.linalg.norm(v)
        if norm == 0:
            v = np.arange(n, dtype=float)
            v -= (v @ ones) * ones
            norm = np.linalg.norm(v)
        v /= norm
        rayleigh = 0.0
        for it in range(1, max_iterations + 1):
            w = d * v + shift_sign * (a @ v)
            w -= (w @ ones) * ones
            rayleigh = float(v @ w)
            residual = float(np.linalg.norm(w - rayleigh * v))
            norm = np.linalg.norm(w)
            if norm == 0:
                total_iter += it
                worst_residual = max(worst_residual, 0.0)
                return 0.0
            v = w / norm
            if residual <= tolerance:
                total_iter += it
                worst_residual = max(worst_residual, residual)
                return rayleigh
        raise ConvergenceError(
            f"power iteration did not reach tolerance {tolerance} "
            f"within {max_iterations} iterations")

    high = top_of(+1.0) - d      # most positive non-top eigenvalue
    low = d - top_of(-1.0)       # most negative non-top eigenvalue
    second = max(abs(high), abs(low), 0.0)
    return SpectralReport(d, float(d), second, total_iter, worst_residual)


def edge_boundary_count(g: Multigraph, vertex_set: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in the set; loops never count."""
    s = set(vertex_set)
    for v in s:
        if not (0 <= v < g.vertex_count):
            raise ValidationError("edge_boundary_count: vertex out of range")
    return sum(1 for u, v in g.edges if (u in s) != (v in s))


# ---------------------------------------------------------------------------
# Counting bounds and their exact companions.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundEvaluation:
    bound: float
    exact: Optional[int] = None


def _bareiss_det(mat: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    m = [row[:] for row in mat]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def spanning_tree_count(g: Multigraph) -> int:
    """Exact spanning-tree count via the Kirchhoff determinant (loops ignored)."""
    n = g.vertex_count
    if n == 0:
        return 0
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        if u == v:
            continue
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    minor = [row[1:] for row in lap[1:]]
    return _bareiss_det(minor)


def connected_partition_count(g: Multigraph) -> int:
    """Exact number of partitions of V into blocks inducing connected subgraphs.

    Parallel edges and loops do not change connectivity, so only the simple
    support matters.
    """
    n = g.vertex_count
    if n == 0:
        return 1
    adj = [g.neighbors(v) for v in range(n)]

    def count(remaining: frozenset[int]) -> int:
        if not remaining:
            return 1
        root = min(remaining)
        sub = {v: adj[v] & remaining for v in remaining}
        total = 0
        for block in _connected_sets_through(sub, root):
            total += count(remaining - block)
        return total

    return count(frozenset(range(n)))


def _connected_sets_through(adj: dict[int, set[int]], root: int) -> Iterator[frozenset[int]]:
    def rec(current: set[int], ext: list[int], banned: set[int]) -> Iterator[frozenset[int]]:
        yield frozenset(current)
        if not ext:
            return
        rest = list(ext)
        local_ban: list[int] = []
        while rest:
            v = rest.pop(0)
            grown = [w for w in sorted(adj[v])
                     if w not in current and w not in banned
                     and w not in rest and w not in local_ban]
            current.add(v)
            yield from rec(current, rest + grown, banned | set(local_ban))
            current.discard(v)
            local_ban.append(v)

    yield from rec({root}, sorted(adj[root]), {root})


def combinatorial_bounds(kind: str, *,
                         graph: Optional[Multigraph] = None,
                         vertex_count: Optional[int] = None,
                         max_degree: Optional[int] = None,
                         size: Optional[int] = None,
                         c: Fraction | float | None = None,
                         root: int = 0,
                         want_exact: bool = False,
                         exact_cap: int = 10) -> BoundEvaluation:
    """Closed-form counting bounds, optionally cross-checked by brute force.

    Kinds:
      * ``"subgraphs"``      -- at most (e*(d-1))**(size-1) connected induced
        subgraphs with ``size`` vertices through a given vertex (d >= 3).
      * ``"partitions"``     -- at most |V|**(c*|V|) partitions into connected
        blocks, valid when the maximum degree is at most |V|**c / 10.
      * ``"spanning_trees"`` -- at most e*(e*d/2)**(|V|-1) spanning trees.

    Exact counts are produced only when requested and only for graphs of at
    most ``exact_cap`` vertices; when computed, ``exact <= bound`` is
    asserted.
    """
    if graph is not None:
        vertex_count = graph.vertex_count
        max_degree = max(graph.degrees) if graph.vertex_count else 0
    if kind == "subgraphs":
        if max_degree is None or size is None:
            raise ValidationError("subgraphs bound needs max_degree and size")
        if max_degree < 3:
            raise ValidationError(
                f"subgraphs bound hypothesis failed: max degree {max_degree} < 3")
        if size < 1:
            raise ValidationError("subgraphs bound needs size >= 1")
        bound = (math.e * (max_degree - 1)) ** (size - 1)
        exact = None
        if want_exact:
            if graph is None:
                raise ValidationError("exact subgraph count needs a graph")
            if graph.vertex_count > exact_cap:
                raise ResourceCapError(
                    f"exact count capped at {exact_cap} vertices")
            exact = sum(1 for s in enumerate_connected_subsets(graph, root, size)
                        if len(s) == size)
    elif kind == "partitions":
        if vertex_count is None or max_degree is None:
            raise ValidationError("partitions bound needs vertex_count and max_degree")
        if c is None:
            bound = math.inf  # exact-only query; no hypothesis to check
        else:
            cf = float(c)
            threshold = vertex_count ** cf / 10.0
            if max_degree > threshold:
                raise ValidationError(
                    "partitions bound hypothesis failed: "
                    f"max degree {max_degree} > |V|**c / 10 = {threshold:.6g}")
            bound = float(vertex_count) ** (cf * vertex_count)
        exact = None
        if want_exact:
            if graph is None:
                raise ValidationError("exact partition count needs a graph")
            if graph.vertex_count > exact_cap:
                raise ResourceCapError(
                    f"exact count capped at {exact_cap} vertices")
            exact = connected_partition_count(graph)
    elif kind == "spanning_trees":
        if vertex_count is None or max_degree is None:
            raise ValidationError("spanning-tree bound needs vertex_count and max_degree")
        if max_degree <= 0:
            raise ValidationError("spanning-tree bound needs max degree > 0")
        bound = math.e * (math.e * max_degree / 2.0) ** (vertex_count - 1)
        exact = None
        if want_exact:
            if graph is None:
                raise ValidationError("exact spanning-tree count needs a graph")
            if graph.vertex_count > exact_cap:
                raise ResourceCapError(
                    f"exact count capped at {exact_cap} vertices")
            exact = spanning_tree_count(graph)
    else:
        raise ValidationError(f"unknown bound kind {kind!r}")
    if exact is not None and exact > bound:
        raise AssertionError(
            f"exact count {exact} exceeded closed-form bound {bound}")
    return BoundEvaluation(bound=bound, exact=exact)
