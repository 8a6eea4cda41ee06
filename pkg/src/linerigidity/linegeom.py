"""Exact real-line embeddings, rigid-map enumeration, and reconstructibility.

A rigid map of an embedded graph is a map of the vertex positions into the
reals that preserves |pos(u) - pos(v)| along every edge; two maps are
equivalent when they differ by a line isometry (translation and/or
reflection).  All predicates here use exact rational arithmetic: distances
are either preserved or not, with no floating tolerance anywhere.

The enumerator works on the chain structure of the graph (maximal paths of
degree-2 vertices between branch vertices).  Placing branch vertices first
turns every chain into a signed subset-sum over its consecutive gaps, which
is solved exactly, by meet-in-the-middle for long chains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import IndeterminateResultError, ResourceCapError, ValidationError
from .graphcore import Chain, Multigraph, chain_decomposition, connected_components, induced_subgraph
from .rng import SplitMix64

Rational = Union[int, Fraction]

DEFAULT_CLASS_CAP = 4096
_SUM_TABLE_MAX_LEN = 14
_SEARCH_NODE_BUDGET = 4_000_000
_FAMILY_COMBINATION_CAP = 1 << 20
RANDOM_POSITION_RANGE = 1 << 62


def _as_rational(x) -> Rational:
    """Normalize to int when possible, exact Fraction otherwise."""
    if isinstance(x, int):
        return x
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


class LineEmbedding:
    """Injective assignment of exact rational positions to vertex ids."""

    __slots__ = ("positions",)

    def __init__(self, positions: Iterable[Rational]):
        pos = tuple(_as_rational(p) for p in positions)
        if len(set(pos)) != len(pos):
            raise ValidationError("embedding positions must be pairwise distinct")
        self.positions = pos

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, v: int) -> Rational:
        return self.positions[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LineEmbedding):
            return NotImplemented
        return self.positions == other.positions

    def __hash__(self) -> int:
        return hash(self.positions)

    def __repr__(self) -> str:
        return f"LineEmbedding({list(self.positions)!r})"

    def restrict(self, vertices: Sequence[int]) -> "LineEmbedding":
        return LineEmbedding(self.positions[v] for v in vertices)


def random_integer_embedding(n: int, rng: SplitMix64,
                             high: int = RANDOM_POSITION_RANGE) -> LineEmbedding:
    """n distinct integers drawn uniformly from [0, high)."""
    if n > high:
        raise ValidationError("cannot draw that many distinct positions")
    seen: set[int] = set()
    out: list[int] = []
    while len(out) < n:
        x = rng.randrange(high)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return LineEmbedding(out)


@dataclass(frozen=True)
class RigidMapClass:
    """One equivalence class of distance-preserving maps.

    ``representative`` is normalized: it fixes the smallest vertex id at its
    own position and gives the designated first traversal edge sign +1.
    ``signs[e]`` is (rep[u]-rep[v])/(pos[u]-pos[v]) for edge e = (u, v);
    loops carry +1 by convention.
    """

    representative: tuple[Rational, ...]
    signs: tuple[int, ...]
    injective: bool
    trivial: bool


@dataclass
class ReconstructionReport:
    """Outcome of a rigid-map enumeration over one connected graph."""

    classes: list[RigidMapClass]
    class_count_exact: bool
    largest_set: Optional[frozenset[int]] = None
    per_class_max_isometric_family: Optional[list[int]] = None


@dataclass(frozen=True)
class ReconstructionCheck:
    holds: bool
    witness: Optional[RigidMapClass] = None


@dataclass(frozen=True)
class CoverageReport:
    """Worst-case size of a distance-preserved kernel subset across classes."""

    holds: bool
    worst_class: Optional[RigidMapClass]
    worst_preserved: int
    required: Fraction


# ---------------------------------------------------------------------------
# Signed subset-sums over chain gaps.
# ---------------------------------------------------------------------------

def _plus_first_vectors(gaps: Sequence[Rational]) -> list[tuple[Rational, tuple[int, ...]]]:
    """All (sum, sign vector) pairs in plus-first lexicographic vector order."""
    acc: list[tuple[Rational, tuple[int, ...]]] = [(0, ())]
    for d in gaps:
        nxt = []
        for s, vec in acc:
            nxt.append((s + d, vec + (1,)))
            nxt.append((s - d, vec + (-1,)))
        acc = nxt
    return acc


def _sign_sum_counter(gaps: Sequence[Rational]) -> dict:
    """Map each achievable signed sum to its number of sign vectors."""
    sums: dict = {0: 1}
    for d in gaps:
        nxt: dict = {}
        for s, cnt in sums.items():
            nxt[s + d] = nxt.get(s + d, 0) + cnt
            nxt[s - d] = nxt.get(s - d, 0) + cnt
        sums = nxt
    return sums


class _ChainSums:
    """Achievable endpoint displacements of one chain and their sign vectors.

    Short chains get a full table keyed by sum; long chains keep two half
    tables and answer queries by meet-in-the-middle.  All orders are
    deterministic, with the all-plus vector first.
    """

    def __init__(self, gaps: Sequence[Rational]):
        self.gaps = tuple(gaps)
        self.total = sum(self.gaps)
        self.length = len(self.gaps)
        if self.length <= _SUM_TABLE_MAX_LEN:
            self._table: Optional[dict] = {}
            for s, vec in _plus_first_vectors(self.gaps):
                self._table.setdefault(s, []).append(vec)
            self._left = self._right = None
        else:
            half = self.length // 2
            self._table = None
            self._left = _plus_first_vectors(self.gaps[:half])
            right: dict = {}
            for s, vec in _plus_first_vectors(self.gaps[half:]):
                right.setdefault(s, []).append(vec)
            self._right = right

    def solutions(self, target: Rational) -> list[tuple[int, ...]]:
        """All sign vectors with sum(s_i * d_i) == target, all-plus first."""
        if self._table is not None:
            return self._table.get(target, [])
        out = []
        for s, vec in self._left:
            rest = self._right.get(target - s)
            if rest:
                out.extend(vec + r for r in rest)
        return out

    def solution_count(self, target: Rational) -> int:
        if self._table is not None:
            return len(self._table.get(target, ()))
        count = 0
        for s, vec in self._left:
            rest = self._right.get(target - s)
            if rest:
                count += len(rest)
        return count

    def iter_targets(self) -> Iterator[Rational]:
        """Distinct achievable displacements; all-plus total first, lazily."""
        yield self.total
        seen = {self.total}
        if self._table is not None:
            for s in self._table:
                if s not in seen:
                    seen.add(s)
                    yield s
        else:
            for ls, _ in self._left:
                for rs in self._right:
                    t = ls + rs
                    if t not in seen:
                        seen.add(t)
                        yield t


# ---------------------------------------------------------------------------
# Enumeration of rigid-map classes.
# ---------------------------------------------------------------------------

def _first_traversal_edge(g: Multigraph) -> Optional[tuple[int, int]]:
    """First tree edge of a breadth-first walk from vertex 0 with ascending
    neighbor order: (0, smallest neighbor).  None for single-vertex graphs."""
    if g.vertex_count <= 1:
        return None
    return (0, min(g.neighbors(0)))


def _normalize_map(phi: Sequence[Rational], positions: Sequence[Rational],
                   first_edge: Optional[tuple[int, int]]) -> tuple[Rational, ...]:
    """Canonical class representative: fix vertex 0, make the first edge sign +."""
    shift = positions[0] - phi[0]
    cand = tuple(x + shift for x in phi)
    if first_edge is None:
        return cand
    u, v = first_edge
    if cand[u] - cand[v] == positions[u] - positions[v]:
        return cand
    pivot = 2 * positions[0]
    return tuple(pivot - x for x in cand)


def _signs_of(rep: Sequence[Rational], positions: Sequence[Rational],
              edges: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    out = []
    for u, v in edges:
        if u == v or rep[u] - rep[v] == positions[u] - positions[v]:
            out.append(1)
        else:
            out.append(-1)
    return tuple(out)


def _is_trivial(rep: Sequence[Rational], positions: Sequence[Rational]) -> bool:
    n = len(rep)
    if n <= 1:
        return True
    diff0 = rep[0] - positions[0]
    if all(rep[i] - positions[i] == diff0 for i in range(n)):
        return True
    add0 = rep[0] + positions[0]
    return all(rep[i] + positions[i] == add0 for i in range(n))


@dataclass(frozen=True)
class _PlanStep:
    chain_index: int
    new_vertex: Optional[int]  # None for a closing chain


def _build_plan(chains: list[Chain], anchor: int) -> list[_PlanStep]:
    """Static processing order over chains: close whenever possible, otherwise
    open toward the vertex with the most placed connections (ties: shorter
    chain, then chain index)."""
    placed = {anchor}
    pending = set(range(len(chains)))
    plan: list[_PlanStep] = []
    while pending:
        closed = sorted(i for i in pending
                        if chains[i].u in placed and chains[i].v in placed)
        if closed:
            for i in closed:
                plan.append(_PlanStep(i, None))
                pending.discard(i)
            continue
        candidates = []
        for i in sorted(pending):
            ch = chains[i]
            if ch.u in placed and ch.v not in placed:
                new = ch.v
            elif ch.v in placed and ch.u not in placed:
                new = ch.u
            else:
                continue
            gain = sum(1 for j in pending
                       if {chains[j].u, chains[j].v} <= placed | {new})
            candidates.append((-gain, chains[i].length, i, new))
        if not candidates:
            raise ValidationError("chain structure is disconnected")
        _, _, i, new = min(candidates)
        plan.append(_PlanStep(i, new))
        placed.add(new)
        pending.discard(i)
    return plan


def enumerate_rigid_map_classes(g: Multigraph, emb: LineEmbedding,
                                injective_only: bool = True,
                                class_cap: int = DEFAULT_CLASS_CAP,
                                search_budget: int = _SEARCH_NODE_BUDGET,
                                ) -> ReconstructionReport:
    """Enumerate distance-preserving maps of a connected embedded graph, one
    normalized representative per isometry class.

    The search places branch vertices (degree != 2) in a fixed order chosen
    to close cycle constraints early; every chain between placed vertices
    contributes the exact solution set of its signed gap sum.  Results are
    deterministic, with the trivial class first.  If more than ``class_cap``
    classes exist the list is truncated and ``class_count_exact`` cleared.
    """
    n = g.vertex_count
    if n == 0:
        raise ValidationError("enumerate_rigid_map_classes: empty graph")
    if len(emb) != n:
        raise ValidationError("embedding does not cover the vertex set")
    if len(connected_components(g)) != 1:
        raise ValidationError("enumerate_rigid_map_classes: graph is not connected")
    if class_cap < 1:
        raise ValidationError("class_cap must be at least 1")

    positions = [_as_rational(p) for p in emb.positions]
    first_edge = _first_traversal_edge(g)

    if n == 1:
        rep = (positions[0],)
        cls = RigidMapClass(rep, _signs_of(rep, positions, g.edges), True, True)
        return ReconstructionReport([cls], True,
                                    per_class_max_isometric_family=[1])

    branch = [v for v in range(n) if g.degree(v) != 2]
    if not branch:
        branch = [0]
    chains = chain_decomposition(g, branch)
    anchor = min(branch)
    plan = _build_plan(chains, anchor)
    sums = [_ChainSums([positions[c.vertex_seq[i + 1]] - positions[c.vertex_seq[i]]
                        for i in range(c.length)]) for c in chains]

    classes: list[RigidMapClass] = []
    seen_reps: set[tuple[Rational, ...]] = set()
    truncated = False
    budget = [search_budget]

    phi: dict[int, Rational] = {anchor: positions[anchor]}
    chosen_targets: dict[int, Rational] = {}

    def emit_full_solutions() -> bool:
        """Expand per-chain sign choices into full maps; False stops the search."""
        nonlocal truncated
        solution_lists = []
        for i in range(len(chains)):
            sols = sums[i].solutions(chosen_targets[i])
            if not sols:
                return True
            solution_lists.append(sols)
        for combo in itertools.product(*solution_lists):
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceCapError("rigid-map search budget exhausted")
            full: list = [None] * n
            for b, val in phi.items():
                full[b] = val
            for i, ch in enumerate(chains):
                acc = phi[ch.u]
                seq = ch.vertex_seq
                vec = combo[i]
                for j in range(ch.length - 1):
                    acc = acc + vec[j] * (positions[seq[j + 1]] - positions[seq[j]])
                    full[seq[j + 1]] = acc
            rep = _normalize_map(full, positions, first_edge)
            if rep in seen_reps:
                continue
            injective = len(set(rep)) == n
            if injective_only and not injective:
                seen_reps.add(rep)
                continue
            if len(classes) >= class_cap:
                truncated = True
                return False
            seen_reps.add(rep)
            classes.append(RigidMapClass(
                representative=rep,
                signs=_signs_of(rep, positions, g.edges),
                injective=injective,
                trivial=_is_trivial(rep, positions)))
        return True

    def dfs(step_index: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceCapError("rigid-map search budget exhausted")
        if step_index == len(plan):
            return emit_full_solutions()
        step = plan[step_index]
        ch = chains[step.chain_index]
        cs = sums[step.chain_index]
        if step.new_vertex is None:
            target = phi[ch.v] - phi[ch.u]
            if cs.solution_count(target) == 0:
                return True
            chosen_targets[step.chain_index] = target
            ok = dfs(step_index + 1)
            del chosen_targets[step.chain_index]
            return ok
        forward = step.new_vertex == ch.v
        placed_end = ch.u if forward else ch.v
        for target in cs.iter_targets():
            chosen_targets[step.chain_index] = target
            phi[step.new_vertex] = (phi[placed_end] + target) if forward \
                else (phi[placed_end] - target)
            ok = dfs(step_index + 1)
            del phi[step.new_vertex]
            del chosen_targets[step.chain_index]
            if not ok:
                return False
        return True

    dfs(0)
    families = [max(len(f) for f in _isometric_families(c.representative, positions))
                for c in classes]
    return ReconstructionReport(classes=classes,
                                class_count_exact=not truncated,
                                per_class_max_isometric_family=families)


def _isometric_families(rep: Sequence[Rational],
                        positions: Sequence[Rational]) -> list[frozenset[int]]:
    """Maximal vertex sets on which the map acts as one isometry.

    Translation families share rep[v] - pos[v]; reflection families share
    rep[v] + pos[v].  Families contained in another are dropped; every
    vertex remains covered.
    """
    trans: dict = {}
    refl: dict = {}
    for v in range(len(rep)):
        trans.setdefault(rep[v] - positions[v], set()).add(v)
        refl.setdefault(rep[v] + positions[v], set()).add(v)
    fams = {frozenset(s) for s in trans.values()} | {frozenset(s) for s in refl.values()}
    out = [f for f in fams if not any(f < other for other in fams)]
    out.sort(key=lambda f: (-len(f), sorted(f)))
    return out


# ---------------------------------------------------------------------------
# Reconstructibility.
# ---------------------------------------------------------------------------

def _components_with_embeddings(g: Multigraph, emb: LineEmbedding):
    for comp in connected_components(g):
        yield comp, induced_subgraph(g, comp), emb.restrict(comp)


def _cross_component_witness(g: Multigraph, emb: LineEmbedding,
                             moved_component: Sequence[int]) -> RigidMapClass:
    """Rigid map translating one component past the rest; exact and injective."""
    shift = max(emb.positions) - min(emb.positions) + 1
    moved = set(moved_component)
    rep = tuple(emb[v] + shift if v in moved else emb[v]
                for v in range(g.vertex_count))
    return RigidMapClass(representative=rep,
                         signs=_signs_of(rep, emb.positions, g.edges),
                         injective=len(set(rep)) == len(rep),
                         trivial=False)


def _class_on_full_graph(g: Multigraph, emb: LineEmbedding,
                         comp: Sequence[int], local: RigidMapClass) -> RigidMapClass:
    """Extend a component-local class by the identity elsewhere."""
    rep = list(emb.positions)
    for i, v in enumerate(comp):
        rep[v] = local.representative[i]
    rep_t = tuple(rep)
    return RigidMapClass(representative=rep_t,
                         signs=_signs_of(rep_t, emb.positions, g.edges),
                         injective=len(set(rep_t)) == len(rep_t),
                         trivial=_is_trivial(rep_t, emb.positions))


def is_reconstructible(g: Multigraph, emb: LineEmbedding,
                       vertex_set: Iterable[int],
                       class_cap: int = DEFAULT_CLASS_CAP) -> ReconstructionCheck:
    """Whether every rigid map restricted to the set is a single isometry.

    Sets of size at most one always pass.  A set meeting two components
    fails with a component-translation witness.  Otherwise one enumeration
    of the containing component decides the answer; a truncated enumeration
    raises instead of silently answering.
    """
    U = sorted(set(vertex_set))
    for v in U:
        if not (0 <= v < g.vertex_count):
            raise ValidationError("is_reconstructible: vertex out of range")
    if len(emb) != g.vertex_count:
        raise ValidationError("embedding does not cover the vertex set")
    if len(U) <= 1:
        return ReconstructionCheck(True, None)

    for comp, sub, sub_emb in _components_with_embeddings(g, emb):
        comp_set = set(comp)
        inside = [v for v in U if v in comp_set]
        if not inside:
            continue
        if len(inside) < len(U):
            return ReconstructionCheck(False, _cross_component_witness(g, emb, comp))
        index = {v: i for i, v in enumerate(comp)}
        local_u = [index[v] for v in U]
        report = enumerate_rigid_map_classes(sub, sub_emb, injective_only=True,
                                             class_cap=class_cap)
        if not report.class_count_exact:
            raise IndeterminateResultError(
                "class enumeration truncated; reconstructibility undecided")
        for cls in report.classes:
            if not _acts_as_isometry_on(cls.representative, sub_emb.positions, local_u):
                return ReconstructionCheck(
                    False, _class_on_full_graph(g, emb, comp, cls))
        return ReconstructionCheck(True, None)
    raise AssertionError("unreachable: nonempty set missed every component")


def _acts_as_isometry_on(rep: Sequence[Rational], positions: Sequence[Rational],
                         vertices: Sequence[int]) -> bool:
    if len(vertices) <= 1:
        return True
    v0 = vertices[0]
    diff = rep[v0] - positions[v0]
    if all(rep[v] - positions[v] == diff for v in vertices[1:]):
        return True
    add = rep[v0] + positions[v0]
    return all(rep[v] + positions[v] == add for v in vertices[1:])


def largest_reconstructible_set(g: Multigraph, emb: LineEmbedding,
                                class_cap: int = DEFAULT_CLASS_CAP,
                                combination_cap: int = _FAMILY_COMBINATION_CAP,
                                ) -> frozenset[int]:
    """A maximum-cardinality reconstructible vertex set; ties resolve to the
    lexicographically smallest sorted tuple.

    Computed per connected component: a set of size >= 2 is reconstructible
    exactly when, for every class, it fits inside one isometric family, so
    the search is a branch-and-bound over one family choice per class.
    Exceeding the combination cap raises rather than approximating.
    """
    if len(emb) != g.vertex_count:
        raise ValidationError("embedding does not cover the vertex set")
    if g.vertex_count == 0:
        return frozenset()

    best: tuple[int, tuple[int, ...]] | None = None
    for comp, sub, sub_emb in _components_with_embeddings(g, emb):
        report = enumerate_rigid_map_classes(sub, sub_emb, injective_only=True,
                                             class_cap=class_cap)
        if not report.class_count_exact:
            raise IndeterminateResultError(
                "class enumeration truncated; largest set undecided")
        local = _largest_set_from_classes(
            [c.representative for c in report.classes],
            sub_emb.positions, combination_cap)
        cand = tuple(sorted(comp[i] for i in local))
        if best is None or len(cand) > best[0] \
                or (len(cand) == best[0] and cand < best[1]):
            best = (len(cand), cand)
    assert best is not None
    return frozenset(best[1])


def _largest_set_from_classes(reps: list[Sequence[Rational]],
                              positions: Sequence[Rational],
                              combination_cap: int) -> frozenset[int]:
    n = len(positions)
    if n == 0:
        return frozenset()
    if not reps:
        return frozenset(range(n))
    fallback = frozenset({0})
    family_lists = []
    for rep in reps:
        fams = [f for f in _isometric_families(rep, positions) if len(f) >= 2]
        if not fams:
            return fallback
        family_lists.append(fams)
    if len(reps) * max(len(f) for f in family_lists) > combination_cap:
        raise ResourceCapError(
            "family combination cap exceeded in largest-set search")
    family_lists.sort(key=lambda fams: (len(fams), [sorted(f) for f in fams]))

    best_size = 1
    best_set: frozenset[int] = fallback
    nodes = [0]

    def bnb(idx: int, current: frozenset[int]) -> None:
        nonlocal best_size, best_set
        nodes[0] += 1
        if nodes[0] > 4 * combination_cap:
            raise ResourceCapError("largest-set branch and bound budget exhausted")
        if len(current) < best_size or len(current) < 2:
            return
        if idx == len(family_lists):
            tup = tuple(sorted(current))
            if len(current) > best_size or (len(current) == best_size
                                            and tup < tuple(sorted(best_set))):
                best_size = len(current)
                best_set = current
            return
        for fam in family_lists[idx]:
            bnb(idx + 1, current & fam)

    bnb(0, frozenset(range(n)))
    return best_set


# ---------------------------------------------------------------------------
# Path extensions and kernel coverage.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathExtensionCount:
    total: int
    nontrivial: int


def path_extension_solutions(pos_u: Rational, pos_v: Rational,
                             img_u: Rational, img_v: Rational,
                             interior: Sequence[Rational]) -> PathExtensionCount:
    """Count edge-sign assignments extending the endpoint images along a path.

    The path visits u, the interior positions in order, then v; a sign
    vector (s_1..s_s) is a solution when sum(s_i * gap_i) equals
    img_v - img_u.  ``nontrivial`` excludes the all-plus vector.  Exact
    arithmetic; long paths use meet-in-the-middle.
    """
    pts = [_as_rational(pos_u)] + [_as_rational(x) for x in interior] \
        + [_as_rational(pos_v)]
    if len(set(pts)) != len(pts):
        raise ValidationError("path positions must be pairwise distinct")
    gaps = [pts[i + 1] - pts[i] for i in range(len(pts) - 1)]
    target = _as_rational(img_v) - _as_rational(img_u)
    if len(gaps) <= 16:
        total = _sign_sum_counter(gaps).get(target, 0)
    else:
        half = len(gaps) // 2
        left = _sign_sum_counter(gaps[:half])
        right = _sign_sum_counter(gaps[half:])
        total = sum(cnt * right.get(target - s, 0) for s, cnt in left.items())
    trivial_hit = 1 if sum(gaps) == target else 0
    return PathExtensionCount(total=total, nontrivial=total - trivial_hit)


def kernel_isometry_coverage(decomp, emb: LineEmbedding,
                             min_fraction: Fraction | float,
                             class_cap: int = DEFAULT_CLASS_CAP) -> CoverageReport:
    """Check that every rigid-map class preserves pairwise distances on some
    kernel subset of at least ``min_fraction`` of the kernel vertices.

    Per class, the best such subset is the largest isometric family
    restricted to kernel vertices; the report carries the weakest class.
    """
    if decomp.kernel.vertex_count == 0:
        raise ValidationError("kernel coverage needs a nonempty kernel")
    if len(emb) != decomp.core.vertex_count:
        raise ValidationError("embedding does not cover the core")
    frac = min_fraction if isinstance(min_fraction, Fraction) else Fraction(min_fraction)
    required = frac * decomp.kernel.vertex_count
    report = enumerate_rigid_map_classes(decomp.core, emb, injective_only=True,
                                         class_cap=class_cap)
    if not report.class_count_exact:
        raise IndeterminateResultError(
            "class enumeration truncated; coverage undecided")
    kernel_set = set(decomp.kernel_vertices)
    worst: Optional[RigidMapClass] = None
    worst_preserved = decomp.kernel.vertex_count + 1
    for cls in report.classes:
        fams = _isometric_families(cls.representative, emb.positions)
        preserved = max(max((len(f & kernel_set) for f in fams), default=0), 1)
        if preserved < worst_preserved:
            worst_preserved = preserved
            worst = cls
    holds = Fraction(worst_preserved) >= required
    return CoverageReport(holds=holds, worst_class=worst,
                          worst_preserved=worst_preserved, required=required)
