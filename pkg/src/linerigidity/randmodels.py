"""Random graph generators and their analytic companions.

Covers the binomial random graph, the pairing (configuration) model, exact
and rejection samplers for regular graphs, and the three-step model of the
largest two-core component of a sparse binomial random graph:

  1. a conditioned Poisson degree sequence (entries below 3 dropped, the
     retained sum forced even by rejection),
  2. a random multigraph on the retained degrees (the kernel),
  3. every kernel edge replaced by a path of geometric length.

All samplers draw from an explicit :class:`~linerigidity.rng.SplitMix64`
handle and are bit-reproducible given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ResourceCapError, ValidationError
from .graphcore import (KernelDecomposition, Multigraph, connected_components,
                        induced_subgraph, kernel_decompose)
from .rng import PoissonTable, SplitMix64

CONJUGATE_TOLERANCE = 1e-12


def conjugate_rate(lam: float) -> float:
    """The unique mu in (0, 1] with mu*e^-mu = lam*e^-lam, for lam >= 1.

    Bisection on (0, 1] to absolute error 1e-12; lam = 1 returns exactly 1.
    """
    lam = float(lam)
    if lam < 1:
        raise ValidationError("conjugate rate is defined for lam >= 1")
    if lam == 1.0:
        return 1.0
    value = lam * math.exp(-lam)
    lo, hi = 0.0, 1.0  # f(mu) = mu*e^-mu - value: f(0) < 0 < f(1)
    while hi - lo > CONJUGATE_TOLERANCE:
        mid = (lo + hi) / 2
        if mid * math.exp(-mid) < value:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the two-core model: ambient size, edge density, seed."""

    n: int
    lam: Fraction
    seed: int = 0
    mu: float = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("ambient size must be positive")
        lam = self.lam if isinstance(self.lam, Fraction) else Fraction(self.lam)
        object.__setattr__(self, "lam", lam)
        if lam <= 1:
            raise ValidationError("two-core model needs lam > 1")
        object.__setattr__(self, "mu", conjugate_rate(float(lam)))

    def rng(self) -> SplitMix64:
        return SplitMix64(self.seed)


def sample_gnp(n: int, p, rng: SplitMix64) -> Multigraph:
    """Binomial random graph: each of the C(n,2) pairs present with probability p.

    Geometric skipping over the pair sequence, so the cost is proportional
    to the number of edges drawn rather than to n^2.
    """
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValidationError("edge probability must lie in [0, 1]")
    if n < 0:
        raise ValidationError("vertex count must be non-negative")
    if n < 2 or p == 0.0:
        return Multigraph(n, [])
    pairs_total = n * (n - 1) // 2
    if p == 1.0:
        return Multigraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    def pair_at(k: int) -> tuple[int, int]:
        # k-th pair in row-major order over u < v; row start of u is
        # C(u) = u*(2n-u-1)/2, inverted by the quadratic formula and
        # corrected for float error
        u = int(((2 * n - 1) - math.sqrt((2 * n - 1) ** 2 - 8 * k)) // 2)
        while u * (2 * n - u - 1) // 2 > k:
            u -= 1
        while (u + 1) * (2 * n - u - 2) // 2 <= k:
            u += 1
        return (u, u + 1 + k - u * (2 * n - u - 1) // 2)

    log_q = math.log1p(-p)
    edges = []
    k = -1
    while True:
        u = rng.random_open()
        k += 1 + int(math.floor(math.log(u) / log_q))
        if k >= pairs_total:
            break
        edges.append(pair_at(k))
    return Multigraph(n, edges)


@dataclass(frozen=True)
class DegreeSequenceSample:
    """Conditioned Poisson degree sequence for the kernel.

    ``degrees`` holds the raw Poisson draws; entries below 3 are zeroed for
    kernel purposes (see ``kernel_degrees``), and the vector is resampled
    until the retained sum is even.  ``poisson_mean`` is the Gaussian mean
    the Poisson draws were taken at.
    """

    poisson_mean: float
    degrees: tuple[int, ...]

    @property
    def kernel_degrees(self) -> tuple[int, ...]:
        return tuple(d if d >= 3 else 0 for d in self.degrees)

    @property
    def kernel_vertex_count(self) -> int:
        return sum(1 for d in self.degrees if d >= 3)

    @property
    def counts_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            if d >= 3:
                out[d] = out.get(d, 0) + 1
        return out


def sample_degree_sequence(params: ModelParams, rng: SplitMix64) -> DegreeSequenceSample:
    """Step one of the two-core model.

    Draws a Gaussian mean (resampled until positive), then n i.i.d. Poisson
    values at that mean, rejecting whole vectors until the sum of the
    entries of size at least 3 is even.
    """
    lam = float(params.lam)
    mu = params.mu
    mean = rng.normal(lam - mu, math.sqrt(1.0 / params.n))
    while mean <= 0:
        mean = rng.normal(lam - mu, math.sqrt(1.0 / params.n))
    table = PoissonTable(mean)
    while True:
        degrees = table.draw_many(rng, params.n)
        if sum(d for d in degrees if d >= 3) % 2 == 0:
            return DegreeSequenceSample(mean, tuple(degrees))


def sample_pairing(degrees: Sequence[int], rng: SplitMix64) -> Multigraph:
    """Configuration-model multigraph: a uniform perfect matching on half-edges.

    Loops and parallel edges are kept.  Requires an even degree sum.
    """
    if any(d < 0 for d in degrees):
        raise ValidationError("degrees must be non-negative")
    half_edges = [v for v, d in enumerate(degrees) for _ in range(d)]
    if len(half_edges) % 2 != 0:
        raise ValidationError("degree sum must be even for a pairing")
    rng.shuffle(half_edges)
    edges = [(half_edges[i], half_edges[i + 1])
             for i in range(0, len(half_edges), 2)]
    return Multigraph(len(degrees), edges)


@dataclass(frozen=True)
class TwoCoreSample:
    """One draw of the three-step two-core model.

    ``kernel`` lives on dense ids over the retained (degree >= 3) entries;
    ``kernel_to_ambient`` maps them back to positions in the degree vector.
    ``core`` is the kernel with every edge subdivided into a path of
    ``path_lengths[e]`` edges; interior vertices are appended after the
    kernel ids in kernel-edge order.  ``decomposition`` re-derives the
    kernel from the largest connected core component (``connected`` tells
    whether that is the whole core).  ``kernel_law`` records which law
    produced the kernel.
    """

    degseq: DegreeSequenceSample
    kernel: Multigraph
    kernel_to_ambient: tuple[int, ...]
    path_lengths: tuple[int, ...]
    core: Multigraph
    decomposition: Optional[KernelDecomposition]
    connected: bool
    kernel_law: str

    @property
    def empty(self) -> bool:
        return self.kernel.vertex_count == 0


def _subdivide_kernel(kernel: Multigraph, path_lengths: Sequence[int]) -> Multigraph:
    n = kernel.vertex_count
    edges = []
    next_vertex = n
    for e, (u, v) in enumerate(kernel.edges):
        length = path_lengths[e]
        seq = [u] + list(range(next_vertex, next_vertex + length - 1)) + [v]
        next_vertex += length - 1
        edges.extend((seq[i], seq[i + 1]) for i in range(len(seq) - 1))
    return Multigraph(next_vertex, edges)


def exact_uniform_multigraph(degrees: Sequence[int], rng: SplitMix64,
                             cap: int = 14) -> Multigraph:
    """Uniform draw over labelled multigraphs with the given degree sequence.

    Enumerates them (degree sum capped) and picks one uniformly; only
    suitable for tiny sequences.
    """
    if sum(degrees) > cap:
        raise ResourceCapError(
            f"exact uniform kernel sampling capped at degree sum {cap}")
    graphs = sorted(_all_multigraphs(tuple(degrees)))
    if not graphs:
        raise ValidationError("no multigraph realizes the degree sequence")
    edges = graphs[rng.randrange(len(graphs))]
    return Multigraph(len(degrees), edges)


def sample_two_core(params: ModelParams, rng: SplitMix64,
                    kernel_law: str = "pairing") -> TwoCoreSample:
    """Draw from the three-step two-core model.

    ``kernel_law`` selects step two: ``"pairing"`` (configuration model) or
    ``"uniform"`` (exact uniform multigraph, tiny kernels only).  A draw
    with no retained degrees yields an empty sample rather than an error.
    """
    degseq = sample_degree_sequence(params, rng)
    retained = [(i, d) for i, d in enumerate(degseq.degrees) if d >= 3]
    kernel_to_ambient = tuple(i for i, _ in retained)
    kernel_degrees = [d for _, d in retained]
    if not retained:
        empty = Multigraph(0, [])
        return TwoCoreSample(degseq, empty, (), (), empty, None, True, kernel_law)
    if kernel_law == "pairing":
        kernel = sample_pairing(kernel_degrees, rng)
    elif kernel_law == "uniform":
        kernel = exact_uniform_multigraph(kernel_degrees, rng)
    else:
        raise ValidationError(f"unknown kernel law {kernel_law!r}")
    success = 1.0 - params.mu
    path_lengths = tuple(rng.geometric_from_success(success)
                         for _ in kernel.edges)
    core = _subdivide_kernel(kernel, path_lengths)
    comps = connected_components(core)
    if len(comps) == 1:
        decomposition = kernel_decompose(core, validate=False)
        connected = True
    else:
        biggest = max(comps, key=len)
        decomposition = kernel_decompose(induced_subgraph(core, biggest),
                                         validate=False)
        connected = False
    return TwoCoreSample(degseq, kernel, kernel_to_ambient, path_lengths,
                         core, decomposition, connected, kernel_law)


@dataclass(frozen=True)
class PlacedTwoCoreSample:
    """A two-core draw mapped into an ambient vertex set by a random injection.

    When the core is larger than the ambient set the edge set falls back to
    the complete graph and ``used_fallback`` is set.
    """

    graph: Multigraph
    sample: Optional[TwoCoreSample]
    injection: tuple[int, ...]
    used_fallback: bool


def uniform_injection(k: int, n: int, rng: SplitMix64) -> tuple[int, ...]:
    """Uniformly random injection [k] -> [n], as the image tuple."""
    return tuple(rng.sample_indices(n, k))


def sample_placed_two_core(params: ModelParams, ambient_size: int,
                           rng: SplitMix64) -> PlacedTwoCoreSample:
    """Two-core draw followed by a uniformly random placement into [ambient_size]."""
    if ambient_size < 1:
        raise ValidationError("ambient size must be positive")
    sample = sample_two_core(params, rng)
    k = sample.core.vertex_count
    if k > ambient_size:
        complete = [(u, v) for u in range(ambient_size)
                    for v in range(u + 1, ambient_size)]
        return PlacedTwoCoreSample(Multigraph(ambient_size, complete),
                                   sample, (), True)
    injection = uniform_injection(k, ambient_size, rng)
    edges = [(injection[u], injection[v]) for u, v in sample.core.edges]
    return PlacedTwoCoreSample(Multigraph(ambient_size, edges),
                               sample, injection, False)


def _is_simple(g: Multigraph) -> bool:
    seen = set()
    for u, v in g.edges:
        if u == v or (u, v) in seen:
            return False
        seen.add((u, v))
    return True


def sample_regular_simple(n: int, d: int, rng: SplitMix64,
                          attempt_cap: int = 10_000) -> Multigraph:
    """Uniform labelled simple d-regular graph via pairing rejection.

    Exactly uniform, but the acceptance probability collapses once d is no
    longer small next to n; the cap turns that into an explicit error.  Use
    :func:`sample_regular_stub_matching` for dense cases where slight
    non-uniformity is acceptable.
    """
    if n * d % 2 != 0:
        raise ValidationError("n*d must be even for a d-regular graph")
    if not 0 <= d < n:
        raise ValidationError("regular degree must satisfy 0 <= d < n")
    degrees = [d] * n
    for _ in range(attempt_cap):
        g = sample_pairing(degrees, rng)
        if _is_simple(g):
            return g
    raise ResourceCapError(
        f"no simple pairing in {attempt_cap} attempts for n={n}, d={d}")


def sample_regular_stub_matching(n: int, d: int, rng: SplitMix64,
                                 restart_cap: int = 10_000) -> Multigraph:
    """Simple d-regular graph by suitable-pair stub matching with restarts.

    Joins two uniformly random stubs whenever the pair is neither a loop
    nor a repeat, restarting on dead ends.  Always produces a valid simple
    regular graph; the distribution is close to, but not exactly, uniform.
    Appropriate for degrees too large for pairing rejection.
    """
    if n * d % 2 != 0:
        raise ValidationError("n*d must be even for a d-regular graph")
    if not 0 <= d < n:
        raise ValidationError("regular degree must satisfy 0 <= d < n")
    for _ in range(restart_cap):
        stubs = [v for v in range(n) for _ in range(d)]
        adj: set[tuple[int, int]] = set()
        edges: list[tuple[int, int]] = []
        failed = False
        while stubs:
            # draw a suitable pair uniformly among remaining stub pairs
            ok = False
            for _ in range(200):
                i = rng.randrange(len(stubs))
                j = rng.randrange(len(stubs))
                if i == j:
                    continue
                u, v = stubs[i], stubs[j]
                if u == v:
                    continue
                key = (u, v) if u < v else (v, u)
                if key in adj:
                    continue
                ok = True
                break
            if not ok:
                failed = True
                break
            adj.add(key)
            edges.append(key)
            for idx in sorted((i, j), reverse=True):
                stubs[idx] = stubs[-1]
                stubs.pop()
        if not failed:
            return Multigraph(n, edges)
    raise ResourceCapError(
        f"stub matching failed {restart_cap} times for n={n}, d={d}")


# ---------------------------------------------------------------------------
# Counting multigraphs with a given degree sequence.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultigraphCount:
    estimate: float
    exact: Optional[int] = None


def _all_multigraphs(degrees: tuple[int, ...]) -> set[tuple[tuple[int, int], ...]]:
    """Distinct labelled multigraphs with the sequence, as sorted edge tuples,
    from exhaustive perfect matchings of the half-edges."""
    half_edges = [v for v, d in enumerate(degrees) for _ in range(d)]
    out: set[tuple[tuple[int, int], ...]] = set()

    def match(rest: tuple[int, ...], acc: list[tuple[int, int]]):
        if not rest:
            out.add(tuple(sorted(acc)))
            return
        a = rest[0]
        for idx in range(1, len(rest)):
            b = rest[idx]
            acc.append((a, b) if a <= b else (b, a))
            match(rest[1:idx] + rest[idx + 1:], acc)
            acc.pop()

    match(tuple(half_edges), [])
    return out


def _count_multigraphs_dp(degrees: Sequence[int]) -> int:
    """Exact count of labelled multigraphs with the degree sequence.

    Processes vertices one at a time, distributing the first vertex's
    residual degree into loops and multi-edges toward the rest; the count
    for the remainder depends only on the residual multiset, which is
    memoized.
    """
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def count(residual: tuple[int, ...]) -> int:
        residual = tuple(sorted((d for d in residual if d > 0), reverse=True))
        if not residual:
            return 1
        first, rest = residual[0], residual[1:]
        total = 0

        def rec(i: int, remaining: int, new_rest: list[int]):
            # choose the multiplicity toward each later vertex; whatever is
            # left must pair up into loops, hence the parity condition
            nonlocal total
            if i == len(rest):
                if remaining % 2 == 0:
                    total += count(tuple(new_rest))
                return
            for take in range(min(remaining, rest[i]) + 1):
                new_rest.append(rest[i] - take)
                rec(i + 1, remaining - take, new_rest)
                new_rest.pop()

        rec(0, first, [])
        return total

    return count(tuple(degrees))


def multigraph_count_estimate(degrees: Sequence[int],
                              want_exact: bool = False,
                              exact_matching_cap: int = 14,
                              exact_dp_cap: int = 32) -> MultigraphCount:
    """Number of labelled multigraphs with a degree sequence.

    ``estimate`` is the factorial-ratio asymptotic with second-order
    correction exp(M2/(2*M1) + (M2/(2*M1))**2), where M_r is the sum of
    falling factorials of the degrees; the vanishing remainder term is
    dropped, so treat it as correct up to a 1+o(1) factor.  ``exact`` is
    computed by collapsing exhaustive half-edge matchings (degree sum at
    most ``exact_matching_cap``) or by a residual-degree dynamic program
    (degree sum up to ``exact_dp_cap``).
    """
    degrees = [int(d) for d in degrees]
    if any(d < 0 for d in degrees):
        raise ValidationError("degrees must be non-negative")
    m1 = sum(degrees)
    if m1 % 2 != 0:
        raise ValidationError("degree sum must be even")
    if m1 == 0:
        return MultigraphCount(1.0, 1 if want_exact else None)
    m2 = sum(d * (d - 1) for d in degrees)
    x = m2 / (2 * m1)
    log_est = (math.lgamma(m1 + 1) - math.lgamma(m1 / 2 + 1)
               - (m1 / 2) * math.log(2.0)
               - sum(math.lgamma(d + 1) for d in degrees)
               + x + x * x)
    estimate = math.exp(log_est)
    exact = None
    if want_exact:
        if m1 <= exact_matching_cap:
            exact = len(_all_multigraphs(tuple(degrees)))
        elif m1 <= exact_dp_cap:
            exact = _count_multigraphs_dp(degrees)
        else:
            raise ResourceCapError(
                f"exact multigraph count capped at degree sum {exact_dp_cap}")
    return MultigraphCount(estimate, exact)


def pairing_multiplicity(degrees: Sequence[int],
                         edges: Sequence[tuple[int, int]]) -> int:
    """Number of half-edge matchings collapsing to a given multigraph.

    Equals prod(d_v!) / (prod over loop counts of 2^l * l!  *  prod over
    non-loop multiplicities of m!).
    """
    loops: dict[int, int] = {}
    mult: dict[tuple[int, int], int] = {}
    for u, v in edges:
        if u == v:
            loops[u] = loops.get(u, 0) + 1
        else:
            key = (u, v) if u < v else (v, u)
            mult[key] = mult.get(key, 0) + 1
    count = 1
    for d in degrees:
        count *= math.factorial(d)
    denom = 1
    for l in loops.values():
        denom *= (2 ** l) * math.factorial(l)
    for m in mult.values():
        denom *= math.factorial(m)
    return count // denom


# ---------------------------------------------------------------------------
# Closed-form tail bounds.
# ---------------------------------------------------------------------------

def tail_bounds(kind: str, **params) -> float:
    """Closed-form tail bounds and leading-order estimates.

    Kinds:
      * ``"poisson"``  (mean, t): P(Poisson(mean) > t) <= exp(t + t*ln(mean)
        - mean - t*ln(t)) for integer t > mean.
      * ``"negbinom"`` (r, nu, gamma): for the sum of r geometrics with
        success nu, P(NB > gamma*r/nu) <= exp(-gamma*r*(1-1/gamma)**2 / 2).
      * ``"edgeprob"`` (degrees, i, j): leading-order probability d_i*d_j/M1
        that a uniform multigraph with the sequence contains edge ij.
    """
    if kind == "poisson":
        mean, t = float(params["mean"]), params["t"]
        if not (isinstance(t, int) and t > mean):
            raise ValidationError("poisson bound needs integer t > mean")
        return math.exp(t + t * math.log(mean) - mean - t * math.log(t))
    if kind == "negbinom":
        r, nu, gamma = params["r"], float(params["nu"]), float(params["gamma"])
        if r < 1:
            raise ValidationError("negbinom bound needs r >= 1")
        if not (0.0 < nu < 1.0):
            raise ValidationError("negbinom bound needs nu in (0, 1)")
        if gamma <= 1.0:
            raise ValidationError("negbinom bound needs gamma > 1")
        return math.exp(-gamma * r * (1.0 - 1.0 / gamma) ** 2 / 2.0)
    if kind == "edgeprob":
        degrees = params["degrees"]
        i, j = params["i"], params["j"]
        if not (0 <= i < len(degrees) and 0 <= j < len(degrees)):
            raise ValidationError("edgeprob bound: vertex index out of range")
        m1 = sum(degrees)
        if m1 == 0:
            raise ValidationError("edgeprob bound needs a nonzero degree sum")
        return degrees[i] * degrees[j] / m1
    raise ValidationError(f"unknown tail bound kind {kind!r}")


# ---------------------------------------------------------------------------
# Degree-sequence validation.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeSequenceReport:
    """Structural and prefix-budget checks of a kernel degree sequence."""

    structure_ok: bool
    max_degree_ok: Optional[bool]
    prefix_ok: bool
    first_prefix_violation: Optional[int]


def validate_degree_sequence(degrees: Sequence[int], n_ambient: int,
                             c_a: Fraction | float,
                             d_max_threshold: Optional[float] = None,
                             ) -> DegreeSequenceReport:
    """Check kernel degree-sequence structure and prefix-sum growth.

    Structure: every entry is 0 or at least 3 and the retained sum is even.
    Max degree: compared against the caller's threshold when given.  Prefix
    budget: after sorting non-increasing, every prefix sum over i >= 2
    entries must stay within c_a * i * ln(n_ambient) / ln(i); the first
    violating i is reported.  An empty sequence passes vacuously.
    """
    if n_ambient < 2:
        raise ValidationError("ambient size must be at least 2")
    seq = sorted((int(d) for d in degrees), reverse=True)
    structure_ok = all(d == 0 or d >= 3 for d in seq) \
        and sum(d for d in seq if d >= 3) % 2 == 0
    max_degree_ok = None
    if d_max_threshold is not None:
        max_degree_ok = (not seq) or seq[0] <= d_max_threshold
    ca = float(c_a)
    log_n = math.log(n_ambient)
    prefix = 0
    first_violation = None
    for i, d in enumerate(seq, start=1):
        prefix += d
        if i >= 2 and prefix > ca * i * log_n / math.log(i):
            first_violation = i
            break
    return DegreeSequenceReport(structure_ok=structure_ok,
                                max_degree_ok=max_degree_ok,
                                prefix_ok=first_violation is None,
                                first_prefix_violation=first_violation)
