"""Seeded, reproducible experiments with CSV output and a JSON summary.

Every experiment draws trial ``i`` from a generator seeded with
``per_trial_seed(master_seed, i)``, so runs are byte-identical for a given
master seed regardless of worker scheduling.  The CSV header is fixed per
experiment; the JSON summary echoes the configuration (rerunning with it
reproduces the CSV exactly), a version string, and wall-clock time.

Experiments:

  core-reconstruction   sample a binomial random graph, take the largest
                        two-core component, measure the largest
                        reconstructible set under random integer positions.
  regular-reconstruction  sample a d-regular graph on random integer
                        positions; check whole-vertex-set reconstructibility
                        and the second adjacency eigenvalue.
  anchor-census         sample the two-core model and run the well-anchored
                        census over the kernel.
  path-extension        random paths with mismatched endpoint images; the
                        empirical extension frequency against 1/sqrt(n).
  validate-models       structural checks of the two-core model plus a
                        pairing-uniformity chi-square on degrees (3, 3).
  expansion-audit       vertex-expansion estimates on sampled kernels.
  prune-stats           kernel shrinkage under pruning to a cubic kernel.

Exit codes: 0 success, 2 usage, 3 validation, 4 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import statistics
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .errors import ResourceCapError, RigidityError, ValidationError
from .events import anchor_census
from .graphcore import (Multigraph, connected_components, induced_subgraph,
                        kernel_decompose, prune_to_subcubic,
                        second_adjacency_eigenvalue, two_core_vertices,
                        vertex_expansion_audit)
from .jsonio import graph_io, rational_to_str
from .linegeom import (largest_reconstructible_set, is_reconstructible,
                       path_extension_solutions, random_integer_embedding)
from .randmodels import (ModelParams, sample_gnp, sample_pairing,
                         sample_regular_simple, sample_regular_stub_matching,
                         sample_two_core, validate_degree_sequence)
from .rng import SplitMix64, per_trial_seed

EXPERIMENTS = ("core-reconstruction", "regular-reconstruction", "anchor-census",
               "path-extension", "validate-models", "expansion-audit",
               "prune-stats")

_HEADERS = {
    "core-reconstruction": ["trial_index", "per_trial_seed", "status",
                            "core_order", "kernel_order", "largest_size", "ratio"],
    "regular-reconstruction": ["trial_index", "per_trial_seed", "status", "method",
                               "reconstructible", "second_magnitude",
                               "eigenvalue_ok"],
    "anchor-census": ["trial_index", "per_trial_seed", "status", "kernel_order",
                      "fraction", "any_truncated"],
    "path-extension": ["trial_index", "per_trial_seed", "status", "path_length",
                       "trials", "hits", "frequency", "bound", "within_bound"],
    "validate-models": ["trial_index", "per_trial_seed", "status", "structure_ok",
                        "prefix_ok", "roundtrip_ok", "connected", "kernel_order",
                        "core_order", "mean_path_length"],
    "expansion-audit": ["trial_index", "per_trial_seed", "status", "kernel_order",
                        "alpha_sampled", "alpha_exact"],
    "prune-stats": ["trial_index", "per_trial_seed", "status", "kernel_order",
                    "pruned_kernel_order", "retained_fraction", "empty_result"],
}


@dataclass
class ExperimentConfig:
    """Fully determines one experiment run; round-trips through JSON."""

    experiment: str
    n: int = 60
    lam: Fraction = Fraction(3)
    beta: Fraction = Fraction(1, 2)
    c: Fraction = Fraction(1, 2)
    degree: int = 17
    trials: int = 5
    master_seed: int = 0
    caps: dict[str, int] = field(default_factory=dict)
    output_path: str = "experiment.csv"
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.experiment!r}")
        if self.trials < 1:
            raise ValidationError("trials must be at least 1")
        if any(v <= 0 for v in self.caps.values()):
            raise ValidationError("every cap must be positive")
        for name in ("lam", "beta", "c"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                setattr(self, name, Fraction(value))

    def to_json(self) -> dict:
        return {"experiment": self.experiment, "n": self.n,
                "lambda": rational_to_str(self.lam),
                "beta": rational_to_str(self.beta),
                "c": rational_to_str(self.c),
                "degree": self.degree, "trials": self.trials,
                "master_seed": self.master_seed, "caps": dict(self.caps),
                "output_path": self.output_path, "workers": self.workers}

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        return cls(experiment=obj["experiment"], n=obj["n"],
                   lam=Fraction(obj["lambda"]), beta=Fraction(obj["beta"]),
                   c=Fraction(obj["c"]), degree=obj["degree"],
                   trials=obj["trials"], master_seed=obj["master_seed"],
                   caps={k: int(v) for k, v in obj["caps"].items()},
                   output_path=obj["output_path"],
                   workers=obj.get("workers", 1))


def _largest_core_component(g: Multigraph) -> Optional[Multigraph]:
    core_vertices = two_core_vertices(g)
    if not core_vertices:
        return None
    core = induced_subgraph(g, core_vertices)
    comps = connected_components(core)
    biggest = max(comps, key=lambda c: (len(c), [-v for v in c]))
    return induced_subgraph(core, biggest)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------------------
# Per-trial workers.  Each returns the row cells after (index, seed, status).
# ---------------------------------------------------------------------------

def _trial_core_reconstruction(config: ExperimentConfig, rng: SplitMix64) -> list:
    p = Fraction(config.lam, config.n)
    g = sample_gnp(config.n, min(p, Fraction(1)), rng)
    comp = _largest_core_component(g)
    if comp is None:
        return [0, 0, 0, ""]
    decomp = kernel_decompose(comp)
    emb = random_integer_embedding(comp.vertex_count, rng)
    largest = largest_reconstructible_set(
        comp, emb,
        class_cap=config.caps.get("class_cap", 4096),
        combination_cap=config.caps.get("combination_cap", 1 << 20))
    ratio = Fraction(len(largest), comp.vertex_count)
    return [comp.vertex_count, decomp.kernel.vertex_count, len(largest),
            _fmt(ratio)]


def _trial_regular_reconstruction(config: ExperimentConfig, rng: SplitMix64) -> list:
    n, d = config.n, config.degree
    # pairing rejection only while its acceptance odds are reasonable
    half = (d - 1) / 2.0
    expected_attempts = math.exp(half + half * half)
    if expected_attempts <= config.caps.get("rejection_attempts", 2000):
        g = sample_regular_simple(n, d, rng)
        method = "pairing-rejection"
    else:
        g = sample_regular_stub_matching(n, d, rng)
        method = "stub-matching"
    emb = random_integer_embedding(n, rng)
    check = is_reconstructible(g, emb, range(n),
                               class_cap=config.caps.get("class_cap", 4096))
    report = second_adjacency_eigenvalue(g, tolerance=1e-9)
    threshold = 2.0 * math.sqrt(d - 1) + 0.01
    return [method, check.holds, report.second_magnitude,
            report.second_magnitude <= threshold]


def _trial_anchor_census(config: ExperimentConfig, rng: SplitMix64) -> list:
    params = ModelParams(n=config.n, lam=config.lam)
    sample = sample_two_core(params, rng)
    if sample.empty or sample.decomposition is None \
            or sample.decomposition.kernel.vertex_count == 0:
        return ["", "", ""]
    result = anchor_census(sample.decomposition, config.beta, config.n,
                           size_cap=config.caps.get("census_size"))
    return [sample.decomposition.kernel.vertex_count,
            float(result.fraction), result.any_truncated]


def _trial_path_extension(config: ExperimentConfig, rng: SplitMix64,
                          path_length: int) -> list:
    n = config.n
    positions = random_integer_embedding(n, rng).positions
    hits = 0
    for _ in range(config.trials):
        picks = rng.sample_indices(n, path_length + 1)
        pos_u = positions[picks[0]]
        pos_v = positions[picks[-1]]
        interior = [positions[i] for i in picks[1:-1]]
        img_u = pos_u
        while True:
            img_v = positions[rng.randrange(n)]
            if abs(img_v - img_u) != abs(pos_v - pos_u):
                break
        count = path_extension_solutions(pos_u, pos_v, img_u, img_v, interior)
        if count.total >= 1:
            hits += 1
    frequency = hits / config.trials
    bound = 1.0 / math.sqrt(n)
    return [path_length, config.trials, hits, frequency, bound,
            frequency <= bound]


def _trial_validate_models(config: ExperimentConfig, rng: SplitMix64) -> list:
    params = ModelParams(n=config.n, lam=config.lam)
    sample = sample_two_core(params, rng)
    if sample.empty:
        return ["", "", "", "", 0, 0, ""]
    kernel_degrees = [d for d in sample.degseq.degrees if d >= 3]
    report = validate_degree_sequence(sample.degseq.kernel_degrees, config.n,
                                      c_a=config.caps.get("prefix_budget", 10))
    roundtrip = True
    if sample.connected and sample.decomposition is not None:
        got = sorted((min(u, v), max(u, v),
                      sample.decomposition.path_edge_count(j))
                     for j, (u, v) in enumerate(sample.decomposition.kernel.edges))
        want = sorted((min(u, v), max(u, v), sample.path_lengths[j])
                      for j, (u, v) in enumerate(sample.kernel.edges))
        roundtrip = got == want
    mean_len = sum(sample.path_lengths) / len(sample.path_lengths) \
        if sample.path_lengths else 0.0
    return [report.structure_ok, report.prefix_ok, roundtrip, sample.connected,
            sample.kernel.vertex_count, sample.core.vertex_count, mean_len]


def _trial_expansion_audit(config: ExperimentConfig, rng: SplitMix64) -> list:
    params = ModelParams(n=config.n, lam=config.lam)
    sample = sample_two_core(params, rng)
    kernel = sample.kernel
    if kernel.vertex_count == 0:
        return [0, "", ""]
    alpha_sampled = vertex_expansion_audit(
        kernel, config.c, mode="sampled",
        sample_budget=config.caps.get("expansion_budget", 200), rng=rng)
    exact_cap = config.caps.get("expansion_exact", 14)
    alpha_exact: Any = ""
    if kernel.vertex_count <= exact_cap:
        alpha_exact = float(vertex_expansion_audit(kernel, config.c,
                                                   mode="exact",
                                                   exact_cap=exact_cap))
    return [kernel.vertex_count, float(alpha_sampled), alpha_exact]


def _trial_prune_stats(config: ExperimentConfig, rng: SplitMix64) -> list:
    params = ModelParams(n=config.n, lam=config.lam)
    sample = sample_two_core(params, rng)
    if sample.decomposition is None \
            or sample.decomposition.kernel.vertex_count == 0:
        return ["", "", "", ""]
    decomp = sample.decomposition
    pruned = prune_to_subcubic(decomp)
    k0 = decomp.kernel.vertex_count
    k1 = pruned.kernel.vertex_count
    return [k0, k1, _fmt(Fraction(k1, k0)), k1 == 0]


def _run_one_trial(config: ExperimentConfig, trial_index: int) -> list:
    seed = per_trial_seed(config.master_seed, trial_index)
    rng = SplitMix64(seed)
    try:
        if config.experiment == "core-reconstruction":
            cells = _trial_core_reconstruction(config, rng)
        elif config.experiment == "regular-reconstruction":
            cells = _trial_regular_reconstruction(config, rng)
        elif config.experiment == "anchor-census":
            cells = _trial_anchor_census(config, rng)
        elif config.experiment == "path-extension":
            s_min = config.caps.get("s_min", 2)
            cells = _trial_path_extension(config, rng, s_min + trial_index)
        elif config.experiment == "validate-models":
            cells = _trial_validate_models(config, rng)
        elif config.experiment == "expansion-audit":
            cells = _trial_expansion_audit(config, rng)
        elif config.experiment == "prune-stats":
            cells = _trial_prune_stats(config, rng)
        else:  # pragma: no cover - guarded by config validation
            raise ValidationError(f"unknown experiment {config.experiment!r}")
        status = "ok"
    except ResourceCapError as exc:
        width = len(_HEADERS[config.experiment]) - 3
        cells = [""] * width
        status = f"failed:{exc.__class__.__name__}"
    return [trial_index, seed, status] + [_fmt(c) for c in cells]


def _trial_count(config: ExperimentConfig) -> int:
    if config.experiment == "path-extension":
        s_min = config.caps.get("s_min", 2)
        s_max = config.caps.get("s_max", 10)
        if s_max < s_min:
            raise ValidationError("path-extension needs s_max >= s_min")
        return s_max - s_min + 1
    return config.trials


@dataclass
class ExperimentResult:
    rows: list[list]
    csv_path: Path
    summary_path: Path
    summary: dict


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every trial, write the CSV and JSON summary, and return both."""
    start = time.monotonic()
    count = _trial_count(config)
    indices = list(range(count))
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_run_one_trial, [config] * count, indices))
    else:
        rows = [_run_one_trial(config, i) for i in indices]
    rows.sort(key=lambda r: r[0])

    csv_path = Path(config.output_path)
    if csv_path.parent != Path(""):
        csv_path.parent.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_HEADERS[config.experiment])
    writer.writerows(rows)
    csv_path.write_text(buffer.getvalue())

    failed = sum(1 for r in rows if str(r[2]).startswith("failed"))
    summary = {"config": config.to_json(),
               "version": _version_string(),
               "wall_clock_seconds": time.monotonic() - start,
               "rows": len(rows),
               "trials_failed": failed}
    summary.update(_aggregate(config, rows))
    summary_path = _summary_path(csv_path)
    summary_path.write_text(json.dumps(summary, indent=1) + "\n")
    return ExperimentResult(rows, csv_path, summary_path, summary)


def _summary_path(csv_path: Path) -> Path:
    if csv_path.suffix == ".csv":
        return csv_path.with_suffix(".summary.json")
    return Path(str(csv_path) + ".summary.json")


def _aggregate(config: ExperimentConfig, rows: list[list]) -> dict:
    header = _HEADERS[config.experiment]
    ok = [dict(zip(header, r)) for r in rows if r[2] == "ok"]
    out: dict[str, Any] = {}
    if config.experiment == "core-reconstruction":
        ratios = [float(r["ratio"]) for r in ok if r["ratio"] != ""]
        if ratios:
            out["median_ratio"] = statistics.median(ratios)
    elif config.experiment == "regular-reconstruction":
        if ok:
            out["reconstructible_fraction"] = \
                sum(1 for r in ok if r["reconstructible"] == "true") / len(ok)
            out["eigenvalue_ok_fraction"] = \
                sum(1 for r in ok if r["eigenvalue_ok"] == "true") / len(ok)
    elif config.experiment == "anchor-census":
        fracs = [float(r["fraction"]) for r in ok if r["fraction"] != ""]
        if fracs:
            out["mean_fraction"] = sum(fracs) / len(fracs)
    elif config.experiment == "path-extension":
        out["max_frequency"] = max((float(r["frequency"]) for r in ok), default=0.0)
        out["all_within_bound"] = all(r["within_bound"] == "true" for r in ok)
    elif config.experiment == "validate-models":
        out["all_structure_ok"] = all(r["structure_ok"] == "true" for r in ok)
        out["all_roundtrip_ok"] = all(r["roundtrip_ok"] == "true" for r in ok)
    elif config.experiment == "prune-stats":
        fracs = [float(r["retained_fraction"]) for r in ok
                 if r["retained_fraction"] != ""]
        if fracs:
            out["mean_retained_fraction"] = sum(fracs) / len(fracs)
    return out


def _version_string() -> str:
    version = __version__
    try:
        described = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True,
            text=True, timeout=5)
        if described.returncode == 0:
            return f"{version}+{described.stdout.strip()}"
    except Exception:
        pass
    return version


# ---------------------------------------------------------------------------
# Command line.
# ---------------------------------------------------------------------------

def _extract_caps(argv: list[str]) -> tuple[list[str], dict[str, int]]:
    """Pull --cap.<name> <value> (or --cap.<name>=<value>) pairs out of argv."""
    rest: list[str] = []
    caps: dict[str, int] = {}
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--cap."):
            name, eq, value = tok[len("--cap."):].partition("=")
            if not eq:
                if i + 1 >= len(argv):
                    raise ValidationError(f"--cap.{name} needs a value")
                value = argv[i + 1]
                i += 1
            try:
                caps[name] = int(value)
            except ValueError:
                raise ValidationError(f"--cap.{name} needs an integer value")
        else:
            rest.append(tok)
        i += 1
    return rest, caps


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidity",
        description="Seeded experiments over line-rigidity structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--n", type=int, default=60)
        sp.add_argument("--lambda", dest="lam", type=_fraction_arg,
                        default=Fraction(3))
        sp.add_argument("--beta", type=_fraction_arg, default=Fraction(1, 2))
        sp.add_argument("--c", type=_fraction_arg, default=Fraction(1, 2))
        sp.add_argument("--degree", type=int, default=17)
        sp.add_argument("--trials", type=int, default=5)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--out", default=f"{name}.csv")

    gp = sub.add_parser("graph", help="validate and canonicalize JSON payloads")
    gsub = gp.add_subparsers(dest="graph_command", required=True)
    gl = gsub.add_parser("load", help="load and validate a payload")
    gl.add_argument("path")
    gs = gsub.add_parser("store", help="re-store a payload canonically")
    gs.add_argument("path")
    gs.add_argument("--from", dest="source", required=True)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, caps = _extract_caps(argv)
        args = _build_parser().parse_args(argv)
        if args.command == "graph":
            if args.graph_command == "load":
                payload = graph_io("load", args.path)
                print(f"loaded {type(payload).__name__} from {args.path}")
            else:
                payload = graph_io("load", args.source)
                graph_io("store", args.path, payload)
                print(f"stored {type(payload).__name__} to {args.path}")
            return 0
        config = ExperimentConfig(experiment=args.command, n=args.n,
                                  lam=args.lam, beta=args.beta, c=args.c,
                                  degree=args.degree, trials=args.trials,
                                  master_seed=args.seed, caps=caps,
                                  output_path=args.out, workers=args.workers)
        result = run_experiment(config)
        print(f"wrote {result.csv_path} ({len(result.rows)} rows, "
              f"{result.summary['trials_failed']} failed) and {result.summary_path}")
        return 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except RigidityError as exc:  # pragma: no cover - unclassified library error
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
