"""JSON persistence for graphs, embeddings, and two-core samples.

Formats (shared across the package):

  graph     {"n": int, "edges": [[u, v], ...], "labels": {"id": str}?}
            parallel edges repeated, loops as [v, v]; edge order preserved.
  embedding {"positions": ["p/q" | "int", ...]}  exact rationals as strings.
  sample    {"degseq": [...], "kernel": <graph>, "path_lengths": [...],
             "core": <graph>}

``load(store(x))`` returns an object equal to ``x`` for every supported
type; parse errors carry the offending JSON locus.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Union

from .errors import ValidationError
from .graphcore import Multigraph
from .linegeom import LineEmbedding
from .randmodels import DegreeSequenceSample, TwoCoreSample

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")

Payload = Union[Multigraph, LineEmbedding, TwoCoreSample]


def graph_to_json(g: Multigraph) -> dict:
    out: dict[str, Any] = {"n": g.vertex_count,
                           "edges": [[u, v] for u, v in g.edges]}
    if g.labels is not None:
        out["labels"] = {str(k): v for k, v in g.labels.items()}
    return out


def graph_from_json(obj, locus: str = "graph") -> Multigraph:
    if not isinstance(obj, dict):
        raise ValidationError(f"{locus}: expected an object")
    if "n" not in obj or "edges" not in obj:
        raise ValidationError(f"{locus}: missing 'n' or 'edges'")
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"{locus}.n: expected a non-negative integer")
    edges = []
    for i, e in enumerate(obj["edges"]):
        if (not isinstance(e, list)) or len(e) != 2 \
                or not all(isinstance(x, int) for x in e):
            raise ValidationError(f"{locus}.edges[{i}]: expected [u, v] integers")
        edges.append((e[0], e[1]))
    labels = None
    if "labels" in obj and obj["labels"] is not None:
        labels = {}
        for k, v in obj["labels"].items():
            try:
                key = int(k)
            except ValueError:
                raise ValidationError(f"{locus}.labels: key {k!r} is not an id")
            if not isinstance(v, str):
                raise ValidationError(f"{locus}.labels[{k}]: expected a string")
            labels[key] = v
    try:
        return Multigraph(n, edges, labels)
    except ValidationError as exc:
        raise ValidationError(f"{locus}: {exc}") from exc


def rational_to_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def rational_from_json(obj, locus: str) -> Fraction:
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str) and _RATIONAL_RE.match(obj):
        return Fraction(obj)
    raise ValidationError(f"{locus}: expected an integer or 'p/q' string")


def embedding_to_json(emb: LineEmbedding) -> dict:
    return {"positions": [rational_to_str(p) for p in emb.positions]}


def embedding_from_json(obj, locus: str = "embedding") -> LineEmbedding:
    if not isinstance(obj, dict) or "positions" not in obj:
        raise ValidationError(f"{locus}: expected an object with 'positions'")
    positions = [rational_from_json(p, f"{locus}.positions[{i}]")
                 for i, p in enumerate(obj["positions"])]
    try:
        return LineEmbedding(positions)
    except ValidationError as exc:
        raise ValidationError(f"{locus}: {exc}") from exc


def sample_to_json(sample: TwoCoreSample) -> dict:
    return {"degseq": list(sample.degseq.degrees),
            "poisson_mean": sample.degseq.poisson_mean,
            "kernel": graph_to_json(sample.kernel),
            "kernel_to_ambient": list(sample.kernel_to_ambient),
            "path_lengths": list(sample.path_lengths),
            "core": graph_to_json(sample.core),
            "kernel_law": sample.kernel_law}


def sample_from_json(obj, locus: str = "sample") -> TwoCoreSample:
    from .graphcore import connected_components, induced_subgraph, kernel_decompose

    for key in ("degseq", "kernel", "path_lengths", "core"):
        if not isinstance(obj, dict) or key not in obj:
            raise ValidationError(f"{locus}: missing '{key}'")
    degrees = obj["degseq"]
    if not all(isinstance(d, int) and d >= 0 for d in degrees):
        raise ValidationError(f"{locus}.degseq: expected non-negative integers")
    degseq = DegreeSequenceSample(float(obj.get("poisson_mean", 0.0)),
                                  tuple(degrees))
    kernel = graph_from_json(obj["kernel"], f"{locus}.kernel")
    core = graph_from_json(obj["core"], f"{locus}.core")
    path_lengths = obj["path_lengths"]
    if not all(isinstance(x, int) and x >= 1 for x in path_lengths):
        raise ValidationError(f"{locus}.path_lengths: expected integers >= 1")
    if len(path_lengths) != len(kernel.edges):
        raise ValidationError(f"{locus}.path_lengths: length mismatch with kernel")
    k2a = tuple(obj.get("kernel_to_ambient",
                        range(kernel.vertex_count)))
    if kernel.vertex_count == 0:
        decomposition = None
        connected = True
    else:
        comps = connected_components(core)
        connected = len(comps) == 1
        comp = max(comps, key=len)
        decomposition = kernel_decompose(
            core if connected else induced_subgraph(core, comp))
    return TwoCoreSample(degseq=degseq, kernel=kernel, kernel_to_ambient=k2a,
                         path_lengths=tuple(path_lengths), core=core,
                         decomposition=decomposition, connected=connected,
                         kernel_law=str(obj.get("kernel_law", "pairing")))


def _payload_to_json(payload: Payload) -> dict:
    if isinstance(payload, Multigraph):
        return graph_to_json(payload)
    if isinstance(payload, LineEmbedding):
        return embedding_to_json(payload)
    if isinstance(payload, TwoCoreSample):
        return sample_to_json(payload)
    raise ValidationError(f"unsupported payload type {type(payload).__name__}")


def _payload_from_json(obj) -> Payload:
    if isinstance(obj, dict):
        if "positions" in obj:
            return embedding_from_json(obj)
        if "degseq" in obj:
            return sample_from_json(obj)
        if "n" in obj:
            return graph_from_json(obj)
    raise ValidationError("unrecognized payload shape")


def graph_io(direction: str, path, payload: Payload | None = None) -> Payload:
    """Load or store a graph, embedding, or two-core sample as JSON.

    ``load`` infers the payload kind from the JSON shape; ``store``
    dispatches on the object type and returns the payload unchanged.
    """
    if direction == "store":
        if payload is None:
            raise ValidationError("store needs a payload")
        with open(path, "w") as fh:
            json.dump(_payload_to_json(payload), fh, indent=1)
            fh.write("\n")
        return payload
    if direction == "load":
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: invalid JSON at line "
                                      f"{exc.lineno}, column {exc.colno}") from exc
        return _payload_from_json(obj)
    raise ValidationError(f"unknown direction {direction!r}")
