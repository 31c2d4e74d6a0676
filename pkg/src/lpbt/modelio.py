"""JSON model files.

Point references are ``moment@historyIndex``; a bare ``moment`` stands for
every point at that moment. Precedence pairs are ``[earlier, later]`` and are
transitively closed on load unless ``close=False``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .model import BtModel, ModelError, Point, SimilarityOrder, compute_histories, transitive_closure

TOP_FIELDS = {"moments", "precedence", "histories", "valuation", "similarity", "instants"}
SIMILARITY_FIELDS = {"ranks", "pairs", "scope"}


class ModelFormatError(ModelError):
    pass


def parse_point_ref(ref: str, histories, moments=None) -> list[Point]:
    """Expand a point reference into the points it names."""
    if not isinstance(ref, str) or not ref:
        raise ModelFormatError(f"bad point reference {ref!r}")
    if "@" in ref:
        moment, _, idx = ref.partition("@")
        try:
            h = int(idx)
        except ValueError:
            raise ModelFormatError(f"bad history index in {ref!r}") from None
        if moments is not None and moment not in moments:
            raise ModelFormatError(f"unknown moment in point reference {ref!r}")
        if not 0 <= h < len(histories) or moment not in histories[h]:
            raise ModelFormatError(f"{ref!r} is not a point: {moment} does not lie on history {h}")
        return [Point(moment, h)]
    pts = [Point(ref, i) for i, h in enumerate(histories) if ref in h]
    if not pts:
        raise ModelFormatError(f"unknown moment in point reference {ref!r}")
    return pts


def model_from_dict(data: dict[str, Any], *, close: bool = True) -> BtModel:
    if not isinstance(data, dict):
        raise ModelFormatError("model document must be an object")
    unknown = set(data) - TOP_FIELDS
    if unknown:
        raise ModelFormatError(f"unknown fields: {', '.join(sorted(unknown))}")
    if "moments" not in data or "precedence" not in data:
        raise ModelFormatError("fields 'moments' and 'precedence' are required")
    moments = [str(m) for m in data["moments"]]
    try:
        pairs = [(str(a), str(b)) for a, b in data["precedence"]]
    except (TypeError, ValueError):
        raise ModelFormatError("precedence must be a list of [earlier, later] pairs") from None
    prec = transitive_closure(pairs) if close else frozenset(pairs)
    if "histories" in data:
        histories = tuple(tuple(str(m) for m in h) for h in data["histories"])
    else:
        histories = tuple(compute_histories(moments, prec))

    def refs(items) -> list[Point]:
        out: list[Point] = []
        for r in items:
            out.extend(parse_point_ref(r, histories, moments))
        return out

    valuation = {str(atom): refs(items) for atom, items in (data.get("valuation") or {}).items()}

    similarity: dict[Point, SimilarityOrder] = {}
    for key, spec in (data.get("similarity") or {}).items():
        if not isinstance(spec, dict):
            raise ModelFormatError(f"similarity entry for {key!r} must be an object")
        bad = set(spec) - SIMILARITY_FIELDS
        if bad:
            raise ModelFormatError(f"unknown similarity fields for {key!r}: {', '.join(sorted(bad))}")
        if ("ranks" in spec) == ("pairs" in spec):
            raise ModelFormatError(f"similarity entry for {key!r} needs exactly one of 'ranks' or 'pairs'")
        scope = frozenset(refs(spec["scope"])) if "scope" in spec else None
        for base in parse_point_ref(key, histories, moments):
            if "ranks" in spec:
                ranks = {}
                for r, rank in spec["ranks"].items():
                    if not isinstance(rank, int):
                        raise ModelFormatError(f"rank of {r!r} must be an integer")
                    for p in parse_point_ref(r, histories, moments):
                        ranks[p] = rank
                order = SimilarityOrder.from_ranks(base, ranks, scope)
            else:
                closer = set()
                for pair in spec["pairs"]:
                    if len(pair) != 2:
                        raise ModelFormatError(f"similarity pair {pair!r} must have two entries")
                    for x in parse_point_ref(pair[0], histories, moments):
                        for y in parse_point_ref(pair[1], histories, moments):
                            closer.add((x, y))
                order = SimilarityOrder(base, frozenset(closer), scope)
            similarity[base] = order

    instants = data.get("instants")
    return BtModel.build(
        moments,
        prec,
        valuation=valuation,
        similarity=similarity,
        instants=None if instants is None else [[str(m) for m in b] for b in instants],
        histories=histories,
        close=False,
    )


def load_model(path: str | Path, *, close: bool = True) -> BtModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from None
    return model_from_dict(data, close=close)


def model_to_dict(model: BtModel) -> dict[str, Any]:
    order = {m: i for i, m in enumerate(model.moments)}

    def key(p: Point):
        return (order.get(p.moment, len(order)), p.history)

    doc: dict[str, Any] = {
        "moments": list(model.moments),
        "precedence": sorted(([a, b] for a, b in model.precedence), key=lambda ab: (order[ab[0]], order[ab[1]])),
        "histories": [list(h) for h in model.histories],
        "valuation": {a: [p.ref() for p in sorted(pts, key=key)] for a, pts in sorted(model.valuation.items())},
        "similarity": {},
    }
    for base in sorted(model.similarity, key=key):
        so = model.similarity[base]
        entry: dict[str, Any] = {
            "pairs": [[x.ref(), y.ref()] for x, y in sorted(so.closer, key=lambda xy: (key(xy[0]), key(xy[1])))]
        }
        if so.scope is not None:
            entry["scope"] = [p.ref() for p in sorted(so.scope, key=key)]
        doc["similarity"][base.ref()] = entry
    if model.instants is not None:
        doc["instants"] = [sorted(b, key=order.get) for b in model.instants]
    return doc


def dump_model(model: BtModel, path: str | Path | None = None) -> str:
    text = json.dumps(model_to_dict(model), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
