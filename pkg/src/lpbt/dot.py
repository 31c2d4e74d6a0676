"""Graphviz DOT rendering of a model's moment tree."""

from __future__ import annotations

from .model import BtModel, Point, covering_pairs


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(model: BtModel, highlight: Point | None = None) -> str:
    """One node per moment, one edge per covering pair labelled with the histories through it."""
    lines = ["digraph bt {", "  rankdir=TB;", "  node [shape=circle];"]
    for m in model.moments:
        attrs = [f"label={_quote(m)}"]
        if highlight is not None and highlight.moment == m:
            attrs = [f"label={_quote(highlight.ref())}", "style=filled", "fillcolor=gold"]
        lines.append(f"  {_quote(m)} [{', '.join(attrs)}];")
    for a, b in covering_pairs(model.moments, model.precedence):
        hs = [i for i, h in enumerate(model.histories) if a in h and b in h]
        attrs = [f"label={_quote(','.join(f'h{i}' for i in hs))}"]
        if highlight is not None and highlight.history in hs:
            attrs.append("penwidth=2")
        lines.append(f"  {_quote(a)} -> {_quote(b)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
