"""Timestamped edge streams: parsing, validation and normalization.

Edges are undirected. Every retained edge is stored as ``(u, v, t)`` with
``u < v``; self-loops are dropped and tallied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence, Union

HEADER = ("src", "dst", "timestamp")


class StreamError(ValueError):
    """Base class for edge stream input errors."""


class ParseError(StreamError):
    def __init__(self, lineno: int, line: str, reason: str = "expected 'u,v,t' integers"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class ValidationError(StreamError):
    pass


class TimedEdge(NamedTuple):
    u: int
    v: int
    t: int


@dataclass(frozen=True)
class EdgeStream:
    """Normalized, time-ordered edge stream.

    ``edges`` is sorted by ``(t, u, v)``. ``t_min``/``t_max`` are ``None`` for an
    empty stream.
    """

    edges: tuple[TimedEdge, ...]
    node_count: int
    t_min: Optional[int]
    t_max: Optional[int]
    dropped_self_loops: int = 0
    nodes: frozenset[int] = field(default=frozenset(), repr=False)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    @property
    def empty(self) -> bool:
        return not self.edges


def normalize(edges: Iterable[Sequence[int]]) -> EdgeStream:
    """Drop self-loops, order endpoints, and sort by ``(t, u, v)``.

    Duplicate triples are kept. The node count covers endpoints of retained
    edges only.
    """
    kept = []
    dropped = 0
    for u, v, t in edges:
        u, v, t = int(u), int(v), int(t)
        if u == v:
            dropped += 1
            continue
        if u > v:
            u, v = v, u
        kept.append(TimedEdge(u, v, t))
    kept.sort(key=lambda e: (e.t, e.u, e.v))
    nodes = frozenset(x for e in kept for x in (e.u, e.v))
    if isinstance(edges, EdgeStream):
        dropped += edges.dropped_self_loops
    return EdgeStream(
        edges=tuple(kept),
        node_count=len(nodes),
        t_min=kept[0].t if kept else None,
        t_max=kept[-1].t if kept else None,
        dropped_self_loops=dropped,
        nodes=nodes,
    )


def _parse_int(token: str) -> int:
    token = token.strip()
    # int() accepts "1_000" and surrounding junk like "+5"; keep it strict
    if not token or not token.lstrip("-").isdigit():
        raise ValueError(token)
    return int(token)


def parse_edge_stream(source: Union[str, Iterable[str]]) -> EdgeStream:
    """Parse ``u,v,t`` lines into a normalized :class:`EdgeStream`.

    ``source`` is either the full text or an iterable of lines. Blank lines,
    ``#`` comments and a leading ``src,dst,timestamp`` header are skipped.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    raw = []
    seen_data = False
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = [p.strip() for p in text.split(",")]
        if not seen_data and tuple(p.lower() for p in parts) == HEADER:
            seen_data = True
            continue
        seen_data = True
        if len(parts) != 3:
            raise ParseError(lineno, line.rstrip("\n"))
        try:
            u, v, t = (_parse_int(p) for p in parts)
        except ValueError:
            raise ParseError(lineno, line.rstrip("\n")) from None
        if t < 0:
            raise ValidationError(f"line {lineno}: negative timestamp {t}")
        if u < 0 or v < 0:
            raise ValidationError(f"line {lineno}: negative node id in {line.strip()!r}")
        raw.append((u, v, t))
    return normalize(raw)


def read_edge_stream(path: Union[str, Path]) -> EdgeStream:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_stream(fh)


def write_edge_stream(stream: EdgeStream, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(HEADER) + "\n")
        for u, v, t in stream.edges:
            fh.write(f"{u},{v},{t}\n")
