"""Text and JSON serializations used by the CLI.

Digraph text format::

    n m
    u v        (m lines, 0-indexed, LF-terminated)
"""
from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .digraph import Digraph


class FormatError(ValueError):
    pass


def _ints(line: str, lineno: int, count: int) -> list[int]:
    fields = line.split()
    if len(fields) != count:
        raise FormatError(f"line {lineno}: expected {count} integers, got {line!r}")
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise FormatError(f"line {lineno}: not an integer in {line!r}") from None


def parse_digraph(text: str) -> Digraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("line 1: empty input, expected header 'n m'")
    n, m = _ints(lines[0], 1, 2)
    if n < 0 or m < 0:
        raise FormatError("line 1: n and m must be non-negative")
    if len(lines) - 1 != m:
        raise FormatError(f"line 1: header announces {m} arcs but {len(lines) - 1} arc lines follow")
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        u, v = _ints(line, lineno, 2)
        if u == v:
            raise FormatError(f"line {lineno}: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {lineno}: arc ({u}, {v}) out of range 0..{n - 1}")
        if (u, v) in seen:
            raise FormatError(f"line {lineno}: duplicate arc ({u}, {v})")
        seen.add((u, v))
    return Digraph(n, frozenset(seen))


def format_digraph(D: Digraph) -> str:
    out = [f"{D.n} {D.m}"]
    out.extend(f"{u} {v}" for u, v in D.sorted_arcs())
    return "\n".join(out) + "\n"


def read_digraph(path) -> Digraph:
    with open(path, encoding="ascii") as fh:
        return parse_digraph(fh.read())


def write_digraph(D: Digraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_digraph(D))


def packing_to_dict(n: int, S: Sequence[int], parts: Iterable[Iterable[tuple[int, int]]]) -> dict:
    return {
        "n": n,
        "S": list(S),
        "parts": [[list(a) for a in sorted(p)] for p in parts],
    }


def packing_to_json(n: int, S: Sequence[int], parts) -> str:
    return json.dumps(packing_to_dict(n, S, parts), sort_keys=True)


def packing_from_dict(data: Mapping) -> tuple[int, tuple[int, ...], list[frozenset]]:
    try:
        n = int(data["n"])
        S = tuple(int(v) for v in data["S"])
        parts = [frozenset((int(a[0]), int(a[1])) for a in part) for part in data["parts"]]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise FormatError(f"malformed certificate: {exc}") from None
    return n, S, parts


def parse_cycle_cover(text: str) -> list[tuple[int, ...]]:
    """Parse ``"0-1,2-3-4"`` into ``[(0, 1), (2, 3, 4)]``."""
    text = text.strip()
    if not text:
        return []
    cycles = []
    for chunk in text.split(","):
        try:
            cycles.append(tuple(int(v) for v in chunk.strip().split("-")))
        except ValueError:
            raise FormatError(f"bad cycle {chunk!r} in cover {text!r}") from None
    return cycles


def format_cycle_cover(cycles: Iterable[Sequence[int]]) -> str:
    return ",".join("-".join(str(v) for v in c) for c in cycles)


def parse_vertex_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise FormatError(f"bad vertex list {text!r}") from None


def format_terminal_map(mapping: Mapping[str, int]) -> str:
    return "".join(f"{name}: {v}\n" for name, v in mapping.items())


def parse_terminal_map(text: str) -> dict[str, int]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        name, sep, value = line.partition(":")
        if not sep:
            raise FormatError(f"line {lineno}: expected 'name: vertex-id'")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise FormatError(f"line {lineno}: bad vertex id {value.strip()!r}") from None
    return out


def to_dot(D: Digraph, name: str = "D") -> str:
    lines = [f"digraph {name} {{"]
    lines.extend(f"  {v};" for v in D.vertices)
    lines.extend(f"  {u} -> {v};" for u, v in D.sorted_arcs())
    lines.append("}")
    return "\n".join(lines) + "\n"
