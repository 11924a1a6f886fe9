"""Bit-exact text formats for relations (RBOX v1) and hypergraphs (HG v1).

RBOX v1 (UTF-8, LF):
    RBOX 1
    r n1 n2 ... nr m
    <m lines of r space-separated zero-based indices, strict lex order>

HG v1:
    HG 1
    r n m
    <m lines of r strictly increasing vertex indices>

Readers are strict: duplicates, misordered rows, bounds violations and
count mismatches are format errors naming the offending line.  Writers emit
canonical form, so write -> read is the identity and files hash stably.
"""

from __future__ import annotations

import io
from typing import Sequence, TextIO

from .errors import FormatError
from .relation import Relation

__all__ = ["dumps_rbox", "write_rbox", "loads_rbox", "read_rbox", "dumps_hg", "write_hg", "loads_hg", "read_hg"]


def dumps_rbox(relation: Relation) -> str:
    lines = ["RBOX 1"]
    lines.append(" ".join(["%d" % relation.r, *(str(n) for n in relation.axis_sizes), str(relation.size)]))
    lines.extend(" ".join(str(v) for v in t) for t in relation.tuples)
    return "\n".join(lines) + "\n"


def write_rbox(relation: Relation, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_rbox(relation))


def _ints(line: str, lineno: int, where: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise FormatError(f"{where}:{lineno}: not an integer row: {line!r}") from exc


def loads_rbox(text: str, where: str = "<string>") -> Relation:
    fh = io.StringIO(text)
    return _read_rbox(fh, where)


def read_rbox(path) -> Relation:
    with open(path, "r", encoding="utf-8") as fh:
        return _read_rbox(fh, str(path))


def _read_rbox(fh: TextIO, where: str) -> Relation:
    header = fh.readline()
    if header.strip() != "RBOX 1":
        raise FormatError(f"{where}:1: expected header 'RBOX 1', got {header.strip()!r}")
    meta_line = fh.readline()
    if not meta_line:
        raise FormatError(f"{where}:2: missing size line")
    meta = _ints(meta_line, 2, where)
    if len(meta) < 3:
        raise FormatError(f"{where}:2: size line needs r, axis sizes and m")
    r = meta[0]
    if r < 1 or len(meta) != r + 2:
        raise FormatError(f"{where}:2: size line has {len(meta)} fields, expected r + 2 = {r + 2}")
    sizes = tuple(meta[1 : r + 1])
    if any(n < 1 for n in sizes):
        raise FormatError(f"{where}:2: axis sizes must be positive, got {sizes}")
    m = meta[r + 1]
    if m < 0:
        raise FormatError(f"{where}:2: negative tuple count {m}")
    tuples: list[tuple[int, ...]] = []
    prev: tuple[int, ...] | None = None
    lineno = 2
    for raw in fh:
        lineno += 1
        if not raw.strip():
            continue
        row = _ints(raw, lineno, where)
        if len(row) != r:
            raise FormatError(f"{where}:{lineno}: row has {len(row)} fields, expected {r}")
        t = tuple(row)
        for i, v in enumerate(t):
            if not 0 <= v < sizes[i]:
                raise FormatError(f"{where}:{lineno}: index {v} out of bounds on axis {i} (size {sizes[i]})")
        if prev is not None:
            if t == prev:
                raise FormatError(f"{where}:{lineno}: duplicate tuple {t}")
            if t < prev:
                raise FormatError(f"{where}:{lineno}: tuples not in lexicographic order")
        tuples.append(t)
        prev = t
    if len(tuples) != m:
        raise FormatError(f"{where}:{lineno}: found {len(tuples)} tuples, size line says {m}")
    return Relation(sizes, tuple(tuples))


def dumps_hg(edges: Sequence[Sequence[int]], n: int, r: int) -> str:
    lines = ["HG 1", f"{r} {n} {len(edges)}"]
    lines.extend(" ".join(str(v) for v in e) for e in edges)
    return "\n".join(lines) + "\n"


def write_hg(edges: Sequence[Sequence[int]], n: int, r: int, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_hg(edges, n, r))


def loads_hg(text: str, where: str = "<string>"):
    fh = io.StringIO(text)
    return _read_hg(fh, where)


def read_hg(path):
    with open(path, "r", encoding="utf-8") as fh:
        return _read_hg(fh, str(path))


def _read_hg(fh: TextIO, where: str):
    header = fh.readline()
    if header.strip() != "HG 1":
        raise FormatError(f"{where}:1: expected header 'HG 1', got {header.strip()!r}")
    meta_line = fh.readline()
    if not meta_line:
        raise FormatError(f"{where}:2: missing size line")
    meta = _ints(meta_line, 2, where)
    if len(meta) != 3:
        raise FormatError(f"{where}:2: size line needs 'r n m'")
    r, n, m = meta
    if r < 2 or n < 1 or m < 0:
        raise FormatError(f"{where}:2: invalid sizes r={r} n={n} m={m}")
    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    lineno = 2
    for raw in fh:
        lineno += 1
        if not raw.strip():
            continue
        row = _ints(raw, lineno, where)
        if len(row) != r:
            raise FormatError(f"{where}:{lineno}: edge has {len(row)} vertices, expected {r}")
        if any(b <= a for a, b in zip(row, row[1:])):
            raise FormatError(f"{where}:{lineno}: vertices must be strictly increasing")
        if row[0] < 0 or row[-1] >= n:
            raise FormatError(f"{where}:{lineno}: vertex out of range [0, {n})")
        e = tuple(row)
        if e in seen:
            raise FormatError(f"{where}:{lineno}: duplicate edge {e}")
        seen.add(e)
        edges.append(e)
    if len(edges) != m:
        raise FormatError(f"{where}:{lineno}: found {len(edges)} edges, size line says {m}")
    return tuple(edges), n, r
