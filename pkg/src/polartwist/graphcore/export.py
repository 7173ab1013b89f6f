"""graph6, edge-list and JSON report serialisation."""
from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass

import numpy as np

from .graph import DenseGraph

REPORT_SCHEMA_VERSION = 1
GRAPH6_MAX_N = 68719476735


class FormatOverflow(ValueError):
    pass


def _n_bytes(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= GRAPH6_MAX_N:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise FormatOverflow(f"graph6 cannot encode n={n}")


def to_graph6(G: DenseGraph, header: bool = False) -> bytes:
    """graph6 encoding: upper triangle column by column, 6 bits per byte."""
    n = G.n
    out = bytearray(b">>graph6<<" if header else b"")
    out += _n_bytes(n)
    if n > 1:
        e = G.edges()
        # bit index of (i, j), i < j, in the column-wise upper triangle
        bits = np.zeros(n * (n - 1) // 2, dtype=bool)
        bits[e[:, 1] * (e[:, 1] - 1) // 2 + e[:, 0]] = True
        pad = (-len(bits)) % 6
        bits = np.concatenate([bits, np.zeros(pad, dtype=bool)]).reshape(-1, 6)
        vals = bits.astype(np.uint8) @ (1 << np.arange(5, -1, -1)).astype(np.uint8)
        out += (vals + 63).astype(np.uint8).tobytes()
    return bytes(out)


def from_graph6(data: bytes | str) -> DenseGraph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    b = np.frombuffer(data, dtype=np.uint8).astype(np.int64) - 63
    if b[0] < 63:
        n, pos = int(b[0]), 1
    elif b[1] < 63:
        n, pos = int((b[1] << 12) | (b[2] << 6) | b[3]), 4
    else:
        n = 0
        for v in b[2:8]:
            n = (n << 6) | int(v)
        pos = 8
    body = b[pos:]
    bits = ((body[:, None] >> np.arange(5, -1, -1)[None, :]) & 1).ravel()[: n * (n - 1) // 2]
    idx = np.nonzero(bits)[0]
    # invert k = j(j-1)/2 + i
    j = ((1 + np.sqrt(1 + 8 * idx)) // 2).astype(np.int64)
    j = np.where(j * (j - 1) // 2 > idx, j - 1, j)
    j = np.where((j + 1) * j // 2 <= idx, j + 1, j)
    i = idx - j * (j - 1) // 2
    return DenseGraph.from_edges(n, np.stack([i, j], axis=1))


def to_edgelist(G: DenseGraph) -> bytes:
    return "".join(f"{u} {v}\n" for u, v in G.edges().tolist()).encode()


def from_edgelist(data: bytes | str, n: int) -> DenseGraph:
    if isinstance(data, bytes):
        data = data.decode()
    edges = [tuple(map(int, line.split())) for line in data.splitlines() if line.strip()]
    return DenseGraph.from_edges(n, edges)


def jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def json_report(construction: str, q: int, parameters: dict, checks: list[dict], timings: dict | None = None) -> bytes:
    """Report schema: ``{schema, construction, q, parameters, checks, timings}``.

    Each check is ``{name, mode, pass, details}``.
    """
    doc = {
        "schema": REPORT_SCHEMA_VERSION,
        "construction": construction,
        "q": q,
        "parameters": jsonable(parameters),
        "checks": [jsonable(c) for c in checks],
        "timings": jsonable(timings or {}),
    }
    return (json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode()


def export(G: DenseGraph, fmt: str, **report) -> bytes:
    if fmt == "graph6":
        return to_graph6(G)
    if fmt == "edgelist":
        return to_edgelist(G)
    if fmt == "json-report":
        return json_report(**report)
    raise ValueError(f"unknown format {fmt!r}")
