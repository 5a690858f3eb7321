"""Text file formats and run configuration.

Graphs, labelings, and anonymization secrets all use line-oriented text
formats with '#' comments, aimed at graphs up to n = 16 where text is
still cheap.  All writers are atomic (temp file + rename) and byte-stable:
writing the same data twice produces identical files.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .paths import CrossingEdges, NotPermutation, SpanningPath, UnsupportedN, validate_path
from .pathgraph import AbstractGraph, PathGraph
from .rng import PERMUTATION_ALGORITHM  # noqa: F401  (re-exported: named in file headers)

ENV_PREFIX = "PATHFLIP_"


class FileFormatError(ValueError):
    """A data file does not conform to its format."""


class GraphFormatError(FileFormatError):
    pass


class LabelFormatError(FileFormatError):
    pass


class SecretFormatError(FileFormatError):
    pass


@dataclass(frozen=True)
class Config:
    """Run configuration: a seed, size caps, and the cross-check flag.

    Environment variables (PATHFLIP_SEED, PATHFLIP_DIAMETER_CAP,
    PATHFLIP_AUTOMORPHISM_CAP, PATHFLIP_CROSSCHECK) supply defaults;
    explicit flags take precedence.
    """

    seed: int = 0
    diameter_cap: int = 10_000
    automorphism_cap: int = 48
    cross_check: bool = False

    @classmethod
    def from_env(cls, environ=None) -> "Config":
        env = os.environ if environ is None else environ
        cfg = cls()
        if ENV_PREFIX + "SEED" in env:
            cfg = replace(cfg, seed=int(env[ENV_PREFIX + "SEED"]))
        if ENV_PREFIX + "DIAMETER_CAP" in env:
            cfg = replace(cfg, diameter_cap=int(env[ENV_PREFIX + "DIAMETER_CAP"]))
        if ENV_PREFIX + "AUTOMORPHISM_CAP" in env:
            cfg = replace(cfg, automorphism_cap=int(env[ENV_PREFIX + "AUTOMORPHISM_CAP"]))
        if ENV_PREFIX + "CROSSCHECK" in env:
            cfg = replace(cfg, cross_check=env[ENV_PREFIX + "CROSSCHECK"] not in ("0", "", "false"))
        return cfg


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _data_lines(path: Path) -> list[tuple[int, str]]:
    """(line number, content) for every non-comment, non-blank line."""
    out = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            out.append((lineno, line))
    return out


def read_graph(path: str | Path) -> AbstractGraph:
    """Parse an edge-list graph file: 'N M' header, then M sorted 'u v' lines."""
    path = Path(path)
    lines = _data_lines(path)
    if not lines:
        raise GraphFormatError(f"{path}: missing 'N M' header")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError(f"{path}:{lineno}: header must be 'N M'")
    try:
        n_vertices, n_edges = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise GraphFormatError(f"{path}:{lineno}: header must be two integers") from exc
    if n_vertices < 0 or n_edges < 0:
        raise GraphFormatError(f"{path}:{lineno}: negative counts in header")
    if len(lines) - 1 != n_edges:
        raise GraphFormatError(
            f"{path}: header announces {n_edges} edges, found {len(lines) - 1}"
        )
    edges: list[tuple[int, int]] = []
    prev = (-1, -1)
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"{path}:{lineno}: edge line must be 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"{path}:{lineno}: edge line must be two integers") from exc
        if not (0 <= u < v < n_vertices):
            raise GraphFormatError(
                f"{path}:{lineno}: edge ({u}, {v}) violates 0 <= u < v < {n_vertices}"
            )
        if (u, v) <= prev:
            raise GraphFormatError(f"{path}:{lineno}: edges out of order or duplicated")
        prev = (u, v)
        edges.append((u, v))
    return AbstractGraph.from_edges(n_vertices, edges)


def write_graph(path: str | Path, g: AbstractGraph | PathGraph, comments: Sequence[str] = ()) -> None:
    parts = [f"# {c}" for c in comments]
    parts.append(f"{g.vertex_count} {g.edge_count()}")
    parts.extend(f"{u} {v}" for u, v in g.edges())
    write_text_atomic(path, "\n".join(parts) + "\n")


def read_labels(path: str | Path) -> list[SpanningPath]:
    """Parse a labeling file: one '<vertexId>: p0 p1 ... p_{n-1}' line per vertex."""
    path = Path(path)
    lines = _data_lines(path)
    if not lines:
        raise LabelFormatError(f"{path}: empty labeling")
    n = None
    out: list[SpanningPath] = []
    for expect, (lineno, line) in enumerate(lines):
        head, sep, rest = line.partition(":")
        if not sep:
            raise LabelFormatError(f"{path}:{lineno}: missing ':' separator")
        try:
            vid = int(head)
            seq = [int(tok) for tok in rest.split()]
        except ValueError as exc:
            raise LabelFormatError(f"{path}:{lineno}: non-integer token") from exc
        if vid != expect:
            raise LabelFormatError(f"{path}:{lineno}: vertex id {vid}, expected {expect}")
        if n is None:
            n = len(seq)
        elif len(seq) != n:
            raise LabelFormatError(f"{path}:{lineno}: expected {n} points, got {len(seq)}")
        try:
            out.append(validate_path(seq, n))
        except (UnsupportedN, NotPermutation, CrossingEdges) as exc:
            raise LabelFormatError(f"{path}:{lineno}: invalid path: {exc}") from exc
    return out


def write_labels(path: str | Path, labeling: Sequence[SpanningPath], comments: Sequence[str] = ()) -> None:
    parts = [f"# {c}" for c in comments]
    parts.extend(f"{v}: {' '.join(map(str, p.seq))}" for v, p in enumerate(labeling))
    write_text_atomic(path, "\n".join(parts) + "\n")


def read_secret(path: str | Path) -> list[int]:
    """Parse an anonymization secret: '<abstractId> <originalId>' per line."""
    path = Path(path)
    lines = _data_lines(path)
    out: list[int] = []
    for expect, (lineno, line) in enumerate(lines):
        parts = line.split()
        if len(parts) != 2:
            raise SecretFormatError(f"{path}:{lineno}: line must be 'abstract original'")
        try:
            a, o = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise SecretFormatError(f"{path}:{lineno}: non-integer token") from exc
        if a != expect:
            raise SecretFormatError(f"{path}:{lineno}: abstract id {a}, expected {expect}")
        out.append(o)
    if sorted(out) != list(range(len(out))):
        raise SecretFormatError(f"{path}: original ids are not a permutation")
    return out


def write_secret(path: str | Path, secret: Sequence[int], comments: Sequence[str] = ()) -> None:
    parts = [f"# {c}" for c in comments]
    parts.extend(f"{a} {o}" for a, o in enumerate(secret))
    write_text_atomic(path, "\n".join(parts) + "\n")
