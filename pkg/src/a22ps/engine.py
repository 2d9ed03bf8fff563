"""Quotient dimensions of M / I_{k,i} with an optional on-disk cache."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .algebra import Element
from .graded import Box, DimTable, default_box, negative_monomials
from .linalg import rank_matrix, dense_rows
from .presentation import IdealSpec, ideal_submodule


class CacheCorruption(RuntimeError):
    """A cache file exists but cannot be trusted."""

    def __init__(self, path: Path, reason: str):
        super().__init__(f"corrupt cache entry {path}: {reason}")
        self.path = path


def spec_hash(descriptor: dict) -> str:
    return hashlib.sha256(json.dumps(descriptor, sort_keys=True).encode()).hexdigest()[:16]


class DimCache:
    """One JSON file per (descriptor hash, bidegree); writes are atomic renames."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path(self, descriptor: dict, b) -> Path:
        return self.root / spec_hash(descriptor) / f"c{b[0]}_w{b[1]}.json"

    def get(self, descriptor: dict, b) -> int | None:
        p = self.path(descriptor, b)
        if not p.exists():
            return None
        try:
            payload = json.loads(p.read_text())
        except (OSError, ValueError) as exc:
            raise CacheCorruption(p, f"unreadable ({exc})") from exc
        if not isinstance(payload, dict) or payload.get("descriptor") != descriptor \
                or payload.get("bidegree") != list(b):
            raise CacheCorruption(p, "key mismatch")
        dim = payload.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
            raise CacheCorruption(p, "missing or invalid dim")
        if "rank" in payload:
            rank, total = payload.get("rank"), payload.get("monomials")
            if not all(isinstance(x, int) and x >= 0 for x in (rank, total)) or dim + rank != total:
                raise CacheCorruption(p, "inconsistent rank metadata")
        return dim

    def put(self, descriptor: dict, b, dim: int, rank: int | None = None, total: int | None = None) -> None:
        p = self.path(descriptor, b)
        p.parent.mkdir(parents=True, exist_ok=True)
        payload = {"descriptor": descriptor, "bidegree": list(b), "dim": dim}
        if rank is not None:
            payload.update(rank=rank, monomials=total)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def rank(elements: list[Element], b) -> int:
    """Exact rank over Q(i) of bihomogeneous elements of bidegree ``b``."""
    b = tuple(b)
    for e in elements:
        if e.bidegrees() - {b}:
            raise ValueError(f"element {e} is not of bidegree {b}")
    columns = sorted({m for e in elements for m in e.terms}, key=lambda m: (m.a1, m.a12))
    if not columns:
        return 0
    return rank_matrix(dense_rows([e.terms for e in elements], columns))


def quotient_dim(spec: IdealSpec, b, box: Box | None = None, cache: DimCache | None = None) -> int:
    box = box or default_box(spec.k)
    b = tuple(b)
    box.require(b)
    descriptor = spec.descriptor()
    if cache is not None:
        hit = cache.get(descriptor, b)
        if hit is not None:
            return hit
    sub = ideal_submodule(spec, box)
    total = len(negative_monomials(*b))
    r = sub.rank(b)
    if cache is not None:
        cache.put(descriptor, b, total - r, r, total)
    return total - r


def dim_table(spec: IdealSpec, box: Box | None = None, cache: DimCache | None = None) -> DimTable:
    box = box or default_box(spec.k)
    entries = {b: quotient_dim(spec, b, box, cache) for b in box.bidegrees()}
    descriptor = dict(spec.descriptor(), side="presentation")
    return DimTable(descriptor, box, entries)
