"""Bounded-height rational points on the surface F(x,y) = F(z,w) in P^3.

The scan enumerates every integer pair in the box [-H, H]^2, joins pairs
with equal form values through the same fingerprint machinery the collision
engine uses, emits one projective point per ordered pair of equal-value
inputs (the self-pair yields the diagonal), canonicalizes, dedupes, and
classifies each point as trivial-line or exceptional.

Enumerating all integer pairs rather than only primitive ones is deliberate:
primitivity of (x, y) alone does not make the 4-tuple primitive, and
post-canonicalization dedup is provably complete inside the box.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from .collide import (
    _fp_sort_key,
    _shard_ranges,
    compile_xy_terms,
    fingerprint_value,
    make_evaluator,
)
from .poly import BinaryForm
from .rationals import FINGERPRINT_PRIMES


@dataclass(frozen=True)
class ProjPoint:
    """Primitive integer point of P^3 with sign-canonical coordinates."""

    coords: tuple[int, int, int, int]

    def __post_init__(self):
        c = self.coords
        if len(c) != 4 or all(v == 0 for v in c):
            raise ValueError("projective point needs 4 coordinates, not all zero")
        g = 0
        for v in c:
            g = gcd(g, abs(v))
        if g != 1:
            raise ValueError(f"coordinates {c} are not primitive")
        for v in c:
            if v != 0:
                if v < 0:
                    raise ValueError(f"first nonzero coordinate must be positive: {c}")
                break

    @staticmethod
    def canonical(x: int, y: int, z: int, w: int) -> "ProjPoint | None":
        """Canonical representative of (x:y:z:w); None for the zero tuple."""
        g = 0
        for v in (x, y, z, w):
            g = gcd(g, abs(v))
        if g == 0:
            return None
        t = (x // g, y // g, z // g, w // g)
        for v in t:
            if v != 0:
                if v < 0:
                    t = (-t[0], -t[1], -t[2], -t[3])
                break
        return ProjPoint(t)

    def height(self) -> int:
        return max(abs(v) for v in self.coords)

    def swap(self) -> "ProjPoint":
        x, y, z, w = self.coords
        return ProjPoint.canonical(z, w, x, y)


def is_trivial_point(point: ProjPoint, d: int) -> int | None:
    """Root of unity zeta in {1, -1} putting the point on a trivial line, else None.

    Over Q the d-th roots of unity are 1, plus -1 when d is even.
    """
    x, y, z, w = point.coords
    if x == z and y == w:
        return 1
    if d % 2 == 0 and x == -z and y == -w:
        return -1
    return None


def classify(points, d: int) -> tuple[list[ProjPoint], list[ProjPoint]]:
    """Stable partition into (trivial, exceptional) by is_trivial_point."""
    trivial, exceptional = [], []
    for p in points:
        (trivial if is_trivial_point(p, d) is not None else exceptional).append(p)
    return trivial, exceptional


@dataclass(frozen=True)
class PointSet:
    """Scan result: every canonical surface point in the box, classified."""

    form: BinaryForm
    height_bound: int
    trivial: tuple[ProjPoint, ...]
    exceptional: tuple[ProjPoint, ...]

    def all_points(self) -> list[ProjPoint]:
        return sorted(self.trivial + self.exceptional, key=lambda p: p.coords)

    def to_json_dict(self) -> dict:
        return {
            "form": self.form.to_json_dict(),
            "height": self.height_bound,
            "trivial_count": len(self.trivial),
            "exceptional": [[str(v) for v in p.coords] for p in self.exceptional],
        }


def _fp_shard_of(fp: tuple, fp_shards: int) -> int:
    """Bucket shard from the top bits of the first residue (None -> shard 0)."""
    r = fp[0]
    if r is None:
        return 0
    return r * fp_shards >> 62


def _surface_shard(payload):
    rows, height, start, end, primes, fp_pass, fp_shards = payload
    side = 2 * height + 1
    ev = make_evaluator(rows, True)
    out = []
    for idx in range(start, end):
        x = idx // side - height
        y = idx % side - height
        fp = fingerprint_value(ev(x, y), primes)
        if fp_shards == 1 or _fp_shard_of(fp, fp_shards) == fp_pass:
            out.append((fp, idx))
    return out


def scan_surface(
    form: BinaryForm,
    height: int,
    *,
    shards: int | None = None,
    workers: int | None = None,
    primes: tuple[int, ...] = FINGERPRINT_PRIMES,
    fp_shards: int = 1,
) -> PointSet:
    """All canonical points of F(x,y)=F(z,w) with coordinates in [-H, H].

    Complete within the box: a canonical point's own coordinate pairs lie in
    the box, so the join over all pairs recovers it.  ``fp_shards`` > 1 makes
    one pass per fingerprint shard (top bits of the first residue), retaining
    only that shard's buckets per pass: peak memory shrinks by the shard
    count at the price of re-evaluating the box each pass.
    """
    if height < 1:
        raise ValueError("height bound must be >= 1")
    if fp_shards < 1:
        raise ValueError("fp_shards must be >= 1")
    rows = compile_xy_terms(form.to_multipoly())
    side = 2 * height + 1
    total = side * side
    shards = shards or (8 if total >= 20000 else 1)
    workers = workers or 1
    ranges = _shard_ranges(total, shards)
    ev = make_evaluator(rows, True)

    def pair_of(idx):
        return (idx // side - height, idx % side - height)

    points: set[ProjPoint] = set()
    # Diagonal points (x:y:x:y) come from every input paired with itself.
    for x in range(-height, height + 1):
        for y in range(-height, height + 1):
            p = ProjPoint.canonical(x, y, x, y)
            if p is not None:
                points.add(p)

    for fp_pass in range(fp_shards):
        payloads = [(rows, height, a, b, primes, fp_pass, fp_shards) for a, b in ranges]
        if workers > 1 and shards > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_surface_shard, payloads))
        else:
            results = [_surface_shard(p) for p in payloads]

        buckets: dict[tuple, list[int]] = {}
        for shard in results:
            for fp, idx in shard:
                buckets.setdefault(fp, []).append(idx)

        for fp in sorted(buckets, key=_fp_sort_key):
            idxs = buckets[fp]
            if len(idxs) < 2:
                continue
            by_value: dict = {}
            for idx in idxs:
                by_value.setdefault(ev(*pair_of(idx)), []).append(idx)
            for members in by_value.values():
                for i in members:
                    xi, yi = pair_of(i)
                    for j in members:
                        if i == j:
                            continue
                        zj, wj = pair_of(j)
                        p = ProjPoint.canonical(xi, yi, zj, wj)
                        if p is not None:
                            points.add(p)

    ordered = sorted(points, key=lambda p: p.coords)
    trivial, exceptional = classify(ordered, form.degree)
    return PointSet(
        form=form,
        height_bound=height,
        trivial=tuple(trivial),
        exceptional=tuple(exceptional),
    )
