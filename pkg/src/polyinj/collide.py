"""Exhaustive, exact, sharded search for collisions f(x,y) = f(z,w).

The engine runs a two-phase equality join over all input pairs of bounded
height:

  phase 1  evaluate f exactly at every input pair, keep only
           (fingerprint, input index) — the big exact values are dropped
           and recomputed on demand;
  phase 2  bucket by fingerprint, split oversized buckets with an extended
           prime tuple, then confirm every candidate bucket by exact
           re-evaluation and value grouping.

Every reported collision is exactly confirmed; fingerprints can only cost
time, never soundness.  Reports are deterministic: identical inputs give
byte-identical JSON regardless of worker or shard count.

``naive_collisions`` is the independent oracle: it groups inputs directly
by their exact values, with no fingerprint machinery involved.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .poly import MultiPoly
from .rationals import FINGERPRINT_PRIMES, FINGERPRINT_PRIMES_EXTENDED, rat_to_str

# Buckets larger than this are split by the extended prime tuple before
# exact confirmation, bounding the number of exact values held at once.
ESCALATION_THRESHOLD = 1000

DISCLAIMER = (
    "bounded-height exhaustive search: an empty collision list is evidence "
    "within this box, not a proof of injectivity"
)


class SearchInterrupted(RuntimeError):
    """Raised by the stop_after_shards testing hook; the checkpoint is intact."""

    def __init__(self, checkpoint_path: str):
        super().__init__(f"search interrupted; resume from {checkpoint_path}")
        self.checkpoint_path = checkpoint_path


@dataclass(frozen=True)
class SearchSpace:
    """Input domain: all pairs over {-H..H} (integers) or {height <= H} (rationals)."""

    mode: str
    height: int

    def __post_init__(self):
        if self.mode not in ("integers", "rationals"):
            raise ValueError(f"mode must be 'integers' or 'rationals', got {self.mode!r}")
        if self.height < 1:
            raise ValueError("height bound must be >= 1")


def enumerate_inputs(height: int) -> list[Fraction]:
    """All canonical rationals of height <= H, ordered by (height, num, den)."""
    return list(_rational_axis(height))


@lru_cache(maxsize=8)
def _rational_axis(height: int) -> tuple[Fraction, ...]:
    if height < 1:
        raise ValueError("height bound must be >= 1")
    out = []
    for h in range(1, height + 1):
        for num in range(-h, h + 1):
            for den in range(1, h + 1):
                if max(abs(num), den) == h and gcd(abs(num), den) == 1:
                    out.append(Fraction(num, den))
    return tuple(out)


def input_axis(space: SearchSpace) -> tuple:
    """One-dimensional input tuple; the search domain is its Cartesian square."""
    if space.mode == "integers":
        return tuple(range(-space.height, space.height + 1))
    return _rational_axis(space.height)


# -- evaluation ----------------------------------------------------------------


def compile_xy_terms(poly: MultiPoly) -> list[tuple[int, int, int, int]]:
    """Flatten a polynomial in variables within {x,y} to (ex, ey, num, den) rows."""
    if not set(poly.vars) <= {"x", "y"}:
        raise ValueError(f"collision search needs variables within (x, y), got {poly.vars}")
    ix = poly.vars.index("x") if "x" in poly.vars else None
    iy = poly.vars.index("y") if "y" in poly.vars else None
    rows = []
    for e, c in poly.sorted_terms():
        ex = e[ix] if ix is not None else 0
        ey = e[iy] if iy is not None else 0
        rows.append((ex, ey, c.numerator, c.denominator))
    return rows


def make_evaluator(rows, integer_inputs: bool):
    """Exact evaluator (x, y) -> value from compiled term rows.

    Integer inputs with integer coefficients stay in plain int arithmetic;
    anything else runs on Fraction.
    """
    if not rows:
        return lambda xv, yv: 0
    max_ex = max(r[0] for r in rows)
    max_ey = max(r[1] for r in rows)
    int_path = integer_inputs and all(d == 1 for (_, _, _, d) in rows)
    if int_path:
        int_rows = [(ex, ey, n) for (ex, ey, n, _) in rows]

        def ev_int(xv, yv):
            px = [1]
            for _ in range(max_ex):
                px.append(px[-1] * xv)
            py = [1]
            for _ in range(max_ey):
                py.append(py[-1] * yv)
            total = 0
            for ex, ey, n in int_rows:
                total += n * px[ex] * py[ey]
            return total

        return ev_int

    frac_rows = [(ex, ey, Fraction(n, d)) for (ex, ey, n, d) in rows]

    def ev_frac(xv, yv):
        px = [Fraction(1)]
        for _ in range(max_ex):
            px.append(px[-1] * xv)
        py = [Fraction(1)]
        for _ in range(max_ey):
            py.append(py[-1] * yv)
        total = Fraction(0)
        for ex, ey, c in frac_rows:
            total += c * px[ex] * py[ey]
        return total

    return ev_frac


def fingerprint_value(v, primes: tuple[int, ...]) -> tuple:
    """Fingerprint of an exact value (int or Fraction)."""
    num, den = v.numerator, v.denominator
    if den == 1:
        return tuple(num % q for q in primes)
    out = []
    for q in primes:
        if den % q == 0:
            out.append(None)
        else:
            out.append(num * pow(den, -1, q) % q)
    return tuple(out)


def _fp_sort_key(fp: tuple) -> tuple:
    return tuple(-1 if r is None else r for r in fp)


# -- sharded phase 1 -------------------------------------------------------------


def _shard_ranges(total: int, shards: int) -> list[tuple[int, int]]:
    base, extra = divmod(total, shards)
    ranges = []
    start = 0
    for s in range(shards):
        end = start + base + (1 if s < extra else 0)
        ranges.append((start, end))
        start = end
    return ranges


def _phase1_shard(payload):
    rows, mode, height, start, end, primes = payload
    axis = input_axis(SearchSpace(mode, height))
    n = len(axis)
    ev = make_evaluator(rows, mode == "integers")
    out = []
    for idx in range(start, end):
        v = ev(axis[idx // n], axis[idx % n])
        out.append((fingerprint_value(v, primes), idx))
    return out


# -- checkpointing ----------------------------------------------------------------


def _checkpoint_header(poly, space, shards, primes) -> dict:
    return {
        "version": 1,
        "poly": poly.to_json_dict(),
        "mode": space.mode,
        "height": space.height,
        "shards": shards,
        "primes": list(primes),
    }


def _write_checkpoint(path: str, header: dict, completed: dict) -> None:
    doc = dict(header)
    doc["completed"] = {
        str(sid): [[list(fp), idx] for fp, idx in items] for sid, items in completed.items()
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


def _load_checkpoint(path: str, header: dict) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for key, want in header.items():
        if doc.get(key) != want:
            raise ValueError(
                f"checkpoint {path} does not match this search (field {key!r} differs)"
            )
    return {
        int(sid): [(tuple(fp), idx) for fp, idx in items]
        for sid, items in doc["completed"].items()
    }


# -- reports -----------------------------------------------------------------------


@dataclass
class CollisionReport:
    """Certified collisions plus search metadata.

    ``pairs`` holds index pairs (i < j) into the deterministic input order;
    ``values`` is the shared exact value per pair.  The ``collisions``
    property materializes the ((x,y),(z,w),value) view.
    """

    poly: MultiPoly
    space: SearchSpace
    pairs: list[tuple[int, int]]
    values: list
    stats: dict
    primes: tuple[int, ...] = FINGERPRINT_PRIMES
    checkpoint: str | None = None
    _axis: tuple = field(default=(), repr=False)

    def input_pair(self, idx: int) -> tuple:
        axis = self._axis
        n = len(axis)
        return (axis[idx // n], axis[idx % n])

    @property
    def collisions(self) -> list:
        return [
            (self.input_pair(i), self.input_pair(j), v)
            for (i, j), v in zip(self.pairs, self.values)
        ]

    def to_json_dict(self) -> dict:
        stats = {k: v for k, v in self.stats.items() if k != "wall_time"}
        return {
            "poly": self.poly.to_json_dict(),
            "space": {"mode": self.space.mode, "height": self.space.height},
            "fingerprint_primes": list(self.primes),
            "collisions": [
                [
                    [rat_to_str(Fraction(x)), rat_to_str(Fraction(y))],
                    [rat_to_str(Fraction(z)), rat_to_str(Fraction(w))],
                    rat_to_str(Fraction(v)),
                ]
                for ((x, y), (z, w), v) in self.collisions
            ],
            "stats": stats,
            "checkpoint": self.checkpoint,
            "disclaimer": DISCLAIMER,
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def _default_shards(total: int) -> int:
    return 8 if total >= 20000 else 1


def find_collisions(
    poly: MultiPoly,
    space: SearchSpace,
    *,
    shards: int | None = None,
    workers: int | None = None,
    primes: tuple[int, ...] = FINGERPRINT_PRIMES,
    checkpoint_path: str | None = None,
    resume: bool = False,
    stop_after_shards: int | None = None,
) -> CollisionReport:
    """Complete collision search over the space via the fingerprint join.

    The report lists exactly the unordered pairs of distinct inputs with
    equal exact values, in canonical input order.  ``stop_after_shards``
    aborts after that many newly completed shards (checkpoint intact) and
    exists so interruption can be tested deterministically.
    """
    t0 = time.perf_counter()
    rows = compile_xy_terms(poly)
    axis = input_axis(space)
    n = len(axis)
    total = n * n
    shards = shards or _default_shards(total)
    if shards < 1 or shards > total:
        raise ValueError(f"shard count must be in [1, {total}]")
    workers = workers or 1
    header = _checkpoint_header(poly, space, shards, primes)

    completed: dict[int, list] = {}
    if checkpoint_path and resume and os.path.exists(checkpoint_path):
        completed = _load_checkpoint(checkpoint_path, header)

    ranges = _shard_ranges(total, shards)
    pending = [s for s in range(shards) if s not in completed]
    payloads = {
        s: (rows, space.mode, space.height, ranges[s][0], ranges[s][1], primes)
        for s in pending
    }

    done_this_run = 0

    def note_done(sid, result):
        nonlocal done_this_run
        completed[sid] = result
        done_this_run += 1
        if checkpoint_path:
            _write_checkpoint(checkpoint_path, header, completed)
        if (
            stop_after_shards is not None
            and done_this_run >= stop_after_shards
            and len(completed) < shards
        ):
            raise SearchInterrupted(checkpoint_path or "<no checkpoint>")

    if workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {s: pool.submit(_phase1_shard, payloads[s]) for s in pending}
            for s in pending:
                note_done(s, futures[s].result())
    else:
        for s in pending:
            note_done(s, _phase1_shard(payloads[s]))

    # Deterministic merge: shard id order, indices ascending within shards.
    buckets: dict[tuple, list[int]] = {}
    for s in range(shards):
        for fp, idx in completed[s]:
            buckets.setdefault(fp, []).append(idx)

    ev = make_evaluator(rows, space.mode == "integers")

    def pair_of(idx):
        return (axis[idx // n], axis[idx % n])

    candidates = 0
    confirms = 0
    out_pairs: list[tuple[int, int]] = []
    out_values: list = []
    for fp in sorted(buckets, key=_fp_sort_key):
        idxs = buckets[fp]
        if len(idxs) < 2:
            continue
        candidates += len(idxs)
        if len(idxs) > ESCALATION_THRESHOLD and len(primes) < len(FINGERPRINT_PRIMES_EXTENDED):
            extended = FINGERPRINT_PRIMES_EXTENDED
            sub: dict[tuple, list[int]] = {}
            for idx in idxs:
                v = ev(*pair_of(idx))
                confirms += 1
                sub.setdefault(fingerprint_value(v, extended), []).append(idx)
            groups = [sub[k] for k in sorted(sub, key=_fp_sort_key)]
        else:
            groups = [idxs]
        for group in groups:
            if len(group) < 2:
                continue
            by_value: dict = {}
            for idx in group:
                v = ev(*pair_of(idx))
                confirms += 1
                by_value.setdefault(v, []).append(idx)
            for v, members in by_value.items():
                for a, b in combinations(members, 2):
                    out_pairs.append((a, b))
                    out_values.append(v)

    order = sorted(range(len(out_pairs)), key=out_pairs.__getitem__)
    out_pairs = [out_pairs[k] for k in order]
    out_values = [out_values[k] for k in order]

    stats = {
        "inputs_evaluated": total,
        "fingerprint_candidates": candidates,
        "exact_confirms": confirms,
        "wall_time": time.perf_counter() - t0,
    }
    return CollisionReport(
        poly=poly,
        space=space,
        pairs=out_pairs,
        values=out_values,
        stats=stats,
        primes=primes,
        checkpoint=checkpoint_path,
        _axis=axis,
    )


def naive_collisions(poly: MultiPoly, space: SearchSpace) -> CollisionReport:
    """All-pairs oracle: group every input by its exact value, no fingerprints.

    Meant for small spaces (|inputs|^2 up to ~1e8); the report schema matches
    find_collisions so the two can be compared directly.
    """
    t0 = time.perf_counter()
    rows = compile_xy_terms(poly)
    axis = input_axis(space)
    n = len(axis)
    ev = make_evaluator(rows, space.mode == "integers")
    by_value: dict = {}
    for idx in range(n * n):
        v = ev(axis[idx // n], axis[idx % n])
        by_value.setdefault(v, []).append(idx)
    out_pairs: list[tuple[int, int]] = []
    out_values: list = []
    for v, members in by_value.items():
        if len(members) < 2:
            continue
        for a, b in combinations(members, 2):
            out_pairs.append((a, b))
            out_values.append(v)
    order = sorted(range(len(out_pairs)), key=out_pairs.__getitem__)
    stats = {
        "inputs_evaluated": n * n,
        "fingerprint_candidates": 0,
        "exact_confirms": n * n,
        "wall_time": time.perf_counter() - t0,
    }
    return CollisionReport(
        poly=poly,
        space=space,
        pairs=[out_pairs[k] for k in order],
        values=[out_values[k] for k in order],
        stats=stats,
        primes=(),
        checkpoint=None,
        _axis=axis,
    )
