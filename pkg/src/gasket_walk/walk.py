"""Simple random walk on the Sierpinski graph.

Two engines share one transition rule: from x, draw u from the walk's
counter stream and move to entry ``bounded(u, deg(x))`` of the canonical
neighbor list (parent, children by symbol, horizontal neighbors sorted).
``run_to_level`` is the word-level reference; ``batch_exit_words`` advances
many walks at once with numpy and reproduces it bit for bit.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import adjacent_combinatorial, neighbors
from .rng import CounterStream, RngSpec, bounded_np, draw_np, stream_keys_np
from .symbolic import GasketConfig, Word

log = logging.getLogger(__name__)

DEFAULT_BURN = 15
DEFAULT_STEP_CAP = 10**8
CHUNK = 1 << 16


class StepCapExceeded(RuntimeError):
    pass


@dataclass
class WalkPath:
    start: Word
    steps: list[Word] = field(default_factory=list)
    seed: int = 0
    d: int = 1
    stream_index: int = 0

    def __post_init__(self):
        if not self.steps:
            self.steps = [self.start]

    @property
    def end(self) -> Word:
        return self.steps[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def check(self) -> None:
        if self.steps[0] != self.start:
            raise AssertionError("path does not begin at its start vertex")
        for a, b in zip(self.steps, self.steps[1:]):
            if not adjacent_combinatorial(a, b):
                raise AssertionError(f"non-adjacent step {a!r} -> {b!r}")


def _as_stream(rng) -> CounterStream:
    if isinstance(rng, CounterStream):
        return rng
    if isinstance(rng, RngSpec):
        return CounterStream.from_spec(rng)
    return CounterStream(int(rng), 0)


def step(x: Word, rng: CounterStream, cfg: GasketConfig) -> Word:
    """One transition: a uniformly chosen neighbor of x."""
    nbrs = neighbors(x, cfg).all()
    return nbrs[rng.randbelow(len(nbrs))]


def run_to_level(start: Word, level: int, rng, cfg: GasketConfig,
                 step_cap: int = DEFAULT_STEP_CAP) -> WalkPath:
    """Walk from ``start`` until the first vertex of length ``level``."""
    if len(start) > level:
        raise ValueError(f"start {start!r} is already deeper than level {level}")
    stream = _as_stream(rng)
    path = WalkPath(start, seed=stream.master_seed, d=cfg.d,
                    stream_index=stream.stream_index)
    x = start
    steps = 0
    while len(x) != level:
        if steps >= step_cap:
            raise StepCapExceeded(
                f"walk from {start!r} did not reach level {level} in {step_cap} steps")
        x = step(x, stream, cfg)
        path.steps.append(x)
        steps += 1
    return path


def limit_cell_estimate(start: Word, level: int, burn: int, rng, cfg: GasketConfig,
                        step_cap: int = DEFAULT_STEP_CAP) -> Word:
    """Length-``level`` prefix of the exit word at depth ``level + burn``."""
    if burn < 0:
        raise ValueError("burn must be >= 0")
    path = run_to_level(start, max(level + burn, len(start)), rng, cfg, step_cap)
    return path.end[:level]


# -- batched engine -------------------------------------------------------

def _run_lengths(sym: np.ndarray, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Last symbol and run length of the maximal constant suffix (n > 0 rows)."""
    rows = np.arange(sym.shape[0])
    last = sym[rows, n - 1]
    cols = np.arange(sym.shape[1])
    differs = (sym != last[:, None]) & (cols[None, :] < n[:, None])
    any_diff = differs.any(axis=1)
    width = sym.shape[1]
    p = np.where(any_diff, width - 1 - np.argmax(differs[:, ::-1], axis=1), -1)
    return last, n - 1 - p


def batch_exit_words(start: Word, level: int, cfg: GasketConfig, seed: int,
                     streams: np.ndarray, step_cap: int = DEFAULT_STEP_CAP) -> np.ndarray:
    """Exit words at ``level`` for walks on the given stream indices.

    Returns an int8 array of shape (len(streams), level); row k is the
    endpoint of the walk that ``run_to_level`` produces for
    RngSpec(seed, streams[k]).
    """
    if len(start) > level:
        raise ValueError(f"start {start!r} is already deeper than level {level}")
    d = cfg.d
    total = len(streams)
    out = np.zeros((total, level), dtype=np.int8)
    width = max(level, 1)
    sym = np.zeros((total, width), dtype=np.int8)
    if start:
        sym[:, :len(start)] = start
    n = np.full(total, len(start), dtype=np.int64)
    t = np.zeros(total, dtype=np.int64)
    k1, k2 = stream_keys_np(seed, streams)
    ids = np.arange(total)

    while True:
        done = n == level
        if done.any():
            out[ids[done]] = sym[done, :level]
            keep = ~done
            sym, n, t, k1, k2, ids = sym[keep], n[keep], t[keep], k1[keep], k2[keep], ids[keep]
        if len(ids) == 0:
            break
        if t.max() >= step_cap:
            raise StepCapExceeded(
                f"a walk from {start!r} did not reach level {level} in {step_cap} steps")

        at_root = n == 0
        nz = np.where(at_root, 1, n)
        last, r = _run_lengths(sym, nz)
        has_extra = (~at_root) & (r < n)
        deg = np.where(at_root, d + 1, 2 * d + 2 + has_extra)
        choice = bounded_np(draw_np(k1, k2, t), deg)
        t += 1

        # root: step to child `choice`
        rows = np.nonzero(at_root)[0]
        sym[rows, 0] = choice[rows]
        n[rows] = 1

        inner = ~at_root
        up = inner & (choice == 0)
        down = inner & (choice >= 1) & (choice <= d + 1)
        h = choice - (d + 2)
        side = inner & (h >= 0)

        rows = np.nonzero(down)[0]
        sym[rows, n[rows]] = (choice[rows] - 1).astype(np.int8)

        pos = np.where(has_extra, n - r - 1, 0)
        other = sym[np.arange(len(ids)), pos]  # the symbol i in x = w i j^r
        front = has_extra & (last < other)
        is_extra = side & np.where(front, h == 0, has_extra & (h == d))
        q = np.where(front, h - 1, h)
        sibling = side & ~is_extra
        rows = np.nonzero(sibling)[0]
        qs = q[rows]
        sym[rows, n[rows] - 1] = np.where(qs < last[rows], qs, qs + 1).astype(np.int8)

        rows = np.nonzero(is_extra)[0]
        if len(rows):
            sub = sym[rows]
            cols = np.arange(width)[None, :]
            p = pos[rows][:, None]
            tail = (cols > p) & (cols < n[rows][:, None])
            sub = np.where(tail, other[rows][:, None], sub)
            sub[np.arange(len(rows)), pos[rows]] = last[rows]
            sym[rows] = sub

        n = np.where(up, n - 1, n)
        n = np.where(down, n + 1, n)
    return out


def encode_words(arr: np.ndarray, base: int) -> np.ndarray:
    """Row words of equal length -> integer codes in lexicographic order."""
    codes = np.zeros(arr.shape[0], dtype=np.int64)
    for k in range(arr.shape[1]):
        codes = codes * base + arr[:, k]
    return codes


def decode_word(code: int, level: int, base: int) -> Word:
    out = []
    for _ in range(level):
        code, s = divmod(code, base)
        out.append(s)
    return tuple(reversed(out))


def _chunk_counts(args) -> np.ndarray:
    start, level, prefix, d, seed, lo, hi, step_cap = args
    cfg = GasketConfig(d)
    ends = batch_exit_words(start, level, cfg, seed, np.arange(lo, hi), step_cap)
    codes = encode_words(ends[:, :prefix], d + 1)
    return np.bincount(codes, minlength=(d + 1) ** prefix)


def simulate_counts(start: Word, level: int, burn: int, walks: int, seed: int,
                    cfg: GasketConfig, workers: int | None = 1,
                    first_stream: int = 0, step_cap: int = DEFAULT_STEP_CAP) -> np.ndarray:
    """Counts of limit-cell estimates, indexed by lexicographic word code.

    Walk k uses stream ``first_stream + k``; the result depends only on the
    arguments, not on ``workers`` or the chunking.
    """
    depth = max(level + burn, len(start))
    jobs = [(start, depth, level, cfg.d, seed, lo, min(lo + CHUNK, first_stream + walks),
             step_cap)
            for lo in range(first_stream, first_stream + walks, CHUNK)]
    workers = workers or os.cpu_count() or 1
    counts = np.zeros((cfg.d + 1) ** level, dtype=np.int64)
    if workers == 1 or len(jobs) == 1:
        for job in jobs:
            counts += _chunk_counts(job)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_chunk_counts, jobs):
                counts += part
    log.debug("simulated %d walks from %r to depth %d", walks, start, depth)
    return counts
