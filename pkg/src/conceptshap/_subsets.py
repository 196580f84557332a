"""Vectorised kernels over the powerset of a small carrier.

A carrier is an ordered list of global attribute indices; local subset ``s``
(an integer in ``range(2**k)``) selects ``carrier[j]`` for every set bit ``j``.
Tables have length ``2**k`` and are indexed by local subset.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

from . import bitset


def to_local(mask: int, carrier: list[int]) -> int:
    local = 0
    for j, m in enumerate(carrier):
        if mask >> m & 1:
            local |= 1 << j
    return local


def to_global(local: int, carrier: list[int]) -> int:
    mask = 0
    for j in bitset.iter_bits(local):
        mask |= 1 << carrier[j]
    return mask


def popcounts(k: int) -> np.ndarray:
    pc = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        pc[1 << j: 2 << j] = pc[: 1 << j] + 1
    return pc


def down_closure(marks: np.ndarray, k: int) -> np.ndarray:
    """Mark every subset of a marked set."""
    out = marks.copy()
    for j in range(k):
        view = out.reshape(-1, 2, 1 << j)
        view[:, 0, :] |= view[:, 1, :]
    return out


def up_closure(marks: np.ndarray, k: int) -> np.ndarray:
    """Mark every superset (within the carrier) of a marked set."""
    out = marks.copy()
    for j in range(k):
        view = out.reshape(-1, 2, 1 << j)
        view[:, 1, :] |= view[:, 0, :]
    return out


def upset_table(local_sets, k: int) -> np.ndarray:
    marks = np.zeros(1 << k, dtype=bool)
    for s in local_sets:
        marks[s] = True
    return up_closure(marks, k)


def generator_table(ctx, intent: int, extent: int) -> tuple[np.ndarray, list[int]]:
    """Boolean table over subsets Y of ``intent``: True iff Y' equals ``extent``.

    Y' always contains the extent, so Y fails to generate exactly when some
    object outside the extent has all of Y, i.e. Y lies below that object's
    trace on the intent.
    """
    carrier = bitset.to_indices(intent)
    k = len(carrier)
    blocked = np.zeros(1 << k, dtype=bool)
    outside = ctx.all_objects & ~extent
    traces = {to_local(ctx.rows[g] & intent, carrier) for g in bitset.iter_bits(outside)}
    for t in traces:
        blocked[t] = True
    return ~down_closure(blocked, k), carrier


def level_counts(table: np.ndarray, k: int) -> list[int]:
    """Number of True entries per subset size 0..k."""
    counts = np.bincount(popcounts(k)[table], minlength=k + 1)
    return [int(c) for c in counts]


def shapley_from_table(values: np.ndarray, k: int) -> list[Fraction]:
    """Exact Shapley values of a game given by its integer value table.

    Marginal contributions are aggregated per coalition size first, then
    weighted by 1 / (k * C(k-1, s)) in exact arithmetic.
    """
    if k == 0:
        return []
    pc = popcounts(k)
    vals = values.astype(np.int64)
    out = []
    for j in range(k):
        view = vals.reshape(-1, 2, 1 << j)
        diff = (view[:, 1, :] - view[:, 0, :]).ravel()
        sizes = pc.reshape(-1, 2, 1 << j)[:, 0, :].ravel()
        pos = np.bincount(sizes, weights=np.clip(diff, 0, None), minlength=k)
        neg = np.bincount(sizes, weights=np.clip(-diff, 0, None), minlength=k)
        phi = Fraction(0)
        for s in range(k):
            net = int(pos[s]) - int(neg[s])
            if net:
                phi += Fraction(net, k * comb(k - 1, s))
        out.append(phi)
    return out
