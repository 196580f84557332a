"""Concept enumeration, clarification/reduction and generators of intents."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bitset
from ._subsets import generator_table, to_global
from .config import ENUMERATION_CAP, GENERATOR_CAP
from .context import (
    Concept,
    FormalContext,
    close_attributes,
    derive_attributes,
)
from .errors import ContractError, ResourceLimitError


def next_closure(ctx: FormalContext, intent: int) -> int | None:
    """Lectically next closed attribute set after ``intent``, or None after M.

    Attribute index order is the lectic order: bit 0 is the smallest attribute.
    """
    current = intent
    for i in reversed(range(ctx.n_attributes)):
        bit = 1 << i
        if current & bit:
            current &= ~bit
            continue
        candidate = close_attributes(ctx, current | bit)
        if (candidate & ~current) & (bit - 1) == 0:
            return candidate
    return None


def iter_intents(ctx: FormalContext, cap: int = ENUMERATION_CAP):
    if ctx.n_attributes > cap:
        raise ResourceLimitError("concept enumeration |M|", ctx.n_attributes, cap)
    intent = close_attributes(ctx, 0)
    while intent is not None:
        yield intent
        intent = next_closure(ctx, intent)


def enumerate_concepts(ctx: FormalContext, cap: int = ENUMERATION_CAP) -> list[Concept]:
    """All concepts, in lectic order of their intents (NextClosure)."""
    return [Concept(derive_attributes(ctx, b), b) for b in iter_intents(ctx, cap)]


def count_concepts(ctx: FormalContext, cap: int = ENUMERATION_CAP) -> int:
    return sum(1 for _ in iter_intents(ctx, cap))


def extents(ctx: FormalContext, cap: int = ENUMERATION_CAP) -> set[int]:
    return {derive_attributes(ctx, b) for b in iter_intents(ctx, cap)}


# -- clarification and reduction ---------------------------------------------


@dataclass
class MergeReport:
    """Names removed by clarification, mapped to the representative kept."""

    objects: dict[str, str] = field(default_factory=dict)
    attributes: dict[str, str] = field(default_factory=dict)

    def __bool__(self):
        return bool(self.objects or self.attributes)


@dataclass
class ReductionReport:
    """Removed names, each mapped to the names whose derivation reproduces it."""

    objects: dict[str, list[str]] = field(default_factory=dict)
    attributes: dict[str, list[str]] = field(default_factory=dict)

    def __bool__(self):
        return bool(self.objects or self.attributes)


def _duplicates(names: tuple[str, ...], keys: tuple[int, ...]) -> tuple[int, dict[str, str]]:
    groups: dict[int, list[int]] = {}
    for i, key in enumerate(keys):
        groups.setdefault(key, []).append(i)
    keep = 0
    merged = {}
    for members in groups.values():
        rep = min(members, key=lambda i: names[i])
        keep |= 1 << rep
        for i in members:
            if i != rep:
                merged[names[i]] = names[rep]
    return keep, merged


def is_clarified(ctx: FormalContext) -> bool:
    return len(set(ctx.rows)) == ctx.n_objects and len(set(ctx.columns)) == ctx.n_attributes


def clarify(ctx: FormalContext) -> tuple[FormalContext, MergeReport]:
    """Merge objects with equal intents and attributes with equal extents.

    The lexicographically smallest name of each duplicate group is kept.
    """
    keep_m, merged_m = _duplicates(ctx.attributes, ctx.columns)
    keep_g, merged_g = _duplicates(ctx.objects, ctx.rows)
    if not merged_m and not merged_g:
        return ctx, MergeReport()
    return ctx.subcontext(keep_g, keep_m), MergeReport(merged_g, merged_m)


def reduce(ctx: FormalContext) -> tuple[FormalContext, ReductionReport]:
    """Remove reducible attributes, then reducible objects.

    Requires a clarified context. An attribute ``m`` is reducible when ``m'``
    equals the intersection of the strictly larger attribute extents (the
    whole object set if there are none); objects dually.
    """
    if not is_clarified(ctx):
        raise ContractError("reduce() needs a clarified context; call clarify() first")
    report = ReductionReport()
    red_m = _reducible_attributes(ctx)
    keep_m = ctx.all_attributes
    for m, above in red_m.items():
        keep_m &= ~(1 << m)
        report.attributes[ctx.attributes[m]] = ctx.attribute_names(above)
    step = ctx.subcontext(None, keep_m) if red_m else ctx
    red_g = _reducible_attributes(step.transpose())
    keep_g = step.all_objects
    for g, above in red_g.items():
        keep_g &= ~(1 << g)
        report.objects[step.objects[g]] = step.object_names(above)
    if red_g:
        step = step.subcontext(keep_g, None)
    return step, report


def _reducible_attributes(ctx: FormalContext) -> dict[int, int]:
    everything = ctx.all_objects
    out = {}
    for m, col in enumerate(ctx.columns):
        above = 0
        meet = everything
        for n, other in enumerate(ctx.columns):
            if n != m and col & ~other == 0 and other != col:
                above |= 1 << n
                meet &= other
        if meet == col:
            out[m] = above
    return out


# -- generators ---------------------------------------------------------------


def _check_generator_input(ctx: FormalContext, intent: int, cap: int) -> int:
    if close_attributes(ctx, intent) != intent:
        raise ContractError("attribute set is not closed")
    size = bitset.popcount(intent)
    if size > cap:
        raise ResourceLimitError("generator enumeration |B|", size, cap,
                                 "raise the generators cap to proceed")
    return derive_attributes(ctx, intent)


def generators(ctx: FormalContext, intent: int, cap: int = GENERATOR_CAP) -> list[int]:
    """All Y subset of the closed set ``intent`` with Y'' = intent, by ascending local mask."""
    extent = _check_generator_input(ctx, intent, cap)
    table, carrier = generator_table(ctx, intent, extent)
    return [to_global(int(s), carrier) for s in np.flatnonzero(table)]


def minimal_generators(ctx: FormalContext, intent: int, cap: int = GENERATOR_CAP) -> list[int]:
    """The inclusion-minimal generators of ``intent``."""
    extent = _check_generator_input(ctx, intent, cap)
    table, carrier = generator_table(ctx, intent, extent)
    k = len(carrier)
    minimal = table.copy()
    # a generator is minimal iff removing any one element breaks it
    idx = np.arange(1 << k)
    for j in range(k):
        has = (idx >> j & 1).astype(bool)
        minimal[has] &= ~table[idx[has] ^ (1 << j)]
    return [to_global(int(s), carrier) for s in np.flatnonzero(minimal)]
