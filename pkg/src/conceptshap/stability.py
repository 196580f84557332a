"""Extensional stability of concepts and its per-level indices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import bitset
from ._subsets import generator_table, level_counts
from .config import ENUMERATION_CAP, GENERATOR_CAP
from .context import Concept, FormalContext, require_concept
from .errors import ContractError, ResourceLimitError
from .lattice import enumerate_concepts


@dataclass(frozen=True)
class StabilityReport:
    concept: Concept
    sigma_e: Fraction
    levels: dict[int, Fraction]
    index: int | None = None  # lectic position in enumerate_concepts, when known


def _level_counts(ctx: FormalContext, concept: Concept, cap: int) -> list[int]:
    require_concept(ctx, concept)
    size = bitset.popcount(concept.intent)
    if size > cap:
        raise ResourceLimitError("stability |B|", size, cap, "raise the generators cap to proceed")
    table, _ = generator_table(ctx, concept.intent, concept.extent)
    return level_counts(table, size)


def stability_extensional(ctx: FormalContext, concept: Concept, cap: int = GENERATOR_CAP) -> Fraction:
    """Share of subsets Y of the intent B with Y'' = B, i.e. |gen(B)| / 2^|B|."""
    counts = _level_counts(ctx, concept, cap)
    return Fraction(sum(counts), 1 << (len(counts) - 1))


def stability_level(ctx: FormalContext, concept: Concept, k: int, cap: int = GENERATOR_CAP) -> Fraction:
    """Share of the k-element subsets of the intent that generate it."""
    size = bitset.popcount(concept.intent)
    if not 0 <= k <= size:
        raise ContractError(f"level {k} outside 0..{size}")
    counts = _level_counts(ctx, concept, cap)
    return Fraction(counts[k], comb(size, k))


def stability_report(ctx: FormalContext, concept: Concept, cap: int = GENERATOR_CAP,
                     index: int | None = None) -> StabilityReport:
    counts = _level_counts(ctx, concept, cap)
    size = len(counts) - 1
    levels = {k: Fraction(c, comb(size, k)) for k, c in enumerate(counts)}
    return StabilityReport(concept, Fraction(sum(counts), 1 << size), levels, index)


def rank_concepts_by_stability(ctx: FormalContext, top_n: int | None = None,
                               cap: int = GENERATOR_CAP,
                               enumeration_cap: int = ENUMERATION_CAP) -> list[StabilityReport]:
    """Concepts by descending stability; ties keep lectic order."""
    reports = [stability_report(ctx, c, cap, i)
               for i, c in enumerate(enumerate_concepts(ctx, enumeration_cap))]
    reports.sort(key=lambda r: -r.sigma_e)
    return reports if top_n is None else reports[:top_n]
