"""Deliberately naive reference computations.

Everything here works on Python ``frozenset`` objects and direct loops,
sharing no code path with the bitset kernels it is used to check. Each
oracle refuses inputs beyond its budget instead of approximating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .context import Concept, FormalContext
from .errors import ResourceLimitError


@dataclass(frozen=True)
class OracleBudget:
    max_subsets: int = 1 << 20
    max_permutation_carrier: int = 8


BUDGET = OracleBudget()


def _intents(ctx: FormalContext) -> list[frozenset[int]]:
    return [frozenset(m for m in range(ctx.n_attributes) if ctx.incidence(g, m))
            for g in range(ctx.n_objects)]


def _extent(ctx: FormalContext, attrs) -> frozenset[int]:
    return frozenset(g for g in range(ctx.n_objects) if all(ctx.incidence(g, m) for m in attrs))


def _intent(ctx: FormalContext, objs) -> frozenset[int]:
    return frozenset(m for m in range(ctx.n_attributes) if all(ctx.incidence(g, m) for g in objs))


def _pack(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def naive_concepts(ctx: FormalContext, budget: OracleBudget = BUDGET) -> set[Concept]:
    """Concepts from the intersection-closed family spanned by the object intents and M."""
    family = {frozenset(range(ctx.n_attributes))}
    for row in _intents(ctx):
        family |= {row & b for b in family}
        if len(family) > budget.max_subsets:
            raise ResourceLimitError("oracle intent family", len(family), budget.max_subsets)
    return {Concept(_pack(_extent(ctx, b)), _pack(b)) for b in family}


def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def brute_generators(ctx: FormalContext, intent: int, budget: OracleBudget = BUDGET) -> list[frozenset[int]]:
    b = frozenset(m for m in range(ctx.n_attributes) if intent >> m & 1)
    if 1 << len(b) > budget.max_subsets:
        raise ResourceLimitError("oracle subset scan", 1 << len(b), budget.max_subsets)
    out = []
    for y in _subsets(sorted(b)):
        if _intent(ctx, _extent(ctx, y)) == b:
            out.append(frozenset(y))
    return out


def brute_stability(ctx: FormalContext, concept: Concept, budget: OracleBudget = BUDGET) -> Fraction:
    """Direct 2^|B| scan of Y'' = B."""
    size = concept.intent.bit_count()
    return Fraction(len(brute_generators(ctx, concept.intent, budget)), 1 << size)


def permutation_shapley(game, budget: OracleBudget = BUDGET) -> dict[str, Fraction]:
    """Average marginal contribution over every ordering of the carrier.

    ``game`` needs ``carrier`` (attribute bitmask), ``attributes`` and
    ``value(coalition_mask)``. Returns exact values keyed by attribute name.
    """
    players = [m for m in range(len(game.attributes)) if game.carrier >> m & 1]
    if len(players) > budget.max_permutation_carrier:
        raise ResourceLimitError("oracle permutation carrier", len(players),
                                 budget.max_permutation_carrier)
    totals = {m: 0 for m in players}
    for order in permutations(players):
        coalition = 0
        before = game.value(0)
        for m in order:
            coalition |= 1 << m
            after = game.value(coalition)
            totals[m] += after - before
            before = after
    n = factorial(len(players))
    return {game.attributes[m]: Fraction(t, n) for m, t in totals.items()}


def brute_hypotheses(ctx: FormalContext, positive: set[str], negative: set[str],
                     budget: OracleBudget = BUDGET) -> tuple[set[frozenset[str]], set[frozenset[str]]]:
    """Minimal JSM hypotheses by scanning every attribute subset.

    H is a positive hypothesis iff it is non-empty, equals the common
    attributes of the positive examples having it (at least one), and no
    negative example has it; dually for negative.
    """
    if 1 << ctx.n_attributes > budget.max_subsets:
        raise ResourceLimitError("oracle hypothesis scan", 1 << ctx.n_attributes, budget.max_subsets)
    intents = {ctx.objects[g]: frozenset(ctx.attributes[m] for m in range(ctx.n_attributes)
                                         if ctx.incidence(g, m))
               for g in range(ctx.n_objects)}

    def scan(own, other):
        found = []
        for h in _subsets(ctx.attributes):
            h = frozenset(h)
            if not h:
                continue
            support = [intents[g] for g in own if h <= intents[g]]
            if not support or frozenset.intersection(*support) != h:
                continue
            if any(h <= intents[g] for g in other):
                continue
            found.append(h)
        return {h for h in found if not any(o < h for o in found)}

    return scan(positive, negative), scan(negative, positive)


def is_clarified(ctx: FormalContext) -> bool:
    rows = _intents(ctx)
    cols = [_extent(ctx, [m]) for m in range(ctx.n_attributes)]
    return (all(rows[i] != rows[j] for i, j in combinations(range(len(rows)), 2))
            and all(cols[i] != cols[j] for i, j in combinations(range(len(cols)), 2)))
