"""Shapley attribution of attributes for JSM classification and concept stability.

Both games are played by the attributes of a carrier set: the object intent
``g'`` for a JSM explanation, the concept intent ``B`` for stability.
Attributes outside the carrier get a *structural* zero, stored as ``None``
and rendered ``0``; a computed zero is ``Fraction(0)`` and rendered ``0.0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Protocol, Union

import numpy as np

from . import bitset
from ._subsets import generator_table, shapley_from_table, to_global, upset_table, to_local
from .config import SHAPLEY_CAP, GENERATOR_CAP
from .context import Concept, FormalContext, close_attributes, require_concept
from .errors import ContractError, ResourceLimitError
from .jsm import ClassificationContext, HypothesisSet
from .lattice import minimal_generators
from .stability import stability_report

Value = Union[Fraction, float, None]


@dataclass(frozen=True)
class ShapleyVector:
    """One entry per attribute of the context; ``None`` marks a structural zero."""

    attributes: tuple[str, ...]
    values: tuple[Value, ...]

    def __getitem__(self, name: str) -> Value:
        return self.values[self.attributes.index(name)]

    def __len__(self):
        return len(self.values)

    @property
    def carrier(self) -> list[str]:
        return [a for a, v in zip(self.attributes, self.values) if v is not None]

    def carrier_values(self) -> dict[str, Value]:
        return {a: v for a, v in zip(self.attributes, self.values) if v is not None}

    def total(self):
        return sum((v for v in self.values if v is not None), Fraction(0))

    def as_floats(self) -> list[float]:
        return [0.0 if v is None else float(v) for v in self.values]


class Game(Protocol):
    attributes: tuple[str, ...]
    carrier: int

    def value(self, coalition: int) -> int: ...

    def value_table(self) -> np.ndarray: ...


def _players(carrier: int) -> list[int]:
    return bitset.to_indices(carrier)


def _vector(attributes: tuple[str, ...], carrier: list[int], values) -> ShapleyVector:
    out: list[Value] = [None] * len(attributes)
    for m, v in zip(carrier, values):
        out[m] = v
    return ShapleyVector(attributes, tuple(out))


# -- JSM game -------------------------------------------------------------------


def jsm_valuation(coalition: int, hyps: HypothesisSet) -> int:
    """+1 if the coalition holds a positive but no negative hypothesis, -1 dually, else 0."""
    pos = any(h & ~coalition == 0 for h in hyps.positive)
    neg = any(h & ~coalition == 0 for h in hyps.negative)
    if pos and not neg:
        return 1
    if neg and not pos:
        return -1
    return 0


@dataclass(frozen=True)
class JsmGame:
    hypotheses: HypothesisSet
    carrier: int
    attributes: tuple[str, ...]

    def value(self, coalition: int) -> int:
        return jsm_valuation(coalition, self.hypotheses)

    def value_table(self) -> np.ndarray:
        players = _players(self.carrier)
        k = len(players)
        inside = lambda hs: [to_local(h, players) for h in hs if h & ~self.carrier == 0]
        pos = upset_table(inside(self.hypotheses.positive), k)
        neg = upset_table(inside(self.hypotheses.negative), k)
        return pos.astype(np.int8) - neg.astype(np.int8)


def jsm_game(cc: ClassificationContext, hyps: HypothesisSet, obj: str | int) -> JsmGame:
    g = obj if isinstance(obj, int) else cc.base.object_index(obj)
    return JsmGame(hyps, cc.base.rows[g], cc.base.attributes)


# -- stability game ---------------------------------------------------------------


@dataclass(frozen=True)
class StabilityGame:
    """Indicator game ``v(Y) = [Y'' = B]`` over subsets of the intent B.

    By default the empty coalition wins when it already closes to B (the
    top concept over full columns). ``strict=True`` forces ``v(empty) = 0``.
    """

    context: FormalContext
    concept: Concept
    strict: bool = False
    attributes: tuple[str, ...] = field(init=False)
    carrier: int = field(init=False)

    def __post_init__(self):
        require_concept(self.context, self.concept)
        object.__setattr__(self, "attributes", self.context.attributes)
        object.__setattr__(self, "carrier", self.concept.intent)

    def value(self, coalition: int) -> int:
        return stability_valuation(coalition, self)

    def value_table(self) -> np.ndarray:
        table, _ = generator_table(self.context, self.concept.intent, self.concept.extent)
        table = table.astype(np.int8)
        if self.strict:
            table[0] = 0
        return table


def stability_valuation(coalition: int, game: StabilityGame) -> int:
    if coalition & ~game.concept.intent:
        raise ContractError("coalition is not a subset of the concept intent")
    if game.strict and not coalition:
        return 0
    return int(close_attributes(game.context, coalition) == game.concept.intent)


# -- exact values ---------------------------------------------------------------------


def exact_shapley(game: Game, cap: int = SHAPLEY_CAP) -> ShapleyVector:
    players = _players(game.carrier)
    if len(players) > cap:
        raise ResourceLimitError("exact Shapley carrier", len(players), cap,
                                 "use estimate_shapley_sampling for large carriers")
    return _vector(game.attributes, players, shapley_from_table(game.value_table(), len(players)))


def shapley_jsm(cc: ClassificationContext, hyps: HypothesisSet, obj: str | int,
                cap: int = SHAPLEY_CAP) -> ShapleyVector:
    """Shapley vector of an object's attributes for its JSM verdict."""
    return exact_shapley(jsm_game(cc, hyps, obj), cap)


def shapley_stability(ctx: FormalContext, concept: Concept, cap: int = SHAPLEY_CAP,
                      strict: bool = False) -> ShapleyVector:
    """Shapley vector of the intent's attributes for the concept's stability."""
    return exact_shapley(StabilityGame(ctx, concept, strict), cap)


def shapley_stability_mingen_fast(ctx: FormalContext, concept: Concept,
                                  cap: int = GENERATOR_CAP) -> ShapleyVector | None:
    """Closed form for intents with a single minimal generator X: 1/|X| on X, 0 elsewhere.

    Returns None when the intent has more than one minimal generator. When
    the empty set generates B the game is constant and every value is 0.
    """
    require_concept(ctx, concept)
    mingen = minimal_generators(ctx, concept.intent, cap)
    if len(mingen) != 1:
        return None
    (x,) = mingen
    size = bitset.popcount(x)
    players = _players(concept.intent)
    if size == 0:
        return _vector(ctx.attributes, players, [Fraction(0)] * len(players))
    values = [Fraction(1, size) if x >> m & 1 else Fraction(0) for m in players]
    return _vector(ctx.attributes, players, values)


def shapley_levels_identity_check(ctx: FormalContext, concept: Concept, attr: str | int,
                                  cap: int = SHAPLEY_CAP) -> tuple[Fraction, Fraction]:
    """Both sides of the level-index expression for one attribute's stability Shapley value.

    ``rhs = sum_k J_k / k - sum_{D subset B-m, D nonempty} v(D) / (|D| C(|B|-1, |D|)) - v(empty)/|B|``.
    The last term only appears when the empty set already generates B.
    """
    m = attr if isinstance(attr, int) else ctx.attribute_index(attr)
    if not concept.intent >> m & 1:
        raise ContractError("attribute is not in the concept intent")
    lhs = shapley_stability(ctx, concept, cap)[ctx.attributes[m]]
    report = stability_report(ctx, concept, cap)
    n = bitset.popcount(concept.intent)
    rhs = sum((report.levels[k] / k for k in range(1, n + 1)), Fraction(0))
    rest = concept.intent & ~(1 << m)
    players = _players(rest)
    for local in range(1, 1 << len(players)):
        d = to_global(local, players)
        if close_attributes(ctx, d) == concept.intent:
            size = bitset.popcount(d)
            rhs -= Fraction(1, size * comb(n - 1, size))
    if close_attributes(ctx, 0) == concept.intent:
        rhs -= Fraction(1, n)
    return lhs, rhs


# -- sampling ---------------------------------------------------------------------------


def estimate_shapley_sampling(game: Game, n_samples: int, seed: int,
                              table_cap: int = SHAPLEY_CAP) -> ShapleyVector:
    """Permutation-sampling Monte Carlo estimate of the Shapley vector.

    Each player draws from its own stream spawned from ``seed``, so results
    do not depend on evaluation order.
    """
    if n_samples < 1:
        raise ContractError("n_samples must be at least 1")
    players = _players(game.carrier)
    k = len(players)
    table = game.value_table() if k <= table_cap else None
    weights = np.array([1 << j for j in range(k)], dtype=np.int64)
    estimates = []
    for j in range(k):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(j,)))
        keys = rng.random((n_samples, k))
        before = keys < keys[:, j:j + 1]
        if table is not None:
            pred = before.astype(np.int64) @ weights
            contrib = table[pred | (1 << j)].astype(np.int64) - table[pred]
            estimates.append(float(contrib.mean()))
        else:
            total = 0
            for row in before:
                pred = to_global(int(row.astype(np.int64) @ weights), players)
                total += game.value(pred | (1 << players[j])) - game.value(pred)
            estimates.append(total / n_samples)
    return _vector(game.attributes, players, estimates)
