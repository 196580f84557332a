"""JSM-method: minimal positive/negative hypotheses and the classification rules."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from . import bitset
from .config import ENUMERATION_CAP
from .context import FormalContext, derive_attributes
from .errors import ValidationError, EmptyClassError
from .lattice import iter_intents


class Label(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    UNDETERMINED = "tau"

    @classmethod
    def parse(cls, text: str) -> "Label":
        key = str(text).strip().lower()
        try:
            return _LABEL_ALIASES[key]
        except KeyError:
            raise ValidationError(f"unknown class label {text!r}") from None


_LABEL_ALIASES = {
    "+": Label.POSITIVE, "pos": Label.POSITIVE, "1": Label.POSITIVE, "positive": Label.POSITIVE,
    "-": Label.NEGATIVE, "−": Label.NEGATIVE, "neg": Label.NEGATIVE, "0": Label.NEGATIVE,
    "negative": Label.NEGATIVE,
    "tau": Label.UNDETERMINED, "τ": Label.UNDETERMINED, "undet": Label.UNDETERMINED,
    "?": Label.UNDETERMINED, "undetermined": Label.UNDETERMINED,
}


class Verdict(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    CONTRADICTORY = "Contradictory"
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClassificationContext:
    """A context over M (without the target) plus a +/-/tau label per object."""

    base: FormalContext
    labels: tuple[Label, ...]
    target: str = "w"

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != self.base.n_objects:
            raise ValidationError(f"{len(labels)} labels for {self.base.n_objects} objects")
        if self.target in self.base.attributes:
            raise ValidationError(f"target {self.target!r} must not be an attribute of the context")

    @classmethod
    def from_names(cls, base: FormalContext, positive: Sequence[str], negative: Sequence[str],
                   target: str = "w") -> "ClassificationContext":
        """Label the named objects; everything else is undetermined."""
        pos, neg = set(positive), set(negative)
        for name in pos | neg:
            base.object_index(name)
        if pos & neg:
            raise ValidationError(f"objects labelled both ways: {sorted(pos & neg)}")
        labels = [Label.POSITIVE if g in pos else Label.NEGATIVE if g in neg else Label.UNDETERMINED
                  for g in base.objects]
        return cls(base, tuple(labels), target)

    def mask(self, label: Label) -> int:
        return bitset.from_indices(i for i, lab in enumerate(self.labels) if lab is label)

    @property
    def positive(self) -> int:
        return self.mask(Label.POSITIVE)

    @property
    def negative(self) -> int:
        return self.mask(Label.NEGATIVE)

    @property
    def undetermined(self) -> int:
        return self.mask(Label.UNDETERMINED)

    def subcontext(self, label: Label) -> FormalContext:
        return self.base.subcontext(self.mask(label), None)


@dataclass(frozen=True)
class Hypothesis:
    attrs: int
    sign: Label


@dataclass(frozen=True)
class HypothesisSet:
    positive: tuple[int, ...]
    negative: tuple[int, ...]

    def hypotheses(self) -> list[Hypothesis]:
        return ([Hypothesis(h, Label.POSITIVE) for h in self.positive]
                + [Hypothesis(h, Label.NEGATIVE) for h in self.negative])

    def named(self, ctx: FormalContext) -> dict[str, list[list[str]]]:
        return {"positive": [ctx.attribute_names(h) for h in self.positive],
                "negative": [ctx.attribute_names(h) for h in self.negative]}


def _minimal(sets: list[int]) -> list[int]:
    return [h for h in sets if not any(o != h and o & ~h == 0 for o in sets)]


def _sign_hypotheses(cc: ClassificationContext, sign: Label, cap: int) -> list[int]:
    opposite = cc.negative if sign is Label.POSITIVE else cc.positive
    sub = cc.subcontext(sign)
    found = []
    for intent in iter_intents(sub, cap):
        if not intent:
            continue
        # an intent with empty support in its own class is backed by no example
        if derive_attributes(sub, intent) == 0:
            continue
        if derive_attributes(cc.base, intent) & opposite:
            continue  # falsified generalisation
        found.append(intent)
    return _minimal(found)


def learn_hypotheses(cc: ClassificationContext, cap: int = ENUMERATION_CAP) -> HypothesisSet:
    """Minimal positive and negative hypotheses of a classification context.

    A positive hypothesis is a non-empty intent of the positive subcontext
    (shared by at least one positive example) that no negative example has;
    negative ones are dual. Only the inclusion-minimal ones are kept.
    """
    if not cc.positive:
        raise EmptyClassError("positive")
    if not cc.negative:
        raise EmptyClassError("negative")
    return HypothesisSet(tuple(_sign_hypotheses(cc, Label.POSITIVE, cap)),
                         tuple(_sign_hypotheses(cc, Label.NEGATIVE, cap)))


def classify(hyps: HypothesisSet, intent: int) -> Verdict:
    has_pos = any(h & ~intent == 0 for h in hyps.positive)
    has_neg = any(h & ~intent == 0 for h in hyps.negative)
    if has_pos and has_neg:
        return Verdict.CONTRADICTORY
    if has_pos:
        return Verdict.POSITIVE
    if has_neg:
        return Verdict.NEGATIVE
    return Verdict.UNDETERMINED


def classify_all(cc: ClassificationContext, hyps: HypothesisSet) -> dict[str, Verdict]:
    """Verdicts for every undetermined object, in object order."""
    return {cc.base.objects[g]: classify(hyps, cc.base.rows[g])
            for g in bitset.iter_bits(cc.undetermined)}
