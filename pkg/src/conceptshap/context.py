"""Formal contexts and the derivation operators.

Object and attribute sets are plain ``int`` bitmasks over the owning
context's index range: bit ``i`` of an attribute set stands for
``ctx.attributes[i]``, bit ``g`` of an object set for ``ctx.objects[g]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import bitset
from .errors import ContractError, ValidationError


@dataclass(frozen=True)
class FormalContext:
    """Immutable binary incidence ``(G, M, I)`` stored as one bitmask per object.

    ``rows[g]`` has bit ``m`` set iff object ``g`` has attribute ``m``.
    """

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]
    columns: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _obj_index: dict = field(init=False, repr=False, compare=False)
    _attr_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        objects = tuple(self.objects)
        attributes = tuple(self.attributes)
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "rows", rows)
        _check_unique(objects, "object")
        _check_unique(attributes, "attribute")
        if len(rows) != len(objects):
            raise ValidationError(f"{len(rows)} incidence rows for {len(objects)} objects")
        limit = bitset.full(len(attributes))
        for g, row in enumerate(rows):
            if row < 0 or row & ~limit:
                raise ValidationError(f"row of object {objects[g]!r} has bits outside the attribute range")
        cols = [0] * len(attributes)
        for g, row in enumerate(rows):
            for m in bitset.iter_bits(row):
                cols[m] |= 1 << g
        object.__setattr__(self, "columns", tuple(cols))
        object.__setattr__(self, "_obj_index", {name: i for i, name in enumerate(objects)})
        object.__setattr__(self, "_attr_index", {name: i for i, name in enumerate(attributes)})

    # -- construction -------------------------------------------------------

    @classmethod
    def from_intents(cls, objects: Sequence[str], attributes: Sequence[str],
                     intents: Iterable[Iterable[str]]) -> "FormalContext":
        """Build from one collection of attribute names per object."""
        index = {name: i for i, name in enumerate(attributes)}
        rows = []
        for g, intent in zip(objects, intents):
            row = 0
            for name in intent:
                if name not in index:
                    raise ValidationError(f"object {g!r}: unknown attribute {name!r}")
                row |= 1 << index[name]
            rows.append(row)
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    @classmethod
    def from_matrix(cls, objects: Sequence[str], attributes: Sequence[str], matrix) -> "FormalContext":
        """Build from a 2-D array-like of truthy values (rows = objects)."""
        rows = []
        for line in matrix:
            line = list(line)
            if len(line) != len(attributes):
                raise ValidationError(f"matrix row has {len(line)} cells, expected {len(attributes)}")
            rows.append(bitset.from_indices(i for i, x in enumerate(line) if x))
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    # -- sizes and masks ----------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def all_objects(self) -> int:
        return bitset.full(len(self.objects))

    @property
    def all_attributes(self) -> int:
        return bitset.full(len(self.attributes))

    def object_index(self, name: str) -> int:
        try:
            return self._obj_index[name]
        except KeyError:
            raise ValidationError(f"unknown object {name!r}") from None

    def attribute_index(self, name: str) -> int:
        try:
            return self._attr_index[name]
        except KeyError:
            raise ValidationError(f"unknown attribute {name!r}") from None

    def attribute_set(self, names: Iterable[str]) -> int:
        return bitset.from_indices(self.attribute_index(n) for n in names)

    def object_set(self, names: Iterable[str]) -> int:
        return bitset.from_indices(self.object_index(n) for n in names)

    def attribute_names(self, mask: int) -> list[str]:
        return [self.attributes[i] for i in bitset.iter_bits(mask)]

    def object_names(self, mask: int) -> list[str]:
        return [self.objects[i] for i in bitset.iter_bits(mask)]

    def intent_of(self, obj: str | int) -> int:
        g = obj if isinstance(obj, int) else self.object_index(obj)
        return self.rows[g]

    def extent_of(self, attr: str | int) -> int:
        m = attr if isinstance(attr, int) else self.attribute_index(attr)
        return self.columns[m]

    def incidence(self, g: int, m: int) -> bool:
        return bool(self.rows[g] >> m & 1)

    # -- derived contexts ---------------------------------------------------

    def subcontext(self, objects: int | None = None, attributes: int | None = None) -> "FormalContext":
        """Restrict to the given object and attribute masks, keeping index order."""
        objects = self.all_objects if objects is None else objects
        attributes = self.all_attributes if attributes is None else attributes
        keep_g = bitset.to_indices(objects)
        keep_m = bitset.to_indices(attributes)
        rows = []
        for g in keep_g:
            row = self.rows[g]
            rows.append(bitset.from_indices(j for j, m in enumerate(keep_m) if row >> m & 1))
        return FormalContext(tuple(self.objects[g] for g in keep_g),
                             tuple(self.attributes[m] for m in keep_m), tuple(rows))

    def transpose(self) -> "FormalContext":
        return FormalContext(self.attributes, self.objects, self.columns)

    def to_matrix(self):
        import numpy as np

        out = np.zeros((self.n_objects, self.n_attributes), dtype=bool)
        for g, row in enumerate(self.rows):
            for m in bitset.iter_bits(row):
                out[g, m] = True
        return out

    def __str__(self) -> str:
        width = max((len(o) for o in self.objects), default=0)
        lines = [" " * width + " " + " ".join(self.attributes)]
        for g, name in enumerate(self.objects):
            cells = []
            for m, attr in enumerate(self.attributes):
                mark = "X" if self.incidence(g, m) else "."
                cells.append(mark.ljust(len(attr)))
            lines.append(name.ljust(width) + " " + " ".join(cells))
        return "\n".join(lines)


def _check_unique(names: tuple[str, ...], kind: str) -> None:
    seen = set()
    for n in names:
        if not isinstance(n, str):
            raise ValidationError(f"{kind} name {n!r} is not a string")
        if n in seen:
            raise ValidationError(f"duplicate {kind} name {n!r}")
        seen.add(n)


@dataclass(frozen=True, order=True)
class Concept:
    """A formal concept; both components are bitmasks of the owning context."""

    extent: int
    intent: int

    def describe(self, ctx: FormalContext) -> str:
        ext = ", ".join(ctx.object_names(self.extent))
        itt = ", ".join(ctx.attribute_names(self.intent))
        return f"({{{ext}}}, {{{itt}}})"


def _check_range(mask: int, n: int, kind: str) -> None:
    if mask < 0 or mask >> n:
        raise ContractError(f"{kind} set {mask:#x} has bits outside the range of {n} {kind}s")


def derive_objects(ctx: FormalContext, objects: int) -> int:
    """Attributes shared by every object in ``objects`` (all attributes for the empty set)."""
    _check_range(objects, ctx.n_objects, "object")
    result = ctx.all_attributes
    for g in bitset.iter_bits(objects):
        result &= ctx.rows[g]
        if not result:
            break
    return result


def derive_attributes(ctx: FormalContext, attributes: int) -> int:
    """Objects having every attribute in ``attributes`` (all objects for the empty set)."""
    _check_range(attributes, ctx.n_attributes, "attribute")
    result = ctx.all_objects
    for m in bitset.iter_bits(attributes):
        result &= ctx.columns[m]
        if not result:
            break
    return result


def close_attributes(ctx: FormalContext, attributes: int) -> int:
    return derive_objects(ctx, derive_attributes(ctx, attributes))


def close_objects(ctx: FormalContext, objects: int) -> int:
    return derive_attributes(ctx, derive_objects(ctx, objects))


def is_concept(ctx: FormalContext, concept: Concept) -> bool:
    try:
        return (derive_objects(ctx, concept.extent) == concept.intent
                and derive_attributes(ctx, concept.intent) == concept.extent)
    except ContractError:
        return False


def require_concept(ctx: FormalContext, concept: Concept) -> None:
    if not is_concept(ctx, concept):
        raise ContractError(f"{concept!r} is not a concept of the given context")


def concept_of_intent(ctx: FormalContext, intent: int) -> Concept:
    """The concept generated by an attribute set (its closure and extent)."""
    extent = derive_attributes(ctx, intent)
    return Concept(extent, derive_objects(ctx, extent))
