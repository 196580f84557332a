"""Attribute generalisation: taxonomies, grouped attributes, biset incidences,
rule measures, similarity measures and the concept-count compatible similarity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable

from . import bitset
from .config import ENUMERATION_CAP
from .context import FormalContext, derive_attributes
from .errors import ContractError, ValidationError
from .lattice import count_concepts, extents

# -- taxonomy ------------------------------------------------------------------------


@dataclass(frozen=True)
class Taxonomy:
    """Acyclic is-a arcs ``child -> parent`` and their transitive closure."""

    arcs: tuple[tuple[str, str], ...]
    nodes: tuple[str, ...] = field(init=False)
    _ancestors: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arcs = tuple(self.arcs)
        object.__setattr__(self, "arcs", arcs)
        nodes: list[str] = []
        parents: dict[str, list[str]] = {}
        for child, parent in arcs:
            if child == parent:
                raise ValidationError(f"taxonomy arc {child!r} -> itself")
            for n in (child, parent):
                if n not in parents:
                    parents[n] = []
                    nodes.append(n)
            parents[child].append(parent)
        object.__setattr__(self, "nodes", tuple(nodes))
        ancestors: dict[str, frozenset[str]] = {}
        state: dict[str, int] = {}

        def visit(n: str, path: list[str]) -> frozenset[str]:
            if state.get(n) == 2:
                return ancestors[n]
            if state.get(n) == 1:
                cycle = path[path.index(n):] + [n]
                raise ValidationError("cyclic taxonomy: " + " -> ".join(cycle))
            state[n] = 1
            acc = set()
            for p in parents[n]:
                acc.add(p)
                acc |= visit(p, path + [n])
            state[n] = 2
            ancestors[n] = frozenset(acc)
            return ancestors[n]

        for n in nodes:
            visit(n, [])
        object.__setattr__(self, "_ancestors", ancestors)

    @classmethod
    def parse(cls, data: bytes | str) -> "Taxonomy":
        from .io import parse_taxonomy_arcs

        return cls(tuple(parse_taxonomy_arcs(data)))

    def ancestors(self, node: str) -> frozenset[str]:
        return self._ancestors.get(node, frozenset())

    def leq(self, lower: str, upper: str) -> bool:
        return lower == upper or upper in self.ancestors(lower)


def build_generalized_context(transactions: FormalContext, tax: Taxonomy) -> FormalContext:
    """Add one column per taxon: a transaction has a taxon iff one of its items lies below it."""
    items = transactions.attributes
    taxa = [n for n in tax.nodes if n not in items]
    names = list(items) + taxa
    rows = []
    for row in transactions.rows:
        present = transactions.attribute_names(row)
        lifted = set()
        for item in present:
            lifted |= tax.ancestors(item)
        extra = bitset.from_indices(len(items) + j for j, t in enumerate(taxa) if t in lifted)
        rows.append(row | extra)
    return FormalContext(transactions.objects, tuple(names), tuple(rows))


def rule_support(ctx: FormalContext, premise: int, conclusion: int) -> Fraction:
    """|(X u Y)'| / |G| for the rule X -> Y."""
    if premise & conclusion:
        raise ContractError("premise and conclusion must be disjoint")
    if not ctx.n_objects:
        raise ContractError("support is undefined on a context without objects")
    return Fraction(derive_attributes(ctx, premise | conclusion).bit_count(), ctx.n_objects)


def rule_confidence(ctx: FormalContext, premise: int, conclusion: int) -> Fraction:
    """|(X u Y)'| / |X'|; undefined when no object has the premise."""
    if premise & conclusion:
        raise ContractError("premise and conclusion must be disjoint")
    base = derive_attributes(ctx, premise).bit_count()
    if not base:
        raise ContractError("confidence is undefined: no object satisfies the premise")
    return Fraction(derive_attributes(ctx, premise | conclusion).bit_count(), base)


# -- grouped attributes -------------------------------------------------------------------

MODES = ("exists", "forall", "alpha")


def _fraction(value: Any) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"bad threshold {value!r}") from None


@dataclass(frozen=True)
class GroupingSpec:
    """Named attribute groups and how a group's incidence is decided.

    ``mode`` is ``exists`` (some member), ``forall`` (every member) or
    ``alpha`` (share of members at least the group's threshold). Attributes
    in no group are kept as singleton groups unless ``keep_ungrouped`` is off.
    """

    groups: dict[str, tuple[str, ...]]
    mode: str = "exists"
    alpha: dict[str, Fraction] = field(default_factory=dict)
    default_alpha: Fraction | None = None
    keep_ungrouped: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown grouping mode {self.mode!r}; choose from {MODES}")
        for name, members in self.groups.items():
            if not members:
                raise ValidationError(f"group {name!r} is empty")
        if self.mode == "alpha":
            for name in self.groups:
                a = self.threshold(name)
                if not 0 < a <= 1:
                    raise ValidationError(f"threshold of group {name!r} must lie in (0, 1]")

    def threshold(self, group: str) -> Fraction:
        if group in self.alpha:
            return self.alpha[group]
        if self.default_alpha is None:
            raise ValidationError(f"alpha mode needs a threshold for group {group!r}")
        return self.default_alpha

    @classmethod
    def from_dict(cls, data: dict[str, Any], mode: str | None = None) -> "GroupingSpec":
        members = data.get("members")
        if not isinstance(members, dict) or not members:
            raise ValidationError("grouping spec needs a [groups.members] table")
        alpha = data.get("alpha", {})
        default_alpha = None
        if not isinstance(alpha, dict):
            default_alpha, alpha = _fraction(alpha), {}
        return cls(
            groups={str(k): tuple(str(m) for m in v) for k, v in members.items()},
            mode=mode or str(data.get("mode", "exists")),
            alpha={str(k): _fraction(v) for k, v in alpha.items()},
            default_alpha=default_alpha,
            keep_ungrouped=bool(data.get("keep_ungrouped", True)),
        )

    def with_mode(self, mode: str, default_alpha: Fraction | None = None) -> "GroupingSpec":
        return GroupingSpec(self.groups, mode, self.alpha,
                            default_alpha if default_alpha is not None else self.default_alpha,
                            self.keep_ungrouped)

    def resolve(self, ctx: FormalContext) -> list[tuple[str, int]]:
        """Ordered (group name, member mask) pairs, singletons included."""
        grouped = 0
        placed: dict[int, list[tuple[str, int]]] = {}
        for name, members in self.groups.items():
            mask = 0
            for m in members:
                if m not in ctx.attributes:
                    raise ValidationError(f"group {name!r} refers to unknown attribute {m!r}")
                mask |= 1 << ctx.attribute_index(m)
            grouped |= mask
            first = (mask & -mask).bit_length() - 1
            placed.setdefault(first, []).append((name, mask))
        out = []
        for m in range(ctx.n_attributes):
            if not grouped >> m & 1 and self.keep_ungrouped:
                out.append((ctx.attributes[m], 1 << m))
            out.extend(placed.get(m, []))
        names = [n for n, _ in out]
        if len(set(names)) != len(names):
            raise ValidationError("group names clash with ungrouped attribute names")
        return out


def generalize_attributes(ctx: FormalContext, spec: GroupingSpec) -> FormalContext:
    """Context over the group names with the spec's incidence mode."""
    groups = spec.resolve(ctx)
    rows = []
    for row in ctx.rows:
        new = 0
        for j, (name, mask) in enumerate(groups):
            hit = (row & mask).bit_count()
            if spec.mode == "exists":
                ok = hit > 0
            elif spec.mode == "forall":
                ok = hit == mask.bit_count()
            else:
                ok = Fraction(hit, mask.bit_count()) >= spec.threshold(name)
            if ok:
                new |= 1 << j
        rows.append(new)
    return FormalContext(ctx.objects, tuple(n for n, _ in groups), tuple(rows))


def concept_count_delta(ctx: FormalContext, spec: GroupingSpec, cap: int = ENUMERATION_CAP) -> int:
    """Concepts after generalising minus concepts before."""
    return count_concepts(generalize_attributes(ctx, spec), cap) - count_concepts(ctx, cap)


# -- generalisation on objects and attributes together ---------------------------------------


@dataclass(frozen=True)
class BisetParams:
    """Scenario 1..9 and the thresholds it needs.

    1 some a has some b          2 every a has every b
    3 every a has some b         4 some b is had by every a
    5 every b is had by some a   6 some a has every b
    7 share of a having >= beta_B of B is >= alpha_A
    8 share of b had by >= alpha_A of A is >= beta_B
    9 density of A x B is >= alpha
    """

    scenario: int
    alpha_A: Fraction | None = None
    beta_B: Fraction | None = None
    alpha: Fraction | None = None

    def __post_init__(self):
        if self.scenario not in range(1, 10):
            raise ValidationError(f"biset scenario must be 1..9, got {self.scenario}")
        needs = {7: {"alpha_A", "beta_B"}, 8: {"alpha_A", "beta_B"}, 9: {"alpha"}}.get(self.scenario, set())
        given = {k for k in ("alpha_A", "beta_B", "alpha") if getattr(self, k) is not None}
        if needs - given:
            raise ValidationError(f"scenario {self.scenario} needs {sorted(needs - given)}")
        if given - needs:
            raise ValidationError(f"scenario {self.scenario} does not use {sorted(given - needs)}")
        for k in given:
            v = Fraction(getattr(self, k))
            if not 0 < v <= 1:
                raise ValidationError(f"{k} must lie in (0, 1]")
            object.__setattr__(self, k, v)


def biset_incidence(ctx: FormalContext, objects: int, attributes: int, params: BisetParams) -> bool:
    """Whether the object group is in relation with the attribute group.

    Scenarios 1-6 use the usual quantifier semantics (a universal over an
    empty group holds). Scenarios 7-9 divide by group sizes and refuse empty
    groups.
    """
    A = bitset.to_indices(objects)
    B = bitset.to_indices(attributes)
    if objects >> ctx.n_objects or attributes >> ctx.n_attributes:
        raise ContractError("group outside the context range")
    inc = ctx.incidence
    s = params.scenario
    if s == 1:
        return any(inc(a, b) for a in A for b in B)
    if s == 2:
        return all(inc(a, b) for a in A for b in B)
    if s == 3:
        return all(any(inc(a, b) for b in B) for a in A)
    if s == 4:
        return any(all(inc(a, b) for a in A) for b in B)
    if s == 5:
        return all(any(inc(a, b) for a in A) for b in B)
    if s == 6:
        return any(all(inc(a, b) for b in B) for a in A)
    if not A or not B:
        raise ContractError(f"scenario {s} is undefined for an empty group")
    if s == 7:
        rich = sum(1 for a in A if Fraction(sum(inc(a, b) for b in B), len(B)) >= params.beta_B)
        return Fraction(rich, len(A)) >= params.alpha_A
    if s == 8:
        common = sum(1 for b in B if Fraction(sum(inc(a, b) for a in A), len(A)) >= params.alpha_A)
        return Fraction(common, len(B)) >= params.beta_B
    crosses = sum(inc(a, b) for a in A for b in B)
    return Fraction(crosses, len(A) * len(B)) >= params.alpha


# -- similarity measures ----------------------------------------------------------------------

MEASURES = ("Jc", "Di", "So", "An", "SS1", "SS2", "SM", "RT", "RR", "Ku", "Or", "YK")
CONVENTIONS = ("coabsence", "symdiff")


def _counts(ctx: FormalContext, m1: int, m2: int, convention: str) -> tuple[int, int, int, int]:
    e1, e2 = ctx.columns[m1], ctx.columns[m2]
    a = (e1 & e2).bit_count()
    b = (e1 & ~e2).bit_count()
    c = (e2 & ~e1).bit_count()
    if convention == "coabsence":
        d = ctx.n_objects - a - b - c
    elif convention == "symdiff":
        d = b + c
    else:
        raise ValidationError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")
    return a, b, c, d


def _ratio(num, den) -> Fraction:
    # 0/0 only arises for two identical (empty) columns
    return Fraction(1) if den == 0 else Fraction(num) / Fraction(den)


def similarity(ctx: FormalContext, m1: str | int, m2: str | int, measure: str,
               convention: str = "coabsence") -> Fraction | float:
    """One of the binary similarity measures between two attribute columns.

    ``a`` counts shared objects, ``b`` and ``c`` the objects of only one
    column, ``d`` the objects of neither (``coabsence``) or the symmetric
    difference (``symdiff``). Exact except Ochiai, which returns a float.
    """
    i = m1 if isinstance(m1, int) else ctx.attribute_index(m1)
    j = m2 if isinstance(m2, int) else ctx.attribute_index(m2)
    a, b, c, d = _counts(ctx, i, j, convention)
    half = Fraction(1, 2)
    if measure == "Jc":
        return _ratio(a, a + b + c)
    if measure == "Di":
        return _ratio(2 * a, 2 * a + b + c)
    if measure == "So":
        return _ratio(4 * a, 4 * a + b + c)
    if measure == "An":
        return _ratio(8 * a, 8 * a + b + c)
    if measure == "SS2":
        return _ratio(half * a, half * a + b + c)
    if measure == "SS1":
        return _ratio(2 * (a + d), 2 * (a + d) + b + c)
    if measure == "SM":
        return _ratio(a + d, a + d + b + c)
    if measure == "RT":
        return _ratio(half * (a + d), half * (a + d) + b + c)
    if measure == "RR":
        return _ratio(a, a + d + b + c)
    if measure == "Ku":
        if a + b == 0 and a + c == 0:
            return Fraction(1)
        left = Fraction(a, 2 * (a + b)) if a + b else Fraction(0)
        right = Fraction(a, 2 * (a + c)) if a + c else Fraction(0)
        return left + right
    if measure == "Or":
        if (a + b) * (a + c) == 0:
            return 1.0 if a + b + c == 0 else 0.0
        return a / math.sqrt((a + b) * (a + c))
    if measure == "YK":
        if a * d + b * c == 0:
            return Fraction(1)
        return Fraction(a * d, a * d + b * c)
    raise ValidationError(f"unknown similarity measure {measure!r}; choose from {MEASURES}")


@dataclass(frozen=True)
class SimilarityTable:
    measure: str
    attributes: tuple[str, ...]
    matrix: tuple[tuple[Fraction | float, ...], ...]

    def __getitem__(self, pair: tuple[str, str]):
        i, j = (self.attributes.index(p) for p in pair)
        return self.matrix[i][j]


def similarity_table(ctx: FormalContext, measure: str, convention: str = "coabsence") -> SimilarityTable:
    n = ctx.n_attributes
    rows = [[similarity(ctx, i, j, measure, convention) for j in range(n)] for i in range(n)]
    return SimilarityTable(measure, ctx.attributes, tuple(tuple(r) for r in rows))


# -- concept-count increase of an existential merge ------------------------------------------


@dataclass(frozen=True)
class HSets:
    """Extent families created by adding a column to the context without a and b."""

    h_a: frozenset[int]
    h_b: frozenset[int]
    h_union: frozenset[int]
    h_inter: frozenset[int]

    @property
    def h_ab(self) -> frozenset[int]:
        return self.h_a | self.h_b | self.h_inter

    @property
    def size_ab(self) -> int:
        return len(self.h_ab)

    @property
    def psi(self) -> int:
        return len(self.h_union) - self.size_ab


def h_sets(ctx: FormalContext, a: str | int, b: str | int, cap: int = ENUMERATION_CAP) -> HSets:
    """For each column c in (a', b', a' u b', a' n b'): the sets A n c over extents A of
    the context without a and b that are not themselves such extents."""
    i = a if isinstance(a, int) else ctx.attribute_index(a)
    j = b if isinstance(b, int) else ctx.attribute_index(b)
    if i == j:
        raise ContractError("h_sets needs two distinct attributes")
    rest = ctx.all_attributes & ~(1 << i) & ~(1 << j)
    base = extents(ctx.subcontext(None, rest), cap)
    ea, eb = ctx.columns[i], ctx.columns[j]

    def fresh(col: int) -> frozenset[int]:
        return frozenset(x & col for x in base if x & col not in base)

    return HSets(fresh(ea), fresh(eb), fresh(ea | eb), fresh(ea & eb))


def psi(ctx: FormalContext, a: str | int, b: str | int, cap: int = ENUMERATION_CAP) -> int:
    """Concept-count change when a and b are merged existentially (0 for a == b)."""
    i = a if isinstance(a, int) else ctx.attribute_index(a)
    j = b if isinstance(b, int) else ctx.attribute_index(b)
    if i == j:
        return 0
    return h_sets(ctx, i, j, cap).psi


def psi_matrix(ctx: FormalContext, cap: int = ENUMERATION_CAP) -> list[list[int]]:
    n = ctx.n_attributes
    out = [[0] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        out[i][j] = out[j][i] = psi(ctx, i, j, cap)
    return out


def psi_scale(ctx: FormalContext, cap: int = ENUMERATION_CAP) -> int:
    """Normaliser for the compatible similarity: the largest |psi| over attribute pairs."""
    return max((abs(v) for row in psi_matrix(ctx, cap) for v in row), default=0)


@dataclass(frozen=True)
class CompatibleSimilarity:
    psi: int
    delta: int
    value: Fraction


def compatible_similarity(ctx: FormalContext, a: str | int, b: str | int,
                          n0: int | None = None, cap: int = ENUMERATION_CAP) -> CompatibleSimilarity:
    """``S = (1 + delta)/2 - |psi| / (2 n0)`` with ``delta = [psi <= 0]``.

    ``n0`` defaults to :func:`psi_scale`; when it is 0 every psi is 0 and the
    penalty term is dropped.
    """
    p = psi(ctx, a, b, cap)
    if n0 is None:
        n0 = psi_scale(ctx, cap)
    delta = 1 if p <= 0 else 0
    value = Fraction(1 + delta, 2)
    if n0 > 0:
        value -= Fraction(abs(p), 2 * n0)
    return CompatibleSimilarity(p, delta, value)


def theorem3_bound(ctx: FormalContext, a: str | int, b: str | int) -> int:
    """2^|a'| + ... upper bound on |H(a, b)|: 2^(|a'|+|b'|) - 2^|a'| - 2^|b'| + 1."""
    i = a if isinstance(a, int) else ctx.attribute_index(a)
    j = b if isinstance(b, int) else ctx.attribute_index(b)
    sa, sb = ctx.columns[i].bit_count(), ctx.columns[j].bit_count()
    return 2 ** (sa + sb) - 2 ** sa - 2 ** sb + 1
