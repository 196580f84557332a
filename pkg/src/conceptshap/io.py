"""Reading and writing contexts: Burmeister CXT, many-valued CSV, taxonomy TSV."""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .context import FormalContext
from .errors import ParseError, ValidationError
from .jsm import ClassificationContext, Label


# -- Burmeister CXT ---------------------------------------------------------------


def _text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    return data


def parse_cxt(data: bytes | str) -> FormalContext:
    """Parse a Burmeister ``.cxt`` file.

    Layout: ``B``, a name line (usually blank), object count, attribute
    count, the object names, the attribute names, then one row per object
    over ``X``/``x`` (incidence) and ``.``.
    """
    # only \n (or \r\n) ends a line; other Unicode separators may occur in names
    lines = _text(data).split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    pos = 0

    def take(what: str) -> str:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of file, expected {what}", pos + 1)
        pos += 1
        return lines[pos - 1].rstrip("\r")

    if take("magic line").strip() != "B":
        raise ParseError("missing 'B' magic line", 1)
    take("name line")
    counts = []
    for what in ("object count", "attribute count"):
        raw = take(what).strip()
        try:
            value = int(raw)
        except ValueError:
            raise ParseError(f"bad {what} {raw!r}", pos) from None
        if value < 0:
            raise ParseError(f"negative {what}", pos)
        counts.append(value)
    n_obj, n_att = counts
    objects = [take("object name") for _ in range(n_obj)]
    attributes = [take("attribute name") for _ in range(n_att)]
    for kind, names, first in (("object", objects, 5), ("attribute", attributes, 5 + n_obj)):
        seen: dict[str, int] = {}
        for i, name in enumerate(names):
            if name in seen:
                raise ParseError(f"duplicate {kind} name {name!r}", first + i)
            seen[name] = i
    rows = []
    for _ in range(n_obj):
        raw = take("incidence row").rstrip()
        if len(raw) != n_att:
            raise ParseError(f"row has {len(raw)} cells, expected {n_att}", pos)
        row = 0
        for m, ch in enumerate(raw):
            if ch in "Xx":
                row |= 1 << m
            elif ch != ".":
                raise ParseError(f"invalid cell character {ch!r}", pos)
        rows.append(row)
    for extra in lines[pos:]:
        if extra.strip():
            raise ParseError("trailing content after the incidence rows", pos + 1)
        pos += 1
    return FormalContext(tuple(objects), tuple(attributes), tuple(rows))


def write_cxt(ctx: FormalContext) -> bytes:
    for name in ctx.objects + ctx.attributes:
        if "\n" in name or "\r" in name:
            raise ValidationError(f"name {name!r} contains a line break and cannot be written as CXT")
    out = ["B", "", str(ctx.n_objects), str(ctx.n_attributes), *ctx.objects, *ctx.attributes]
    for row in ctx.rows:
        out.append("".join("X" if row >> m & 1 else "." for m in range(ctx.n_attributes)))
    return ("\n".join(out) + "\n").encode("utf-8")


def read_cxt(path: str | Path) -> FormalContext:
    return parse_cxt(Path(path).read_bytes())


# -- many-valued CSV and nominal scaling ---------------------------------------------


@dataclass(frozen=True)
class ManyValuedContext:
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    values: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.values) != len(self.objects):
            raise ValidationError("one value row per object required")
        for name, row in zip(self.objects, self.values):
            if len(row) != len(self.attributes):
                raise ValidationError(f"row {name!r} has {len(row)} values, expected {len(self.attributes)}")
        if len(set(self.objects)) != len(self.objects):
            raise ValidationError("duplicate object names")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValidationError("duplicate attribute names")

    def column(self, name: str) -> list[str]:
        try:
            j = self.attributes.index(name)
        except ValueError:
            raise ValidationError(f"unknown column {name!r}") from None
        return [row[j] for row in self.values]


def parse_csv(data: bytes | str) -> ManyValuedContext:
    """Comma-separated, header row first, object names in the first column."""
    reader = csv.reader(_io.StringIO(_text(data)))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty CSV", 1)
    header = [c.strip() for c in rows[0]]
    body = []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != len(header):
            raise ParseError(f"{len(r)} fields, header has {len(header)}", lineno)
        body.append([c.strip() for c in r])
    return ManyValuedContext(tuple(r[0] for r in body), tuple(header[1:]),
                             tuple(tuple(r[1:]) for r in body))


def read_csv(path: str | Path) -> ManyValuedContext:
    return parse_csv(Path(path).read_bytes())


BINARY_VALUES = {"0": False, "1": True, "false": False, "true": True}


@dataclass(frozen=True)
class ColumnScale:
    """How one many-valued column becomes binary columns.

    ``kind`` is ``nominal`` (one column per value, named ``attr_value`` unless
    ``names`` is given), ``binary`` (kept as a single column) or ``ignore``.
    With ``closed=True`` a value outside ``values`` is an error.
    """

    kind: str = "nominal"
    values: tuple[str, ...] | None = None
    names: tuple[str, ...] | None = None
    closed: bool = False

    def __post_init__(self):
        if self.kind not in ("nominal", "binary", "ignore"):
            raise ValidationError(f"unknown scale kind {self.kind!r}")
        if self.names is not None and (self.values is None or len(self.names) != len(self.values)):
            raise ValidationError("scale 'names' needs 'values' of the same length")


@dataclass(frozen=True)
class ScalingSpec:
    columns: dict[str, ColumnScale] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScalingSpec":
        cols = {}
        for name, entry in data.items():
            entry = dict(entry)
            for key in ("values", "names"):
                if key in entry:
                    entry[key] = tuple(str(v) for v in entry[key])
            try:
                cols[name] = ColumnScale(**entry)
            except TypeError as exc:
                raise ValidationError(f"scaling for {name!r}: {exc}") from None
        return cls(cols)

    def scale_for(self, name: str, observed: Sequence[str]) -> ColumnScale:
        if name in self.columns:
            return self.columns[name]
        if all(v.lower() in BINARY_VALUES for v in observed):
            return ColumnScale(kind="binary")
        return ColumnScale()


@dataclass(frozen=True)
class TargetSpec:
    """Which column carries the class and how its values map to +/-/tau.

    Without ``positive`` the column holds labels directly (``+``/``-``/``tau``
    or the aliases ``pos/neg/undet`` and ``1/0/?``). With ``positive``, those
    values are +, ``negative`` lists - values (``"rest"`` for everything
    else), and ``undetermined_objects`` are held out as tau regardless.
    """

    column: str
    positive: tuple[str, ...] | None = None
    negative: tuple[str, ...] | str = "rest"
    undetermined_objects: tuple[str, ...] = ()
    name: str | None = None

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TargetSpec":
        data = dict(data)
        if "column" not in data:
            raise ValidationError("target section needs a 'column'")
        for key in ("positive", "undetermined_objects"):
            if key in data:
                data[key] = tuple(str(v) for v in data[key])
        if isinstance(data.get("negative"), list):
            data["negative"] = tuple(str(v) for v in data["negative"])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ValidationError(f"target section: {exc}") from None

    def label(self, obj: str, value: str) -> Label:
        if obj in self.undetermined_objects:
            return Label.UNDETERMINED
        if self.positive is None:
            return Label.parse(value)
        if value in self.positive:
            return Label.POSITIVE
        if self.negative == "rest" or value in self.negative:
            return Label.NEGATIVE
        return Label.UNDETERMINED


def scale_nominal(mv: ManyValuedContext, spec: ScalingSpec | None = None,
                  target: TargetSpec | None = None) -> tuple[FormalContext, tuple[Label, ...] | None]:
    """Binarise a many-valued context; the target column becomes a label vector.

    Column order follows the CSV columns; within a nominal column, values come
    in declared order, then in order of first occurrence.
    """
    spec = spec or ScalingSpec()
    for name in spec.columns:
        if name not in mv.attributes:
            raise ValidationError(f"scaling refers to unknown column {name!r}")
    names: list[str] = []
    cells: list[list[bool]] = [[] for _ in mv.objects]
    for j, col in enumerate(mv.attributes):
        if target is not None and col == target.column:
            continue
        observed = [row[j] for row in mv.values]
        scale = spec.scale_for(col, observed)
        if scale.kind == "ignore":
            continue
        if scale.kind == "binary":
            bad = [v for v in observed if v.lower() not in BINARY_VALUES]
            if bad:
                raise ValidationError(f"column {col!r} is not binary: value {bad[0]!r}")
            names.append(col)
            for i, v in enumerate(observed):
                cells[i].append(BINARY_VALUES[v.lower()])
            continue
        values = list(scale.values or ())
        for v in observed:
            if v not in values:
                if scale.closed:
                    raise ValidationError(f"column {col!r}: value {v!r} not in the declared list")
                values.append(v)
        labels = list(scale.names) if scale.names else []
        labels += [f"{col}_{v}" for v in values[len(labels):]]
        names.extend(labels)
        for i, v in enumerate(observed):
            cells[i].extend(v == w for w in values)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ValidationError(f"scaling produces duplicate column name {dup!r}")
    ctx = FormalContext.from_matrix(mv.objects, names, cells)
    if target is None:
        return ctx, None
    values = mv.column(target.column)
    for obj in target.undetermined_objects:
        if obj not in mv.objects:
            raise ValidationError(f"held-out object {obj!r} not found")
    return ctx, tuple(target.label(o, v) for o, v in zip(mv.objects, values))


def classification_context(mv: ManyValuedContext, spec: ScalingSpec | None,
                           target: TargetSpec) -> ClassificationContext:
    ctx, labels = scale_nominal(mv, spec, target)
    return ClassificationContext(ctx, labels, target.name or target.column)


# -- taxonomy ---------------------------------------------------------------------------


def parse_taxonomy_arcs(data: bytes | str) -> list[tuple[str, str]]:
    """``child<TAB>parent`` lines; blank lines and ``#`` comments are skipped."""
    arcs = []
    for lineno, line in enumerate(_text(data).splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\r\n").split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ParseError("expected 'child<TAB>parent'", lineno)
        arcs.append((parts[0].strip(), parts[1].strip()))
    return arcs


def write_csv_rows(rows: Iterable[Sequence[Any]]) -> str:
    buf = _io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()
