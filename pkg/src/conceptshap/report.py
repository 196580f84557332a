"""Rendering of result rows as aligned tables, CSV or JSON lines, plus figures."""

from __future__ import annotations

import json
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .io import write_csv_rows


def round_half_even(value: Fraction | float | int, precision: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 60
        if isinstance(value, Fraction):
            exact = Decimal(value.numerator) / Decimal(value.denominator)
        else:
            exact = Decimal(repr(float(value))) if isinstance(value, float) else Decimal(value)
        return exact.quantize(Decimal(1).scaleb(-precision), rounding=ROUND_HALF_EVEN)


def fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def shapley_text(value, precision: int) -> str:
    """``0`` outside the carrier, ``0.0`` for a computed zero, else fraction and decimal."""
    if value is None:
        return "0"
    if value == 0:
        return "0.0"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return f"{value.numerator}.0"
        return f"{fraction_text(value)} ({round_half_even(value, precision)})"
    return str(round_half_even(value, precision))


def _plain(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{fraction_text(value)} ({round_half_even(value, precision)})"
    if isinstance(value, float):
        return str(round_half_even(value, precision))
    if isinstance(value, (list, tuple, set, frozenset)):
        return "{" + ", ".join(str(v) for v in value) + "}"
    return str(value)


def _json_value(value, precision: int):
    if isinstance(value, Fraction):
        return fraction_text(value)
    if isinstance(value, float):
        return float(round_half_even(value, precision))
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    return value


def render(rows: Sequence[dict[str, Any]], fmt: str, precision: int = 3) -> str:
    """Render result rows as ``table``, ``csv`` or ``jsonl``.

    Keys starting with ``__`` are private; ``__text__`` may hold preformatted
    table/CSV cells that override the default rendering.
    """
    if not rows:
        return ""
    columns: list[str] = []
    for r in rows:
        for k in r:
            if k not in columns and not k.startswith("__"):
                columns.append(k)
    if fmt == "jsonl":
        lines = []
        for r in rows:
            record = {}
            for k in columns:
                v = r.get(k)
                record[k] = _json_value(v, precision)
                if isinstance(v, (Fraction, float)):
                    record[f"{k}_decimal"] = float(round_half_even(v, precision))
            lines.append(json.dumps(record, ensure_ascii=False))
        return "\n".join(lines) + "\n"
    cells = [[r.get("__text__", {}).get(k) or _plain(r.get(k), precision) for k in columns] for r in rows]
    if fmt == "csv":
        return write_csv_rows([columns, *cells])
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    for row in cells:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def shapley_rows(vector, precision: int, include_structural: bool = True) -> list[dict[str, Any]]:
    rows = []
    for name, value in zip(vector.attributes, vector.values):
        if value is None and not include_structural:
            continue
        rows.append({
            "attribute": name,
            "phi": value,
            "in_carrier": value is not None,
            "__text__": {"phi": shapley_text(value, precision)},
        })
    return rows


# -- figures -----------------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def shapley_figure(vector, path: str | Path, title: str = "", carrier_only: bool = True) -> Path:
    """Lollipop chart of a Shapley vector, written to ``path``."""
    plt = _pyplot()
    pairs = [(a, v) for a, v in zip(vector.attributes, vector.values)
             if v is not None or not carrier_only]
    names = [a for a, _ in pairs]
    values = [0.0 if v is None else float(v) for _, v in pairs]
    fig, ax = plt.subplots(figsize=(6, 0.35 * len(names) + 1.2))
    ys = list(range(len(names)))[::-1]
    colors = ["tab:green" if v > 0 else "tab:red" if v < 0 else "tab:gray" for v in values]
    ax.hlines(ys, 0, values, colors=colors, linewidth=2)
    ax.scatter(values, ys, color=colors, zorder=3)
    ax.axvline(0, color="black", linewidth=0.8)
    ax.set_yticks(ys)
    ax.set_yticklabels(names)
    ax.set_xlabel("Shapley value")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def stability_figure(labels: Sequence[str], sigmas: Sequence[float], path: str | Path,
                     title: str = "Extensional stability") -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 0.35 * len(labels) + 1.2))
    ys = list(range(len(labels)))[::-1]
    ax.barh(ys, sigmas, color="tab:blue")
    ax.set_yticks(ys)
    ax.set_yticklabels(labels)
    ax.set_xlim(0, 1)
    ax.set_xlabel("sigma_e")
    ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
