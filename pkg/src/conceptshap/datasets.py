"""Bundled example contexts."""

from __future__ import annotations

from importlib import resources

from .config import load_config
from .context import FormalContext
from .io import ScalingSpec, TargetSpec, classification_context, parse_csv, parse_cxt
from .jsm import ClassificationContext


def path(name: str):
    return resources.files(__package__).joinpath("data").joinpath(name)


def _read(name: str) -> bytes:
    return path(name).read_bytes()


def fruits() -> FormalContext:
    """Four fruits scaled over colour, firmness, smoothness and form (10 attributes)."""
    return parse_cxt(_read("fruits.cxt"))


def table6() -> FormalContext:
    """7x8 context whose existential merge of m1 and m2 adds 16 concepts."""
    return parse_cxt(_read("table6.cxt"))


def transactions() -> FormalContext:
    """Six market-basket transactions over five items."""
    return parse_cxt(_read("fig5_transactions.cxt"))


def taxonomy():
    from .generalize import Taxonomy

    return Taxonomy.parse(_read("fig5_taxonomy.tsv"))


def _classification(stem: str) -> ClassificationContext:
    with resources.as_file(path(f"{stem}.toml")) as cfg_path:
        cfg = load_config(cfg_path)
    mv = parse_csv(_read(f"{stem}.csv"))
    return classification_context(mv, ScalingSpec.from_dict(cfg.section("scaling")),
                                  TargetSpec.from_dict(cfg.section("target")))


def credit() -> ClassificationContext:
    """Twelve credit applicants: four positive, four negative, four undetermined."""
    return _classification("credit")


def zoo() -> ClassificationContext:
    """UCI Zoo (101 animals), birds positive, chicken and worm undetermined."""
    return _classification("zoo")
