"""Command-line interface.

Exit codes: 0 on success, 1 on validation or usage errors, 2 when a size cap
refuses the computation.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from . import datasets, oracle
from .attribution import (
    StabilityGame,
    estimate_shapley_sampling,
    exact_shapley,
    jsm_game,
)
from .config import OUTPUT_FORMATS, RunConfig, load_config
from .context import FormalContext
from .errors import ConceptShapError, ResourceLimitError, ValidationError
from .generalize import (
    CONVENTIONS,
    MEASURES,
    GroupingSpec,
    Taxonomy,
    build_generalized_context,
    compatible_similarity,
    generalize_attributes,
    psi_scale,
    similarity,
)
from .io import ScalingSpec, TargetSpec, classification_context, read_csv, read_cxt, scale_nominal, write_cxt
from .jsm import ClassificationContext, classify_all, learn_hypotheses
from .lattice import count_concepts, enumerate_concepts
from .report import render, shapley_figure, shapley_rows, stability_figure
from .stability import stability_report

DATASETS = ("fruits", "table6", "transactions", "credit", "zoo")


@dataclass
class State:
    config: RunConfig
    input: Path | None
    dataset: str | None
    output: Path | None
    target: str | None
    verify: bool

    # -- loading --------------------------------------------------------------

    def _target_spec(self) -> TargetSpec | None:
        section = dict(self.config.section("target"))
        if self.target:
            section = {"column": self.target}
        return TargetSpec.from_dict(section) if section else None

    def _source(self) -> str:
        if self.dataset:
            return self.dataset
        if self.input is None:
            raise click.UsageError("give --input FILE or --dataset NAME")
        return str(self.input)

    def context(self) -> FormalContext:
        if self.dataset in ("credit", "zoo"):
            return self.classification().base
        if self.dataset:
            return getattr(datasets, self.dataset)()
        source = Path(self._source())
        if source.suffix.lower() == ".csv":
            spec = ScalingSpec.from_dict(self.config.section("scaling"))
            ctx, _ = scale_nominal(read_csv(source), spec, self._target_spec())
            return ctx
        return read_cxt(source)

    def classification(self) -> ClassificationContext:
        if self.dataset:
            if self.dataset not in ("credit", "zoo"):
                raise ValidationError(f"dataset {self.dataset!r} has no class labels")
            return getattr(datasets, self.dataset)()
        source = Path(self._source())
        target = self._target_spec()
        if source.suffix.lower() != ".csv" or target is None:
            raise ValidationError("JSM commands need a CSV input and a target column "
                                  "(--target COLUMN or a [target] config section)")
        spec = ScalingSpec.from_dict(self.config.section("scaling"))
        return classification_context(read_csv(source), spec, target)

    # -- output ---------------------------------------------------------------

    def emit(self, rows, text: str | None = None) -> None:
        """Write rows in the configured format; ``text`` replaces the table form."""
        if text is not None and self.config.format == "table":
            out = text if text.endswith("\n") else text + "\n"
        else:
            out = render(rows, self.config.format, self.config.precision)
        if self.output is None:
            click.echo(out, nl=False)
        else:
            self.output.write_text(out, encoding="utf-8")


def _set_text(ctx: FormalContext, mask: int, objects: bool) -> str:
    names = ctx.object_names(mask) if objects else ctx.attribute_names(mask)
    return "{" + ", ".join(names) + "}"


def _check(ok: bool) -> str:
    return "ok" if ok else "MISMATCH"


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Context file: Burmeister .cxt or many-valued .csv.")
@click.option("--dataset", type=click.Choice(DATASETS), help="Use a bundled example instead of --input.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="TOML run configuration.")
@click.option("--target", help="CSV column holding the class labels.")
@click.option("--format", "fmt", type=click.Choice(OUTPUT_FORMATS), help="Report format.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), help="Write the report here.")
@click.option("--seed", type=int, help="Seed for sampling estimators.")
@click.option("--precision", type=int, help="Decimal places in reports.")
@click.option("--cap-enumeration", type=int, help="Max attributes for concept enumeration.")
@click.option("--cap-generators", type=int, help="Max intent size for generator scans.")
@click.option("--cap-shapley", type=int, help="Max carrier size for exact Shapley values.")
@click.option("--verify", is_flag=True, help="Cross-check results against the brute-force oracles.")
@click.pass_context
def cli(ctx, input_path, dataset, config_path, target, fmt, output, seed, precision,
        cap_enumeration, cap_generators, cap_shapley, verify):
    """Concept lattices, JSM hypotheses, stability and Shapley attributions."""
    config = load_config(config_path) if config_path else RunConfig()
    config = config.with_overrides(format=fmt, seed=seed, precision=precision,
                                   cap_enumeration=cap_enumeration, cap_generators=cap_generators,
                                   cap_shapley=cap_shapley)
    ctx.obj = State(config, input_path, dataset, output, target, verify)


# -- concepts ----------------------------------------------------------------------------


@cli.command()
@click.option("--stability", is_flag=True, help="Add the extensional stability of each concept.")
@click.option("--figure", type=click.Path(dir_okay=False, path_type=Path),
              help="With --stability, save a bar chart of sigma_e.")
@click.pass_obj
def concepts(state: State, stability, figure):
    """List all concepts in lectic order."""
    ctx = state.context()
    caps = state.config.caps
    found = enumerate_concepts(ctx, caps.enumeration)
    naive = oracle.naive_concepts(ctx) if state.verify else None
    rows = []
    for i, c in enumerate(found):
        row = {"id": i, "extent": _set_text(ctx, c.extent, True), "intent": _set_text(ctx, c.intent, False)}
        if stability:
            row["sigma_e"] = stability_report(ctx, c, caps.generators).sigma_e
        if state.verify:
            ok = c in naive and len(naive) == len(found)
            if stability:
                ok = ok and oracle.brute_stability(ctx, c) == row["sigma_e"]
            row["oracle"] = _check(ok)
        rows.append(row)
    if stability and figure:
        stability_figure([f"#{r['id']} {r['intent']}" for r in rows],
                         [float(r["sigma_e"]) for r in rows], figure)
    state.emit(rows)


# -- JSM ---------------------------------------------------------------------------------


@cli.group()
def jsm():
    """JSM hypotheses, verdicts and Shapley explanations."""


@jsm.command("learn")
@click.pass_obj
def jsm_learn(state: State):
    """Minimal positive and negative hypotheses."""
    cc = state.classification()
    hyps = learn_hypotheses(cc, state.config.caps.enumeration)
    rows = [{"sign": h.sign.value, "hypothesis": _set_text(cc.base, h.attrs, False)}
            for h in hyps.hypotheses()]
    if state.verify:
        names = cc.base.object_names
        pos, neg = oracle.brute_hypotheses(cc.base, set(names(cc.positive)), set(names(cc.negative)))
        found_pos = {frozenset(cc.base.attribute_names(h)) for h in hyps.positive}
        found_neg = {frozenset(cc.base.attribute_names(h)) for h in hyps.negative}
        status = _check(found_pos == pos and found_neg == neg)
        for r in rows:
            r["oracle"] = status
    state.emit(rows)


@jsm.command("classify")
@click.pass_obj
def jsm_classify(state: State):
    """Verdicts for the undetermined objects."""
    cc = state.classification()
    hyps = learn_hypotheses(cc, state.config.caps.enumeration)
    rows = [{"object": name, "verdict": str(v)} for name, v in classify_all(cc, hyps).items()]
    state.emit(rows)


@jsm.command("explain")
@click.argument("obj")
@click.option("--samples", type=int, help="Also report a permutation-sampling estimate.")
@click.option("--figure", type=click.Path(dir_okay=False, path_type=Path), help="Save a lollipop chart.")
@click.option("--all-attributes", is_flag=True, help="List attributes outside the object's intent too.")
@click.pass_obj
def jsm_explain(state: State, obj, samples, figure, all_attributes):
    """Shapley vector of OBJECT's attributes for its verdict."""
    cc = state.classification()
    hyps = learn_hypotheses(cc, state.config.caps.enumeration)
    game = jsm_game(cc, hyps, obj)
    vector = exact_shapley(game, state.config.caps.shapley)
    _emit_shapley(state, game, vector, samples, figure, all_attributes, f"JSM explanation of {obj}")


def _emit_shapley(state: State, game, vector, samples, figure, all_attributes, title):
    cfg = state.config
    rows = shapley_rows(vector, cfg.precision, include_structural=all_attributes)
    if samples:
        est = estimate_shapley_sampling(game, samples, cfg.seed, cfg.caps.shapley)
        for r in rows:
            r["estimate"] = est[r["attribute"]]
    if state.verify:
        try:
            ref = oracle.permutation_shapley(game)
        except ResourceLimitError:
            ref = None
        for r in rows:
            if not r["in_carrier"]:
                r["oracle"] = "ok"
            elif ref is None:
                r["oracle"] = "skipped"
            else:
                r["oracle"] = _check(ref[r["attribute"]] == r["phi"])
    if figure:
        shapley_figure(vector, figure, title)
    state.emit(rows)


# -- stability ---------------------------------------------------------------------------


@cli.group()
def stability():
    """Stability of single concepts."""


@stability.command("explain")
@click.argument("concept_id", type=int)
@click.option("--strict", is_flag=True, help="Use v(empty) = 0 even when the empty set generates the intent.")
@click.option("--samples", type=int, help="Also report a permutation-sampling estimate.")
@click.option("--figure", type=click.Path(dir_okay=False, path_type=Path), help="Save a lollipop chart.")
@click.option("--all-attributes", is_flag=True, help="List attributes outside the intent too.")
@click.pass_obj
def stability_explain(state: State, concept_id, strict, samples, figure, all_attributes):
    """Shapley vector of a concept's intent for its stability (CONCEPT_ID is the lectic index)."""
    ctx = state.context()
    caps = state.config.caps
    found = enumerate_concepts(ctx, caps.enumeration)
    if not 0 <= concept_id < len(found):
        raise ValidationError(f"concept id {concept_id} outside 0..{len(found) - 1}")
    concept = found[concept_id]
    report = stability_report(ctx, concept, caps.generators, concept_id)
    game = StabilityGame(ctx, concept, strict)
    vector = exact_shapley(game, caps.shapley)
    if state.config.format == "table":
        sigma = report.sigma_e
        click.echo(f"concept {concept_id} {concept.describe(ctx)}: sigma_e = {sigma} "
                   f"({float(sigma):.{state.config.precision}f})", err=True)
    _emit_shapley(state, game, vector, samples, figure, all_attributes,
                  f"Stability attribution of concept {concept_id}")


# -- generalisation and similarity -----------------------------------------------------


@cli.command()
@click.option("--groups", "groups_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="TOML file with a [groups] table.")
@click.option("--taxonomy", "taxonomy_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="child<TAB>parent arcs; adds every taxon as a column.")
@click.option("--mode", type=click.Choice(("exists", "forall", "alpha")), help="Incidence of a group.")
@click.option("--alpha", help="Threshold for --mode alpha, e.g. 1/2.")
@click.option("--write-context", type=click.Path(dir_okay=False, path_type=Path),
              help="Save the generalised context as CXT.")
@click.pass_obj
def generalize(state: State, groups_path, taxonomy_path, mode, alpha, write_context):
    """Concept-count change from generalising attributes."""
    if (groups_path is None) == (taxonomy_path is None):
        raise click.UsageError("give exactly one of --groups or --taxonomy")
    ctx = state.context()
    if groups_path:
        spec = GroupingSpec.from_dict(load_config(groups_path).section("groups"), mode)
        if alpha is not None:
            spec = spec.with_mode(spec.mode, Fraction(alpha))
        new = generalize_attributes(ctx, spec)
    else:
        new = build_generalized_context(ctx, Taxonomy.parse(taxonomy_path.read_bytes()))
    cap = state.config.caps.enumeration
    before, after = count_concepts(ctx, cap), count_concepts(new, cap)
    row = {"before": before, "after": after, "delta": after - before}
    if state.verify:
        row["oracle"] = _check(len(oracle.naive_concepts(ctx)) == before
                               and len(oracle.naive_concepts(new)) == after)
    if write_context:
        write_context.write_bytes(write_cxt(new))
    text = f"{before} → {after} ({after - before:+d})"
    if state.verify:
        text += f"  oracle {row['oracle']}"
    state.emit([row], text)


@cli.command("similarity")
@click.option("--measure", type=click.Choice(MEASURES), help="Binary similarity measure.")
@click.option("--compatible", is_flag=True, help="Similarity derived from the concept-count change psi.")
@click.option("--convention", type=click.Choice(CONVENTIONS), default="coabsence", show_default=True,
              help="Meaning of d for measures that use it.")
@click.option("--n0", type=int, help="Normaliser for --compatible (default: max |psi|).")
@click.pass_obj
def similarity_cmd(state: State, measure, compatible, convention, n0):
    """Pairwise attribute similarities."""
    if bool(measure) == compatible:
        raise click.UsageError("give exactly one of --measure or --compatible")
    ctx = state.context()
    cap = state.config.caps.enumeration
    n = ctx.n_attributes
    if compatible and n0 is None:
        n0 = psi_scale(ctx, cap)
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            row = {"a": ctx.attributes[i], "b": ctx.attributes[j]}
            if compatible:
                s = compatible_similarity(ctx, i, j, n0, cap)
                row.update(psi=s.psi, S=s.value)
                if state.verify:
                    merged = GroupingSpec({"merged": (ctx.attributes[i], ctx.attributes[j])})
                    delta = (len(oracle.naive_concepts(generalize_attributes(ctx, merged)))
                             - len(oracle.naive_concepts(ctx)))
                    row["oracle"] = _check(delta == s.psi)
            else:
                row[measure] = similarity(ctx, i, j, measure, convention)
            rows.append(row)
    state.emit(rows)


# -- scaling ------------------------------------------------------------------------------


@cli.command()
@click.pass_obj
def scale(state: State):
    """Nominally scale a many-valued CSV into a CXT context."""
    if state.dataset or state.input is None or state.input.suffix.lower() != ".csv":
        raise ValidationError("scale needs --input FILE.csv")
    data = write_cxt(state.context())
    if state.output is None:
        click.echo(data.decode("utf-8"), nl=False)
    else:
        state.output.write_bytes(data)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="conceptshap", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ResourceLimitError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except ConceptShapError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
