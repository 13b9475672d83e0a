#!/usr/bin/env python3
import json
import logging
import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, List, Optional

import typer
from loguru import logger
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from crossed_kuperberg import builtins, paths
from crossed_kuperberg.diagram import HeegaardDiagram, validate
from crossed_kuperberg.errors import CrossedKuperbergError, InvalidInput, Report, UnknownCircle
from crossed_kuperberg.hopfxc import HopfChiCoalgebra, check_axioms, compute_integrals, derived_properties
from crossed_kuperberg.invariant import InvariantEngine, kuperberg as kuperberg_invariant
from crossed_kuperberg.labeling import ChiLabeling, check_labeling, enumerate_labelings, orbit_classes, trivial_labeling
from crossed_kuperberg.models import (
    CrossedModuleModel,
    DiagramModel,
    HopfModel,
    IntegralsModel,
    LabelingModel,
    MoveScriptModel,
    OrbitModel,
    dump,
)
from crossed_kuperberg.moves import apply_moves
from crossed_kuperberg.scalar import FieldDescriptor
from crossed_kuperberg.xmod import CrossedModule, check_crossed_module, pi1_pi2

app = typer.Typer(help="Invariants of flat 2-bundles over 3-manifolds from Heegaard diagrams.")
console = Console(stderr=True)

state: dict[str, Any] = {"debug": False, "settings": paths.Settings()}

EXIT_REPORT = 1
EXIT_INPUT = 2


class InterceptHandler(logging.Handler):
    def emit(self, record):
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno
        logger.log(level, record.getMessage())


def _configure_logging(debug: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if debug else "WARNING")
    logging.basicConfig(handlers=[InterceptHandler()], level=logging.DEBUG if debug else logging.WARNING, force=True)


@app.callback()
def main(
    debug: bool = typer.Option(False, "--debug", "-d", help="Log pipeline steps to stderr"),
    budget: Optional[int] = typer.Option(None, "--budget", "-b", min=1, help="Cap on the labeling search space"),
    strategy: Optional[str] = typer.Option(None, "--strategy", "-s", help="Contraction strategy: greedy or naive"),
):
    _configure_logging(debug)
    if strategy is not None and strategy not in ("greedy", "naive"):
        console.print(f"[bold red]unknown strategy {strategy!r}[/bold red]")
        raise typer.Exit(code=EXIT_INPUT)
    state["debug"] = debug
    state["settings"] = paths.load_settings(budget=budget, strategy=strategy)
    logger.debug(f"settings: {state['settings']}")


# output and failure


def _emit(data: Any) -> None:
    if isinstance(data, BaseModel):
        typer.echo(dump(data))
    else:
        typer.echo(json.dumps(data, indent=2, sort_keys=True))


def _violation(exc: BaseException) -> dict:
    code = getattr(exc, "property", None) or re.sub(r"(?<!^)(?=[A-Z])", "-", type(exc).__name__).lower()
    return {"code": code, "message": str(exc)}


def _fail(code: int, exc: BaseException) -> None:
    if state["debug"]:
        logger.opt(exception=exc).debug("failure")
    if code == EXIT_REPORT:
        _emit({"format": 1, "violations": [_violation(exc)]})
    console.print(f"[bold red]{type(exc).__name__}:[/bold red] {exc}")
    raise typer.Exit(code=code)


def _report(report: Report, what: str) -> None:
    """Print a violation report; exit 1 if it is not empty."""
    _emit({"format": 1, "violations": report.as_list()})
    if not report:
        return
    console.print(f"[bold red]{what}: {len(report)} violation(s)[/bold red]")
    for code, messages in report.grouped().items():
        for m in messages:
            console.print(f"  [yellow]{code}[/yellow] {m}")
    raise typer.Exit(code=EXIT_REPORT)


@contextmanager
def _handled():
    """Map library exceptions to exit codes."""
    try:
        yield
    except (ValidationError, json.JSONDecodeError, OSError, UnknownCircle) as exc:
        _fail(EXIT_INPUT, exc)
    except CrossedKuperbergError as exc:
        _fail(EXIT_INPUT if isinstance(exc, ValueError) else EXIT_REPORT, exc)


# loading


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def _load(source: str, model: type[BaseModel], inline: bool = False) -> BaseModel:
    try:
        text = source if inline and source.lstrip().startswith("{") else _read_text(source)
        return model.model_validate_json(text)
    except (ValidationError, OSError) as exc:
        _fail(EXIT_INPUT, exc)


def _core(build, *args):
    """Convert a parsed model; anything raised here is an input error."""
    try:
        return build(*args)
    except (CrossedKuperbergError, ValueError, KeyError) as exc:
        _fail(EXIT_INPUT, exc)


def _diagram(source: str) -> HeegaardDiagram:
    return _core(_load(source, DiagramModel).to_core)


def _xmod(source: Optional[str], hopf: Optional[HopfModel] = None) -> CrossedModule:
    if source is not None:
        return _core(_load(source, CrossedModuleModel).to_core)
    if hopf is not None and hopf.xmod is not None:
        return _core(hopf.xmod.to_core)
    _fail(EXIT_INPUT, InvalidInput("a crossed module is required: pass --xmod or embed it in the Hopf data"))


def _hopf(source: str, xmod: Optional[str]) -> HopfChiCoalgebra:
    model = _load(source, HopfModel)
    cm = _xmod(xmod, model)
    return _core(model.to_core, cm)


def _labeling(source: Optional[str], D: HeegaardDiagram) -> ChiLabeling:
    if source is None:
        return trivial_labeling(D)
    return _load(source, LabelingModel, inline=True).to_core()


def _engine(A: HopfChiCoalgebra) -> InvariantEngine:
    return InvariantEngine(A, strategy=state["settings"].strategy)


# verbs


@app.command("validate")
def validate_diagram(
    diagram: str = typer.Argument(..., help="Diagram JSON file, or - for stdin"),
    xmod: Optional[str] = typer.Option(None, help="Crossed module, to check --labeling against"),
    labeling: Optional[str] = typer.Option(None, help="Labeling JSON (inline or file)"),
):
    """Check a colored Heegaard diagram, and optionally a labeling of it."""
    D = _diagram(diagram)
    report = validate(D)
    if labeling is not None and not report:
        cm = _xmod(xmod)
        report.extend(check_labeling(D, cm, _labeling(labeling, D)))
    _report(report, "diagram")


@app.command("check-xmod")
def check_xmod(
    xmod: str = typer.Argument(..., help="Crossed module JSON file, or - for stdin"),
    homotopy: bool = typer.Option(False, help="Also print the orders of pi1 and pi2"),
):
    """Check the crossed module axioms."""
    cm = _core(_load(xmod, CrossedModuleModel).to_core)
    report = check_crossed_module(cm)
    if homotopy and not report:
        with _handled():
            groups = pi1_pi2(cm)
        console.print(f"pi1 has order {groups.pi1.order}, pi2 has order {groups.pi2_order}")
    _report(report, "crossed module")


@app.command("check-hopf")
def check_hopf(
    hopf: str = typer.Argument(..., help="Hopf chi-coalgebra JSON file, or - for stdin"),
    xmod: Optional[str] = typer.Option(None, help="Crossed module, if not embedded"),
    derived: bool = typer.Option(False, help="Also check consequences of the axioms"),
):
    """Check the Hopf chi-coalgebra axioms."""
    A = _hopf(hopf, xmod)
    with _handled():
        report = check_axioms(A)
        if derived and not report:
            report.extend(derived_properties(A))
    _report(report, "Hopf chi-coalgebra")


@app.command()
def integrals(
    hopf: str = typer.Argument(..., help="Hopf chi-coalgebra JSON file, or - for stdin"),
    xmod: Optional[str] = typer.Option(None, help="Crossed module, if not embedded"),
):
    """Print the normalized integral and chi-integral."""
    A = _hopf(hopf, xmod)
    with _handled():
        _emit(IntegralsModel.from_core(A, compute_integrals(A)))


@app.command()
def labelings(
    diagram: str = typer.Option(..., help="Diagram JSON file"),
    xmod: Optional[str] = typer.Option(None, help="Crossed module JSON file"),
    hopf: Optional[str] = typer.Option(None, help="Hopf chi-coalgebra, needed for --invariants"),
    orbits: bool = typer.Option(False, help="Group labelings into gauge classes"),
    invariants: bool = typer.Option(False, help="Evaluate the invariant on each class"),
    table: bool = typer.Option(False, help="Print a table of classes to stderr"),
):
    """Enumerate the labelings of a diagram, optionally up to gauge."""
    D = _diagram(diagram)
    A = None
    if hopf is not None:
        A = _hopf(hopf, xmod)
        cm = A.cm
    else:
        if invariants:
            _fail(EXIT_INPUT, InvalidInput("--invariants needs --hopf"))
        cm = _xmod(xmod)
    with _handled():
        labs = enumerate_labelings(D, cm, budget=state["settings"].budget)
        if not (orbits or invariants):
            _emit({"format": 1, "count": len(labs), "labelings": [lab.as_dict() for lab in labs]})
            return
        classes = orbit_classes(labs, D, cm)
        engine = _engine(A) if invariants else None
        values = [str(engine.invariant(D, c.representative)) if engine else None for c in classes]
    if table:
        grid = Table(title=f"{len(classes)} classes of {len(labs)} labelings")
        grid.add_column("#", justify="right")
        grid.add_column("size", justify="right")
        grid.add_column("alpha")
        grid.add_column("beta")
        if invariants:
            grid.add_column("K", justify="right")
        for i, (c, v) in enumerate(zip(classes, values)):
            rep = c.representative
            row = [str(i), str(c.size), str(dict(rep.alpha)), str(dict(rep.beta))]
            grid.add_row(*(row + [v] if invariants else row))
        console.print(grid)
    _emit({
        "format": 1,
        "count": len(labs),
        "classes": [OrbitModel.from_core(c, v).model_dump(mode="json", exclude_none=True) for c, v in zip(classes, values)],
    })


@app.command()
def invariant(
    diagram: str = typer.Option(..., help="Diagram JSON file"),
    hopf: str = typer.Option(..., help="Hopf chi-coalgebra JSON file"),
    xmod: Optional[str] = typer.Option(None, help="Crossed module, if not embedded in --hopf"),
    labeling: Optional[str] = typer.Option(None, help="Labeling JSON (inline or file); default is the trivial one"),
    all_: bool = typer.Option(False, "--all", help="Evaluate every labeling"),
):
    """Evaluate K_A on a labeled diagram."""
    D = _diagram(diagram)
    A = _hopf(hopf, xmod)
    with _handled():
        engine = _engine(A)
        if all_:
            labs = enumerate_labelings(D, A.cm, budget=state["settings"].budget)
            _emit({"format": 1, "results": [r.as_dict() for r in engine.many(D, labs)]})
            return
        lab = _labeling(labeling, D)
        report = check_labeling(D, A.cm, lab)
        if report:
            _report(report, "labeling")
        _emit(engine.evaluate(D, lab).as_dict())


@app.command()
def kuperberg(
    diagram: str = typer.Option(..., help="Diagram JSON file"),
    hopf: str = typer.Option(..., help="Hopf algebra over the trivial crossed module"),
):
    """Kuperberg's invariant: the trivially graded case with the constant labeling."""
    D = _diagram(diagram)
    A = _hopf(hopf, None)
    with _handled():
        value = kuperberg_invariant(D, A, strategy=state["settings"].strategy)
    _emit({"value": str(value), "field": value.field.to_json()})


@app.command()
def moves(
    diagram: str = typer.Option(..., help="Diagram JSON file"),
    script: str = typer.Option(..., help="Move script JSON file, or - for stdin"),
    xmod: Optional[str] = typer.Option(None, help="Crossed module JSON file"),
    hopf: Optional[str] = typer.Option(None, help="Hopf data; adds before/after invariant values"),
    labeling: Optional[str] = typer.Option(None, help="Labeling JSON (inline or file)"),
):
    """Apply a script of colored Heegaard moves."""
    D = _diagram(diagram)
    A = _hopf(hopf, xmod) if hopf is not None else None
    cm = A.cm if A is not None else _xmod(xmod)
    try:
        data = json.loads(_read_text(script))
        if isinstance(data, list):
            data = {"moves": data}
        plan = MoveScriptModel.model_validate(data)
    except (ValidationError, json.JSONDecodeError, OSError) as exc:
        _fail(EXIT_INPUT, exc)
    lab = _labeling(labeling, D)
    report = check_labeling(D, cm, lab)
    if report:
        _report(report, "labeling")
    with _handled():
        D2, lab2 = apply_moves(D, lab, plan.moves, cm)
        out: dict[str, Any] = {
            "format": 1,
            "diagram": DiagramModel.from_core(D2).model_dump(mode="json"),
            "labeling": LabelingModel.from_core(lab2).model_dump(mode="json"),
        }
        if A is not None:
            engine = _engine(A)
            out["before"] = str(engine.invariant(D, lab))
            out["after"] = str(engine.invariant(D2, lab2))
    _emit(out)


def _field(text: str) -> FieldDescriptor:
    if text.upper() == "Q":
        return FieldDescriptor.rationals()
    try:
        return FieldDescriptor.prime(int(text.removeprefix("F").removeprefix("p")))
    except ValueError as exc:
        _fail(EXIT_INPUT, exc)


@app.command()
def builtin(
    name: str = typer.Argument(..., help=f"One of: {', '.join(builtins.REGISTRY)}"),
    args: Optional[List[int]] = typer.Argument(None, help="Integer parameters, e.g. P Q for lens"),
    field: str = typer.Option("Q", help="Q or a prime p"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout"),
):
    """Print a builtin diagram, crossed module or Hopf chi-coalgebra as JSON."""
    f = _field(field)
    model = _core(builtins.build, name, args or [], f)
    if output is not None:
        paths.atomic_write(output, dump(model) + "\n")
        console.print(f"wrote {name} to {output}")
        return
    _emit(model)


@app.command()
def config(save: bool = typer.Option(False, help="Persist the resolved settings")):
    """Show the resolved settings and where they are stored."""
    settings: paths.Settings = state["settings"]
    if save:
        paths.save_settings(settings)
    _emit({"settings": settings.model_dump(), "file": str(paths.SETTINGS_FILE)})


if __name__ == "__main__":
    app()
