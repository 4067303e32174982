"""Command line: ``torusalg <command> ...``.

Exit codes: 0 success, 1 computation or input error, 2 falsification event.
"""
from __future__ import annotations

import json
import logging
import os
import re
import sys
from dataclasses import dataclass

import click

from . import graded as gr
from .adams import (E2Chart, FalsificationError, algconn, emit_chart, ext, hom0_table, load_chart,
                    row_bound_check, vanishing_violations)
from .cells import (NamedObject, basic_cell, e_bracket, e_universal, natural_cell_object, sphere,
                    thom_twist)
from .lattice import (Representation, canonical_subgroup, component_group, enumerate_subgroups,
                      full_torus, identity_component, trivial_subgroup)
from .ofmod import euler_component

CONFIG_ENV = "TORUSALG_CONFIG"
SCHEMA = 1
log = logging.getLogger("torusalg")


# -- grammar -----------------------------------------------------------------------------

class GrammarError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_INT = re.compile(r"-?\d+")


def _parse_rows(text, rank, pos, what):
    rows = []
    offset = pos
    for chunk in text.split(";"):
        toks = [t for t in re.split(r"[\s,]+", chunk.strip()) if t]
        for t in toks:
            if not _INT.fullmatch(t):
                raise GrammarError(f"bad integer {t!r} in {what}", offset + chunk.find(t))
        if not toks:
            raise GrammarError(f"empty {what} row", offset)
        if len(toks) != rank:
            raise GrammarError(f"{what} row {chunk.strip()!r} needs {rank} entries", offset)
        rows.append([int(t) for t in toks])
        offset += len(chunk) + 1
    return rows


def parse_subgroup(text, rank, pos=0):
    """``ann=<rows>`` with rows separated by ``;``; ``ann=0`` is the torus, ``ann=full`` the trivial group."""
    if not text.startswith("ann="):
        raise GrammarError("expected 'ann='", pos)
    body = text[4:]
    if body.strip() == "full":
        return trivial_subgroup(rank)
    if body.strip() == "0":
        return full_torus(rank)
    return canonical_subgroup(rank, _parse_rows(body, rank, pos + 4, "annihilator"))


def parse_rep(text, rank, pos=0):
    if not text.strip():
        return Representation(())
    return Representation(tuple(tuple(r) for r in _parse_rows(text, rank, pos, "character")))


_SUBGROUP_TAGS = {"sigma": basic_cell, "cell": natural_cell_object, "ebracket": e_bracket,
                  "euniversal": e_universal}


def parse_object(text, rank, pos=0) -> NamedObject:
    tag, sep, rest = text.partition(":")
    if tag == "sphere":
        if sep:
            raise GrammarError("'sphere' takes no argument", pos + len(tag))
        return sphere(rank)
    if tag in _SUBGROUP_TAGS:
        if not sep:
            raise GrammarError(f"'{tag}' needs a subgroup", pos + len(tag))
        return _SUBGROUP_TAGS[tag](parse_subgroup(rest, rank, pos + len(tag) + 1))
    if tag == "twist":
        rep_text, sep2, inner = rest.partition(":")
        if not sep2:
            raise GrammarError("'twist' needs '<rep>:<object>'", pos + len(text))
        rep = parse_rep(rep_text, rank, pos + 6)
        return thom_twist(rep, parse_object(inner, rank, pos + 6 + len(rep_text) + 1))
    raise GrammarError(f"unknown tag {tag!r}", pos)


def parse_window(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", text)
    if not m:
        raise click.BadParameter(f"window must look like a:b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise click.BadParameter("window is empty")
    return (a, b)


# -- config and persistence --------------------------------------------------------------

@dataclass
class Config:
    rank: int = 1
    window: tuple = (-10, 10)
    universe: str | None = None
    outdir: str = "."
    format: str = "ascii"

    def __post_init__(self):
        if not 1 <= int(self.rank) <= 4:
            raise ValueError("rank must be between 1 and 4")
        self.window = tuple(self.window)
        if len(self.window) != 2 or self.window[0] > self.window[1]:
            raise ValueError("window must be nonempty")

    @classmethod
    def load(cls, path=None):
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        with open(path) as fh:
            data = json.load(fh)
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


class SchemaError(ValueError):
    pass


def check_schema(data):
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise SchemaError(f"expected schema {SCHEMA}, got {data.get('schema') if isinstance(data, dict) else data!r}")
    return data


def persist(obj, path):
    data = obj.to_json() if hasattr(obj, "to_json") else obj
    check_schema(data)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def load(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not JSON: {exc}") from None
    check_schema(data)
    if "entries" in data:
        return E2Chart.from_json(data)
    return data


def load_universe(path, rank):
    """Universe file: ``{"schema": 1, "subgroups": [[row, ...], ...]}`` or ``{"schema": 1, "bound": n}``."""
    if path is None:
        return None
    with open(path) as fh:
        data = check_schema(json.load(fh))
    if "bound" in data:
        return enumerate_subgroups(rank, int(data["bound"]))
    out = []
    for rows in data["subgroups"]:
        out.append(full_torus(rank) if not rows else canonical_subgroup(rank, rows))
    return sorted(set(out))


# -- self checks ---------------------------------------------------------------------------

def _suite_lattice():
    from .lattice import contains, is_cotoral, join, meet, subgroups_between, subgroups_of_finite
    res = []
    subs = enumerate_subgroups(2, 2)
    res.append(("meet/join absorb", all(meet(a, join(a, b)) == a for a in subs for b in subs)))
    res.append(("containment order", all(contains(join(a, b), a) for a in subs for b in subs)))
    res.append(("identity component connected", all(identity_component(h).is_connected for h in subs)))
    res.append(("cotoral implies containment", all(contains(b, a) for a in subs for b in subs if is_cotoral(a, b))))
    res.append(("splitting counts", all(len(subgroups_between(h)) == len(subgroups_of_finite(
        component_group(h).invariant_factors)) for h in subs)))
    return res, []


def _suite_acceptance(rank):
    from .adams import vanishing_check
    from .resolve import koszul_resolution
    results, falsified = [], []
    f = trivial_subgroup(rank)
    chart = ext(basic_cell(f), basic_cell(f), (-2, 2 * rank + 4))
    want = [1, 1] if rank == 1 else [1, 2, 1]
    got = [chart.column_total(n) for n in range(len(want))]
    results.append(("exterior endomorphisms of sigma_F", got == want if rank == 1 else got >= want))
    if vanishing_violations(chart):
        falsified.append("vanishing line")
    results.append(("vanishing line", not vanishing_violations(chart)))
    results.append(("row bound", row_bound_check(chart)))
    inj = e_bracket(f).realize()
    from .sheaf import StandardInjective, hom_into_injective
    h = hom_into_injective(inj, StandardInjective(f, 0))
    results.append(("endomorphisms of E<F>", all(h.dim(-2 * i) == (i + 1 if rank == 2 else 1)
                                                   for i in range(11))))
    kz = koszul_resolution(f)
    results.append(("Koszul shape", kz.verify((-6, 2 * rank + 6))))
    try:
        vanishing_check(chart)
    except FalsificationError:
        falsified.append("vanishing line (strict)")
    return results, falsified


SUITES = {"lattice": _suite_lattice,
          "acceptance-r1": lambda: _suite_acceptance(1),
          "acceptance-r2": lambda: _suite_acceptance(2)}


def run_selfcheck(suite):
    """``(report, exit code)``; unknown suites raise ``KeyError``."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; known: {', '.join(sorted(SUITES))}")
    results, falsified = SUITES[suite]()
    report = {"schema": SCHEMA, "suite": suite,
              "results": [{"check": name, "pass": bool(ok)} for name, ok in results],
              "falsified": falsified}
    code = 2 if falsified else (0 if all(ok for _, ok in results) else 1)
    return report, code


# -- commands ------------------------------------------------------------------------------

def _fail(msg, code=1):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help=f"JSON config file (default from ${CONFIG_ENV}).")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, config_path, verbose):
    """Algebraic models for rational torus-equivariant spectra."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr)
    try:
        ctx.obj = Config.load(config_path)
    except (OSError, ValueError, TypeError) as exc:
        _fail(f"bad config: {exc}")


def _rank(ctx, rank):
    return rank if rank is not None else ctx.obj.rank


def _window(ctx, window):
    return parse_window(window) if window else ctx.obj.window


def _obj(text, rank):
    try:
        return parse_object(text, rank)
    except GrammarError as exc:
        _fail(str(exc))


def _sub(text, rank):
    try:
        return parse_subgroup(text, rank)
    except GrammarError as exc:
        _fail(str(exc))


def _echo_json(data):
    click.echo(json.dumps(data, indent=2, sort_keys=True))


@main.command()
@click.option("--rank", type=int)
@click.option("--ann", "text", required=True, help='annihilator rows, e.g. "2 0; 0 3" (or 0, full)')
@click.pass_context
def subgroup(ctx, rank, text):
    """Canonical form, dimension and component group of a subgroup."""
    r = _rank(ctx, rank)
    h = _sub(text if text.startswith("ann=") else "ann=" + text, r)
    _echo_json({"schema": SCHEMA, "ann": [list(v) for v in h.ann], "dim": h.dim, "codim": h.codim,
                "identity_component": [list(v) for v in identity_component(h).ann],
                "component_group": list(component_group(h).invariant_factors),
                "connected": h.is_connected})


@main.command()
@click.option("--rank", type=int)
@click.option("--rep", required=True, help="characters separated by ';'")
@click.option("--at", "at", required=True, help="subgroup ann=...")
@click.pass_context
def euler(ctx, rank, rep, at):
    """Euler class e(V) at a subgroup."""
    r = _rank(ctx, rank)
    try:
        v = parse_rep(rep, r)
    except GrammarError as exc:
        _fail(str(exc))
    h = _sub(at, r)
    e = euler_component(v, h)
    _echo_json({"schema": SCHEMA, "subgroup": [list(x) for x in h.ann], "variables": h.codim,
                "euler": gr.elem_to_json(e)})


@main.group()
def object():
    """Inspect realized objects."""


@object.command("show")
@click.option("--rank", type=int)
@click.option("--object", "text", required=True)
@click.option("--key", required=True, help="subgroup ann=...")
@click.option("--window")
@click.pass_context
def object_show(ctx, rank, text, key, window):
    r = _rank(ctx, rank)
    obj = _obj(text, r).realize()
    k = _sub(key, r)
    w = _window(ctx, window)
    try:
        p = obj.component(k)
    except Exception as exc:  # unsupported queries are reported, not raised
        _fail(str(exc))
    dims = {} if p is None else {d: p.dim(d) for d in range(w[0], w[1] + 1) if p.dim(d)}
    _echo_json({"schema": SCHEMA, "object": text, "key": [list(x) for x in k.ann], "present": p is not None,
                "dims": {str(d): v for d, v in sorted(dims.items())}})


@object.command("check")
@click.option("--rank", type=int)
@click.option("--object", "text", required=True)
@click.option("--window")
@click.option("--universe", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def object_check(ctx, rank, text, window, universe):
    """Quasi-coherence and extendedness on a window."""
    from .sheaf import check_qce
    r = _rank(ctx, rank)
    obj = _obj(text, r).realize()
    rep = check_qce(obj, _window(ctx, window), load_universe(universe or ctx.obj.universe, r))
    _echo_json({"schema": SCHEMA, "object": text, "passed": rep.passed, "entries": len(rep.entries),
                "failures": [str(f) for f in rep.failures()]})
    sys.exit(0 if rep.passed else 1)


@main.command()
@click.option("--rank", type=int)
@click.option("--object", "text", required=True)
@click.option("--window")
@click.option("--universe", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
def resolve(ctx, rank, text, window, universe, out):
    """Emit a resolution transcript."""
    from .resolve import ResolutionError, resolution_of
    r = _rank(ctx, rank)
    try:
        res = resolution_of(_obj(text, r), _window(ctx, window))
        data = res.to_json(load_universe(universe or ctx.obj.universe, r))
    except ResolutionError as exc:
        _fail(str(exc), 2)
    except ValueError as exc:
        _fail(str(exc))
    if out:
        persist(data, out)
    else:
        _echo_json(data)


@main.command("ext")
@click.option("--rank", type=int)
@click.option("--source", required=True)
@click.option("--target", required=True)
@click.option("--window")
@click.option("--universe", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "ascii", "svg"]))
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
def ext_cmd(ctx, rank, source, target, window, universe, fmt, out):
    """E2 page Ext^{s,t}(source, target)."""
    r = _rank(ctx, rank)
    src, tgt = _obj(source, r), _obj(target, r)
    click.echo(f"computing Ext({source}, {target})", err=True)
    try:
        chart = ext(src, tgt, _window(ctx, window), load_universe(universe or ctx.obj.universe, r))
    except ValueError as exc:
        _fail(str(exc))
    click.echo(emit_chart(chart, fmt or ctx.obj.format, out), nl=False)
    if not row_bound_check(chart):
        _fail("entries above row 2r", 2)
    if src == tgt and src.tag == "basic_cell" and vanishing_violations(chart):
        _fail(f"vanishing line violated at {vanishing_violations(chart)}", 2)


@main.command()
@click.option("--rank", type=int)
@click.option("--object", "text", required=True)
@click.option("--at", "at", required=True)
@click.pass_context
def conn(ctx, rank, text, at):
    """Algebraic connectivity at a subgroup."""
    r = _rank(ctx, rank)
    obj, h = _obj(text, r), _sub(at, r)
    try:
        rec = algconn(obj, h)
    except ValueError as exc:
        _fail(str(exc))
    v = rec.values[h]
    _echo_json({"schema": SCHEMA, "object": text, "at": [list(x) for x in h.ann],
                "algconn": "inf" if v == float("inf") else v, "slope_one": rec.slope_one,
                "bound_only": rec.bounds[h]})


@main.command()
@click.option("--rank", type=int)
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cross-check", is_flag=True)
@click.pass_context
def homtable(ctx, rank, pairs_path, cross_check):
    """Degree-zero maps between basic cells; pairs file is {"schema": 1, "pairs": [[annK, annL], ...]}."""
    r = _rank(ctx, rank)
    with open(pairs_path) as fh:
        data = check_schema(json.load(fh))
    mk = lambda rows: full_torus(r) if not rows else canonical_subgroup(r, rows)
    pairs = [(mk(a), mk(b)) for a, b in data["pairs"]]
    table = hom0_table(pairs, cross_check=cross_check)
    rows = []
    for (k, l), v in table.items():
        row = {"K": [list(x) for x in k.ann], "L": [list(x) for x in l.ann]}
        if cross_check:
            row["hom0"], row["ext00"] = v
        else:
            row["hom0"] = v
        rows.append(row)
    _echo_json({"schema": SCHEMA, "rows": rows})


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "ascii", "svg"]), default="ascii")
def chart(path, fmt):
    """Re-render a stored chart."""
    try:
        c = load_chart(path)
    except ValueError as exc:
        _fail(str(exc))
    click.echo(emit_chart(c, fmt), nl=False)


@main.command()
@click.option("--suite", required=True)
def selfcheck(suite):
    """Run an invariant suite."""
    try:
        report, code = run_selfcheck(suite)
    except KeyError as exc:
        _fail(exc.args[0])
    _echo_json(report)
    sys.exit(code)


if __name__ == "__main__":
    main()
