"""
foldq command line
Inspect foldings, AR models, the semiring action, R+-tilting and tropical
seeds, and run the verification suite.
"""
from __future__ import annotations

import json
import logging
import os
import re
from functools import wraps
from typing import Iterable, List, Optional, Tuple

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from action import ActionError, act, gamma_sets, generator_for, verify_gamma
from algnum import ContextMismatchError
from armodel import LAYERS, Indec, ProjectiveError, ar_model
from chebrings import FoldingType, RingMismatchError, chebyshev_ring
from config import get_config
from models import RunConfig, to_jsonable
from quiver import FoldingError, build_folding
from svg_utils import emit_svg
from tilting import (TiltingError, cluster_gamma, complements, enumerate_tilting, is_rplus_tilting,
                     tilted_orientation)
from tropical import (SEED_LAYERS, SignCoherenceError, gvector_table, random_words, tesseract_check,
                      walk)
from verify import run_verify

logger = logging.getLogger(__name__)

console = Console()

EMIT_CHOICES = click.Choice(['table', 'json'])


# -------------------------
# Helpers
# -------------------------
def handle_errors(f):
    """Report domain errors as click errors with a non-zero exit code"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (ValidationError, FoldingError, ContextMismatchError, RingMismatchError) as e:
            raise click.UsageError(str(e))
        except (KeyError, ValueError, TiltingError) as e:
            raise click.ClickException(e.args[0] if e.args else str(e))
        except (ActionError, ProjectiveError, SignCoherenceError) as e:
            raise click.ClickException(str(e))
        except OSError as e:
            raise click.ClickException(f"I/O error: {e}")
    return decorated_function


def parse_type(text: str) -> FoldingType:
    try:
        return FoldingType.parse(text)
    except ValueError as e:
        raise click.BadParameter(str(e))


def parse_word(text: Optional[str]) -> Tuple[int, ...]:
    """Words are written "0,1,0", "010" or "[0][1][0]" """
    if not text:
        return ()
    body = re.sub(r'[\s,\[\]]', '', text)
    if not re.fullmatch(r'[01]*', body):
        raise click.BadParameter(f"mutation words use the blocks 0 and 1, got {text!r}")
    return tuple(int(c) for c in body)


def find_object(model, key: str, layer: str) -> Indec:
    """An object by name ("[0 2/1]", "ΣP(0)" as "S0") or by dimension vector "1,1,1,0,..." """
    key = key.strip()
    if re.fullmatch(r'\d+(,\d+)+', key):
        return model.find([int(c) for c in key.split(',')], layer)
    if layer == 'cluster' and key.startswith('S') and key[1:] in model.index:
        return model.shifted_projective(key[1:])
    if layer == 'cluster' and key.startswith('Σ'):
        for v in model.vertices:
            x = model.shifted_projective(v)
            if model.name(x) == key:
                return x
        raise KeyError(f"no shifted projective named {key!r}")
    return model.find(key, layer)


def echo_json(data):
    click.echo(json.dumps(to_jsonable(data), indent=2, ensure_ascii=False))


def show_table(title: str, columns: Iterable[str], rows: Iterable[Iterable]):
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[str(c) for c in row])
    console.print(table)


def fmt_pair(p) -> str:
    return f"({p[0]}, {p[1]})"


def fmt_matrix(M) -> str:
    return "[" + "; ".join(", ".join(str(v) for v in row) for row in np.asarray(M, dtype=object)) + "]"


# -------------------------
# Group
# -------------------------
@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Log cache builds and check progress.')
@click.option('--env', default=None, help='Configuration name (development, testing, production).')
@click.pass_context
def cli(ctx, verbose: bool, env: Optional[str]):
    """Weighted foldings onto I2(2n), Chebyshev semiring actions and tropical seeds."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    cfg = get_config(env)
    # the sign refinement reads its precision from the environment
    os.environ.setdefault('FOLDQ_PRECISION', str(cfg.FOLDQ_PRECISION))
    os.environ.setdefault('FOLDQ_MAX_PRECISION', str(cfg.FOLDQ_MAX_PRECISION))
    ctx.obj = {'config': cfg, 'verbose': verbose}


@cli.command()
@click.argument('ftype')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def info(ftype: str, emit: str):
    """Folding data of FTYPE: weights, anchors, ring basis and Coxeter order."""
    t = parse_type(ftype)
    folding = build_folding(t)
    model = ar_model(t)
    ring = chebyshev_ring(t)
    ctx = folding.ctx
    rows = [
        {"vertex": v, "block": f"[{folding.image[i]}]", "weight": folding.weight(v),
         "row_weight": folding.row_weight(v), "label": str(ring.vertex_element(v))}
        for i, v in enumerate(folding.vertices)
    ]
    data = {
        "type": t.name, "n": t.n, "target": f"I2({2 * t.n})", "degree": ctx.degree,
        "minpoly": list(ctx.minpoly), "mu": list(folding.mu), "basis": list(ring.labels),
        "small_basis": [str(b) for b in ring.small_basis], "coxeter_order": model.coxeter_order(),
        "indecomposables": len(model.module_indecs()), "vertices": rows,
    }
    if emit == 'json':
        echo_json(data)
        return
    console.print(f"[bold]{t.name}[/bold] onto I2({2 * t.n}), θ = 2cos(π/{2 * t.n}), "
                  f"minimal polynomial {list(ctx.minpoly)}")
    console.print(f"μ = {fmt_pair(folding.mu)}, Coxeter order {data['coxeter_order']}, "
                  f"{data['indecomposables']} indecomposables")
    show_table("Vertices", ["vertex", "block", "w", "ε", "label"],
               [(r["vertex"], r["block"], r["weight"], r["row_weight"], r["label"]) for r in rows])


@cli.command()
@click.argument('ftype')
@click.option('--word', '-w', default='', help='Block word such as 0,1,0.')
@click.option('--layer', type=click.Choice(SEED_LAYERS), default='standard')
@click.option('--trace', is_flag=True, help='Show every seed along the word.')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def mutate(ftype: str, word: str, layer: str, trace: bool, emit: str):
    """Exchange, C- and G-matrices after a word of block mutations."""
    seeds = walk(parse_type(ftype), layer, parse_word(word))
    if not trace:
        seeds = seeds[-1:]
    if emit == 'json':
        echo_json([s.to_json() for s in seeds])
        return
    show_table(f"{ftype} {layer}", ["word", "B", "C", "G"],
               [(''.join(f"[{k}]" for k in s.word) or "∅", fmt_matrix(s.B), fmt_matrix(s.C), fmt_matrix(s.G))
                for s in seeds])


# -------------------------
# AR model
# -------------------------
@cli.group()
def ar():
    """Auslander-Reiten model and projections."""


@ar.command('list')
@click.argument('ftype')
@click.option('--layer', type=click.Choice(LAYERS), default='module')
@click.option('--svg', 'svg_path', type=click.Path(dir_okay=False), default=None,
              help='Also write the projected AR quiver as SVG.')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@click.pass_context
@handle_errors
def ar_list(ctx, ftype: str, layer: str, svg_path: Optional[str], emit: str):
    """All indecomposables of a layer with dimension vectors and projections."""
    t = parse_type(ftype)
    model = ar_model(t)
    rows = []
    for x in model.enumerate_indecs(layer):
        alpha, eps = model.root_of(x)
        rows.append({"object": model.name(x), "vertex": x.vertex, "m": x.m, "shift": x.shift,
                     "column": model.column(x), "dim": [int(c) for c in model.class_vector(x)],
                     "dimproj": model.dimproj(x), "root": alpha, "eps": eps})
    if svg_path:
        cfg = ctx.obj['config']
        emit_svg(build_folding(t), layer, svg_path, cfg.SVG_SCALE, cfg.SVG_DIGITS)
        logger.info("wrote %s", svg_path)
    if emit == 'json':
        echo_json(rows)
        return
    show_table(f"{t.name} {layer}", ["object", "column", "dim", "dimproj", "ε"],
               [(r["object"], r["column"], r["dim"], fmt_pair(r["dimproj"]), r["eps"]) for r in rows])


@ar.command('project')
@click.argument('ftype')
@click.argument('objects', nargs=-1, required=True)
@click.option('--layer', type=click.Choice(LAYERS), default='module')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def ar_project(ftype: str, objects: Tuple[str, ...], layer: str, emit: str):
    """dimproj of the direct sum of OBJECTS (names or dimension vectors)."""
    model = ar_model(parse_type(ftype))
    found = [find_object(model, key, layer) for key in objects]
    total = model.dimproj(found)
    data = {"objects": [model.name(x) for x in found], "dimproj": total,
            "parts": [model.dimproj(x) for x in found]}
    if emit == 'json':
        echo_json(data)
        return
    show_table("dimproj", ["object", "dimproj"],
               [(model.name(x), fmt_pair(p)) for x, p in zip(found, data["parts"])] + [("total", fmt_pair(total))])


# -------------------------
# Semiring action
# -------------------------
@cli.command('act')
@click.argument('ftype')
@click.argument('element')
@click.argument('obj')
@click.option('--layer', type=click.Choice(LAYERS), default='module')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def act_command(ftype: str, element: str, obj: str, layer: str, emit: str):
    """ELEMENT · OBJ, e.g. act A7 "w2" "[0 2/1]"."""
    t = parse_type(ftype)
    model = ar_model(t)
    r = chebyshev_ring(t).parse(element)
    x = find_object(model, obj, layer)
    image = act(model, r, x)
    data = {"element": r, "object": model.name(x),
            "result": [{"object": model.name(y), "multiplicity": c} for y, c in sorted(
                image.items(), key=lambda item: model.vertices.index(item[0].vertex))]}
    if emit == 'json':
        echo_json(data)
        return
    show_table(f"{r} · {model.name(x)}", ["object", "multiplicity"],
               [(item["object"], item["multiplicity"]) for item in data["result"]])


@cli.command()
@click.argument('ftype')
@click.option('--gamma', 'gamma_name', default=None, help='Restrict to one generator set.')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def generators(ftype: str, gamma_name: Optional[str], emit: str):
    """Generator sets Γ and the generating pair of every module."""
    model = ar_model(parse_type(ftype))
    sets = gamma_sets(model)
    if gamma_name is not None:
        if gamma_name not in sets:
            raise click.BadParameter(f"unknown generator set {gamma_name!r}; expected one of {sorted(sets)}")
        sets = {gamma_name: sets[gamma_name]}
    data = []
    for name, gamma in sets.items():
        check = verify_gamma(model, name, gamma)
        pairs = []
        for N in model.module_indecs():
            found = generator_for(model, gamma, N)
            pairs.append({"object": model.name(N),
                          "generator": model.name(found[0]) if found else None,
                          "r": str(found[1].r) if found else None,
                          "r'": str(found[1].r_prime) if found else None})
        data.append({"gamma": name, "members": [model.name(x) for x in gamma], "ok": check.ok,
                     "tau_closed": check.tau_closed, "weight_one": check.weight_one, "pairs": pairs})
    if emit == 'json':
        echo_json(data)
        return
    for entry in data:
        console.print(f"[bold]{entry['gamma']}[/bold]: {', '.join(entry['members'])} "
                      f"({'ok' if entry['ok'] else 'FAILED'})")
        show_table(entry['gamma'], ["object", "from", "r", "r'"],
                   [(p["object"], p["generator"], p["r"], p["r'"]) for p in entry["pairs"]])


# -------------------------
# Tilting
# -------------------------
@cli.group()
def tilting():
    """Basic R+-tilting objects in the cluster category."""


def _default_gamma(model, name: Optional[str]) -> Tuple[str, List[Indec]]:
    sets = gamma_sets(model, 'cluster')
    name = name or sorted(sets)[0]
    return name, cluster_gamma(model, name)


@tilting.command('enumerate')
@click.argument('ftype')
@click.option('--gamma', 'gamma_name', default=None)
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def tilting_enumerate(ftype: str, gamma_name: Optional[str], emit: str):
    """All basic R+-tilting objects built from one generator set."""
    model = ar_model(parse_type(ftype))
    name, gamma = _default_gamma(model, gamma_name)
    data = []
    for T in enumerate_tilting(model, gamma):
        T = sorted(T, key=model.column)
        data.append({"summands": [model.name(x) for x in T], "columns": [model.column(x) for x in T],
                     "orientation": tilted_orientation(model, T)})
    if emit == 'json':
        echo_json({"gamma": name, "tilting": data})
        return
    show_table(f"{model.folding.ftype} {name}", ["summands", "columns", "quiver"],
               [(" ⊕ ".join(d["summands"]), d["columns"], d["orientation"]) for d in data])


@tilting.command('complements')
@click.argument('ftype')
@click.argument('obj')
@click.option('--gamma', 'gamma_name', default=None)
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def tilting_complements(ftype: str, obj: str, gamma_name: Optional[str], emit: str):
    """Complements of the almost complete object OBJ."""
    model = ar_model(parse_type(ftype))
    name, gamma = _default_gamma(model, gamma_name)
    X = find_object(model, obj, 'cluster')
    found = complements(model, X, gamma)
    data = {"gamma": name, "object": model.name(X),
            "complements": [model.name(y) for y in found],
            "tilting": [is_rplus_tilting(model, [X, y], gamma) for y in found]}
    if emit == 'json':
        echo_json(data)
        return
    show_table(f"complements of {model.name(X)} in {name}", ["object", "column"],
               [(model.name(y), model.column(y)) for y in found])


# -------------------------
# Tropical
# -------------------------
@cli.group()
def tropical():
    """C-matrices, G-matrices and folded g-vectors."""


@tropical.command('walk')
@click.argument('ftype')
@click.option('--word', '-w', default='')
@click.option('--layer', type=click.Choice(SEED_LAYERS), default='standard')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def tropical_walk(ftype: str, word: str, layer: str, emit: str):
    """Every seed along a word of block mutations."""
    seeds = walk(parse_type(ftype), layer, parse_word(word))
    if emit == 'json':
        echo_json([s.to_json() for s in seeds])
        return
    show_table(f"{ftype} {layer}", ["word", "C", "G"],
               [(''.join(f"[{k}]" for k in s.word) or "∅", fmt_matrix(s.C), fmt_matrix(s.G)) for s in seeds])


@tropical.command('gvectors')
@click.argument('ftype')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@handle_errors
def tropical_gvectors(ftype: str, emit: str):
    """Folded g-vectors of the anchor rows in the cluster category."""
    model = ar_model(parse_type(ftype))
    table = gvector_table(model)
    if emit == 'json':
        echo_json([{"object": row["object"], "g": row["g"], "folded": row["folded"],
                    "agrees": row["agrees"], "presentation": row["presentation"].to_json()} for row in table])
        return
    show_table(f"{model.folding.ftype} folded g-vectors", ["object", "g", "r0 - r0'", "r1 - r1'", "folded"],
               [(row["object"], row["g"],
                 f"{row['presentation'].r0} - ({row['presentation'].r0_prime})",
                 f"{row['presentation'].r1} - ({row['presentation'].r1_prime})",
                 fmt_pair(row["folded"])) for row in table])


@tropical.command('tesseract')
@click.argument('ftype')
@click.option('--word', '-w', default=None, help='Check one word instead of random ones.')
@click.option('--words', type=int, default=None, help='Number of random words.')
@click.option('--word-length', type=int, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--emit', type=EMIT_CHOICES, default='table')
@click.pass_context
@handle_errors
def tropical_tesseract(ctx, ftype: str, word: Optional[str], words: Optional[int], word_length: Optional[int],
                       seed: Optional[int], emit: str):
    """Commutativity of the sixteen-node diagram along words."""
    cfg = ctx.obj['config']
    t = parse_type(ftype)
    if word is not None:
        batch = [parse_word(word)]
    else:
        batch = random_words(words if words is not None else cfg.DEFAULT_WORDS,
                             word_length if word_length is not None else cfg.DEFAULT_WORD_LENGTH,
                             seed if seed is not None else cfg.DEFAULT_SEED)
    reports = [tesseract_check(t, w) for w in batch]
    failed = [r for r in reports if not r.ok]
    if emit == 'json':
        echo_json({"type": t.name, "words": len(reports), "ok": not failed,
                   "failures": [r.to_json() for r in failed]})
    else:
        show_table(f"{t.name} tesseract", ["words", "nodes and edges", "failed words"],
                   [(len(reports), sum(r.checked for r in reports), len(failed))])
    if failed:
        raise click.ClickException(f"{len(failed)} words break the tesseract")


# -------------------------
# Verification
# -------------------------
@cli.command()
@click.option('--all', 'all_types', is_flag=True, help='Every configured folding type.')
@click.option('--type', '-t', 'types', multiple=True, help='Folding type, repeatable.')
@click.option('--depth', type=int, default=None, help='Unfolding word depth.')
@click.option('--seed', type=int, default=None)
@click.option('--words', type=int, default=None, help='Random words per folding.')
@click.option('--word-length', type=int, default=None)
@click.option('--golden', type=click.Choice(['appendix']), default=None,
              help='Only reproduce the appendix tables.')
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None, help='Write the JSON report.')
@click.option('--svg-dir', type=click.Path(file_okay=False), default=None, help='Write one figure per type.')
@click.option('--emit', type=EMIT_CHOICES, default='table')
@click.pass_context
def verify(ctx, all_types: bool, types: Tuple[str, ...], depth: Optional[int], seed: Optional[int],
           words: Optional[int], word_length: Optional[int], golden: Optional[str], output: Optional[str],
           svg_dir: Optional[str], emit: str):
    """Run the verification suite; exit code 0 iff every check passes."""
    cfg = ctx.obj['config']
    try:
        run = RunConfig.from_config(cfg, types=list(types), all_types=all_types, depth=depth, seed=seed,
                                    words=words, word_length=word_length, golden=golden, output=output,
                                    svg_dir=svg_dir, emit=[emit] + (['svg'] if svg_dir else []))
    except (ValidationError, ValueError) as e:
        raise click.UsageError(str(e))

    report = run_verify(run, cfg, progress=ctx.obj['verbose'])
    text = report.model_dump_json(indent=2)
    if output:
        try:
            with open(output, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text + '\n')
        except OSError as e:
            raise click.ClickException(f"cannot write report: {e}")
    if svg_dir:
        os.makedirs(svg_dir, exist_ok=True)
        for name in run.selected_types(cfg):
            path = os.path.join(svg_dir, f"{name}-module.svg")
            emit_svg(build_folding(FoldingType.parse(name)), 'module', path, cfg.SVG_SCALE, cfg.SVG_DIGITS)

    if emit == 'json':
        click.echo(text)
    else:
        show_table("verify", ["check", "type", "checked", "result", "seconds"],
                   [(c.name, c.type or "", c.checked, "ok" if c.passed else "FAILED: " + "; ".join(c.failures[:2]),
                     c.seconds) for c in report.checks])
        for c in report.checks:
            if c.name == 'golden_gvectors':
                show_table(f"{c.type} folded g-vectors", ["object", "g"],
                           [(row["object"], ", ".join(row["g"])) for row in c.detail["table"]])
    ctx.exit(0 if report.ok else 1)


if __name__ == '__main__':
    cli()
