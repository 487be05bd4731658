"""
Verification Runner
Every structural claim of the engine as a named check, run per folding type and
collected into a versioned VerifyReport. Failures are recorded with a witness,
never raised.
"""
from __future__ import annotations

import itertools
import logging
import math
import time
from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from action import ActionError, act, gamma_sets, generation_pair, verify_gamma
from algnum import chebyshev_u, cyc_context, matrix_to_json
from armodel import (ProjectiveError, apply_matrix, ar_model, long_roots, rotation, short_roots,
                     squared_length)
from chebrings import (FoldingType, chebyshev_ring, defining_relations, is_semiring_member,
                       regular_rep, rho_eval)
from config import Config
from models import CheckResult, RunConfig, VerifyReport
from quiver import build_folding, doubled_folding, verify_unfolding
from tilting import (complements, covers_columns, enumerate_tilting, exchange_period, hat_expansion,
                     is_adjacent_pair, is_cluster_tilting, is_rplus_tilting)
from tropical import (gvector_table, random_words, seed_at, tesseract_check, verify_blocks,
                      verify_cvectors)

logger = logging.getLogger(__name__)

MAX_FAILURES = 20

# generator sets listed per family
GAMMA_COUNTS = {'A': 4, 'D4': 3, 'D': 2, 'E6': 4, 'E7': 1, 'E8': 1}


def appendix_gvectors() -> List[Tuple]:
    """The ten folded g-vectors of the A7 and D5 foldings onto I2(8)"""
    ctx = cyc_context(4)
    one = ctx.one()
    r2 = ctx.theta() * ctx.theta() - 2
    zero = ctx.zero()
    return [
        (one, zero), (zero, one), (-one, 2 + r2), (-one, 1 + r2), (-1 - r2, 2 + 2 * r2),
        (-r2, 1 + r2), (-1 - r2, 2 + r2), (-one, one), (-one, zero), (zero, -one),
    ]


def appendix_cg() -> Dict[str, list]:
    """C and G of I2(8) after mutating the block [0]"""
    ctx = cyc_context(4)
    t2 = ctx.theta() * ctx.theta()
    return {
        'C': [[-ctx.one(), t2], [ctx.zero(), ctx.one()]],
        'G': [[-ctx.one(), ctx.zero()], [t2, ctx.one()]],
    }


class _Collector:
    """Failure bookkeeping for one check"""

    def __init__(self):
        self.checked = 0
        self.failures: List[str] = []
        self.total = 0
        self.witness: Optional[dict] = None

    def count(self, k: int = 1):
        self.checked += k

    def fail(self, message: str, **witness):
        self.total += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)
        if self.witness is None and witness:
            self.witness = witness

    def result(self, name: str, ftype: Optional[FoldingType], **detail) -> CheckResult:
        if self.total > len(self.failures):
            detail['failures_total'] = self.total
        return CheckResult(name=name, type=ftype.name if ftype else None, passed=not self.total,
                           checked=self.checked, failures=self.failures, witness=self.witness,
                           detail=detail)


# -------------------------
# Arithmetic and rings
# -------------------------
def check_field(ftype: FoldingType, run: RunConfig) -> CheckResult:
    n = ftype.n
    ctx = cyc_context(n)
    theta = ctx.theta()
    out = _Collector()

    value = ctx.zero()
    for c in reversed(ctx.minpoly):
        value = value * theta + c
    out.count()
    if not value.is_zero():
        out.fail("θ is not a root of its minimal polynomial", minpoly=list(ctx.minpoly))

    for i in range(2 * n - 1):
        out.count()
        if chebyshev_u(ctx, i) != chebyshev_u(ctx, 2 * n - 2 - i):
            out.fail(f"U_{i} != U_{2 * n - 2 - i}")
    out.count()
    if not chebyshev_u(ctx, 2 * n - 1).is_zero():
        out.fail(f"U_{2 * n - 1} does not vanish")

    out.count(3)
    if theta.sign() != 1:
        out.fail("θ is not positive")
    if theta * theta.inverse() != 1:
        out.fail("θ · θ^-1 != 1")
    if not math.isclose(float(theta), 2 * math.cos(math.pi / (2 * n)), rel_tol=1e-12):
        out.fail(f"float(θ) = {float(theta)!r} is off the real embedding")
    return out.result('field', ftype, degree=ctx.degree, minpoly=list(ctx.minpoly))


def check_ring(ftype: FoldingType, run: RunConfig) -> CheckResult:
    """Identity, commutativity, associativity, ρ and the regular representation, relations, positivity"""
    ring = chebyshev_ring(ftype)
    basis = ring.basis()
    one = ring.one()
    out = _Collector()

    for a in basis:
        out.count()
        if one * a != a:
            out.fail(f"1 · {a} != {a}")

    for a, b in itertools.product(basis, repeat=2):
        out.count()
        ab = a * b
        if ab != b * a:
            out.fail(f"{a} · {b} is not commutative", a=str(a), b=str(b))
        if rho_eval(ab) != rho_eval(a) * rho_eval(b):
            out.fail(f"ρ is not multiplicative on {a}, {b}", a=str(a), b=str(b))
        if rho_eval(a + b) != rho_eval(a) + rho_eval(b):
            out.fail(f"ρ is not additive on {a}, {b}", a=str(a), b=str(b))
        if not np.array_equal(regular_rep(ab), regular_rep(a) @ regular_rep(b)):
            out.fail(f"regular representation is not multiplicative on {a}, {b}", a=str(a), b=str(b))

    for a, b, c in itertools.product(basis, repeat=3):
        out.count()
        if (a * b) * c != a * (b * c):
            out.fail(f"({a} · {b}) · {c} != {a} · ({b} · {c})", a=str(a), b=str(b), c=str(c))

    for text, rel in defining_relations(ring).items():
        out.count()
        if not rel.is_zero():
            out.fail(f"relation {text} evaluates to {rel}", relation=text)

    # the E7 hat-semiring is not closed; its small semiring is
    if ftype.family == 'E' and ftype.rank == 7:
        for a, b in itertools.product(ring.small_basis, repeat=2):
            out.count()
            if not ring.in_small_semiring(a * b):
                out.fail(f"{a} · {b} leaves the small semiring")
    else:
        for a, b in itertools.product(basis, repeat=2):
            out.count()
            if not is_semiring_member(a * b):
                out.fail(f"{a} · {b} has a negative coordinate")
    return out.result('ring', ftype, rank=len(basis))


# -------------------------
# Projection onto the root plane
# -------------------------
def check_projection(ftype: FoldingType, run: RunConfig) -> CheckResult:
    """Projections are weighted roots, rotate under τ and have length w(i); weight-1 rows hit each root once"""
    model = ar_model(ftype)
    folding = model.folding
    n = model.n
    R = rotation(n)
    out = _Collector()
    coverage = {}

    for layer, reach in (('module', n), ('derived', 2 * n)):
        rows: Dict[str, Counter] = {}
        for x in model.enumerate_indecs(layer, shifts=(0, 1)):
            out.count()
            name = model.name(x)
            alpha, eps = model.root_of(x)
            p = model.dimproj(x)
            if p != (eps * alpha[0], eps * alpha[1]):
                out.fail(f"{layer} {name}: projection is not ε·α", object=name, layer=layer)
            w = folding.weight(x.vertex)
            if squared_length(folding, p) != w * w:
                out.fail(f"{layer} {name}: length is not w({x.vertex})", object=name, layer=layer)
            if layer == 'derived' or not model.is_projective(x):
                if model.dimproj(model.tau(x)) != apply_matrix(R, p):
                    out.fail(f"{layer} {name}: τ does not act by the rotation", object=name, layer=layer)
            if model.row_weight(x.vertex) == 1:
                rows.setdefault(x.vertex, Counter())[alpha] += 1
        for v, hits in rows.items():
            out.count()
            roots = short_roots(n) if model.parity[v] == 0 else long_roots(n)
            if hits != Counter(roots[:reach]):
                out.fail(f"weight-1 row {v} of the {layer} layer is not a bijection onto its roots",
                         object=v, layer=layer)
        out.count()
        if {model.parity[v] for v in rows} != {0, 1}:
            out.fail(f"the {layer} layer lacks a weight-1 row of some parity", layer=layer)
        coverage[layer] = sorted(rows)

    out.count()
    order = model.coxeter_order()
    if order != 2 * n:
        out.fail(f"Coxeter order {order}, expected {2 * n}")
    return out.result('projection', ftype, coverage=coverage, coxeter_order=order,
                      objects=len(model.module_indecs()))


def check_unfolding(ftype: FoldingType, run: RunConfig) -> CheckResult:
    out = _Collector()
    for folding in (build_folding(ftype), doubled_folding(ftype)):
        report = verify_unfolding(folding, run.depth)
        out.count(report.checked)
        for word, reason in report.failures:
            out.fail(f"{report.folding} {list(word)}: {reason}", word=list(word), folding=report.folding)
    return out.result('unfolding', ftype, depth=run.depth)


def check_hom(ftype: FoldingType, run: RunConfig) -> CheckResult:
    """Euler-form Hom and Ext against mesh knitting, all ordered pairs"""
    model = ar_model(ftype)
    out = _Collector()
    objects = model.module_indecs()
    for x, y in itertools.product(objects, repeat=2):
        out.count()
        if model.hom_dim(x, y) != model.hom_oracle(x, y):
            out.fail(f"dim Hom({model.name(x)}, {model.name(y)})", x=model.name(x), y=model.name(y))
        if model.ext1_dim(x, y) != model.ext_oracle(x, y):
            out.fail(f"dim Ext1({model.name(x)}, {model.name(y)})", x=model.name(x), y=model.name(y))
    return out.result('hom', ftype, objects=len(objects))


# -------------------------
# Semiring action
# -------------------------
def check_action(ftype: FoldingType, run: RunConfig) -> CheckResult:
    """act stays in the module category, composes, commutes with τ and scales projections by ρ"""
    model = ar_model(ftype)
    ring = chebyshev_ring(ftype)
    gens = ring.small_basis
    out = _Collector()

    for x in model.module_indecs():
        name = model.name(x)
        p = model.dimproj(x)
        for r in gens:
            out.count()
            try:
                image = act(model, r, x)
            except ActionError as e:
                out.fail(str(e), object=name, r=str(r))
                continue
            if any(y.m > model.m_max(y.vertex) for y in image):
                out.fail(f"{r} · {name} leaves the module category", object=name, r=str(r))
                continue
            rho = rho_eval(r)
            if model.dimproj(list(image.elements())) != (rho * p[0], rho * p[1]):
                out.fail(f"dimproj({r} · {name}) != ρ({r}) dimproj({name})", object=name, r=str(r))
            if not model.is_projective(x):
                try:
                    shifted = Counter({model.tau(y): c for y, c in image.items()})
                except ProjectiveError:
                    out.fail(f"{r} · {name} meets a projective that τ({name}) does not", object=name, r=str(r))
                    continue
                if act(model, r, model.tau(x)) != shifted:
                    out.fail(f"{r} · τ({name}) != τ({r} · {name})", object=name, r=str(r))
        for r, s in itertools.product(gens, repeat=2):
            out.count()
            try:
                if act(model, r * s, x) != act(model, r, act(model, s, x)):
                    out.fail(f"({r})({s}) · {name} != {r} · ({s} · {name})", object=name, r=str(r), s=str(s))
            except (ActionError, ValueError) as e:
                out.fail(f"({r})({s}) · {name}: {e}", object=name, r=str(r), s=str(s))
    return out.result('action', ftype, generators=[str(g) for g in gens])


def _expected_gamma_count(ftype: FoldingType) -> int:
    if ftype.family == 'A':
        # A3: the rows 1 and 2n-3 coincide
        return GAMMA_COUNTS['A'] if ftype.n > 2 else GAMMA_COUNTS['A'] // 2
    if ftype.family == 'D':
        return GAMMA_COUNTS['D4'] if ftype.is_d4 else GAMMA_COUNTS['D']
    return GAMMA_COUNTS[ftype.name]


def check_gamma(ftype: FoldingType, run: RunConfig) -> CheckResult:
    """The listed generator sets generate, are τ-closed and basic, and biject with the positive roots"""
    model = ar_model(ftype)
    sets = gamma_sets(model)
    out = _Collector()
    out.count()
    expected = _expected_gamma_count(ftype)
    if len(sets) != expected:
        out.fail(f"{len(sets)} generator sets, expected {expected}")

    weight_one = {}
    for name, gamma in sets.items():
        out.count()
        check = verify_gamma(model, name, gamma)
        weight_one[name] = check.weight_one
        if not check.generates:
            out.fail(f"{name} does not generate {', '.join(check.missing[:5])}", gamma=name,
                     missing=check.missing)
        if not check.tau_closed:
            out.fail(f"{name} is not τ-closed", gamma=name)
        if not check.basic:
            out.fail(f"{name} is not basic", gamma=name)
        if not check.root_bijection:
            out.fail(f"{name} does not biject with the positive roots", gamma=name)

    if ftype.name == 'A7':
        out.count()
        ring = chebyshev_ring(ftype)
        M, N = model.find('[0 2/1]'), model.find('[2 4/3]')
        pair = generation_pair(model, M, N)
        if pair is None or pair.r != ring.element('w2') or pair.r_prime != ring.one():
            out.fail(f"generating pair of [2 4/3] from [0 2/1] is {pair}, expected (w2, w0)")
    return out.result('gamma', ftype, sets=sorted(sets), weight_one=weight_one)


# -------------------------
# Tilting
# -------------------------
def check_tilting(ftype: FoldingType, run: RunConfig) -> CheckResult:
    """Rigidity, adjacency and hat-expansion agree; two complements each; the exchange walk closes"""
    model = ar_model(ftype)
    n = model.n
    out = _Collector()
    summary = {}
    for name, gamma in gamma_sets(model, 'cluster').items():
        for a, b in itertools.combinations(gamma, 2):
            out.count()
            T = [a, b]
            rigid = is_rplus_tilting(model, T, gamma)
            adjacent = is_adjacent_pair(model, T)
            expanded = is_cluster_tilting(model, hat_expansion(model, T))
            if not rigid == adjacent == expanded:
                out.fail(f"{name} {{{model.name(a)}, {model.name(b)}}}: rigid={rigid} adjacent={adjacent} "
                         f"hat={expanded}", gamma=name, pair=[model.name(a), model.name(b)])
        for X in gamma:
            out.count()
            found = complements(model, X, gamma)
            if len(found) != 2:
                out.fail(f"{name} {model.name(X)} has {len(found)} complements", gamma=name,
                         object=model.name(X))
        tilts = enumerate_tilting(model, gamma)
        for T in tilts:
            out.count()
            hat = hat_expansion(model, T)
            if len(hat) != len(model.vertices) or not is_cluster_tilting(model, hat):
                out.fail(f"{name}: hat expansion of {sorted(model.name(x) for x in T)} is not cluster-tilting",
                         gamma=name)
            if not covers_columns(model, T):
                out.fail(f"{name}: the maximality element does not fill the columns of "
                         f"{sorted(model.name(x) for x in T)}", gamma=name)
        period = None
        if tilts:
            out.count()
            period = exchange_period(model, list(tilts[0]), gamma)
            if period != 2 * n + 2:
                out.fail(f"{name}: exchange walk closes after {period} steps, expected {2 * n + 2}", gamma=name)
        summary[name] = {"tilting": len(tilts), "period": period}
    return out.result('tilting', ftype, sets=summary)


# -------------------------
# Tropical seeds
# -------------------------
def check_blocks(ftype: FoldingType, run: RunConfig, words: Sequence[Tuple[int, ...]]) -> CheckResult:
    out = _Collector()
    for word in words:
        report = verify_blocks(ftype, word)
        out.count(report.checked)
        for prefix, reason in report.failures:
            out.fail(f"{list(prefix)}: {reason}", word=list(prefix),
                     C=matrix_to_json(seed_at(ftype, 'doubled', tuple(prefix)).C))
    return out.result('blocks', ftype, words=len(words))


def check_cvectors(ftype: FoldingType, run: RunConfig) -> CheckResult:
    out = _Collector()
    report = verify_cvectors(ftype)
    out.count(report.seeds)
    for word, reason in report.failures:
        out.fail(f"{list(word)}: {reason}", word=list(word))
    out.count()
    if report.period != 2 * ftype.n + 2:
        out.fail(f"exchange pattern closes after {report.period} mutations, expected {2 * ftype.n + 2}")
    return out.result('cvectors', ftype, depth=report.depth, period=report.period)


def check_tesseract(ftype: FoldingType, run: RunConfig, words: Sequence[Tuple[int, ...]]) -> CheckResult:
    out = _Collector()
    for word in words:
        report = tesseract_check(ftype, word)
        out.count(report.checked)
        for prefix, edge in report.failures:
            seed = seed_at(ftype, 'standard', tuple(prefix))
            out.fail(f"{list(prefix)}: {edge}", word=list(prefix), C=matrix_to_json(seed.C))
    return out.result('tesseract', ftype, words=len(words))


# -------------------------
# Appendix tables
# -------------------------
def check_golden_cg(ftype: FoldingType, run: RunConfig) -> CheckResult:
    out = _Collector()
    seed = seed_at(ftype, 'standard', (0,))
    expected = appendix_cg()
    out.count(2)
    for key, M in (('C', seed.C), ('G', seed.G)):
        if any(a != b for a, b in zip(np.asarray(M).flat, itertools.chain(*expected[key]))):
            out.fail(f"{key} after [0] differs", word=[0], matrix=matrix_to_json(M))
    return out.result('golden_cg', ftype, C=matrix_to_json(seed.C), G=matrix_to_json(seed.G))


def check_golden_gvectors(ftype: FoldingType, run: RunConfig) -> CheckResult:
    model = ar_model(ftype)
    out = _Collector()
    table = gvector_table(model)
    values = []
    for row in table:
        out.count()
        values.append(row['folded'])
        if not row['agrees']:
            out.fail(f"{row['object']}: semiring and projection routes disagree", object=row['object'])
    expected = appendix_gvectors()
    out.count()
    if Counter(values) != Counter(expected):
        out.fail("folded g-vectors differ from the appendix table",
                 values=[[str(a), str(b)] for a, b in values])
    return out.result('golden_gvectors', ftype,
                      table=[{"object": row['object'], "g": [str(v) for v in row['folded']]} for row in table])


# -------------------------
# Runner
# -------------------------
CheckFn = Callable[..., CheckResult]

TYPE_CHECKS: List[Tuple[str, CheckFn]] = [
    ('field', check_field),
    ('ring', check_ring),
    ('projection', check_projection),
    ('unfolding', check_unfolding),
    ('action', check_action),
    ('gamma', check_gamma),
    ('cvectors', check_cvectors),
]

WORD_CHECKS: List[Tuple[str, CheckFn]] = [
    ('blocks', check_blocks),
    ('tesseract', check_tesseract),
]


def plan(run: RunConfig, cfg=Config) -> List[Tuple[str, FoldingType, Callable[[], CheckResult]]]:
    """The checks of a run, in execution order"""
    types = [FoldingType.parse(t) for t in run.selected_types(cfg)]
    words = random_words(run.words, run.word_length, run.seed)
    tasks = []

    golden_only = run.golden is not None and not run.all_types
    if not golden_only:
        for ftype in types:
            for name, fn in TYPE_CHECKS:
                tasks.append((name, ftype, lambda fn=fn, ftype=ftype: fn(ftype, run)))
            if ftype.name in cfg.ORACLE_TYPES:
                tasks.append(('hom', ftype, lambda ftype=ftype: check_hom(ftype, run)))
            if ftype.name in cfg.TILTING_TYPES:
                tasks.append(('tilting', ftype, lambda ftype=ftype: check_tilting(ftype, run)))
            for name, fn in WORD_CHECKS:
                tasks.append((name, ftype, lambda fn=fn, ftype=ftype: fn(ftype, run, words)))

    if run.golden is not None or run.all_types:
        for ftype in types:
            if ftype.name in ('A7', 'D5'):
                tasks.append(('golden_gvectors', ftype, lambda ftype=ftype: check_golden_gvectors(ftype, run)))
            if ftype.name == 'A7':
                tasks.append(('golden_cg', ftype, lambda ftype=ftype: check_golden_cg(ftype, run)))
    return tasks


def run_verify(run: RunConfig, cfg=Config, progress: bool = False) -> VerifyReport:
    """Run every planned check; the report is ok iff all of them pass"""
    tasks = plan(run, cfg)
    if not tasks:
        raise ValueError("the run selects no checks")
    results = []
    for name, ftype, task in tqdm(tasks, desc='verify', unit='check', disable=not progress):
        start = time.perf_counter()
        try:
            result = task()
        except Exception as e:
            logger.error(f"check {name} on {ftype} raised: {str(e)}")
            result = CheckResult(name=name, type=ftype.name, passed=False,
                                 failures=[f"{type(e).__name__}: {e}"])
        result.seconds = round(time.perf_counter() - start, 3)
        if not result.passed:
            logger.warning("check %s failed on %s: %s", name, ftype, result.failures[:1])
        results.append(result)
    report = VerifyReport(schema_version=cfg.REPORT_SCHEMA_VERSION, config=run, checks=results)
    logger.info("verify: %d checks, %d failed", len(report.checks), len(report.failed()))
    return report
