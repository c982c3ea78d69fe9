"""Finite verification of the commutator-law results over concrete groups.

Each ``check_*`` function returns a :class:`VerificationReport` whose verdict is
one of ``pass``, ``fail``, ``vacuous`` (hypothesis not met by the group) or
``skipped`` (work budget exhausted, or the check does not apply). Fail reports
carry a witness that :func:`recheck` re-evaluates from scratch.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import groups as gr
from .groups import BudgetExceeded, FiniteGroup
from .magnus import gamma_weight
from .words import build_W, evaluate, evaluate_indices, format_expr, formal_weight, parse_expr, variables

log = logging.getLogger(__name__)

VERDICTS = ("pass", "fail", "vacuous", "skipped")

# [x1, x2, x1, x2]: the test word applied to (g, x) in the Heineken check
HEINEKEN_WORD = build_W(1)
POWER_FITTING_WORDS = {2: parse_expr("[(p x1 4),x2,(p x1 4),x2]"), 3: parse_expr("[(p x1 3),x2,(p x1 3),x2]")}
POWER_FITTING_EXPONENT = {2: 8, 3: 9}
POWER_FITTING_CLASS = 5


# -- arithmetic ---------------------------------------------------------------------

def bounds(d: int) -> tuple[int, int]:
    """Class bounds ``(2^d + 2^(d-1) - 3, 2^d + 2^(d-1) + 2^(d-2) - 3)``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return 2**d + 2**(d - 1) - 3, 2**d + 2**(d - 1) + 2**(d - 2) - 3


def _log_ceiling(c: int, p: int) -> int:
    """Least r >= 0 with c <= p^r (so p^(r-1) < c <= p^r once c >= 2)."""
    r, q = 0, 1
    while q < c:
        q *= p
        r += 1
    return r


def compute_r_engel(c: int, p: int) -> int:
    """r with ``p^(r-1) < c <= p^r``."""
    if c < 1:
        raise ValueError("c must be >= 1")
    return _log_ceiling(c, p)


def compute_r_variety(c: int, p: int) -> int:
    """r with ``p^(r-1) < c - 1 <= p^r``."""
    if c < 2:
        raise ValueError("c must be >= 2")
    return _log_ceiling(c - 1, p)


def variety_exponent(c: int, p: int) -> int:
    """Exponent of the power subgroup shown nilpotent: ``p^r`` for odd p, ``2^(r+1)`` for p = 2."""
    r = compute_r_variety(c, p)
    return 2 ** (r + 1) if p == 2 else p**r


# -- reports ------------------------------------------------------------------------

@dataclass
class VerificationReport:
    check: str
    group: str
    params: dict
    verdict: str
    reason: Optional[str] = None
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)
    examined: int = 0
    wall_time: float = 0.0
    corpus_index: int = 0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")

    FIELD_ORDER = ("corpus_index", "group", "check", "params", "verdict", "reason",
                   "examined", "witness", "details")

    def to_record(self, timings: bool = False) -> dict:
        rec = {k: getattr(self, k) for k in self.FIELD_ORDER}
        if timings:
            rec["wall_time"] = round(self.wall_time, 6)
        return rec

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_record(timings), separators=(",", ":"), default=_json_default)

    def sort_key(self):
        return (self.corpus_index, self.check, json.dumps(self.params, sort_keys=True))


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def summarize(reports: Sequence[VerificationReport]) -> dict[str, int]:
    counts = {v: 0 for v in VERDICTS}
    for r in reports:
        counts[r.verdict] += 1
    return counts


def _elem(G: FiniteGroup, i: int) -> dict:
    return {"index": int(i), "element": str(G.element(i))}


def _assignment_witness(G: FiniteGroup, word, assignment: dict[int, int]) -> dict:
    return {"word": format_expr(word),
            "assignment": {f"x{v}": _elem(G, g) for v, g in sorted(assignment.items())}}


def _timed(fn):
    def wrapper(G, *args, **kw):
        t0 = time.perf_counter()
        rep = fn(G, *args, **kw)
        rep.wall_time = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _word_failures(G: FiniteGroup, word, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    return evaluate_indices(word, G, {1: xs, 2: ys}) != 0


# -- checks ---------------------------------------------------------------------------

@_timed
def check_heineken(G: FiniteGroup, budget: int = gr.DEFAULT_LAW_BUDGET) -> VerificationReport:
    """Elements g with ``[g, x, g, x] = 1`` for all x: the normal closure of <g>
    in H = <g>^G is abelian, and g lies in the Fitting subgroup.

    Both the hypothesis and the conclusions are invariant under conjugation,
    so g runs over class representatives; the qualifying set is the union
    of the qualifying classes.
    """
    n = G.order
    reps = G.class_reps
    if reps.size * n > budget:
        return VerificationReport("heineken", G.name, {}, "skipped",
                                  reason=f"{reps.size}*{n} pairs exceed budget {budget}")
    alive = np.ones(reps.size, dtype=bool)
    examined = 0
    step = max(1, gr.CHUNK // max(1, reps.size))
    for start in range(0, n, step):
        idx = np.flatnonzero(alive)
        if not idx.size:
            break
        xs = np.arange(start, min(start + step, n))
        gs = np.repeat(reps[idx], xs.size)
        bad = _word_failures(G, HEINEKEN_WORD, gs, np.tile(xs, idx.size)).reshape(idx.size, xs.size)
        examined += gs.size
        alive[idx[bad.any(axis=1)]] = False
    qual_reps = reps[alive]
    qualifying = np.flatnonzero(np.isin(G.class_labels, qual_reps))
    F = gr.fitting(G)
    details = {"qualifying_count": int(qualifying.size),
               "qualifying_reps": qual_reps.tolist(),
               "fitting_order": F.order}
    if qualifying.size <= 1024:
        details["qualifying"] = qualifying.tolist()
    for g in qual_reps.tolist():
        H = gr.normal_closure(G, [g])
        K = gr.normal_closure(G, [g], within=H)
        for a in K.gens:
            for b in K.gens:
                if G.comm(a, b) != 0:
                    return VerificationReport(
                        "heineken", G.name, {}, "fail",
                        reason="normal closure of <g> in <g>^G is not abelian",
                        witness={"g": _elem(G, g), **_assignment_witness(G, parse_expr("[x1,x2]"), {1: a, 2: b})},
                        details=details, examined=examined)
        if g not in F:
            return VerificationReport("heineken", G.name, {}, "fail", reason="g is not in the Fitting subgroup",
                                      witness={"g": _elem(G, g), "not_in": "fitting"},
                                      details=details, examined=examined)
    return VerificationReport("heineken", G.name, {}, "pass", details=details, examined=examined)


def _law_holds_exact(G: FiniteGroup, word, budget: int, sample: int, seed: int):
    """(holds, law_result, how). ``holds`` is None when undecided within budget.

    Nilpotent groups of class below the word's weight satisfy it outright.
    Otherwise the first variable runs over class representatives (the value
    of a word transforms by conjugation), the rest over all elements; when
    that is over budget a seeded sample can still find a counterexample.
    """
    cls = gr.nilpotency_class(G)
    if cls is not None and cls < formal_weight(word) and gamma_weight(word, cls + 1) is None:
        return True, None, f"nilpotent of class {cls} below the word's weight"
    vs = sorted(variables(word))
    reps = G.class_reps
    k = len(vs)
    total = reps.size * G.order ** (k - 1)
    if total <= budget:
        res = _law_over_reps(G, word, vs, reps, total)
        return res.holds, res, "exhaustive (first variable over class representatives)"
    res = gr.law_check(G, word, mode="sample", count=sample, seed=seed)
    if not res.holds:
        return False, res, "sampled counterexample"
    return None, res, "sampled, no counterexample"


def _law_over_reps(G: FiniteGroup, word, vs, reps, total) -> gr.LawResult:
    n, k = G.order, len(vs)
    shape = (reps.size,) + (n,) * (k - 1)
    for start in range(0, total, gr.CHUNK):
        flat = np.arange(start, min(start + gr.CHUNK, total), dtype=np.int64)
        digits = list(np.unravel_index(flat, shape))
        digits[0] = reps[digits[0]]
        vals = evaluate_indices(word, G, dict(zip(vs, digits)))
        bad = np.flatnonzero(vals != 0)
        if bad.size:
            j = bad[0]
            return gr.LawResult(False, {v: int(d[j]) for v, d in zip(vs, digits)}, "exhaustive", int(start + j + 1))
    return gr.LawResult(True, None, "exhaustive", total)


@_timed
def check_fitting_series(G: FiniteGroup, n: int, budget: int = gr.DEFAULT_LAW_BUDGET,
                         sample: int = 10_000, seed: int = 1) -> VerificationReport:
    """If G satisfies ``W_n = 1`` then its Fitting height is at most n."""
    word = build_W(n)
    params = {"n": n}
    holds, res, how = _law_holds_exact(G, word, budget, sample, seed)
    examined = res.examined if res is not None else 0
    details = {"law": format_expr(word), "law_decided_by": how}
    if holds is None:
        return VerificationReport("fitting_series", G.name, params, "skipped",
                                  reason="law W_n undecided within budget", details=details, examined=examined)
    if not holds:
        details["counterexample"] = _assignment_witness(G, word, res.witness)
        return VerificationReport("fitting_series", G.name, params, "vacuous",
                                  reason="G does not satisfy W_n = 1", details=details, examined=examined)
    h = gr.fitting_height(G)
    details["fitting_height"] = h
    if h is not None and h <= n:
        return VerificationReport("fitting_series", G.name, params, "pass", details=details, examined=examined)
    return VerificationReport("fitting_series", G.name, params, "fail",
                              reason="Fitting height exceeds n" if h is not None else "Fitting series stalls",
                              witness={"fitting_height": h}, details=details, examined=examined)


def _variety_value(G: FiniteGroup, d: int, budget: int, sample: int, seed: int):
    """(value, exact, result). On budget overflow falls back to a sampled lower bound."""
    try:
        r = gr.variety_sweep(G, d, budget=budget)
        return r.value, True, r
    except BudgetExceeded:
        r = gr.variety_sweep(G, d, mode="sample", count=sample, seed=seed)
        # a non-nilpotent sampled subgroup settles the value exactly
        return r.value, r.value is None, r


def _variety_details(G, value, exact, r) -> dict:
    out = {"variety_class": value if value is not None else "none",
           "variety_exact": exact}
    if r.witness is not None:
        out["variety_witness"] = [_elem(G, g) for g in r.witness]
    return out


@_timed
def check_variety_implication(G: FiniteGroup, d: int, budget: int = gr.DEFAULT_VARIETY_BUDGET,
                              sample: int = 1000, seed: int = 1) -> VerificationReport:
    """If every d-generated subgroup has class <= bounds(d)[0], G is nilpotent."""
    b1, _ = bounds(d)
    params = {"d": d, "bound": b1}
    value, exact, r = _variety_value(G, d, budget, sample, seed)
    details = _variety_details(G, value, exact, r)
    if value is None:
        return VerificationReport("variety", G.name, params, "vacuous",
                                  reason="some d-generated subgroup is not nilpotent",
                                  details=details, examined=r.examined)
    if value > b1:
        # a sampled value is a lower bound, so exceeding the bound is still conclusive
        return VerificationReport("variety", G.name, params, "vacuous",
                                  reason="d-generated subgroups exceed the class bound",
                                  details=details, examined=r.examined)
    if not exact:
        return VerificationReport("variety", G.name, params, "skipped",
                                  reason="variety class undecided within budget (sampled lower bound only)",
                                  details=details, examined=r.examined)
    cls = gr.nilpotency_class(G)
    details["nilpotency_class"] = cls
    if cls is not None:
        return VerificationReport("variety", G.name, params, "pass", details=details, examined=r.examined)
    series = gr.lower_central_series(G)
    return VerificationReport("variety", G.name, params, "fail", reason="G is not nilpotent",
                              witness={"lower_central_orders": [s.order for s in series]},
                              details=details, examined=r.examined)


def _not_p_group(check: str, G: FiniteGroup, params: dict, p) -> VerificationReport:
    return VerificationReport(check, G.name, params, "vacuous", reason=f"not a {p}-group" if p else "not a p-group")


@_timed
def check_power_commutation(G: FiniteGroup, p: int, budget: int = gr.DEFAULT_LAW_BUDGET,
                            engel_cap: int = gr.DEFAULT_ENGEL_CAP) -> VerificationReport:
    """In a c-Engel p-group with ``p^(r-1) < c <= p^r``: whenever ``x^(p^n) = y^(p^n) = 1``
    with n > r (odd p) or n > r + 1 (p = 2), ``[x^(p^(n-1)), y^(p^(n-1))] = 1``.

    Every valid n is covered: if ``n0`` is the least n killing both x and y,
    any valid n above ``n0`` makes both powers trivial, so only ``n = n0``
    (when it clears the threshold) can fail.
    """
    if not gr.is_p_group(G, p):
        raise ValueError(f"{G.name} is not a {p}-group")
    c = gr.engel_degree(G, cap=engel_cap, budget=budget)
    if c is None:
        return VerificationReport("power_commutation", G.name, {"p": p}, "skipped",
                                  reason=f"Engel degree above cap {engel_cap}")
    r = compute_r_engel(c, p)
    threshold = r + 1 if p == 2 else r
    params = {"p": p, "c": c, "r": r}
    orders = G.element_orders
    e = np.round(np.log(orders) / np.log(p)).astype(np.int64)
    assert np.all(p ** e == orders)
    top = int(e.max())
    details = {"min_n": threshold + 1, "max_n0": top}
    if top <= threshold:
        return VerificationReport("power_commutation", G.name, params, "vacuous",
                                  reason="no pair has a nontrivial instance (exponent too small)",
                                  details=details)
    allx = np.arange(G.order)
    powtab = np.stack([G.batch_power(allx, p ** (k - 1)) if k >= 1 else allx for k in range(top + 1)])
    reps = G.class_reps
    if reps.size * G.order > budget:
        return VerificationReport("power_commutation", G.name, params, "skipped",
                                  reason="pair sweep exceeds budget", details=details)
    instances = 0
    step = max(1, gr.CHUNK // G.order)
    for s in range(0, reps.size, step):
        xs = np.repeat(reps[s:s + step], G.order)
        ys = np.tile(allx, min(step, reps.size - s))
        n0 = np.maximum(e[xs], e[ys])
        keep = n0 > threshold
        xs, ys, n0 = xs[keep], ys[keep], n0[keep]
        instances += xs.size
        a, b = powtab[n0, xs], powtab[n0, ys]
        bad = np.flatnonzero(G.batch_comm(a, b) != 0)
        if bad.size:
            j = bad[0]
            nn = int(n0[j])
            return VerificationReport(
                "power_commutation", G.name, params, "fail",
                reason=f"[x^(p^{nn - 1}), y^(p^{nn - 1})] != 1 with x^(p^{nn}) = y^(p^{nn}) = 1",
                witness={"n": nn, **_assignment_witness(
                    G, parse_expr(f"(c (p x1 {p ** (nn - 1)}) (p x2 {p ** (nn - 1)}))"),
                    {1: int(xs[j]), 2: int(ys[j])})},
                details=details, examined=instances)
    details["instances"] = instances
    if instances == 0:
        return VerificationReport("power_commutation", G.name, params, "vacuous",
                                  reason="no pair meets the hypotheses nontrivially", details=details)
    return VerificationReport("power_commutation", G.name, params, "pass", details=details, examined=instances)


@_timed
def check_power_subgroup_nilpotent(G: FiniteGroup, p: int, c: int, budget: int = gr.DEFAULT_VARIETY_BUDGET,
                                   sample: int = 1000, seed: int = 1) -> VerificationReport:
    """For a p-group in which 2-generated subgroups have class <= c, the power
    subgroup ``G^(p^r)`` (odd p) or ``G^(2^(r+1))`` is nilpotent."""
    if not gr.is_p_group(G, p):
        raise ValueError(f"{G.name} is not a {p}-group")
    if c < 2:
        raise ValueError("c must be >= 2")
    r = compute_r_variety(c, p)
    m = variety_exponent(c, p)
    params = {"p": p, "c": c, "r": r, "power": m}
    cls = gr.nilpotency_class(G)
    if cls is not None and cls <= c:
        details = {"premise": f"class {cls} <= c"}
    else:
        value, exact, res = _variety_value(G, 2, budget, sample, seed)
        details = _variety_details(G, value, exact, res)
        if value is None or value > c:
            return VerificationReport("power_subgroup", G.name, params, "vacuous",
                                      reason="2-generated subgroups exceed class c", details=details)
        if not exact:
            return VerificationReport("power_subgroup", G.name, params, "skipped",
                                      reason="premise undecided within budget", details=details)
    P = gr.power_subgroup(G, m)
    pc = gr.nilpotency_class(G, P)
    details.update(power_subgroup_order=P.order, power_subgroup_class=pc)
    if pc is not None:
        return VerificationReport("power_subgroup", G.name, params, "pass", details=details)
    return VerificationReport("power_subgroup", G.name, params, "fail", reason="power subgroup is not nilpotent",
                              witness={"generators": [_elem(G, g) for g in P.gens]}, details=details)


@_timed
def check_power_fitting(G: FiniteGroup, p: int, budget: int = gr.DEFAULT_LAW_BUDGET, sample: int = 100_000,
                 seed: int = 1, variety_budget: int = gr.DEFAULT_VARIETY_BUDGET) -> VerificationReport:
    """Exponent 8 (p = 2) or 9 (p = 3) groups whose 2-generated subgroups have
    class <= 5 satisfy ``[x^q, y, x^q, y] = 1`` with q = 4 or 3, and every
    ``x^q`` lies in the Fitting subgroup."""
    if p not in POWER_FITTING_WORDS:
        raise ValueError("p must be 2 or 3")
    word, q = POWER_FITTING_WORDS[p], 4 if p == 2 else 3
    params = {"p": p, "q": q}
    exp = gr.exponent(G)
    details = {"exponent": exp, "word": format_expr(word)}
    if POWER_FITTING_EXPONENT[p] % exp:
        return VerificationReport("power_fitting", G.name, params, "vacuous",
                                  reason=f"exponent {exp} does not divide {POWER_FITTING_EXPONENT[p]}", details=details)
    cls = gr.nilpotency_class(G)
    details["nilpotency_class"] = cls
    if cls is None or cls > POWER_FITTING_CLASS:
        value, exact, res = _variety_value(G, 2, variety_budget, 1000, seed)
        details.update(_variety_details(G, value, exact, res))
        if value is None or value > POWER_FITTING_CLASS:
            return VerificationReport("power_fitting", G.name, params, "vacuous",
                                      reason="2-generated subgroups exceed class 5", details=details)
        if not exact:
            return VerificationReport("power_fitting", G.name, params, "skipped",
                                      reason="premise undecided within budget", details=details)
    else:
        details["premise"] = f"class {cls} <= {POWER_FITTING_CLASS}"
    n = G.order
    if n * n <= budget:
        res = gr.law_check(G, word, mode="exhaustive", budget=budget)
        details["mode"] = "exhaustive"
    else:
        res = gr.law_check(G, word, mode="sample", count=sample, seed=seed)
        details["mode"] = f"sampled ({sample} pairs, seed {seed})"
    if not res.holds:
        return VerificationReport("power_fitting", G.name, params, "fail", reason="identity violated",
                                  witness=_assignment_witness(G, word, res.witness),
                                  details=details, examined=res.examined)
    F = gr.fitting(G)
    details["fitting"] = "whole group (G is nilpotent)" if F.order == n else f"order {F.order}"
    powers = G.batch_power(np.arange(n), q)
    outside = np.flatnonzero(~F.mask[powers])
    if outside.size:
        x = int(outside[0])
        return VerificationReport("power_fitting", G.name, params, "fail", reason=f"x^{q} not in the Fitting subgroup",
                                  witness={"x": _elem(G, x), "power": q, "not_in": "fitting"},
                                  details=details, examined=res.examined)
    return VerificationReport("power_fitting", G.name, params, "pass", details=details, examined=res.examined)


@_timed
def check_v_law(G: FiniteGroup, p: Optional[int]) -> VerificationReport:
    """Finite p-groups (p in {2, 3, 5}) satisfy the V_n laws of their class
    through nilpotency alone; recorded as finite-trivial after confirming it."""
    if p not in (2, 3, 5):
        return VerificationReport("v_law", G.name, {"p": p}, "vacuous", reason="not a 2-, 3- or 5-group")
    cls = gr.nilpotency_class(G)
    details = {"nilpotency_class": cls, "note": "finite-trivial"}
    verdict = "pass" if cls is not None else "fail"
    return VerificationReport("v_law", G.name, {"p": p}, verdict, details=details,
                              witness=None if cls is not None else {"lower_central_orders":
                                                                    [s.order for s in gr.lower_central_series(G)]})


# -- suite ------------------------------------------------------------------------------

CHECKS = ("heineken", "fitting_series", "variety", "power_commutation", "power_subgroup", "power_fitting", "v_law")


@dataclass
class SuiteConfig:
    law_budget: int = gr.DEFAULT_LAW_BUDGET
    variety_budget: int = gr.DEFAULT_VARIETY_BUDGET
    sample: int = 100_000
    seed: int = 1
    fitting_ns: tuple[int, ...] = (1, 2, 3)
    variety_ds: tuple[int, ...] = (2, 3)


def _checks_for(name: str, G: FiniteGroup, cfg: SuiteConfig) -> list[Callable[[], VerificationReport]]:
    p = gr.prime_of_p_group(G)
    if name == "heineken":
        return [lambda: check_heineken(G, budget=cfg.law_budget)]
    if name == "fitting_series":
        return [lambda n=n: check_fitting_series(G, n, budget=cfg.law_budget, sample=10_000, seed=cfg.seed)
                for n in cfg.fitting_ns]
    if name == "variety":
        return [lambda d=d: check_variety_implication(G, d, budget=cfg.variety_budget, seed=cfg.seed)
                for d in cfg.variety_ds]
    if name == "power_commutation":
        if p is None:
            return [lambda: _not_p_group(name, G, {}, None)]
        return [lambda: check_power_commutation(G, p, budget=cfg.law_budget)]
    if name == "power_subgroup":
        if p is None:
            return [lambda: _not_p_group(name, G, {}, None)]
        c = max(2, gr.nilpotency_class(G))
        return [lambda: check_power_subgroup_nilpotent(G, p, c, budget=cfg.variety_budget, seed=cfg.seed)]
    if name == "power_fitting":
        if p not in (2, 3):
            return [lambda: VerificationReport("power_fitting", G.name, {}, "vacuous",
                                               reason="exponent divides neither 8 nor 9")]
        return [lambda: check_power_fitting(G, p, budget=cfg.law_budget, sample=cfg.sample, seed=cfg.seed,
                                     variety_budget=cfg.variety_budget)]
    if name == "v_law":
        return [lambda: check_v_law(G, p)]
    raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)} or all")


def run_suite(corpus: Sequence[tuple[str, FiniteGroup]], checks: Sequence[str] | str = "all",
              config: Optional[SuiteConfig] = None,
              on_report: Optional[Callable[[VerificationReport], None]] = None,
              indices: Optional[Sequence[int]] = None) -> list[VerificationReport]:
    """Run the selected checks over ``(name, group)`` pairs; reports sorted by (corpus index, check, params).

    ``indices`` overrides the corpus index recorded for each group (default: position in ``corpus``).
    """
    cfg = config or SuiteConfig()
    names = list(CHECKS) if checks == "all" else [checks] if isinstance(checks, str) else list(checks)
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)} or all")
    reports = []
    for ci, (gname, G) in enumerate(corpus):
        for name in sorted(names):
            for job in _checks_for(name, G, cfg):
                rep = job()
                rep.group = gname
                rep.corpus_index = ci if indices is None else indices[ci]
                log.info("%s %s %s: %s", gname, rep.check, rep.params, rep.verdict)
                if on_report is not None:
                    on_report(rep)
                reports.append(rep)
    reports.sort(key=VerificationReport.sort_key)
    return reports


def recheck(report: VerificationReport, G: FiniteGroup) -> bool:
    """Re-evaluate a fail witness; True when the violation reproduces."""
    w = report.witness
    if report.verdict != "fail" or w is None:
        raise ValueError("only fail reports carry witnesses")
    if "word" in w:
        word = parse_expr(w["word"])
        assignment = {int(k[1:]): G.element(v["index"]) for k, v in w["assignment"].items()}
        return evaluate(word, assignment, G) != G.element(0)
    if w.get("not_in") == "fitting":
        x = w.get("g") or w["x"]
        g = G.power(x["index"], w.get("power", 1))
        return g not in gr.fitting(G)
    if "fitting_height" in w:
        h = gr.fitting_height(G)
        return h is None or h > report.params["n"]
    if "lower_central_orders" in w:
        return gr.nilpotency_class(G) is None
    if "generators" in w:
        return gr.nilpotency_class(G, gr.subgroup(G, [e["index"] for e in w["generators"]])) is None
    raise ValueError("unrecognized witness")
