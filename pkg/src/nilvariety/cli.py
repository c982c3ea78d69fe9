"""Command-line entry point ``nilvariety``.

Exit status: 0 on success; for ``verify``, 1 if any check failed and 2 if any
input (manifest, corpus entry, group file) was malformed or failed its
metadata self-check. Usage errors and parse errors also exit with 2.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import corpus as cp
from . import groups as gr
from . import theorems as th
from .magnus import SparseSeries, format_series, gamma_weight, leading_terms, witt_number
from .words import WordSyntaxError, formal_weight, parse_expr

DEFAULT_SEED = 1

log = logging.getLogger("nilvariety")


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def resolve_group(spec: str, cap: int) -> gr.FiniteGroup:
    """A group file path, or the name of a default corpus entry (e.g. ``Sym4``, ``UT(4,3)``)."""
    if os.path.exists(spec):
        return cp.load(spec, cap=cap)
    for e in cp.default_corpus():
        if e.name == spec:
            return e.build(cap=cap)
    raise FileNotFoundError(f"{spec}: no such group file or default corpus entry")


def _fmt_assignment(G, witness: dict[int, int]) -> str:
    return " ".join(f"x{v}={G.element(g)}" for v, g in sorted(witness.items()))


# -- commands -------------------------------------------------------------------------

def cmd_weight(args) -> int:
    expr = parse_expr(args.word)
    D = args.D if args.D is not None else formal_weight(expr)
    w = gamma_weight(expr, D)
    print(w if w is not None else f"exceeds {D}")
    if args.terms and w is not None:
        terms = leading_terms(expr, D)
        print(format_series(SparseSeries(w, 0, terms)))
    return 0


def cmd_law(args) -> int:
    G = resolve_group(args.group, args.cap)
    expr = parse_expr(args.word)
    if args.sample is not None:
        res = gr.law_check(G, expr, mode="sample", count=args.sample, seed=args.seed)
    else:
        res = gr.law_check(G, expr, mode="exhaustive", budget=args.budget)
    if res.holds:
        how = "exhaustive" if res.mode == "exhaustive" else f"no counterexample among {res.examined} sampled"
        print(f"holds ({how}, {res.examined} assignments)")
    else:
        print(f"counterexample: {_fmt_assignment(G, res.witness)}")
    return 0


def cmd_verify(args) -> int:
    if args.corpus == "default":
        entries, base = cp.default_corpus(), "."
    else:
        entries, base = cp.load_manifest(args.corpus), os.path.dirname(os.path.abspath(args.corpus))
    built = cp.build_corpus(entries, cap=args.cap, base_dir=base)
    cfg = th.SuiteConfig(law_budget=args.budget, variety_budget=args.variety_budget,
                         sample=args.sample, seed=args.seed)
    if args.n:
        cfg.fitting_ns = tuple(args.n)
    if args.d:
        cfg.variety_ds = tuple(args.d)

    def stream(rep: th.VerificationReport):
        print(f"{rep.group}\t{rep.check}\t{_params(rep.params)}\t{rep.verdict}"
              + (f"\t{rep.reason}" if rep.reason else ""), flush=True)

    order = {e.name: i for i, e in enumerate(entries)}
    reports = th.run_suite(built.groups, args.check, cfg, on_report=stream,
                           indices=[order[name] for name, _ in built.groups])
    for name, reason in built.skipped:
        rep = th.VerificationReport("corpus", name, {}, "skipped", reason=reason, corpus_index=order[name])
        stream(rep)
        reports.append(rep)
    reports.sort(key=th.VerificationReport.sort_key)
    if args.out:
        with open(args.out, "w") as fh:
            for rep in reports:
                fh.write(rep.to_json(timings=args.timings) + "\n")
    counts = th.summarize(reports)
    print("summary: " + " ".join(f"{k}={v}" for k, v in counts.items()))
    if counts["fail"]:
        return 1
    return 2 if built.skipped else 0


def _params(p: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in p.items()) or "-"


def cmd_bounds(args) -> int:
    b1, b2 = th.bounds(args.d)
    print(b1, b2)
    return 0


def cmd_r(args) -> int:
    if args.variant == "engel":
        print(th.compute_r_engel(args.c, args.p))
    else:
        r = th.compute_r_variety(args.c, args.p)
        print(r)
        log.info("power subgroup exponent %d", th.variety_exponent(args.c, args.p))
    return 0


def cmd_witt(args) -> int:
    print(witt_number(args.r, args.n))
    return 0


def cmd_variety(args) -> int:
    G = resolve_group(args.group, args.cap)
    if args.sample is not None:
        res = gr.variety_sweep(G, args.d, mode="sample", count=args.sample, seed=args.seed)
    else:
        res = gr.variety_sweep(G, args.d, budget=args.budget)
    value = "none" if res.value is None else str(res.value)
    print(value if res.exact else f"{value} (lower bound, sampled)")
    return 0


def cmd_fitting(args) -> int:
    G = resolve_group(args.group, args.cap)
    F = gr.fitting(G)
    print(f"order {F.order}")
    for i in F.elements:
        print(G.element(i))
    return 0


def cmd_make(args) -> int:
    if args.kind not in cp.CONSTRUCTORS:
        raise ValueError(f"unknown constructor {args.kind!r}; choose from {', '.join(cp.CONSTRUCTORS)}")
    fn, names = cp.CONSTRUCTORS[args.kind]
    if len(args.params) != len(names):
        raise ValueError(f"{args.kind} takes {len(names)} parameter(s): {' '.join(names)}")
    G = fn(*args.params, cap=args.cap)
    text = cp.dumps(G)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_manifest(args) -> int:
    cp.save_manifest(cp.default_corpus(), args.out)
    return 0


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilvariety", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def group_opts(p):
        p.add_argument("--cap", type=positive_int, default=gr.DEFAULT_CAP, help="maximum group order to enumerate")

    p = sub.add_parser("weight", help="lower-central-series weight of a word")
    p.add_argument("word")
    p.add_argument("--D", type=positive_int, default=None, help="truncation degree (default: formal weight)")
    p.add_argument("--terms", action="store_true", help="also print the lowest-degree terms")
    p.set_defaults(fn=cmd_weight)

    p = sub.add_parser("law", help="check whether a word is a law of a group")
    p.add_argument("group", help="group file or default corpus name")
    p.add_argument("word")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="enumerate all assignments (default)")
    mode.add_argument("--sample", type=positive_int, default=None, help="test this many seeded assignments")
    p.add_argument("--budget", type=positive_int, default=gr.DEFAULT_LAW_BUDGET)
    p.add_argument("--seed", type=nonneg_int, default=DEFAULT_SEED)
    group_opts(p)
    p.set_defaults(fn=cmd_law)

    p = sub.add_parser("verify", help="run verification checks over a corpus")
    p.add_argument("check", choices=list(th.CHECKS) + ["all"])
    p.add_argument("--corpus", default="default", help="'default' or a JSON manifest path")
    p.add_argument("--seed", type=nonneg_int, default=DEFAULT_SEED)
    p.add_argument("--sample", type=positive_int, default=100_000, help="sampled pairs when exhaustive is over budget")
    p.add_argument("--budget", type=positive_int, default=gr.DEFAULT_LAW_BUDGET, help="exhaustive sweep budget")
    p.add_argument("--variety-budget", type=positive_int, default=gr.DEFAULT_VARIETY_BUDGET,
                   help="subgroup closures allowed per variety sweep")
    p.add_argument("--n", type=positive_int, action="append", help="W_n index for fitting_series (repeatable)")
    p.add_argument("--d", type=positive_int, action="append", help="generator count for variety (repeatable, >= 2)")
    p.add_argument("--out", help="write JSON Lines reports here")
    p.add_argument("--timings", action="store_true", help="include wall times in the report file")
    group_opts(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bounds", help="class bounds for d-generator subgroups")
    p.add_argument("d", type=positive_int)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("r", help="the integer r for class c and prime p")
    p.add_argument("c", type=positive_int)
    p.add_argument("p", type=positive_int)
    p.add_argument("--variant", choices=("engel", "variety"), default="engel")
    p.set_defaults(fn=cmd_r)

    p = sub.add_parser("witt", help="Witt number (rank of gamma_n/gamma_n+1 of the free group of rank r)")
    p.add_argument("r", type=positive_int)
    p.add_argument("n", type=positive_int)
    p.set_defaults(fn=cmd_witt)

    p = sub.add_parser("variety", help="least c with every d-generated subgroup of class <= c")
    p.add_argument("group")
    p.add_argument("d", type=positive_int)
    p.add_argument("--budget", type=positive_int, default=gr.DEFAULT_VARIETY_BUDGET)
    p.add_argument("--sample", type=positive_int, default=None, help="sample this many d-tuples (lower bound)")
    p.add_argument("--seed", type=nonneg_int, default=DEFAULT_SEED)
    group_opts(p)
    p.set_defaults(fn=cmd_variety)

    p = sub.add_parser("fitting", help="Fitting subgroup")
    p.add_argument("group")
    group_opts(p)
    p.set_defaults(fn=cmd_fitting)

    p = sub.add_parser("make", help="write a group file for a standard constructor")
    p.add_argument("kind")
    p.add_argument("params", type=positive_int, nargs="*")
    p.add_argument("--out")
    group_opts(p)
    p.set_defaults(fn=cmd_make)

    p = sub.add_parser("manifest", help="write the default corpus manifest")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_manifest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify" and args.d and min(args.d) < 2:
            raise ValueError("--d must be >= 2")
        return args.fn(args)
    except WordSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, gr.BudgetExceeded, gr.GroupTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
