"""Command-line harness: seeded suites of checks with JSON or text reports."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, Iterator, List, Optional

from .construct import DEFAULT_BUDGET, Presentation, build_generator, enum_D, reconstruct
from .endo import Mode
from .errors import EnumerationBudgetError
from .randgen import (
    random_comma_diagram, random_span_diagram, random_target, random_witness, rng_for,
)
from .verify import (
    SCHEMA_VERSION, Report, check_cofinality, check_lemma_G, check_lemma_H, check_poset,
    check_presentable, check_pushout_commute,
)

DIAGRAMS_PER_GENERATOR = 5


def _mode(args, case: int) -> Mode:
    if args.mode:
        return Mode(args.mode)
    return Mode.TRIVIAL if case % 2 == 0 else Mode.FILTRATION


def _describe(args, suite, case, **extra) -> str:
    parts = [f"seed={args.seed}", f"suite={suite}", f"case={case}"]
    parts += [f"{k}={v}" for k, v in extra.items()]
    return " ".join(parts)


def suite_reconstruct(args) -> Iterator[Report]:
    for case in range(args.cases):
        rng = rng_for(args.seed, "reconstruct", case)
        target = random_target(rng, args.max_size)
        mode = _mode(args, case)
        res = reconstruct(Presentation(target, mode), budget=args.budget)
        rep = Report("reconstruct", _describe(args, "reconstruct", case, T=target.T.name, mode=mode.value))
        rep.require("comparison into the target is not a bijection", res.is_iso)
        rep.data.update({"dCount": res.d_count, "edges": res.edge_count, "isIso": res.is_iso})
        yield rep


def suite_posets(args) -> Iterator[Report]:
    for case in range(args.cases):
        rng = rng_for(args.seed, "posets", case)
        target = random_target(rng, args.max_size)
        mode = _mode(args, case)
        pres = Presentation(target, mode)
        elems = enum_D(pres, budget=args.budget)
        tag = dict(T=target.T.name, mode=mode.value)
        yield check_poset(pres, elems, rng, instance=_describe(args, "posets", case, **tag))
        yield check_cofinality(pres, elems, instance=_describe(args, "cofinality", case, **tag))


def suite_presentable(args) -> Iterator[Report]:
    for case in range(args.cases):
        rng = rng_for(args.seed, "presentable", case)
        w = random_witness(rng, args.max_size)
        g = build_generator(w)
        for n in range(DIAGRAMS_PER_GENERATOR):
            diagram = random_comma_diagram(rng, args.max_size, w.T)
            yield check_presentable(g, diagram, instance=_describe(args, "presentable", case, T=w.T.name, diagram=n))


def suite_lemmas(args) -> Iterator[Report]:
    for case in range(args.cases):
        rng = rng_for(args.seed, "lemmas", case)
        target = random_target(rng, args.max_size)
        mode = _mode(args, case)
        pres = Presentation(target, mode)
        i_max, _ = pres.default_bounds
        i = rng.randint(0, i_max)
        j = rng.randint(0, pres.j_bound(i))
        tag = dict(T=target.T.name, mode=mode.value)
        yield check_lemma_G(pres, i, instance=_describe(args, "lemma_G", case, i=i, **tag))
        yield check_lemma_H(pres, i, j, instance=_describe(args, "lemma_H", case, i=i, j=j, **tag))


def suite_commute(args) -> Iterator[Report]:
    for case in range(args.cases):
        rng = rng_for(args.seed, "commute", case)
        sd = random_span_diagram(rng, args.max_size)
        yield check_pushout_commute(sd, instance=_describe(args, "commute", case))


SUITES: Dict[str, List[Callable[..., Iterator[Report]]]] = {
    "check-posets": [suite_posets],
    "check-presentable": [suite_presentable],
    "check-lemmas": [suite_lemmas],
    "reconstruct": [suite_reconstruct],
    "check-commute": [suite_commute],
}
SUITES["all"] = [suite_posets, suite_presentable, suite_lemmas, suite_reconstruct, suite_commute]


def _fixtures(args) -> Iterator[dict]:
    for case in range(args.cases):
        rng = rng_for(args.seed, "gen", case)
        yield {
            "schemaVersion": SCHEMA_VERSION,
            "case": case,
            "target": random_target(rng, args.max_size).to_json(),
            "witness": random_witness(rng, args.max_size).to_json(),
        }


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _text(rep: Report) -> str:
    line = f"{'PASS' if rep.passed else 'FAIL'} {rep.check} {rep.instance}"
    return "\n".join([line] + [f"    {d}" for d in rep.details])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commapres", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cases", type=_nonneg, default=10)
    common.add_argument("--max-size", type=_nonneg, default=2)
    common.add_argument("--mode", choices=[m.value for m in Mode], default=None,
                        help="decomposition of T A_i; alternates per case when omitted")
    common.add_argument("--budget", type=_nonneg, default=DEFAULT_BUDGET,
                        help="largest number of poset elements to enumerate")
    common.add_argument("--out", default=None, help="write the report stream here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="emit random targets and witnesses as JSON fixtures")
    for name in SUITES:
        sub.add_parser(name, parents=[common])
    return parser


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0 or value >= 2 ** 64:
        raise argparse.ArgumentTypeError("expected an integer in [0, 2^64)")
    return value


def run(args, out) -> int:
    if args.command == "gen":
        for fx in _fixtures(args):
            out.write(_dump(fx) + "\n")
        return 0
    counts = {"passed": 0, "failed": 0}
    status = 0
    budget_note: Optional[dict] = None
    try:
        for suite in SUITES[args.command]:
            for rep in suite(args):
                counts["passed" if rep.passed else "failed"] += 1
                out.write((_dump(rep.to_json()) if args.format == "json" else _text(rep)) + "\n")
    except EnumerationBudgetError as exc:
        budget_note = {"needed": exc.needed, "budget": exc.budget}
        status = 3
    if status == 0 and counts["failed"]:
        status = 1
    summary = {"schemaVersion": SCHEMA_VERSION, "summary": {
        "command": args.command, "seed": args.seed, "cases": args.cases, **counts,
        "budgetExceeded": budget_note, "exitStatus": status,
    }}
    if args.format == "json":
        out.write(_dump(summary) + "\n")
    else:
        out.write(f"{counts['passed']} passed, {counts['failed']} failed"
                  + (f"; enumeration budget exceeded ({budget_note['needed']} > {budget_note['budget']})" if budget_note else "")
                  + "\n")
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as out:
            return run(args, out)
    return run(args, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
