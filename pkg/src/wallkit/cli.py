"""Command-line front end.

Exit codes are a contract: 0 pass, 1 condition/verdict failure, 2 input
error, 3 budget exhaustion.  Rationals are rendered as num/den everywhere;
reports are byte-stable for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .complexes import (
    Complex,
    build_cayley_ball,
    build_example1,
    build_example2,
    load_complex,
    save_complex,
    validity_summary,
)
from .dehn import DehnMachine, dehn_reduce, shortlex_normal_form
from .errors import BudgetExceeded, ParseError, WallkitError
from .presentation import Presentation, check_small_cancellation, gen_example, parse_presentation
from .separation import (
    default_region,
    report_to_csv,
    report_to_json,
    verify_linear_separation,
)
from .walls import build_walls, dump_walls, walls_to_dot
from .words import render

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    lam: Fraction = Fraction(1, 6)
    radius: int = 6
    margin: int | None = None
    vertex_budget: int = 500_000
    node_budget: int = 10**6
    seed: int = 0
    out_dir: Path | None = None
    jobs: int = 1

    def __post_init__(self):
        if not (0 < self.lam < 1):
            raise ParseError(f"lambda {self.lam} outside (0, 1)")
        if self.radius < 1:
            raise ParseError("radius must be >= 1")
        if self.vertex_budget <= 0 or self.node_budget <= 0:
            raise ParseError("budgets must be positive")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from e


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from e


def _load_presentation(args) -> Presentation:
    if getattr(args, "input", None):
        return parse_presentation(Path(args.input).read_text(encoding="utf-8"))
    family = getattr(args, "family", None)
    if family in (None, ""):
        raise ParseError("need --input or --family")
    if family == "tv":
        return gen_example("tv", I=set(args.I or [1, 2]), k=args.k)
    if family == "pride":
        return gen_example("pride", n_max=args.n_max)
    if family == "rips":
        return gen_example(
            "rips",
            q_generators=tuple((args.q_gens or "a1").split(",")),
            j_max=args.j_max,
            scale=args.scale,
        )
    if family in ("none", "free"):
        return gen_example("free")
    raise ParseError(f"unknown family {family!r}")


def _build_complex(args, cfg: RunConfig) -> tuple[Complex, Presentation | None]:
    example = getattr(args, "example", None)
    if example:
        if example == "example1":
            return build_example1(args.n or [1, 2, 3]), None
        if example == "example2":
            return build_example2(args.x, args.half_r), None
        raise ParseError(f"unknown example {example!r}")
    if getattr(args, "complex_file", None):
        return load_complex(Path(args.complex_file).read_text(encoding="utf-8")), None
    p = _load_presentation(args)
    m = DehnMachine(p, node_budget=cfg.node_budget)
    c = build_cayley_ball(p, m, cfg.radius, vertex_budget=cfg.vertex_budget, seed=cfg.seed)
    return c, p


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# -- commands -----------------------------------------------------------------


def cmd_check(args) -> int:
    try:
        p = _load_presentation(args)
    except WallkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = check_small_cancellation(p, args.lam)
    for e in report.entries:
        worst = p.show(e.worst.word) if e.worst else "-"
        status = "ok" if e.passed else "FAIL"
        print(
            f"relator {e.rid} |r|={e.relator_length} max piece={e.max_piece} "
            f"ratio={_frac_str(e.ratio)} worst={worst} [{status}]"
        )
    print(f"condition C'({_frac_str(report.lam)}): {'pass' if report.passed else 'fail'}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_separation(args) -> int:
    cfg = RunConfig(
        "separation",
        inputs=tuple(s for s in (args.input, getattr(args, "complex_file", None)) if s),
        lam=args.lam,
        radius=args.radius,
        margin=args.margin,
        vertex_budget=args.vertex_budget,
        node_budget=args.node_budget,
        seed=args.seed,
        out_dir=Path(args.out) if args.out else None,
        jobs=args.jobs,
    )
    if cfg.out_dir:
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
    try:
        c, p = _build_complex(args, cfg)
    except BudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        if cfg.out_dir:
            (cfg.out_dir / "summary.json").write_text(
                json.dumps({"error": str(e), "passed": False}, indent=2) + "\n"
            )
        return EXIT_BUDGET
    except (WallkitError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    ws = build_walls(c, settled_policy=args.settled_policy, settled_margin=args.margin)
    region_mode = args.region
    if args.region == "all":
        region = list(range(c.nv))
    else:
        region = default_region(c, ws)
        if not region and args.region == "auto":
            # The faithful interior is empty at this radius.  When the ball
            # is a valid complex in its own right, fall back to a seeded
            # vertex sample with every wall treated as settled.
            if validity_summary(c, cfg.lam).ok:
                import random as _random

                rng = _random.Random(cfg.seed)
                k = min(c.nv, 240)
                region = sorted(rng.sample(range(c.nv), k))
                ws = build_walls(c, settled_policy="all")
                region_mode = "auto:intrinsic-sample"
            else:
                region_mode = "auto:empty-interior"
    try:
        report = verify_linear_separation(
            c,
            ws,
            cfg.lam,
            region=region,
            observe=args.observe,
            max_pairs=args.max_pairs,
            seed=cfg.seed,
            jobs=cfg.jobs,
        )
    except WallkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    csv_text = report_to_csv(report)
    payload = json.loads(report_to_json(report))
    payload["region"] = region_mode
    json_text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.out_dir:
        (cfg.out_dir / "report.csv").write_text(csv_text)
        (cfg.out_dir / "summary.json").write_text(json_text)
        (cfg.out_dir / "complex.txt").write_text(save_complex(c))
        if args.dot:
            (cfg.out_dir / "walls.dot").write_text(walls_to_dot(ws))
    else:
        sys.stdout.write(json_text)
    mr = report.min_ratio
    print(
        f"pairs={report.pair_count} constant={_frac_str(report.constant)} "
        f"min_ratio={_frac_str(mr) if mr is not None else 'n/a'} "
        f"{'observe' if report.observe else ('pass' if report.passed else 'FAIL')}"
    )
    if report.observe:
        return EXIT_PASS
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_word(args) -> int:
    try:
        p = _load_presentation(args)
        w = p.word(args.word)
    except WallkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    m = DehnMachine(p, node_budget=args.node_budget)
    if not m.small_cancellation_ok:
        print("presentation fails the 1/6 piece condition", file=sys.stderr)
        return EXIT_FAIL
    try:
        reduced = dehn_reduce(w, m)
        nf = shortlex_normal_form(w, m)
    except BudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"reduced: {render(reduced, p.generators)}")
    print(f"normal form: {render(nf, p.generators)}")
    print("trivial" if len(reduced) == 0 else "non-trivial")
    return EXIT_PASS


def cmd_walls_dump(args) -> int:
    cfg = RunConfig(
        "walls-dump",
        radius=args.radius,
        vertex_budget=args.vertex_budget,
        node_budget=args.node_budget,
        seed=args.seed,
    )
    try:
        c, _ = _build_complex(args, cfg)
    except BudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (WallkitError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    ws = build_walls(c, settled_policy=args.settled_policy, settled_margin=args.margin)
    text = dump_walls(ws)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.dot:
        Path(args.dot).write_text(walls_to_dot(ws))
    return EXIT_PASS


def cmd_examples(_args) -> int:
    print("families (presentations):")
    print("  tv        --I 1,2 --k 7        relators (a^n b^n)^k for n in I")
    print("  pride     --n-max N            relators a*(a^n b^n)^10, b*(a^n b^2n)^10")
    print("  rips      --j-max J --scale S  conjugation words padded with (xy)^i xy^2 blocks")
    print("  none/free                      free group on a, b")
    print("complexes (built directly):")
    print("  example1  --n 1,2,3            chained theta graphs; B(6) holds, ratio dw/d decays")
    print("  example2  --x 2 --half-r 14    two cells sharing a short segment; double-crossing walls")
    return EXIT_PASS


# -- argument wiring ----------------------------------------------------------


def _add_source_args(sp, with_example: bool = True):
    sp.add_argument("--input", help="presentation file")
    sp.add_argument("--family", help="builtin family: tv, pride, rips, none")
    sp.add_argument("--I", type=_int_list, help="tv: index set, e.g. 1,2")
    sp.add_argument("--k", type=int, default=7, help="tv: power (default 7)")
    sp.add_argument("--n-max", dest="n_max", type=int, default=1, help="pride: truncation")
    sp.add_argument("--j-max", dest="j_max", type=int, default=1, help="rips: blocks")
    sp.add_argument("--scale", type=int, default=80, help="rips: scaling constant")
    sp.add_argument("--q-gens", dest="q_gens", help="rips: comma-separated quotient generators")
    if with_example:
        sp.add_argument("--example", help="builtin complex: example1, example2")
        sp.add_argument("--n", type=_int_list, help="example1: n list")
        sp.add_argument("--x", type=int, default=2, help="example2: shared segment length")
        sp.add_argument("--half-r", dest="half_r", type=int, default=14, help="example2: half cell length")
        sp.add_argument("--complex-file", help="load a complex file instead of building")


def _add_budget_args(sp):
    env_budget = os.environ.get("WALLKIT_BUDGET")
    default_nodes = int(env_budget) if env_budget and env_budget.isdigit() else 10**6
    sp.add_argument("--vertex-budget", type=int, default=min(500_000, default_nodes), help="ball vertex budget")
    sp.add_argument("--node-budget", type=int, default=default_nodes, help="search frontier budget")
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wallkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="piece condition check on a presentation")
    _add_source_args(sp, with_example=False)
    sp.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1, 6))
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("separation", help="wall vs path metric comparison")
    _add_source_args(sp)
    sp.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1, 6))
    sp.add_argument("--radius", type=int, default=6)
    sp.add_argument("--observe", action="store_true", help="record ratios with no verdict")
    sp.add_argument("--region", choices=("auto", "interior", "all"), default="auto")
    sp.add_argument("--max-pairs", dest="max_pairs", type=int, default=None)
    sp.add_argument("--settled-policy", dest="settled_policy", choices=("margin", "all"), default="margin")
    sp.add_argument("--margin", type=int, default=None)
    sp.add_argument("--out", help="output directory for report.csv / summary.json")
    sp.add_argument("--dot", action="store_true", help="also write walls.dot")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_budget_args(sp)
    sp.set_defaults(fn=cmd_separation)

    sp = sub.add_parser("word", help="word problem: reduce, normal form, triviality")
    _add_source_args(sp, with_example=False)
    sp.add_argument("word", help="word over the presentation's generators")
    _add_budget_args(sp)
    sp.set_defaults(fn=cmd_word)

    sp = sub.add_parser("walls-dump", help="dump the wall partition and hypergraphs")
    _add_source_args(sp)
    sp.add_argument("--radius", type=int, default=6)
    sp.add_argument("--settled-policy", dest="settled_policy", choices=("margin", "all"), default="margin")
    sp.add_argument("--margin", type=int, default=None)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--dot", help="also write hypergraph DOT to this file")
    _add_budget_args(sp)
    sp.set_defaults(fn=cmd_walls_dump)

    sp = sub.add_parser("examples", help="list builtin families and complexes")
    sp.set_defaults(fn=cmd_examples)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_PASS
    try:
        return args.fn(args)
    except BudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (WallkitError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
