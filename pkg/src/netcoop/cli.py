"""Command-line entry point: ``netcoop {analyze,graph,simulate,sweep,verify}``.

Exit codes: 0 success, 1 internal error or failed verification, 2 invalid
input, 3 enumeration/size guard exceeded. Output is deterministic for fixed
flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import network as nw
from ._format import approx, exact
from .analysis import check_sustainability, cooperation_bound
from .engine import (
    Exhaustive,
    GoMessage,
    NoDeviation,
    Omniscient,
    Sample,
    Schedule,
    TooManyPermutations,
    deviator_family,
    run,
    schedules,
    tally_outcomes,
)
from .game import PDPayoffs, as_fraction, random_payoffs
from .oracle import (
    Check,
    VerificationReport,
    best_deviation_search,
    verify_theorem_boundary,
    verify_vt_on_uniform_graph,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3

REPORT_COLUMNS = ["n", "tau", "a", "b", "c", "bound_b", "sustainable", "v_avg", "n_c", "margin"]
DECIMAL_COLUMNS = ["bound_b", "v_avg", "n_c", "margin"]


class UsageError(ValueError):
    pass


# -- argument parsing helpers ----------------------------------------------------


def _rational(s: str) -> Fraction:
    try:
        return as_fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {s!r}") from None


def _seed(s: str) -> int:
    try:
        v = int(s, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer: {s!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {s!r}")
    return v


def parse_int_range(s: str) -> list[int]:
    """``"3"``, ``"2..10"`` (inclusive) or ``"1,4,9"``; pieces may be mixed."""
    out: list[int] = []
    for piece in s.split(","):
        piece = piece.strip()
        try:
            if ".." in piece:
                lo, hi = (int(x) for x in piece.split(".."))
                if hi < lo:
                    raise UsageError(f"empty range {piece!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(piece))
        except ValueError:
            raise UsageError(f"bad integer range {piece!r}") from None
    return out


def parse_rational_range(s: str) -> list[Fraction]:
    """Comma list of rationals; ``lo..hi:step`` expands inclusively."""
    out: list[Fraction] = []
    for piece in s.split(","):
        piece = piece.strip()
        try:
            if ".." in piece:
                span, _, step = piece.partition(":")
                lo, hi = (as_fraction(x) for x in span.split(".."))
                step = as_fraction(step) if step else Fraction(1)
                if step <= 0 or hi < lo:
                    raise UsageError(f"bad rational range {piece!r}")
                x = lo
                while x <= hi:
                    out.append(x)
                    x += step
            else:
                out.append(as_fraction(piece))
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, UsageError):
                raise
            raise UsageError(f"bad rational {piece!r}") from None
    return out


def _payoffs_from(args) -> PDPayoffs:
    return PDPayoffs(args.a, args.b, args.c)


def _graph_from(args) -> nw.DelayGraph:
    if getattr(args, "load", None):
        if getattr(args, "topology", None):
            raise UsageError("give exactly one of --topology and --load")
        return nw.load_edge_list(args.load)
    if not getattr(args, "topology", None):
        raise UsageError("give exactly one of --topology and --load")
    if args.n is None:
        raise UsageError("--topology needs --n")
    return nw.generate(args.topology, args.n, args.delay, m_attach=args.ba_m, seed=args.seed)


def _deviators(spec: str, n: int):
    kind, _, arg = spec.partition(":")
    if kind == "none" and not arg:
        return (NoDeviation(),)
    if kind not in ("omniscient", "go") or not arg:
        raise UsageError(f"--deviator must be none, omniscient:<t|all> or go:<loc|all>, got {spec!r}")
    if arg == "all":
        return deviator_family(kind, n)
    try:
        k = int(arg)
    except ValueError:
        raise UsageError(f"bad deviator argument {arg!r}") from None
    return (Omniscient(k),) if kind == "omniscient" else (GoMessage(k),)


def _perm_source(spec: str):
    if spec == "exhaustive":
        return Exhaustive()
    kind, _, k = spec.partition(":")
    if kind == "sample":
        try:
            return int(k)
        except ValueError:
            pass
    raise UsageError(f"--perms must be exhaustive or sample:<k>, got {spec!r}")


# -- output ----------------------------------------------------------------------


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_row(report, alpha: Fraction | None = None) -> list:
    d = report.to_dict()
    row = []
    for col in REPORT_COLUMNS:
        v = d[col]
        row.append(("true" if v else "false") if isinstance(v, bool) else v)
        if col == "tau" and alpha is not None:
            row.append(exact(alpha))
    row.extend(d["decimal"][col] for col in DECIMAL_COLUMNS)
    return row


def _report_header(with_alpha: bool = False) -> list[str]:
    head = list(REPORT_COLUMNS)
    if with_alpha:
        head.insert(head.index("tau") + 1, "alpha")
    return head + [f"{col}_decimal" for col in DECIMAL_COLUMNS]


# -- commands --------------------------------------------------------------------


def cmd_analyze(args) -> int:
    if args.n < 1 or args.tau < 0:
        raise UsageError("need n >= 1 and tau >= 0")
    report = check_sustainability(args.n, args.tau, _payoffs_from(args))
    if args.format == "csv":
        text = _csv([_report_row(report)], _report_header())
    else:
        text = _json(report.to_dict())
    _emit(text, args.out)
    return EXIT_OK


def _distance_histogram(g: nw.DelayGraph) -> dict[str, int]:
    d = g.delays.dist
    iu = np.triu_indices(g.node_count, k=1)
    values, counts = np.unique(d[iu], return_counts=True)
    return {str(int(v)): int(k) for v, k in zip(values, counts)}


def _graph_summary(g: nw.DelayGraph) -> dict:
    return {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "diameter": nw.diameter(g),
        "distance_histogram": _distance_histogram(g),
    }


def cmd_graph(args) -> int:
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    if args.seeds > 1:
        if args.topology != "barabasi_albert" or not args.stats:
            raise UsageError("--seeds > 1 applies to --topology barabasi_albert with --stats")
        base = args.seed if args.seed is not None else 0
        seeds = [base + i for i in range(args.seeds)]
        diams = []
        for s in seeds:
            g = nw.barabasi_albert(args.n, args.ba_m, s, args.delay)
            diams.append(nw.diameter(g))
        mean = Fraction(sum(diams), len(diams))
        out = {
            "topology": args.topology,
            "nodes": args.n,
            "m_attach": args.ba_m,
            "delay": args.delay,
            "seeds": seeds,
            "diameters": diams,
            "mean_diameter": exact(mean),
            "mean_diameter_decimal": approx(mean),
            "mean_diameter_per_node": exact(mean / args.n),
            "mean_diameter_per_node_decimal": approx(mean / args.n),
        }
        if args.format == "csv":
            rows = [[s, d] for s, d in zip(seeds, diams)]
            _emit(_csv(rows, ["seed", "diameter"]), args.out)
        else:
            _emit(_json(out), args.out)
        return EXIT_OK

    g = _graph_from(args)
    if not args.stats:
        _emit(nw.format_edge_list(g), args.out)
        return EXIT_OK
    summary = _graph_summary(g)
    if args.format == "csv":
        rows = [[d, k] for d, k in summary["distance_histogram"].items()]
        head = f"# nodes {summary['nodes']} edges {summary['edges']} diameter {summary['diameter']}\n"
        _emit(head + _csv(rows, ["distance", "pairs"]), args.out)
    else:
        _emit(_json(summary), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = _graph_from(args)
    p = _payoffs_from(args)
    n = g.node_count
    configs = _deviators(args.deviator, n)

    if args.perms is None:
        if len(configs) != 1:
            raise UsageError("':all' deviator families need --perms")
        order = Schedule(tuple(parse_int_range(args.schedule))) if args.schedule else Schedule.identity(n)
        result = run(g, p, order, configs[0], args.deviating_player)
        if args.trace:
            text = result.to_json() + "\n" if args.trace.endswith(".json") else result.to_csv()
            _emit(text, args.trace)
        if args.format == "csv":
            _emit(result.to_csv(), args.out)
        else:
            body = {
                "nodes": n,
                "diameter": nw.diameter(g),
                "schedule": list(order.order),
                "deviator": str(configs[0]),
                "deviating_player": args.deviating_player,
                "totals": [exact(x) for x in result.totals],
                "totals_decimal": [approx(x) for x in result.totals],
                "alarm_log": result.alarm_log.to_dict() if result.alarm_log else None,
                "go_log": result.go_log.to_dict() if result.go_log else None,
            }
            _emit(_json(body), args.out)
        return EXIT_OK

    if args.trace or args.schedule:
        raise UsageError("--trace and --schedule apply to single runs, not --perms")
    source = _perm_source(args.perms)
    if not isinstance(source, Exhaustive):
        source = Sample(source, args.seed if args.seed is not None else 0)
    orders = schedules(n, source)
    expected = tally_outcomes(g, configs, orders, args.deviating_player).price(p)
    dev = args.deviating_player - 1
    if args.format == "csv":
        rows = [
            [str(cfg), exact(a1), exact(a2), approx(a1), approx(a2)]
            for cfg, (a1, a2) in zip(expected.configs, expected.averages)
        ]
        _emit(_csv(rows, ["deviator", "avg_p1", "avg_p2", "avg_p1_decimal", "avg_p2_decimal"]), args.out)
    else:
        body = {
            "nodes": n,
            "diameter": nw.diameter(g),
            "perms": args.perms,
            "seed": args.seed if isinstance(source, Sample) else None,
            **expected.to_dict(),
            "deviator_mean": exact(expected.mean[dev]),
            "deviator_mean_decimal": approx(expected.mean[dev]),
        }
        _emit(_json(body), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    ns = parse_int_range(args.n)
    if any(n < 1 for n in ns):
        raise UsageError("every n must be >= 1")
    modes = sum(x is not None and x is not False for x in (args.tau, args.alpha, args.tau_all or None))
    if modes != 1:
        raise UsageError("give exactly one of --tau, --alpha, --tau-all")
    triples = [
        (a, b, c)
        for a in parse_rational_range(args.a)
        for b in parse_rational_range(args.b)
        for c in parse_rational_range(args.c)
    ]
    payoffs = [PDPayoffs(*t) for t in triples]

    rows = []
    with_alpha = args.alpha is not None
    if with_alpha:
        alphas = parse_rational_range(args.alpha)
        if any(not 0 < al < 1 for al in alphas):
            raise UsageError("alpha values must lie strictly between 0 and 1")
    for n in sorted(set(ns)):
        if with_alpha:
            params = [(round(al * n), al) for al in sorted(set(alphas))]
        elif args.tau_all:
            params = [(t, None) for t in range(n)]
        else:
            taus = parse_int_range(args.tau)
            if any(t < 0 for t in taus):
                raise UsageError("every tau must be >= 0")
            params = [(t, None) for t in sorted(set(taus))]
        for tau, al in params:
            for p in payoffs:
                rows.append(_report_row(check_sustainability(n, tau, p), al))

    header = _report_header(with_alpha)
    if args.format == "csv":
        _emit(_csv(rows, header), args.out)
    else:
        _emit(_json([dict(zip(header, r)) for r in rows]), args.out)
    return EXIT_OK


def _uniform_distance(g: nw.DelayGraph) -> bool:
    d = g.delays.dist
    off = d[~np.eye(g.node_count, dtype=bool)]
    return off.size == 0 or bool(np.all(off == off[0]))


def cmd_verify(args) -> int:
    if args.suite == "vt":
        triples = [_payoffs_from(args)]
        if args.trials:
            rng = np.random.default_rng(args.seed if args.seed is not None else 0)
            triples.extend(random_payoffs(rng) for _ in range(args.trials))
        checks = []
        for p in triples:
            rep = verify_vt_on_uniform_graph(args.n, args.delta, p)
            tag = f"({exact(p.a)},{exact(p.b)},{exact(p.c)}) "
            checks.extend(Check(tag + ch.name, ch.passed, ch.lhs, ch.rhs, ch.detail) for ch in rep.checks)
        report = VerificationReport(
            {"suite": "vt", "n": args.n, "delta": args.delta,
             "payoffs": [[exact(p.a), exact(p.b), exact(p.c)] for p in triples]},
            tuple(checks),
        )
    elif args.suite == "boundary":
        report = verify_theorem_boundary(args.n, args.tau, args.a, args.c)
    else:
        if args.topology or args.load:
            g = _graph_from(args)
        else:
            g = nw.complete(args.n, args.delta)
        p = _payoffs_from(args)
        families = ["omniscient", "go"] if args.family == "both" else [args.family]
        results = {fam: best_deviation_search(g, p, fam) for fam in families}
        checks = []
        if "go" in results and "omniscient" in results:
            go, om = results["go"].best_value, results["omniscient"].best_value
            checks.append(Check("go best <= omniscient best", go <= om, go, om))
        if "omniscient" in results and _uniform_distance(g) and g.node_count >= 2:
            tau = nw.diameter(g)
            if tau <= g.node_count - 1:
                bound = cooperation_bound(g.node_count, tau, p.a, p.c)
                best = results["omniscient"].best_value
                lhs_sign = (best > results["omniscient"].n_c) - (best < results["omniscient"].n_c)
                rhs_sign = (p.b > bound) - (p.b < bound)
                checks.append(Check("sign(best - n*c) == sign(b - bound)", lhs_sign == rhs_sign,
                                    best - results["omniscient"].n_c, p.b - bound))
        report = VerificationReport(
            {
                "suite": "search",
                "nodes": g.node_count,
                "diameter": nw.diameter(g),
                "a": exact(p.a), "b": exact(p.b), "c": exact(p.c),
                "profitable": any(r.profitable for r in results.values()),
                "results": {fam: r.to_dict() for fam, r in results.items()},
            },
            tuple(checks),
        )
    _emit(_json(report.to_dict()), args.out)
    return EXIT_OK if report.all_passed else EXIT_INTERNAL


# -- parser ----------------------------------------------------------------------


def _add_graph_flags(sp, n_required: bool = False) -> None:
    sp.add_argument("--topology", choices=nw.TOPOLOGY_NAMES)
    sp.add_argument("--load", metavar="FILE", help="edge list: 'u v delay' per line")
    sp.add_argument("--n", type=int, required=n_required)
    sp.add_argument("--delay", type=int, default=1)
    sp.add_argument("--ba-m", type=int, default=2, dest="ba_m")


def _add_payoff_flags(sp, defaults=(None, None, None)) -> None:
    for name, default in zip("abc", defaults):
        sp.add_argument(f"--{name}", type=_rational, required=default is None, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netcoop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="cooperation bound and sustainability verdict")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tau", type=int, required=True)
    _add_payoff_flags(sp)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("graph", help="generate, load or summarize a delay graph")
    _add_graph_flags(sp)
    sp.add_argument("--seed", type=_seed)
    sp.add_argument("--seeds", type=int, default=1, help="barabasi_albert: average over this many seeds")
    sp.add_argument("--stats", action="store_true")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("simulate", help="run the engine on one order or average over orders")
    _add_graph_flags(sp)
    _add_payoff_flags(sp)
    sp.add_argument("--deviator", default="none")
    sp.add_argument("--deviating-player", type=int, choices=[1, 2], default=1, dest="deviating_player")
    sp.add_argument("--perms", help="exhaustive | sample:<k>")
    sp.add_argument("--schedule", help="activation order for a single run, e.g. 2,0,1")
    sp.add_argument("--seed", type=_seed)
    sp.add_argument("--trace", metavar="PATH", help="per-round trace; .json for JSON, CSV otherwise")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="tabulate the bound over parameter ranges")
    sp.add_argument("--n", required=True, help="e.g. 2..10 or 100,1000")
    sp.add_argument("--tau", help="integer range")
    sp.add_argument("--alpha", help="rationals in (0,1), e.g. 0.1..0.9:0.1; tau = round(alpha n)")
    sp.add_argument("--tau-all", action="store_true", dest="tau_all", help="tau = 0..n-1")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--format", choices=["json", "csv"], default="csv")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="brute-force oracle checks")
    sp.add_argument("--suite", choices=["vt", "boundary", "search"], required=True)
    _add_graph_flags(sp)
    sp.add_argument("--delta", type=int, default=1)
    sp.add_argument("--tau", type=int, default=0)
    _add_payoff_flags(sp, defaults=(Fraction(1), Fraction(3), Fraction(2)))
    sp.add_argument("--family", choices=["omniscient", "go", "both"], default="omniscient")
    sp.add_argument("--trials", type=int, default=0, help="vt: extra random payoff triples")
    sp.add_argument("--seed", type=_seed)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.n is None:
        parser.error("verify needs --n")
    try:
        return args.func(args)
    except TooManyPermutations as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
