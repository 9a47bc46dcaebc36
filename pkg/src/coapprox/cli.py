"""Command-line front-end.

Every subcommand accepts ``--json`` (emit the response model as one JSON
line) and ``--step-budget`` (forcing steps allowed for the whole run).
Handlers are the same functions the HTTP service calls, so the two fronts
cannot drift apart.

Exit codes: 0 success (regex match: accept; equidist: pass), 1 negative
verdict (reject / not equal / law failures / equidist fail), 2 errors,
budget exhaustion in sieve, or a non-convergent equidist bracket.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .cotrie import UnknownSymbol
from .order import DEFAULT_STEP_LIMIT, BudgetExhausted
from .regex import ParseError
from .service import (
    BracketNotConverged,
    EquidistRequest,
    RegexEquivRequest,
    RegexLawsRequest,
    RegexMatchRequest,
    SampleRequest,
    SieveRequest,
    WpRequest,
    run_equidist,
    run_regex_equiv,
    run_regex_laws,
    run_regex_match,
    run_sample,
    run_sieve,
    run_wp,
)


def _bool(b: Optional[bool]) -> str:
    return "none" if b is None else ("true" if b else "false")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="emit the report as one JSON line"
    )
    common.add_argument(
        "--step-budget",
        type=int,
        default=DEFAULT_STEP_LIMIT,
        metavar="B",
        help=f"forcing steps allowed for the run (default {DEFAULT_STEP_LIMIT})",
    )

    parser = argparse.ArgumentParser(
        prog="coapprox",
        description="Fueled evaluation of lazy streams, tries, and samplers.",
    )
    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser(
        "sieve", parents=[common], help="list primes and verify the prefix"
    )
    p.add_argument("--count", type=int, required=True, metavar="N")

    rx = sub.add_parser("regex", help="regular expression commands")
    rxsub = rx.add_subparsers(dest="regex_cmd")

    p = rxsub.add_parser("match", parents=[common], help="membership test")
    p.add_argument("pattern")
    p.add_argument("text")
    p.add_argument("--alphabet", default="ab")

    p = rxsub.add_parser(
        "equiv", parents=[common], help="depth-bounded equivalence"
    )
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--alphabet", default="ab")

    p = rxsub.add_parser(
        "laws", parents=[common], help="Kleene-algebra axiom audit"
    )
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", default="ab")

    p = sub.add_parser(
        "wp", parents=[common], help="expectation bracket at a fuel"
    )
    p.add_argument("--dist", required=True, metavar="KIND:PARAM")
    p.add_argument("--event", required=True, metavar="true|false|k=N")
    p.add_argument("--fuel", type=int, required=True)
    p.add_argument("--eps", default=None, metavar="Q")

    p = sub.add_parser("sample", parents=[common], help="seeded sampling")
    p.add_argument("--dist", required=True, metavar="KIND:PARAM")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser(
        "equidist",
        parents=[common],
        help="compare empirical frequency with the wp/wlp bracket",
    )
    p.add_argument("--dist", required=True, metavar="KIND:PARAM")
    p.add_argument("--event", required=True, metavar="true|false|k=N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", default="1/100", metavar="X")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


# --- text renderers ---------------------------------------------------------


def _render_sieve(resp) -> str:
    lines = [" ".join(str(p) for p in resp.primes)]
    if resp.bound is not None:
        lines.append(
            f"bound={resp.bound} sound={_bool(resp.sound)} "
            f"complete={_bool(resp.complete)} sorted={_bool(resp.sorted)} "
            f"nodup={_bool(resp.nodup)} productive_to={resp.productive_to} "
            f"exhausted={_bool(resp.exhausted)}"
        )
    if resp.exhausted:
        lines.append(
            f"exhausted: produced {len(resp.primes)} of {resp.count} outputs"
        )
    return "\n".join(lines)


def _render_match(resp) -> str:
    return "accept" if resp.accept else "reject"


def _render_equiv(resp) -> str:
    if resp.equal:
        return f"equal up to depth {resp.depth}"
    return f'counterexample: "{resp.counterexample}"'


def _render_laws(resp) -> str:
    lines = []
    for ax in resp.axioms:
        lines.append(f"{ax.name}: {ax.checked} checked, {len(ax.failures)} failed")
        for f in ax.failures[:5]:
            lines.append(f'  trial {f.trial}: {f.lhs} vs {f.rhs} on "{f.word}"')
    oi = resp.order_identity
    lines.append(
        f"order identity over {oi.trials} containments: "
        f"a+b=b matched {oi.matches_a_plus_b_eq_b}, "
        f"a+b=a matched {oi.matches_a_plus_b_eq_a}"
    )
    lines.append(f"total failures: {resp.total_failures}")
    return "\n".join(lines)


def _render_wp(resp) -> str:
    lines = [f"wp lower: {resp.wp_lower}", f"wlp upper: {resp.wlp_upper}"]
    if resp.eps is not None:
        if resp.converged:
            lines.append(f"eps {resp.eps}: converged at fuel {resp.converged_at_fuel}")
        else:
            lines.append(f"eps {resp.eps}: not converged within fuel {resp.fuel}")
    return "\n".join(lines)


def _fmt_value(v) -> str:
    if v is None:
        return "_"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _render_sample(resp) -> str:
    head = " ".join(_fmt_value(v) for v in resp.values[:1000])
    tail = " ..." if resp.n > 1000 else ""
    stats = (
        f"n={resp.n} diverged={resp.n_diverged} "
        f"exhausted={resp.n_exhausted} bits={resp.total_bits}"
    )
    return head + tail + "\n" + stats


def _render_equidist(resp) -> str:
    return "\n".join(
        [
            f"n={resp.n_samples} diverged={resp.n_diverged}",
            f"empirical={resp.empirical_freq}",
            f"bracket=[{resp.wp_lower}, {resp.wlp_upper}] tol={resp.tolerance}",
            "PASS" if resp.passed else "FAIL",
        ]
    )


# --- command drivers --------------------------------------------------------


def _emit(resp, as_json: bool, render) -> None:
    if as_json:
        print(resp.model_dump_json(by_alias=True))
    else:
        print(render(resp))


def _cmd_sieve(args) -> int:
    resp = run_sieve(
        SieveRequest(count=args.count, step_budget=args.step_budget)
    )
    _emit(resp, args.json, _render_sieve)
    return 2 if resp.exhausted else 0


def _cmd_regex_match(args) -> int:
    resp = run_regex_match(
        RegexMatchRequest(
            pattern=args.pattern,
            text=args.text,
            alphabet=args.alphabet,
            step_budget=args.step_budget,
        )
    )
    _emit(resp, args.json, _render_match)
    return 0 if resp.accept else 1


def _cmd_regex_equiv(args) -> int:
    resp = run_regex_equiv(
        RegexEquivRequest(
            left=args.left,
            right=args.right,
            depth=args.depth,
            alphabet=args.alphabet,
            step_budget=args.step_budget,
        )
    )
    _emit(resp, args.json, _render_equiv)
    return 0 if resp.equal else 1


def _cmd_regex_laws(args) -> int:
    resp = run_regex_laws(
        RegexLawsRequest(
            depth=args.depth,
            trials=args.trials,
            seed=args.seed,
            alphabet=args.alphabet,
            step_budget=args.step_budget,
        )
    )
    _emit(resp, args.json, _render_laws)
    return 0 if resp.total_failures == 0 else 1


def _cmd_wp(args) -> int:
    resp = run_wp(
        WpRequest(
            dist=args.dist,
            event=args.event,
            fuel=args.fuel,
            eps=args.eps,
            step_budget=args.step_budget,
        )
    )
    _emit(resp, args.json, _render_wp)
    return 0


def _cmd_sample(args) -> int:
    resp = run_sample(
        SampleRequest(
            dist=args.dist,
            n=args.n,
            seed=args.seed,
            step_budget=args.step_budget,
        )
    )
    _emit(resp, args.json, _render_sample)
    return 0


def _cmd_equidist(args) -> int:
    resp = run_equidist(
        EquidistRequest(
            dist=args.dist,
            event=args.event,
            n=args.n,
            seed=args.seed,
            tol=args.tol,
            step_budget=args.step_budget,
        )
    )
    _emit(resp, args.json, _render_equidist)
    return 0 if resp.passed else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.cmd == "regex" and args.regex_cmd is None:
        print("usage: coapprox regex {match,equiv,laws} ...", file=sys.stderr)
        return 2

    driver = {
        "sieve": _cmd_sieve,
        ("regex", "match"): _cmd_regex_match,
        ("regex", "equiv"): _cmd_regex_equiv,
        ("regex", "laws"): _cmd_regex_laws,
        "wp": _cmd_wp,
        "sample": _cmd_sample,
        "equidist": _cmd_equidist,
        "serve": _cmd_serve,
    }[args.cmd if args.cmd != "regex" else ("regex", args.regex_cmd)]

    try:
        return driver(args)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(p) for p in first.get("loc", ()))
        print(f"error: {loc}: {first.get('msg', 'invalid value')}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnknownSymbol as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BracketNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
