"""monodromy: command-line entry point.

    python monodromy.py nr 4
    python monodromy.py bounds --ell 3 --s 1 --r 2 --n 3
    python monodromy.py classify fixtures/semistable_d2.json --k 1 --r 2 --n 7
    python monodromy.py verify newlinlem
    python monodromy.py gen example62 --ell 5 --a 1 --out rep.json

Reports go to stdout (or --out); logging goes to stderr so JSON output stays
byte-stable. Exit codes: 0 computed (any verdict), 1 internal consistency
failure, 2 input error, 3 resource cap, 4 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import Settings, get_settings
from cyclotomic import (
    exceptional_difference,
    n_prime_set,
    n_set,
    root_minus_one_membership,
    scan_witnesses,
    valuation_threshold,
)
from errors import DimensionCapExceeded, MonodromyError, PreconditionError
from families import (
    DEFAULT_ELL,
    FAMILIES,
    gen_briefly_unstable_family,
    gen_example62,
    gen_example62_sign,
    gen_semistable_family,
)
from inertia import (
    InertiaRep,
    canonical_json,
    check_raynaud,
    classify,
    dump_representation,
    load_representation,
    reduce_representation,
)
from verification import SUITES, run_suites

_log = logging.getLogger("monodromy.cli")

EXIT_OK = 0
EXIT_SUITE_FAILURE = 4

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


# ── Output ─────────────────────────────────────────────────────────

def write_text_atomic(path: Path, text: str):
    """Write text next to its destination, then rename over it."""
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, str(path))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(args: argparse.Namespace, payload: Dict[str, Any], text: str):
    body = canonical_json(payload) if args.format == "json" else text.rstrip("\n") + "\n"
    if args.out:
        write_text_atomic(Path(args.out), body)
        _log.info("wrote %s", args.out)
    else:
        sys.stdout.write(body)


def _configure_logging(level: str):
    logger = logging.getLogger("monodromy")
    if not any(getattr(h, "_monodromy_cli", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._monodromy_cli = True  # type: ignore[attr-defined]
        logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


# ── Subcommands ────────────────────────────────────────────────────

def cmd_nr(args: argparse.Namespace, settings: Settings) -> int:
    r = args.r
    full, sharp, diff = n_set(r), n_prime_set(r), exceptional_difference(r)
    payload = {
        "r": r,
        "N": list(full),
        "N_prime": list(sharp),
        "difference": list(diff),
    }
    text = "\n".join([
        f"N({r}) = {full}",
        f"N'({r}) = {sharp}",
        f"N({r}) \\ N'({r}) = {diff}",
    ])
    _emit(args, payload, text)
    return EXIT_OK


def _bounds_threshold(args: argparse.Namespace) -> Dict[str, Any]:
    r = valuation_threshold(args.ell, args.s, args.m)
    return {"ell": args.ell, "s": args.s, "m": args.m, "threshold": r}


def _bounds_membership(args: argparse.Namespace) -> Dict[str, Any]:
    holds = root_minus_one_membership(args.ell, args.s, args.r, args.n)
    out: Dict[str, Any] = {"ell": args.ell, "s": args.s, "r": args.r, "n": args.n, "member": holds}
    # the closed-form threshold only speaks about n = ell^m
    m, rest = 0, args.n
    while rest % args.ell == 0:
        rest //= args.ell
        m += 1
    if rest == 1 and m >= 1:
        out["threshold"] = valuation_threshold(args.ell, args.s, m)
    return out


def _bounds_scan(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    witnesses = scan_witnesses(args.r, args.n, args.s_max, settings.degree_cap)
    return {
        "r": args.r,
        "n": args.n,
        "degree_cap": settings.degree_cap,
        "s_max": args.s_max,
        "witnesses": [[ell, s] for ell, s in witnesses],
        "first_witness": list(witnesses[0]) if witnesses else None,
        "in_N": args.n in n_set(args.r),
        "in_N_prime": args.n in n_prime_set(args.r),
    }


def cmd_bounds(args: argparse.Namespace, settings: Settings) -> int:
    if args.ell is not None and args.s is not None and args.m is not None:
        payload = _bounds_threshold(args)
        text = (f"(zeta_{args.ell}^{args.s} - 1)^r is divisible by {args.ell}^{args.m} "
                f"exactly for r >= {payload['threshold']}")
    elif args.ell is not None and args.s is not None and args.r is not None and args.n is not None:
        payload = _bounds_membership(args)
        verb = "lies" if payload["member"] else "does not lie"
        text = f"(zeta_{args.ell}^{args.s} - 1)^{args.r} {verb} in {args.n} Z[zeta]"
        if "threshold" in payload:
            text += f"\nthreshold for n = {args.n}: r >= {payload['threshold']}"
    elif args.r is not None and args.n is not None:
        payload = _bounds_scan(args, settings)
        first = payload["first_witness"]
        lines = [f"r = {args.r}, n = {args.n}: {len(payload['witnesses'])} witnesses "
                 f"(degree cap {settings.degree_cap})"]
        if first is None:
            lines.append("no root of unity of prime-power order defeats the criterion in range")
        else:
            lines.append(f"first witness: zeta of order {first[0]}^{first[1]}")
        lines.append(f"n in N({args.r}): {payload['in_N']}")
        lines.append(f"n in N'({args.r}): {payload['in_N_prime']}")
        text = "\n".join(lines)
    else:
        raise PreconditionError(
            "bounds needs --ell --s --m (threshold), --ell --s --r --n (membership) or --r --n (scan)"
        )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    rep = load_representation(args.file, settings.max_dim)
    if args.r == 1:
        result = check_raynaud(rep, args.k, args.n, settings.closure_cap, settings.word_bound)
    else:
        result = classify(rep, args.k, args.r, args.n, settings.closure_cap, settings.word_bound)
    payload = result.to_json()
    payload["input"] = {"label": rep.label, "dim": rep.dim, "mode": rep.mode.to_json()}
    payload["params"] = {"k": args.k, "r": args.r, "n": args.n}
    header = f"{rep.label or args.file} (dim {rep.dim}, {rep.mode}), k={args.k} r={args.r} n={args.n}"
    _emit(args, payload, header + "\n" + result.to_text())
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    def on_suite(idx: int, total: int, name: str):
        _log.info("[%d/%d] running %s", idx, total, name)

    reports = run_suites(args.suites, seed=settings.seed, on_suite=on_suite)
    ok = all(r.ok for r in reports)
    payload = {"suites": [r.to_json() for r in reports], "ok": ok}
    text = "\n".join(r.to_text() for r in reports) + f"\n{'all suites passed' if ok else 'FAILURES'}"
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_SUITE_FAILURE


def _generate(args: argparse.Namespace, settings: Settings) -> InertiaRep:
    family = args.family
    if family in ("semistable", "briefly-unstable"):
        d = 2 if args.d is None else args.d
        if 2 * d > settings.max_dim:
            raise DimensionCapExceeded(
                f"2d = {2 * d} exceeds the configured cap {settings.max_dim} (raise MONODROMY_MAX_DIM to allow it)"
            )
        ell = DEFAULT_ELL if args.adic_prime is None else args.adic_prime
        if family == "semistable":
            return gen_semistable_family(d, settings.seed, conjugate=args.conjugate, ell=ell)
        return gen_briefly_unstable_family(d, settings.seed, conjugate=args.conjugate, ell=ell,
                                           wild_sign=args.wild_sign)
    a = 1 if args.a is None else args.a
    twist = 2 if family == "example62-sign" or args.ell is None else args.ell - 1
    if 2 * a + twist > settings.max_dim:
        raise DimensionCapExceeded(
            f"dimension {2 * a + twist} exceeds the configured cap {settings.max_dim} (raise MONODROMY_MAX_DIM to allow it)"
        )
    if family == "example62":
        if args.ell is None:
            raise PreconditionError("example62 needs --ell (an odd prime)")
        return gen_example62(args.ell, a)
    return gen_example62_sign(a)


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    rep = _generate(args, settings)
    if args.mode == "residue":
        if args.modulus is None:
            raise PreconditionError("--mode residue needs --modulus N")
        rep = reduce_representation(rep, args.modulus)
    elif args.modulus is not None:
        raise PreconditionError("--modulus only applies with --mode residue")
    text = dump_representation(rep)
    if args.out:
        write_text_atomic(Path(args.out), text)
        _log.info("wrote %s (%s, dim %d)", args.out, rep.label, rep.dim)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ── Argument parsing ───────────────────────────────────────────────

def _add_output_flags(p: argparse.ArgumentParser, formats: bool = True):
    if formats:
        p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monodromy",
        description="Matrix-level semistability criteria: exceptional moduli, bounds, classification, verification.",
    )
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"), default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nr", help="print N(r) and N'(r)")
    p.add_argument("r", type=int)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_nr)

    p = sub.add_parser("bounds", help="cyclotomic membership, thresholds and sharpness scans")
    p.add_argument("--ell", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--degree-cap", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("classify", help="classify a representation file")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=None, help="closure cap for residue mode")
    p.add_argument("--word-bound", type=int, default=None, help="tau exponent bound for integer mode")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suites", nargs="+", metavar="SUITE", help=f"one of: all, {', '.join(SUITES)}")
    p.add_argument("--seed", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", help="write a representation file for a family")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--ell", type=int, default=None, help="order of the twist for example62")
    p.add_argument("--adic-prime", type=int, default=None, help=f"ell of integer mode (default {DEFAULT_ELL})")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--conjugate", action="store_true", help="conjugate by a random symplectic matrix")
    p.add_argument("--wild-sign", action="store_true", help="briefly-unstable: put -I in the wild part")
    p.add_argument("--mode", choices=("integer", "residue"), default="integer")
    p.add_argument("--modulus", type=int, default=None)
    _add_output_flags(p, formats=False)
    p.set_defaults(handler=cmd_gen)
    return parser


_LIMIT_FLAGS = (("cap", "--cap"), ("word_bound", "--word-bound"), ("degree_cap", "--degree-cap"))


def _check_limits(args: argparse.Namespace):
    for attr, flag in _LIMIT_FLAGS:
        value = getattr(args, attr, None)
        if value is not None and value < 1:
            raise PreconditionError(f"{flag} must be a positive integer (got {value})")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = get_settings().with_overrides(
        log_level=args.log_level,
        seed=getattr(args, "seed", None),
        closure_cap=getattr(args, "cap", None),
        word_bound=getattr(args, "word_bound", None),
        degree_cap=getattr(args, "degree_cap", None),
    )
    _configure_logging(settings.log_level)
    _log.debug("settings: %s", settings)

    try:
        _check_limits(args)
        return args.handler(args, settings)
    except MonodromyError as e:
        print(f"error: {e}", file=sys.stderr)
        return getattr(e, "exit_code", 1)


if __name__ == "__main__":
    raise SystemExit(main())
