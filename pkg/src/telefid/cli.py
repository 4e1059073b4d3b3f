"""Command-line interface.

Examples:
  telefid analyze --family werner --params p0=0.9
  telefid analyze --input state.json --emit-canonical
  telefid verify --family pure --params b2=0.25 --n 1000000 --seed 7
  telefid sweep --family pure --range 0:0.5 --steps 51 --out pure.csv
  telefid twirl --family bell_diagonal --params p0=0.7,p1=0.3,p2=0,p3=0 --n 10000 --seed 1

Exit codes: 0 success / PASS, 1 verification FAIL, 2 input error, 3 unphysical state.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .canonical import canonicalize, verify_canonical
from .errors import InvalidParameter, InvalidState, NotAState, StateFileError
from .figures import classify
from .simulator import bilateral_twirl, monte_carlo_stats
from .state import from_family
from .stateio import load_state, matrix_to_json
from .sweep import SweepSpec, rows_to_csv, sweep_rows

log = logging.getLogger("telefid")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNPHYSICAL = 0, 1, 2, 3
CERTIFY_MIN_N = 1000


class InputError(Exception):
    pass


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    params = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputError(f"bad --params item {item!r}; expected key=value")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"parameter {key.strip()!r} is not a number: {value!r}") from None
    return params


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(lo), float(hi)
    except ValueError:
        raise InputError(f"bad --range {text!r}; expected LO:HI") from None


def _load(args):
    if args.input and args.family:
        raise InputError("give either --input or --family, not both")
    if args.input:
        return load_state(args.input)
    if args.family:
        return from_family(args.family, _parse_params(args.params))
    raise InputError("a state is required: use --input PATH or --family NAME --params k=v,...")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_analyze(args) -> int:
    rho = _load(args)
    doc = classify(rho).to_dict()
    if args.emit_canonical:
        cf = canonicalize(rho)
        check = verify_canonical(cf)
        doc["canonical"] = {
            "u1": matrix_to_json(cf.u1),
            "u2": matrix_to_json(cf.u2),
            "diag": [float(f"{x:.15g}") for x in cf.diag],
            "eigenvalues_T": [[float(f"{z.real:.15g}"), float(f"{z.imag:.15g}")] for z in cf.eigenvalues],
            "max_offdiag": check.max_offdiag,
            "sign_pattern_ok": check.sign_pattern_ok,
        }
    _emit(_json(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    rho = _load(args)
    if args.n < 2:
        raise InputError("--n must be >= 2")
    if args.n < CERTIFY_MIN_N:
        print(f"warning: n={args.n} < {CERTIFY_MIN_N}, stderr too large to certify", file=sys.stderr)
    rep = classify(rho)
    cf = canonicalize(rho)
    log.info("canonical diagonal %s, running %d samples", cf.diag, args.n)
    stats = monte_carlo_stats(cf.varrho, args.n, args.seed)
    zm, zs = stats.z_scores(rep.max_fidelity, rep.fidelity_deviation)
    ok = stats.agrees_with(rep.max_fidelity, rep.fidelity_deviation, k=args.k)
    lines = [
        f"samples         {stats.n_samples}",
        f"seed            {stats.seed}",
        f"mean  mc={stats.mean_fidelity:.12f}  closed={rep.max_fidelity:.12f}  "
        f"stderr={stats.stderr_mean:.3e}  z={zm:+.3f}",
        f"std   mc={stats.std_fidelity:.12f}  closed={rep.fidelity_deviation:.12f}  "
        f"stderr={stats.stderr_std:.3e}  z={zs:+.3f}",
        "PASS" if ok else "FAIL",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    if not args.family:
        raise InputError("sweep needs --family")
    lo, hi = _parse_range(args.range)
    spec = SweepSpec(args.family, lo, hi, args.steps, _parse_params(args.params))
    _emit(rows_to_csv(sweep_rows(spec)), args.out)
    return EXIT_OK


def cmd_twirl(args) -> int:
    rho = _load(args)
    if args.n < 1:
        raise InputError("--n must be >= 1")
    before = classify(rho)
    after = classify(bilateral_twirl(rho, args.n, args.seed))
    spread_before = before.singular_values[0] - before.singular_values[2]
    spread_after = after.singular_values[0] - after.singular_values[2]
    doc = {
        "n": args.n,
        "seed": args.seed,
        "before": before.to_dict(),
        "after": after.to_dict(),
        "spread_before": float(f"{spread_before:.15g}"),
        "spread_after": float(f"{spread_after:.15g}"),
        "spread_change": float(f"{spread_after - spread_before:.15g}"),
    }
    _emit(_json(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="telefid", description="Two-qubit teleportation fidelity and fidelity deviation.")
    sub = ap.add_subparsers(dest="command", required=True)

    def state_args(p):
        p.add_argument("--input", metavar="PATH", help="JSON state file")
        p.add_argument("--family", metavar="NAME", help="state family name")
        p.add_argument("--params", metavar="k=v,...", help="family parameters")
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = sub.add_parser("analyze", help="closed-form report for one state")
    state_args(p)
    p.add_argument("--emit-canonical", action="store_true", help="include U1, U2 and the canonical diagonal")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="Monte Carlo check of the closed forms")
    state_args(p)
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=float, default=4.0, help="acceptance threshold in standard errors")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV sweep over a family parameter")
    p.add_argument("--family", metavar="NAME", required=True)
    p.add_argument("--params", metavar="k=v,...", help="extra weights (bell_diagonal: p1,p2,p3 ratios)")
    p.add_argument("--range", metavar="LO:HI", required=True)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("twirl", help="random bilateral twirl, before/after reports")
    state_args(p)
    p.add_argument("--n", type=int, default=10**4)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_twirl)
    return ap


def main(argv=None) -> int:
    level = os.environ.get("TELEPORT_LOG", "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotAState as exc:
        print(f"error: unphysical state: smallest eigenvalue {exc.min_eigenvalue:.6e}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except (InputError, StateFileError, InvalidParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidState as exc:
        print(f"error: unphysical state: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL


if __name__ == "__main__":
    raise SystemExit(main())
