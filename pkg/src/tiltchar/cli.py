"""Command-line front end.

Subcommands: ``expand`` emits one coefficient table (quantum, modular, or
relative), ``verify`` runs an identity check over a weight range and
reports findings, ``xtable`` dumps quantum multiplicity rows.  All output
is deterministic: weights serialize in sorted order with canonical JSON
formatting.

Exit codes: 0 success / all identities hold, 1 an identity check found a
violation, 2 configuration or data errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import digits, tilting
from .charring import CharacterExpansion
from .klengine import (
    KLEngine,
    LengthBoundExceeded,
    MultiplicityTable,
    TableValidationError,
    WallWeight,
)
from .rootdata import RootDataError, RootSystem, weight_add, weight_scale
from .tilting import (
    CharacterTable,
    CharacterUnavailable,
    OracleValidationError,
    TiltingContext,
)

COEFF_KINDS = ("quantum", "modular", "relative")


class ConfigError(ValueError):
    pass


def _parse_weight(text: str, rank: int):
    try:
        coords = tuple(int(part) for part in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise ConfigError(f"bad weight {text!r}: {exc}") from exc
    if len(coords) != rank:
        raise ConfigError(f"weight {text!r} has {len(coords)} coordinates, rank is {rank}")
    return coords


def _load_context(args) -> TiltingContext:
    rs = RootSystem(args.type)
    if not tilting.is_prime(args.p):
        raise ConfigError(f"p must be prime, got {args.p}")
    quantum = None
    modular = None
    for path in args.box_file or ():
        with open(path, "r", encoding="utf-8") as fh:
            table = CharacterTable.from_payload(json.load(fh), rs)
        if table.p != args.p:
            raise ConfigError(f"character file {path} has p={table.p}, expected {args.p}")
        if table.flavor == "quantum":
            quantum = table
        else:
            modular = table
    x_table = None
    if args.x_file:
        with open(args.x_file, "r", encoding="utf-8") as fh:
            x_table = MultiplicityTable.from_payload(json.load(fh), rs)
        if x_table.p != args.p:
            raise ConfigError(f"multiplicity file has p={x_table.p}, expected {args.p}")
    engine = KLEngine(rs, length_bound=args.length_bound)
    return TiltingContext(
        rs,
        args.p,
        quantum_table=quantum,
        modular_table=modular,
        engine=engine,
        x_table=x_table,
        length_bound=args.length_bound,
    )


def _weight_key(w) -> str:
    return "(" + ",".join(str(c) for c in w) + ")"


def _expansion_values(expansion: CharacterExpansion) -> dict:
    return {_weight_key(mu): c for mu, c in expansion.coefficients}


def _emit_expansion(args, zeta, expansion: CharacterExpansion, out) -> None:
    if args.format == "json":
        doc = {
            "type": args.type,
            "p": args.p,
            "zeta": list(zeta),
            "coeffs": args.coeffs,
            "basis": expansion.basis,
            "values": _expansion_values(expansion),
        }
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["zeta", "mu", "coefficient"])
        for mu, c in expansion.coefficients:
            writer.writerow([" ".join(map(str, zeta)), " ".join(map(str, mu)), c])
    else:  # tex
        base = "S^0" if expansion.basis == "weyl" else "S^1"
        terms = " + ".join(
            f"{c}\\,{base}_{{{','.join(map(str, mu))}}}"
            for mu, c in expansion.coefficients
        )
        out.write(f"S_{{{','.join(map(str, zeta))}}} = {terms or '0'}\n")


def cmd_expand(args, out) -> int:
    ctx = _load_context(args)
    zeta = _parse_weight(args.zeta, ctx.rs.rank)
    if not ctx.rs.is_strictly_dominant(zeta):
        raise ConfigError(f"zeta {zeta} must be strictly dominant")
    if args.coeffs == "quantum":
        expansion = CharacterExpansion.from_dict("weyl", ctx.row(zeta))
    elif args.coeffs == "modular":
        if digits.strict_sector_level(zeta, args.p) is None:
            raise ConfigError(
                f"zeta {zeta} has no strictly dominant top base-{args.p} digit; "
                "the closed formula does not apply"
            )
        expansion = tilting.digit_formula_coefficients(zeta, ctx)
    else:
        expansion = tilting.relative_coefficients(zeta, ctx)
    _emit_expansion(args, zeta, expansion, out)
    return 0


def _sector_range(rs, p, max_coord):
    out = []
    k = 0
    while p**k <= max_coord:
        for zeta in digits.iter_strict_sector(rs.rank, p, k):
            if all(c <= max_coord for c in zeta):
                out.append(zeta)
        k += 1
    return sorted(set(out))


def _strictly_dominant_range(rs, max_coord):
    from itertools import product

    return [w for w in product(range(1, max_coord + 1), repeat=rs.rank)]


def _check_range(name, ctx, args):
    rs, p = ctx.rs, ctx.p
    if name in ("modular-product", "quantum-product", "modular-tower", "tower", "congruence"):
        zetas = _sector_range(rs, p, args.max)
    elif name == "quantum-split":
        zetas = [
            z
            for z in _strictly_dominant_range(rs, args.max)
            if rs.is_strictly_dominant(digits.digit_tail(z, 1, p))
        ]
    elif name == "box-agreement":
        zetas = [
            weight_add(nu, weight_scale(p, rs.rho))
            for nu in digits.iter_restricted(rs.rank, p)
        ]
    elif name == "restricted-agreement":
        zetas = list(digits.iter_restricted(rs.rank, p, strict=True))
    elif name == "congruence-all":
        table = ctx.modular_table
        if table is None or table.kind != "loaded":
            return None  # inert: no data
        zetas = sorted(weight_add(lam, rs.rho) for lam in table.characters)
    else:
        raise ConfigError(f"unknown check {name!r}")
    if args.sample is not None and args.sample < len(zetas):
        import random

        zetas = sorted(random.Random(args.seed).sample(zetas, args.sample))
    return zetas


def cmd_verify(args, out) -> int:
    ctx = _load_context(args)
    zetas = _check_range(args.check, ctx, args)
    if zetas is None:
        doc = {
            "check": args.check,
            "type": args.type,
            "p": args.p,
            "status": "inert: no data",
            "failures": [],
        }
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return 0
    report = tilting.run_check(args.check, ctx, zetas)
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 1 if report["status"] == "fail" else 0


def cmd_xtable(args, out) -> int:
    ctx = _load_context(args)
    rs, p = ctx.rs, ctx.p
    rows = {}
    errors = []
    skipped = []
    for zeta in _strictly_dominant_range(rs, args.max):
        try:
            rows[zeta] = ctx.row(zeta)
        except LengthBoundExceeded as exc:
            errors.append({"zeta": list(zeta), "reason": str(exc)})
        except (CharacterUnavailable, WallWeight) as exc:
            skipped.append({"zeta": list(zeta), "reason": str(exc)})
    table = MultiplicityTable(rs.cartan_type, p, rows)
    payload = table.to_payload()
    if errors:
        payload["errors"] = errors
    if skipped:
        payload["skipped"] = skipped
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltchar",
        description="Exact tilting-character tables and identity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p_):
        p_.add_argument("--type", required=True, help="Cartan type label (A1, A2, B2, G2)")
        p_.add_argument("--p", type=int, required=True, help="prime p >= 2")
        p_.add_argument("--length-bound", type=int, default=128,
                        help="resource guard for the KL recursion")
        p_.add_argument("--box-file", action="append", default=[],
                        help="character-table JSON file (flavor read from the file); repeatable")
        p_.add_argument("--x-file", default=None,
                        help="multiplicity-table JSON file used instead of the KL engine")
        p_.add_argument("--format", choices=("json", "csv", "tex"), default="json")

    p_expand = sub.add_parser("expand", help="emit one coefficient table")
    common(p_expand)
    p_expand.add_argument("--zeta", required=True,
                          help="strictly dominant weight, comma-separated coordinates")
    p_expand.add_argument("--coeffs", choices=COEFF_KINDS, default="modular",
                          help="quantum: Weyl-basis row of the quantum character; "
                               "modular: closed digit formula; "
                               "relative: modular character in the quantum basis")

    p_verify = sub.add_parser("verify", help="run an identity check over a range")
    common(p_verify)
    p_verify.add_argument("--check", required=True, choices=tilting.CHECK_NAMES)
    p_verify.add_argument("--max", type=int, default=0,
                          help="coordinate bound for the weight range")
    p_verify.add_argument("--sample", type=int, default=None,
                          help="randomly subsample the range to this many weights")
    p_verify.add_argument("--seed", type=int, default=0)

    p_xtable = sub.add_parser("xtable", help="dump quantum multiplicity rows")
    common(p_xtable)
    p_xtable.add_argument("--max", type=int, required=True,
                          help="coordinate bound for row indices")
    p_xtable.add_argument("--out", default=None, help="write the table to this path")
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"expand": cmd_expand, "verify": cmd_verify, "xtable": cmd_xtable}
    try:
        return handlers[args.command](args, out)
    except (
        ConfigError,
        OracleValidationError,
        TableValidationError,
        CharacterUnavailable,
        WallWeight,
        LengthBoundExceeded,
        RootDataError,
        ValueError,
        OSError,
    ) as exc:
        error = {"error": {"kind": type(exc).__name__, "detail": str(exc)}}
        sys.stderr.write(json.dumps(error, sort_keys=True) + "\n")
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
