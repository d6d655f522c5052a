"""Command-line interface: dimension queries, special-effect reports,
cross-evaluator verification, and the regularity index.

Subcommands:
  dim       dimension of one system (formula / recursive / oracle / all)
  report    kc, epsilon and the special-effect classes grouped by dimension
  verify    side-by-side evaluator comparison for one instance or a grid
  regindex  regularity index, optionally checked over a degree window

Multiplicities accept exponent shorthand: -m 7,6^2,5^7.
Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 domain violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .castelnuovo import recursive_h0
from .formula import DimensionReport, dimension, ldim, planar_h0, regularity_index
from .oracle import OracleSizeError, SweepGrid, consistency_sweep, h0
from .systems import (
    LinearSystemSpec,
    epsilon_value,
    kc_value,
    normalize,
    system,
    vdim,
)


class DomainViolation(Exception):
    """Input is well-formed but outside the requested evaluator's domain."""


def parse_mults(text: str) -> tuple[int, ...]:
    """Parse a multiplicity list with exponent shorthand: "7,6^2,5^7"."""
    out: list[int] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise argparse.ArgumentTypeError(f"empty multiplicity in {text!r}")
        base, _, exp = token.partition("^")
        try:
            m = int(base)
            e = int(exp) if exp else 1
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad multiplicity token {token!r}")
        if e < 1:
            raise argparse.ArgumentTypeError(f"exponent must be >= 1 in {token!r}")
        out.extend([m] * e)
    return tuple(out)


def parse_oracle_mode(text: str) -> tuple[str, int]:
    """Parse --oracle: "exact", "modular", or "modular:N"."""
    mode, _, count = text.partition(":")
    if mode == "exact":
        if count:
            raise argparse.ArgumentTypeError("exact mode takes no trial count")
        return "exact", 1
    if mode == "modular":
        try:
            trials = int(count) if count else 3
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad trial count {count!r}")
        if trials < 1:
            raise argparse.ArgumentTypeError("trial count must be >= 1")
        return "modular", trials
    raise argparse.ArgumentTypeError(f"unknown oracle mode {text!r}")


def parse_grid(text: str) -> dict[str, tuple[int, int]]:
    """Parse --grid "n=2..3,d=0..6,s=5..9,m=1..4" into inclusive ranges."""
    ranges: dict[str, tuple[int, int]] = {}
    for part in text.split(","):
        key, _, span = part.partition("=")
        key = key.strip()
        if key not in ("n", "d", "s", "m") or not span:
            raise argparse.ArgumentTypeError(f"bad grid component {part!r}")
        lo, sep, hi = span.partition("..")
        try:
            lo_i = int(lo)
            hi_i = int(hi) if sep else lo_i
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid range {span!r}")
        if hi_i < lo_i:
            raise argparse.ArgumentTypeError(f"empty grid range {span!r}")
        ranges[key] = (lo_i, hi_i)
    missing = {"n", "d", "s", "m"} - set(ranges)
    if missing:
        raise argparse.ArgumentTypeError(
            f"grid must set n, d, s and m (missing {', '.join(sorted(missing))})"
        )
    return ranges


def _sys_label(sys: LinearSystemSpec) -> str:
    body = ",".join(str(m) for m in sys.mults) if sys.mults else "-"
    return f"L_{sys.n},{sys.d}({body})"


def _structured(
    sys: LinearSystemSpec,
    norm,
    dim_value: int | None,
    evaluator: str,
    report: DimensionReport | None,
    verdict: str,
) -> dict:
    """The one structured-output object shared by dim and report."""
    kc = kc_value(norm.n, norm.d, norm.mults) if norm.s >= norm.n + 3 else None
    eps = epsilon_value(norm.n, norm.d, norm.mults) if norm.s >= norm.n + 3 else None
    effects = []
    if report is not None:
        by_class = {
            (c.join.c, c.join.sigma, c.join.t): c for c in report.contributions
        }
        for join in report.special_effect_varieties:
            contrib = by_class.get((join.c, join.sigma, join.t))
            effects.append(
                {
                    "c": join.c,
                    "sigma": join.sigma,
                    "t": join.t,
                    "k": join.k,
                    "r": join.r,
                    "count": join.count,
                    "f": contrib.fvalue if contrib else 0,
                    "signed": contrib.signed_total if contrib else 0,
                }
            )
    return {
        "n": sys.n,
        "d": sys.d,
        "mults": list(sys.mults),
        "s": len(sys.mults),
        "normalized_mults": list(norm.mults),
        "kc": kc,
        "epsilon": eps,
        "vdim": vdim(norm),
        "dimension": dim_value,
        "evaluator": evaluator,
        "special_effects": effects,
        "trace": [step.as_dict() for step in norm.trace],
        "verdict": verdict,
    }


def _print_trace(norm) -> None:
    if not norm.trace:
        print("trace: input already normalized")
        return
    print("trace:")
    for step in norm.trace:
        kc_note = f" (kc {step.kc})" if step.kc is not None else ""
        print(f"  {step.action} point {step.point} mult {step.mult}{kc_note}")


def _evaluate(
    sys: LinearSystemSpec,
    norm,
    evaluator: str,
    oracle_mode: tuple[str, int],
    seed: int,
    cap_cells: int,
) -> tuple[int, str, DimensionReport | None]:
    """One evaluator's value for the system; returns (value, label, report)."""
    if evaluator == "auto":
        if norm.s <= norm.n + 2 or norm.n == 1:
            return recursive_h0(norm), "recursive", None
        rep = dimension(norm)
        return rep.dimension, "formula", rep
    if evaluator == "formula":
        if norm.s < norm.n + 3:
            raise DomainViolation(
                f"formula needs s >= n+3 after normalization;"
                f" {_sys_label(sys)} normalizes to {norm.s} points"
            )
        rep = dimension(norm)
        return rep.dimension, "formula", rep
    if evaluator == "recursive":
        return recursive_h0(norm), "recursive", None
    if evaluator == "oracle":
        mode, trials = oracle_mode
        res = h0(sys, mode=mode, seed=seed, trials=trials, cap_cells=cap_cells)
        return res.h0, f"oracle:{mode}", None
    raise ValueError(f"unknown evaluator {evaluator!r}")


def cmd_dim(args: argparse.Namespace) -> int:
    sys_ = system(args.n, args.d, args.mults)
    norm = normalize(sys_)

    if args.evaluators == "all":
        values: dict[str, int] = {}
        report = None
        for ev in ("formula", "recursive", "oracle"):
            try:
                value, label, rep = _evaluate(
                    sys_, norm, ev, args.oracle, args.seed, args.cap_cells
                )
            except DomainViolation:
                continue  # formula off-domain; recursive covers the instance
            values[label] = value
            if rep is not None:
                report = rep
        agree = len(set(values.values())) == 1
        dim_value = next(iter(values.values()))
        verdict = "agree" if agree else "disagree"
        evaluator = "all"
    else:
        dim_value, evaluator, report = _evaluate(
            sys_, norm, args.evaluators, args.oracle, args.seed, args.cap_cells
        )
        values = {evaluator: dim_value}
        verdict = "ok"

    if args.format == "structured":
        print(json.dumps(_structured(sys_, norm, dim_value, evaluator, report, verdict)))
        return 0 if verdict in ("ok", "agree") else 1

    vd = vdim(norm)
    expected = max(vd, 0)
    spc = dim_value - expected if dim_value > 0 else max(dim_value - vd, 0)
    print(_sys_label(sys_))
    for label, value in values.items():
        print(f"dimension {value}  [{label}]")
    print(f"vdim {vd}  expected {expected}  speciality {spc}")
    if norm.s >= norm.n + 3:
        print(
            f"normalized {_sys_label(norm)}  kc {kc_value(norm.n, norm.d, norm.mults)}"
            f"  epsilon {epsilon_value(norm.n, norm.d, norm.mults)}"
        )
    else:
        print(f"normalized {_sys_label(norm)}")
    _print_trace(norm)
    if verdict == "disagree":
        print("verdict: disagree")
        return 1
    return 0


_R_LABEL = {1: "curves", 2: "surfaces"}


def cmd_report(args: argparse.Namespace) -> int:
    sys_ = system(args.n, args.d, args.mults)
    norm = normalize(sys_)
    if norm.s < norm.n + 3:
        raise DomainViolation(
            f"report needs s >= n+3 after normalization; {_sys_label(sys_)}"
            f" normalizes to {norm.s} points"
        )
    rep = dimension(norm)

    if args.format == "structured":
        print(
            json.dumps(
                _structured(sys_, norm, rep.dimension, "formula", rep, "ok")
            )
        )
        return 0

    print(_sys_label(sys_))
    print(f"normalized {_sys_label(norm)}")
    print(f"kc {rep.kc}  epsilon {rep.epsilon}")
    effects = rep.special_effect_varieties
    if not effects:
        print("no special-effect varieties")
    else:
        by_class = {
            (c.join.c, c.join.sigma, c.join.t): c for c in rep.contributions
        }
        for r in sorted({j.r for j in effects}):
            print(f"{_R_LABEL.get(r, f'{r}-folds')} (r={r}):")
            for join in (j for j in effects if j.r == r):
                contrib = by_class.get((join.c, join.sigma, join.t))
                fval = contrib.fvalue if contrib else 0
                signed = contrib.signed_total if contrib else 0
                print(
                    f"  c={join.c} sigma={join.sigma} t={join.t} k={join.k}"
                    f" count={join.count} f={fval} signed={signed}"
                )
    print(f"dimension {rep.dimension}  vdim {rep.vdim}  speciality {rep.speciality}")
    return 0


def _verify_instance(args: argparse.Namespace) -> int:
    sys_ = system(args.n, args.d, args.mults)
    norm = normalize(sys_)
    values: dict[str, int] = {}
    notes: list[str] = []

    mode, trials = args.oracle
    oracle_value = None
    try:
        oracle_value = h0(
            sys_, mode=mode, seed=args.seed, trials=trials, cap_cells=args.cap_cells
        ).h0
        values[f"oracle:{mode}"] = oracle_value
    except OracleSizeError:
        notes.append(f"oracle skipped: matrix exceeds --cap-cells {args.cap_cells}")

    if norm.s >= norm.n + 3:
        values["formula"] = dimension(norm).dimension
        if norm.mults != tuple(sorted((m for m in sys_.mults if m > 0), reverse=True)):
            notes.append("formula evaluated on the normalized system")
    values["recursive"] = recursive_h0(norm)
    if norm.n == 2 and norm.s >= 5:
        values["planar"] = planar_h0(norm)
    if len(sys_.mults) <= sys_.n + 2:
        values["ldim"] = ldim(sys_)

    if oracle_value is None:
        closed = [v for k, v in values.items()]
        verdict = "agree" if len(set(closed)) <= 1 else "disagree"
    elif oracle_value == 0:
        verdict = "agree"
        notes.append("empty system: closed evaluators are not compared")
    else:
        verdict = (
            "agree"
            if all(v == oracle_value for v in values.values())
            else "disagree"
        )

    if args.format == "structured":
        print(json.dumps({"system": _sys_label(sys_), "values": values,
                          "notes": notes, "verdict": verdict}))
    else:
        print(_sys_label(sys_))
        width = max(len(k) for k in values)
        for key, value in values.items():
            print(f"  {key:<{width}}  {value}")
        for note in notes:
            print(f"  note: {note}")
        print(f"verdict: {verdict}")
    return 0 if verdict == "agree" else 1


def _verify_grid(args: argparse.Namespace) -> int:
    ranges = args.grid
    grid = SweepGrid(
        n=ranges["n"], d=ranges["d"], s=ranges["s"], m=ranges["m"],
        cap_cells=args.cap_cells,
    )
    mode, trials = args.oracle
    records = consistency_sweep(grid, seed=args.seed, oracle_mode=mode, trials=trials)
    failures = 0
    for rec in records:
        if rec["verdict"] not in ("agree", "skip-size"):
            failures += 1
        print(json.dumps(rec))
    print(
        f"sweep: {len(records)} instances, {failures} failures",
        file=sys.stderr,
    )
    return 1 if failures else 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.grid is not None:
        return _verify_grid(args)
    if args.n is None or args.d is None or args.mults is None:
        raise DomainViolation("verify needs either --grid or -n, -d and -m")
    return _verify_instance(args)


def cmd_regindex(args: argparse.Namespace) -> int:
    mults = tuple(m for m in args.mults if m > 0)
    if len(mults) < args.n + 3:
        raise DomainViolation(
            f"regindex needs s >= n+3 positive multiplicities, got {len(mults)}"
        )
    delta = regularity_index(args.n, mults)
    rows = []
    failures = 0
    if args.window is not None:
        for d in range(max(delta - 1, 0), delta + args.window + 1):
            sys_d = system(args.n, d, mults)
            norm = normalize(sys_d)
            value = recursive_h0(norm)
            vd = vdim(norm)
            expected = max(vd, 0)
            special = value != expected
            asserted = norm.mults == mults and value > 0
            ok = None
            if asserted:
                ok = special == (d < delta)
                if not ok:
                    failures += 1
            rows.append(
                {
                    "d": d,
                    "dimension": value,
                    "vdim": vd,
                    "special": special,
                    "asserted": asserted,
                    "ok": ok,
                }
            )

    if args.format == "structured":
        print(json.dumps({"n": args.n, "mults": list(mults), "delta": delta,
                          "window": rows}))
    else:
        print(f"regularity index {delta}")
        for row in rows:
            status = "special" if row["special"] else "non-special"
            suffix = ""
            if row["asserted"]:
                suffix = "  ok" if row["ok"] else "  MISMATCH"
            elif args.window is not None:
                suffix = "  (not asserted)"
            print(
                f"  d={row['d']}: dimension {row['dimension']} vdim {row['vdim']}"
                f" {status}{suffix}"
            )
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rncdim",
        description="Dimensions of linear systems through points on a"
        " rational normal curve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, need_d: bool = True) -> None:
        p.add_argument("-n", type=int, required=True, help="ambient dimension")
        if need_d:
            p.add_argument("-d", type=int, required=True, help="degree")
        p.add_argument(
            "-m",
            dest="mults",
            type=parse_mults,
            required=True,
            help="multiplicities, comma list with ^ shorthand: 7,6^2,5^7",
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--format", choices=("human", "structured"), default="human"
        )
        p.add_argument(
            "--cap-cells",
            type=int,
            default=2_000_000,
            help="largest rows*cols the exact oracle will attempt",
        )
        p.add_argument(
            "--oracle",
            type=parse_oracle_mode,
            default=("exact", 1),
            help="oracle mode: exact, modular, or modular:N",
        )

    p_dim = sub.add_parser("dim", help="dimension of one system")
    add_common(p_dim)
    p_dim.add_argument(
        "--evaluators",
        choices=("auto", "formula", "recursive", "oracle", "all"),
        default="auto",
    )
    p_dim.set_defaults(func=cmd_dim)

    p_report = sub.add_parser(
        "report", help="special-effect classes and contributions"
    )
    add_common(p_report)
    p_report.set_defaults(func=cmd_report)

    p_verify = sub.add_parser(
        "verify", help="compare evaluators on one instance or a grid"
    )
    p_verify.add_argument("-n", type=int)
    p_verify.add_argument("-d", type=int)
    p_verify.add_argument("-m", dest="mults", type=parse_mults)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--format", choices=("human", "structured"), default="human"
    )
    p_verify.add_argument("--cap-cells", type=int, default=2_000_000)
    p_verify.add_argument(
        "--oracle", type=parse_oracle_mode, default=("exact", 1)
    )
    p_verify.add_argument(
        "--grid",
        type=parse_grid,
        default=None,
        help='sweep grid, e.g. "n=2..3,d=0..6,s=5..9,m=1..4"',
    )
    p_verify.set_defaults(func=cmd_verify)

    p_reg = sub.add_parser("regindex", help="regularity index of a point set")
    add_common(p_reg, need_d=False)
    p_reg.add_argument(
        "--window",
        type=int,
        default=None,
        help="also check speciality for d in [delta-1, delta+window]",
    )
    p_reg.set_defaults(func=cmd_regindex)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
