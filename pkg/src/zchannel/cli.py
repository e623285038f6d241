"""Command-line front end.

Subcommands: construct, certify, sweep-bounds, sweep-capacity, cover, simulate.

Exit codes: 0 success, 2 invalid input, 3 output written but some rows
carry precondition failures or flags.  Every subcommand also accepts
``--config FILE`` (JSON object whose keys are the long option names with
dashes replaced by underscores); unknown keys are rejected and explicit
flags override the file.  The worker count for radius scans is read from
the ZCHANNEL_WORKERS environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds as B
from . import capacity as Cap
from .channel import ChannelParams, campaign
from .codes import Code, dumps_json, is_list_decodable, list_decoding_radius, load_code, to_fraction
from .constructions import BalancedParams, StackedParams, balanced_code, stacked_code, unique_block_code
from .covering import covering_converse_lower, sample_covering, single_center_coverage, verify_covering

EXIT_OK, EXIT_INVALID, EXIT_FLAGGED = 0, 2, 3


class CliError(ValueError):
    pass


# --- argument helpers ----------------------------------------------------------


def parse_grid(text: str | None, kind=float) -> list:
    """'a,b,c' or 'start:stop:num' (inclusive linspace).  Empty string -> []."""
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [kind(x) for x in text]
    text = str(text).strip()
    if not text:
        return []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"range grid must be start:stop:num, got {text!r}")
        start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        return [kind(x) for x in np.linspace(start, stop, num)]
    return [kind(x) for x in text.split(",")]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\r\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


# --- subcommands ---------------------------------------------------------------


def cmd_construct(a) -> int:
    kind = a.kind
    if kind == "balanced":
        if a.m is None or a.w is None:
            raise CliError("balanced construction needs --m and --w")
        code = balanced_code(BalancedParams(a.m, to_fraction(a.w)))
    elif kind == "block":
        if a.m is None or a.j is None:
            raise CliError("block construction needs --m and --j")
        code = unique_block_code(a.m, a.j)
    elif kind == "stacked":
        if a.m is None or a.j_range is None:
            raise CliError("stacked construction needs --m and --j-range")
        js = parse_grid(a.j_range, int)
        rep = None
        if a.replication:
            rep = {int(k): int(v) for k, v in json.loads(a.replication).items()}
        params = StackedParams(a.m, tuple(js), rep, seed=a.seed, L=a.L or 2,
                               max_length=a.max_length)
        code = stacked_code(params, a.mode)
    else:
        raise CliError(f"unknown construction kind {kind!r}")
    code.meta["seed"] = a.seed
    if a.radius_L:
        cert = list_decoding_radius(code, a.radius_L)
        code.meta["radius"] = {"L": a.radius_L, "value": cert.radius}
    _emit(dumps_json(code.to_json()), a.out)
    return EXIT_OK


def cmd_certify(a) -> int:
    if not a.code:
        raise CliError("certify needs a code file")
    code = load_code(a.code)
    L = a.L or 2
    if L > len(code):
        raise CliError(f"L={L} exceeds the code size {len(code)}")
    cert = list_decoding_radius(code, L)
    rec = {"n": code.n, "size": len(code), **cert.to_json()}
    if a.tau is not None:
        tau = to_fraction(a.tau)
        rec["tau"] = str(tau)
        rec["t"] = math.ceil(tau * code.n)
        rec["pass"] = is_list_decodable(code, L, tau)
    _emit(dumps_json(rec), a.out)
    return EXIT_OK


BOUND_HEADER = ["name", "inputs", "value", "preconditions", "flags"]


def _bound_rows(L: int, eps: float, n: int | None) -> list[B.BoundReport]:
    pp = B.plotkin_point(L)
    tau = pp.tau_L + eps
    reps = [
        B.cw_list_upper(L, pp.w_max, eps),
        B.augmented_weight_band_bound(L, pp.w_max, pp.w_max, tau),
        B.close_weights_bound(L, eps),
        B.general_upper_bound(L, eps),
    ]
    if L == 2 and n is not None:
        reps.append(B.unique_above_plotkin(n, eps))
    return reps


def cmd_sweep_bounds(a) -> int:
    Ls = parse_grid(a.L_grid, int) if a.L_grid is not None else [a.L or 2]
    eps_grid = parse_grid(a.eps)
    rows = []
    for L in Ls:
        for eps in eps_grid:
            for rep in _bound_rows(L, eps, a.n):
                rows.append(rep)
    flagged = any(not r.preconditions_met or r.flags for r in rows)
    if a.format == "json":
        recs = [{"name": r.name, "inputs": r.inputs, "value": r.value,
                 "preconditions_met": r.preconditions_met, "conditions": r.conditions,
                 "flags": r.flags} for r in rows]
        text = json.dumps(_json_safe(recs), sort_keys=True, indent=2) + "\n"
    else:
        text = _csv([r.to_row() for r in rows], BOUND_HEADER)
    _emit(text, a.out)
    return EXIT_FLAGGED if flagged else EXIT_OK


CAPACITY_HEADER = ["L", "w", "tau", "eb_upper", "rc_lower", "cld", "stochastic"]


def cmd_sweep_capacity(a) -> int:
    Ls = parse_grid(a.L_grid, int) if a.L_grid is not None else [a.L or 2]
    ws = parse_grid(a.w)
    taus = parse_grid(a.tau)
    rows, flagged = [], False
    for L in Ls:
        for w in ws:
            for tau in taus:
                row = {"L": L, "w": repr(w), "tau": repr(tau)}
                if not 0 < w < 1 or not 0 <= tau <= w:
                    flagged = True
                    row.update(eb_upper="", rc_lower="", cld="",
                               stochastic=repr(Cap.stochastic_capacity(w, tau)) if 0 <= w <= 1 and 0 <= tau <= 1 else "")
                else:
                    row.update(
                        eb_upper=repr(Cap.eb_upper_bound(L, w, tau).value),
                        rc_lower=repr(Cap.rc_lower_bound(L, w, tau)),
                        cld=repr(Cap.cld(w, tau)),
                        stochastic=repr(Cap.stochastic_capacity(w, tau)),
                    )
                rows.append(row)
    if a.format == "json":
        text = json.dumps(rows, sort_keys=True, indent=2) + "\n"
    else:
        text = _csv(rows, CAPACITY_HEADER)
    _emit(text, a.out)
    return EXIT_FLAGGED if flagged else EXIT_OK


def cmd_cover(a) -> int:
    for name in ("n", "w", "v", "a"):
        if getattr(a, name) is None:
            raise CliError(f"cover needs --{name}")
    n, w, v, aa = a.n, float(to_fraction(a.w)), float(to_fraction(a.v)), float(to_fraction(a.a))
    cov = sample_covering(n, w, v, aa, a.eps if a.eps is not None else 0.5, a.seed)
    complete, uncovered = verify_covering(cov)
    rec = {
        "n": n, "w": w, "v": v, "a": aa, "seed": a.seed,
        "size": len(cov), "I": cov.meta["I"], "eps": cov.meta["eps"],
        "complete": complete, "uncovered": len(uncovered),
        "single_center_coverage": single_center_coverage(n, w, v, aa),
        "converse_lower": covering_converse_lower(n, w, v, aa),
    }
    if a.code_out:
        Path(a.code_out).write_text(dumps_json(cov.to_code().to_json()), encoding="utf-8")
    _emit(dumps_json(rec), a.out)
    return EXIT_OK


def cmd_simulate(a) -> int:
    if not a.code:
        raise CliError("simulate needs a code file")
    code = load_code(a.code)
    L = a.L or 2
    if L > len(code):
        raise CliError(f"L={L} exceeds the code size {len(code)}")
    if a.tau is None:
        raise CliError("simulate needs --tau")
    p = ChannelParams(a.mode, to_fraction(a.tau), a.seed)
    rep = campaign(code, L, p, a.trials, a.strategy)
    _emit(dumps_json(rep), a.out)
    return EXIT_OK


def _json_safe(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


# --- parser --------------------------------------------------------------------

DEFAULTS = {"seed": 0, "format": "csv", "trials": 1000, "mode": "unique", "max_length": 200_000,
            "strategy": "greedy", "kind": "balanced"}
COMMAND_DEFAULTS = {"simulate": {"mode": "adversarial"}}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zchannel", description="Z-channel code toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with option values")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=["csv", "json"])

    sp = sub.add_parser("construct", help="build a code and write it as JSON")
    common(sp)
    sp.add_argument("--kind", choices=["balanced", "block", "stacked"])
    sp.add_argument("--m", type=int)
    sp.add_argument("--w")
    sp.add_argument("--j", type=int)
    sp.add_argument("--j-range", dest="j_range")
    sp.add_argument("--replication", help='JSON object {"j": copies}')
    sp.add_argument("--mode", choices=["unique", "list"])
    sp.add_argument("--L", type=int)
    sp.add_argument("--max-length", dest="max_length", type=int)
    sp.add_argument("--radius-L", dest="radius_L", type=int, help="also store tau_L in meta")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("certify", help="exact list-decoding radius of a code file")
    common(sp)
    sp.add_argument("code", nargs="?")
    sp.add_argument("--L", type=int)
    sp.add_argument("--tau")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("sweep-bounds", help="evaluate size bounds over an eps grid")
    common(sp)
    sp.add_argument("--L", type=int)
    sp.add_argument("--L-grid", dest="L_grid")
    sp.add_argument("--eps")
    sp.add_argument("--n", type=int, help="block length for the unique-decoding bound")
    sp.set_defaults(func=cmd_sweep_bounds)

    sp = sub.add_parser("sweep-capacity", help="rate bounds over a (w, tau) grid")
    common(sp)
    sp.add_argument("--L", type=int)
    sp.add_argument("--L-grid", dest="L_grid")
    sp.add_argument("--w")
    sp.add_argument("--tau")
    sp.set_defaults(func=cmd_sweep_capacity)

    sp = sub.add_parser("cover", help="sample and verify a type covering")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--w")
    sp.add_argument("--v")
    sp.add_argument("--a")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--code-out", dest="code_out")
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("simulate", help="run a decoding campaign on a code file")
    common(sp)
    sp.add_argument("code", nargs="?")
    sp.add_argument("--L", type=int)
    sp.add_argument("--tau")
    sp.add_argument("--mode", choices=["stochastic", "adversarial"])
    sp.add_argument("--strategy", choices=["greedy", "random", "witness"])
    sp.add_argument("--trials", type=int)
    sp.set_defaults(func=cmd_simulate)
    return p


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg = {}
    if args.config:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(cfg, dict):
            raise CliError("config file must hold a JSON object")
        known = set(vars(args)) - {"config", "func", "command"}
        unknown = set(cfg) - known
        if unknown:
            raise CliError(f"unknown config fields: {sorted(unknown)}")
    defaults = {**DEFAULTS, **COMMAND_DEFAULTS.get(args.command, {})}
    for key, value in vars(args).items():
        if value is None:
            if key in cfg:
                setattr(args, key, cfg[key])
            elif key in defaults:
                setattr(args, key, defaults[key])
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
