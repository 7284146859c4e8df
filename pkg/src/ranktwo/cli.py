"""Command-line front end.

Subcommands:

* ``tower``      build (or load) the field tower for q = p^h and describe it
* ``construct``  build a named spread set, with nuclei and classification
* ``survey``     one classification row per (parameter, twist exponent)
* ``check``      run one of the packaged claim drivers
* ``derive``     transpose or trace-dual a serialized spread set
* ``classify``   classify a serialized spread set
* ``cache``      manage the on-disk tower cache

Field elements cross this boundary as canonical integers: the code of an
element is its polynomial-coefficient vector over F_p read in base p, with
respect to the modulus echoed in every report's ``tower`` header.  Spread
sets therefore serialize as six 4-entry integer matrices plus that header,
and any report can be fed back into ``derive`` or ``classify``.

Exit codes: 0 success, 1 a claim driver ran and failed, 2 bad usage or
invalid parameters (emitted as a machine-readable error object).

Reports are deterministic: rerunning any command with the same flags and
seed produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import checks, families, report
from ._version import __version__
from .classify import classify as classify_linear_set
from .errors import ParameterError, RankTwoError
from .field import (
    FieldTower,
    cached_tower,
    default_cache_dir,
    get_tower,
    tower_cache_path,
)
from .spread import SpreadSet

TOOL = f"ranktwo {__version__}"

Q_CAP = 9

CONSTRUCT_FAMILIES = ("d-a", "d-ab", "f4a", "s1", "s2")
SURVEY_FAMILIES = ("d-a", "d-ab")
DERIVE_OPS = ("transpose", "translation-dual")


# ---------------------------------------------------------------- tower setup


def _resolve_tower(p: int, h: int, args) -> FieldTower:
    max_q = getattr(args, "max_q", Q_CAP)
    if max_q > Q_CAP:
        print(
            f"warning: order cap raised to q = {max_q}; expect long runtimes "
            "and large element tables",
            file=sys.stderr,
        )
    max_order = max(int(max_q), 3) ** 6
    cache_dir = getattr(args, "cache_dir", None)
    if cache_dir or os.environ.get("RANKTWO_CACHE"):
        return cached_tower(p, h, cache_dir, max_order=max_order)
    return get_tower(p, h, max_order=max_order)


def _tower_header(t: FieldTower) -> dict:
    return {"p": t.p, "h": t.h, "q": t.q, "modulus": list(t.modulus)}


# ------------------------------------------------------------------ subcommands


def _cmd_tower(args):
    t = _resolve_tower(args.p, args.h, args)
    path = tower_cache_path(args.p, args.h, args.cache_dir)
    payload = {
        "tower": _tower_header(t),
        "tool": TOOL,
        "seed": args.seed,
        "order": t.order,
        "generator": t.generator,
        "nonsquare": t.smallest_nonsquare(),
        "cache_path": path,
        "cached": os.path.exists(path),
    }
    return payload, 0


_PARAM_CACHE: dict = {}


def _valid_params(t: FieldTower, family: str) -> list:
    """Cached ascending list of admissible twist parameters for a family."""
    key = (t.p, t.h, family)
    if key not in _PARAM_CACHE:
        if family == "d-a":
            _PARAM_CACHE[key] = [int(a) for a in families.valid_d_a_params(t)]
        else:
            _PARAM_CACHE[key] = [int(b) for b in families.valid_d_ab_params(t)]
    return _PARAM_CACHE[key]


def _nonsquares(t: FieldTower) -> list:
    key = (t.p, t.h, "nonsquare")
    if key not in _PARAM_CACHE:
        _PARAM_CACHE[key] = [
            int(x) for x in t.members(1) if x != 0 and not t.is_square_q(int(x))
        ]
    return _PARAM_CACHE[key]


def _pick(flag: str, values: list, idx: int | None, code: int | None, what: str):
    """Resolve an element named either by list position or by exact code.

    Twist parameters and the scalar xi cross the command line as positions
    in a canonical ascending list (every position is constructible), with a
    ``--*-code`` escape hatch for naming the exact field element.
    """
    if idx is not None and code is not None:
        raise ParameterError(
            f"{flag}-conflict", f"give --{flag} or --{flag}-code, not both"
        )
    if code is not None:
        return int(code)
    if idx is None:
        raise ParameterError(f"{flag}-required", f"construct needs --{flag} (or --{flag}-code)")
    if not 0 <= idx < len(values):
        raise ParameterError(
            f"{flag}-range",
            f"--{flag} indexes the {len(values)} {what}, ascending by code; got {idx}",
        )
    return values[idx]


def _parse_xi(t: FieldTower, raw: str | None, code: int | None) -> int | None:
    if raw in (None, "auto") and code is None:
        return None
    idx = None
    if raw not in (None, "auto"):
        try:
            idx = int(raw)
        except ValueError:
            raise ParameterError("xi", f"--xi expects an integer position or 'auto', got {raw!r}")
    return _pick("xi", _nonsquares(t), idx, code, "nonsquares of F_q")


def _build_spread(t: FieldTower, args) -> SpreadSet:
    fam = args.family
    xi = _parse_xi(t, args.xi, args.xi_code) if fam in ("d-a", "d-ab") else None
    if fam == "d-a":
        a = _pick("a", _valid_params(t, fam), args.a, args.a_code, "valid twist parameters")
        return families.make_d_a(t, a, args.r, xi)
    if fam == "d-ab":
        if not _valid_params(t, fam):
            raise ParameterError(
                "family-empty",
                f"the double-twist family is empty at q = {t.q}: every nonzero b "
                "has subfield norm 1 or -1",
            )
        b = _pick("b", _valid_params(t, fam), args.b, args.b_code, "valid twist parameters")
        return families.make_d_ab(t, b, args.r, xi)
    if fam == "f4a":
        return families.make_f4a(t, args.sigma)
    if fam == "s1":
        return families.make_s1(t, args.index)
    if fam == "s2":
        return families.make_s2(t)
    raise ParameterError("family", f"unknown family {fam!r}")


def _echo_params(t: FieldTower, meta: dict) -> dict:
    """Copy a parameter block, adding the list positions CLI flags accept."""
    params = dict(meta)
    fam = params.get("family")
    if fam in SURVEY_FAMILIES:
        key = "a" if fam == "d-a" else "b"
        code = params.get(key)
        valid = _valid_params(t, fam)
        if code in valid:
            params[f"{key}_index"] = valid.index(code)
        xi = params.get("xi")
        nonsq = _nonsquares(t)
        if xi in nonsq:
            params["xi_index"] = nonsq.index(xi)
    return params


def _spread_payload(t: FieldTower, s: SpreadSet, seed: int) -> dict:
    L = s.linear_set()
    rep = classify_linear_set(L, spread=s)
    return {
        "tower": _tower_header(t),
        "tool": TOOL,
        "seed": seed,
        "family": s.meta.get("family"),
        "params": _echo_params(t, s.meta),
        "matrices": [list(m) for m in s.mats],
        "nuclei": list(s.nuclei().as_tuple()),
        "classification": rep.as_dict(),
    }


def _cmd_construct(args):
    t = _resolve_tower(args.p, args.h, args)
    s = _build_spread(t, args)
    return _spread_payload(t, s, args.seed), 0


# --------------------------------------------------------------------- survey


def _survey_row(t: FieldTower, family: str, param: int, r: int) -> dict:
    key = "a" if family == "d-a" else "b"
    valid = _valid_params(t, family)
    row = {key: param, f"{key}_index": valid.index(param) if param in valid else None,
           "r": r, "norm": t.norm(param)}
    if family == "d-ab":
        row["norm_sq"] = t.norm(t.mul(param, param))
    try:
        if family == "d-a":
            s = families.make_d_a(t, param, r)
        else:
            s = families.make_d_ab(t, param, r)
        rep = classify_linear_set(s.linear_set(), spread=s)
    except RankTwoError as exc:
        row["valid"] = False
        row["error"] = {"code": exc.code, "message": str(exc)}
        return row
    row["valid"] = True
    row["family"] = rep.family
    row["signature"] = list(rep.signature())
    if family == "d-a" and rep.family == "F5":
        row["lambda_bar"] = families.lambda_bar(t, row["norm"])
    return row


def _survey_task(task):
    p, h, max_order, family, param, r = task
    t = get_tower(p, h, max_order=max_order)
    return _survey_row(t, family, param, r)


def _cmd_survey(args):
    t = _resolve_tower(args.p, args.h, args)
    r_values = sorted(set(args.r))
    if not r_values or any(r not in (1, 2) for r in r_values):
        raise ParameterError("r-domain", f"--r takes values in {{1, 2}}, got {args.r}")
    params = [int(x) for x in t.members(3)[1:]]

    tasks = [(r, a) for r in r_values for a in params]
    if args.workers > 1:
        max_order = max(getattr(args, "max_q", Q_CAP), 3) ** 6
        work = [(t.p, t.h, max_order, args.family, a, r) for r, a in tasks]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_survey_task, work, chunksize=16))
    else:
        rows = [_survey_row(t, args.family, a, r) for r, a in tasks]

    valid = [row for row in rows if row["valid"]]
    signatures = sorted(
        {tuple(row["signature"]) for row in valid},
        key=lambda sig: tuple(str(x) for x in sig),
    )
    summary = {
        "rows": len(rows),
        "valid": len(valid),
        "errors": len(rows) - len(valid),
        "signatures": [list(sig) for sig in signatures],
    }
    if args.family == "d-a":
        reps = set()
        for row in valid:
            lb = row.get("lambda_bar")
            if lb is not None:
                lam2 = t.mul(lb, lb)
                reps.add(min(t.frobenius_p(lam2, k) for k in range(t.n)))
        summary["orbit_reps"] = sorted(reps)
        summary["orbit_count"] = len(reps)

    payload = {
        "tower": _tower_header(t),
        "tool": TOOL,
        "seed": args.seed,
        "family": args.family,
        "r_values": r_values,
        "rows": rows,
        "summary": summary,
    }
    return payload, 0


# ---------------------------------------------------------------------- check


def _cmd_check(args):
    t = _resolve_tower(args.p, args.h, args)
    sample = None if args.sample == 0 else args.sample
    rep = checks.verify_claim(
        args.claim,
        t,
        r_values=tuple(args.r),
        sample=sample,
        trials=args.trials,
        seed=args.seed,
    )
    payload = {"tower": _tower_header(t), **rep}
    return payload, (0 if rep["summary"]["pass"] else 1)


# ----------------------------------------------------- serialized spread input


def _read_spread(args):
    path = args.infile
    if path == "-":
        raw = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ParameterError("input-missing", f"cannot read {path}: {exc}")
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParameterError("input-json", f"input is not valid JSON: {exc}")
    if not isinstance(obj, dict) or "tower" not in obj or "matrices" not in obj:
        raise ParameterError(
            "input-shape", "expected a JSON object with 'tower' and 'matrices'"
        )
    hdr = obj["tower"]
    try:
        p, h = int(hdr["p"]), int(hdr["h"])
    except (TypeError, KeyError, ValueError):
        raise ParameterError("input-tower", "the 'tower' header needs integer p and h")
    t = _resolve_tower(p, h, args)
    if "modulus" in hdr:
        try:
            modulus = [int(c) for c in hdr["modulus"]]
        except (TypeError, ValueError):
            raise ParameterError("input-modulus", "the 'modulus' echo must be a list of integers")
        if modulus != list(t.modulus):
            raise ParameterError(
                "input-modulus",
                "the input was encoded over a different modulus than the canonical "
                f"one for p = {p}, h = {h}",
            )
    mats = obj["matrices"]
    if not isinstance(mats, list) or len(mats) != 6:
        raise ParameterError("input-matrices", "expected a list of 6 matrices")
    meta = obj.get("params")
    s = SpreadSet(t, mats, dict(meta) if isinstance(meta, dict) else None)
    s.verify_no_zero_divisors()
    return t, s


def _cmd_derive(args):
    t, s = _read_spread(args)
    if args.op == "transpose":
        d = s.transpose()
    else:
        d = s.translation_dual()
    rep_in = classify_linear_set(s.linear_set(), spread=s)
    rep_out = classify_linear_set(d.linear_set(), spread=d)
    payload = {
        "tower": _tower_header(t),
        "tool": TOOL,
        "seed": args.seed,
        "operation": args.op,
        "params": _echo_params(t, d.meta),
        "matrices": [list(m) for m in d.mats],
        "nuclei": list(d.nuclei().as_tuple()),
        "classification": rep_out.as_dict(),
        "input": {
            "params": _echo_params(t, s.meta),
            "nuclei": list(s.nuclei().as_tuple()),
            "classification": rep_in.as_dict(),
        },
        "signature_change": {
            "before": list(rep_in.signature()),
            "after": list(rep_out.signature()),
            "changed": rep_in.signature() != rep_out.signature(),
        },
    }
    return payload, 0


def _cmd_classify(args):
    t, s = _read_spread(args)
    rep = classify_linear_set(s.linear_set(), spread=s)
    payload = {
        "tower": _tower_header(t),
        "tool": TOOL,
        "seed": args.seed,
        "params": _echo_params(t, s.meta),
        "nuclei": list(s.nuclei().as_tuple()),
        "classification": rep.as_dict(),
    }
    return payload, 0


# ---------------------------------------------------------------------- cache


def _cache_entries(cache_dir: str) -> list:
    entries = []
    if os.path.isdir(cache_dir):
        for name in sorted(os.listdir(cache_dir)):
            if name.startswith("tower_") and name.endswith(".sfzt"):
                full = os.path.join(cache_dir, name)
                entries.append({"file": name, "bytes": os.path.getsize(full)})
    return entries


def _cmd_cache(args):
    cache_dir = args.cache_dir or default_cache_dir()
    payload = {"tool": TOOL, "cache_dir": cache_dir, "action": args.action}
    if args.action == "dir":
        pass
    elif args.action == "list":
        payload["entries"] = _cache_entries(cache_dir)
    elif args.action == "build":
        if args.p is None:
            raise ParameterError("p-required", "cache build needs --p (and optionally --h)")
        t = cached_tower(args.p, args.h, cache_dir, max_order=max(args.max_q, 3) ** 6)
        payload["built"] = {
            "p": t.p,
            "h": t.h,
            "q": t.q,
            "path": tower_cache_path(t.p, t.h, cache_dir),
        }
    elif args.action == "clear":
        removed = []
        for entry in _cache_entries(cache_dir):
            name = entry["file"]
            if args.p is not None and not name.startswith(f"tower_p{args.p}_h{args.h}"):
                continue
            os.remove(os.path.join(cache_dir, name))
            removed.append(name)
        payload["removed"] = removed
    return payload, 0


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=report.FORMATS, default="json",
                        help="output format (default json)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write the report to a file instead of stdout")
    common.add_argument("--seed", type=int, default=0,
                        help="sampling seed, echoed in every report")
    common.add_argument("--cache-dir", default=None, metavar="DIR",
                        help="tower cache directory (or set RANKTWO_CACHE)")
    common.add_argument("--max-q", type=int, default=Q_CAP, metavar="Q",
                        help=f"order cap (default {Q_CAP}; raising it warns)")

    field_args = argparse.ArgumentParser(add_help=False)
    field_args.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    field_args.add_argument("--h", type=int, default=1, help="subfield degree, q = p^h (default 1)")

    parser = argparse.ArgumentParser(
        prog="ranktwo",
        description="Construct, classify, and cross-check rank-two semifield "
                    "spread sets of order q^6 and their projective linear sets.",
    )
    parser.add_argument("--version", action="version", version=TOOL)
    sub = parser.add_subparsers(dest="command", required=True)

    p_tower = sub.add_parser("tower", parents=[common, field_args],
                             help="build or load a field tower and describe it")
    p_tower.set_defaults(func=_cmd_tower)

    p_con = sub.add_parser("construct", parents=[common, field_args],
                           help="build a named spread set with nuclei and classification")
    p_con.add_argument("family", choices=CONSTRUCT_FAMILIES)
    p_con.add_argument("--r", type=int, choices=(1, 2), default=1,
                       help="twist exponent (default 1)")
    p_con.add_argument("--a", type=int, default=None,
                       help="d-a twist parameter, as a position in the ascending "
                            "list of valid parameters")
    p_con.add_argument("--a-code", type=int, default=None,
                       help="d-a twist parameter as an exact canonical code")
    p_con.add_argument("--b", type=int, default=None,
                       help="d-ab twist parameter, as a position in the ascending "
                            "list of valid parameters")
    p_con.add_argument("--b-code", type=int, default=None,
                       help="d-ab twist parameter as an exact canonical code")
    p_con.add_argument("--xi", default="auto",
                       help="nonsquare scalar as a position in the ascending list "
                            "of nonsquares of F_q, or 'auto' for the smallest")
    p_con.add_argument("--xi-code", type=int, default=None,
                       help="nonsquare scalar as an exact canonical code")
    p_con.add_argument("--sigma", type=int, default=None,
                       help="f4a automorphism exponent (default: smallest valid)")
    p_con.add_argument("--index", type=int, default=0,
                       help="s1 norm-target index, 0 or 1 (default 0)")
    p_con.set_defaults(func=_cmd_construct)

    p_sur = sub.add_parser("survey", parents=[common, field_args],
                           help="classify every parameter of a family, one row each")
    p_sur.add_argument("family", choices=SURVEY_FAMILIES)
    p_sur.add_argument("--r", type=int, nargs="+", default=[1, 2],
                       help="twist exponents to sweep (default: 1 2)")
    p_sur.add_argument("--workers", type=int, default=1,
                       help="process pool size (default 1)")
    p_sur.set_defaults(func=_cmd_survey)

    p_chk = sub.add_parser("check", parents=[common, field_args],
                           help="run a claim driver; exit 0 iff every sub-check passes")
    p_chk.add_argument("claim", choices=checks.CLAIMS)
    p_chk.add_argument("--r", type=int, nargs="+", default=[1, 2],
                       help="twist exponents to sweep (default: 1 2)")
    p_chk.add_argument("--trials", type=int, default=20,
                       help="randomized roundtrip count for claim 2.1 (default 20)")
    p_chk.add_argument("--sample", type=int, default=2,
                       help="members per family for claim 3.4; 0 means all (default 2)")
    p_chk.set_defaults(func=_cmd_check)

    p_der = sub.add_parser("derive", parents=[common],
                           help="apply transpose or translation-dual to a spread set")
    p_der.add_argument("op", choices=DERIVE_OPS)
    p_der.add_argument("--in", dest="infile", required=True, metavar="PATH",
                       help="spread-set JSON (a construct/derive report), '-' for stdin")
    p_der.set_defaults(func=_cmd_derive)

    p_cls = sub.add_parser("classify", parents=[common],
                           help="classify a serialized spread set")
    p_cls.add_argument("--in", dest="infile", required=True, metavar="PATH",
                       help="spread-set JSON (a construct/derive report), '-' for stdin")
    p_cls.set_defaults(func=_cmd_classify)

    p_cache = sub.add_parser("cache", parents=[common],
                             help="inspect, build, or clear the on-disk tower cache")
    p_cache.add_argument("action", choices=("dir", "list", "build", "clear"))
    p_cache.add_argument("--p", type=int, default=None)
    p_cache.add_argument("--h", type=int, default=1)
    p_cache.set_defaults(func=_cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except RankTwoError as exc:
        err = {"tool": TOOL, "error": {"code": exc.code, "message": str(exc)}}
        report.write_output(report.emit(err, args.format), args.out)
        return 2
    report.write_output(report.emit(payload, args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
