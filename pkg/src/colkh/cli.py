"""Command-line front end: ``colkh kh|colored|projector|tail``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys

from . import __version__
from .cobordism import CobordismError
from .colored import (ProjectorError, TruncationError, colored_kh, colored_kh_via_projector,
                      detect_tail_periodicity)
from .diagram import DiagramError, decompose, parse_pd, with_colors
from .homology import (BigradedGroups, GradingError, cohomology, format_laurent, graded_euler,
                       kauffman_bracket, mod_p_cohomology, uct_dimensions)
from .simplify import ResourceLimitError, closed_to_bigraded, object_cap, scan

CONVENTIONS = "framed-doubled-v1: X[a,b,c,d] 0-smoothing a-b|c-d at (-1/2,-1/2); A=Z[X]/X^2"

EXIT_PARSE, EXIT_CAP, EXIT_INVARIANT, EXIT_TRUNCATION = 2, 3, 4, 5


class UsageError(Exception):
    pass


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _meta(args, text):
    settings = {k: v for k, v in vars(args).items() if k not in ("func", "file")}
    settings["object_cap"] = object_cap()
    return {"version": __version__,
            "input_sha256": hashlib.sha256(text.encode()).hexdigest(),
            "conventions": CONVENTIONS,
            "settings": settings}


def _emit(G, fmt, meta, extra=None, text_tail=""):
    extra = extra or {}
    if fmt == "json":
        payload = G.to_dict()
        payload.update(extra)
        payload["meta"] = meta
        print(json.dumps(payload, indent=2, default=str))
    elif fmt == "csv":
        sys.stdout.write(G.to_csv())
    else:
        print(f"# colkh {meta['version']}  sha256={meta['input_sha256'][:16]}")
        print(f"# {meta['conventions']}")
        print("# settings: " + ", ".join(f"{k}={v}" for k, v in sorted(meta["settings"].items())))
        sys.stdout.write(G.table())
        if text_tail:
            sys.stdout.write(text_tail)


def _load(args):
    text = _read(args.file)
    D = parse_pd(text)
    return D, text


def _colors(D, spec):
    if not spec:
        return D
    try:
        colors = [int(c) for c in spec.split(",")]
    except ValueError:
        raise UsageError(f"bad --colors value {spec!r}") from None
    if len(colors) != len(D.components):
        raise UsageError(f"--colors has {len(colors)} entries, diagram has "
                         f"{len(D.components)} components")
    if any(c < 1 for c in colors):
        raise UsageError("colors must be >= 1")
    return with_colors(D, colors)


def cmd_kh(args):
    D, text = _load(args)
    if any(c != 1 for c in D.colors):
        raise UsageError("kh expects an uncolored diagram; use 'colored'")
    B = closed_to_bigraded(scan(decompose(D)))
    G = cohomology(B)
    extra = {}
    tail = ""
    if args.mod:
        dims = mod_p_cohomology(B, args.mod)
        if dims != uct_dimensions(G, args.mod):
            raise AssertionError("mod-p dimensions disagree with universal coefficients")
        mod = BigradedGroups({k: (v, ()) for k, v in dims.items()})
        extra["mod_p"] = {"p": args.mod, **mod.to_dict()}
        tail += f"\nmod {args.mod} dimensions:\n" + mod.table(ring=f"F{args.mod}")
    if args.euler:
        e = graded_euler(G)
        ok = e == kauffman_bracket(D)
        extra["euler"] = format_laurent(e)
        extra["kauffman_check"] = "ok" if ok else "mismatch"
        tail += f"\neuler: {format_laurent(e)}\nkauffman bracket check: {extra['kauffman_check']}\n"
        if not ok:
            _emit(G, args.format, _meta(args, text), extra, tail)
            return EXIT_INVARIANT
    _emit(G, args.format, _meta(args, text), extra, tail)
    return 0


def cmd_colored(args):
    D, text = _load(args)
    D = _colors(D, args.colors)
    r = None if args.r == "auto" else int(args.r)
    res = colored_kh(D, args.qmin, args.qmax, mode=args.mode, k=args.k, r=r,
                     check_stability=args.check_stability, threads=args.threads)
    extra = {"window": [args.qmin, args.qmax], "r": res.r, "certificates": res.certificates}
    tail = ""
    if args.euler:
        extra["euler"] = format_laurent(graded_euler(res.groups))
        tail = f"\neuler: {extra['euler']}\n"
    tail += f"r = {res.r}\n"
    _emit(res.groups, args.format, _meta(args, text), extra, tail)
    return 0


def cmd_projector(args):
    D, text = _load(args)
    D = _colors(D, args.colors)
    if any(c > 2 for c in D.colors):
        raise UsageError("projector route supports colors <= 2")
    qmax = args.qmax if args.qmax is not None else args.truncate
    G = colored_kh_via_projector(D, args.truncate, args.qmin, qmax)
    qmin = args.qmin
    if qmin is None:
        qmin = min(G.qdegrees()) // 2 if G.groups else qmax
    extra = {"window": [qmin, qmax], "truncation": args.truncate}
    tail = ""
    if args.verify:
        twist = colored_kh(D, qmin, qmax).groups
        verdict = "ok" if twist == G else "mismatch"
        extra["verify"] = verdict
        tail = f"\nagreement with twist route: {verdict}\n"
        if verdict != "ok":
            _emit(G, args.format, _meta(args, text), extra, tail)
            return EXIT_INVARIANT
    _emit(G, args.format, _meta(args, text), extra, tail)
    return 0


def cmd_tail(args):
    text = _read(args.file)
    try:
        data = json.loads(text)
        G = BigradedGroups.from_dict(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read groups JSON: {exc}") from None
    window = tuple(data["window"]) if "window" in data else None
    periods = detect_tail_periodicity(G, args.max_period, window)
    if args.format == "json":
        print(json.dumps({"periods": [{"dq": a, "di": b, "onset": c} for a, b, c in periods],
                          "meta": _meta(args, text)}, indent=2, default=str))
    else:
        for dq, di, onset in periods:
            print(f"period dq={dq} di={di} onset j={onset}")
        if not periods:
            print("no periodicity found")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="colkh", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log scan progress")
    p.add_argument("--cap", type=int, help="object cap per reduction step (else CKH_OBJECT_CAP)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")

    sp = sub.add_parser("kh", help="framed Khovanov cohomology of an uncolored diagram")
    common(sp)
    sp.add_argument("--mod", type=int, help="also report dimensions over F_p")
    sp.add_argument("--euler", action="store_true")
    sp.set_defaults(func=cmd_kh)

    sp = sub.add_parser("colored", help="colored cohomology through twisted cables")
    common(sp)
    sp.add_argument("--colors")
    sp.add_argument("--qmin", type=int, required=True)
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--r", default="auto")
    sp.add_argument("--mode", choices=("certified", "empirical"), default="certified")
    sp.add_argument("--k", type=int, default=2, help="agreements needed in empirical mode")
    sp.add_argument("--check-stability", action="store_true")
    sp.add_argument("--euler", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_colored)

    sp = sub.add_parser("projector", help="colored cohomology through the truncated projector")
    common(sp)
    sp.add_argument("--colors")
    sp.add_argument("--truncate", type=int, required=True)
    sp.add_argument("--qmin", type=int)
    sp.add_argument("--qmax", type=int)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_projector)

    sp = sub.add_parser("tail", help="tail periodicity of a groups JSON file")
    sp.add_argument("file")
    sp.add_argument("--max-period", type=int, default=6)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_tail)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.cap:
        os.environ["CKH_OBJECT_CAP"] = str(args.cap)
    try:
        return args.func(args)
    except (DiagramError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        if "colors <= 2" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except TruncationError as exc:
        hint = f" (try --truncate {exc.suggested})" if exc.suggested else ""
        print(f"truncation: {exc}{hint}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (GradingError, ProjectorError, CobordismError, AssertionError) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
