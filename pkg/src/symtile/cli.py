"""Command-line front end.

Exit codes: 0 predicate true / construction succeeded, 1 predicate false or
nothing constructible, 2 usage or validation error, 3 an unreachable case of
the construction was hit.
"""
from __future__ import annotations

import argparse
import json
import sys

from .construct import (
    Certificate,
    complement_for_spectral,
    construct_complement,
    construct_spectrum,
    periodic_replacement,
)
from .errors import AlreadyPeriodic, NotConstructible, PaperContradiction
from .group import GroupContext, Subset
from .oracle import LEMMAS, find_spectra, find_tiling_complements, lemma_check, verify_fuglede
from .sets import FORMS, difference_set, is_spectral_pair, is_tiling_pair, zero_set
from .structure import build_catalog, parse_proj, profile_zero_set, render_grid

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# payload parsing -------------------------------------------------------------


def parse_points(text_or_list, ctx: GroupContext) -> Subset:
    data = json.loads(text_or_list) if isinstance(text_or_list, str) else text_or_list
    if not isinstance(data, list):
        raise UsageError("a set must be a JSON array of [x1, x2] pairs")
    pts = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(v, int) for v in item)):
            raise UsageError(f"bad element {item!r}; expected [x1, x2] with integer coordinates")
        pts.append(ctx.check(item))
    return Subset.from_elements(ctx, pts)


def load_file(path: str):
    with (sys.stdin if path == "-" else open(path)) as fh:
        return json.load(fh)


def _context(args, payload=None) -> GroupContext:
    p, m = args.p, args.m
    if isinstance(payload, dict) and "group" in payload:
        p, m = payload["group"]["p"], payload["group"]["m"]
    if p is None:
        raise UsageError("--p is required")
    if m not in (1, 2):
        raise UsageError("m must be 1 or 2")
    return GroupContext(p, m)


def _inputs(args, second: str):
    """Returns (ctx, A, other-or-None) from inline flags or --file.

    A file may hold a certificate, an object with "set" and an optional
    second set under ``second`` or "witness", or a bare array.
    """
    payload = load_file(args.file) if getattr(args, "file", None) else None
    ctx = _context(args, payload)
    if payload is None:
        if args.set is None:
            raise UsageError("--set or --file is required")
        A = parse_points(args.set, ctx)
        raw = getattr(args, second, None)
        return ctx, A, parse_points(raw, ctx) if raw is not None else None
    if isinstance(payload, list):
        return ctx, parse_points(payload, ctx), None
    if not isinstance(payload, dict) or "set" not in payload:
        raise UsageError("file must hold a JSON array or an object with a 'set' key")
    A = parse_points(payload["set"], ctx)
    raw = payload.get(second, payload.get("witness"))
    return ctx, A, parse_points(raw, ctx) if raw is not None else None


# output ------------------------------------------------------------------------


def emit(obj, pretty: bool, ctx: GroupContext | None = None):
    if not pretty:
        print(json.dumps(obj))
        return
    for key, value in obj.items():
        if isinstance(value, dict):
            print(f"{key}:")
            for k2, v2 in value.items():
                print(f"  {k2}: {json.dumps(v2)}")
        elif ctx is not None and key in ("set", "witness", "zero_set") and isinstance(value, list):
            print(f"{key} ({len(value)} elements):")
            print(render_grid(parse_points(value, ctx)))
        else:
            print(f"{key}: {json.dumps(value)}")


# verbs -----------------------------------------------------------------------------


def cmd_check_tile(args):
    ctx, A, B = _inputs(args, "complement")
    if B is None:
        found = find_tiling_complements(A, 1)
        out = {"tile": bool(found), "complement": found[0].as_lists() if found else None}
        emit(out, args.pretty, ctx)
        return EXIT_TRUE if found else EXIT_FALSE
    v = is_tiling_pair(A, B)
    out = {
        "tiling_pair": v.ok,
        "sizes_match": v.sizes_match,
        "shared_differences": v.shared_differences.as_lists(),
        "max_multiplicity": v.max_multiplicity,
    }
    emit(out, args.pretty)
    return EXIT_TRUE if v.ok else EXIT_FALSE


def cmd_check_spectral(args):
    ctx, A, S = _inputs(args, "spectrum")
    if S is None:
        found = find_spectra(A, 1, args.form)
        emit({"spectral": bool(found), "spectrum": found[0].as_lists() if found else None}, args.pretty, ctx)
        return EXIT_TRUE if found else EXIT_FALSE
    ok = is_spectral_pair(A, S, args.form)
    out = {"spectral_pair": ok}
    if not ok:
        out["differences_outside_zero_set"] = (difference_set(S) - zero_set(A, args.form).members).as_lists()
    emit(out, args.pretty)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_zero_set(args):
    ctx, A, _ = _inputs(args, "spectrum")
    Z = zero_set(A, args.form).members
    out = {"form": args.form, "size": len(Z), "zero_set": Z.as_lists()}
    if ctx.m == 2 and args.form == "symplectic":
        out["profile"] = profile_zero_set(A).to_dict()
    emit(out, args.pretty, ctx)
    return EXIT_TRUE


def _certificate_verb(build):
    def run(args):
        cert = build(args)
        emit(cert.to_dict(), args.pretty, cert.ctx)
        return EXIT_TRUE if cert.verified else EXIT_FALSE

    return run


def _spectrum(args) -> Certificate:
    _, A, B = _inputs(args, "complement")
    return construct_spectrum(A, B)


def _complement(args) -> Certificate:
    ctx, A, S = _inputs(args, "spectrum")
    if S is None:
        found = find_spectra(A, 1)
        if not found:
            raise NotConstructible("A is not spectral")
        S = found[0]
    if ctx.m == 2:
        return complement_for_spectral(A, S)
    return construct_complement(A, S)


def _replacement(args) -> Certificate:
    _, A, B = _inputs(args, "complement")
    if B is None:
        raise UsageError("periodic-replace needs --complement")
    return periodic_replacement(A, B)


def cmd_search(args):
    ctx, A, _ = _inputs(args, "complement")
    if args.kind == "tile":
        found = find_tiling_complements(A, args.limit)
    else:
        found = find_spectra(A, args.limit, args.form)
    out = {"kind": args.kind, "count": len(found), "results": [S.as_lists() for S in found]}
    emit(out, args.pretty)
    return EXIT_TRUE if found else EXIT_FALSE


def cmd_verify(args):
    ctx = _context(args)
    report = verify_fuglede(ctx, args.mode, args.budget, args.seed, args.threads)
    emit(report.to_dict(), args.pretty)
    return EXIT_TRUE if report.ok else EXIT_CONTRADICTION


def cmd_lemma(args):
    report = lemma_check(args.name, args.trials, args.seed)
    emit(report.to_dict(), args.pretty)
    return EXIT_TRUE if report.ok else EXIT_FALSE


def _catalog_set(ctx: GroupContext, name: str) -> Subset:
    """K, K:k, Kperp:k, H:j,k, E:j,k or C:j,k."""
    cat = build_catalog(ctx)
    kind, _, idx = name.partition(":")
    try:
        if kind == "K" and not idx:
            return cat.K.members
        if kind in ("K", "Kperp"):
            k = parse_proj(idx)
            return cat.K_k[k].members if kind == "K" else cat.K_perp(k).members
        j, k = idx.split(",")
        table = {"H": {jk: H.members for jk, H in cat.H.items()}, "E": cat.E, "C": cat.C}[kind]
        return table[int(j), parse_proj(k)]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"unknown catalog object {name!r}") from exc


def cmd_render(args):
    if args.object:
        ctx = _context(args)
        S = _catalog_set(ctx, args.object)
    else:
        ctx, S, _ = _inputs(args, "complement")
    print(render_grid(S, args.filled, args.empty))
    return EXIT_TRUE


# parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symtile", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text, sets=(), form=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--p", type=int, help="prime p")
        sp.add_argument("--m", type=int, default=2, help="exponent m (1 or 2)")
        sp.add_argument("--pretty", action="store_true", help="human-readable output")
        if sets:
            sp.add_argument("--set", help="JSON array of [x1, x2] pairs")
            sp.add_argument("--file", help="JSON file with a set, an object or a certificate ('-' = stdin)")
            for extra in sets:
                sp.add_argument(f"--{extra}", help="JSON array of [x1, x2] pairs")
        if form:
            sp.add_argument("--form", choices=FORMS, default="symplectic")
        sp.set_defaults(func=func)
        return sp

    verb("check-tile", cmd_check_tile, "is (A, B) a tiling pair / is A a tile", ["complement"])
    verb("check-spectral", cmd_check_spectral, "is (A, S) a spectral pair / is A spectral", ["spectrum"], form=True)
    verb("zero-set", cmd_zero_set, "zero set of the transform of A", ["spectrum"], form=True)
    verb("construct-spectrum", _certificate_verb(_spectrum), "build a spectrum for a tile", ["complement"])
    verb("construct-complement", _certificate_verb(_complement), "build a tiling complement for a spectral set", ["spectrum"])
    verb("periodic-replace", _certificate_verb(_replacement), "make one side of a tiling pair periodic", ["complement"])

    sp = verb("search", cmd_search, "brute-force complements or spectra containing (0,0)", ["complement"], form=True)
    sp.add_argument("--kind", choices=("tile", "spectral"), default="tile")
    sp.add_argument("--limit", type=int, default=10)

    sp = verb("verify-conjecture", cmd_verify, "compare tiles with spectral sets")
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)

    sp = verb("lemma-check", cmd_lemma, "property-check one lemma")
    sp.add_argument("--name", choices=sorted(LEMMAS), required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)

    sp = verb("render", cmd_render, "ASCII grid of a set or catalog object", ["complement"])
    sp.add_argument("--object", help="catalog object: K, K:k, Kperp:k, H:j,k, E:j,k, C:j,k")
    sp.add_argument("--filled", default="#")
    sp.add_argument("--empty", default=".")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PaperContradiction as exc:
        print(json.dumps({"error": "paper-contradiction", "message": str(exc), "profile": _jsonable(exc.profile)}))
        return EXIT_CONTRADICTION
    except AlreadyPeriodic as exc:
        print(json.dumps({"error": "already-periodic", "message": str(exc), "component": exc.component}))
        return EXIT_USAGE
    except NotConstructible as exc:
        print(json.dumps({"error": "not-constructible", "message": str(exc)}))
        return EXIT_FALSE
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}))
        return EXIT_USAGE


def _jsonable(obj):
    if obj is None or isinstance(obj, (str, int, float, bool)):
        return obj
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


if __name__ == "__main__":
    sys.exit(main())
