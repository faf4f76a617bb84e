"""Command-line interface.

Exit codes: 0 success (or "true"), 1 a check failed or an oracle
disagreed, 2 bad input or an exceeded resource budget.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .automata import (ResourceError, load, minimize, rename, reorder, save, set_state_budget,
                       state_budget, union_all)
from .kraft import VerificationError, build_kraft_languages, load_basis, read_manifest, save_basis
from .mesh import Cell, check_assumption_b, check_nested, load_mesh_spec, parse_pattern, save_mesh
from .numeration import parse_number
from .oracle import oracle_eval, pattern_domain
from .refine import RefinementError, refine_mesh, refine_spline
from .spline import (ConsistencyError, SplineError, constant_spline, g_coefficient, h_coefficient,
                     linear_coefficient, load_spline, save_spline)

OK, FAIL, ERROR = 0, 1, 2


def _fmt_point(p) -> str:
    return "(" + ", ".join(str(c) for c in p) + ")"


def _overrides(args) -> dict[str, str]:
    out = {}
    if args.base is not None:
        out["base"] = str(args.base)
    if args.degree is not None:
        out["degree"] = str(args.degree)
    return out


def _mesh(args):
    return load_mesh_spec(args.mesh, _overrides(args))


def _check_flags(args, M) -> None:
    """``--base``/``--degree`` must agree with a spline manifest."""
    if args.base is not None and args.base != M.base:
        raise SplineError(f"--base {args.base} disagrees with the manifest (base {M.base})")
    if args.degree is not None and args.degree != M.degree:
        raise SplineError(f"--degree {args.degree} disagrees with the manifest (degree {M.degree})")


# --------------------------------------------------------------------------
# commands

def cmd_check_nested(args) -> int:
    M = _mesh(args)
    r = check_nested(M)
    if r.ok:
        print("nested: true")
        return OK
    print("nested: false")
    print(f"level = {r.level}")
    print(f"witness = {_fmt_point(r.witness)}")
    print(r.detail)
    return FAIL


def cmd_check_assumption_b(args) -> int:
    M = _mesh(args)
    r = check_assumption_b(M, reading=args.reading)
    if r.ok:
        print(f"assumption-b ({args.reading}): true")
        return OK
    print(f"assumption-b ({args.reading}): false")
    print(f"level = {r.level}")
    print(f"witness = {_fmt_point(r.witness)}")
    print(r.detail)
    return FAIL


def cmd_kraft(args) -> int:
    M = _mesh(args)
    try:
        K = build_kraft_languages(M, force=args.force)
    except VerificationError as exc:
        print(f"kraft: {exc}")
        return FAIL
    out = Path(args.out)
    ref = os.path.relpath(Path(args.mesh).resolve(), out.resolve())
    path = save_basis(K, out, ref)
    for l, L in enumerate(K.languages):
        print(f"level {l}: {L.n_states} states")
    if not K.verified:
        print("warning: built without verification")
    print(f"wrote {path}")
    return OK


def _parse_point(text: str, b: int) -> tuple[Fraction, ...]:
    """Coordinates as ``p/q`` or ``@top/bottom`` digit rows, blank or comma separated."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty point")
    return tuple(parse_number(p, b) for p in parts)


def read_points(path, b: int) -> list[tuple[Fraction, ...]]:
    """One point per line."""
    pts = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            pts.append(_parse_point(line, b))
    return pts


def _load(args, manifest):
    """Spline and header; a ``generator`` spline is built with the basis
    named in the manifest or, failing that, compiled here."""
    manifest = Path(manifest)
    head, _ = read_manifest(manifest)
    if head.get("generator") is not None and "basis" not in head:
        M = load_mesh_spec(manifest.parent / head["mesh"])
        basis = build_kraft_languages(M, force=getattr(args, "force", False))
        value = 1 if head["generator"] == "ones" else 0
        if head["generator"] not in ("ones", "zero"):
            raise SplineError(f"unknown generator {head['generator']!r}")
        f = constant_spline(M, value, basis)
    else:
        f, head = load_spline(manifest)
    _check_flags(args, f.mesh)
    return f, head


def _mesh_domain(M):
    if all(p is not None for p in M.patterns):
        return pattern_domain(M.patterns)

    def omega(l, index):
        return M.contains_cell(l, Cell(l - 1, tuple(index)))
    return omega


def spline_oracle(f, head: dict[str, str], manifest: Path):
    """``x -> value`` by brute force from the manifest's ``oracle`` key."""
    kind = head.get("oracle", "relation")
    if kind == "relation":
        def coeff(level, anchor):
            c = f.coefficient(level, anchor)
            return Fraction(0) if c is None else c
    elif kind == "g":
        coeff = g_coefficient
    elif kind == "h":
        coeff = h_coefficient
    elif kind in ("ones", "zero"):
        value = Fraction(1 if kind == "ones" else 0)

        def coeff(level, anchor):
            return value
    elif kind == "linear":
        alpha = [Fraction(a) for a in head.get("alpha", "1").split()]
        coeff = linear_coefficient(alpha, Fraction(head.get("alpha0", "0")), f.degree)
    else:
        raise SplineError(f"unknown oracle {kind!r}")
    M = f.mesh
    if "oracle_mesh" in head:
        if kind == "relation":
            raise SplineError("a relation oracle cannot use another mesh")
        M = load_mesh_spec(manifest.parent / head["oracle_mesh"])
    omega = _mesh_domain(M)
    return lambda x: oracle_eval(coeff, omega, M.dimension, M.degree, M.levels, x)


def cmd_eval(args) -> int:
    f, head = _load(args, args.spline)
    pts = [_parse_point(p, f.base) for p in args.point or []]
    if args.points:
        pts += read_points(args.points, f.base)
    if not pts:
        raise ValueError("no points given")
    oracle = spline_oracle(f, head, Path(args.spline)) if args.oracle else None
    status = OK
    for x in pts:
        if args.matches:
            ms = f.matches(x)
            value = sum((mt.coefficient * mt.value for mt in ms), Fraction(0))
        else:
            value = f(x)
        line = f"{_fmt_point(x)} {value}"
        if oracle is not None:
            expected = oracle(x)
            line += f" oracle {expected} {'ok' if expected == value else 'MISMATCH'}"
            if expected != value:
                status = FAIL
        print(line)
        if args.matches:
            for mt in ms:
                print(f"  level {mt.level} anchor {_fmt_point(mt.anchor)} "
                      f"coefficient {mt.coefficient} offset {_fmt_point(mt.offset)} "
                      f"basis {mt.value}")
    return status


def cmd_refine(args) -> int:
    manifest = Path(args.spline)
    f, head = _load(args, manifest)
    M = f.mesh
    if args.pattern:
        pats = [parse_pattern(p, M.dimension) for p in args.pattern]
        L_new = minimize(union_all([p.automaton(M.levels - 1, M.base, M.tracks) for p in pats]))
    elif args.level:
        pats = None
        L_new = load(args.level)
        L_new = reorder(rename(L_new, dict(zip(L_new.tracks, M.tracks))), M.tracks)
    else:
        raise ValueError("give a new-level automaton or --pattern")
    if f.basis is not None:
        basis = f.basis
    elif "basis" in head:
        basis = load_basis(manifest.parent / head["basis"], M)
    else:
        try:
            basis = build_kraft_languages(M, force=args.force)
        except VerificationError as exc:
            print(f"refine: {exc}")
            return FAIL
    try:
        RM = refine_mesh(M, L_new, basis, pats)
    except RefinementError as exc:
        print(f"refine: {exc}")
        return FAIL
    g = refine_spline(f, RM)
    out = Path(args.out)
    save_mesh(RM.mesh, out)
    save_basis(RM.basis, out, "mesh.txt")
    extra = {"basis": "basis.txt"}
    kind = head.get("oracle", "relation")
    if kind != "relation":
        extra["oracle"] = kind
        for key in ("alpha", "alpha0"):
            if key in head:
                extra[key] = head[key]
        parent = manifest.parent / head.get("oracle_mesh", head["mesh"])
        extra["oracle_mesh"] = os.path.relpath(parent.resolve(), out.resolve())
    path = save_spline(g, out, "mesh.txt", extra)
    print(f"level {M.levels}: {RM.basis.languages[-1].n_states} states")
    print(f"wrote {path}")
    return OK


def cmd_plotdata(args) -> int:
    f, head = _load(args, args.spline)
    if f.dimension != 1:
        raise ValueError("plotdata works on univariate splines")
    a, b, step = (Fraction(v) for v in (args.interval[0], args.interval[1], args.step))
    if step <= 0:
        raise ValueError("step must be positive")
    oracle = spline_oracle(f, head, Path(args.spline)) if args.oracle else None
    status = OK
    x = a
    while x <= b:
        v = f((x,))
        line = f"{x} {v}"
        if oracle is not None:
            e = oracle((x,))
            line += f" {e}"
            status = status if e == v else FAIL
        print(line)
        x += step
    return status


def cmd_examples(args) -> int:
    from .fixtures import example_names
    if args.name not in example_names():
        raise ValueError(f"unknown example {args.name!r}; choose from {', '.join(example_names())}")
    path = write_example(args.name, Path(args.out))
    print(f"wrote {path}")
    return OK


def write_example(name: str, out: Path) -> Path:
    """Mesh spec, spline manifest, next-level automaton and sample points."""
    from .fixtures import MESHES, build_spline, refinement_language, spline_fixtures
    out.mkdir(parents=True, exist_ok=True)
    if name in MESHES:
        F = MESHES[name]
        M = F.mesh()
        save_mesh(M, out)
        (out / "spline.txt").write_text(
            "kind = spline\nmesh = mesh.txt\ngenerator = ones\noracle = ones\n", encoding="utf-8")
        L, _ = _next_level(M, F.refinement)
        save(L, out / "refine.aut")
        pts = _sample_points(F.window, F.dimension)
    else:
        F = spline_fixtures()[name]
        f = build_spline(name)
        save_mesh(f.mesh, out)
        extra = {"oracle": F.kind}
        if F.kind == "linear":
            extra.update(alpha="1", alpha0="0")
        save_spline(f, out, "mesh.txt", extra)
        L, _ = refinement_language(f, F.refinement)
        save(L, out / "refine.aut")
        pts = _sample_points(F.window, 1)
        if name == "spline-g":
            pts = [(Fraction(2),), (Fraction(6),), (Fraction(-2),)] + pts
        if name == "spline-h":
            pts = [(Fraction(1, 2),)] + pts
    lines = [" ".join(str(c) for c in p) for p in pts]
    (out / "points.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out / "spline.txt"


def _next_level(M, patterns):
    pats = [parse_pattern(p, M.dimension) for p in patterns]
    L = minimize(union_all([p.automaton(M.levels - 1, M.base, M.tracks) for p in pats]))
    return L, pats


def _sample_points(window, d, count=12):
    """Deterministic dyadic points spread over the window."""
    pts = []
    for k in range(count):
        p = []
        for i, (lo, hi) in enumerate(window):
            t = Fraction((37 * k + 11 * i + 5) % 64, 64)
            p.append(lo + (hi - lo) * t)
        pts.append(tuple(p))
    return pts


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int, help="override the numeration base")
    common.add_argument("--degree", type=int, help="override the spline degree")
    common.add_argument("--state-budget", type=int, help="cap on automaton states per construction")

    p = argparse.ArgumentParser(prog="autospline", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-nested", parents=[common], help="decide nestedness of a mesh")
    s.add_argument("mesh")
    s.set_defaults(func=cmd_check_nested)

    s = sub.add_parser("check-assumption-b", parents=[common], help="decide Assumption B")
    s.add_argument("mesh")
    s.add_argument("--reading", choices=("closed", "cells"), default="closed")
    s.set_defaults(func=cmd_check_assumption_b)

    s = sub.add_parser("kraft", parents=[common], help="build the Kraft basis languages")
    s.add_argument("mesh")
    s.add_argument("out", help="output directory")
    s.add_argument("--force", action="store_true", help="skip the prerequisite checks")
    s.set_defaults(func=cmd_kraft)

    s = sub.add_parser("eval", parents=[common], help="evaluate a spline exactly")
    s.add_argument("spline", help="spline manifest")
    s.add_argument("point", nargs="*", help="points such as 5/4, 1/2,3/4 or @1110/1011")
    s.add_argument("--points", help="file with one point per line")
    s.add_argument("--matches", action="store_true", help="list the contributing B-splines")
    s.add_argument("--oracle", action="store_true", help="compare with brute-force evaluation")
    s.add_argument("--force", action="store_true", help="build an unverified basis if needed")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("refine", parents=[common], help="add a level and transfer coefficients")
    s.add_argument("spline", help="spline manifest")
    s.add_argument("level", nargs="?", help="automaton file for the new level")
    s.add_argument("--pattern", action="append", help="pattern text for the new level")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--force", action="store_true", help="build an unverified basis if needed")
    s.set_defaults(func=cmd_refine)

    s = sub.add_parser("examples", parents=[common], help="write a shipped example")
    s.add_argument("name")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_examples)

    s = sub.add_parser("plotdata", parents=[common], help="columns x f(x) on a 1-D grid")
    s.add_argument("spline")
    s.add_argument("--interval", nargs=2, required=True, metavar=("A", "B"))
    s.add_argument("--step", required=True)
    s.add_argument("--oracle", action="store_true", help="add a brute-force column")
    s.add_argument("--force", action="store_true", help="build an unverified basis if needed")
    s.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    previous = state_budget()
    if args.state_budget is not None:
        set_state_budget(args.state_budget)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except ResourceError as exc:
        print(f"error: resource budget exceeded: {exc}", file=sys.stderr)
        return ERROR
    except (ValueError, OSError, KeyError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    finally:
        set_state_budget(previous)


if __name__ == "__main__":
    sys.exit(main())
