"""Regular splines: coefficient relations, exact evaluation, module operations.

A spline over a hierarchical mesh is ``f = sum_l sum_{beta in K^l} lambda_beta
beta``.  It is stored as one relation per level, ``S^l = {(anchor(beta),
lambda_beta)}``, over the tracks ``y0 .. y{d-1}, lam``.

Evaluation at ``x`` joins ``S^l`` with the band ``x ∈ supp beta`` written in
terms of the anchor ``y``, fixes the ``x`` tracks and lists the at most
``(m+1)^d`` surviving ``(y, lambda)`` pairs in time linear in the length of
``x``.  The B-spline values themselves are computed in exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .automata import (FixedTrackQuery, SyncAutomaton, complement, convolve, difference, is_empty,
                       join, join_all, load, minimize, project, rename, reorder, save, union,
                       union_all, are_equivalent)
from .kraft import KraftBasis, build_kraft_languages, load_basis, read_manifest
from .mesh import HierarchicalMesh, coordinate_tracks, load_mesh_spec, parse_pattern
from .numeration import RepresentationError, as_fraction, decode, encode, in_ring
from .relations import (equality_automaton, less_than_automaton, point_automaton,
                        region_automaton, scalar_multiple_automaton, shift_automaton,
                        valid_encoding_automaton, addition_automaton)

LAM = "lam"


class SplineError(ValueError):
    """Mesh, degree or base mismatch, or a malformed coefficient relation."""


class ConsistencyError(RuntimeError):
    """More matches than the support-overlap bound allows."""


def anchor_tracks(d: int) -> tuple[str, ...]:
    return tuple(f"y{i}" for i in range(d))


def check_degree_base(m: int, b: int) -> None:
    if m == 3 and b % 6:
        raise SplineError("cubic splines need a base divisible by 6")


# --------------------------------------------------------------------------
# B-spline values

@lru_cache(maxsize=None)
def _uniform(m: int, t: Fraction) -> Fraction:
    """``N_{0,m}`` on the integer knots ``0, 1, ..., m+1``."""
    if t < 0 or t >= m + 1:
        return Fraction(0)
    if m == 0:
        return Fraction(1)
    return (t * _uniform(m - 1, t) + (m + 1 - t) * _uniform(m - 1, t - 1)) / m


def bspline_value(m: int, level: int, i: int, t) -> Fraction:
    """``N^l_{i,m}(t)`` with knots ``j / 2^l``, via ``N^l_{0,m}(t) = N_{0,m}(2^l t)``."""
    return _uniform(m, as_fraction(t) * 2 ** level - i)


def tensor_value(m: int, level: int, start: Sequence[int], x: Sequence) -> Fraction:
    out = Fraction(1)
    for i, t in zip(start, x):
        out *= bspline_value(m, level, i, t)
        if not out:
            break
    return out


def band_bounds(m: int, level: int) -> tuple[Fraction, Fraction]:
    """``(lo, hi)`` with ``x ∈ supp beta`` iff ``lo < x_k - y_k < hi`` for all ``k``."""
    den = 2 ** (level + 1)
    if m % 2:
        return Fraction(-(m + 2), den), Fraction(m, den)
    return Fraction(-(m + 1), den), Fraction(m + 1, den)


# --------------------------------------------------------------------------
# the support band

@lru_cache(maxsize=None)
def _band1(b: int, m: int, level: int) -> SyncAutomaton:
    """Pairs ``(x, y)`` with ``y`` a level barycentre and ``x`` in the support
    of the B-spline anchored at ``y``."""
    from .relations import level_filter_automaton
    lo, hi = band_bounds(m, level)
    lower = less_than_automaton(b, 1, ("p", "x"))
    if m == 0:
        # N_{i,0} is the indicator of a half-open cell: the lower end is closed
        lower = union(lower, equality_automaton(b, ("p", "x")))
    ends = minimize(join_all([level_filter_automaton(1, level, b, ("y",)),
                              shift_automaton(b, lo, ("y", "p")),
                              shift_automaton(b, hi, ("y", "q"))]))
    parts = [ends, lower, less_than_automaton(b, 1, ("x", "q"))]
    A = minimize(join_all(parts))
    return minimize(project(A, ("x", "y")))


def band_automaton(b: int, m: int, level: int, d: int) -> SyncAutomaton:
    xs, ys = coordinate_tracks(d), anchor_tracks(d)
    parts = [rename(_band1(b, m, level), {"x": x, "y": y}) for x, y in zip(xs, ys)]
    A = parts[0] if d == 1 else minimize(join_all(parts))
    return reorder(A, xs + ys)


# --------------------------------------------------------------------------
# splines

@dataclass
class Match:
    level: int
    anchor: tuple[Fraction, ...]
    coefficient: Fraction
    offset: tuple[Fraction, ...]
    value: Fraction


@dataclass
class RegularSpline:
    """Degree-``m`` spline given by ``relations[l] = S^l`` over ``y*, lam``."""

    mesh: HierarchicalMesh
    degree: int
    relations: list[SyncAutomaton]
    basis: KraftBasis | None = None
    _queries: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        d, b = self.mesh.dimension, self.mesh.base
        check_degree_base(self.degree, b)
        if self.degree != self.mesh.degree:
            raise SplineError("spline degree differs from the mesh degree")
        if len(self.relations) != self.mesh.levels:
            raise SplineError(f"need {self.mesh.levels} coefficient relations")
        tracks = anchor_tracks(d) + (LAM,)
        fixed = []
        for S in self.relations:
            if S.k != d + 1 or S.base != b:
                raise SplineError("coefficient relation has the wrong base or track count")
            fixed.append(reorder(rename(S, dict(zip(S.tracks, tracks))), tracks))
        self.relations = fixed

    @property
    def dimension(self) -> int:
        return self.mesh.dimension

    @property
    def base(self) -> int:
        return self.mesh.base

    def query(self, level: int) -> FixedTrackQuery:
        q = self._queries.get(level)
        if q is None:
            band = band_automaton(self.base, self.degree, level, self.dimension)
            A = minimize(join(band, self.relations[level]))
            q = self._queries[level] = FixedTrackQuery(A, coordinate_tracks(self.dimension))
        return q

    def matches(self, x: Sequence) -> list[Match]:
        d, b, m = self.dimension, self.base, self.degree
        if not isinstance(x, (tuple, list)):
            x = (x,)
        x = tuple(as_fraction(c) for c in x)
        if len(x) != d:
            raise SplineError(f"point has dimension {len(x)}, spline {d}")
        for c in x:
            if not in_ring(c, b):
                raise RepresentationError(f"{c} is not in Z[1/{b}]")
        word = convolve([encode(c, b).symbols for c in x])
        bound = (m + 1) ** d
        out = []
        for l in range(self.mesh.levels):
            lo, _ = band_bounds(m, l)
            found = self.query(l).run(word, limit=bound)
            if len(found) > bound:
                raise ConsistencyError(f"level {l}: more than {bound} matches")
            for w in found:
                y = tuple(decode(t, b) for t in w.tracks[:d])
                lam = decode(w.tracks[d], b)
                off = tuple(xi - (yi + lo) for xi, yi in zip(x, y))
                val = Fraction(1)
                for o in off:
                    val *= bspline_value(m, l, 0, o)
                out.append(Match(l, y, lam, off, val))
        return out

    def evaluate(self, x: Sequence) -> Fraction:
        return sum((mt.coefficient * mt.value for mt in self.matches(x)), Fraction(0))

    __call__ = evaluate

    def coefficient(self, level: int, y: Sequence) -> Fraction | None:
        """``lambda`` for the anchor ``y`` at ``level``, or ``None``."""
        b = self.base
        q = self._lookup(level)
        word = convolve([encode(as_fraction(c), b).symbols for c in y])
        found = q.run(word, limit=2)
        if not found:
            return None
        if len(found) > 1:
            raise SplineError(f"anchor {tuple(y)} has several coefficients")
        return decode(found[0].tracks[0], b)

    def _lookup(self, level: int) -> FixedTrackQuery:
        key = ("lookup", level)
        q = self._queries.get(key)
        if q is None:
            q = self._queries[key] = FixedTrackQuery(self.relations[level], anchor_tracks(self.dimension))
        return q

    # invariants

    def is_functional(self) -> bool:
        """No anchor carries two different coefficients."""
        b = self.base
        neq = complement(equality_automaton(b, ("a", "c")), valid_encoding_automaton(b, 2, ("a", "c")))
        for S in self.relations:
            pair = join_all([rename(S, {LAM: "a"}), rename(S, {LAM: "c"}), neq])
            if not is_empty(pair):
                return False
        return True

    def domains(self) -> list[SyncAutomaton]:
        ys = anchor_tracks(self.dimension)
        return [minimize(project(S, ys)) for S in self.relations]

    def domain_matches(self, basis: KraftBasis) -> bool:
        ys = anchor_tracks(self.dimension)
        for D, L in zip(self.domains(), basis.languages):
            if not are_equivalent(D, reorder(rename(L, dict(zip(L.tracks, ys))), ys)):
                return False
        return True


# --------------------------------------------------------------------------
# constructions

def _on_anchors(L: SyncAutomaton, d: int) -> SyncAutomaton:
    ys = anchor_tracks(d)
    return reorder(rename(L, dict(zip(L.tracks, ys))), ys)


def constant_relation(L: SyncAutomaton, d: int, value) -> SyncAutomaton:
    return minimize(join(_on_anchors(L, d), point_automaton(L.base, (LAM,), (value,))))


def constant_spline(M: HierarchicalMesh, value, basis: KraftBasis | None = None,
                    force: bool = False) -> RegularSpline:
    """``value`` times every selected B-spline."""
    basis = basis or build_kraft_languages(M, force=force)
    rels = [constant_relation(L, M.dimension, value) for L in basis.languages]
    return RegularSpline(M, M.degree, rels, basis)


def uniform_mesh(d: int, m: int, b: int) -> HierarchicalMesh:
    return HierarchicalMesh(d, m, b, [])


def linear_spline(alpha: Sequence, alpha0, m: int, b: int,
                  mesh: HierarchicalMesh | None = None) -> RegularSpline:
    """``f(x) = sum_k alpha_k x_k + alpha0`` on the uniform level-0 mesh.

    In 1-D, ``t = sum_i (i + (m+1)/2) N_{i,m}(t)``; written in terms of the
    anchor ``y`` the coefficient is ``y - 1/2`` for odd ``m`` and ``y`` for
    even ``m``.
    """
    alpha = [as_fraction(a) for a in alpha]
    d = len(alpha)
    M = mesh or uniform_mesh(d, m, b)
    if M.levels != 1:
        raise SplineError("linear splines are built on the uniform level-0 mesh")
    check_degree_base(m, b)
    for a in alpha + [as_fraction(alpha0)]:
        if not in_ring(a, b):
            raise RepresentationError(f"{a} is not in Z[1/{b}]")
    delta = Fraction(1, 2) if m % 2 else Fraction(0)
    ys = anchor_tracks(d)
    parts = []
    for k, (a, y) in enumerate(zip(alpha, ys)):
        w, v = f"__w{k}", f"__v{k}"
        shifted = rename(shift_automaton(b, -delta), {"x": y, "y": w})
        scaled = scalar_multiple_automaton(a, b, (w, v))
        parts.append(minimize(project(join(shifted, scaled), (y, v))))
    acc = "__v0"
    A = parts[0]
    for k in range(1, d):
        A = join(A, parts[k])
        s = f"__s{k}"
        A = minimize(project(join(A, addition_automaton(b, 1, (acc, f"__v{k}", s))),
                             ys[:k + 1] + (s,)))
        acc = s
    A = minimize(project(join(A, rename(shift_automaton(b, alpha0), {"x": acc, "y": LAM})),
                         ys + (LAM,)))
    from .relations import level_filter_automaton
    A = minimize(join(A, level_filter_automaton(d, 0, b, ys)))
    return RegularSpline(M, m, [A], KraftBasis(M, [level_filter_automaton(d, 0, b, coordinate_tracks(d))]))


def _same_space(f: RegularSpline, g: RegularSpline) -> None:
    if f.degree != g.degree or f.base != g.base or f.dimension != g.dimension \
            or f.mesh.levels != g.mesh.levels:
        raise SplineError("splines live on different meshes or degrees")
    for A, B in zip(f.mesh.languages, g.mesh.languages):
        if A is not B and not are_equivalent(A, B):
            raise SplineError("splines live on different meshes")


def add_splines(f: RegularSpline, g: RegularSpline) -> RegularSpline:
    _same_space(f, g)
    b, ys = f.base, anchor_tracks(f.dimension)
    add = addition_automaton(b, 1, ("__a", "__c", LAM))
    rels = []
    for S, T in zip(f.relations, g.relations):
        J = join_all([rename(S, {LAM: "__a"}), rename(T, {LAM: "__c"}), add])
        rels.append(minimize(project(J, ys + (LAM,))))
    return RegularSpline(f.mesh, f.degree, rels, f.basis)


def scale_spline(mu, f: RegularSpline) -> RegularSpline:
    b, ys = f.base, anchor_tracks(f.dimension)
    R = scalar_multiple_automaton(mu, b, ("__a", LAM))
    rels = [minimize(project(join(rename(S, {LAM: "__a"}), R), ys + (LAM,))) for S in f.relations]
    return RegularSpline(f.mesh, f.degree, rels, f.basis)


def affine_relation(b: int, slope, intercept, src: str = "y", dst: str = LAM) -> SyncAutomaton:
    """The graph of ``y -> slope * y + intercept``."""
    R = scalar_multiple_automaton(slope, b, (src, "__t"))
    T = rename(shift_automaton(b, intercept), {"x": "__t", "y": dst})
    return minimize(project(join(R, T), (src, dst)))


# --------------------------------------------------------------------------
# the two infinite-support examples

def spline_g() -> RegularSpline:
    """``g = sum_j (-1)^j N_{4j,3}`` on the uniform mesh, base 6.

    The anchor of ``N_{4j,3}`` is ``4j + 5/2``; its coefficient is ``1`` when
    ``y = 5/2 (mod 8)``, ``-1`` when ``y = 13/2 (mod 8)`` and ``0`` otherwise.
    """
    b, m = 6, 3
    M = uniform_mesh(1, m, b)
    y = ("y0",)
    plus = region_automaton(b, y, 0, lambda v: v[0] == Fraction(5, 2), period=(8,))
    minus = region_automaton(b, y, 0, lambda v: v[0] == Fraction(13, 2), period=(8,))
    rest = region_automaton(b, y, 0, lambda v: v[0] not in (Fraction(5, 2), Fraction(13, 2)),
                            period=(8,))
    S = union_all([join(plus, point_automaton(b, (LAM,), (1,))),
                   join(minus, point_automaton(b, (LAM,), (-1,))),
                   join(rest, point_automaton(b, (LAM,), (0,)))])
    return RegularSpline(M, m, [minimize(S)])


def g_coefficient(level: int, anchor: Sequence[Fraction]) -> Fraction:
    r = anchor[0] % 8
    return Fraction(1) if r == Fraction(5, 2) else Fraction(-1) if r == Fraction(13, 2) else Fraction(0)


H_PATTERN = "periodic-abs 0..1 every 2"


def h_mesh() -> HierarchicalMesh:
    """Three levels with ``Omega^1 = Omega^2 = U_i [2i, 2i+1] ∪ [-2i-1, -2i]``."""
    p = parse_pattern(H_PATTERN, 1)
    return HierarchicalMesh.from_patterns(1, 3, 6, [[p], [p]])


def spline_h(basis: KraftBasis | None = None) -> RegularSpline:
    """``h = sum_{j>=0} (j+1) N^2_{8j,3} + sum_{j<=-1} (-j) N^2_{8j+4,3}``.

    The level-2 anchors are ``2j + 5/8`` (``j >= 0``) and ``2j + 13/8``
    (``j <= -1``), so the coefficients are ``y/2 + 11/16`` and
    ``-y/2 + 13/16``; every other selected function has coefficient 0.
    The mesh violates Assumption B, so its basis is built unverified.
    """
    M = h_mesh()
    basis = basis or build_kraft_languages(M, force=True)
    b, y = 6, ("y0",)
    right = region_automaton(b, y, 2, lambda v, neg: v[0] == Fraction(5, 8) and not neg[0],
                             period=(2,), signed=True)
    left = region_automaton(b, y, 2, lambda v, neg: v[0] == Fraction(13, 8) and neg[0],
                            period=(2,), signed=True)
    L2 = _on_anchors(basis.languages[2], 1)
    right, left = minimize(join(right, L2)), minimize(join(left, L2))
    others = difference(L2, union(right, left))
    S2 = union_all([join(right, affine_relation(b, Fraction(1, 2), Fraction(11, 16), "y0")),
                    join(left, affine_relation(b, Fraction(-1, 2), Fraction(13, 16), "y0")),
                    join(others, point_automaton(b, (LAM,), (0,)))])
    rels = [constant_relation(basis.languages[0], 1, 0), constant_relation(basis.languages[1], 1, 0),
            minimize(S2)]
    return RegularSpline(M, 3, rels, basis)


def h_coefficient(level: int, anchor: Sequence[Fraction]) -> Fraction:
    if level != 2:
        return Fraction(0)
    y = anchor[0]
    if y > 0 and y % 2 == Fraction(5, 8):
        return y / 2 + Fraction(11, 16)
    if y < 0 and y % 2 == Fraction(13, 8):
        return -y / 2 + Fraction(13, 16)
    return Fraction(0)


def linear_coefficient(alpha: Sequence, alpha0, m: int):
    delta = Fraction(1, 2) if m % 2 else Fraction(0)

    def coeff(level, anchor):
        return sum((Fraction(a) * (y - delta) for a, y in zip(alpha, anchor)), Fraction(alpha0))
    return coeff


# --------------------------------------------------------------------------
# manifests

def save_spline(f: RegularSpline, directory, mesh_ref: str, extra: dict[str, str] | None = None,
                name: str = "spline.txt", prefix: str = "S") -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = ["kind = spline", f"mesh = {mesh_ref}", f"dimension = {f.dimension}",
             f"degree = {f.degree}", f"base = {f.base}", f"levels = {f.mesh.levels}"]
    for k, v in (extra or {}).items():
        lines.append(f"{k} = {v}")
    for l, S in enumerate(f.relations):
        fname = f"{prefix}{l}.aut"
        save(S, directory / fname)
        lines += ["", f"[level {l}]", f"relation = {fname}"]
    path = directory / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_spline(path) -> tuple[RegularSpline, dict[str, str]]:
    """Read a spline manifest.

    Coefficients come from ``relation = <file>`` per level, or from the
    header key ``generator = ones | zero`` (a constant on the Kraft basis of
    the mesh, built unverified when ``force = true``).
    """
    path = Path(path)
    head, sections = read_manifest(path)
    if head.get("kind") != "spline":
        raise SplineError(f"{path} is not a spline manifest")
    M = load_mesh_spec(path.parent / head["mesh"])
    for key, attr in (("dimension", "dimension"), ("degree", "degree"), ("base", "base"),
                      ("levels", "levels")):
        if key in head and int(head[key]) != getattr(M, attr):
            raise SplineError(f"manifest {key} disagrees with the mesh")
    force = head.get("force") == "true"
    gen = head.get("generator")
    if gen is not None:
        basis = load_basis(path.parent / head["basis"], M) if "basis" in head else None
        if gen not in ("ones", "zero"):
            raise SplineError(f"unknown generator {gen!r}")
        return constant_spline(M, 1 if gen == "ones" else 0, basis, force), head
    rels = [load(path.parent / sections[l]["relation"]) for l in range(M.levels)]
    return RegularSpline(M, M.degree, rels), head
