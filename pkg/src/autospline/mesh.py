"""Dyadic cells, hierarchical meshes and their verification.

A hierarchical mesh on R^d is given by domains ``R^d = Omega^0 ⊇ Omega^1 ⊇
... ⊇ Omega^{N-1}``, each ``Omega^l`` a union of closed level-``(l-1)``
cells.  The mesh stores ``Omega^l`` as the regular language ``L_l`` of the
barycentre encodings of those cells.

Two properties are decided here: nestedness of the domains, and
Assumption B (for every level-``l`` B-spline whose support meets
``M^l = R^d \\ int Omega^{l+1}``, the closed support meets ``M^l`` in a
connected set).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

from .automata import (ResourceError, SyncAutomaton, determinize, empty_automaton,
                       explore, intersect, is_empty, join, load, minimize, project, rename, reorder,
                       shortest_word, union_all)
from .logic import Structure, compile_formula, witness
from .numeration import as_fraction, check_base, decode
from .relations import level_filter_automaton, region_automaton, shift_point_automaton

DEFAULT_ATOM_BUDGET = 25


def coordinate_tracks(d: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(d))


# --------------------------------------------------------------------------
# cells

@dataclass(frozen=True)
class Cell:
    """The closed cube ``prod [i_k / 2^l, (i_k + 1) / 2^l]``."""

    level: int
    index: tuple[int, ...]

    @property
    def barycentre(self) -> tuple[Fraction, ...]:
        return barycentre(self)

    @property
    def lower(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(i, 2 ** self.level) for i in self.index)

    @property
    def upper(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(i + 1, 2 ** self.level) for i in self.index)

    @classmethod
    def containing(cls, level: int, z: Sequence) -> "Cell":
        """The cell whose barycentre is ``z``."""
        idx = []
        for c in z:
            c = as_fraction(c) * 2 ** level - Fraction(1, 2)
            if c.denominator != 1:
                raise ValueError(f"{tuple(z)} is not a level-{level} barycentre")
            idx.append(int(c))
        return cls(level, tuple(idx))


def barycentre(c: Cell) -> tuple[Fraction, ...]:
    return tuple(Fraction(2 * i + 1, 2 ** (c.level + 1)) for i in c.index)


# --------------------------------------------------------------------------
# regions given by patterns

@dataclass(frozen=True)
class Box:
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def holds(self, z: Sequence[Fraction], half: Fraction) -> bool:
        """Whether the cube of half-side ``half`` around ``z`` lies inside."""
        return all(l <= c - half and c + half <= h for c, l, h in zip(z, self.lo, self.hi))

    def text(self) -> str:
        return " ".join(f"{_fmt(l)}..{_fmt(h)}" for l, h in zip(self.lo, self.hi))


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class Pattern:
    """A union of boxes, optionally repeated with integer periods.

    With ``absolute`` the test is applied to ``|z|`` coordinatewise, which
    mirrors a periodic pattern across the coordinate hyperplanes.
    """

    boxes: tuple[Box, ...]
    period: tuple[int, ...] | None = None
    absolute: bool = False

    @property
    def d(self) -> int:
        return len(self.boxes[0].lo)

    def contains_cell(self, c: Cell) -> bool:
        z = barycentre(c)
        half = Fraction(1, 2 ** (c.level + 1))
        return self.holds(z, half)

    def holds(self, z, half) -> bool:
        if self.absolute:
            z = tuple(abs(v) for v in z)
        if self.period is None:
            return any(box.holds(z, half) for box in self.boxes)
        v = tuple(c % p for c, p in zip(z, self.period))
        return self._periodic(v, half)

    def _periodic(self, v, half) -> bool:
        for shift in itertools.product((-1, 0, 1), repeat=len(v)):
            w = tuple(c + s * p for c, s, p in zip(v, shift, self.period))
            if any(box.holds(w, half) for box in self.boxes):
                return True
        return False

    def automaton(self, level: int, b: int, tracks: Sequence[str]) -> SyncAutomaton:
        """Barycentres of level-``level`` cells inside the pattern."""
        half = Fraction(1, 2 ** (level + 1))
        if self.period is None:
            bound = max(int(abs(x)) + 1 for box in self.boxes for x in box.lo + box.hi)
            return region_automaton(b, tracks, level, lambda v: self.holds(v, half), bound=bound)
        if self.absolute:
            return region_automaton(b, tracks, level, lambda v: self._periodic(v, half),
                                    period=self.period, absolute=True)
        return region_automaton(b, tracks, level, lambda v: self._periodic(v, half),
                                period=self.period)

    def text(self) -> str:
        boxes = "; ".join(box.text() for box in self.boxes)
        if self.period is None:
            return f"box {boxes}"
        head = "periodic-abs" if self.absolute else "periodic"
        return f"{head} {boxes} every " + " ".join(str(p) for p in self.period)


def _number(text: str, scale: int) -> Fraction:
    return Fraction(text) / scale


def parse_pattern(text: str, d: int) -> Pattern:
    """Parse ``box x1..x2 [y1..y2] [@k]`` or
    ``periodic[-abs] <box>; <box> ... every p1 [p2] [@k]``.

    Coordinates are in level-0 units, or in units of ``1/2^k`` with ``@k``.
    """
    words = text.split()
    if not words:
        raise ValueError("empty pattern")
    scale = 1
    if words[-1].startswith("@"):
        scale = 2 ** int(words[-1][1:])
        words = words[:-1]
    kind, rest = words[0], " ".join(words[1:])
    period = None
    if kind in ("periodic", "periodic-abs"):
        if " every " not in f" {rest} ":
            raise ValueError(f"periodic pattern needs 'every': {text!r}")
        rest, per = re.split(r"\bevery\b", rest)
        period = tuple(int(p) for p in per.split())
        if len(period) == 1:
            period = period * d
        if len(period) != d or any(p <= 0 for p in period):
            raise ValueError(f"bad period in {text!r}")
    elif kind != "box":
        raise ValueError(f"unknown pattern kind {kind!r}")
    boxes = []
    for part in rest.split(";"):
        ranges = part.split()
        if len(ranges) != d:
            raise ValueError(f"box {part.strip()!r} needs {d} ranges")
        lo, hi = [], []
        for r in ranges:
            a, _, c = r.partition("..")
            if not c:
                raise ValueError(f"range {r!r} must look like a..b")
            lo.append(_number(a, scale))
            hi.append(_number(c, scale))
        if any(l >= h for l, h in zip(lo, hi)):
            raise ValueError(f"empty box in {text!r}")
        boxes.append(Box(tuple(lo), tuple(hi)))
    return Pattern(tuple(boxes), period, kind == "periodic-abs")


# --------------------------------------------------------------------------
# hierarchical meshes

@dataclass
class HierarchicalMesh:
    """Levels ``0..N-1``; ``languages[l - 1]`` is ``L_l`` for ``l >= 1``.

    ``patterns[l - 1]``, when known, is the geometric description of
    ``Omega^l`` the language was generated from.
    """

    dimension: int
    degree: int
    base: int
    languages: list[SyncAutomaton]
    patterns: list[tuple[Pattern, ...] | None] = field(default_factory=list)

    def __post_init__(self):
        check_base(self.base)
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        tracks = coordinate_tracks(self.dimension)
        fixed = []
        for l, A in enumerate(self.languages, 1):
            if A.k != self.dimension or A.base != self.base:
                raise ValueError(f"L_{l} has the wrong base or track count")
            A = reorder(rename(A, dict(zip(A.tracks, tracks))), tracks)
            stray = intersect(A, _non_level(self.dimension, l - 1, self.base))
            if not is_empty(stray):
                raise ValueError(f"L_{l} contains words that are not level-{l - 1} barycentres")
            fixed.append(A)
        self.languages = fixed
        if len(self.patterns) < len(self.languages):
            self.patterns = list(self.patterns) + [None] * (len(self.languages) - len(self.patterns))

    @property
    def levels(self) -> int:
        return len(self.languages) + 1

    @property
    def tracks(self) -> tuple[str, ...]:
        return coordinate_tracks(self.dimension)

    def L(self, l: int) -> SyncAutomaton:
        """``L_l`` for ``1 <= l``; levels past the top are empty."""
        if l < 1:
            raise ValueError("Omega^0 is all of R^d and has no language")
        if l > len(self.languages):
            return empty_automaton(self.base, self.tracks)
        return self.languages[l - 1]

    def level_filter(self, l: int) -> SyncAutomaton:
        return level_filter_automaton(self.dimension, l, self.base, self.tracks)

    def structure(self) -> Structure:
        S = Structure(self.base, self.dimension)
        for l in range(1, self.levels + 1):
            S.add_predicate(f"L{l}", self.L(l))
        for l in range(self.levels + 1):
            S.add_predicate(f"F{l}", self.level_filter(l))
        return S

    def contains_cell(self, l: int, c: Cell) -> bool:
        """Geometric membership of a level-``(l-1)`` cell in ``Omega^l``."""
        if l == 0:
            return True
        if l > len(self.languages):
            return False
        pats = self.patterns[l - 1]
        if pats is None:
            from .numeration import encode_point
            from .automata import convolve
            word = encode_point(barycentre(c), self.base)
            return self.L(l).accepts(convolve(word))
        return any(p.contains_cell(c) for p in pats)

    @classmethod
    def from_patterns(cls, dimension: int, degree: int, base: int,
                      levels: Sequence[Sequence[Pattern]]) -> "HierarchicalMesh":
        tracks = coordinate_tracks(dimension)
        langs = []
        for l, pats in enumerate(levels, 1):
            if pats:
                langs.append(minimize(union_all([p.automaton(l - 1, base, tracks) for p in pats])))
            else:
                langs.append(empty_automaton(base, tracks))
        return cls(dimension, degree, base, langs, [tuple(p) for p in levels])

    def with_level(self, L_new: SyncAutomaton, patterns: Sequence[Pattern] | None = None) -> "HierarchicalMesh":
        return HierarchicalMesh(self.dimension, self.degree, self.base,
                                list(self.languages) + [L_new],
                                list(self.patterns) + [tuple(patterns) if patterns else None])


@lru_cache(maxsize=None)
def _non_level(d: int, level: int, b: int) -> SyncAutomaton:
    from .automata import complement
    from .relations import valid_encoding_automaton
    tracks = coordinate_tracks(d)
    return minimize(complement(level_filter_automaton(d, level, b, tracks),
                               valid_encoding_automaton(b, d, tracks)))


def decompose_by_level(L: SyncAutomaton, levels: int, d: int | None = None) -> list[SyncAutomaton]:
    """``[L ∩ F_0, ..., L ∩ F_{levels-2}]``; component ``l - 1`` is ``L_l``."""
    d = L.k if d is None else d
    out = []
    for l in range(1, levels):
        F = level_filter_automaton(d, l - 1, L.base, L.tracks)
        out.append(minimize(intersect(L, F)))
    return out


# --------------------------------------------------------------------------
# nestedness

@dataclass
class CheckResult:
    ok: bool
    level: int | None = None
    witness: tuple[Fraction, ...] | None = None
    detail: str = ""
    violators: SyncAutomaton | None = None

    def __bool__(self) -> bool:
        return self.ok


def shift_constants(d: int, l: int) -> list[tuple[Fraction, ...]]:
    """The ``2^d`` vectors ``(±1/2^l, ..., ±1/2^l)``."""
    s = Fraction(1, 2 ** l)
    return [tuple(sign * s for sign in signs) for signs in itertools.product((-1, 1), repeat=d)]


def nestedness_formula(d: int, l: int) -> str:
    """Upsilon_l: every level-(l-1) cell of Omega^l lies in Omega^(l-1)."""
    atoms = " ".join(f"(in (add u s{j}) L{l - 1})" for j in range(2 ** d))
    return f"(forall u (imp (in u L{l}) (or {atoms})))"


def _violation_formula(d: int, l: int) -> str:
    atoms = " ".join(f"(not (in (add u s{j}) L{l - 1}))" for j in range(2 ** d))
    return f"(and (in u L{l}) {atoms})"


def check_nested(M: HierarchicalMesh) -> CheckResult:
    """Decide ``Omega^1 ⊇ ... ⊇ Omega^{N-1}``.

    On failure the witness is the barycentre of a level-``(l-1)`` cell of
    ``Omega^l`` outside ``Omega^{l-1}`` (shortest, then lexicographically
    least encoding).
    """
    S = M.structure()
    for l in range(2, M.levels):
        for j, s in enumerate(shift_constants(M.dimension, l)):
            S.add_constant(f"s{j}", s)
        A, free = compile_formula(_violation_formula(M.dimension, l), S)
        w = witness(A, free, M.dimension)
        if w is not None:
            return CheckResult(False, l, w["u"],
                               f"level-{l - 1} cell of Omega^{l} outside Omega^{l - 1}", A)
    return CheckResult(True)


# --------------------------------------------------------------------------
# connectivity patterns

def index_set(d: int, m: int) -> list[tuple[int, ...]]:
    """Offsets of the support cells of a degree-``m`` B-spline from its anchor cell."""
    h = (m + 1) // 2
    return list(itertools.product(range(-h, m - h + 1), repeat=d))


def extended_index_set(d: int, m: int) -> list[tuple[int, ...]]:
    """Offsets of every cell meeting the closed support."""
    h = (m + 1) // 2
    return list(itertools.product(range(-h - 1, m - h + 2), repeat=d))


def boxes_connected(boxes: Sequence[tuple[tuple[int, int], ...]]) -> bool:
    """Whether a union of closed integer boxes ``((lo, hi), ...)`` is connected."""
    n = len(boxes)
    if n == 0:
        return False
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if all(a[0] <= c[1] and c[0] <= a[1] for a, c in zip(boxes[i], boxes[j])):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) == 1


def cells_connected(offsets) -> bool:
    """Connectivity of a union of closed unit cells (vertex contact counts)."""
    return boxes_connected([tuple((c, c + 1) for c in o) for o in offsets])


@dataclass(frozen=True)
class ConnectivityPattern:
    degree: int
    dimension: int
    J: frozenset
    connected: bool

    @property
    def index_set(self) -> list[tuple[int, ...]]:
        return index_set(self.dimension, self.degree)


class ConnectedSubsets:
    """All nonempty ``J ⊆ I_m`` with their connectivity, produced lazily.

    There are ``2^((m+1)^d) - 1`` of them, so iteration is only practical
    for small ``(m+1)^d``; membership tests are always cheap.
    """

    def __init__(self, d: int, m: int, budget: int = DEFAULT_ATOM_BUDGET):
        if (m + 1) ** d > budget:
            raise ResourceError(f"(m+1)^d = {(m + 1) ** d} exceeds the atom budget {budget}")
        self.d, self.m = d, m
        self.I = index_set(d, m)

    def classify(self, J) -> ConnectivityPattern:
        J = frozenset(tuple(j) for j in J)
        if not J or not J <= set(self.I):
            raise ValueError("J must be a nonempty subset of I_m")
        return ConnectivityPattern(self.m, self.d, J, cells_connected(J))

    def __contains__(self, J) -> bool:
        return self.classify(J).connected

    def __len__(self) -> int:
        return 2 ** len(self.I) - 1

    def __iter__(self) -> Iterator[ConnectivityPattern]:
        n = len(self.I)
        for mask in range(1, 2 ** n):
            J = frozenset(self.I[i] for i in range(n) if mask >> i & 1)
            yield ConnectivityPattern(self.m, self.d, J, cells_connected(J))


def connected_subsets(d: int, m: int, budget: int = DEFAULT_ATOM_BUDGET) -> ConnectedSubsets:
    return ConnectedSubsets(d, m, budget)


# --------------------------------------------------------------------------
# Assumption B

def _closed_pieces(d: int, m: int, outside) -> list:
    """Pieces of the closed support ``[-h, m-h+1]^d`` cut by the closed cells
    at the offsets in ``outside``."""
    h = (m + 1) // 2
    lo, hi = -h, m - h + 1
    pieces = []
    for o in outside:
        box = tuple((max(c, lo), min(c + 1, hi)) for c in o)
        if all(a <= c for a, c in box):
            pieces.append(box)
    return pieces


@lru_cache(maxsize=None)
def _atom(A: SyncAutomaton, offset: tuple[Fraction, ...], level: int) -> SyncAutomaton:
    """DFA over ``x`` tracks accepting level-``level`` barycentres ``u`` with
    ``u + offset`` in ``A``."""
    d = A.k
    src = tuple(f"u{i}" for i in range(d))
    dst = tuple(f"z{i}" for i in range(d))
    L = rename(A, dict(zip(A.tracks, dst)))
    J = join(shift_point_automaton(A.base, offset, src, dst), L)
    J = join(J, level_filter_automaton(d, level, A.base, src))
    P = project(J, src)
    return minimize(rename(P, dict(zip(src, coordinate_tracks(d)))))


def _product_classifier(F: SyncAutomaton, atoms: list[SyncAutomaton], bad) -> SyncAutomaton:
    """Lazy product of the DFA ``F`` with the atom DFAs; a final product state
    is accepting iff ``bad(bits)`` where ``bits[i]`` is atom ``i``'s verdict."""
    SINK = -1
    tracks = F.tracks
    Fd = determinize(F)
    atoms = [reorder(determinize(a), tracks) for a in atoms]
    start = (next(iter(Fd.initial)),) + tuple(next(iter(a.initial)) for a in atoms)
    memo: dict = {}

    def step(key):
        f, rest = key[0], key[1:]
        for letter, (nf,) in sorted(Fd.delta[f].items()):
            nxt = []
            for a, s in zip(atoms, rest):
                if s == SINK:
                    nxt.append(SINK)
                else:
                    ts = a.delta[s].get(letter)
                    nxt.append(ts[0] if ts else SINK)
            yield letter, (nf,) + tuple(nxt)

    def accepting(key):
        if key[0] not in Fd.accepting:
            return False
        bits = tuple(s != SINK and s in a.accepting for a, s in zip(atoms, key[1:]))
        if bits not in memo:
            memo[bits] = bad(bits)
        return memo[bits]

    return explore(F.base, tracks, [start], step, accepting)


def check_assumption_b(M: HierarchicalMesh, reading: str = "closed",
                       budget: int = DEFAULT_ATOM_BUDGET) -> CheckResult:
    """Decide Assumption B for levels ``0..N-2``.

    ``reading="closed"`` intersects the closed support with
    ``M^l = R^d \\ int Omega^{l+1}`` literally, which also involves the cells
    just outside the support.  ``reading="cells"`` classifies only the set
    ``J ⊆ I_m`` of support cells outside ``Omega^{l+1}`` by
    :func:`connected_subsets`.

    On failure the witness is the anchor barycentre of a violating
    B-spline and ``violators`` recognizes all violating anchors of that
    level.
    """
    if reading not in ("closed", "cells"):
        raise ValueError("reading must be 'closed' or 'cells'")
    d, m = M.dimension, M.degree
    patterns = connected_subsets(d, m, budget)
    inner = index_set(d, m)
    offsets = extended_index_set(d, m) if reading == "closed" else inner
    inner_pos = [offsets.index(o) for o in inner]
    for l in range(0, M.levels - 1):
        L_next = M.L(l + 1)
        scale = Fraction(1, 2 ** l)
        atoms = [_atom(L_next, tuple(c * scale for c in o), l) for o in offsets]
        cache: dict = {}

        def bad(bits):
            if all(bits[i] for i in inner_pos):
                return False
            outside = frozenset(o for o, bit in zip(offsets, bits) if not bit)
            if outside not in cache:
                if reading == "closed":
                    cache[outside] = not boxes_connected(_closed_pieces(d, m, outside))
                else:
                    cache[outside] = outside not in patterns
            return cache[outside]

        V = _product_classifier(M.level_filter(l), atoms, bad)
        w = shortest_word(V)
        if w is not None:
            point = tuple(decode(t, M.base) for t in w.tracks)
            return CheckResult(False, l, point,
                               f"level-{l} B-spline whose support meets M^{l} in a disconnected set",
                               minimize(V))
    return CheckResult(True)


# --------------------------------------------------------------------------
# mesh-spec files

def parse_mesh_spec(text: str, root: Path | str | None = None,
                    overrides: dict[str, str] | None = None) -> HierarchicalMesh:
    """Read a mesh specification.

    ``key = value`` lines set ``dimension``, ``degree``, ``base`` and
    ``levels``; a ``[level l]`` section lists either ``automaton = <path>``
    or one or more ``pattern = ...`` lines for ``Omega^l``.  Levels without
    a section are empty.  ``#`` starts a comment.
    """
    root = Path(root) if root is not None else Path(".")
    head: dict[str, str] = {}
    sections: dict[int, list[tuple[str, str]]] = {}
    current = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[level\s+(\d+)\]", line)
        if m:
            current = int(m.group(1))
            if current < 1:
                raise ValueError(f"line {n}: level sections start at 1")
            sections.setdefault(current, [])
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if current is None:
            head[key] = value
        else:
            sections[current].append((key, value))
    head.update(overrides or {})
    try:
        d = int(head["dimension"])
        m = int(head["degree"])
        b = int(head.get("base", "2"))
        N = int(head["levels"])
    except KeyError as exc:
        raise ValueError(f"mesh spec is missing {exc.args[0]!r}") from None
    if N < 1:
        raise ValueError("levels must be at least 1")
    if max(sections, default=0) >= N:
        raise ValueError(f"level section beyond levels - 1 = {N - 1}")
    tracks = coordinate_tracks(d)
    langs, pats = [], []
    for l in range(1, N):
        entries = sections.get(l, [])
        autos = [v for k, v in entries if k == "automaton"]
        pattern_lines = [v for k, v in entries if k == "pattern"]
        unknown = {k for k, _ in entries} - {"automaton", "pattern"}
        if unknown:
            raise ValueError(f"level {l}: unknown keys {sorted(unknown)}")
        if autos and pattern_lines:
            raise ValueError(f"level {l}: give either automata or patterns")
        if autos:
            A = union_all([load(root / p) for p in autos])
            A = reorder(rename(A, dict(zip(A.tracks, tracks))), tracks)
            langs.append(minimize(A))
            pats.append(None)
        else:
            ps = tuple(parse_pattern(p, d) for p in pattern_lines)
            if ps:
                langs.append(minimize(union_all([p.automaton(l - 1, b, tracks) for p in ps])))
            else:
                langs.append(empty_automaton(b, tracks))
            pats.append(ps)
    return HierarchicalMesh(d, m, b, langs, pats)


def load_mesh_spec(path, overrides: dict[str, str] | None = None) -> HierarchicalMesh:
    """Read a mesh spec; ``overrides`` replaces header keys such as ``degree``."""
    path = Path(path)
    return parse_mesh_spec(path.read_text(encoding="utf-8"), path.parent, overrides)


def format_mesh_spec(d: int, m: int, b: int, levels: Sequence[Sequence[Pattern] | str | None]) -> str:
    """Mesh spec text; an entry of ``levels`` is a pattern list or an automaton path."""
    lines = [f"dimension = {d}", f"degree = {m}", f"base = {b}", f"levels = {len(levels) + 1}"]
    for l, entry in enumerate(levels, 1):
        lines.append("")
        lines.append(f"[level {l}]")
        if isinstance(entry, str):
            lines.append(f"automaton = {entry}")
        else:
            for p in entry or ():
                lines.append(f"pattern = {p.text()}")
    return "\n".join(lines) + "\n"


def save_mesh(M: HierarchicalMesh, directory, name: str = "mesh.txt") -> Path:
    """Write ``M`` with one automaton file per level."""
    from .automata import save
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for l, A in enumerate(M.languages, 1):
        pats = M.patterns[l - 1]
        if pats is not None:
            entries.append(list(pats))
        else:
            fname = f"{Path(name).stem}_L{l}.aut"
            save(A, directory / fname)
            entries.append(fname)
    path = directory / name
    path.write_text(format_mesh_spec(M.dimension, M.degree, M.base, entries), encoding="utf-8")
    return path
