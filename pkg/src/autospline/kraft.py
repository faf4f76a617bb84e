"""Kraft-selected hierarchical B-spline bases as automata.

A level-``l`` B-spline is named by the barycentre of its anchor cell.  It
is selected when its support lies in ``Omega^l`` and meets
``M^l = R^d \\ int Omega^{l+1}``; both conditions are first-order
formulas over the mesh languages, compiled here level by level.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .automata import (SyncAutomaton, enumerate_words, intersect, load, minimize, rename, reorder,
                       save)
from .logic import Structure, compile_formula
from .numeration import decode
from .relations import region_automaton
from .mesh import (HierarchicalMesh, check_assumption_b, check_nested, coordinate_tracks,
                   index_set, load_mesh_spec, shift_constants)


class VerificationError(RuntimeError):
    """The mesh failed a prerequisite check; carries the check result."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class AnchorOffsets:
    t: dict[tuple[int, ...], tuple[Fraction, ...]]
    r: dict[tuple[tuple[int, ...], int], tuple[Fraction, ...]]


def anchor_offsets(m: int, d: int, level: int) -> AnchorOffsets:
    """``t_i = i / 2^l`` for ``i`` in ``I_m`` and ``r_ij = t_i + s_j^(l+1)``."""
    scale = Fraction(1, 2 ** level)
    t = {i: tuple(c * scale for c in i) for i in index_set(d, m)}
    shifts = shift_constants(d, level + 1)
    r = {(i, j): tuple(a + b for a, b in zip(ti, s))
         for i, ti in t.items() for j, s in enumerate(shifts)}
    return AnchorOffsets(t, r)


def _name(prefix, idx, j=None):
    key = "_".join(str(c).replace("-", "m") for c in idx)
    return f"{prefix}{key}" if j is None else f"{prefix}{key}_{j}"


def _meets_formula(offs: AnchorOffsets, level: int) -> str:
    atoms = " ".join(f"(not (in (add u {_name('t', i)}) L{level + 1}))" for i in offs.t)
    return f"(or {atoms})"


def _inside_formula(offs: AnchorOffsets, level: int, d: int) -> str:
    parts = []
    for i in offs.t:
        alts = " ".join(f"(in (add u {_name('r', i, j)}) L{level})" for j in range(2 ** d))
        parts.append(f"(or {alts})")
    return "(and " + " ".join(parts) + ")"


def kraft_formula(M: HierarchicalMesh, level: int) -> str:
    """Theta_l for ``l < N-1`` and Gamma_{N-1} for the top level."""
    N = M.levels
    if level == 0:
        if N == 1:
            return "(in u F0)"
        return f"(and (in u F0) {_meets_formula(anchor_offsets(M.degree, M.dimension, 0), 0)})"
    offs = anchor_offsets(M.degree, M.dimension, level)
    inside = _inside_formula(offs, level, M.dimension)
    if level == N - 1:
        return f"(and (in u F{level}) {inside})"
    return f"(and (in u F{level}) {inside} {_meets_formula(offs, level)})"


def _structure(M: HierarchicalMesh, level: int) -> Structure:
    S = M.structure()
    offs = anchor_offsets(M.degree, M.dimension, level)
    for i, v in offs.t.items():
        S.add_constant(_name("t", i), v)
    for (i, j), v in offs.r.items():
        S.add_constant(_name("r", i, j), v)
    return S


def compile_level(M: HierarchicalMesh, level: int, formula: str | None = None) -> SyncAutomaton:
    """Automaton over the coordinate tracks for a formula in the variable ``u``."""
    formula = formula or kraft_formula(M, level)
    A, free = compile_formula(formula, _structure(M, level))
    tracks = coordinate_tracks(M.dimension)
    if free != ["u"]:
        raise ValueError(f"expected the single free variable u, got {free}")
    return minimize(reorder(rename(A, dict(zip(A.tracks, tracks))), tracks))


@dataclass
class KraftBasis:
    mesh: HierarchicalMesh
    languages: list[SyncAutomaton]
    formulas: list[str] = field(default_factory=list)
    verified: bool = True

    def L_hat(self, level: int) -> SyncAutomaton:
        return self.languages[level]


def build_kraft_languages(M: HierarchicalMesh, force: bool = False) -> KraftBasis:
    """Compile ``L^_0 .. L^_{N-1}``.

    Without ``force`` the mesh must be nested and satisfy Assumption B;
    otherwise :class:`VerificationError` is raised.
    """
    if not force:
        r = check_nested(M)
        if not r.ok:
            raise VerificationError(f"mesh is not nested (witness {r.witness})", r)
        r = check_assumption_b(M)
        if not r.ok:
            raise VerificationError(f"Assumption B fails at level {r.level} (witness {r.witness})", r)
    formulas = [kraft_formula(M, l) for l in range(M.levels)]
    langs = [compile_level(M, l, f) for l, f in enumerate(formulas)]
    return KraftBasis(M, langs, formulas, not force)


def anchors_in_window(L: SyncAutomaton, level: int, window) -> set[tuple[Fraction, ...]]:
    """Level-``level`` barycentres of ``L`` inside the level-0 box ``window``."""
    tracks = tuple(L.tracks)
    bound = max(max(abs(lo), abs(hi)) for lo, hi in window) + 1
    box = region_automaton(L.base, tracks, level,
                           lambda v: all(lo < c < hi for c, (lo, hi) in zip(v, window)),
                           bound=bound)
    words, done = enumerate_words(intersect(L, box))
    if not done:
        raise RuntimeError("window enumeration did not terminate")
    return {tuple(decode(t, L.base) for t in w.tracks) for w in words}


# --------------------------------------------------------------------------
# manifests

def save_basis(K: KraftBasis, directory, mesh_ref: str | None = None) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    M = K.mesh
    lines = ["kind = basis", f"dimension = {M.dimension}", f"degree = {M.degree}",
             f"base = {M.base}", f"levels = {M.levels}",
             f"verified = {'true' if K.verified else 'false'}"]
    if mesh_ref:
        lines.append(f"mesh = {mesh_ref}")
    for l, A in enumerate(K.languages):
        fname = f"basis_L{l}.aut"
        save(A, directory / fname)
        lines += ["", f"[level {l}]", f"language = {fname}"]
        if l < len(K.formulas):
            lines.append(f"formula = {K.formulas[l]}")
    path = directory / "basis.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_manifest(path) -> tuple[dict[str, str], dict[int, dict[str, str]]]:
    """``key = value`` header plus ``[level l]`` sections; ``#`` comments."""
    head: dict[str, str] = {}
    sections: dict[int, dict[str, str]] = {}
    current = None
    for n, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[level") and line.endswith("]"):
            current = int(line[len("[level"):-1])
            sections[current] = {}
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        (head if current is None else sections[current])[key] = value
    return head, sections


def load_basis(path, mesh: HierarchicalMesh | None = None) -> KraftBasis:
    path = Path(path)
    head, sections = read_manifest(path)
    if head.get("kind") != "basis":
        raise ValueError(f"{path} is not a basis manifest")
    if mesh is None:
        mesh = load_mesh_spec(path.parent / head["mesh"])
    tracks = coordinate_tracks(mesh.dimension)
    langs, formulas = [], []
    for l in range(int(head["levels"])):
        A = load(path.parent / sections[l]["language"])
        langs.append(reorder(rename(A, dict(zip(A.tracks, tracks))), tracks))
        formulas.append(sections[l].get("formula", ""))
    return KraftBasis(mesh, langs, formulas, head.get("verified") == "true")
