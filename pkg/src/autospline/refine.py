"""One refinement step: append ``Omega^N`` and transfer the coefficients.

Level-``(N-1)`` functions whose support falls inside the new domain leave
the basis.  Each is rewritten with the two-scale relation
``N_{i,m} = sum_j binom(m+1, j) / 2^m N'_{2i+j,m}`` and its mass moves to the
level-``N`` children, all of which are selected in the refined basis.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

from .automata import (SyncAutomaton, complement, difference, join, join_all, minimize, project,
                       rename, reorder, union)
from .kraft import (KraftBasis, _meets_formula, _structure, anchor_offsets, compile_level,
                    kraft_formula)
from .logic import compile_formula
from .mesh import HierarchicalMesh, Pattern, check_assumption_b, check_nested, coordinate_tracks
from .relations import (addition_automaton, point_automaton, scalar_multiple_automaton,
                        shift_point_automaton, valid_encoding_automaton)
from .spline import LAM, RegularSpline, anchor_tracks


class RefinementError(ValueError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class SubdivisionStencil:
    degree: int
    dimension: int
    weights: dict[tuple[int, ...], Fraction]

    def one_dimensional(self) -> list[Fraction]:
        return [Fraction(comb(self.degree + 1, j), 2 ** self.degree) for j in range(self.degree + 2)]


def subdivision_stencil(m: int, d: int = 1) -> SubdivisionStencil:
    """``lambda_j = prod_k binom(m+1, j_k) / 2^m`` for ``j`` in ``{0..m+1}^d``."""
    w1 = [Fraction(comb(m + 1, j), 2 ** m) for j in range(m + 2)]
    weights = {j: prod((w1[c] for c in j), start=Fraction(1))
               for j in itertools.product(range(m + 2), repeat=d)}
    return SubdivisionStencil(m, d, weights)


def parent_offset(m: int, child_level: int, j: int) -> Fraction:
    """``z_parent - z_child`` for the ``j``-th child, one coordinate."""
    c = m + 2 if m % 2 else m + 1
    return Fraction(c, 2 ** (child_level + 1)) - Fraction(j, 2 ** child_level)


@dataclass
class RefinedMesh:
    parent: HierarchicalMesh
    parent_basis: KraftBasis
    mesh: HierarchicalMesh
    basis: KraftBasis
    removed: SyncAutomaton


def refine_mesh(M: HierarchicalMesh, L_new: SyncAutomaton, basis: KraftBasis,
                patterns: tuple[Pattern, ...] | None = None,
                verify: bool | None = None) -> RefinedMesh:
    """Append ``Omega^N`` (given by ``L_N``) and update the Kraft languages.

    Only the top two levels change: ``L'_{N-1} = L_{N-1} ∧ Psi_{N-1}`` and
    ``L'_N = Gamma_N``.  Raises :class:`RefinementError` with a witness if
    the new domain is not inside ``Omega^{N-1}``, or, when ``verify`` holds
    (the default for a verified basis), if the refined mesh violates
    Assumption B.
    """
    N = M.levels
    verify = basis.verified if verify is None else verify
    new = M.with_level(L_new, patterns)
    if N >= 2:
        r = check_nested(new)
        if not r.ok:
            raise RefinementError(f"new level is not nested (witness {r.witness})", r)
    if verify:
        r = check_assumption_b(new)
        if not r.ok:
            raise RefinementError(
                f"refined mesh violates Assumption B at level {r.level} (witness {r.witness})", r)
    tracks = coordinate_tracks(M.dimension)
    langs = list(basis.languages[:N - 1])
    formulas = list(basis.formulas[:N - 1])
    top = N - 1
    # keep the old top level only where the support still meets M^{N-1}
    keep_formula = f"(and (in u B) {_meets_formula(anchor_offsets(M.degree, M.dimension, top), top)})"
    S = _structure(new, top)
    S.add_predicate("B", basis.languages[top])
    A, _ = compile_formula(keep_formula, S)
    kept = minimize(reorder(rename(A, dict(zip(A.tracks, tracks))), tracks))
    langs.append(kept)
    formulas.append(keep_formula.replace("(in u B)", f"(in u Lhat{top})"))
    gamma = kraft_formula(new, N)
    langs.append(compile_level(new, N, gamma))
    formulas.append(gamma)
    removed = minimize(difference(basis.languages[top], kept))
    return RefinedMesh(M, basis, new, KraftBasis(new, langs, formulas, verify), removed)


def refine_spline(f: RegularSpline, RM: RefinedMesh) -> RegularSpline:
    """Coefficients of ``f`` on the refined mesh; ``f`` itself is unchanged."""
    M, N = RM.parent, RM.parent.levels
    if f.mesh.levels != N or f.degree != M.degree:
        raise RefinementError("spline does not live on the refined mesh's parent")
    d, m, b = M.dimension, M.degree, M.base
    ys = anchor_tracks(d)
    on_y = lambda L: reorder(rename(L, dict(zip(L.tracks, ys))), ys)
    rels = list(f.relations[:N - 1])
    rels.append(minimize(join(f.relations[N - 1], on_y(RM.basis.languages[N - 1]))))

    # coefficients of the removed parents, zero everywhere else
    removed = on_y(RM.removed)
    outside = complement(removed, valid_encoding_automaton(b, d, ys))
    total = minimize(union(join(f.relations[N - 1], removed),
                           join(outside, point_automaton(b, (LAM,), (0,)))))

    ws = tuple(f"__w{i}" for i in range(d))
    parent = rename(total, dict(zip(ys, ws)))
    acc = minimize(join(on_y(RM.basis.languages[N]), point_automaton(b, ("__acc",), (0,))))
    add = addition_automaton(b, 1, ("__acc", "__v", "__s"))
    for j, weight in sorted(subdivision_stencil(m, d).weights.items()):
        off = tuple(parent_offset(m, N, c) for c in j)
        Q = minimize(project(join(shift_point_automaton(b, off, ys, ws), parent), ys + (LAM,)))
        Q = minimize(project(join(Q, scalar_multiple_automaton(weight, b, (LAM, "__v"))), ys + ("__v",)))
        acc = minimize(project(join_all([acc, Q, add]), ys + ("__s",)))
        acc = rename(acc, {"__s": "__acc"})
    rels.append(rename(acc, {"__acc": LAM}))
    return RegularSpline(RM.mesh, m, rels, RM.basis)
