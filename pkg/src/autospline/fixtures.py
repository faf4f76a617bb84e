"""Shipped example meshes and splines.

Each mesh fixture carries its patterns, a level-0 window on which the
brute-force oracle is run, and a default refinement (patterns for one more
level).  Spline fixtures name a mesh fixture and a closed-form coefficient
function usable by :func:`autospline.oracle.oracle_eval`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .mesh import HierarchicalMesh, Pattern, parse_pattern
from .oracle import pattern_domain

# lower-left corners of the unit cells of Omega^1 in the window
FIG1_L1 = [(0, 1), (1, 1), (7, 1), (8, 1), (1, 2), (2, 2), (0, 2), (6, 2), (8, 2), (7, 2),
           (0, 3), (1, 3), (7, 3), (8, 3), (3, 0), (4, 0), (5, 0), (3, 4), (4, 4), (5, 4)]
# barycentres of the half cells of Omega^2
FIG1_L2 = ["3/4 5/4", "3/4 7/4", "5/4 7/4", "5/4 9/4", "7/4 9/4", "7/4 11/4", "5/4 11/4",
           "5/4 13/4", "3/4 13/4", "3/4 15/4", "33/4 15/4", "33/4 13/4", "31/4 13/4",
           "31/4 11/4", "29/4 11/4", "29/4 9/4", "31/4 9/4", "31/4 7/4", "33/4 7/4",
           "33/4 5/4", "15/4 1/4", "17/4 1/4", "19/4 1/4", "21/4 1/4", "17/4 3/4", "19/4 3/4",
           "15/4 19/4", "17/4 19/4", "19/4 19/4", "21/4 19/4", "17/4 17/4", "19/4 17/4"]


def _unit_boxes(corners) -> str:
    return "box " + "; ".join(f"{x}..{x + 1} {y}..{y + 1}" for x, y in corners)


def _half_boxes(centres) -> str:
    q = Fraction(1, 4)
    parts = []
    for c in centres:
        x, y = (Fraction(v) for v in c.split())
        parts.append(f"{x - q}..{x + q} {y - q}..{y + q}")
    return "box " + "; ".join(parts)


@dataclass(frozen=True)
class MeshFixture:
    name: str
    dimension: int
    degree: int
    base: int
    levels: tuple[tuple[str, ...], ...]
    window: tuple[tuple[int, int], ...]
    refinement: tuple[str, ...] = ()

    def patterns(self) -> list[list[Pattern]]:
        return [[parse_pattern(p, self.dimension) for p in lv] for lv in self.levels]

    def mesh(self) -> HierarchicalMesh:
        return HierarchicalMesh.from_patterns(self.dimension, self.degree, self.base,
                                              self.patterns())

    def omega(self):
        return pattern_domain(self.patterns())

    def refined(self) -> "MeshFixture":
        return MeshFixture(self.name + "-refined", self.dimension, self.degree, self.base,
                           self.levels + (self.refinement,), self.window)

    def with_levels(self, name: str, levels) -> "MeshFixture":
        return MeshFixture(name, self.dimension, self.degree, self.base,
                           tuple(tuple(lv) for lv in levels), self.window)


MESHES: dict[str, MeshFixture] = {
    "fig1-mesh": MeshFixture(
        "fig1-mesh", 2, 1, 2, ((_unit_boxes(FIG1_L1),), (_half_boxes(FIG1_L2),)),
        ((-2, 11), (-2, 7)), ("box 4..9/2 0..1/2",)),
    "fig5-left": MeshFixture(
        "fig5-left", 2, 1, 2,
        (("periodic 0..1 0..1; 1..2 1..2 every 2 2",),
         ("periodic 0..1 0..1; 1..2 1..2 every 2 2",)),
        ((-2, 3), (-2, 3)), ("periodic 0..1/2 0..1/2 every 2 2",)),
    "fig5-right": MeshFixture(
        "fig5-right", 2, 1, 2,
        (("periodic 0..1 0..1 every 1 2",), ("periodic 0..1 1/2..1 every 1 2",)),
        ((-2, 3), (-2, 3)), ("periodic 0..1 3/4..1 every 1 2",)),
    "interval-0-2": MeshFixture(
        "interval-0-2", 1, 1, 2, (("box 0..2",),), ((-3, 5),), ("box 0..1",)),
    "interval-0-4": MeshFixture(
        "interval-0-4", 1, 2, 2, (("box 0..4",),), ((-3, 7),), ("box 1..3",)),
    "interval-split": MeshFixture(
        "interval-split", 1, 2, 2, (("box 0..1; 2..3",),), ((-3, 6),), ("box 0..1",)),
}


def mutated_nested_fixtures() -> list[MeshFixture]:
    """Ten non-nested variants: a level-2 region outside ``Omega^1``."""
    out = []
    fig1 = MESHES["fig1-mesh"]
    # drop a unit cell of Omega^1 that carries refined cells
    for k, corner in enumerate([(0, 1), (1, 2), (7, 2), (8, 3), (4, 0)]):
        L1 = [c for c in FIG1_L1 if c != corner]
        out.append(fig1.with_levels(f"fig1-drop-{k}",
                                    [[_unit_boxes(L1)], [_half_boxes(FIG1_L2)]]))
    left = MESHES["fig5-left"]
    out.append(left.with_levels("fig5-left-shifted", [
        ["periodic 0..1 0..1; 1..2 1..2 every 2 2"],
        ["periodic 1..2 0..1; 0..1 1..2 every 2 2"]]))
    right = MESHES["fig5-right"]
    out.append(right.with_levels("fig5-right-outside", [
        ["periodic 0..1 0..1 every 1 2"], ["periodic 0..1 3/2..2 every 1 2"]]))
    out.append(right.with_levels("fig5-right-extra", [
        ["periodic 0..1 0..1 every 1 2"], ["periodic 0..1 1/2..1 every 1 2", "box 0..1/2 1..3/2"]]))
    line = MESHES["interval-0-4"]
    out.append(MeshFixture("interval-outside", 1, 2, 2, (("box 0..4",), ("box 7/2..9/2",)),
                           ((-3, 7),)))
    out.append(MeshFixture("interval-far", 1, 2, 2, (("box 0..1",), ("box 5..11/2",)),
                           line.window))
    return out


# --------------------------------------------------------------------------
# splines

@dataclass(frozen=True)
class SplineFixture:
    name: str
    kind: str
    mesh: MeshFixture | None
    coefficient: Callable[[int, tuple], Fraction]
    window: tuple[tuple[int, int], ...]
    refinement: tuple[str, ...] = ()


def _ones(level, anchor):
    return Fraction(1)


def spline_fixtures() -> dict[str, SplineFixture]:
    from .spline import g_coefficient, h_coefficient, linear_coefficient
    return {
        "linear-m1": SplineFixture("linear-m1", "linear", None, linear_coefficient([1], 0, 1),
                                   ((-4, 4),), ("box 0..2",)),
        "linear-m2": SplineFixture("linear-m2", "linear", None, linear_coefficient([1], 0, 2),
                                   ((-4, 4),), ("box 0..4",)),
        "linear-m3": SplineFixture("linear-m3", "linear", None, linear_coefficient([1], 0, 3),
                                   ((-4, 4),), ("box 0..4",)),
        "spline-g": SplineFixture("spline-g", "g", None, g_coefficient, ((-8, 16),),
                                  ("box 0..4",)),
        "spline-h": SplineFixture("spline-h", "h", None, h_coefficient, ((-4, 4),),
                                  ("periodic-abs 0..1/2 every 2",)),
        "ones-0-2": SplineFixture("ones-0-2", "ones", MESHES["interval-0-2"], _ones, ((-3, 5),),
                                  MESHES["interval-0-2"].refinement),
    }


def example_names() -> list[str]:
    return ["fig1-mesh", "fig5-left", "fig5-right", "spline-g", "spline-h",
            "linear-m1", "linear-m2", "linear-m3"]


def build_spline(name: str):
    """The :class:`RegularSpline` of a spline fixture."""
    from .spline import constant_spline, linear_spline, spline_g, spline_h
    F = spline_fixtures()[name]
    if F.kind == "linear":
        m = int(name[-1])
        return linear_spline([1], 0, m, 6 if m == 3 else 2)
    if F.kind == "g":
        return spline_g()
    if F.kind == "h":
        return spline_h()
    return constant_spline(F.mesh.mesh(), 1)


def refinement_language(f, patterns: tuple[str, ...]):
    """``L_N`` for the next level of ``f``'s mesh from pattern text."""
    from .automata import minimize, union_all
    M = f.mesh
    pats = [parse_pattern(p, M.dimension) for p in patterns]
    L = minimize(union_all([p.automaton(M.levels - 1, M.base, M.tracks) for p in pats]))
    return L, pats
