"""Brute-force reference semantics on explicit geometry.

Nothing here touches automata.  Domains are callables ``omega(l, index)``
telling whether the level-``(l-1)`` cell with integer multi-index ``index``
lies in ``Omega^l``; windows are level-0 integer boxes ``((lo, hi), ...)``.
B-spline values come from the general Cox-de Boor recursion on explicit
knot vectors.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import floor
from typing import Callable, Iterable, Sequence

Omega = Callable[[int, tuple[int, ...]], bool]
Window = Sequence[tuple[int, int]]


# --------------------------------------------------------------------------
# domains

def box_domain(levels: Sequence[Sequence[tuple]]) -> Omega:
    """Domains given as lists of closed boxes ``((lo, hi), ...)`` per level."""
    def omega(l, index):
        if l == 0:
            return True
        if l > len(levels):
            return False
        side = Fraction(1, 2 ** (l - 1))
        return any(all(lo <= i * side and (i + 1) * side <= hi for i, (lo, hi) in zip(index, box))
                   for box in levels[l - 1])
    return omega


def pattern_domain(levels: Sequence[Sequence]) -> Omega:
    """Domains from mesh patterns (any objects with ``boxes``, ``period`` and
    ``absolute`` attributes), evaluated cell by cell."""
    def inside(pattern, lower, upper):
        if pattern.absolute:
            lower, upper = (tuple(min(abs(a), abs(c)) for a, c in zip(lower, upper)),
                            tuple(max(abs(a), abs(c)) for a, c in zip(lower, upper)))
        for box in pattern.boxes:
            if pattern.period is None:
                shifts = [(0,) * len(lower)]
            else:
                ranges = []
                for a, lo, p in zip(lower, box.lo, pattern.period):
                    k = floor((a - lo) / p)
                    ranges.append((k - 1, k, k + 1))
                shifts = [tuple(k * p for k, p in zip(ks, pattern.period))
                          for ks in itertools.product(*ranges)]
            for sh in shifts:
                if all(lo + s <= a and c <= hi + s
                       for a, c, lo, hi, s in zip(lower, upper, box.lo, box.hi, sh)):
                    return True
        return False

    def omega(l, index):
        if l == 0:
            return True
        if l > len(levels) or not levels[l - 1]:
            return False
        side = Fraction(1, 2 ** (l - 1))
        lower = tuple(i * side for i in index)
        upper = tuple((i + 1) * side for i in index)
        return any(inside(p, lower, upper) for p in levels[l - 1])
    return omega


def cells_in_window(level: int, window: Window) -> Iterable[tuple[int, ...]]:
    s = 2 ** level
    return itertools.product(*[range(lo * s, hi * s) for lo, hi in window])


def barycentre(level: int, index) -> tuple[Fraction, ...]:
    return tuple(Fraction(2 * i + 1, 2 ** (level + 1)) for i in index)


# --------------------------------------------------------------------------
# B-splines

def cox_de_boor(knots: Sequence[Fraction], i: int, m: int, t: Fraction) -> Fraction:
    """``N_{i,m}(t)`` for an arbitrary nondecreasing knot vector."""
    if m == 0:
        return Fraction(1) if knots[i] <= t < knots[i + 1] else Fraction(0)
    out = Fraction(0)
    den = knots[i + m] - knots[i]
    if den:
        out += (t - knots[i]) / den * cox_de_boor(knots, i, m - 1, t)
    den = knots[i + m + 1] - knots[i + 1]
    if den:
        out += (knots[i + m + 1] - t) / den * cox_de_boor(knots, i + 1, m - 1, t)
    return out


def basis_value(level: int, start: Sequence[int], m: int, x: Sequence[Fraction]) -> Fraction:
    """Tensor-product B-spline with knots ``start_k/2^l .. (start_k+m+1)/2^l``."""
    out = Fraction(1)
    for s, t in zip(start, x):
        knots = [Fraction(s + j, 2 ** level) for j in range(m + 2)]
        out *= cox_de_boor(knots, 0, m, Fraction(t))
        if not out:
            break
    return out


def half_width(m: int) -> int:
    return (m + 1) // 2


def anchor(level: int, start: Sequence[int], m: int) -> tuple[Fraction, ...]:
    """Barycentre of the anchor cell: the central cell of the support for
    odd ``m+1``, the cell at the central vertex for even ``m+1``."""
    h = half_width(m)
    return barycentre(level, tuple(s + h for s in start))


def support_cells(start, m):
    return itertools.product(*[range(s, s + m + 1) for s in start])


# --------------------------------------------------------------------------
# Kraft selection

def _meets_m(omega: Omega, l: int, start, m) -> bool:
    """Open support of the level-``l`` B-spline meets ``M^l``."""
    return any(not omega(l + 1, c) for c in support_cells(start, m))


def _inside(omega: Omega, l: int, start, m) -> bool:
    """Open support lies in ``Omega^l`` (misses ``M^{l-1}``)."""
    if l == 0:
        return True
    return all(omega(l, tuple(i // 2 for i in c)) for c in support_cells(start, m))


def selected(omega: Omega, l: int, start, m: int, levels: int) -> bool:
    if l >= levels:
        return False
    top = l == levels - 1
    return _inside(omega, l, start, m) and (top or _meets_m(omega, l, start, m))


def starts_meeting(level: int, window: Window, m: int):
    """Start indices of level-``l`` B-splines whose support meets the window."""
    s = 2 ** level
    return itertools.product(*[range(lo * s - m, hi * s) for lo, hi in window])


def oracle_kraft(omega: Omega, d: int, m: int, levels: int, window: Window) -> dict[int, set]:
    """Anchors of the selected functions per level with support meeting the window."""
    out = {}
    for l in range(levels):
        out[l] = {anchor(l, st, m) for st in starts_meeting(l, window, m)
                  if selected(omega, l, st, m, levels)}
    return out


def anchors_in_window(level: int, window: Window) -> set:
    return {barycentre(level, c) for c in cells_in_window(level, window)}


# --------------------------------------------------------------------------
# evaluation

def oracle_eval(coefficient: Callable[[int, tuple], Fraction], omega: Omega, d: int, m: int,
                levels: int, x: Sequence) -> Fraction:
    """``sum lambda_beta beta(x)`` over the selected B-splines with ``x`` in
    their support; ``coefficient(l, anchor)`` gives ``lambda_beta``."""
    x = tuple(Fraction(c) for c in x)
    total = Fraction(0)
    for l in range(levels):
        s = 2 ** l
        ranges = [range(floor(c * s) - m, floor(c * s) + 1) for c in x]
        for st in itertools.product(*ranges):
            if not selected(omega, l, st, m, levels):
                continue
            v = basis_value(l, st, m, x)
            if v:
                total += coefficient(l, anchor(l, st, m)) * v
    return total


# --------------------------------------------------------------------------
# nestedness and connectivity

def oracle_connected(cells: Sequence) -> bool:
    """Connectivity of a union of closed boxes.

    ``cells`` holds integer offsets (unit cells) or explicit boxes
    ``((lo, hi), ...)``; two pieces touch when their closures meet.
    """
    boxes = []
    for c in cells:
        c = tuple(c)
        if c and isinstance(c[0], tuple):
            boxes.append(c)
        else:
            boxes.append(tuple((v, v + 1) for v in c))
    if not boxes:
        return False
    comp = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j, other in enumerate(boxes):
            if j not in comp and all(a <= d and c <= b for (a, b), (c, d) in zip(boxes[i], other)):
                comp.add(j)
                frontier.append(j)
    return len(comp) == len(boxes)


def oracle_nested(omega: Omega, d: int, levels: int, window: Window) -> list[tuple[int, tuple]]:
    """Level-``(l-1)`` cells of ``Omega^l`` inside the window that are not in
    ``Omega^(l-1)``, as ``(l, barycentre)``; empty iff nested on the window."""
    bad = []
    for l in range(2, levels):
        for c in cells_in_window(l - 1, window):
            if omega(l, c) and not omega(l - 1, tuple(i // 2 for i in c)):
                bad.append((l, barycentre(l - 1, c)))
    return bad


def closed_intersection(omega: Omega, l: int, start, m) -> list:
    """Pieces of ``closure(supp beta) ∩ M^l`` as closed boxes in level-``l`` units."""
    pieces = []
    for c in itertools.product(*[range(s - 1, s + m + 2) for s in start]):
        if omega(l + 1, c):
            continue
        box = tuple((max(i, s), min(i + 1, s + m + 1)) for i, s in zip(c, start))
        if all(a <= b for a, b in box):
            pieces.append(box)
    return pieces


def oracle_assumption_b(omega: Omega, d: int, m: int, levels: int, window: Window,
                        reading: str = "closed") -> dict[int, set]:
    """Anchors of level-``l`` B-splines (``l <= N-2``) with support meeting the
    window that violate Assumption B."""
    out = {}
    for l in range(levels - 1):
        bad = set()
        for st in starts_meeting(l, window, m):
            if not _meets_m(omega, l, st, m):
                continue
            if reading == "closed":
                ok = oracle_connected(closed_intersection(omega, l, st, m))
            else:
                ok = oracle_connected([c for c in support_cells(st, m) if not omega(l + 1, c)])
            if not ok:
                bad.add(anchor(l, st, m))
        out[l] = bad
    return out
