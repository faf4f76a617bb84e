"""Shared helpers: random dyadics, random automata and a brute-force
language model that walks transition tables directly."""
from __future__ import annotations

import functools
import itertools
import random
from fractions import Fraction

from autospline.automata import SyncAutomaton
from autospline.numeration import PAD


def random_dyadic(rng: random.Random, max_int: int = 10 ** 6, max_exp: int = 20) -> Fraction:
    kind = rng.random()
    if kind < 0.1:
        return Fraction(rng.randint(-3, 3))
    e = rng.randint(0, max_exp)
    mag = rng.randint(0, max_int * 2 ** e) if kind < 0.9 else rng.randint(0, 2 ** (e + 60))
    return Fraction(rng.choice((-1, 1)) * mag, 2 ** e)


@functools.lru_cache(maxsize=None)
def convolutions(k: int, symbols, max_len: int):
    """All valid ``k``-track letter sequences of length ``<= max_len``
    (padding only as a per-track suffix), as tuples of letters, shortest
    first."""
    out = [()]
    frontier = [((), (False,) * k)]
    for _ in range(max_len):
        nxt = []
        for word, ended in frontier:
            choices = [[PAD] if e else list(symbols) + [PAD] for e in ended]
            for letter in itertools.product(*choices):
                if all(s == PAD for s in letter):
                    continue
                w = word + (letter,)
                out.append(w)
                nxt.append((w, tuple(s == PAD for s in letter)))
        frontier = nxt
    return tuple(out)


def language(A: SyncAutomaton, words) -> set:
    """Accepted members of ``words`` by direct simulation of ``A.delta``."""
    acc = set()
    cache = {(): frozenset(A.initial)}
    for w in sorted(words, key=len):
        states = cache.get(w)
        if states is None:
            prev = cache[w[:-1]]
            states = frozenset(t for s in prev for t in A.delta[s].get(w[-1], ()))
            cache[w] = states
        if states & A.accepting:
            acc.add(w)
    return acc


def random_nfa(rng: random.Random, tracks, symbols, n: int = 5, density: float = 0.35) -> SyncAutomaton:
    """A small cyclic NFA over non-padding letters."""
    letters = list(itertools.product(symbols, repeat=len(tracks)))
    delta = []
    for _ in range(n):
        row = {}
        for a in letters:
            if rng.random() < density:
                row[a] = tuple(sorted(rng.sample(range(n), rng.randint(1, 2))))
        delta.append(row)
    initial = rng.sample(range(n), rng.randint(1, 2))
    accepting = [s for s in range(n) if rng.random() < 0.4]
    return SyncAutomaton(2, tracks, delta, initial, accepting)


def random_layered(rng: random.Random, tracks, symbols, depth: int = 6, width: int = 3,
                   density: float = 0.3) -> SyncAutomaton:
    """An acyclic NFA of words of length ``<= depth`` that only spells
    valid convolutions: each state remembers which tracks have ended."""
    k = len(tracks)
    ids: dict = {}

    def sid(key):
        if key not in ids:
            ids[key] = len(ids)
            delta.append({})
        return ids[key]

    delta: list[dict] = []
    start = sid((0, (False,) * k, 0))
    accepting = []
    for layer in range(depth + 1):
        keys = [key for key in list(ids) if key[0] == layer]
        for key in keys:
            s = ids[key]
            if rng.random() < 0.4:
                accepting.append(s)
            if layer == depth:
                continue
            ended = key[1]
            choices = [[PAD] if e else list(symbols) + [PAD] for e in ended]
            for letter in itertools.product(*choices):
                if all(c == PAD for c in letter) or rng.random() >= density:
                    continue
                mask = tuple(c == PAD for c in letter)
                targets = {sid((layer + 1, mask, rng.randrange(width)))
                           for _ in range(rng.randint(1, 2))}
                delta[s][letter] = tuple(sorted(targets))
    return SyncAutomaton(2, tracks, delta, [start], accepting)


def universe_layered(tracks, symbols, depth: int = 6) -> SyncAutomaton:
    """All valid convolutions of length ``<= depth``."""
    k = len(tracks)
    ids: dict = {}
    delta: list[dict] = []

    def sid(key):
        if key not in ids:
            ids[key] = len(ids)
            delta.append({})
        return ids[key]

    sid((0, (False,) * k))
    for layer in range(depth):
        for key in [key for key in list(ids) if key[0] == layer]:
            ended = key[1]
            choices = [[PAD] if e else list(symbols) + [PAD] for e in ended]
            for letter in itertools.product(*choices):
                if all(c == PAD for c in letter):
                    continue
                mask = tuple(c == PAD for c in letter)
                delta[ids[key]][letter] = (sid((layer + 1, mask)),)
    return SyncAutomaton(2, tracks, delta, [0], range(len(delta)))


def drop_track(word, keep: int):
    """Restrict a convolution to track ``keep``, dropping all-padding letters."""
    out = tuple((a[keep],) for a in word if a[keep] != PAD)
    return out


SYM1 = (0, 1, 2)       # one track, three symbols
SYM2 = (0, 1)          # two tracks, two symbols each


def closure_trial(rng: random.Random, max_len: int = 6) -> list[str]:
    """Check every Boolean and quantifier construction on fresh random
    automata against set semantics on all words up to ``max_len``.
    Returns the names of the constructions that disagreed."""
    from autospline.automata import (complement, determinize, difference, intersect, minimize,
                                     project, trim, union, universal_project)
    bad = []
    words1 = convolutions(1, SYM1, max_len)
    A = random_nfa(rng, ("x",), SYM1)
    B = random_nfa(rng, ("x",), SYM1)
    U = random_nfa(rng, ("x",), SYM1, density=0.6)
    LA, LB, LU = language(A, words1), language(B, words1), language(U, words1)
    checks = {
        "intersect": (intersect(A, B), LA & LB),
        "union": (union(A, B), LA | LB),
        "difference": (difference(A, B), LA - LB),
        "complement": (complement(A, U), LU - LA),
        "determinize": (determinize(A), LA),
        "minimize": (minimize(A), LA),
        "trim": (trim(A), LA),
        "double complement": (complement(complement(A, U), U), LA & LU),
    }
    for name, (R, expected) in checks.items():
        if language(R, words1) != expected:
            bad.append(name)

    words2 = convolutions(2, SYM2, max_len)
    words_x = convolutions(1, SYM2, max_len)
    C = random_layered(rng, ("x", "y"), SYM2, depth=max_len)
    V = universe_layered(("x", "y"), SYM2, depth=max_len)
    LC = language(C, words2)
    exists = {drop_track(w, 0) for w in LC}
    if language(project(C, ("x",)), words_x) != exists:
        bad.append("project")
    # forall y: every completion inside the universe lies in C
    by_x: dict = {}
    for w in words2:
        by_x.setdefault(drop_track(w, 0), []).append(w)
    forall = {x for x, ws in by_x.items() if all(w in LC for w in ws)}
    if language(universal_project(C, ("x",), V), words_x) != forall:
        bad.append("universal_project")
    D = random_layered(rng, ("x", "y"), SYM2, depth=max_len)
    LD = language(D, words2)
    if language(project(union(C, D), ("x",)), words_x) != exists | {drop_track(w, 0) for w in LD}:
        bad.append("project over union")
    return bad
