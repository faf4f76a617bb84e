"""Arithmetic relations over encodings of Z[1/b] as synchronous automata.

Every builder takes the track names to use, so results can be joined by
name.  Builders are cached per argument tuple; the automata they return are
immutable and may be shared.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Hashable, Sequence

from .automata import (SyncAutomaton, TrackWord, equate_tracks, explore, join,
                       join_all, minimize, project, rename, reorder, singleton)
from .numeration import PAD, as_fraction, check_base, encode, in_ring, RepresentationError

# per-track validity states
_S, _Z, _N, _D1, _D0, _E = range(6)
_VALID_ACCEPT = frozenset((_Z, _D1, _E))



def _canonical(k: int) -> tuple[str, ...]:
    return tuple(f"__k{i}" for i in range(k))


def _retrack(A: SyncAutomaton, tracks) -> SyncAutomaton:
    """Cached builders work on placeholder names; give them the caller's."""
    return rename(A, dict(zip(A.tracks, tuple(tracks))))

def valid_step(q: int, sym: int, b: int) -> int | None:
    """One step of the minimal DFA of valid encodings (``None`` = reject)."""
    if q == _S:
        if sym == 0:
            return _Z
        if sym == b + 1:
            return _N
        return None
    if q == _E:
        return _E if sym == PAD else None
    if sym == PAD:
        return _E if q in (_Z, _D1) else None
    return _D0 if sym == 0 else _D1


def valid_candidates(q: int, b: int) -> tuple[int, ...]:
    """Symbols that keep a track in state ``q`` alive."""
    if q == _S:
        return (0, b + 1)
    if q == _E:
        return (PAD,)
    digits = tuple(range(b * b))
    return digits + (PAD,) if q in (_Z, _D1) else digits


def valid_accepting(q: int) -> bool:
    return q in _VALID_ACCEPT


def _names(tracks, d, stem):
    if tracks is None:
        return tuple(f"{stem}{i}" for i in range(d))
    tracks = tuple(tracks)
    if len(tracks) != d:
        raise ValueError(f"expected {d} track names, got {tracks}")
    return tracks


def valid_encoding_automaton(b: int, d: int = 1,
                             tracks: Sequence[Hashable] | None = None) -> SyncAutomaton:
    """The language of convolutions of ``d`` valid encodings."""
    check_base(b)
    if d < 1:
        raise ValueError("need at least one track")
    return _valid(b, _names(tracks, d, "t"))


def _valid(b, tracks):
    return _retrack(_valid_canonical(b, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _valid_canonical(b, tracks):
    d = len(tracks)

    def step(key):
        for letter in product(*(valid_candidates(q, b) for q in key)):
            if all(s == PAD for s in letter):
                continue
            yield letter, tuple(valid_step(q, s, b) for q, s in zip(key, letter))

    A = explore(b, tracks, [(_S,) * d], step, lambda key: all(map(valid_accepting, key)))
    return minimize(A)


def point_automaton(b: int, tracks: Sequence[Hashable], point) -> SyncAutomaton:
    """Singleton language of one point of Z[1/b]^d."""
    tracks = tuple(tracks)
    if len(tracks) != len(point):
        raise ValueError("point dimension does not match the track count")
    return singleton(b, tracks, TrackWord(tuple(encode(z, b).symbols for z in point)))


def equality_automaton(b: int, tracks: tuple[Hashable, Hashable] = ("x", "y")) -> SyncAutomaton:
    check_base(b)
    return _equality(b, tuple(tracks))


def _equality(b, tracks):
    return _retrack(_equality_canonical(b, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _equality_canonical(b, tracks):
    def step(q):
        for s in valid_candidates(q, b):
            if s != PAD:
                yield (s, s), valid_step(q, s, b)

    return minimize(explore(b, tracks, [_S], step, valid_accepting))


def negation_automaton(b: int, tracks: tuple[Hashable, Hashable] = ("x", "y")) -> SyncAutomaton:
    """The graph of ``x -> -x``."""
    check_base(b)
    return _negation(b, tuple(tracks))


def _negation(b, tracks):
    return _retrack(_negation_canonical(b, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _negation_canonical(b, tracks):
    pos, neg = 0, b + 1

    def step(key):
        if key == "start":
            yield (pos, pos), "zero"
            yield (pos, neg), _D0
            yield (neg, pos), _D0
            return
        if key == "zero":
            return
        for s in valid_candidates(key, b):
            if s != PAD:
                yield (s, s), valid_step(key, s, b)

    return minimize(explore(b, tracks, ["start"], step,
                            lambda k: k == "zero" or (isinstance(k, int) and k == _D1)))


# --------------------------------------------------------------------------
# addition

def _pair(sym: int, b: int) -> tuple[int, int]:
    return (0, 0) if sym == PAD else divmod(sym, b)


def _add_column(role, su, sv, c, e, b):
    """Digit options for the ``w`` track in one column of ``u + v = w``.

    ``role`` names the track holding the larger magnitude (the sum of the
    other two).  Yields ``(w_symbol, next_int_carry, next_expected)``.
    """
    au, bu = _pair(su, b)
    av, bv = _pair(sv, b)
    if role == "w":
        t = au + av + c
        aw, nc = t % b, t // b
    else:
        big_a, small_a = (au, av) if role == "u" else (av, au)
        x = big_a - small_a - c
        aw, nc = (x, 0) if x >= 0 else (x + b, 1)
    for cin in (0, 1):
        if role == "w":
            bw = bu + bv + cin - b * e
        elif role == "u":
            bw = bu + b * e - bv - cin
        else:
            bw = bv + b * e - bu - cin
        if 0 <= bw < b:
            yield aw * b + bw, nc, cin


def addition_automaton(b: int, d: int = 1, tracks: Sequence[Hashable] | None = None) -> SyncAutomaton:
    """The graph of addition on ``d``-tuples: tracks ``u`` then ``v`` then ``w``.

    ``tracks`` gives all ``3d`` names in that order.
    """
    check_base(b)
    if tracks is None:
        tracks = ([f"u{i}" for i in range(d)] + [f"v{i}" for i in range(d)]
                  + [f"w{i}" for i in range(d)])
    tracks = tuple(tracks)
    if len(tracks) != 3 * d:
        raise ValueError("need 3d track names")
    parts = [_add1(b, (tracks[i], tracks[d + i], tracks[2 * d + i])) for i in range(d)]
    A = join_all(parts)
    return reorder(A, tracks) if d == 1 else minimize(reorder(A, tracks))


def _add1(b, tracks):
    return _retrack(_add1_canonical(b, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _add1_canonical(b, tracks):
    pos, neg = 0, b + 1

    def step(key):
        if key == "start":
            for su, sv in product((pos, neg), repeat=2):
                if su == sv:
                    options = [(su, "w")]
                elif su == pos:
                    options = [(pos, "u"), (neg, "v")]
                else:
                    options = [(pos, "v"), (neg, "u")]
                for sw, role in options:
                    qs = (valid_step(_S, su, b), valid_step(_S, sv, b), valid_step(_S, sw, b))
                    for g in (0, 1):
                        yield (su, sv, sw), qs + (role, g, g)
            return
        qu, qv, qw, role, c, e = key
        for su in valid_candidates(qu, b):
            nu = valid_step(qu, su, b)
            for sv in valid_candidates(qv, b):
                nv = valid_step(qv, sv, b)
                for sym, nc, ne in _add_column(role, su, sv, c, e, b):
                    for sw in ((sym, PAD) if sym == 0 else (sym,)):
                        if su == PAD and sv == PAD and sw == PAD:
                            continue
                        nw = valid_step(qw, sw, b)
                        if nw is None:
                            continue
                        yield (su, sv, sw), (nu, nv, nw, role, nc, ne)

    def accepting(key):
        if key == "start":
            return False
        qu, qv, qw, _, c, e = key
        return c == 0 and e == 0 and valid_accepting(qu) and valid_accepting(qv) and valid_accepting(qw)

    return minimize(explore(b, tracks, ["start"], step, accepting))


def shift_automaton(b: int, c, tracks: tuple[Hashable, Hashable] = ("x", "y")) -> SyncAutomaton:
    """The graph of ``x -> x + c`` for one coordinate and a constant ``c``."""
    c = as_fraction(c)
    if not in_ring(c, b):
        raise RepresentationError(f"{c} is not in Z[1/{b}]")
    return _shift(b, c, tuple(tracks))


def _shift(b, c, tracks):
    return _retrack(_shift_canonical(b, c, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _shift_canonical(b, c, tracks):
    if c == 0:
        return _equality(b, tracks)
    add = _add1(b, (tracks[0], "__c", tracks[1]))
    const = point_automaton(b, ("__c",), (c,))
    return minimize(project(join(add, const), tracks))


def shift_point_automaton(b: int, c: Sequence, src: Sequence[Hashable],
                          dst: Sequence[Hashable]) -> SyncAutomaton:
    """The graph of ``x -> x + c`` on ``d``-tuples, tracks ``src`` then ``dst``."""
    parts = [shift_automaton(b, ci, (s, t)) for ci, s, t in zip(c, src, dst)]
    A = join_all(parts)
    return reorder(A, tuple(src) + tuple(dst))


# --------------------------------------------------------------------------
# order

def less_than_automaton(b: int, d: int = 1, tracks: Sequence[Hashable] | None = None) -> SyncAutomaton:
    """Coordinatewise strict order: ``r_i < s_i`` for every ``i``.

    Tracks are the ``d`` coordinates of ``r`` followed by those of ``s``.
    """
    check_base(b)
    if tracks is None:
        tracks = [f"r{i}" for i in range(d)] + [f"s{i}" for i in range(d)]
    tracks = tuple(tracks)
    if len(tracks) != 2 * d:
        raise ValueError("need 2d track names")
    parts = [_less1(b, (tracks[i], tracks[d + i])) for i in range(d)]
    return reorder(join_all(parts), tracks)


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _less1(b, tracks):
    return _retrack(_less1_canonical(b, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _less1_canonical(b, tracks):
    neg = b + 1

    def step(key):
        if key == "start":
            for sr, ss in product((0, neg), repeat=2):
                yield (sr, ss), (valid_step(_S, sr, b), valid_step(_S, ss, b),
                                 sr == neg, ss == neg, 0, 0)
            return
        qr, qs, nr, ns, ic, fc = key
        for sr in valid_candidates(qr, b):
            for ss in valid_candidates(qs, b):
                if sr == PAD and ss == PAD:
                    continue
                ar, br = _pair(sr, b)
                as_, bs = _pair(ss, b)
                nic = _sgn(ar - as_) if ar != as_ else ic
                nfc = fc if fc else _sgn(br - bs)
                yield (sr, ss), (valid_step(qr, sr, b), valid_step(qs, ss, b), nr, ns, nic, nfc)

    def accepting(key):
        if key == "start":
            return False
        qr, qs, nr, ns, ic, fc = key
        if not (valid_accepting(qr) and valid_accepting(qs)):
            return False
        if nr != ns:
            return nr
        mag = ic or fc
        return mag > 0 if nr else mag < 0

    return minimize(explore(b, tracks, ["start"], step, accepting))


# --------------------------------------------------------------------------
# composition and scalar multiples

def compose(R: SyncAutomaton, S: SyncAutomaton,
            out: tuple[Hashable, Hashable] = ("x", "y")) -> SyncAutomaton:
    """Relational composition of binary relations ``R(a, m)`` and ``S(m, c)``.

    Only track order matters for the inputs; the result is named ``out``.
    """
    R2 = rename(R, dict(zip(R.tracks, ("__a", "__m"))))
    S2 = rename(S, dict(zip(S.tracks, ("__m", "__c"))))
    C = minimize(project(join(R2, S2), ("__a", "__c")))
    return rename(C, {"__a": out[0], "__c": out[1]})


@lru_cache(maxsize=None)
def _double(b):
    add = _add1(b, ("x", "x2", "y"))
    return minimize(equate_tracks(add, "x", "x2"))


@lru_cache(maxsize=None)
def _times_integer(b, n):
    """Graph of ``x -> n x`` for an integer ``n >= 1`` by double-and-add."""
    if n == 1:
        return _equality(b, ("x", "y"))
    half = _times_integer(b, n // 2)
    doubled = compose(half, _double(b))
    if n % 2 == 0:
        return doubled
    add = _add1(b, ("h", "x", "y"))
    return minimize(project(join(rename(doubled, {"y": "h"}), add), ("x", "y")))


def scalar_multiple_automaton(mu, b: int, tracks: tuple[Hashable, Hashable] = ("x", "y")) -> SyncAutomaton:
    """The graph of ``x -> mu * x`` for ``mu`` in Z[1/b]."""
    check_base(b)
    mu = as_fraction(mu)
    if not in_ring(mu, b):
        raise RepresentationError(f"{mu} is not in Z[1/{b}]")
    A = _scalar(b, mu)
    return rename(A, {"x": tracks[0], "y": tracks[1]})


@lru_cache(maxsize=None)
def _scalar(b, mu):
    if mu == 0:
        return minimize(join(_valid(b, ("x",)), point_automaton(b, ("y",), (0,))))
    p, q = abs(mu.numerator), mu.denominator
    R = _times_integer(b, p)
    if q > 1:
        e = 0
        scale = 1
        while scale % q:
            scale *= b
            e += 1
        factor = scale // q
        if factor > 1:
            R = compose(R, _times_integer(b, factor))
        by_b = _times_integer(b, b)
        div_b = reorder(rename(by_b, {"x": "y", "y": "x"}), ("x", "y"))
        for _ in range(e):
            R = compose(R, div_b)
    if mu < 0:
        R = compose(R, _negation(b, ("x", "y")))
    return R


# --------------------------------------------------------------------------
# level filters and region readers

def level_filter_automaton(d: int, level: int, b: int,
                           tracks: Sequence[Hashable] | None = None) -> SyncAutomaton:
    """Encodings of barycentres of all level-``level`` cells of R^d.

    A coordinate is a barycentre iff its fractional part is an odd multiple
    of ``1/2^(level+1)``.  The fraction digits are read most significant
    first, keeping the set of such candidates still consistent with them.
    """
    check_base(b)
    tracks = _names(tracks, d, "x")
    parts = [_level1(b, level, (t,)) for t in tracks]
    A = join_all(parts)
    return A if d == 1 else minimize(A)


def _candidates(level: int) -> frozenset:
    den = 2 ** (level + 1)
    return frozenset(Fraction(2 * j + 1, den) for j in range(2 ** level))


def _advance(cands: frozenset, beta: int, b: int) -> frozenset:
    out = set()
    for r0, r in cands:
        nr = b * r - beta
        if 0 <= nr < 1:
            out.add((r0, nr))
    return frozenset(out)


def _level1(b, level, tracks):
    return _retrack(_level1_canonical(b, level, _canonical(len(tracks))), tracks)


@lru_cache(maxsize=None)
def _level1_canonical(b, level, tracks):
    start = frozenset((r, r) for r in _candidates(level))

    def step(key):
        q, cands = key
        for s in valid_candidates(q, b):
            nq = valid_step(q, s, b)
            if q == _S:
                yield (s,), (nq, cands)
                continue
            nc = cands if s == PAD else _advance(cands, s % b, b)
            if nc:
                yield (s,), (nq, frozenset((0, r) for _, r in nc))

    def accepting(key):
        q, cands = key
        return q != _S and valid_accepting(q) and any(r == 0 for _, r in cands)

    return minimize(explore(b, tracks, [(_S, frozenset((0, r) for _, r in start))],
                            step, accepting))


class CoordinateReader:
    """Reads one encoded barycentre coordinate and recovers it exactly, or
    modulo an integer period.

    The integer part is accumulated exactly (modulo ``period`` when given);
    the fractional part is one of the finitely many odd multiples of
    ``1/2^(level+1)`` and is identified by the candidate-set construction of
    :func:`level_filter_automaton`.  In exact mode the reader gives up on
    values whose magnitude exceeds ``bound``.
    """

    BIG = "big"

    def __init__(self, b: int, level: int, period: int | None = None,
                 bound: int | None = None, absolute: bool = False):
        if period is None and bound is None:
            raise ValueError("exact readers need a bound")
        self.b, self.level, self.period, self.bound = b, level, period, bound
        self.absolute = absolute
        self.start = (_S, False, 0, 1, frozenset((r, r) for r in _candidates(level)))

    def step(self, key):
        q, negative, I, w, cands = key
        b = self.b
        for s in valid_candidates(q, b):
            nq = valid_step(q, s, b)
            if q == _S:
                yield s, (nq, s == b + 1, I, w, cands)
                continue
            if s == PAD:
                yield s, (nq, negative, I, w, cands)
                continue
            alpha, beta = divmod(s, b)
            nc = _advance(cands, beta, b)
            if not nc:
                continue
            if self.period is not None:
                yield s, (nq, negative, (I + alpha * w) % self.period, (w * b) % self.period, nc)
                continue
            if w == self.BIG:
                if alpha:
                    continue
                yield s, (nq, negative, I, w, nc)
                continue
            nI = I + alpha * w
            if nI > self.bound:
                continue
            nw = w * b
            yield s, (nq, negative, nI, self.BIG if nw > self.bound else nw, nc)

    def value(self, key) -> Fraction | None:
        """The coordinate (or its residue) if ``key`` is a final state."""
        q, negative, I, _, cands = key
        if q == _S or not valid_accepting(q):
            return None
        frac = [r0 for r0, r in cands if r == 0]
        if not frac:
            return None
        v = I + frac[0]
        if negative and not self.absolute:
            v = -v
        if self.period is not None:
            v = v % self.period
        return v


def region_automaton(b: int, tracks: Sequence[Hashable], level: int, predicate,
                     period: Sequence[int] | None = None, bound: int | None = None,
                     absolute: bool = False, signed: bool = False) -> SyncAutomaton:
    """Barycentres ``z`` of level-``level`` cells with ``predicate(values)``.

    ``values`` are the coordinates of ``z`` (exact, bounded by ``bound``) or
    their residues modulo ``period``; with ``absolute`` the residue of
    ``|z_i|`` is used instead.  With ``signed`` the predicate is called as
    ``predicate(values, negatives)``.
    """
    tracks = tuple(tracks)
    d = len(tracks)
    periods = tuple(period) if period is not None else (None,) * d
    readers = [CoordinateReader(b, level, p, bound, absolute) for p in periods]

    def step(key):
        options = [list(r.step(k)) for r, k in zip(readers, key)]
        for combo in product(*options):
            letter = tuple(s for s, _ in combo)
            if all(s == PAD for s in letter):
                continue
            yield letter, tuple(k for _, k in combo)

    def accepting(key):
        values = [r.value(k) for r, k in zip(readers, key)]
        if any(v is None for v in values):
            return False
        if signed:
            return bool(predicate(tuple(values), tuple(k[1] for k in key)))
        return bool(predicate(tuple(values)))

    return minimize(explore(b, tracks, [tuple(r.start for r in readers)], step, accepting))
