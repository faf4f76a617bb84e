"""Synchronous multitape automata over padded convolution alphabets.

A letter is a tuple with one entry per track.  Entries are symbol codes
(``alpha * b + beta`` for digit columns) or :data:`PAD`; the all-``PAD``
letter never occurs.  Tracks carry names, and every binary operation lines
tracks up by name, so a relation over ``(x, y)`` and one over ``(y, z)``
join on ``y`` without manual bookkeeping.

Automata are immutable.  States are ``0..n-1``; ``delta[s]`` maps a letter to
the tuple of successor states.  Operations that need a deterministic
automaton determinize on demand.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from . import kernels
from .kernels import StateBudgetExceeded as ResourceError
from .numeration import PAD, digits

DEFAULT_STATE_BUDGET = 10**6
_budget = [DEFAULT_STATE_BUDGET]


def state_budget() -> int:
    return _budget[0]


def set_state_budget(n: int) -> None:
    """Cap on states created by determinization and lazy products."""
    if n < 1:
        raise ValueError("state budget must be positive")
    _budget[0] = int(n)


class AlphabetError(ValueError):
    """Tracks or bases of two automata do not line up."""


@dataclass(frozen=True)
class TrackWord:
    """A tuple of strings read in lockstep, shorter ones padded at the end."""

    tracks: tuple[tuple, ...]

    @property
    def letters(self) -> tuple[tuple, ...]:
        n = max((len(t) for t in self.tracks), default=0)
        return tuple(
            tuple(t[i] if i < len(t) else PAD for t in self.tracks) for i in range(n))

    def __len__(self) -> int:
        return max((len(t) for t in self.tracks), default=0)

    @classmethod
    def from_letters(cls, letters: Sequence[Sequence], k: int | None = None) -> "TrackWord":
        if k is None:
            if not letters:
                raise ValueError("track count needed for the empty word")
            k = len(letters[0])
        tracks = []
        for j in range(k):
            col = [a[j] for a in letters]
            n = len(col)
            while n and col[n - 1] == PAD:
                n -= 1
            if PAD in col[:n]:
                raise ValueError(f"track {j} has padding before its end")
            tracks.append(tuple(col[:n]))
        return cls(tuple(tracks))

    def __str__(self) -> str:
        return " ".join("(" + ",".join("#" if s == PAD else str(s) for s in a) + ")"
                        for a in self.letters)


def convolve(words: Sequence[Sequence]) -> TrackWord:
    """Stack ``k >= 1`` strings into one word; the result has max length."""
    if not words:
        raise ValueError("convolution needs at least one track")
    return TrackWord(tuple(tuple(w) for w in words))


class SyncAutomaton:
    """Nondeterministic synchronous automaton over named tracks."""

    __slots__ = ("base", "tracks", "delta", "initial", "accepting",
                 "deterministic", "_cache")

    def __init__(self, base: int, tracks: Sequence[Hashable],
                 delta: list[dict[tuple, tuple[int, ...]]],
                 initial: Iterable[int], accepting: Iterable[int]):
        self.base = base
        self.tracks = tuple(tracks)
        if len(set(self.tracks)) != len(self.tracks):
            raise AlphabetError(f"duplicate track names in {self.tracks}")
        self.delta = delta
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        self.deterministic = len(self.initial) == 1 and all(
            len(ts) == 1 for row in delta for ts in row.values())
        self._cache: dict = {}

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def k(self) -> int:
        return len(self.tracks)

    def n_transitions(self) -> int:
        return sum(len(ts) for row in self.delta for ts in row.values())

    def __repr__(self) -> str:
        kind = "DFA" if self.deterministic else "NFA"
        return (f"<{kind} base={self.base} tracks={list(self.tracks)} "
                f"states={self.n_states} transitions={self.n_transitions()}>")

    def accepts(self, word) -> bool:
        return accepts(self, word)


# --------------------------------------------------------------------------
# construction helpers

def explore(base: int, tracks: Sequence[Hashable], starts: Iterable[Hashable],
            step: Callable[[Hashable], Iterable[tuple[tuple, Hashable]]],
            accepting: Callable[[Hashable], bool]) -> SyncAutomaton:
    """Materialize the part of an implicit automaton reachable from ``starts``.

    ``step(key)`` yields ``(letter, next_key)`` pairs.  Keys are arbitrary
    hashables; they are numbered in discovery order.
    """
    budget = state_budget()
    index: dict = {}
    keys: list = []
    for key in starts:
        if key not in index:
            index[key] = len(keys)
            keys.append(key)
    initial = list(range(len(keys)))
    delta: list[dict] = []
    i = 0
    while i < len(keys):
        out: dict[tuple, set] = {}
        for letter, nxt in step(keys[i]):
            j = index.get(nxt)
            if j is None:
                if len(keys) >= budget:
                    raise ResourceError(f"construction exceeded the state budget of {budget}")
                j = index[nxt] = len(keys)
                keys.append(nxt)
            out.setdefault(letter, set()).add(j)
        delta.append({a: tuple(sorted(ts)) for a, ts in out.items()})
        i += 1
    acc = [i for i, key in enumerate(keys) if accepting(key)]
    return SyncAutomaton(base, tracks, delta, initial, acc)


def empty_automaton(base: int, tracks: Sequence[Hashable]) -> SyncAutomaton:
    return SyncAutomaton(base, tracks, [{}], [0], [])


def singleton(base: int, tracks: Sequence[Hashable], word) -> SyncAutomaton:
    """The automaton accepting exactly one word (a TrackWord or letter list)."""
    letters = word.letters if isinstance(word, TrackWord) else tuple(map(tuple, word))
    delta = [{a: (i + 1,)} for i, a in enumerate(letters)] + [{}]
    return SyncAutomaton(base, tracks, delta, [0], [len(letters)])


def from_words(base: int, tracks: Sequence[Hashable], words) -> SyncAutomaton:
    """Prefix-tree automaton of a finite set of words."""
    delta: list[dict] = [{}]
    acc = set()
    for w in words:
        letters = w.letters if isinstance(w, TrackWord) else tuple(map(tuple, w))
        s = 0
        for a in letters:
            nxt = delta[s].get(a)
            if nxt is None:
                delta.append({})
                nxt = (len(delta) - 1,)
                delta[s][a] = nxt
            s = nxt[0]
        acc.add(s)
    return SyncAutomaton(base, tracks, delta, [0], acc)


# --------------------------------------------------------------------------
# membership, emptiness, witnesses

def _letters_of(A: SyncAutomaton, word) -> tuple[tuple, ...]:
    if isinstance(word, TrackWord):
        if len(word.tracks) != A.k:
            raise AlphabetError(f"word has {len(word.tracks)} tracks, automaton {A.k}")
        return word.letters
    letters = tuple(tuple(a) for a in word)
    for a in letters:
        if len(a) != A.k:
            raise AlphabetError(f"letter {a} does not have {A.k} entries")
    return letters


def accepts(A: SyncAutomaton, word) -> bool:
    current = set(A.initial)
    for a in _letters_of(A, word):
        nxt = set()
        for s in current:
            nxt.update(A.delta[s].get(a, ()))
        if not nxt:
            return False
        current = nxt
    return not current.isdisjoint(A.accepting)


def is_empty(A: SyncAutomaton) -> bool:
    if not A.accepting:
        return True
    seen = set(A.initial)
    stack = list(seen)
    while stack:
        s = stack.pop()
        if s in A.accepting:
            return False
        for ts in A.delta[s].values():
            for t in ts:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return True


def _distance_to_accept(A: SyncAutomaton) -> dict[int, int]:
    preds: dict[int, set] = {}
    for s, row in enumerate(A.delta):
        for ts in row.values():
            for t in ts:
                preds.setdefault(t, set()).add(s)
    dist = {s: 0 for s in A.accepting}
    queue = deque(A.accepting)
    while queue:
        t = queue.popleft()
        for s in preds.get(t, ()):
            if s not in dist:
                dist[s] = dist[t] + 1
                queue.append(s)
    return dist


def shortest_word(A: SyncAutomaton) -> TrackWord | None:
    """Shortest accepted word, ties broken by the smallest letter first."""
    dist = _distance_to_accept(A)
    live = [s for s in A.initial if s in dist]
    if not live:
        return None
    remaining = min(dist[s] for s in live)
    current = {s for s in live if dist[s] == remaining}
    letters = []
    while remaining:
        options: dict[tuple, set] = {}
        for s in current:
            for a, ts in A.delta[s].items():
                good = [t for t in ts if dist.get(t) == remaining - 1]
                if good:
                    options.setdefault(a, set()).update(good)
        a = min(options)
        letters.append(a)
        current = options[a]
        remaining -= 1
    return TrackWord.from_letters(letters, A.k)


def enumerate_words(A: SyncAutomaton, max_count: int | None = None,
                    max_length: int | None = None) -> tuple[list[TrackWord], bool]:
    """Accepted words in length-then-lexicographic order.

    Returns ``(words, exhausted)``; ``exhausted`` is true when the whole
    language was listed.
    """
    D = trim(determinize(A))
    words: list[TrackWord] = []
    if not D.accepting:
        return words, True
    finite = _is_acyclic(D)
    if not finite and max_count is None and max_length is None:
        raise ValueError("infinite language: pass max_count or max_length")
    layer = [((), next(iter(D.initial)))]
    length = 0
    while layer:
        for prefix, s in layer:
            if s in D.accepting:
                if max_count is not None and len(words) >= max_count:
                    return words, False
                words.append(TrackWord.from_letters(prefix, D.k))
        if max_length is not None and length >= max_length:
            more = any(D.delta[s] for _, s in layer)
            return words, not more
        nxt = []
        for prefix, s in layer:
            for a in sorted(D.delta[s]):
                nxt.append((prefix + (a,), D.delta[s][a][0]))
        layer = nxt
        length += 1
    assert finite
    return words, True


def _is_acyclic(A: SyncAutomaton) -> bool:
    indeg = [0] * A.n_states
    for row in A.delta:
        for ts in row.values():
            for t in ts:
                indeg[t] += 1
    queue = [s for s in range(A.n_states) if indeg[s] == 0]
    seen = 0
    while queue:
        s = queue.pop()
        seen += 1
        for ts in A.delta[s].values():
            for t in ts:
                indeg[t] -= 1
                if indeg[t] == 0:
                    queue.append(t)
    return seen == A.n_states


def is_finite(A: SyncAutomaton) -> bool:
    return _is_acyclic(trim(A))


# --------------------------------------------------------------------------
# determinization, trimming, minimization

def _csr(A: SyncAutomaton):
    alphabet = sorted({a for row in A.delta for a in row})
    ids = {a: i for i, a in enumerate(alphabet)}
    offsets, lets, tgts = [0], [], []
    for row in A.delta:
        for a in sorted(row, key=ids.__getitem__):
            for t in row[a]:
                lets.append(ids[a])
                tgts.append(t)
        offsets.append(len(lets))
    return alphabet, offsets, lets, tgts


def determinize(A: SyncAutomaton, budget: int | None = None) -> SyncAutomaton:
    """Subset construction; deterministic input is returned unchanged."""
    if A.deterministic:
        return A
    cached = A._cache.get("det")
    if cached is not None:
        return cached
    alphabet, offsets, lets, tgts = _csr(A)
    subsets, d_off, d_lets, d_tgts = kernels.subset_construction(
        A.n_states, offsets, lets, tgts, sorted(A.initial), budget or state_budget())
    delta = [{alphabet[d_lets[e]]: (d_tgts[e],) for e in range(d_off[s], d_off[s + 1])}
             for s in range(len(subsets))]
    acc = [i for i, sub in enumerate(subsets) if not A.accepting.isdisjoint(sub)]
    D = SyncAutomaton(A.base, A.tracks, delta, [0], acc)
    A._cache["det"] = D
    return D


def trim(A: SyncAutomaton) -> SyncAutomaton:
    """Drop states that are unreachable or cannot reach acceptance."""
    cached = A._cache.get("trim")
    if cached is not None:
        return cached
    _, offsets, _, tgts = _csr(A)
    acc_mask = [s in A.accepting for s in range(A.n_states)]
    live = kernels.live_states(A.n_states, offsets, tgts, sorted(A.initial), acc_mask)
    keep = [s for s in range(A.n_states) if live[s]]
    if not keep:
        T = empty_automaton(A.base, A.tracks)
    else:
        new = {s: i for i, s in enumerate(keep)}
        delta = []
        for s in keep:
            row = {}
            for a, ts in A.delta[s].items():
                nts = tuple(new[t] for t in ts if t in new)
                if nts:
                    row[a] = nts
            delta.append(row)
        T = SyncAutomaton(A.base, A.tracks, delta,
                          [new[s] for s in A.initial if s in new],
                          [new[s] for s in A.accepting if s in new])
    A._cache["trim"] = T
    return T


def minimize(A: SyncAutomaton) -> SyncAutomaton:
    """Minimal trimmed DFA, states numbered in breadth-first letter order.

    Two automata with the same language minimize to identical structures.
    """
    cached = A._cache.get("min")
    if cached is not None:
        return cached
    D = trim(determinize(trim(A)))
    if not D.accepting:
        M = empty_automaton(A.base, A.tracks)
        A._cache["min"] = M
        return M
    alphabet, offsets, lets, tgts = _csr(D)
    acc_mask = [s in D.accepting for s in range(D.n_states)]
    cls = kernels.moore_partition(D.n_states, offsets, lets, tgts, acc_mask)
    rep: dict[int, int] = {}
    for s in range(D.n_states):
        rep.setdefault(cls[s], s)
    start = cls[next(iter(D.initial))]
    order = {start: 0}
    queue = deque([start])
    delta: list[dict] = []
    while queue:
        c = queue.popleft()
        row = {}
        for a, ts in sorted(D.delta[rep[c]].items()):
            tc = cls[ts[0]]
            if tc not in order:
                order[tc] = len(order)
                queue.append(tc)
            row[a] = (order[tc],)
        delta.append(row)
    acc = [order[c] for c in order if acc_mask[rep[c]]]
    M = SyncAutomaton(A.base, A.tracks, delta, [0], acc)
    M._cache["min"] = M
    M._cache["trim"] = M
    A._cache["min"] = M
    return M


# --------------------------------------------------------------------------
# track manipulation

def reorder(A: SyncAutomaton, tracks: Sequence[Hashable]) -> SyncAutomaton:
    """Same relation with the tracks permuted into the given order."""
    tracks = tuple(tracks)
    if tracks == A.tracks:
        return A
    if sorted(map(repr, tracks)) != sorted(map(repr, A.tracks)):
        raise AlphabetError(f"cannot reorder {A.tracks} as {tracks}")
    perm = [A.tracks.index(t) for t in tracks]
    delta = [{tuple(a[i] for i in perm): ts for a, ts in row.items()} for row in A.delta]
    return SyncAutomaton(A.base, tracks, delta, A.initial, A.accepting)


def rename(A: SyncAutomaton, mapping: dict) -> SyncAutomaton:
    tracks = [mapping.get(t, t) for t in A.tracks]
    return SyncAutomaton(A.base, tracks, A.delta, A.initial, A.accepting)


def equate_tracks(A: SyncAutomaton, keep: Hashable, drop: Hashable) -> SyncAutomaton:
    """Restrict to words whose tracks ``keep`` and ``drop`` agree, then drop one."""
    i, j = A.tracks.index(keep), A.tracks.index(drop)
    rest = [p for p in range(A.k) if p != j]
    delta = [{tuple(a[p] for p in rest): ts for a, ts in row.items() if a[i] == a[j]}
             for row in A.delta]
    return SyncAutomaton(A.base, [A.tracks[p] for p in rest], delta, A.initial, A.accepting)


def _check_base(A: SyncAutomaton, B: SyncAutomaton) -> None:
    if A.base != B.base:
        raise AlphabetError(f"bases differ: {A.base} vs {B.base}")


def join(A: SyncAutomaton, B: SyncAutomaton) -> SyncAutomaton:
    """Natural join: words over the union of tracks whose restrictions are
    accepted by both.  Tracks of ``A`` come first, then the new ones of ``B``.

    A component whose tracks are all padded has finished its word; it must
    then be accepting and stays idle for the rest of the run.
    """
    _check_base(A, B)
    shared = [t for t in B.tracks if t in A.tracks]
    a_sh = [A.tracks.index(t) for t in shared]
    b_sh = [B.tracks.index(t) for t in shared]
    b_only = [j for j, t in enumerate(B.tracks) if t not in A.tracks]
    tracks = A.tracks + tuple(B.tracks[j] for j in b_only)
    pad_a = (PAD,) * A.k
    pad_b = (PAD,) * B.k
    pad_key = (PAD,) * len(shared)
    DONE = -1

    b_index: dict[int, dict] = {}
    a_index: dict[int, list] = {}

    def b_moves(b):
        idx = b_index.get(b)
        if idx is None:
            idx = {}
            for lb, ts in B.delta[b].items():
                rest = tuple(lb[j] for j in b_only)
                idx.setdefault(tuple(lb[j] for j in b_sh), []).append(
                    (rest, all(x == PAD for x in rest), ts))
            b_index[b] = idx
        return idx

    def a_options(a):
        opts = a_index.get(a)
        if opts is None:
            opts = []
            if a != DONE:
                for la, ts in A.delta[a].items():
                    opts.append((la, tuple(la[i] for i in a_sh), all(x == PAD for x in la), ts))
            if a == DONE or a in A.accepting:
                opts.append((pad_a, pad_key, True, (DONE,)))
            a_index[a] = opts
        return opts

    pad_rest = (PAD,) * len(b_only)

    def step(key):
        a, b = key
        b_final = b == DONE or b in B.accepting
        moves = b_moves(b) if b != DONE else {}
        for la, k, a_pad, ta in a_options(a):
            opts = moves.get(k, ())
            if b_final and k == pad_key:
                opts = list(opts) + [(pad_rest, True, (DONE,))]
            for rest, r_pad, tb in opts:
                if a_pad and r_pad:
                    # an all-padding letter, or both sides idle
                    continue
                letter = la + rest
                for s in ta:
                    for t in tb:
                        yield letter, (s, t)

    def accepting(key):
        a, b = key
        return (a == DONE or a in A.accepting) and (b == DONE or b in B.accepting)

    starts = [(a, b) for a in sorted(A.initial) for b in sorted(B.initial)]
    return explore(A.base, tracks, starts, step, accepting)


def join_all(automata: Sequence[SyncAutomaton]) -> SyncAutomaton:
    result = automata[0]
    for B in automata[1:]:
        result = join(result, B)
    return result


def intersect(A: SyncAutomaton, B: SyncAutomaton) -> SyncAutomaton:
    if set(A.tracks) != set(B.tracks):
        raise AlphabetError(f"tracks differ: {A.tracks} vs {B.tracks}")
    return join(A, B)


def union(A: SyncAutomaton, B: SyncAutomaton) -> SyncAutomaton:
    _check_base(A, B)
    B = reorder(B, A.tracks)
    n = A.n_states
    delta = list(A.delta) + [{a: tuple(t + n for t in ts) for a, ts in row.items()}
                             for row in B.delta]
    return SyncAutomaton(A.base, A.tracks, delta,
                         list(A.initial) + [s + n for s in B.initial],
                         list(A.accepting) + [s + n for s in B.accepting])


def union_all(automata: Sequence[SyncAutomaton]) -> SyncAutomaton:
    result = automata[0]
    for B in automata[1:]:
        result = union(result, B)
    return result


def difference(A: SyncAutomaton, B: SyncAutomaton) -> SyncAutomaton:
    """Words of ``A`` not accepted by ``B``."""
    _check_base(A, B)
    D = determinize(reorder(B, A.tracks))
    d0 = next(iter(D.initial))
    SINK = -1

    def step(key):
        a, q = key
        for la, ts in A.delta[a].items():
            nq = SINK
            if q != SINK:
                nxt = D.delta[q].get(la)
                if nxt is not None:
                    nq = nxt[0]
            for t in ts:
                yield la, (t, nq)

    def accepting(key):
        a, q = key
        return a in A.accepting and (q == SINK or q not in D.accepting)

    return explore(A.base, A.tracks, [(a, d0) for a in sorted(A.initial)], step, accepting)


def complement(A: SyncAutomaton, universe: SyncAutomaton) -> SyncAutomaton:
    """Complement relative to ``universe`` (usually the valid encodings)."""
    return difference(universe, A)


def project(A: SyncAutomaton, keep: Sequence[Hashable]) -> SyncAutomaton:
    """Existentially quantify away every track not in ``keep``.

    Letters that become all padding can only occur at the end of a word, so
    they are removed and their sources inherit acceptance from the padded
    tail.  The result is in general nondeterministic.
    """
    keep = tuple(keep)
    idx = [A.tracks.index(t) for t in keep]
    delta: list[dict] = []
    eps: list[set] = []
    for row in A.delta:
        new: dict[tuple, set] = {}
        tail: set = set()
        for a, ts in row.items():
            r = tuple(a[i] for i in idx)
            if all(x == PAD for x in r):
                tail.update(ts)
            else:
                new.setdefault(r, set()).update(ts)
        delta.append({a: tuple(sorted(ts)) for a, ts in new.items()})
        eps.append(tail)
    acc = set(A.accepting)
    changed = True
    while changed:
        changed = False
        for s in range(A.n_states):
            if s not in acc and not acc.isdisjoint(eps[s]):
                acc.add(s)
                changed = True
    return SyncAutomaton(A.base, keep, delta, A.initial, acc)


def project_away(A: SyncAutomaton, drop: Iterable[Hashable]) -> SyncAutomaton:
    drop = set(drop)
    return project(A, [t for t in A.tracks if t not in drop])


def universal_project(A: SyncAutomaton, keep: Sequence[Hashable],
                      universe: SyncAutomaton) -> SyncAutomaton:
    """``forall`` over the dropped tracks, as not-exists-not within ``universe``."""
    universe = reorder(universe, A.tracks)
    outer = project(universe, keep)
    return complement(project(complement(A, universe), keep), outer)


def are_equivalent(A: SyncAutomaton, B: SyncAutomaton) -> bool:
    return is_empty(difference(A, B)) and is_empty(difference(B, A))


def is_subset(A: SyncAutomaton, B: SyncAutomaton) -> bool:
    return is_empty(difference(A, B))


# --------------------------------------------------------------------------
# queries with some tracks fixed

class FixedTrackQuery:
    """Enumerates the words of ``A`` whose ``fixed`` tracks spell a given tuple.

    The automaton is indexed once; each query runs a forward pass over the
    fixed word, a backward liveness pass, and then walks only live pairs, so
    its cost is linear in the word length times the number of states.
    """

    def __init__(self, A: SyncAutomaton, fixed: Sequence[Hashable]):
        self.A = A
        self.fixed = tuple(fixed)
        self.fidx = [A.tracks.index(t) for t in self.fixed]
        self.free = tuple(t for t in A.tracks if t not in self.fixed)
        self.ridx = [A.tracks.index(t) for t in self.free]
        self.index: list[dict] = []
        for row in A.delta:
            idx: dict[tuple, list] = {}
            for a, ts in row.items():
                key = tuple(a[i] for i in self.fidx)
                idx.setdefault(key, []).append((tuple(a[i] for i in self.ridx), ts))
            self.index.append(idx)

    def run(self, fixed_word: TrackWord, limit: int | None = None) -> list[TrackWord]:
        letters = fixed_word.letters
        n = len(letters)
        pad = (PAD,) * len(self.fixed)
        tail = self.A.n_states + 1
        layers = [set(self.A.initial)]
        pos = 0
        while layers[-1] and pos < n + tail:
            key = letters[pos] if pos < n else pad
            nxt = set()
            for s in layers[-1]:
                for _, ts in self.index[s].get(key, ()):
                    nxt.update(ts)
            layers.append(nxt)
            pos += 1
        alive = [set() for _ in layers]
        for p in range(len(layers) - 1, -1, -1):
            key = letters[p] if p < n else pad
            for s in layers[p]:
                if p >= n and s in self.A.accepting:
                    alive[p].add(s)
                elif p + 1 < len(layers):
                    for _, ts in self.index[s].get(key, ()):
                        if not alive[p + 1].isdisjoint(ts):
                            alive[p].add(s)
                            break
        if len(layers) == n + tail + 1 and alive[-1]:
            raise ResourceError("query language is infinite")
        found: set = set()
        out: list[TrackWord] = []
        # prefixes are linked lists (letter, parent) so each step is O(1)
        stack = [(s, 0, None) for s in sorted(alive[0])]
        while stack:
            s, p, node = stack.pop()
            if p >= n and s in self.A.accepting:
                prefix, cur = [], node
                while cur is not None:
                    prefix.append(cur[0])
                    cur = cur[1]
                prefix = tuple(reversed(prefix))
                if prefix not in found:
                    found.add(prefix)
                    out.append(TrackWord.from_letters(
                        [a for a in prefix if any(x != PAD for x in a)], len(self.free)))
                    if limit is not None and len(out) > limit:
                        break
            if p + 1 >= len(layers):
                continue
            key = letters[p] if p < n else pad
            for r, ts in self.index[s].get(key, ()):
                for t in ts:
                    if t in alive[p + 1]:
                        stack.append((t, p + 1, (r, node)))
        return out


# --------------------------------------------------------------------------
# text format

def _format_letter(a: tuple, b: int) -> str:
    return "|".join("#" if s == PAD else "%d/%d" % digits(s, b) for s in a)


def _parse_letter(text: str, b: int, k: int) -> tuple:
    if k == 0:
        raise ValueError("a 0-track automaton has no letters")
    parts = text.split("|")
    if len(parts) != k:
        raise ValueError(f"letter {text!r} does not have {k} entries")
    out = []
    for p in parts:
        if p == "#":
            out.append(PAD)
        else:
            x, y = p.split("/")
            x, y = int(x), int(y)
            if not (0 <= x < b and 0 <= y < b):
                raise ValueError(f"digit out of range in {text!r}")
            out.append(x * b + y)
    if all(s == PAD for s in out):
        raise ValueError("the all-padding letter is not part of the alphabet")
    return tuple(out)


def dumps(A: SyncAutomaton) -> str:
    lines = [f"base={A.base}", f"tracks={A.k}"]
    if A.k:
        lines.append("labels=" + " ".join(str(t) for t in A.tracks))
    lines.append(f"deterministic={'true' if A.deterministic else 'false'}")
    for s in range(A.n_states):
        flags = (" initial" if s in A.initial else "") + (" accepting" if s in A.accepting else "")
        lines.append(f"state {s}{flags}")
    for s, row in enumerate(A.delta):
        for a in sorted(row):
            for t in row[a]:
                lines.append(f"trans {s} {_format_letter(a, A.base)} {t}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> SyncAutomaton:
    header: dict[str, str] = {}
    states: dict[int, tuple[bool, bool]] = {}
    trans: list[tuple[int, str, int]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("state "):
            parts = line.split()
            flags = set(parts[2:])
            if flags - {"initial", "accepting"}:
                raise ValueError(f"line {n}: unknown state flag in {line!r}")
            states[int(parts[1])] = ("initial" in flags, "accepting" in flags)
        elif line.startswith("trans "):
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {n}: expected 'trans <src> <letter> <dst>'")
            trans.append((int(parts[1]), parts[2], int(parts[3])))
        elif "=" in line:
            key, value = line.split("=", 1)
            header[key.strip()] = value.strip()
        else:
            raise ValueError(f"line {n}: cannot parse {line!r}")
    try:
        b = int(header["base"])
        k = int(header["tracks"])
    except KeyError as exc:
        raise ValueError(f"missing header {exc.args[0]!r}") from None
    labels = header.get("labels", "").split() if k else []
    if not labels and k:
        labels = [f"t{i}" for i in range(k)]
    if len(labels) != k:
        raise ValueError("labels do not match the track count")
    n_states = max(states, default=-1) + 1
    if set(states) != set(range(n_states)):
        raise ValueError("states must be numbered 0..n-1")
    delta: list[dict] = [{} for _ in range(n_states)]
    for s, letter, t in trans:
        if s not in states or t not in states:
            raise ValueError(f"transition {s} -> {t} uses an undeclared state")
        a = _parse_letter(letter, b, k)
        delta[s][a] = delta[s].get(a, ()) + (t,)
    A = SyncAutomaton(b, labels, delta,
                      [s for s, (i, _) in states.items() if i],
                      [s for s, (_, f) in states.items() if f])
    declared = header.get("deterministic")
    if declared == "true" and not A.deterministic:
        raise ValueError("file declares deterministic=true but is not")
    return A


def save(A: SyncAutomaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(A))


def load(path) -> SyncAutomaton:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
