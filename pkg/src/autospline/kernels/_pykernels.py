"""Pure-Python automaton kernels.

Every kernel takes an automaton in CSR form: the transitions of state ``s``
are entries ``offsets[s]:offsets[s + 1]`` of the parallel arrays ``lets``
(interned letter ids, nondecreasing within a state) and ``tgts``.
"""
from __future__ import annotations


class StateBudgetExceeded(RuntimeError):
    pass


def subset_construction(n_states, offsets, lets, tgts, initial, budget):
    """Powerset construction restricted to reachable subsets.

    Returns ``(subsets, d_offsets, d_lets, d_tgts)`` where ``subsets[i]`` is
    the sorted tuple of NFA states forming DFA state ``i`` (state 0 is the
    initial subset).
    """
    offsets = list(offsets)
    lets = list(lets)
    tgts = list(tgts)
    start = tuple(sorted(set(initial)))
    index = {start: 0}
    subsets = [start]
    d_offsets = [0]
    d_lets: list[int] = []
    d_tgts: list[int] = []
    i = 0
    while i < len(subsets):
        moves: dict[int, set[int]] = {}
        for s in subsets[i]:
            for e in range(offsets[s], offsets[s + 1]):
                moves.setdefault(lets[e], set()).add(tgts[e])
        for a in sorted(moves):
            key = tuple(sorted(moves[a]))
            j = index.get(key)
            if j is None:
                if len(subsets) >= budget:
                    raise StateBudgetExceeded(
                        f"determinization exceeded the state budget of {budget}")
                j = len(subsets)
                index[key] = j
                subsets.append(key)
            d_lets.append(a)
            d_tgts.append(j)
        d_offsets.append(len(d_lets))
        i += 1
    return subsets, d_offsets, d_lets, d_tgts


def moore_partition(n_states, offsets, lets, tgts, accepting):
    """Coarsest partition of a partial DFA compatible with acceptance.

    Missing transitions go to an implicit rejecting sink, so two states are
    merged only when they have the same letters defined.
    """
    offsets = list(offsets)
    lets = list(lets)
    tgts = list(tgts)
    cls = [1 if accepting[s] else 0 for s in range(n_states)]
    count = len(set(cls))
    while True:
        table: dict = {}
        new = [0] * n_states
        for s in range(n_states):
            sig = (cls[s],) + tuple(
                (lets[e], cls[tgts[e]]) for e in range(offsets[s], offsets[s + 1]))
            new[s] = table.setdefault(sig, len(table))
        cls = new
        if len(table) == count:
            return cls
        count = len(table)


def live_states(n_states, offsets, tgts, initial, accepting):
    """Mask of states that are reachable and co-reachable."""
    offsets = list(offsets)
    tgts = list(tgts)
    fwd = [False] * n_states
    stack = [s for s in initial]
    for s in stack:
        fwd[s] = True
    while stack:
        s = stack.pop()
        for e in range(offsets[s], offsets[s + 1]):
            t = tgts[e]
            if not fwd[t]:
                fwd[t] = True
                stack.append(t)
    preds: list[list[int]] = [[] for _ in range(n_states)]
    for s in range(n_states):
        for e in range(offsets[s], offsets[s + 1]):
            preds[tgts[e]].append(s)
    bwd = [False] * n_states
    stack = [s for s in range(n_states) if accepting[s]]
    for s in stack:
        bwd[s] = True
    while stack:
        s = stack.pop()
        for p in preds[s]:
            if not bwd[p]:
                bwd[p] = True
                stack.append(p)
    return [fwd[s] and bwd[s] for s in range(n_states)]
