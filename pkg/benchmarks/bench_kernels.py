"""Compare the compiled and pure-Python automaton kernels.

Runs subset construction, Moore partition refinement and the liveness
sweep on the same CSR inputs with both backends and prints median wall
times.  Inputs are random NFAs plus one automaton from the spline code.

    python benchmarks/bench_kernels.py [--repeat 5] [--states 24]
"""
from __future__ import annotations

import argparse
import random
import statistics
import time

from autospline.automata import SyncAutomaton, _csr, determinize, project, trim
from autospline.kernels import _pykernels

try:
    from autospline.kernels import _ckernels
except ImportError:
    _ckernels = None


def random_nfa(n: int, alphabet: int, fanout: int, seed: int) -> SyncAutomaton:
    rng = random.Random(seed)
    letters = [(a,) for a in range(alphabet)]
    delta = []
    for _ in range(n):
        row = {}
        for a in letters:
            if rng.random() < 0.7:
                row[a] = tuple(sorted(rng.sample(range(n), fanout)))
        delta.append(row)
    acc = rng.sample(range(n), max(1, n // 5))
    return SyncAutomaton(2, ("x",), delta, [0], acc)


def spline_workload() -> SyncAutomaton:
    """The projected band/coefficient product used when evaluating g."""
    from autospline.spline import band_automaton, spline_g
    from autospline.automata import join
    f = spline_g()
    return project(join(band_automaton(6, 3, 0, 1), f.relations[0]), ("x0", "lam"))


def timed(fn, repeat):
    out = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t)
    return statistics.median(out)


def bench(name, A, repeat, backends):
    _, off, lets, tgts = _csr(A)
    rows = []
    for label, mod in backends:
        sub = timed(lambda: mod.subset_construction(A.n_states, off, lets, tgts,
                                                    sorted(A.initial), 10 ** 7), repeat)
        D = trim(determinize(A))
        _, doff, dlets, dtgts = _csr(D)
        acc = [s in D.accepting for s in range(D.n_states)]
        moore = timed(lambda: mod.moore_partition(D.n_states, doff, dlets, dtgts, acc), repeat)
        acc_a = [s in A.accepting for s in range(A.n_states)]
        live = timed(lambda: mod.live_states(A.n_states, off, tgts, sorted(A.initial), acc_a),
                     repeat)
        rows.append((label, sub, moore, live))
    print(f"\n{name}: {A.n_states} NFA states, {trim(determinize(A)).n_states} DFA states")
    print(f"  {'backend':8} {'subset':>10} {'moore':>10} {'live':>10}")
    for label, *ts in rows:
        print(f"  {label:8} " + " ".join(f"{t * 1e3:9.2f}ms" for t in ts))
    if len(rows) == 2:
        speed = [p / c if c else float("inf") for p, c in zip(rows[1][1:], rows[0][1:])]
        print("  speedup  " + " ".join(f"{s:10.1f}x" for s in speed))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--states", type=int, default=24)
    args = p.parse_args(argv)
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.insert(0, ("cython", _ckernels))
    else:
        print("compiled kernels not built; timing the fallback only")
    bench("random NFA", random_nfa(args.states, 4, 2, 1), args.repeat, backends)
    bench("random NFA (wide alphabet)", random_nfa(args.states - 4, 8, 2, 2), args.repeat, backends)
    bench("g band product", spline_workload(), args.repeat, backends)


if __name__ == "__main__":
    main()
