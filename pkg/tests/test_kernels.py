import os
import random
import subprocess
import sys

import pytest

from autospline import kernels
from autospline.automata import _csr, determinize
from autospline.kernels import _pykernels

from _support import SYM1, random_nfa

try:
    from autospline.kernels import _ckernels
except ImportError:
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def csr_inputs(seed):
    A = random_nfa(random.Random(seed), ("x",), SYM1, n=9, density=0.5)
    alphabet, offsets, lets, tgts = _csr(A)
    return A, offsets, lets, tgts


@needs_c
@pytest.mark.parametrize("seed", range(15))
def test_backends_agree(seed):
    A, offsets, lets, tgts = csr_inputs(seed)
    init = sorted(A.initial)
    acc = [s in A.accepting for s in range(A.n_states)]
    py = _pykernels.subset_construction(A.n_states, offsets, lets, tgts, init, 10 ** 6)
    c = _ckernels.subset_construction(A.n_states, offsets, lets, tgts, init, 10 ** 6)
    assert [list(x) for x in py] == [list(x) for x in c]
    assert list(_pykernels.live_states(A.n_states, offsets, tgts, init, acc)) == \
        list(_ckernels.live_states(A.n_states, offsets, tgts, init, acc))
    subsets, d_off, d_lets, d_tgts = py
    d_acc = [not A.accepting.isdisjoint(s) for s in subsets]
    assert list(_pykernels.moore_partition(len(subsets), d_off, d_lets, d_tgts, d_acc)) == \
        list(_ckernels.moore_partition(len(subsets), d_off, d_lets, d_tgts, d_acc))


@needs_c
def test_both_backends_enforce_the_budget():
    A, offsets, lets, tgts = csr_inputs(3)
    for impl in (_pykernels, _ckernels):
        with pytest.raises(kernels.StateBudgetExceeded):
            impl.subset_construction(A.n_states, offsets, lets, tgts, sorted(A.initial), 1)


def test_backend_is_selected_at_import():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"
    env = dict(os.environ, AUTOSPLINE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from autospline import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"


def test_determinize_uses_selected_backend():
    A, *_ = csr_inputs(5)
    D = determinize(A)
    assert D.deterministic
