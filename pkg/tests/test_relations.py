import random
from fractions import Fraction as F

from autospline.automata import (TrackWord, accepts, are_equivalent, join, minimize, project,
                                 rename, reorder)
from autospline.numeration import encode
from autospline.relations import (addition_automaton, equality_automaton, less_than_automaton,
                                  level_filter_automaton, point_automaton,
                                  scalar_multiple_automaton, shift_automaton,
                                  valid_encoding_automaton)

from _support import random_dyadic


def word(b, *zs):
    return TrackWord(tuple(encode(z, b).symbols for z in zs))


def test_addition_examples():
    A = addition_automaton(2)
    assert accepts(A, word(2, F(1, 2), F(1, 2), 1))
    assert accepts(A, word(2, F(3, 8), F(-27, 8), -3))
    assert not accepts(A, word(2, F(3, 8), F(-27, 8), 3))


def test_addition_random_base2():
    A = addition_automaton(2)
    rng = random.Random(5)
    for _ in range(400):
        x, y = random_dyadic(rng, 10 ** 4, 8), random_dyadic(rng, 10 ** 4, 8)
        assert accepts(A, word(2, x, y, x + y))
        for delta in (F(1, 2 ** rng.randint(0, 9)), -1, F(-3, 256)):
            assert not accepts(A, word(2, x, y, x + y + delta))


def test_addition_base6():
    A = addition_automaton(6)
    rng = random.Random(6)
    for _ in range(200):
        x = F(rng.randint(-10 ** 5, 10 ** 5), 6 ** rng.randint(0, 4))
        y = F(rng.randint(-10 ** 5, 10 ** 5), 2 ** rng.randint(0, 4))
        assert accepts(A, word(6, x, y, x + y))
        assert not accepts(A, word(6, x, y, x + y + F(1, 6)))


def test_adding_zero_is_identity():
    # u + v = u forces v = 0
    A = addition_automaton(2, 1, ("u", "v", "w"))
    only_zero = minimize(project(join(A, equality_automaton(2, ("u", "w"))), ("v",)))
    assert are_equivalent(only_zero, point_automaton(2, ("v",), (0,)))


def test_addition_commutes():
    A = addition_automaton(2, 1, ("u", "v", "w"))
    B = reorder(rename(A, {"u": "v", "v": "u"}), ("u", "v", "w"))
    assert are_equivalent(A, B)


def test_addition_projection_is_total():
    # for all u, w there is v with u + v = w
    A = addition_automaton(2, 1, ("u", "v", "w"))
    P = minimize(project(A, ("u", "w")))
    assert are_equivalent(P, valid_encoding_automaton(2, 2, ("u", "w")))


def test_two_dimensional_addition():
    A = addition_automaton(2, 2)
    assert accepts(A, word(2, F(1, 2), 3, F(-1, 4), F(5, 8), F(1, 4), F(29, 8)))
    assert not accepts(A, word(2, F(1, 2), 3, F(-1, 4), F(5, 8), F(1, 4), F(3, 8)))


def test_less_than():
    L = less_than_automaton(2, 2)
    assert accepts(L, word(2, 0, 0, 1, 1))
    assert not accepts(L, word(2, 0, 1, 1, 1))
    assert accepts(L, word(2, F(-27, 8), F(1, 4), -3, F(1, 2)))
    rng = random.Random(8)
    L1 = less_than_automaton(2)
    for _ in range(300):
        x, y = random_dyadic(rng, 100, 5), random_dyadic(rng, 100, 5)
        assert accepts(L1, word(2, x, y)) == (x < y)


def test_scalar_multiples():
    assert are_equivalent(scalar_multiple_automaton(1, 2), equality_automaton(2))
    Z = scalar_multiple_automaton(0, 2)
    assert accepts(Z, word(2, F(-27, 8), 0))
    assert not accepts(Z, word(2, F(-27, 8), 1))
    R = scalar_multiple_automaton(F(3, 2), 2)
    assert accepts(R, word(2, F(5, 4), F(15, 8)))
    rng = random.Random(9)
    for mu in (F(3, 2), F(-5, 4), 7, F(1, 8)):
        R = scalar_multiple_automaton(mu, 2)
        for _ in range(50):
            x = random_dyadic(rng, 1000, 6)
            assert accepts(R, word(2, x, mu * x))
            assert not accepts(R, word(2, x, mu * x + F(1, 64)))


def test_scalar_inverse_composes_to_identity():
    R = scalar_multiple_automaton(4, 2, ("x", "t"))
    S = scalar_multiple_automaton(F(1, 4), 2, ("t", "y"))
    C = minimize(project(join(R, S), ("x", "y")))
    assert are_equivalent(C, equality_automaton(2, ("x", "y")))


def test_shift():
    S = shift_automaton(2, F(-3, 4))
    rng = random.Random(10)
    for _ in range(100):
        x = random_dyadic(rng, 100, 6)
        assert accepts(S, word(2, x, x - F(3, 4)))


def test_level_filter():
    L0 = level_filter_automaton(1, 0, 2)
    assert accepts(L0, word(2, F(1, 2)))
    assert not accepts(L0, word(2, F(1, 4)))
    L1 = level_filter_automaton(1, 1, 2)
    assert accepts(L1, word(2, F(7, 4)))
    L2 = level_filter_automaton(2, 1, 2)
    assert accepts(L2, word(2, F(7, 4), F(-1, 4)))
    assert not accepts(L2, word(2, F(7, 4), F(1, 2)))


def test_level_filter_base6():
    for level in range(3):
        L = level_filter_automaton(1, level, 6)
        for i in range(-20, 20):
            z = F(2 * i + 1, 2 ** (level + 1))
            assert accepts(L, word(6, z))
            assert not accepts(L, word(6, z + F(1, 2 ** (level + 2))))
            assert not accepts(L, word(6, z + F(1, 3)))
