import random
from fractions import Fraction as F

import pytest

from autospline.automata import (FixedTrackQuery, ResourceError, SyncAutomaton, TrackWord, accepts,
                                 are_equivalent, complement, convolve, determinize, dumps,
                                 empty_automaton, enumerate_words, from_words, intersect, is_empty,
                                 join, load, loads, minimize, project, rename, reorder, save,
                                 set_state_budget, shortest_word, singleton, state_budget, union,
                                 universal_project)
from autospline.numeration import PAD, decode, encode
from autospline.relations import (addition_automaton, equality_automaton, point_automaton,
                                  valid_encoding_automaton)

from _support import SYM1, closure_trial, convolutions, language, random_nfa


def test_convolution_of_three_strings():
    w = convolve([[0, 0, 0, 1, 1, 0, 1], [1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0], [1, 0, 0, 1, 0, 1]])
    assert len(w) == 11
    assert w.letters[0] == (0, 1, 1)
    assert w.letters[6] == (1, 0, PAD)
    assert w.letters[10] == (PAD, 0, PAD)


def test_convolution_edge_cases():
    assert convolve([[1, 0]]).letters == ((1,), (0,))
    assert len(convolve([[], []])) == 0
    with pytest.raises(ValueError):
        TrackWord.from_letters([(PAD, 1), (0, 1)])


def test_empty_language():
    E = empty_automaton(2, ("x",))
    assert is_empty(E)
    assert not accepts(E, TrackWord(((0,),)))
    assert not is_empty(valid_encoding_automaton(2))


def test_complement_is_disjoint():
    V = valid_encoding_automaton(2, 1, ("x",))
    A = point_automaton(2, ("x",), (F(3, 4),))
    assert is_empty(intersect(A, complement(A, V)))


def test_two_word_union():
    A = union(point_automaton(2, ("x",), (0,)), point_automaton(2, ("x",), (1,)))
    words, done = enumerate_words(A)
    assert done and len(words) == 2
    assert len(enumerate_words(minimize(A))[0]) == 2
    assert enumerate_words(empty_automaton(2, ("x",))) == ([], True)


def test_complement_inside_raw_words_has_interior_padding():
    raw = SyncAutomaton(2, ("x", "y"), [{(a, c): (0,) for a in (0, 1, 2, 3, PAD)
                                         for c in (0, 1, 2, 3, PAD) if (a, c) != (PAD, PAD)}],
                        [0], [0])
    V = valid_encoding_automaton(2, 2, ("x", "y"))
    W = complement(V, raw)
    assert accepts(W, [(0, 0), (PAD, 1), (1, 1)])


def test_projection_keeps_subword():
    w = TrackWord((encode(F(5, 4), 2).symbols, encode(F(-27, 8), 2).symbols))
    A = singleton(2, ("x", "y"), w)
    assert accepts(project(A, ("x",)), TrackWord((w.tracks[0],)))
    assert accepts(project(A, ("y",)), TrackWord((w.tracks[1],)))


def test_universal_projection_of_addition():
    # forall v (u + v = v) holds for u = 0 only
    V = valid_encoding_automaton(2, 2, ("u", "v"))
    A = addition_automaton(2, 1, ("u", "v", "w"))
    R = minimize(project(join(A, equality_automaton(2, ("v", "w"))), ("u", "v")))
    Q = universal_project(R, ("u",), V)
    assert are_equivalent(Q, point_automaton(2, ("u",), (0,)))


def test_determinize_matches_nfa_on_random_words():
    rng = random.Random(3)
    words = convolutions(1, SYM1, 6)
    for _ in range(20):
        A = random_nfa(rng, ("x",), SYM1, n=8)
        assert language(determinize(A), words) == language(A, words)


@pytest.mark.parametrize("seed", range(40))
def test_closure_laws(seed):
    assert closure_trial(random.Random(seed)) == []


def test_minimal_automata_are_canonical():
    rng = random.Random(11)
    A = random_nfa(rng, ("x",), SYM1)
    B = union(A, intersect(A, random_nfa(rng, ("x",), SYM1)))
    assert dumps(minimize(A)) == dumps(minimize(B))


def test_track_manipulation():
    A = addition_automaton(2, 1, ("u", "v", "w"))
    B = reorder(A, ("w", "u", "v"))
    assert B.tracks == ("w", "u", "v")
    assert are_equivalent(A, B)
    assert rename(A, {"u": "p"}).tracks == ("p", "v", "w")


def test_shortest_word_and_enumeration():
    A = union(point_automaton(2, ("x",), (F(5, 4),)), point_automaton(2, ("x",), (1,)))
    w = shortest_word(A)
    assert w.tracks == (encode(1, 2).symbols,)
    V = valid_encoding_automaton(2, 1, ("x",))
    words, done = enumerate_words(V, max_count=10)
    assert len(words) == 10 and not done
    words, done = enumerate_words(V, max_length=2)
    assert not done and all(len(x) <= 2 for x in words)


def test_text_format_round_trip(tmp_path):
    A = addition_automaton(6, 1, ("u", "v", "w"))
    text = dumps(A)
    assert "base=6" in text and "tracks=3" in text
    B = loads(text)
    assert dumps(B) == text
    save(A, tmp_path / "add.aut")
    assert dumps(load(tmp_path / "add.aut")) == text


def test_state_budget():
    before = state_budget()
    rng = random.Random(1)
    A = random_nfa(rng, ("x",), SYM1, n=12, density=0.8)
    set_state_budget(2)
    try:
        with pytest.raises(ResourceError):
            determinize(A)
    finally:
        set_state_budget(before)
    with pytest.raises(ValueError):
        set_state_budget(0)


def test_fixed_track_query():
    A = addition_automaton(2, 1, ("u", "v", "w"))
    fixed = minimize(join(A, point_automaton(2, ("v",), (F(1, 2),))))
    q = FixedTrackQuery(fixed, ("u",))
    found = q.run(TrackWord((encode(F(3, 4), 2).symbols,)))
    assert len(found) == 1
    assert [decode(t, 2) for t in found[0].tracks] == [F(1, 2), F(5, 4)]
    with pytest.raises(ResourceError):
        FixedTrackQuery(A, ("u",)).run(TrackWord((encode(1, 2).symbols,)))


def test_from_words_matches_set():
    ws = [((0,), (1,)), ((2,),), ((0,), (1,), (2,))]
    A = from_words(2, ("x",), ws)
    assert language(A, convolutions(1, SYM1, 4)) == set(ws)
