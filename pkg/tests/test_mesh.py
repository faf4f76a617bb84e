from fractions import Fraction as F

import pytest

from autospline.automata import ResourceError, are_equivalent, union
from autospline.fixtures import MESHES, mutated_nested_fixtures
from autospline.kraft import anchors_in_window
from autospline.mesh import (Cell, HierarchicalMesh, barycentre, cells_connected, check_assumption_b,
                             check_nested, connected_subsets, decompose_by_level, format_mesh_spec,
                             index_set, load_mesh_spec, parse_mesh_spec, parse_pattern, save_mesh)
from autospline.oracle import oracle_assumption_b, oracle_nested


def strictly_inside(points, window):
    return {p for p in points if all(lo < c < hi for c, (lo, hi) in zip(p, window))}


def test_barycentres():
    assert barycentre(Cell(0, (0, 0))) == (F(1, 2), F(1, 2))
    assert barycentre(Cell(1, (3, -1))) == (F(7, 4), F(-1, 4))
    assert Cell.containing(1, (F(7, 4), F(-1, 4))) == Cell(1, (3, -1))
    with pytest.raises(ValueError):
        Cell.containing(1, (F(1, 2),))


def test_patterns():
    p = parse_pattern("box 0..1/2 1..3/2", 2)
    assert p.contains_cell(Cell(1, (0, 2)))
    assert not p.contains_cell(Cell(1, (1, 2)))
    q = parse_pattern("periodic 0..1 every 2", 1)
    assert [i for i in range(-4, 4) if q.contains_cell(Cell(0, (i,)))] == [-4, -2, 0, 2]
    assert parse_pattern("box 1..3 @2", 1).contains_cell(Cell(2, (1,)))
    for bad in ("", "disc 0..1", "box 1..0", "box 0..1", "periodic 0..1 0..1"):
        with pytest.raises(ValueError):
            parse_pattern(bad, 2)


def test_language_rejects_wrong_level():
    from autospline.relations import point_automaton
    with pytest.raises(ValueError):
        HierarchicalMesh(1, 1, 2, [point_automaton(2, ("x",), (F(1, 4),))])


def test_decompose_by_level():
    M = MESHES["fig1-mesh"].mesh()
    L = union(M.L(1), M.L(2))
    parts = decompose_by_level(L, M.levels)
    assert len(parts) == 2
    assert are_equivalent(parts[0], M.L(1))
    assert are_equivalent(parts[1], M.L(2))


@pytest.mark.parametrize("name", sorted(MESHES))
def test_fixtures_are_nested(name):
    fx = MESHES[name]
    assert oracle_nested(fx.omega(), fx.dimension, len(fx.levels) + 1, fx.window) == []
    assert check_nested(fx.mesh()).ok


@pytest.mark.parametrize("fx", mutated_nested_fixtures(), ids=lambda f: f.name)
def test_mutations_are_not_nested(fx):
    found = oracle_nested(fx.omega(), fx.dimension, len(fx.levels) + 1, fx.window)
    assert found
    r = check_nested(fx.mesh())
    assert not r.ok and r.level == 2
    # the witness is a genuine level-1 cell of Omega^2 outside Omega^1
    c = Cell.containing(1, r.witness)
    M = fx.mesh()
    assert M.contains_cell(2, c)
    assert not M.contains_cell(1, Cell(0, tuple(z // 1 for z in r.witness)))
    expected = strictly_inside({p for l, p in found if l == 2}, fx.window)
    assert anchors_in_window(r.violators, 1, fx.window) == expected


def test_single_level_is_nested():
    M = HierarchicalMesh(1, 2, 2, [])
    assert check_nested(M).ok and check_assumption_b(M).ok


def test_connected_subsets():
    S = connected_subsets(1, 1)
    assert len(S) == 3 and all(p.connected for p in S)
    S2 = connected_subsets(1, 2)
    assert sum(p.connected for p in S2) == 6
    assert frozenset({(-1,), (1,)}) not in {p.J for p in S2 if p.connected}
    with pytest.raises(ValueError):
        S2.classify([(5,)])


def test_fig4_patterns_for_degree_four():
    with pytest.raises(ResourceError):
        connected_subsets(2, 4, budget=24)
    S = connected_subsets(2, 4, budget=25)
    assert len(S.I) == 25
    J = [(-2, -1), (-1, -1), (0, -1), (1, -1), (2, -1), (-1, 0), (1, 0), (0, 1)]
    J2 = J[:6] + [(0, 0), (1, 0), (0, 1), (0, -2), (2, 2)]
    assert J in S
    assert J2 not in S
    assert index_set(2, 4) == S.I


def test_vertex_contact_counts():
    assert cells_connected([(0, 0), (1, 1)])
    assert not cells_connected([(0, 0), (2, 0)])


def test_assumption_b_interval():
    ok = MESHES["interval-0-4"]
    assert check_assumption_b(ok.mesh()).ok
    fx = MESHES["interval-split"]
    r = check_assumption_b(fx.mesh())
    assert not r.ok and r.level == 0
    assert r.witness == (F(1, 2),)
    expected = oracle_assumption_b(fx.omega(), 1, 2, 2, fx.window)[0]
    got = anchors_in_window(r.violators, 0, fx.window)
    assert (F(3, 2),) in got
    assert got == strictly_inside(expected, fx.window)


@pytest.mark.parametrize("name", sorted(MESHES))
@pytest.mark.parametrize("reading", ["closed", "cells"])
def test_assumption_b_matches_oracle(name, reading):
    fx = MESHES[name]
    r = check_assumption_b(fx.mesh(), reading)
    expected = oracle_assumption_b(fx.omega(), fx.dimension, fx.degree, len(fx.levels) + 1,
                                   fx.window, reading)
    bad = {l: strictly_inside(s, fx.window) for l, s in expected.items()}
    if r.ok:
        assert not any(bad.values())
    else:
        assert anchors_in_window(r.violators, r.level, fx.window) == bad[r.level]
        assert r.witness in expected[r.level] or not strictly_inside({r.witness}, fx.window)
        assert all(not bad[l] for l in range(r.level))


def test_known_assumption_b_outcomes():
    assert check_assumption_b(MESHES["fig5-left"].mesh()).ok
    assert not check_assumption_b(MESHES["fig5-right"].mesh()).ok
    assert not check_assumption_b(MESHES["fig1-mesh"].mesh()).ok
    assert check_assumption_b(MESHES["fig1-mesh"].mesh(), "cells").ok


def test_reading_must_be_known():
    with pytest.raises(ValueError):
        check_assumption_b(MESHES["interval-0-2"].mesh(), "open")


def test_mesh_spec_round_trip(tmp_path):
    fx = MESHES["fig5-right"]
    text = format_mesh_spec(2, 1, 2, fx.patterns())
    M = parse_mesh_spec(text)
    assert M.levels == 3
    for l in (1, 2):
        assert are_equivalent(M.L(l), fx.mesh().L(l))
    path = save_mesh(M, tmp_path)
    assert are_equivalent(load_mesh_spec(path).L(2), M.L(2))


def test_mesh_spec_with_automaton_levels(tmp_path):
    from autospline.automata import save
    M = MESHES["interval-0-4"].mesh()
    save(M.L(1), tmp_path / "l1.aut")
    (tmp_path / "m.txt").write_text("dimension = 1\ndegree = 2\nlevels = 2\n[level 1]\n"
                                    "automaton = l1.aut  # from disk\n")
    M2 = load_mesh_spec(tmp_path / "m.txt")
    assert M2.patterns == [None]
    assert M2.contains_cell(1, Cell(0, (3,)))
    assert load_mesh_spec(tmp_path / "m.txt", {"degree": "3"}).degree == 3


def test_mesh_spec_errors():
    for text in ("dimension = 1\nlevels = 2\n", "dimension = 1\ndegree = 1\nlevels = 0\n",
                 "dimension = 1\ndegree = 1\nlevels = 2\n[level 2]\npattern = box 0..1\n",
                 "dimension = 1\ndegree = 1\nlevels = 2\n[level 1]\ncolour = red\n",
                 "dimension = 1\ndegree = 1\nlevels = 2\nnonsense\n"):
        with pytest.raises(ValueError):
            parse_mesh_spec(text)
