from fractions import Fraction as F

import pytest

from autospline.automata import are_equivalent
from autospline.fixtures import MESHES, mutated_nested_fixtures
from autospline.kraft import (VerificationError, anchor_offsets, anchors_in_window,
                              build_kraft_languages, kraft_formula, load_basis, save_basis)
from autospline.mesh import HierarchicalMesh, save_mesh
from autospline.oracle import anchor, box_domain, oracle_kraft

from test_mesh import strictly_inside


def test_anchor_offsets():
    offs = anchor_offsets(1, 1, 0)
    # the anchor cell of a hat is the right one of its two support cells
    assert offs.t == {(-1,): (F(-1),), (0,): (F(0),)}
    assert offs.r[((-1,), 0)] == (F(-3, 2),)
    assert offs.r[((0,), 1)] == (F(1, 2),)
    offs = anchor_offsets(2, 1, 1)
    assert sorted(offs.t.values()) == [(F(-1, 2),), (F(0),), (F(1, 2),)]
    assert len(anchor_offsets(3, 2, 2).r) == 16 * 4


def test_formulas_by_level():
    M = MESHES["interval-0-2"].mesh()
    assert kraft_formula(M, 0).startswith("(and (in u F0) (or (not (in (add u tm1) L1))")
    assert "L2" not in kraft_formula(M, 1)
    assert kraft_formula(HierarchicalMesh(1, 1, 2, []), 0) == "(in u F0)"


def test_hand_computed_interval():
    fx = MESHES["interval-0-2"]
    K = build_kraft_languages(fx.mesh())
    window = [(-3, 5)]
    level0 = anchors_in_window(K.L_hat(0), 0, window)
    assert (F(3, 2),) not in level0
    assert {(F(1, 2),), (F(5, 2),)} <= level0
    assert anchors_in_window(K.L_hat(1), 1, window) == {(F(3, 4),), (F(5, 4),), (F(7, 4),)}


def test_single_level_selects_every_b_spline():
    M = HierarchicalMesh(1, 2, 2, [])
    K = build_kraft_languages(M)
    window = [(0, 3)]
    assert anchors_in_window(K.L_hat(0), 0, window) == {(F(1, 2),), (F(3, 2),), (F(5, 2),)}
    sel = oracle_kraft(box_domain([]), 1, 2, 1, window)[0]
    assert strictly_inside(sel, window) == anchors_in_window(K.L_hat(0), 0, window)
    assert anchor(0, (0,), 2) == (F(3, 2),)


@pytest.mark.parametrize("name", sorted(MESHES))
def test_matches_oracle(name):
    fx = MESHES[name]
    K = build_kraft_languages(fx.mesh(), force=True)
    sel = oracle_kraft(fx.omega(), fx.dimension, fx.degree, len(fx.levels) + 1, fx.window)
    for l, A in enumerate(K.languages):
        assert anchors_in_window(A, l, fx.window) == strictly_inside(sel[l], fx.window), l


def test_refuses_unverified_meshes():
    with pytest.raises(VerificationError) as err:
        build_kraft_languages(MESHES["fig5-right"].mesh())
    assert err.value.result.level == 0
    bad = mutated_nested_fixtures()[-1]
    with pytest.raises(VerificationError, match="not nested"):
        build_kraft_languages(bad.mesh())
    assert not build_kraft_languages(MESHES["fig5-right"].mesh(), force=True).verified


def test_basis_round_trip(tmp_path):
    M = MESHES["interval-0-4"].mesh()
    K = build_kraft_languages(M)
    mesh_path = save_mesh(M, tmp_path)
    path = save_basis(K, tmp_path, mesh_path.name)
    K2 = load_basis(path)
    assert K2.verified and K2.formulas == K.formulas
    for a, b in zip(K.languages, K2.languages):
        assert are_equivalent(a, b)
    (tmp_path / "other.txt").write_text("kind = spline\n")
    with pytest.raises(ValueError):
        load_basis(tmp_path / "other.txt")
