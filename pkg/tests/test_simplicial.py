from collections import Counter

import pytest

from pachner.simplicial import (
    MOVE,
    boundary_signs,
    dimension,
    distinguished_edge,
    faces,
    label,
    orientation_sign,
    simplex,
    substitute,
    tetra_order_and_sign,
)


@pytest.mark.parametrize("spec", ["1234", (4, 3, 2, 1), [1, 2, 3, 4], iter([2, 1, 4, 3])])
def test_simplex_normalizes(spec):
    assert simplex(spec) == (1, 2, 3, 4)


@pytest.mark.parametrize("bad", ["", "1123", "0123", "1237", (1, 9)])
def test_simplex_rejects(bad):
    with pytest.raises(ValueError):
        simplex(bad)


def test_faces_counts():
    u = (1, 2, 3, 4, 5)
    assert [len(faces(u, d)) for d in range(5)] == [5, 10, 10, 5, 1]
    assert dimension(u) == 4
    with pytest.raises(ValueError):
        faces(u, 5)


def test_boundary_of_boundary_vanishes():
    u = (1, 2, 3, 4, 5)
    total = Counter()
    for t, s1 in boundary_signs(u):
        for s, s2 in boundary_signs(t):
            total[s] += s1 * s2
    assert all(v == 0 for v in total.values())


def test_tetra_order_alternates():
    order = tetra_order_and_sign("12345")
    assert [label(t) for t, _ in order] == ["2345", "1345", "1245", "1235", "1234"]
    assert [s for _, s in order] == [1, -1, 1, -1, 1]
    with pytest.raises(ValueError):
        tetra_order_and_sign("1234")


def test_orientation_sign_and_edge():
    assert orientation_sign((1, 3, 4), (1, 2, 3, 4)) == -1
    assert distinguished_edge("2456") == (2, 4)
    with pytest.raises(ValueError):
        orientation_sign((1, 5, 6), (1, 2, 3, 4))


def test_substitute():
    assert substitute("125", (2, 3, 4, 5, 6)) == (2, 3, 6)
    assert substitute((3, 1), (1, 3, 4, 5, 6)) == (1, 4)


def test_move_layout():
    assert len(MOVE.tetrahedra) == 15
    assert MOVE.boundary("left") == MOVE.boundary("right")
    assert len(MOVE.boundary("left")) == 9
    for side, tri in (("left", {1, 2, 3}), ("right", {4, 5, 6})):
        pents, inner = MOVE.side(side)
        assert all(tri <= set(u) for u in pents)
        # each inner tetrahedron is shared by exactly two pentachora of the side
        for t in inner:
            assert sum(set(t) <= set(u) for u in pents) == 2
    with pytest.raises(ValueError):
        MOVE.side("middle")


def test_pentachoron_signs_give_oriented_gluing():
    # a shared inner tetrahedron must appear with opposite induced orientations
    for side in ("left", "right"):
        pents, inner = MOVE.side(side)
        for t in inner:
            signs = [MOVE.pentachoron_signs[u] * orientation_sign(t, u)
                     for u in pents if set(t) <= set(u)]
            assert sorted(signs) == [-1, 1]
