"""Simplices of the six-vertex complex and the fixed layout of move 3-3.

A simplex is a strictly increasing tuple of vertex labels from 1..6.  Helpers
accept either tuples or digit strings (``"1234"``) wherever a simplex is
expected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Union

VERTICES: tuple[int, ...] = (1, 2, 3, 4, 5, 6)

Simplex = tuple[int, ...]
SimplexLike = Union[Simplex, str, Iterable[int]]


def simplex(spec: SimplexLike) -> Simplex:
    """Normalize ``spec`` to a sorted vertex tuple, validating labels."""
    if isinstance(spec, str):
        verts = tuple(int(ch) for ch in spec)
    else:
        verts = tuple(int(v) for v in spec)
    if not verts:
        raise ValueError("empty simplex")
    if any(v not in VERTICES for v in verts):
        raise ValueError(f"vertex labels must lie in 1..6, got {verts}")
    if len(set(verts)) != len(verts):
        raise ValueError(f"repeated vertex in {verts}")
    return tuple(sorted(verts))


def label(s: Simplex) -> str:
    return "".join(str(v) for v in s)


def dimension(s: Simplex) -> int:
    return len(s) - 1


def faces(s: SimplexLike, dim: int) -> list[Simplex]:
    """All ``dim``-dimensional faces of ``s`` in lexicographic order."""
    s = simplex(s)
    if not 0 <= dim <= dimension(s):
        raise ValueError(f"face dimension {dim} out of range for {label(s)}")
    return list(combinations(s, dim + 1))


def boundary_signs(s: SimplexLike) -> list[tuple[Simplex, int]]:
    """Codimension-one faces ordered by omitted vertex, with boundary signs.

    The face omitting the k-th vertex (k = 0, 1, ...) carries ``(-1)**k``.
    """
    s = simplex(s)
    return [(s[:k] + s[k + 1:], -1 if k % 2 else 1) for k in range(len(s))]


def tetra_order_and_sign(u: SimplexLike) -> list[tuple[Simplex, int]]:
    """The five 3-faces of pentachoron ``u`` in Grassmann-column order.

    Position k holds the face omitting the k-th vertex of ``u``; signs
    alternate ``+ - + - +`` so the face omitting the last vertex is ``+1``.
    """
    u = simplex(u)
    if len(u) != 5:
        raise ValueError(f"{label(u)} is not a pentachoron")
    return boundary_signs(u)


def distinguished_edge(t: SimplexLike) -> Simplex:
    """Lexicographically first edge of a tetrahedron."""
    t = simplex(t)
    if len(t) != 4:
        raise ValueError(f"{label(t)} is not a tetrahedron")
    return t[:2]


def orientation_sign(face: Simplex, s: Simplex) -> int:
    """Sign of ``face`` inside the oriented boundary of ``s`` (codim one)."""
    for f, sign in boundary_signs(s):
        if f == face:
            return sign
    raise ValueError(f"{label(face)} is not a facet of {label(s)}")


def substitute(pattern: SimplexLike, u: Simplex) -> Simplex:
    """Relabel a simplex written in local labels 1..len(u) into ``u``'s vertices."""
    if isinstance(pattern, str):
        local = [int(ch) for ch in pattern]
    else:
        local = list(pattern)
    return tuple(sorted(u[i - 1] for i in local))


@dataclass(frozen=True)
class MoveComplex:
    """Both sides of the 3-3 move: three pentachora around 123 vs. around 456."""

    lhs_pentachora: tuple[Simplex, ...] = ((1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6))
    rhs_pentachora: tuple[Simplex, ...] = ((1, 2, 4, 5, 6), (1, 3, 4, 5, 6), (2, 3, 4, 5, 6))
    lhs_inner: tuple[Simplex, ...] = ((1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 3, 6))
    rhs_inner: tuple[Simplex, ...] = ((1, 4, 5, 6), (2, 4, 5, 6), (3, 4, 5, 6))
    # consistent orientation relative to the natural vertex order
    pentachoron_signs: dict = field(default_factory=lambda: {
        (1, 2, 3, 4, 5): 1, (1, 2, 3, 4, 6): -1, (1, 2, 3, 5, 6): 1,
        (1, 2, 4, 5, 6): 1, (1, 3, 4, 5, 6): -1, (2, 3, 4, 5, 6): 1,
    })

    @property
    def pentachora(self) -> tuple[Simplex, ...]:
        return self.lhs_pentachora + self.rhs_pentachora

    def side(self, name: str) -> tuple[tuple[Simplex, ...], tuple[Simplex, ...]]:
        """``(pentachora, inner tetrahedra)`` for ``"left"`` or ``"right"``."""
        if name == "left":
            return self.lhs_pentachora, self.lhs_inner
        if name == "right":
            return self.rhs_pentachora, self.rhs_inner
        raise ValueError(f"unknown side {name!r}")

    def boundary(self, name: str = "left") -> list[Simplex]:
        pentachora, inner = self.side(name)
        tets = {t for u in pentachora for t in faces(u, 3)}
        return sorted(tets - set(inner))

    @property
    def tetrahedra(self) -> list[Simplex]:
        return sorted({t for u in self.pentachora for t in faces(u, 3)})


MOVE = MoveComplex()
