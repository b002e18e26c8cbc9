"""Partial scalar products, superisotropic coefficients, matrix F and weight W_u.

Edge operators are never built explicitly.  Everything is derived from the
partial scalar-product tables of each 3-face, extended bilinearly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .cochain import DegenerateCocycleError, initial_alpha
from .grassmann import GeneratorRegistry, GrassmannElement, gaussian_weight
from .simplicial import (
    Simplex,
    distinguished_edge,
    faces,
    label,
    simplex,
    tetra_order_and_sign,
)


@dataclass(frozen=True)
class ScalarTable:
    """<d_a, d_b>_t for the six edges of ``t`` in lexicographic order."""

    t: Simplex
    edges: tuple
    matrix: np.ndarray

    def entry(self, b1, b2) -> complex:
        return complex(self.matrix[self.edges.index(tuple(b1)), self.edges.index(tuple(b2))])


def _base_table(t: Simplex, omega: Mapping[Simplex, complex]) -> np.ndarray:
    """The table of a tetrahedron oriented by its vertex order (unit normalization)."""
    v1, v2, v3, v4 = t
    try:
        w123 = 1 / omega[(v1, v2, v3)]
        w124 = 1 / omega[(v1, v2, v4)]
        w134 = 1 / omega[(v1, v3, v4)]
        w234 = 1 / omega[(v2, v3, v4)]
    except ZeroDivisionError:
        raise DegenerateCocycleError(f"vanishing omega on a 2-face of {label(t)}") from None
    return np.array([
        [w124 - w123, w123, -w124, -w123, w124, 0],
        [w123, -w134 - w123, w134, w123, 0, -w134],
        [-w124, w134, w124 - w134, 0, -w124, w134],
        [-w123, w123, 0, w234 - w123, -w234, w234],
        [w124, 0, -w124, -w234, w124 + w234, -w234],
        [0, -w134, w134, w234, -w234, w234 - w134],
    ], dtype=complex)


def scalar_table(u, t, omega: Mapping[Simplex, complex]) -> ScalarTable:
    """Partial scalar products of u's edge operators with respect to face ``t``."""
    u, t = simplex(u), simplex(t)
    signs = dict(tetra_order_and_sign(u))
    if t not in signs:
        raise ValueError(f"{label(t)} is not a 3-face of {label(u)}")
    return ScalarTable(t=t, edges=tuple(faces(t, 1)), matrix=signs[t] * _base_table(t, omega))


def g_coefficients(u, t, q: Mapping[Simplex, complex], break_sign: bool = False) -> dict:
    """Coefficients alpha_b of the superisotropic operator g^(t) = sum alpha_b d_b.

    ``break_sign`` skips the sign flip on edges outside ``t`` (mutation hook).
    """
    u, t = simplex(u), simplex(t)
    if not set(t) <= set(u):
        raise ValueError(f"{label(t)} is not a face of {label(u)}")
    alpha = initial_alpha(q, u)
    if break_sign:
        return alpha
    return {b: v if set(b) <= set(t) else -v for b, v in alpha.items()}


@dataclass(frozen=True)
class PentaMatrix:
    """Antisymmetric F of pentachoron ``u`` indexed by ``faces`` (omitted vertex order)."""

    u: Simplex
    faces: tuple
    F: np.ndarray

    def __getitem__(self, key) -> complex:
        t, t2 = (simplex(k) for k in key)
        return complex(self.F[self.faces.index(t), self.faces.index(t2)])

    def skew_defect(self) -> float:
        return float(np.abs(self.F + self.F.T).max() / np.abs(self.F).max())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        labels = [label(t) for t in self.faces]
        w.writerow([label(self.u), *labels])
        for lab, row in zip(labels, self.F):
            w.writerow([lab, *(f"{z.real:.17g}{z.imag:+.17g}j" for z in row)])
        return buf.getvalue()


def _partial(alpha: dict, table: ScalarTable, a) -> complex:
    """<g, d_a>_t expanded bilinearly over the edges of t."""
    col = table.edges.index(tuple(a))
    return complex(sum(alpha[b] * table.matrix[i, col] for i, b in enumerate(table.edges)))


def matrix_F(u, q: Mapping[Simplex, complex], global_sign: int = 1,
             break_sign: bool = False) -> PentaMatrix:
    """F_tt' = <g^(t), d_a'>_t' <d_a, d_a>_t / (2 <g^(t), d_a>_t).

    a is the distinguished edge of t and a' that of t'.  The first factor is
    the x_t' coefficient of g^(t) and the ratio the d/dx_t coefficient.
    """
    u = simplex(u)
    if global_sign not in (1, -1):
        raise ValueError("global_sign must be +1 or -1")
    omega = {s: q[s] * q[s] for s in faces(u, 2)}
    tets = [t for t, _ in tetra_order_and_sign(u)]
    tables = {t: scalar_table(u, t, omega) for t in tets}
    F = np.zeros((5, 5), dtype=complex)
    for i, t in enumerate(tets):
        alpha = g_coefficients(u, t, q, break_sign=break_sign)
        a = distinguished_edge(t)
        beta = 2 * _partial(alpha, tables[t], a) / tables[t].entry(a, a)
        if beta == 0:
            raise DegenerateCocycleError(f"g^({label(t)}) has no d/dx term in {label(u)}")
        for j, t2 in enumerate(tets):
            if j != i:
                F[i, j] = _partial(alpha, tables[t2], distinguished_edge(t2)) / beta
    return PentaMatrix(u=u, faces=tuple(tets), F=global_sign * F)


def pentachoron_weight(u, q: Mapping[Simplex, complex], global_sign: int,
                       registry: GeneratorRegistry, break_sign: bool = False) -> GrassmannElement:
    """W_u = exp(-1/2 x^T F x) with x the five 3-face generators of ``u``."""
    pm = matrix_F(u, q, global_sign, break_sign=break_sign)
    # break_sign destroys antisymmetry, so only the upper triangle is used then
    F = pm.F if not break_sign else np.triu(pm.F) - np.triu(pm.F).T
    return gaussian_weight(F, pm.faces, registry)


# -- independent closed forms for F_{2345,1345} in u = 12345 -----------------

def typical_element_q(q: Mapping[Simplex, complex]) -> complex:
    """F_{2345,1345} of u = 12345 written directly as a rational function of q."""
    Q = lambda s: q[simplex(s)]  # noqa: E731
    fn = (Q("124") * Q("134") * Q("235") * Q("345") - Q("125") * Q("135") * Q("234") * Q("345")
          + Q("123") * Q("135") ** 2 * Q("245") - Q("123") * Q("134") ** 2 * Q("245")
          - Q("124") * Q("135") * Q("145") * Q("235") + Q("125") * Q("134") * Q("145") * Q("234"))
    fd = (Q("125") * Q("134") * Q("235") * Q("345") - Q("124") * Q("135") * Q("234") * Q("345")
          - Q("124") * Q("135") * Q("235") * Q("245") + Q("125") * Q("134") * Q("234") * Q("245")
          + Q("123") * Q("145") * Q("235") ** 2 - Q("123") * Q("145") * Q("234") ** 2)
    pre = -(Q("235") ** 2 - Q("234") ** 2) / (2 * Q("134") * Q("135") * Q("234") * Q("235"))
    return pre * fn / fd


def typical_element_a(a: Mapping[Simplex, complex]) -> complex:
    """F_{2345,1345} of u = 12345 as a rational function of the edge chain a."""
    A = lambda e: a[simplex(e)]  # noqa: E731
    a13, a14, a15 = A("13"), A("14"), A("15")
    a24, a25 = A("24"), A("25")
    a34, a35 = A("34"), A("35")
    pre = (a25 * a35 - a24 * a34) / (2 * a13 * a14 * a15 * a34 * a35)
    num = (a15 * a34 * a35 - a14 * a34 * a35 + a14 * a15 * a35
           - a13 * a15 * a35 - a14 * a15 * a34 + a13 * a14 * a34)
    return pre * num / main_denominator(a)


def typical_element_a_transposed(a: Mapping[Simplex, complex]) -> complex:
    """F_{1345,2345} of u = 12345 as a rational function of a."""
    A = lambda e: a[simplex(e)]  # noqa: E731
    a13, a14, a15 = A("13"), A("14"), A("15")
    a23, a24, a25 = A("23"), A("24"), A("25")
    a34, a35 = A("34"), A("35")
    pre = -(a15 * a35 - a14 * a34) / (2 * a23 * a24 * a25 * a34 * a35)
    num = (a25 * a34 * a35 - a24 * a34 * a35 + a24 * a25 * a35
           - a23 * a25 * a35 - a24 * a25 * a34 + a23 * a24 * a34)
    den = (a15 * a34 * a35 - a14 * a34 * a35 - a14 * a15 * a35
           + a13 * a15 * a35 + a14 * a15 * a34 - a13 * a14 * a34)
    return pre * num / den


def main_denominator(a: Mapping[Simplex, complex]) -> complex:
    """The cubic of tetrahedron 2345 in the denominator of F_{2345,1345}."""
    A = lambda e: a[simplex(e)]  # noqa: E731
    return (A("25") * A("34") * A("35") - A("24") * A("34") * A("35")
            - A("24") * A("25") * A("35") + A("23") * A("25") * A("35")
            + A("24") * A("25") * A("34") - A("23") * A("24") * A("34"))
