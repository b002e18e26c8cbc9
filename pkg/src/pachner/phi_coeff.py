"""sigma_t, rho_t, the quartics f^(t), phi_u and the move coefficients c_l, c_r."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .simplicial import MOVE, Simplex, distinguished_edge, simplex, substitute

# phi(lam * q) = lam**PHI_SCALING_DEGREE * phi(q): degree 12 over degree 14
PHI_SCALING_DEGREE = -2

# Quartics f^(t) for u = 12345, keyed by the local label of t.  Each term is
# (sign, local triangle labels); repeated labels encode squares.
_QUARTICS: dict[str, list[tuple[int, tuple[str, ...]]]] = {
    "2345": [
        (+1, ("125", "134", "235", "345")), (-1, ("124", "135", "234", "345")),
        (-1, ("124", "135", "235", "245")), (+1, ("125", "134", "234", "245")),
        (+1, ("123", "145", "235", "235")), (-1, ("123", "145", "234", "234")),
    ],
    "1345": [
        (+1, ("124", "134", "235", "345")), (-1, ("125", "135", "234", "345")),
        (-1, ("123", "135", "135", "245")), (+1, ("123", "134", "134", "245")),
        (+1, ("124", "135", "145", "235")), (-1, ("125", "134", "145", "234")),
    ],
    "1245": [
        (+1, ("123", "125", "125", "345")), (-1, ("123", "124", "124", "345")),
        (-1, ("124", "134", "235", "245")), (+1, ("125", "135", "234", "245")),
        (-1, ("125", "134", "145", "235")), (+1, ("124", "135", "145", "234")),
    ],
    "1235": [
        (+1, ("124", "125", "125", "345")), (-1, ("123", "123", "124", "345")),
        (-1, ("123", "134", "235", "245")), (-1, ("125", "134", "135", "245")),
        (+1, ("125", "145", "234", "235")), (+1, ("123", "135", "145", "234")),
    ],
    "1234": [
        (+1, ("124", "124", "125", "345")), (-1, ("123", "123", "125", "345")),
        (-1, ("123", "135", "234", "245")), (-1, ("124", "134", "135", "245")),
        (+1, ("124", "145", "234", "235")), (+1, ("123", "134", "145", "235")),
    ],
}


def sigma(t, omega: Mapping[Simplex, complex]) -> complex:
    """sigma_t = omega_ijk - omega_ijl for t = ijkl with distinguished edge ij."""
    i, j, k, l = simplex(t)
    return omega[(i, j, k)] - omega[(i, j, l)]


def rho(t, q: Mapping[Simplex, complex]) -> complex:
    """rho_t = q_ijk q_ijl, the two 2-faces of t through its distinguished edge."""
    t = simplex(t)
    i, j = distinguished_edge(t)
    k, l = t[2], t[3]
    return q[(i, j, k)] * q[(i, j, l)]


def _local_label(t: Simplex, u: Simplex) -> str:
    return "".join(str(u.index(v) + 1) for v in t)


def f_poly(u, t, K: Iterable[int], q: Mapping[Simplex, complex]) -> complex:
    """Quartic f_K^(t) of pentachoron ``u``; q_s is negated when |s & K| is odd."""
    u, t = simplex(u), simplex(t)
    if len(u) != 5 or len(t) != 4 or not set(t) <= set(u):
        raise ValueError(f"{t} is not a 3-face of pentachoron {u}")
    K = set(K)
    if not K <= set(u):
        raise ValueError(f"twist set {sorted(K)} is not inside {u}")
    total = 0j
    for sign, labels in _QUARTICS[_local_label(t, u)]:
        term = complex(sign)
        for lab in labels:
            s = substitute(lab, u)
            term *= -q[s] if len(K.intersection(s)) % 2 else q[s]
        total += term
    return total


def phi_factors(u, q: Mapping[Simplex, complex],
                perm: Sequence[int] | None = None) -> tuple[list[complex], list[complex]]:
    """Numerator and denominator factors of phi_u.

    ``perm`` relabels the vertices of ``u`` (position k -> perm[k]) before
    the face superscripts, twist sets and sigma subscripts are re-sorted.
    """
    u = simplex(u)
    image = u if perm is None else tuple(perm)
    if sorted(image) != list(u):
        raise ValueError(f"{image} is not a permutation of {u}")
    omega = {s: v * v for s, v in q.items()}
    T = lambda lab: simplex(image[int(c) - 1] for c in lab)  # noqa: E731
    K = lambda lab: tuple(image[int(c) - 1] for c in lab)  # noqa: E731
    num = [
        f_poly(u, T("2345"), (), q),
        f_poly(u, T("1245"), K("12"), q),
        f_poly(u, T("1234"), (), q),
    ]
    den = [
        sigma(T("2345"), omega),
        sigma(T("1245"), omega),
        sigma(T("1234"), omega),
        f_poly(u, T("1345"), K("1"), q),
        f_poly(u, T("1235"), K("123"), q),
    ]
    return num, den


def phi(u, q: Mapping[Simplex, complex], perm: Sequence[int] | None = None) -> complex:
    """The pentachoron function phi_u, optionally with relabeled vertices.

    Every relabeling gives the same value up to sign.
    """
    num, den = phi_factors(u, q, perm)
    d = np.prod(den)
    if d == 0:
        raise ZeroDivisionError(f"phi_{u}: vanishing denominator (non-generic input)")
    return complex(np.prod(num) / d)


@dataclass(frozen=True)
class PhiValue:
    u: Simplex
    value: complex
    sqrt_branch: int = 1

    @property
    def root(self) -> complex:
        return self.sqrt_branch * np.sqrt(self.value)


def _coeff(pentachora, inner, apex, q, with_denominator: bool) -> tuple[complex, list[PhiValue]]:
    phis = [PhiValue(u, phi(u, q)) for u in pentachora]
    value = complex(np.prod([rho(t, q) for t in inner]) * np.prod([p.root for p in phis]))
    if with_denominator:
        if q[apex] == 0:
            raise ZeroDivisionError(f"q_{apex} = 0")
        value /= q[apex]
    return value, phis


def coeff_left(q: Mapping[Simplex, complex], with_denominator: bool = True) -> complex:
    """c_l over pentachora 12345, 12346, 12356 (principal square roots)."""
    return _coeff(MOVE.lhs_pentachora, MOVE.lhs_inner, (1, 2, 3), q, with_denominator)[0]


def coeff_right(q: Mapping[Simplex, complex], with_denominator: bool = True) -> complex:
    """c_r over pentachora 12456, 13456, 23456 (principal square roots)."""
    return _coeff(MOVE.rhs_pentachora, MOVE.rhs_inner, (4, 5, 6), q, with_denominator)[0]


def coeff_left_squared(q: Mapping[Simplex, complex]) -> complex:
    """Branch-free c_l**2."""
    val = np.prod([rho(t, q) ** 2 for t in MOVE.lhs_inner])
    val *= np.prod([phi(u, q) for u in MOVE.lhs_pentachora])
    return complex(val / q[(1, 2, 3)] ** 2)
