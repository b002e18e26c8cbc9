"""Finite Grassmann algebra over C with monomials stored as bitmasks.

Bit ``k`` of a monomial mask stands for the k-th generator of the registry;
a stored monomial is the product of its generators in ascending bit order.
Berezin integration coincides with the left derivative: the generator is
anticommuted to the front and then removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

MAX_GENERATORS = 16


class RegistryMismatchError(ValueError):
    pass


class GeneratorRegistry:
    """Fixed ordered list of generator names."""

    def __init__(self, names: Iterable[Hashable]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        if len(self.names) > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators supported")
        self._index = {n: k for k, n in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def index(self, name) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def bit(self, name) -> int:
        return 1 << self.index(name)

    def mask(self, names: Iterable[Hashable]) -> int:
        m = 0
        for n in names:
            m |= self.bit(n)
        return m

    def names_of(self, mask: int) -> list:
        return [n for k, n in enumerate(self.names) if mask >> k & 1]

    def __repr__(self) -> str:
        return f"GeneratorRegistry({list(self.names)!r})"


def merge_sign(s: int, t: int) -> int:
    """Sign of x_S x_T -> x_(S|T): (-1)**#{(a in S, b in T) : a > b}."""
    swaps = 0
    while t:
        low = t & -t
        swaps += (s & ~((low << 1) - 1)).bit_count()
        t ^= low
    return -1 if swaps & 1 else 1


class GrassmannElement:
    """Immutable finitely supported map monomial-mask -> complex."""

    __slots__ = ("registry", "_coeffs")
    __array_ufunc__ = None  # numpy scalars defer to __rmul__

    def __init__(self, registry: GeneratorRegistry, coeffs: Mapping[int, complex] | None = None,
                 prune_eps: float = 0.0):
        self.registry = registry
        data = {}
        for m, c in (coeffs or {}).items():
            c = complex(c)
            if c != 0 and abs(c) > prune_eps:
                data[int(m)] = c
        self._coeffs = data

    # construction helpers
    @classmethod
    def scalar(cls, registry, value: complex = 1) -> "GrassmannElement":
        return cls(registry, {0: value})

    @classmethod
    def generator(cls, registry, name) -> "GrassmannElement":
        return cls(registry, {registry.bit(name): 1})

    @classmethod
    def monomial(cls, registry, names: Sequence, coeff: complex = 1) -> "GrassmannElement":
        """c * x_{n1} x_{n2} ... in the given (not necessarily canonical) order."""
        out = cls.scalar(registry, coeff)
        for n in names:
            out = out * cls.generator(registry, n)
        return out

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._coeffs)

    def coefficient(self, names: Iterable = ()) -> complex:
        return self._coeffs.get(self.registry.mask(names), 0j)

    def __getitem__(self, mask: int) -> complex:
        return self._coeffs.get(mask, 0j)

    def __iter__(self):
        return iter(sorted(self._coeffs.items()))

    def __len__(self) -> int:
        return len(self._coeffs)

    def support(self, floor: float = 0.0) -> set[int]:
        return {m for m, c in self._coeffs.items() if abs(c) > floor}

    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self._coeffs}

    def parity(self) -> int:
        """0 for even, 1 for odd; raises for inhomogeneous parity."""
        pars = {d % 2 for d in self.degrees()}
        if len(pars) > 1:
            raise ValueError("element has mixed parity")
        return pars.pop() if pars else 0

    def norm(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    def _check(self, other: "GrassmannElement") -> None:
        if other.registry is not self.registry:
            raise RegistryMismatchError("elements live over different registries")

    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.scalar(self.registry, other)
        self._check(other)
        out = dict(self._coeffs)
        for m, c in other._coeffs.items():
            out[m] = out.get(m, 0) + c
        return GrassmannElement(self.registry, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.registry, {m: -c for m, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            return GrassmannElement(self.registry, {m: c * other for m, c in self._coeffs.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        return GrassmannElement(self.registry, {m: other * c for m, c in self._coeffs.items()})

    def __truediv__(self, scalar):
        return GrassmannElement(self.registry, {m: c / scalar for m, c in self._coeffs.items()})

    def allclose(self, other: "GrassmannElement", atol: float = 1e-12) -> bool:
        return (self - other).norm() <= atol

    def dump(self) -> list[tuple[str, float, float]]:
        """Sorted (monomial, re, im) triples; monomials joined by '*'."""
        rows = []
        for m, c in self:
            names = self.registry.names_of(m)
            key = "*".join("x" + _name_str(n) for n in names) or "1"
            rows.append((key, c.real, c.imag))
        return sorted(rows)

    def __repr__(self) -> str:
        terms = [f"({c:.6g})*{k}" for k, c in ((r[0], complex(r[1], r[2])) for r in self.dump())]
        return " + ".join(terms) or "0"


def _name_str(n) -> str:
    if isinstance(n, tuple):
        return "".join(str(v) for v in n)
    return str(n)


def multiply(f: GrassmannElement, g: GrassmannElement) -> GrassmannElement:
    f._check(g)
    out: dict[int, complex] = {}
    for s, a in f._coeffs.items():
        for t, b in g._coeffs.items():
            if s & t:
                continue
            k = s | t
            out[k] = out.get(k, 0) + merge_sign(s, t) * a * b
    return GrassmannElement(f.registry, out)


def derivative(f: GrassmannElement, v) -> GrassmannElement:
    """Left derivative d/dx_v."""
    bit = f.registry.bit(v)
    below = bit - 1
    out = {}
    for m, c in f._coeffs.items():
        if m & bit:
            out[m ^ bit] = -c if (m & below).bit_count() & 1 else c
    return GrassmannElement(f.registry, out)


def berezin_integrate(f: GrassmannElement, *variables) -> GrassmannElement:
    """Integral of ``f dx_a dx_b ...``: the derivative in x_a is applied first."""
    for v in variables:
        f = derivative(f, v)
    return f


@dataclass(frozen=True)
class FirstOrderOp:
    """d = sum_t (beta_t d/dx_t + gamma_t x_t)."""

    registry: GeneratorRegistry
    terms: tuple  # ((name, beta, gamma), ...)

    @classmethod
    def from_dict(cls, registry, terms: Mapping) -> "FirstOrderOp":
        return cls(registry, tuple((n, complex(b), complex(g)) for n, (b, g) in terms.items()))

    def __call__(self, f: GrassmannElement) -> GrassmannElement:
        return apply_operator(self, f)

    def scalar_product(self, other: "FirstOrderOp") -> complex:
        """Anticommutator <d', d''> = sum_t beta'_t gamma''_t + beta''_t gamma'_t."""
        mine = {n: (b, g) for n, b, g in self.terms}
        total = 0j
        for n, b2, g2 in other.terms:
            b1, g1 = mine.get(n, (0, 0))
            total += b1 * g2 + b2 * g1
        return total


def apply_operator(op: FirstOrderOp, f: GrassmannElement) -> GrassmannElement:
    if op.registry is not f.registry:
        raise RegistryMismatchError("operator and element use different registries")
    out = GrassmannElement(f.registry)
    for name, beta, gamma in op.terms:
        if beta:
            out = out + beta * derivative(f, name)
        if gamma:
            out = out + gamma * (GrassmannElement.generator(f.registry, name) * f)
    return out


def gaussian_weight(F, variables: Sequence, registry: GeneratorRegistry,
                    tol: float = 1e-10) -> GrassmannElement:
    """exp(-1/2 x^T F x) for antisymmetric ``F`` over the listed generators."""
    F = np.asarray(F, dtype=complex)
    n = len(variables)
    if F.shape != (n, n):
        raise ValueError(f"matrix shape {F.shape} does not match {n} variables")
    if len(set(variables)) != n:
        raise ValueError("variables must be distinct")
    scale = max(1.0, float(np.abs(F).max(initial=0.0)))
    if np.abs(F + F.T).max(initial=0.0) > tol * scale:
        raise ValueError("F is not antisymmetric")
    gens = [GrassmannElement.generator(registry, v) for v in variables]
    exponent = GrassmannElement(registry)
    for i in range(n):
        for j in range(i + 1, n):
            if F[i, j] != 0:
                exponent = exponent + (-F[i, j]) * (gens[i] * gens[j])
    result = GrassmannElement.scalar(registry, 1)
    term = GrassmannElement.scalar(registry, 1)
    for k in range(1, n // 2 + 1):
        term = (term * exponent) / k
        result = result + term
    return result
