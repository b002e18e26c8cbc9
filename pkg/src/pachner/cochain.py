"""Edge cochains, triangle 2-cocycles, their square roots and edge chains."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .simplicial import VERTICES, Simplex, faces, label, simplex

EDGES: list[Simplex] = list(combinations(VERTICES, 2))
TRIANGLES: list[Simplex] = list(combinations(VERTICES, 3))

DEFAULT_DELTA = 1e-3
MAX_RESAMPLES = 1000
COCYCLE_TOL = 1e-10


class DegenerateCocycleError(ValueError):
    """A cocycle value (or derived quantity) vanishes where it must not."""


class CocycleFormatError(ValueError):
    """Malformed cocycle file."""


def coboundary(nu: Mapping[Simplex, complex]) -> dict[Simplex, complex]:
    """omega_ijk = nu_jk - nu_ik + nu_ij on every triangle spanned by nu's edges."""
    verts = sorted({v for e in nu for v in e})
    omega = {}
    for i, j, k in combinations(verts, 3):
        omega[(i, j, k)] = complex(nu[(j, k)] - nu[(i, k)] + nu[(i, j)])
    return omega


def cocycle_residual(omega: Mapping[Simplex, complex]) -> float:
    """Largest |omega_jkl - omega_ikl + omega_ijl - omega_ijk| over tetrahedra."""
    verts = sorted({v for s in omega for v in s})
    worst = 0.0
    for i, j, k, l in combinations(verts, 4):
        try:
            d = omega[(j, k, l)] - omega[(i, k, l)] + omega[(i, j, l)] - omega[(i, j, k)]
        except KeyError:
            continue
        worst = max(worst, abs(d))
    return worst


def sqrt_cocycle(
    omega: Mapping[Simplex, complex],
    branches: Optional[Mapping[Simplex, int]] = None,
) -> dict[Simplex, complex]:
    """q_s = +-sqrt(omega_s), principal root unless ``branches[s] == -1``."""
    q = {}
    for s, w in omega.items():
        if w == 0:
            raise DegenerateCocycleError(f"omega_{label(s)} = 0")
        sign = 1 if branches is None else branches.get(s, 1)
        if sign not in (1, -1):
            raise ValueError(f"branch for {label(s)} must be +1 or -1, got {sign}")
        q[s] = sign * np.sqrt(complex(w))
    return q


def branches_of(q: Mapping[Simplex, complex]) -> dict[Simplex, int]:
    """Recover the branch signs of ``q`` relative to the principal root."""
    out = {}
    for s, v in q.items():
        principal = np.sqrt(complex(v) ** 2)
        out[s] = 1 if abs(v - principal) <= abs(v + principal) else -1
    return out


def initial_alpha(q: Mapping[Simplex, complex], u: Simplex) -> dict[Simplex, complex]:
    """alpha_b = product of q_s over 2-faces s of u containing b or disjoint from b."""
    out = {}
    for b in faces(u, 1):
        prod = 1 + 0j
        for s in faces(u, 2):
            if set(b) <= set(s) or not set(b) & set(s):
                prod *= q[s]
        out[b] = prod
    return out


@dataclass(frozen=True)
class EdgeChain:
    """Edge values a_ij of one pentachoron with omega_ijk = a_ij a_ik a_jk."""

    u: Simplex
    a: dict
    p: complex

    def omega(self) -> dict[Simplex, complex]:
        return {
            (i, j, k): self.a[(i, j)] * self.a[(i, k)] * self.a[(j, k)]
            for i, j, k in faces(self.u, 2)
        }


def solve_edge_chain(q: Mapping[Simplex, complex], u) -> EdgeChain:
    """Closed-form edge chain a = p * alpha of pentachoron ``u``.

    ``p`` is the principal cube root of ``1 / prod q_s``; it is one of the
    sixth roots of ``1 / prod omega_s`` and the only family of branches for
    which ``a`` reproduces omega exactly (not just up to sign).
    """
    u = simplex(u)
    tri = faces(u, 2)
    if any(q[s] == 0 for s in tri):
        raise DegenerateCocycleError(f"vanishing q on a 2-face of {label(u)}")
    prod = complex(np.prod([q[s] for s in tri]))
    p = prod ** (-1.0 / 3.0)
    alpha = initial_alpha(q, u)
    return EdgeChain(u=u, a={b: p * v for b, v in alpha.items()}, p=p)


@dataclass
class Cocycle:
    """A 2-cocycle on the six-vertex complex together with fixed square roots."""

    omega: dict
    q: dict
    nu: Optional[dict] = None
    seed: Optional[int] = None
    branches: dict = field(default_factory=dict)

    @classmethod
    def from_nu(cls, nu: Mapping[Simplex, complex], seed=None, branches=None) -> "Cocycle":
        omega = coboundary(nu)
        q = sqrt_cocycle(omega, branches)
        return cls(omega=omega, q=q, nu=dict(nu), seed=seed, branches=dict(branches or {}))

    @classmethod
    def from_omega(cls, omega: Mapping[Simplex, complex], branches=None) -> "Cocycle":
        q = sqrt_cocycle(omega, branches)
        return cls(omega=dict(omega), q=q, branches=dict(branches or {}))

    def scaled(self, lam: complex) -> "Cocycle":
        """Multiply every q_s by ``lam`` (omega by ``lam**2``)."""
        q = {s: lam * v for s, v in self.q.items()}
        return Cocycle(omega={s: v * v for s, v in q.items()}, q=q, seed=self.seed)


def genericity_margin(q: Mapping[Simplex, complex]) -> float:
    """Smallest |quantity| among omega_s, sigma_t and the f-factors of every phi_u."""
    from .phi_coeff import phi_factors, sigma
    from .simplicial import MOVE

    omega = {s: v * v for s, v in q.items()}
    vals = [abs(w) for w in omega.values()]
    vals += [abs(sigma(t, omega)) for t in combinations(VERTICES, 4)]
    for u in MOVE.pentachora:
        num, den = phi_factors(u, q)
        vals += [abs(v) for v in num + den]
    return min(vals)


def random_nu(rng: np.random.Generator) -> dict[Simplex, complex]:
    vals = rng.uniform(-1.0, 1.0, size=(len(EDGES), 2))
    return {e: complex(re, im) for e, (re, im) in zip(EDGES, vals)}


def random_generic_cocycle(
    seed: int, delta: float = DEFAULT_DELTA, max_resamples: int = MAX_RESAMPLES
) -> Cocycle:
    """Seeded random coboundary avoiding every degeneracy locus by margin ``delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(max_resamples):
        cocycle = Cocycle.from_nu(random_nu(rng), seed=seed)
        if all(abs(w) > delta for w in cocycle.omega.values()) and \
                genericity_margin(cocycle.q) > delta:
            return cocycle
    raise DegenerateCocycleError(
        f"seed {seed}: no generic cocycle after {max_resamples} resamples (delta={delta})"
    )


# -- JSON cocycle files ------------------------------------------------------

def _parse_complex(key: str, raw) -> complex:
    if not (isinstance(raw, (list, tuple)) and len(raw) == 2
            and all(isinstance(x, (int, float)) for x in raw)):
        raise CocycleFormatError(f"field {key!r}: expected [re, im], got {raw!r}")
    return complex(raw[0], raw[1])


def _parse_key(key: str, size: int) -> Simplex:
    try:
        s = simplex(key)
    except ValueError as exc:
        raise CocycleFormatError(f"bad simplex key {key!r}: {exc}") from None
    if len(s) != size or label(s) != key:
        raise CocycleFormatError(f"bad simplex key {key!r}: expected {size} sorted digits")
    return s


def cocycle_from_dict(data: Mapping) -> Cocycle:
    if not isinstance(data, Mapping):
        raise CocycleFormatError("top level must be a JSON object")
    branches = {}
    for k, v in data.get("branches", {}).items():
        if v not in (1, -1):
            raise CocycleFormatError(f"branches[{k!r}] must be 1 or -1")
        branches[_parse_key(k, 3)] = v
    if "nu" in data:
        nu = {_parse_key(k, 2): _parse_complex(k, v) for k, v in data["nu"].items()}
        missing = [label(e) for e in EDGES if e not in nu]
        if missing:
            raise CocycleFormatError(f"nu: missing edges {missing}")
        try:
            return Cocycle.from_nu(nu, branches=branches)
        except DegenerateCocycleError as exc:
            raise CocycleFormatError(str(exc)) from None
    if "omega" in data:
        omega = {_parse_key(k, 3): _parse_complex(k, v) for k, v in data["omega"].items()}
        missing = [label(s) for s in TRIANGLES if s not in omega]
        if missing:
            raise CocycleFormatError(f"omega: missing triangles {missing}")
        scale = max(1.0, max(abs(w) for w in omega.values()))
        if cocycle_residual(omega) > COCYCLE_TOL * scale:
            raise CocycleFormatError(
                f"omega: not a cocycle (residual {cocycle_residual(omega):.3g})")
        try:
            return Cocycle.from_omega(omega, branches)
        except DegenerateCocycleError as exc:
            raise CocycleFormatError(str(exc)) from None
    raise CocycleFormatError('expected a "nu" or "omega" field')


def cocycle_to_dict(cocycle: Cocycle) -> dict:
    enc = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
    if cocycle.nu is not None:
        out = {"nu": {label(e): enc(v) for e, v in sorted(cocycle.nu.items())}}
        if cocycle.branches:
            out["branches"] = {label(s): int(b) for s, b in sorted(cocycle.branches.items())}
        return out
    return {
        "omega": {label(s): enc(v) for s, v in sorted(cocycle.omega.items())},
        "branches": {label(s): int(b) for s, b in sorted(branches_of(cocycle.q).items())},
    }


def load_cocycle(path) -> Cocycle:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CocycleFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return cocycle_from_dict(data)


def save_cocycle(cocycle: Cocycle, path) -> None:
    Path(path).write_text(json.dumps(cocycle_to_dict(cocycle), indent=2) + "\n")
