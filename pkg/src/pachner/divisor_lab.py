"""Points on the loci D_u, (D_u)_K, D_t^+- of one pentachoron, and order probes.

All loci live in the edge variables a_ij of u = 12345 (or any pentachoron
passed in).  A locus point is carried together with a matching branch of the
square roots q_s, so that a = p * alpha(q) up to a constant factor, and with
an edge cochain nu whose coboundary is omega.  Probes move off the locus by
perturbing nu, which keeps omega a cocycle.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .cochain import coboundary, initial_alpha, solve_edge_chain, sqrt_cocycle
from .simplicial import Simplex, distinguished_edge, faces, label, simplex

U0: Simplex = (1, 2, 3, 4, 5)
# geometric ladder 1e-2 ... 1e-4, five points
LADDER: tuple[float, ...] = tuple(10.0 ** -x for x in (2.0, 2.5, 3.0, 3.5, 4.0))
FIT_RESIDUAL_MAX = 0.1
DEFAULT_MARGIN = 1e-2
# base points with min|a| / max|a| below this sit too close to a_ij = 0
MIN_EDGE_RATIO = 0.1
# scale-free distance a base point must keep from every other locus
LOCUS_MARGIN = 0.05
_ON_LOCUS = 1e-8


class InconclusiveProbe(RuntimeError):
    pass


def edge_omega(a: Mapping[Simplex, complex], u: Simplex = U0) -> dict[Simplex, complex]:
    return {(i, j, k): a[(i, j)] * a[(i, k)] * a[(j, k)] for i, j, k in faces(u, 2)}


def abd_residual(a: Mapping[Simplex, complex], u: Simplex = U0) -> float:
    """Largest cocycle defect of omega(a) over the tetrahedra of ``u``, scaled by max|a|^3."""
    scale = max(abs(v) for v in a.values()) ** 3
    worst = 0.0
    for i, j, k, l in faces(u, 3):
        d = (a[(k, l)] * a[(j, l)] * a[(j, k)] - a[(k, l)] * a[(i, l)] * a[(i, k)]
             + a[(j, l)] * a[(i, l)] * a[(i, j)] - a[(j, k)] * a[(i, k)] * a[(i, j)])
        worst = max(worst, abs(d) / scale)
    return worst


def ideal_2345d(a: Mapping[Simplex, complex], t: Sequence[int] = (2, 3, 4, 5)) -> list[complex]:
    """The four cubic generators of the trigonometric component, relabeled to ``t``."""
    v = simplex(t)
    m = {2: v[0], 3: v[1], 4: v[2], 5: v[3]}
    A = lambda lab: a[tuple(sorted(m[int(c)] for c in lab))]  # noqa: E731
    a23, a24, a25, a34, a35, a45 = (A(x) for x in ("23", "24", "25", "34", "35", "45"))
    return [
        a24 * a25 * a34 - a24 * a25 * a35 - a24 * a34 * a35 + a25 * a34 * a35
        + a24 * a25 * a45 - a34 * a35 * a45,
        a23 * a25 * a34 - a23 * a25 * a35 + a23 * a25 * a45 - a23 * a34 * a45
        + a25 * a34 * a45 - a34 * a35 * a45,
        a23 * a24 * a35 - a23 * a25 * a35 - a23 * a24 * a45 + a24 * a25 * a45
        + a23 * a35 * a45 - a24 * a35 * a45,
        a23 * a24 * a34 - a23 * a25 * a35 + a24 * a25 * a45 - a34 * a35 * a45,
    ]


def psi(s, a: Mapping[Simplex, complex]) -> complex:
    """psi_s = a_jk - a_ik + a_ij."""
    i, j, k = simplex(s)
    return a[(j, k)] - a[(i, k)] + a[(i, j)]


def psi_ratio_spread(a: Mapping[Simplex, complex], vertices: Sequence[int]) -> float:
    """Relative spread of psi_s / omega_s over the triangles on ``vertices``."""
    ratios = np.array([psi(s, a) / (a[s[:2]] * a[(s[0], s[2])] * a[s[1:]])
                       for s in combinations(sorted(vertices), 3)])
    return float(np.abs(ratios - ratios[0]).max() / abs(ratios[0]))


def twist_K(a: Mapping[Simplex, complex], K: Iterable[int]) -> dict[Simplex, complex]:
    """Negate every a_ij with exactly one of i, j in K."""
    K = set(K)
    return {e: -v if (e[0] in K) != (e[1] in K) else v for e, v in a.items()}


def q_for_edge_chain(a: Mapping[Simplex, complex], u: Simplex = U0) -> dict[Simplex, complex]:
    """Square roots q_s of omega(a) whose initial alphas are proportional to ``a``.

    Searches the 2**10 sign patterns of q over the 2-faces of ``u``.
    """
    u = simplex(u)
    tri = faces(u, 2)
    edges = faces(u, 1)
    q0 = sqrt_cocycle(edge_omega(a, u))
    alpha0 = initial_alpha(q0, u)
    ratio = np.array([alpha0[b] / a[b] for b in edges])
    incidence = np.array([[1 if set(b) <= set(s) or not set(b) & set(s) else 0
                           for s in tri] for b in edges])
    patterns = np.array(list(product((0, 1), repeat=len(tri))))
    edge_flips = (patterns @ incidence.T) % 2  # (1024, 10)
    r = ratio[None, :] * np.where(edge_flips, -1.0, 1.0)
    spread = np.abs(r - r[:, :1]).max(axis=1) / np.abs(r[:, 0])
    best = int(np.argmin(spread))
    if spread[best] > 1e-8:
        raise ValueError("no square-root branch reproduces this edge chain")
    return {s: -q0[s] if patterns[best, k] else q0[s] for k, s in enumerate(tri)}


def nu_for_omega(omega: Mapping[Simplex, complex], u: Simplex = U0) -> dict[Simplex, complex]:
    """An edge cochain whose coboundary is ``omega`` (least squares; exact for cocycles)."""
    edges = faces(u, 1)
    tri = faces(u, 2)
    col = {e: n for n, e in enumerate(edges)}
    M = np.zeros((len(tri), len(edges)))
    for r, (i, j, k) in enumerate(tri):
        M[r, col[(j, k)]] += 1
        M[r, col[(i, k)]] -= 1
        M[r, col[(i, j)]] += 1
    rhs = np.array([omega[s] for s in tri])
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return {e: complex(sol[n]) for e, n in col.items()}


@dataclass(frozen=True)
class TrigPoint:
    angles: dict
    c: complex
    a: dict


def trig_point(angles: Mapping[int, float], c: complex,
               margin: float = DEFAULT_MARGIN) -> TrigPoint:
    """a_ij = c * tan(x_i - x_j) on the vertices listed in ``angles``."""
    verts = sorted(angles)
    a = {}
    for i, j in combinations(verts, 2):
        d = angles[i] - angles[j]
        if abs(np.cos(d)) < margin or abs(np.sin(d)) < margin:
            raise ValueError(f"angle difference x_{i} - x_{j} too close to a multiple of pi/2")
        a[(i, j)] = complex(c) * np.tan(d)
    return TrigPoint(angles=dict(angles), c=complex(c), a=a)


def _well_conditioned(a: Mapping[Simplex, complex]) -> bool:
    mags = [abs(v) for v in a.values()]
    return min(mags) >= MIN_EDGE_RATIO * max(mags)


def random_trig_point(rng: np.random.Generator, vertices: Sequence[int] = U0,
                      margin: float = 0.1) -> TrigPoint:
    for _ in range(10000):
        angles = {v: float(x) for v, x in zip(vertices, rng.uniform(0, np.pi, len(vertices)))}
        c = complex(*rng.uniform(-1, 1, 2))
        if abs(c) < 0.2:
            continue
        try:
            tp = trig_point(angles, c, margin)
        except ValueError:
            continue
        if _well_conditioned(tp.a):
            return tp
    raise RuntimeError("could not draw a non-degenerate trigonometric point")


@dataclass(frozen=True)
class DivisorPoint:
    """A point of one locus, with matching q branch and a generating cochain nu."""

    kind: str  # "Du", "DuK", "Dt+", "Dt-"
    a: dict
    q: dict
    nu: dict
    K: tuple = ()
    t: Optional[Simplex] = None
    u: Simplex = U0

    @property
    def name(self) -> str:
        if self.kind == "DuK":
            return "DuK" + "".join(map(str, self.K))
        if self.kind in ("Dt+", "Dt-"):
            return self.kind + label(self.t)
        return self.kind

    def defect(self) -> float:
        """Residual of the locus' defining equations, scale-normalized."""
        a = twist_K(self.a, self.K) if self.kind == "DuK" else self.a
        scale = max(abs(v) for v in a.values())
        if self.kind in ("Du", "DuK"):
            # psi_s/omega_s constant over the pentachoron
            return psi_ratio_spread(a, self.u)
        i, j, k, l = self.t
        s = 1 if self.kind == "Dt+" else -1
        return max(abs(a[(i, k)] - s * a[(j, l)]), abs(a[(j, k)] - s * a[(i, l)])) / scale


def du_point(rng: np.random.Generator, K: Iterable[int] = (), u: Simplex = U0) -> DivisorPoint:
    """Point of D_u (K empty) or of its sign twist (D_u)_K."""
    K = tuple(sorted(set(K)))
    tp = random_trig_point(rng, u)
    a = twist_K(tp.a, K)
    omega = edge_omega(a, u)
    return DivisorPoint(kind="DuK" if K else "Du", a=a, q=q_for_edge_chain(a, u),
                        nu=nu_for_omega(omega, u), K=K, u=u)


def d_pm_point(t, sign: int, rng: np.random.Generator, u: Simplex = U0,
               max_tries: int = 1000) -> DivisorPoint:
    """Point of D_t^+ (sign=+1) or D_t^- (sign=-1) inside pentachoron ``u``.

    sigma_t = nu_jk - nu_ik - nu_jl + nu_il is linear in nu, so nu_jk is solved
    for; the resulting edge chain lies on D_t^+ or D_t^-, and the vertex twist
    K = {i} exchanges the two.
    """
    t = simplex(t)
    if not set(t) <= set(u):
        raise ValueError(f"{label(t)} is not inside {label(u)}")
    i, j = distinguished_edge(t)
    k, l = t[2], t[3]
    for _ in range(max_tries):
        vals = rng.uniform(-1, 1, (10, 2))
        nu = {e: complex(*v) for e, v in zip(faces(u, 1), vals)}
        nu[(j, k)] = nu[(i, k)] + nu[(j, l)] - nu[(i, l)]
        omega = coboundary(nu)
        if min(abs(w) for w in omega.values()) < 1e-2:
            continue
        a = solve_edge_chain(sqrt_cocycle(omega), u).a
        if not _well_conditioned(a):
            continue
        plus = abs(a[(i, k)] - a[(j, l)]) + abs(a[(j, k)] - a[(i, l)])
        minus = abs(a[(i, k)] + a[(j, l)]) + abs(a[(j, k)] + a[(i, l)])
        on_plus = plus < minus
        if on_plus != (sign > 0):
            a = twist_K(a, (i,))
        pt = DivisorPoint(kind="Dt+" if sign > 0 else "Dt-", a=a, q=q_for_edge_chain(a, u),
                          nu=nu, t=t, u=u)
        if pt.defect() < 1e-10:
            return pt
    raise RuntimeError(f"could not draw a point of D_{label(t)}^{'+' if sign > 0 else '-'}")


# -- locus / target names -----------------------------------------------------

_LOCUS = re.compile(r"^(Du)(?:K(\d+))?$|^(Dt)([+-])(\d{4})$")


def parse_locus(name: str) -> tuple[str, tuple, Optional[Simplex], int]:
    """'Du', 'DuK12', 'Dt+2345', 'Dt-1234' -> (kind, K, t, sign)."""
    m = _LOCUS.match(name)
    if not m:
        raise ValueError(f"unknown locus {name!r}")
    if m.group(1):
        K = tuple(sorted({int(c) for c in m.group(2) or ""}))
        if not set(K) <= set(U0):
            raise ValueError(f"twist set {K} not inside {U0}")
        return ("DuK" if K else "Du"), K, None, 0
    t = simplex(m.group(5))
    if not set(t) <= set(U0):
        raise ValueError(f"{label(t)} is not a face of {label(U0)}")
    sign = 1 if m.group(4) == "+" else -1
    return ("Dt+" if sign > 0 else "Dt-"), (), t, sign


def locus_margin(q: Mapping[Simplex, complex], u: Simplex = U0) -> float:
    """Smallest normalized |f_K^(t)| or |sigma_t| among those not vanishing at q.

    Factors below ``_ON_LOCUS`` vanish on the point's own locus and are
    skipped; a small value among the rest means another locus is nearby.
    """
    from .phi_coeff import f_poly, sigma

    scale = max(abs(v) for s, v in q.items() if set(s) <= set(u))
    omega = {s: v * v for s, v in q.items()}
    vals = []
    for t in faces(u, 3):
        vals.append(abs(sigma(t, omega)) / scale ** 2)
        for r in range(len(t) + 1):
            for K in combinations(t, r):
                vals.append(abs(f_poly(u, t, K, q)) / scale ** 4)
    return min(v for v in vals if v > _ON_LOCUS)


def locus_point(name: str, rng: np.random.Generator, margin: float = LOCUS_MARGIN,
                max_tries: int = 1000) -> DivisorPoint:
    """A generic point of the named locus, away from every other locus by ``margin``."""
    kind, K, t, sign = parse_locus(name)
    for _ in range(max_tries):
        if kind in ("Du", "DuK"):
            pt = du_point(rng, K)
        else:
            pt = d_pm_point(t, sign, rng)
        if locus_margin(pt.q, pt.u) > margin:
            return pt
    raise RuntimeError(f"no generic point of {name} after {max_tries} draws")


def canonical_twist(K: Iterable[int], u: Simplex = U0) -> tuple:
    """K and its complement give the same twist; pick the one without u's last vertex."""
    K = set(K)
    if u[-1] in K:
        K = set(u) - K
    return tuple(sorted(K))


def predicted_order(function: str, locus: str) -> int:
    """Vanishing order predicted by the divisors of F_{2345,1345} and phi_12345."""
    kind, K, t, sign = parse_locus(locus)
    if kind in ("Du", "DuK"):
        K = canonical_twist(K)
    if function == "F12":
        if kind in ("Du", "DuK"):
            return {(): -1, (1, 2): 1}.get(K, 0)
        return 1 if sign > 0 and t in ((2, 3, 4, 5), (1, 3, 4, 5)) else 0
    if function == "phi":
        if kind in ("Du", "DuK"):
            return 2 if K == () else 0
        return -1 if sign > 0 else 0
    raise ValueError(f"unknown probe function {function!r}")


# -- order probing ----------------------------------------------------------

@dataclass
class ProbeResult:
    target: str
    order: int
    slope: float
    residual: float
    eps: list = field(default_factory=list)
    values: list = field(default_factory=list)

    @property
    def conclusive(self) -> bool:
        return self.residual < FIT_RESIDUAL_MAX

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["epsilon", "abs_value", "log_fit_order", "residual"])
        for e, v in zip(self.eps, self.values):
            w.writerow([f"{e:.6e}", f"{v:.17e}", self.order, f"{self.residual:.3e}"])
        return buf.getvalue()


def fit_order(eps: Sequence[float], values: Sequence[float]) -> tuple[int, float, float]:
    """Slope of log|value| against log eps; returns (rounded order, slope, residual).

    The residual is the larger of |slope - order| and the RMS misfit of the line.
    """
    x = np.log10(np.asarray(eps, dtype=float))
    with np.errstate(divide="ignore"):
        y = np.log10(np.abs(np.asarray(values, dtype=complex)))
    if not np.all(np.isfinite(y)):
        raise InconclusiveProbe("function vanished or blew up on the ladder")
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    order = int(round(slope))
    return order, float(slope), max(abs(slope - order), rms)


def _continue_branch(q_new: Mapping, q_ref: Mapping) -> dict:
    return {s: v if abs(v - q_ref[s]) <= abs(v + q_ref[s]) else -v for s, v in q_new.items()}


def perturbed_q(base: DivisorPoint, direction: Mapping[Simplex, complex], eps: float) -> dict:
    """q along nu + eps * direction, continued from the base point's branch."""
    nu = {e: base.nu[e] + eps * direction[e] for e in base.nu}
    omega = coboundary(nu)
    return _continue_branch(sqrt_cocycle(omega), base.q)


def defining_equation(base: DivisorPoint) -> Callable[[Mapping], complex]:
    """A function of q vanishing to first order on ``base``'s locus.

    sigma_t for D_t^+-, and the twisted quartic f_K^(t) of the face opposite
    u's first vertex for (D_u)_K.
    """
    from .phi_coeff import f_poly, sigma

    if base.kind in ("Dt+", "Dt-"):
        return lambda q: sigma(base.t, {s: v * v for s, v in q.items()})
    t = base.u[1:]
    return lambda q: f_poly(base.u, t, base.K, q)


def normal_direction(base: DivisorPoint, h: float = 1e-6) -> dict[Simplex, complex]:
    """Unit direction in nu of steepest change of the defining equation."""
    g = defining_equation(base)
    edges = sorted(base.nu)
    grad = []
    for e in edges:
        unit = {f: (1.0 if f == e else 0.0) for f in edges}
        grad.append((g(perturbed_q(base, unit, h)) - g(perturbed_q(base, unit, -h))) / (2 * h))
    n = np.conj(np.array(grad))
    n /= np.linalg.norm(n)
    return dict(zip(edges, n))


def random_direction(base: DivisorPoint, rng: np.random.Generator) -> dict[Simplex, complex]:
    """Random perturbation of nu with a guaranteed component normal to the locus."""
    edges = sorted(base.nu)
    r = rng.normal(size=(len(edges), 2)) @ np.array([1, 1j])
    r /= np.linalg.norm(r)
    n = normal_direction(base)
    xi = np.array([n[e] for e in edges]) + 0.5 * r
    xi *= max(abs(v) for v in base.nu.values()) / np.linalg.norm(xi)
    return dict(zip(edges, xi))


def probe_order(fn: Callable[[dict], complex], base: DivisorPoint,
                direction: Optional[Mapping[Simplex, complex]] = None,
                ladder: Sequence[float] = LADDER, rng: Optional[np.random.Generator] = None,
                target: str = "") -> ProbeResult:
    """Estimate the order of ``fn`` (a function of q) transversally to ``base``'s locus."""
    if direction is None:
        direction = random_direction(base, rng or np.random.default_rng(0))
    values = [fn(perturbed_q(base, direction, e)) for e in ladder]
    order, slope, residual = fit_order(ladder, values)
    return ProbeResult(target=target, order=order, slope=slope, residual=residual,
                       eps=list(ladder), values=[float(abs(v)) for v in values])
