"""Both sides of the 3-3 relation, the coefficient check, and the identity self-test."""

from __future__ import annotations

import itertools
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import divisor_lab as dl
from .cochain import Cocycle, cocycle_residual, random_generic_cocycle, solve_edge_chain
from .grassmann import FirstOrderOp, GeneratorRegistry, GrassmannElement, berezin_integrate
from .pentachoron_weight import (
    matrix_F,
    pentachoron_weight,
    scalar_table,
    typical_element_a,
    typical_element_a_transposed,
    typical_element_q,
)
from .phi_coeff import PHI_SCALING_DEGREE, coeff_left, coeff_right, f_poly, phi
from .simplicial import MOVE, Simplex, faces, orientation_sign

REGISTRY = GeneratorRegistry(MOVE.tetrahedra)
NOISE_FLOOR = 1e-12
TOL_RATIO = 1e-8
TOL_COEFF = 1e-6
MUTATIONS = ("alpha", "denominator", "orientation")


@dataclass
class SideResult:
    side: str
    element: GrassmannElement
    coefficient: complex


def side_integral(side: str, q: Mapping[Simplex, complex], mutations: Iterable[str] = (),
                  order: Optional[Iterable[int]] = None) -> SideResult:
    """Integrate the product of a side's three weights over its inner generators.

    ``order`` permutes the three weight factors (they are even, so this is a
    consistency check only).
    """
    mutations = set(mutations)
    pentachora, inner = MOVE.side(side)
    signs = MOVE.pentachoron_signs
    weights = [
        pentachoron_weight(u, q, 1 if "orientation" in mutations else signs[u], REGISTRY,
                           break_sign="alpha" in mutations)
        for u in pentachora
    ]
    if order is not None:
        weights = [weights[k] for k in order]
    product = GrassmannElement.scalar(REGISTRY, 1)
    for w in weights:
        product = product * w
    element = berezin_integrate(product, *inner)
    coeff = coeff_left if side == "left" else coeff_right
    return SideResult(side, element, coeff(q, with_denominator="denominator" not in mutations))


@dataclass
class VerificationReport:
    seed: Optional[int]
    ratio: complex
    ratio_spread: float
    coeff_sq_residual: float
    epsilon_sign: int
    support_match: bool
    tol_ratio: float = TOL_RATIO
    tol_coeff: float = TOL_COEFF
    checks: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.support_match and self.ratio_spread < self.tol_ratio
                and self.coeff_sq_residual < self.tol_coeff and all(self.checks.values()))

    def to_json(self) -> dict:
        out = asdict(self)
        out["ratio"] = [self.ratio.real, self.ratio.imag]
        out["passed"] = self.passed
        return out


def compare_sides(left: GrassmannElement, right: GrassmannElement,
                  floor: float = NOISE_FLOOR) -> tuple[complex, float, bool]:
    """Common ratio right/left, its relative spread, and whether supports agree."""
    lmax, rmax = left.norm(), right.norm()
    lsup = left.support(floor * lmax)
    rsup = right.support(floor * rmax)
    if not lsup:
        return complex("nan"), float("inf"), False
    ref = max(lsup, key=lambda m: abs(left[m]))
    r = right[ref] / left[ref]
    if r == 0:
        return r, float("inf"), lsup == rsup
    spread = max(abs(right[m] / left[m] - r) for m in lsup) / abs(r)
    return r, float(spread), lsup == rsup


def verify_relation(q: Mapping[Simplex, complex], tol_ratio: float = TOL_RATIO,
                    tol_coeff: float = TOL_COEFF, mutations: Iterable[str] = (),
                    seed: Optional[int] = None) -> VerificationReport:
    """Check c_l * (left integral) = c_r * (right integral) up to a global sign."""
    t0 = time.perf_counter()
    left = side_integral("left", q, mutations)
    t1 = time.perf_counter()
    right = side_integral("right", q, mutations)
    t2 = time.perf_counter()
    r, spread, same_support = compare_sides(left.element, right.element)
    expected = left.coefficient / right.coefficient
    coeff_res = abs(r ** 2 - expected ** 2) / abs(r ** 2) if r else float("inf")
    eps = 1 if (r * right.coefficient / left.coefficient).real >= 0 else -1
    return VerificationReport(
        seed=seed, ratio=complex(r), ratio_spread=spread, coeff_sq_residual=float(coeff_res),
        epsilon_sign=eps, support_match=same_support, tol_ratio=tol_ratio, tol_coeff=tol_coeff,
        timings_ms={"left": round(1e3 * (t1 - t0), 3), "right": round(1e3 * (t2 - t1), 3)},
    )


# -- self-test ---------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.value = float(self.value)


def _rel(x: complex, y: complex) -> float:
    return abs(x - y) / max(abs(y), 1e-300)


def check_cocycle(c: Cocycle, rng, mutations) -> CheckResult:
    scale = max(abs(w) for w in c.omega.values())
    res = cocycle_residual(c.omega) / scale
    return CheckResult("cocycle", res < 1e-12, res)


def check_edge_chain(c: Cocycle, rng, mutations) -> CheckResult:
    worst = 0.0
    for u in MOVE.pentachora:
        ec = solve_edge_chain(c.q, u)
        om = ec.omega()
        worst = max(worst, max(_rel(om[s], c.q[s] ** 2) for s in om))
    return CheckResult("edge_chain", worst < 1e-10, worst)


def oriented_entry(table, x: int, y: int, z: int) -> complex:
    """<d_xy, d_xz>_t with d_ji = -d_ij."""
    def edge(i, j):
        return ((i, j), 1) if i < j else ((j, i), -1)
    (e1, s1), (e2, s2) = edge(x, y), edge(x, z)
    return s1 * s2 * table.entry(e1, e2)


def normalized_quantity(u, t, s, omega) -> complex:
    """omega_s <d_ij, d_ik>_t with t oriented from the boundary of u and s from t.

    With alternating boundary signs this is -1 for every (u, t, s).
    """
    table = scalar_table(u, t, omega)
    i, j, k = s
    induced = orientation_sign(t, u) * orientation_sign(s, t)
    return induced * omega[s] * table.entry((i, j), (i, k))


def check_scalar_tables(c: Cocycle, rng, mutations) -> CheckResult:
    omega = c.omega
    worst = 0.0
    for u in MOVE.pentachora:
        for t in faces(u, 3):
            tab = scalar_table(u, t, omega)
            M = tab.matrix
            scale = np.abs(M).max()
            worst = max(worst, np.abs(M - M.T).max() / scale)
            for e1, e2 in itertools.combinations(tab.edges, 2):
                if not set(e1) & set(e2):
                    worst = max(worst, abs(tab.entry(e1, e2)) / scale)
            for v in t:
                row = sum((1 if e[0] == v else -1) * M[n] for n, e in enumerate(tab.edges) if v in e)
                worst = max(worst, np.abs(row).max() / scale)
            for s in faces(t, 2):
                ref = oriented_entry(tab, *s)
                for x, y, z in itertools.permutations(s):
                    worst = max(worst, _rel(oriented_entry(tab, x, y, z), ref))
                worst = max(worst, abs(normalized_quantity(u, t, s, omega) + 1))
    return CheckResult("scalar_tables", worst < 1e-12, float(worst))


def check_fskew(c: Cocycle, rng, mutations) -> CheckResult:
    brk = "alpha" in mutations
    worst = max(matrix_F(u, c.q, MOVE.pentachoron_signs[u], break_sign=brk).skew_defect()
                for u in MOVE.pentachora)
    return CheckResult("Fskew", worst < 1e-10, worst)


def check_closed_form(c: Cocycle, rng, mutations) -> CheckResult:
    u = (1, 2, 3, 4, 5)
    pm = matrix_F(u, c.q, break_sign="alpha" in mutations)
    a = solve_edge_chain(c.q, u).a
    f12 = pm[("2345", "1345")]
    worst = max(_rel(f12, typical_element_q(c.q)), _rel(f12, typical_element_a(a)),
                _rel(pm[("1345", "2345")], typical_element_a_transposed(a)))
    return CheckResult("F12_closed_form", worst < 1e-10, worst)


def row_operator(pm, k: int) -> FirstOrderOp:
    """d/dx_t + sum_t' F_tt' x_t' for the k-th face of the pentachoron."""
    terms = {pm.faces[k]: (1, 0)}
    for j, t2 in enumerate(pm.faces):
        if j != k:
            terms[t2] = (0, pm.F[k, j])
    return FirstOrderOp.from_dict(REGISTRY, terms)


def check_superisotropy(c: Cocycle, rng, mutations) -> CheckResult:
    worst = 0.0
    for u in MOVE.pentachora:
        sign = MOVE.pentachoron_signs[u]
        pm = matrix_F(u, c.q, sign)
        W = pentachoron_weight(u, c.q, sign, REGISTRY)
        for k in range(5):
            worst = max(worst, row_operator(pm, k)(W).norm() / W.norm())
    return CheckResult("superisotropy", worst < 1e-12, worst)


def check_phi_symmetry(c: Cocycle, rng, mutations) -> CheckResult:
    worst = 0.0
    for u in MOVE.pentachora:
        ref = abs(phi(u, c.q))
        for perm in itertools.permutations(u):
            worst = max(worst, abs(abs(phi(u, c.q, perm)) - ref) / ref)
    return CheckResult("phi_symmetry", worst < 1e-8, worst)


def check_phi_homogeneity(c: Cocycle, rng, mutations) -> CheckResult:
    lam = 1.7 - 0.4j
    scaled = {s: lam * v for s, v in c.q.items()}
    worst = max(_rel(phi(u, scaled), lam ** PHI_SCALING_DEGREE * phi(u, c.q))
                for u in MOVE.pentachora)
    return CheckResult("phi_homogeneity", worst < 1e-10, worst)


def check_trig_locus(c: Cocycle, rng, mutations, points: int = 50) -> CheckResult:
    worst = 0.0
    for _ in range(points):
        a = dl.random_trig_point(rng).a
        scale = max(abs(v) for v in a.values()) ** 3
        for t in faces((1, 2, 3, 4, 5), 3):
            worst = max(worst, max(abs(g) for g in dl.ideal_2345d(a, t)) / scale)
            worst = max(worst, dl.psi_ratio_spread(a, t))
        worst = max(worst, dl.psi_ratio_spread(a, (1, 2, 3, 4, 5)), dl.abd_residual(a))
    return CheckResult("trig_locus", worst < 1e-9, worst)


# (face, twist) -> loci on which f_K^(t) vanishes, for u = 12345
QUARTIC_ZEROS = {
    ("2345", ()): ("Du", "DuK1", "Dt-2345"),
    ("1345", (1,)): ("DuK1", "DuK12", "Dt+1345"),
    ("1245", (1, 2)): ("DuK12", "DuK123", "Dt-1245"),
    ("1235", (1, 2, 3)): ("DuK123", "DuK1234", "Dt+1235"),
    ("1234", ()): ("DuK1234", "Du", "Dt-1234"),
}


def check_quartic_zeros(c: Cocycle, rng, mutations) -> CheckResult:
    worst = 0.0
    fails = []
    for (t, K), loci in QUARTIC_ZEROS.items():
        for name in loci:
            pt = dl.locus_point(name, rng)
            scale = max(abs(v) for v in pt.q.values()) ** 4
            val = abs(f_poly(dl.U0, t, K, pt.q)) / scale
            if val >= 1e-8:
                fails.append(f"f_{K}^({t})@{name}")
            worst = max(worst, val)
    return CheckResult("quartic_zeros", not fails, worst, ", ".join(fails))


PROBE_FUNCTIONS: dict[str, Callable] = {
    "F12": lambda q: matrix_F(dl.U0, q)[("2345", "1345")],
    "phi": lambda q: phi(dl.U0, q),
}
ORDER_TARGETS = ("F12@Du", "F12@DuK12", "F12@Dt+2345", "F12@Dt+1345", "phi@Du",
                 "phi@Dt+2345", "phi@Dt+1345", "phi@Dt+1245", "phi@Dt+1235", "phi@Dt+1234")


def run_probe(target: str, rng) -> tuple[dl.ProbeResult, int]:
    fn_name, locus = target.split("@")
    if fn_name not in PROBE_FUNCTIONS:
        raise ValueError(f"unknown probe function {fn_name!r}")
    base = dl.locus_point(locus, rng)
    res = dl.probe_order(PROBE_FUNCTIONS[fn_name], base, rng=rng, target=target)
    return res, dl.predicted_order(fn_name, locus)


def check_divisor_orders(c: Cocycle, rng, mutations) -> CheckResult:
    fails = []
    worst = 0.0
    for target in ORDER_TARGETS:
        res, expected = run_probe(target, rng)
        worst = max(worst, res.residual)
        if res.order != expected or not res.conclusive:
            fails.append(f"{target}: order {res.order} (slope {res.slope:.3f}), expected {expected}")
    return CheckResult("divisor_orders", not fails, worst, "; ".join(fails))


def check_relation(c: Cocycle, rng, mutations) -> CheckResult:
    rep = verify_relation(c.q, mutations=mutations)
    return CheckResult("relation", rep.passed, max(rep.ratio_spread, rep.coeff_sq_residual))


def check_denominator_control(c: Cocycle, rng, mutations) -> CheckResult:
    rep = verify_relation(c.q, mutations=set(mutations) | {"denominator"})
    return CheckResult("denominator_control", not rep.passed, rep.coeff_sq_residual)


CHECKS: dict[str, Callable] = {
    "cocycle": check_cocycle,
    "edge_chain": check_edge_chain,
    "scalar_tables": check_scalar_tables,
    "Fskew": check_fskew,
    "F12_closed_form": check_closed_form,
    "superisotropy": check_superisotropy,
    "phi_symmetry": check_phi_symmetry,
    "phi_homogeneity": check_phi_homogeneity,
    "trig_locus": check_trig_locus,
    "quartic_zeros": check_quartic_zeros,
    "divisor_orders": check_divisor_orders,
    "relation": check_relation,
    "denominator_control": check_denominator_control,
}


def selftest(cocycle: Optional[Cocycle] = None, seed: int = 42, only: Optional[Iterable[str]] = None,
             mutations: Iterable[str] = ()) -> list[CheckResult]:
    """Run the named checks (all by default); failures are results, not exceptions."""
    if cocycle is None:
        cocycle = random_generic_cocycle(seed)
    names = list(CHECKS) if only is None else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    out = []
    for name in names:
        rng = np.random.default_rng([seed, list(CHECKS).index(name)])
        try:
            out.append(CHECKS[name](cocycle, rng, set(mutations)))
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            out.append(CheckResult(name, False, float("nan"), f"{type(exc).__name__}: {exc}"))
    return out

