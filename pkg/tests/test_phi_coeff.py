import itertools

import numpy as np
import pytest

from pachner.cochain import random_generic_cocycle
from pachner.pentachoron_weight import matrix_F
from pachner.phi_coeff import (
    PHI_SCALING_DEGREE,
    PhiValue,
    coeff_left,
    coeff_left_squared,
    coeff_right,
    f_poly,
    phi,
    phi_factors,
    rho,
    sigma,
)
from pachner.simplicial import MOVE

U = (1, 2, 3, 4, 5)
GOLDEN_PHI_42 = -0.5485451105540367 + 0.3214655784583556j


def test_golden_phi():
    assert phi(U, random_generic_cocycle(42).q) == pytest.approx(GOLDEN_PHI_42, abs=1e-14)


def test_sigma_rho(cocycles):
    c = cocycles[1]
    assert sigma("2345", c.omega) == c.omega[(2, 3, 4)] - c.omega[(2, 3, 5)]
    assert rho("1456", c.q) == c.q[(1, 4, 5)] * c.q[(1, 4, 6)]


def test_f_quartics_match_F12_factors(cocycles):
    # F_{2345,1345} = -(omega_235 - omega_234) f_1^(1345) / (2 q134 q135 q234 q235 f^(2345))
    q = cocycles[6].q
    pre = -(q[(2, 3, 5)] ** 2 - q[(2, 3, 4)] ** 2) / (2 * q[(1, 3, 4)] * q[(1, 3, 5)] * q[(2, 3, 4)] * q[(2, 3, 5)])
    want = pre * f_poly(U, "1345", (1,), q) / f_poly(U, "2345", (), q)
    assert matrix_F(U, q)[("2345", "1345")] == pytest.approx(want, rel=1e-12)


def test_f_twist_is_sign_pattern(cocycles):
    q = cocycles[2].q
    flipped = {s: -v if len({1, 3} & set(s)) % 2 else v for s, v in q.items()}
    assert f_poly(U, "2345", (1, 3), q) == pytest.approx(f_poly(U, "2345", (), flipped))
    # K and its complement twist the same way up to an overall sign of each term
    assert abs(f_poly(U, "1245", (1, 2), q)) == pytest.approx(abs(f_poly(U, "1245", (3, 4, 5), q)))


@pytest.mark.parametrize("u, t, K", [(U, "1236", ()), (U, "2345", (6,)), ((1, 2, 3, 4), "1234", ())])
def test_f_poly_validation(cocycles, u, t, K):
    with pytest.raises(ValueError):
        f_poly(u, t, K, cocycles[1].q)


@pytest.mark.parametrize("seed", range(1, 6))
@pytest.mark.parametrize("u", MOVE.pentachora)
def test_phi_symmetric_up_to_sign(cocycles, seed, u):
    q = cocycles[seed].q
    ref = phi(u, q)
    for perm in itertools.permutations(u):
        val = phi(u, q, perm)
        assert abs(abs(val) - abs(ref)) < 1e-8 * abs(ref)
        assert min(abs(val - ref), abs(val + ref)) < 1e-8 * abs(ref)


def test_phi_rejects_bad_permutation(cocycles):
    with pytest.raises(ValueError):
        phi(U, cocycles[1].q, (1, 2, 3, 4, 6))


@pytest.mark.parametrize("lam", [2.0, 0.5 - 1.5j, -1.0])
def test_phi_homogeneity(cocycles, lam):
    q = cocycles[4].q
    scaled = {s: lam * v for s, v in q.items()}
    assert phi(U, scaled) == pytest.approx(lam ** PHI_SCALING_DEGREE * phi(U, q), rel=1e-12)


def test_phi_factor_degrees(cocycles):
    q = cocycles[1].q
    num, den = phi_factors(U, q)
    assert len(num) == 3 and len(den) == 5
    assert phi(U, q) == pytest.approx(np.prod(num) / np.prod(den))


def test_phi_depends_only_on_branch_class(cocycles):
    c = cocycles[3]
    # flipping every q leaves each quartic and sigma unchanged
    neg = {s: -v for s, v in c.q.items()}
    assert phi(U, neg) == pytest.approx(phi(U, c.q))


def test_phi_zero_denominator():
    q = {s: 1.0 + 0j for s in itertools.combinations(range(1, 7), 3)}
    with pytest.raises(ZeroDivisionError):
        phi(U, q)


@pytest.mark.parametrize("seed", range(1, 11))
def test_coefficients(cocycles, seed):
    q = cocycles[seed].q
    cl = coeff_left(q)
    assert cl ** 2 == pytest.approx(coeff_left_squared(q), rel=1e-12)
    assert coeff_left(q, with_denominator=False) == pytest.approx(cl * q[(1, 2, 3)])
    assert coeff_right(q, with_denominator=False) == pytest.approx(coeff_right(q) * q[(4, 5, 6)])


def test_phi_value_root():
    p = PhiValue(U, -4 + 0j)
    assert p.root == pytest.approx(2j)
    assert PhiValue(U, 4 + 0j, sqrt_branch=-1).root == -2

