import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pachner.grassmann import (
    MAX_GENERATORS,
    FirstOrderOp,
    GeneratorRegistry,
    GrassmannElement,
    RegistryMismatchError,
    berezin_integrate,
    derivative,
    gaussian_weight,
    merge_sign,
)

REG = GeneratorRegistry("abcde")
N = len(REG)

coeff = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))


@st.composite
def elements(draw, parity=None):
    masks = [m for m in range(1 << N) if parity is None or m.bit_count() % 2 == parity]
    chosen = draw(st.lists(st.sampled_from(masks), max_size=6, unique=True))
    return GrassmannElement(REG, {m: draw(coeff) for m in chosen})


def close(f, g, tol=1e-9):
    scale = max(1.0, f.norm(), g.norm())
    return (f - g).norm() <= tol * scale


def x(name):
    return GrassmannElement.generator(REG, name)


def pfaffian(A):
    """Recursive expansion along the first row."""
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n % 2:
        return 0j
    total = 0j
    for j in range(1, n):
        keep = [k for k in range(n) if k not in (0, j)]
        total += (-1) ** (j + 1) * A[0, j] * pfaffian(A[np.ix_(keep, keep)])
    return total


def test_registry():
    assert REG.index("c") == 2 and REG.bit("c") == 4
    assert REG.mask("ae") == 0b10001
    assert REG.names_of(0b10001) == ["a", "e"]
    with pytest.raises(KeyError):
        REG.index("z")
    with pytest.raises(ValueError):
        GeneratorRegistry("aa")
    with pytest.raises(ValueError):
        GeneratorRegistry(range(MAX_GENERATORS + 1))


@pytest.mark.parametrize("s, t, sign", [(0b1, 0b10, 1), (0b10, 0b1, -1), (0b110, 0b1, 1),
                                        (0b101, 0b10, -1), (0, 0b111, 1)])
def test_merge_sign(s, t, sign):
    assert merge_sign(s, t) == sign


def test_nilpotent_and_anticommuting():
    assert (x("a") * x("a")).norm() == 0
    assert close(x("a") * x("b"), -(x("b") * x("a")))
    assert GrassmannElement.monomial(REG, "cab").coefficient("abc") == 1
    assert GrassmannElement.monomial(REG, "bac").coefficient("abc") == -1


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_associative_and_distributive(f, g, h):
    assert close((f * g) * h, f * (g * h))
    assert close(f * (g + h), f * g + f * h)


@settings(max_examples=60, deadline=None)
@given(elements(parity=1), elements(parity=1), elements(parity=0))
def test_supercommutation(f, g, e):
    assert close(f * g, -(g * f))
    assert close(e * f, f * e)


@settings(max_examples=60, deadline=None)
@given(elements(parity=1), elements(), st.sampled_from("abcde"))
def test_leibniz(f, g, v):
    # d(fg) = (df) g - f (dg) for odd f
    assert close(derivative(f * g, v), derivative(f, v) * g - f * derivative(g, v))


def test_berezin_conventions():
    a, b, c = x("a"), x("b"), x("c")
    assert berezin_integrate(a, "a").coefficient() == 1
    assert berezin_integrate(GrassmannElement.scalar(REG, 5), "a").norm() == 0
    assert berezin_integrate(a * b, "a", "b").coefficient() == 1
    assert berezin_integrate(a * b * c, "a", "b", "c").coefficient() == 1
    assert berezin_integrate(a * b * c, "c", "b", "a").coefficient() == -1


def test_parity_and_dump():
    f = x("a") * x("b") * 2 + 1
    assert f.parity() == 0 and f.degrees() == {0, 2}
    assert f.dump() == [("1", 1.0, 0.0), ("xa*xb", 2.0, 0.0)]
    with pytest.raises(ValueError):
        (f + x("c")).parity()


def test_registry_mismatch():
    other = GeneratorRegistry("abcde")
    with pytest.raises(RegistryMismatchError):
        x("a") * GrassmannElement.generator(other, "b")


def test_numpy_scalars_multiply():
    f = np.complex128(2 + 1j) * x("a")
    assert f.coefficient("a") == 2 + 1j


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=10, max_size=10))
def test_first_order_anticommutator(vals):
    # {d1, d2} acting on anything equals the scalar product times identity
    d1 = FirstOrderOp.from_dict(REG, {"a": vals[0:2], "b": vals[2:4], "c": vals[4:6]})
    d2 = FirstOrderOp.from_dict(REG, {"a": vals[6:8], "c": vals[8:10]})
    f = GrassmannElement(REG, {0b11010: 1.3, 0b1: -0.4j, 0: 2})
    lhs = d1(d2(f)) + d2(d1(f))
    assert close(lhs, d1.scalar_product(d2) * f)


def random_antisym(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A - A.T


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gaussian_matches_pfaffians(n):
    F = random_antisym(np.random.default_rng(n), n)
    names = list("abcde")[:n]
    W = gaussian_weight(F, names, REG)
    for k in range(0, n + 1, 2):
        for idx in itertools.combinations(range(n), k):
            want = pfaffian(-F[np.ix_(idx, idx)])
            got = W.coefficient([names[i] for i in idx])
            assert abs(got - want) < 1e-12 * max(1, abs(want))
    assert all(d % 2 == 0 for d in W.degrees())


def test_gaussian_is_annihilated_by_row_operators():
    F = random_antisym(np.random.default_rng(0), 5)
    W = gaussian_weight(F, list("abcde"), REG)
    for k, t in enumerate("abcde"):
        terms = {t: (1, 0)} | {s: (0, F[k, j]) for j, s in enumerate("abcde") if j != k}
        assert FirstOrderOp.from_dict(REG, terms)(W).norm() < 1e-12 * W.norm()


def test_gaussian_validation():
    with pytest.raises(ValueError, match="antisymmetric"):
        gaussian_weight(np.ones((2, 2)), "ab", REG)
    with pytest.raises(ValueError, match="shape"):
        gaussian_weight(np.zeros((2, 2)), "abc", REG)
    with pytest.raises(ValueError, match="distinct"):
        gaussian_weight(np.zeros((2, 2)), "aa", REG)
