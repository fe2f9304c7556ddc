import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qreflect.qboson import DOUBLED, SINGLE, TruncatedState, apply_truncated, word
from qreflect.scalar import ONE, ZERO, Scalar, monomial, parse_scalar, substitute
from qreflect.threedim import (
    Element3D,
    k3d_apply,
    k3d_element,
    local_K,
    local_L,
    multinomial_symbol,
    r3d_apply,
    r3d_element,
)

q = Scalar.from_monomial(monomial(q=1))


def q_exponents(v: Scalar) -> set:
    """q-exponents of a Laurent polynomial with integer coefficients."""
    assert v.is_polynomial() and v.is_real()
    (dexp, dc), = v.denominator_terms().items()
    assert dc == 1
    out = set()
    for e, c in v.numerator_terms().items():
        assert c.imag == 0 and c.real.denominator == 1
        assert not any(e[1:])
        out.add(Fraction(e[0] - dexp[0], 2))
    return out


# ---------------------------------------------------------------- examples


def test_multinomial_symbol():
    assert multinomial_symbol((1,), (1,)) == ONE
    assert multinomial_symbol((2,), (1, 1)) == 1 + q**2
    assert multinomial_symbol((1,), (-1, 2)) == ZERO


def test_r3d_examples():
    assert r3d_element(1, 3, 0, 3, 1, 2) == -q**2 * (1 - q**4) * (1 - q**6)
    assert r3d_element(2, 2, 1, 3, 1, 2) == (1 + q**2) * (1 - q**6) * (1 - q**2 - q**6)
    assert r3d_element(0, 0, 0, 0, 0, 0) == ONE


def test_k3d_examples():
    assert k3d_element(1, 1, 1, 1, 0, 2, 1, 0) == q**5 * (1 + q**2) * (1 - q**2 - q**6)
    assert k3d_element(1, 1, 1, 1, 3, 0, 0, 4) == (
        q**5 * (1 + q**2) * (1 + q**4) * (1 - q**6) * (1 - q**8) * (1 - q**12))
    assert k3d_element(0, 0, 0, 0, 0, 0, 0, 0) == ONE


def test_vacuum_fixed():
    vac3 = {(0, 0, 0): ONE}
    assert r3d_apply(vac3) == vac3
    vac4 = {(0, 0, 0, 0): ONE}
    assert k3d_apply(vac4) == vac4


def test_local_L_table():
    assert local_L(0, 1, 1, 0) == word(DOUBLED, "A+")
    assert local_L(1, 0, 0, 1) == word(DOUBLED, "A-")
    assert local_L(0, 1, 0, 1) == word(DOUBLED, "K")
    assert local_L(1, 0, 1, 0) == word(DOUBLED, "K", -1)
    assert local_L(0, 0, 1, 1).is_zero()
    for a, b, c, d in itertools.product((0, 1), repeat=4):
        if a + b != c + d:
            assert local_L(a, b, c, d).is_zero()


def test_local_K_table():
    assert local_K(0, 1) == word(SINGLE, "k")
    assert local_K(1, 0) == word(SINGLE, "k", -1)
    assert local_K(0, 0) == word(SINGLE, "a+")
    assert local_K(1, 1) == word(SINGLE, "a-")


@pytest.mark.parametrize("alpha,beta", list(itertools.product((0, 1), repeat=2)))
def test_local_K_h_shift(alpha, beta):
    # K^beta_alpha raises h by 1 - alpha - beta on every basis vector
    w = local_K(alpha, beta)
    for m in range(1, 6):
        out = apply_truncated(w, TruncatedState.basis(SINGLE, m))
        assert set(out.amps) == {m + 1 - alpha - beta}


def test_element_json():
    el = Element3D("K3D", (1, 1, 1, 1), (0, 2, 1, 0))
    d = el.to_json()
    assert d["indices"] == {"out": [1, 1, 1, 1], "in": [0, 2, 1, 0]}
    assert parse_scalar(d["value"]) == el.value


# ---------------------------------------------------------------- properties

idx = st.integers(0, 4)


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[idx] * 6))
def test_r3d_delta_constraints(t):
    a, b, c, i, j, k = t
    if a + b != i + j or b + c != j + k:
        assert r3d_element(*t).is_zero()


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[st.integers(0, 3)] * 8))
def test_k3d_delta_constraints(t):
    a, b, c, d, i, j, k, l = t
    if a + b + c != i + j + k or b + 2 * c + d != j + 2 * k + l:
        assert k3d_element(*t).is_zero()


def _r_nonzero(total):
    for i, j, k in itertools.product(range(total + 1), repeat=3):
        if i + j + k > total:
            continue
        for b in range(min(i + j, j + k) + 1):
            a, c = i + j - b, j + k - b
            v = r3d_element(a, b, c, i, j, k)
            if not v.is_zero():
                yield (a, b, c, i, j, k), v


def test_r3d_parity():
    seen = 0
    for (a, b, c, i, j, k), v in _r_nonzero(6):
        xi = (a - j) * (c - j) % 2
        assert {e % 2 for e in q_exponents(v)} == {xi}
        seen += 1
    assert seen > 100


def test_k3d_parity():
    seen = 0
    for i, j, k, l in itertools.product(range(4), repeat=4):
        if i + j + k + l > 6:
            continue
        state = k3d_apply({(i, j, k, l): ONE})
        for (a, b, c, d), v in state.items():
            eta = (b * d + j * l) % 2
            exps = q_exponents(v)
            assert {e % 2 for e in exps} == {eta}
            seen += 1
    assert seen > 100


def test_weight_conservation_monomials():
    x = Scalar.from_monomial(monomial(x=1))
    y = Scalar.from_monomial(monomial(y=1))
    for (a, b, c, i, j, k), _ in _r_nonzero(5):
        assert x**a * (x * y)**b * y**c == x**i * (x * y)**j * y**k
    for i, j, k, l in itertools.product(range(3), repeat=4):
        for (a, b, c, d) in k3d_apply({(i, j, k, l): ONE}):
            lhs = (x / y)**a * x**b * (x * y)**c * y**d
            rhs = (x / y)**i * x**j * (x * y)**k * y**l
            assert lhs == rhs


def test_r3d_inversion():
    for i, j, k in itertools.product(range(5), repeat=3):
        if i + j + k > 4:
            continue
        v = {(i, j, k): ONE}
        assert r3d_apply(r3d_apply(v)) == v


def test_k3d_inversion():
    for i, j, k in itertools.product(range(4), repeat=3):
        if i + j + k > 3:
            continue
        for l in range(5):
            v = {(i, j, k, l): ONE}
            assert k3d_apply(k3d_apply(v)) == v


def test_doubled_r3d_is_q_squared():
    rng = random.Random(3)
    for _ in range(20):
        i, j, k = (rng.randint(0, 3) for _ in range(3))
        for (a, b, c), v in r3d_apply({(i, j, k): ONE}).items():
            d = r3d_element(a, b, c, i, j, k, doubled=True)
            assert substitute(v, {"q": monomial(q=2)}) == d
