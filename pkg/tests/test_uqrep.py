import itertools

import pytest

from qreflect.matprod import bitstrings, build_s_boundary, build_s_trace
from qreflect.scalar import ONE, I, Scalar, monomial
from qreflect.uqrep import (
    ALGEBRA_FOR,
    AlgebraSpec,
    SpecializationMismatch,
    check_intertwiner,
    check_weyl,
    coproduct_action,
    gauge,
    rep_generator,
)

X, Y, Z = monomial(x=1), monomial(y=1), monomial(z=1)


def act(spec, gen, j, state, z=None):
    return rep_generator(spec, gen, j, z).matrix.apply(state, (0,), spec.n)


# ---------------------------------------------------------------- generators


def test_type_A_node_one():
    A = AlgebraSpec("A", 2)
    # e_1 moves a particle from site 1 to site 2, f_1 moves it back
    assert act(A, "e", 1, {(1, 0): ONE}) == {(0, 1): ONE}
    assert act(A, "f", 1, {(0, 1): ONE}) == {(1, 0): ONE}
    assert act(A, "f", 1, {(1, 0): ONE}) == {}


def test_type_A_node_zero_carries_z():
    A = AlgebraSpec("A", 2)
    z = Scalar.from_monomial(Z)
    assert act(A, "e", 0, {(0, 1): ONE}) == {(1, 0): z}
    assert act(A, "f", 0, {(1, 0): ONE}) == {(0, 1): 1 / z}


def test_D2_e0_adds_first_bit():
    D = AlgebraSpec("D2", 2)
    z = Scalar.from_monomial(Z)
    assert act(D, "e", 0, {(0, 1): ONE}) == {(1, 1): z}
    assert act(D, "e", 0, {(1, 0): ONE}) == {}


def test_B_k0_on_vacuum():
    B = AlgebraSpec("B", 2)
    assert act(B, "k", 0, {(0, 0): ONE}) == {(0, 0): B.p_power(-2)}
    assert B.p_power(-2) == -Scalar.from_monomial(monomial(q=2))


def test_p_specialization():
    for sign in (1, -1):
        p = AlgebraSpec("D2", 1, sign).p()
        assert p * p == -Scalar.from_monomial(monomial(q=-2))
    assert AlgebraSpec("D2", 1, 1).p() == -AlgebraSpec("D2", 1, -1).p()


def test_short_root_nodes():
    assert [AlgebraSpec("D2", 3).p_node_exp(j) for j in range(4)] == [1, 2, 2, 1]
    assert [AlgebraSpec("B", 3).p_node_exp(j) for j in range(4)] == [2, 2, 2, 1]
    assert [AlgebraSpec("Btilde", 3).p_node_exp(j) for j in range(4)] == [1, 2, 2, 2]
    assert [AlgebraSpec("D1", 3).p_node_exp(j) for j in range(4)] == [2, 2, 2, 2]


def test_bad_arguments():
    with pytest.raises(ValueError):
        AlgebraSpec("E8", 2)
    with pytest.raises(ValueError):
        AlgebraSpec("A", 1)
    with pytest.raises(ValueError):
        rep_generator(AlgebraSpec("A", 2), "e", 2)
    with pytest.raises(ValueError):
        rep_generator(AlgebraSpec("D2", 1), "h", 0)


def test_k_is_diagonal():
    for t in ALGEBRA_FOR:
        spec = AlgebraSpec(t, 3)
        for j in spec.nodes:
            M = rep_generator(spec, "k", j).matrix
            assert all(r == c for r, c in M.entries)
            Mi = rep_generator(spec, "kinv", j).matrix
            for key, v in M.entries.items():
                assert v * Mi.entries[key] == ONE


@pytest.mark.parametrize("t", list(ALGEBRA_FOR))
@pytest.mark.parametrize("sign", [1, -1])
def test_weyl_and_commutator_relations(t, sign):
    for n in (2, 3):
        assert check_weyl(AlgebraSpec(t, n, sign)).passed


# ---------------------------------------------------------------- coproduct


def swap(state, n):
    return {k[n:] + k[:n]: v for k, v in state.items()}


def test_delta_k_is_product():
    spec = AlgebraSpec("D2", 2)
    Dk = coproduct_action(spec, "k", 1, X, Y)
    for a, b in itertools.product(bitstrings(2), repeat=2):
        kx = act(spec, "k", 1, {a: ONE}, X)[a]
        ky = act(spec, "k", 1, {b: ONE}, Y)[b]
        assert Dk({a + b: ONE}) == {a + b: kx * ky}


def test_delta_e_two_terms():
    spec = AlgebraSpec("A", 2)
    out = coproduct_action(spec, "e", 1, X, Y)({(1, 0, 1, 0): ONE})
    assert set(out) == {(1, 0, 0, 1), (0, 1, 1, 0)}


@pytest.mark.parametrize("t", list(ALGEBRA_FOR))
def test_opposite_is_swapped_coproduct(t):
    spec = AlgebraSpec(t, 2)
    n = spec.n
    for gen in ("e", "f", "k"):
        for j in spec.nodes:
            Dp = coproduct_action(spec, gen, j, X, Y, opposite=True)
            Dyx = coproduct_action(spec, gen, j, Y, X)
            for a, b in itertools.product(bitstrings(n), repeat=2):
                v = {a + b: ONE}
                assert Dp(v) == swap(Dyx(swap(v, n)), n)


# ---------------------------------------------------------------- gauge


def test_gauge_involution():
    S = build_s_boundary(2, 1, 1)
    back = gauge(gauge(S, 1), -1)
    assert back.entries == S.entries
    assert gauge(S, 1).entries != S.entries


def test_gauge_on_diagonal_weight():
    # I (x) 1 and 1 (x) I^-1 cancel when |row first half| = |col second half|
    S = build_s_boundary(1, 1, 1)
    G = gauge(S, 1)
    assert G[((1, 0), (0, 1))] == S[((1, 0), (0, 1))]
    assert G[((0, 1), (0, 1))] == S[((0, 1), (0, 1))] / I


# ---------------------------------------------------------------- intertwiner


def test_type_A_l1_m1():
    cert = check_intertwiner(AlgebraSpec("A", 2), l=1, m=1)
    assert cert.passed
    # 3 generator kinds x 2 nodes x 4 basis vectors
    assert cert.components == 24


@pytest.mark.parametrize("sign", [1, -1])
def test_D2_n1(sign):
    assert check_intertwiner(AlgebraSpec("D2", 1, sign)).passed


def test_D1_plus_plus_block():
    assert check_intertwiner(AlgebraSpec("D1", 2), sigma=1, sigmap=1).passed


@pytest.mark.parametrize("t", ["D2", "B", "Btilde"])
def test_spin_rows_n2(t):
    assert check_intertwiner(AlgebraSpec(t, 2)).passed


def test_type_A_all_blocks_n3():
    for l, m in itertools.product(range(4), repeat=2):
        assert check_intertwiner(AlgebraSpec("A", 3), l=l, m=m).passed, (l, m)


def test_specialization_mismatch():
    with pytest.raises(SpecializationMismatch):
        check_intertwiner(AlgebraSpec("D2", 1), family=(2, 2))
    with pytest.raises(SpecializationMismatch):
        check_intertwiner(AlgebraSpec("A", 2), l=1, m=1, family=(1, 1))


def test_wrong_matrix_fails():
    # S^{2,2} is not the intertwiner of D2
    cert = check_intertwiner(AlgebraSpec("D2", 1), S=build_s_boundary(1, 2, 2))
    assert not cert.passed and cert.witness


def test_perturbed_entry_fails():
    S = build_s_trace(2, 1, 1)
    (key, v), *_ = sorted(S.entries.items())
    S.set(*key, v + ONE)
    cert = check_intertwiner(AlgebraSpec("A", 2), S=S, l=1, m=1)
    assert not cert.passed


def test_rescaling_caught_by_anchor():
    S = build_s_boundary(1, 1, 1).map(lambda v: v * 3)
    cert = check_intertwiner(AlgebraSpec("D2", 1), S=S)
    assert not cert.passed
    assert cert.witness.startswith("anchor")
