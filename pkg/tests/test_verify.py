import itertools

import pytest

from qreflect import verify as V
from qreflect.matprod import build_k_boundary, build_s_boundary, build_s_trace, weight
from qreflect.scalar import ONE, monomial
from qreflect.threedim import k3d_apply, r3d_apply


def stable(cert):
    d = cert.to_json()
    d.pop("seconds")
    return d


# ---------------------------------------------------------------- Yang-Baxter


def test_ybe_trace_n2():
    cert = V.check_ybe("tr", 2)
    assert cert.passed and cert.components == 64


def test_ybe_boundary_n1():
    assert V.check_ybe("boundary", 1, 1, 1).passed


@pytest.mark.parametrize("s,sp", list(itertools.product((1, 2), repeat=2)))
def test_ybe_boundary_n2(s, sp):
    assert V.check_ybe("boundary", 2, s, sp).passed


def test_ybe_perturbation_witness():
    S = build_s_trace(2)
    key = ((1, 0, 0, 1), (0, 1, 1, 0))
    S.set(*key, S[key] + ONE)
    cert = V.check_ybe("tr", 2, S=S)
    assert cert.status == "fail"
    assert cert.witness.startswith("input ")
    assert cert.failures > 0


def _undetected(build):
    M = build()
    out = []
    for key in M.entries:
        T = build()
        T.set(*key, T[key] + ONE)
        if V.check_ybe("perturbed", M.n, S=T).passed:
            out.append(key)
    return sorted(out)


def test_ybe_negative_controls_s11():
    assert _undetected(lambda: build_s_boundary(1, 1, 1)) == []


def test_ybe_negative_controls_s_trace():
    # each weight block S_{l,m} enters both sides once, so rescaling a whole
    # block is a symmetry; the blocks with l, m in {0, n} are single entries
    n = 2
    free = [(c, c) for c in build_s_trace(n).columns()
            if weight(c[:n]) in (0, n) and weight(c[n:]) in (0, n)]
    assert len(free) == 4
    assert _undetected(lambda: build_s_trace(n)) == sorted(free)


def test_ybe_s22_n1_is_constant_diagonal():
    # any constant diagonal matrix solves the equation, so no single-entry
    # change of S^{2,2} at n = 1 can be detected by it
    M = build_s_boundary(1, 2, 2)
    assert all(r == c and not v.free_vars() for (r, c), v in M.entries.items())


# ---------------------------------------------------------------- reflection


def test_re_trace_n2():
    assert V.check_re("tr", "tr", 2).passed


def test_re_boundary_n1():
    assert V.check_re("boundary", "boundary", 1, 1, 1, 2, 2).passed


ADMISSIBLE = [t for t in itertools.product((1, 2), repeat=4) if t[0] <= t[2] and t[1] <= t[3]]


@pytest.mark.parametrize("s,sp,k,kp", ADMISSIBLE)
def test_re_boundary_n2(s, sp, k, kp):
    assert V.check_re("boundary", "boundary", 2, s, sp, k, kp).passed


def test_admissible_table():
    assert len(ADMISSIBLE) == 9
    assert V.admissible("tr", "tr")
    assert not V.admissible("tr", "boundary", k=1, kp=1)
    assert not V.admissible("boundary", "boundary", 2, 2, 1, 1)


def test_inadmissible_pair_raises():
    with pytest.raises(V.InadmissiblePair):
        V.check_re("boundary", "boundary", 1, 2, 2, 1, 1)
    with pytest.raises(V.InadmissiblePair):
        V.check_re("tr", "boundary", 1, k=2, kp=2)


def test_inadmissible_pair_really_fails():
    # S^{2,2} with K^{1,1}, forced past the admissibility guard
    cert = V.check_re("boundary", "boundary", 1, 1, 1, 1, 1, S=build_s_boundary(1, 2, 2))
    assert cert.status == "fail"


@pytest.mark.parametrize("kk", [(1, 1), (2, 2)])
def test_re_negative_controls_n2(kk):
    for key in build_k_boundary(2, *kk).entries:
        K = build_k_boundary(2, *kk)
        K.set(*key, K[key] + ONE)
        assert not V.check_re("boundary", "boundary", 2, 1, 1, *kk, K=K).passed, key


def test_re_x_equals_y():
    x = monomial(x=1)
    assert V.check_re("tr", "tr", 2, x=x, y=x).passed
    assert V.check_re("boundary", "boundary", 1, 1, 2, 2, 2, x=x, y=x).passed


# ---------------------------------------------------------------- 3D identities


def test_quantized_re_examples():
    assert V.check_quantized_re(4, ["1100"]).passed
    assert V.check_quantized_re(4, ["1110"]).passed
    vac = V.check_quantized_re(0, ["0000"])
    assert vac.passed and vac.components == 1


def test_quantized_re_all_components_low_degree():
    cert = V.check_quantized_re(2)
    assert cert.passed and len(cert.params["components"]) == 16


def test_quantized_re_unknown_component():
    with pytest.raises(KeyError):
        V.check_quantized_re(1, ["2222"])


def test_quantized_re_second_route():
    assert V.check_quantized_re_full(2).passed


def test_rlll_low_degree():
    assert V.check_rlll(3).passed


def test_r_relations():
    assert V.check_r_relations(4).passed


def test_inversion():
    assert V.check_inversion("R", 4).passed
    assert V.check_inversion("K", 2, l_max=3).passed
    with pytest.raises(ValueError):
        V.check_inversion("S", 1)


def test_r_eigenrelation():
    assert V.check_boundary_eigen("R", 1, truncation=8).passed
    assert V.check_boundary_eigen("R", 2, truncation=6).passed


def test_k_eigenrelation_is_reported_conjectural():
    cert = V.check_boundary_eigen("K", 1, 2, truncation=6)
    assert cert.passed
    assert "conjectural" in cert.note
    with pytest.raises(ValueError):
        V.check_boundary_eigen("K", 2, 1)


def test_tetra_spot_vacuum():
    cert = V.check_tetra_spot((0,) * 6, (0,) * 6)
    assert cert.passed


def test_tetra_spot_full_image():
    assert V.check_tetra_spot((1, 0, 1, 0, 1, 1)).passed
    assert V.check_tetra_spot((1, 1, 0, 1, 0, 0), doubled=False).passed


def test_3dre_spot():
    assert V.check_3dre_spot((0,) * 9, (0,) * 9).passed
    assert V.check_3dre_spot((1, 0, 0, 1, 0, 0, 0, 1, 0)).passed


def test_tetra_spot_forbidden_component():
    # out index violating conservation: both sides vanish there, still equal
    assert V.check_tetra_spot((0,) * 6, (1, 0, 0, 0, 0, 0)).passed


def test_slots_reorder_consistently():
    v = {(2, 0, 1, 1): ONE}
    assert k3d_apply(v, slots=(0, 1, 2, 3)) == k3d_apply(v)
    w = {(0, 1, 2): ONE}
    moved = r3d_apply({(2, 1, 0): ONE}, slots=(2, 1, 0))
    assert {k[::-1]: c for k, c in moved.items()} == r3d_apply(w)


# ---------------------------------------------------------------- certificates


def test_deterministic_certificates():
    a = V.check_quantized_re(2, ["1010", "0101"])
    b = V.check_quantized_re(2, ["1010", "0101"])
    assert stable(a) == stable(b)


def test_parallel_matches_serial():
    serial = V.check_quantized_re(2, jobs=1)
    parallel = V.check_quantized_re(2, jobs=3)
    assert stable(serial) == stable(parallel)
    S = build_s_trace(2)
    key = ((1, 0, 0, 1), (0, 1, 1, 0))
    S.set(*key, S[key] + ONE)
    assert stable(V.check_ybe("tr", 2, S=S, jobs=1)) == stable(V.check_ybe("tr", 2, S=S, jobs=3))


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("QREFLECT_JOBS", "4")
    assert V.default_jobs() == 4
    monkeypatch.setenv("QREFLECT_JOBS", "junk")
    assert V.default_jobs() == 1


def test_certificate_json():
    cert = V.check_ybe("boundary", 1, 1, 2)
    d = cert.to_json()
    assert set(d) == {"identity", "params", "status", "components", "seconds"}
    assert d["params"] == {"family": "boundary", "n": 1, "s": 1, "sp": 2}
