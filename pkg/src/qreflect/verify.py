"""Exact certificates for the Yang-Baxter, reflection and 3D identities.

Every check reduces an operator identity to a finite set of component
comparisons between exact scalars.  On Fock spaces the conservation laws of
the 3D R and 3D K make each component a finite sum, so "truncated to degree
N" means: every input basis vector whose Fock indices sum to at most N is
pushed through both sides and the images are compared exactly.

Tensor states are dictionaries ``{index tuple: Scalar}``.  The tuple mixes
bits (for ``V``) and Fock levels; which slot is which is fixed per check.
"""

from __future__ import annotations

import itertools
import json
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .matprod import QMatrix, build_k_boundary, build_k_trace, build_s_boundary, build_s_trace
from .qboson import DOUBLED, SINGLE, OperatorWord, level_action, word
from .scalar import ONE, ZERO, Scalar, monomial, qpoch_finite
from .threedim import k3d_apply, k3d_element, local_K, local_L, r3d_apply, r3d_element

__all__ = [
    "Certificate",
    "InadmissiblePair",
    "QRE_COMPONENTS",
    "check_quantized_re",
    "check_quantized_re_full",
    "check_rlll",
    "check_r_relations",
    "check_boundary_eigen",
    "check_tetra_spot",
    "check_3dre_spot",
    "check_inversion",
    "check_ybe",
    "check_re",
    "admissible",
    "default_jobs",
]


class InadmissiblePair(ValueError):
    pass


@dataclass
class Certificate:
    identity: str
    params: dict
    status: str = "pass"
    witness: str | None = None
    seconds: float = 0.0
    components: int = 0
    failures: int = 0
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        d = {"identity": self.identity, "params": self.params, "status": self.status,
             "components": self.components, "seconds": round(self.seconds, 3)}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.failures:
            d["failures"] = self.failures
        if self.note:
            d["note"] = self.note
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def default_jobs() -> int:
    """Worker count, from ``QREFLECT_JOBS`` (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get("QREFLECT_JOBS", "1")))
    except ValueError:
        return 1


def _run(identity: str, params: dict, check: Callable, items: Sequence, jobs: int | None = None,
         note: str | None = None) -> Certificate:
    """Evaluate ``check(item) -> None | witness`` over all items.

    Failures are aggregated; the witness is the first failure in item order,
    so the certificate does not depend on scheduling.
    """
    t0 = time.perf_counter()
    jobs = default_jobs() if jobs is None else jobs
    if jobs > 1 and len(items) > 1:
        # forked workers inherit the memo tables and any prepared matrices
        with ProcessPoolExecutor(jobs, mp_context=multiprocessing.get_context("fork")) as pool:
            results = list(pool.map(check, items, chunksize=max(1, len(items) // (4 * jobs))))
    else:
        results = [check(it) for it in items]
    bad = [r for r in results if r is not None]
    cert = Certificate(identity, params, "fail" if bad else "pass", bad[0] if bad else None,
                       time.perf_counter() - t0, len(items), len(bad), note)
    return cert


# ---------------------------------------------------------------- tensor plumbing


def _add(d: dict, key, v: Scalar):
    cur = d.get(key)
    cur = v if cur is None else cur + v
    if cur.is_zero():
        d.pop(key, None)
    else:
        d[key] = cur


def _diff(a: Mapping, b: Mapping):
    """First key where two states differ, or None."""
    for key in sorted(set(a) | set(b)):
        if a.get(key, ZERO) != b.get(key, ZERO):
            return key
    return None


def fock_word(state: Mapping, slot: int, w: OperatorWord) -> dict:
    """Apply a q-boson word to one Fock slot."""
    out: dict = {}
    for idx, c in state.items():
        m, f = level_action(w, idx[slot])
        if m is None:
            continue
        new = idx[:slot] + (m,) + idx[slot + 1:]
        _add(out, new, c * f)
    return out


def apply_terms(terms, state: Mapping) -> dict:
    """Apply ``sum_t c_t (w_t1 (x) w_t2 (x) ...)``; ``terms`` is [(c, {slot: word})]."""
    out: dict = {}
    for c, words in terms:
        cur = dict(state)
        for slot, w in words.items():
            cur = fock_word(cur, slot, w)
            if not cur:
                break
        for key, v in cur.items():
            _add(out, key, v * c)
    return out


def apply_L(state: Mapping, i: int, j: int, f: int) -> dict:
    """``L_{ijf}``: bits in slots ``i, j``, Fock slot ``f`` of the doubled algebra.

    ``L (v_alpha (x) v_beta) = sum v_gamma (x) v_delta (x) L^{gamma delta}_{alpha beta}``.
    """
    out: dict = {}
    for idx, c in state.items():
        al, be = idx[i], idx[j]
        for ga, de in ((0, 0), (0, 1), (1, 0), (1, 1)):
            w = local_L(al, be, ga, de)
            if w.is_zero():
                continue
            m, f_ = level_action(w, idx[f])
            if m is None:
                continue
            new = list(idx)
            new[i], new[j], new[f] = ga, de, m
            _add(out, tuple(new), c * f_)
    return out


def apply_K(state: Mapping, i: int, f: int) -> dict:
    """``K_{if}``: ``K v_alpha = sum_beta v_beta (x) K^beta_alpha`` with Fock slot ``f``."""
    out: dict = {}
    for idx, c in state.items():
        al = idx[i]
        for be in (0, 1):
            m, f_ = level_action(local_K(al, be), idx[f])
            if m is None:
                continue
            new = list(idx)
            new[i], new[f] = be, m
            _add(out, tuple(new), c * f_)
    return out


def fock_basis(nslots: int, degree: int):
    """All index tuples of length ``nslots`` with sum at most ``degree``."""
    for total in range(degree + 1):
        for combo in itertools.combinations(range(total + nslots - 1), nslots - 1):
            parts, prev = [], -1
            for c in combo:
                parts.append(c - prev - 1)
                prev = c
            parts.append(total + nslots - 1 - prev - 1)
            yield tuple(parts)


# ---------------------------------------------------------------- quantized reflection equation

# Slots: 0 = F_{q^2} (A+, A-, K), 1 = F_q (a+, a-, k), 2 = F_{q^2}, 3 = F_q.
# Each entry (X, Y) encodes X 𝒦 = 𝒦 Y; Y = None means [X, 𝒦] = 0.
QRE_COMPONENTS: dict[str, tuple[str, str | None]] = {
    "1111": ("1 a- 1 a- - 1 k A- k", None),
    "1110": ("1 a- 1 k + 1 k A- a+", "A- a+ A- k + A- k 1 a- - K a- K k"),
    "1101": ("1 k K a-", "A+ a- K k + K a+ A- k + K k 1 a-"),
    "1100": ("1 k K k", None),
    "1011": ("A- a+ A- k + A- k 1 a- - K a- K k", "1 a- 1 k + 1 k A- a+"),
    "1010": ("A- a+ A- a+ - A- k 1 k - K a- K a+", None),
    "1001": ("A- a+ K a- + K a- A+ a- - K k 1 k", "A+ a- K a+ + K a+ A- a+ - K k 1 k"),
    "1000": ("A- a+ K k + K a- A+ k + K k 1 a+", "1 k K a+"),
    "0111": ("A+ a- K k + K a+ A- k + K k 1 a-", "1 k K a-"),
    "0110": ("A+ a- K a+ + K a+ A- a+ - K k 1 k", "A- a+ K a- + K a- A+ a- - K k 1 k"),
    "0101": ("A+ a- A+ a- - A+ k 1 k - K a+ K a-", None),
    "0100": ("A+ a- A+ k + A+ k 1 a+ - K a+ K k", "1 a+ 1 k + 1 k A+ a-"),
    "0011": ("1 k K k", None),
    "0010": ("1 k K a+", "A- a+ K k + K a- A+ k + K k 1 a+"),
    "0001": ("1 a+ 1 k + 1 k A+ a-", "A+ a- A+ k + A+ k 1 a+ - K a+ K k"),
    "0000": ("1 a+ 1 a+ - 1 k A+ k", None),
}


def parse_tensor_terms(text: str, algebras: Sequence[str]) -> list:
    """Parse ``"A- a+ A- k + A- k 1 a- - K a- K k"`` into apply_terms form.

    Each term is one token per slot; ``1`` is the identity.
    """
    tokens = text.split()
    n = len(algebras)
    terms, sign, i = [], 1, 0
    while i < len(tokens):
        if tokens[i] in "+-":
            sign = 1 if tokens[i] == "+" else -1
            i += 1
            continue
        chunk = tokens[i:i + n]
        words = {s: word(algebras[s], t) for s, t in enumerate(chunk) if t != "1"}
        terms.append((Scalar.from_int(sign), words))
        sign = 1
        i += n
    return terms


_QRE_ALGEBRAS = (DOUBLED, SINGLE, DOUBLED, SINGLE)


def _qre_item(args):
    name, idx = args
    xs, ys = QRE_COMPONENTS[name]
    X = parse_tensor_terms(xs, _QRE_ALGEBRAS)
    Y = X if ys is None else parse_tensor_terms(ys, _QRE_ALGEBRAS)
    v = {idx: ONE}
    lhs = apply_terms(X, k3d_apply(v))
    rhs = k3d_apply(apply_terms(Y, v))
    key = _diff(lhs, rhs)
    return None if key is None else f"({name}) on |{idx}>: component {key}"


def check_quantized_re(truncation: int, components: Iterable[str] | None = None,
                       jobs: int | None = None) -> Certificate:
    """The 16 component equations on ``F_{q^2} (x) F_q (x) F_{q^2} (x) F_q``."""
    names = list(QRE_COMPONENTS) if components is None else list(components)
    for nm in names:
        if nm not in QRE_COMPONENTS:
            raise KeyError(f"unknown component {nm!r}")
    items = [(nm, idx) for nm in names for idx in fock_basis(4, truncation)]
    return _run("quantized-re", {"truncation": truncation, "components": names}, _qre_item,
                items, jobs)


def _full_item(args):
    bits, idx = args
    # slots: 0, 1 = V1, V2; 2..5 = Fock spaces 3..6
    v = {bits + idx: ONE}
    # L_123 K_24 L_215 K_16 𝒦_3456
    lhs = k3d_apply(v, slots=(2, 3, 4, 5))
    lhs = apply_K(lhs, 0, 5)
    lhs = apply_L(lhs, 1, 0, 4)
    lhs = apply_K(lhs, 1, 3)
    lhs = apply_L(lhs, 0, 1, 2)
    # 𝒦_3456 K_16 L_125 K_24 L_213
    rhs = apply_L(v, 1, 0, 2)
    rhs = apply_K(rhs, 1, 3)
    rhs = apply_L(rhs, 0, 1, 4)
    rhs = apply_K(rhs, 0, 5)
    rhs = k3d_apply(rhs, slots=(2, 3, 4, 5))
    key = _diff(lhs, rhs)
    return None if key is None else f"bits {bits}, |{idx}>: component {key}"


def check_quantized_re_full(truncation: int, jobs: int | None = None) -> Certificate:
    """The uncomponentized form ``L K L K 𝒦 = 𝒦 K L K L`` on ``V (x) V (x) Fock^4``."""
    items = [(bits, idx) for bits in itertools.product((0, 1), repeat=2)
             for idx in fock_basis(4, truncation)]
    return _run("quantized-re-LKLK", {"truncation": truncation}, _full_item, items, jobs)


# ---------------------------------------------------------------- RLLL


def _rlll_item(args):
    bits, idx = args
    v = {bits + idx: ONE}
    # L_124 L_135 L_236 R_456 on V^3 (x) F_{q^2}^3
    lhs = r3d_apply(v, doubled=True, slots=(3, 4, 5))
    lhs = apply_L(lhs, 1, 2, 5)
    lhs = apply_L(lhs, 0, 2, 4)
    lhs = apply_L(lhs, 0, 1, 3)
    rhs = apply_L(v, 0, 1, 3)
    rhs = apply_L(rhs, 0, 2, 4)
    rhs = apply_L(rhs, 1, 2, 5)
    rhs = r3d_apply(rhs, doubled=True, slots=(3, 4, 5))
    key = _diff(lhs, rhs)
    return None if key is None else f"bits {bits}, |{idx}>: component {key}"


def check_rlll(truncation: int, jobs: int | None = None) -> Certificate:
    """``L_124 L_135 L_236 R_456 = R_456 L_236 L_135 L_124`` for all 64 V-components."""
    items = [(bits, idx) for bits in itertools.product((0, 1), repeat=3)
             for idx in fock_basis(3, truncation)]
    return _run("rlll", {"truncation": truncation}, _rlll_item, items, jobs)


# ---------------------------------------------------------------- relations characterizing R


def _r_relations() -> dict:
    rel = {}
    for sg, op in (("+", "-"), ("-", "+")):
        rel[f"a{sg} k 1"] = (f"a{sg} k 1", f"a{sg} 1 k + k a{sg} a{op}")
        rel[f"1 k a{sg}"] = (f"1 k a{sg}", f"k 1 a{sg} + a{op} a{sg} k")
        rel[f"1 a{sg} 1"] = (f"1 a{sg} 1", f"a{sg} 1 a{sg} - k a{sg} k")
    rel["a+ a- a+"] = ("a+ a- a+ - k 1 k", "a- a+ a- - k 1 k")
    rel["k k 1"] = ("k k 1", "k k 1")
    rel["1 k k"] = ("1 k k", "1 k k")
    return rel


R_RELATIONS = _r_relations()
_S3 = (SINGLE, SINGLE, SINGLE)


def _r_relations_item(args):
    name, idx = args
    xs, ys = R_RELATIONS[name]
    X = parse_tensor_terms(xs, _S3)
    Y = parse_tensor_terms(ys, _S3)
    v = {idx: ONE}
    lhs = r3d_apply(apply_terms(X, v))
    rhs = apply_terms(Y, r3d_apply(v))
    key = _diff(lhs, rhs)
    return None if key is None else f"[{name}] on |{idx}>: component {key}"


def check_r_relations(truncation: int, jobs: int | None = None) -> Certificate:
    """The nine relations ``R X = Y R`` on ``F_q^{(x)3}``."""
    items = [(nm, idx) for nm in R_RELATIONS for idx in fock_basis(3, truncation)]
    return _run("r-relations", {"truncation": truncation}, _r_relations_item, items, jobs)


# ---------------------------------------------------------------- inversion


def _inv_item(args):
    kind, idx = args
    v = {idx: ONE}
    w = r3d_apply(r3d_apply(v)) if kind == "R" else k3d_apply(k3d_apply(v))
    key = _diff(w, v)
    return None if key is None else f"{kind}^2 on |{idx}>: component {key}"


def check_inversion(kind: str, truncation: int, l_max: int | None = None,
                    jobs: int | None = None) -> Certificate:
    """``R^2 = 1`` on ``i+j+k <= N``; ``K^2 = 1`` on ``i+j+k <= N, l <= l_max``."""
    if kind == "R":
        items = [("R", idx) for idx in fock_basis(3, truncation)]
    elif kind == "K":
        lm = truncation + 1 if l_max is None else l_max
        items = [("K", idx + (l,)) for idx in fock_basis(3, truncation) for l in range(lm + 1)]
    else:
        raise ValueError("kind must be 'R' or 'K'")
    return _run(f"inversion-{kind}", {"truncation": truncation, "l_max": l_max}, _inv_item,
                items, jobs)


# ---------------------------------------------------------------- boundary eigenrelations


def _ket_coeff(step: int, s: int, n: int) -> Scalar:
    """Coefficient of ``|n>`` in ``|eta_s>`` (step 1) or ``|chi_s>`` (step 2)."""
    if n % s:
        return ZERO
    e = step * s * s
    return qpoch_finite(monomial(q=e), e, n // s).inverse()


def _bra_coeff(step: int, s: int, n: int) -> Scalar:
    """``<eta_s|n>`` or ``<chi_s|n>``, including the norm ``<n|n>``."""
    c = _ket_coeff(step, s, n)
    if c.is_zero():
        return c
    return c * qpoch_finite(monomial(q=2 * step), 2 * step, n)


def _boundary_item(args):
    kind, s, k, side, out = args
    if kind == "R":
        steps, labels = (2, 2, 2), (s, s, s)
        elem = lambda o, i: r3d_element(*o, *i, True)
        count = 3
    else:
        steps, labels = (2, 1, 2, 1), (s, k, s, k)
        elem = lambda o, i: k3d_element(*o, *i)
        count = 4
    coeff = _ket_coeff if side == "ket" else _bra_coeff

    def vec(idx):
        c = ONE
        for st, lb, n in zip(steps, labels, idx):
            c = c * coeff(st, lb, n)
            if c.is_zero():
                return c
        return c

    total = ZERO
    for other in _preimages(kind, out):
        e = elem(out, other) if side == "ket" else elem(other, out)
        if e.is_zero():
            continue
        v = vec(other)
        if not v.is_zero():
            total = total + e * v
    if total != vec(out):
        return f"{kind} s={s} k={k} {side}: component {out}"
    return None


def _preimages(kind: str, idx):
    """Index tuples linked to ``idx`` by the conservation laws (a symmetric relation)."""
    if kind == "R":
        i, j, k = idx
        for b in range(0, min(i + j, j + k) + 1):
            yield (i + j - b, b, j + k - b)
    else:
        i, j, k, l = idx
        s1, s2 = i + j + k, j + 2 * k + l
        for c in range(0, min(s1, s2 // 2) + 1):
            for b in range(0, min(s1 - c, s2 - 2 * c) + 1):
                yield (s1 - b - c, b, c, s2 - b - 2 * c)


def check_boundary_eigen(kind: str, s: int, k: int | None = None, truncation: int = 8,
                         sides: Sequence[str] = ("ket", "bra"), jobs: int | None = None) -> Certificate:
    """Boundary vectors as eigenvectors of the 3D R (``kind="R"``) or 3D K (``kind="K"``).

    ``R``: ``R (chi_s)^{(x)3} = (chi_s)^{(x)3}`` and the bra version.
    ``K``: ``K (chi_s (x) eta_k (x) chi_s (x) eta_k)`` likewise, ``1 <= s <= k <= 2``.
    Checked on every component of total degree at most ``truncation``.
    """
    if kind == "R":
        if s not in (1, 2):
            raise ValueError("s must be 1 or 2")
        n = 3
        note = None
    elif kind == "K":
        if k is None or not 1 <= s <= k <= 2:
            raise ValueError("the K eigenrelation needs 1 <= s <= k <= 2")
        n = 4
        note = "certified on a truncated domain only; the general statement is conjectural"
    else:
        raise ValueError("kind must be 'R' or 'K'")
    items = [(kind, s, k, side, idx) for side in sides for idx in fock_basis(n, truncation)]
    return _run(f"boundary-eigen-{kind}", {"s": s, "k": k, "truncation": truncation,
                                     "sides": list(sides)}, _boundary_item, items, jobs, note)


# ---------------------------------------------------------------- spot checks


def _component(state: Mapping, out) -> Scalar:
    return state.get(tuple(out), ZERO)


def check_tetra_spot(inp: Sequence[int], out: Sequence[int] | None = None,
                     doubled: bool = True) -> Certificate:
    """``R_124 R_135 R_236 R_456 = R_456 R_236 R_135 R_124`` applied to ``|inp>``.

    With ``out`` given only that component is compared, otherwise the full image.
    """
    t0 = time.perf_counter()
    v = {tuple(inp): ONE}
    lhs = r3d_apply(v, doubled, slots=(3, 4, 5))
    for sl in ((1, 2, 5), (0, 2, 4), (0, 1, 3)):
        lhs = r3d_apply(lhs, doubled, slots=sl)
    rhs = v
    for sl in ((0, 1, 3), (0, 2, 4), (1, 2, 5), (3, 4, 5)):
        rhs = r3d_apply(rhs, doubled, slots=sl)
    return _spot("tetrahedron", inp, out, lhs, rhs, t0)


def _spot(name, inp, out, lhs, rhs, t0):
    if out is not None:
        a, b = _component(lhs, out), _component(rhs, out)
        ok = a == b
        witness = None if ok else f"component {tuple(out)}: {a} != {b}"
        ncomp = 1
    else:
        key = _diff(lhs, rhs)
        ok = key is None
        witness = None if ok else f"component {key}"
        ncomp = len(set(lhs) | set(rhs))
    return Certificate(name, {"in": list(inp), "out": None if out is None else list(out)},
                       "pass" if ok else "fail", witness, time.perf_counter() - t0, ncomp,
                       0 if ok else 1)


def check_3dre_spot(inp: Sequence[int], out: Sequence[int] | None = None) -> Certificate:
    """The 3D reflection equation on nine Fock spaces applied to ``|inp>``.

    Spaces 1, 3, 7 are ``F_{q^2}``, the rest ``F_q`` (slots are 0-based here).
    """
    t0 = time.perf_counter()
    v = {tuple(inp): ONE}

    def R(st, a, b, c):
        return r3d_apply(st, False, slots=(a - 1, b - 1, c - 1))

    def K(st, a, b, c, d):
        return k3d_apply(st, slots=(a - 1, b - 1, c - 1, d - 1))

    # R456 R489 K3579 R269 R258 K1678 K1234
    lhs = K(v, 1, 2, 3, 4)
    lhs = K(lhs, 1, 6, 7, 8)
    lhs = R(lhs, 2, 5, 8)
    lhs = R(lhs, 2, 6, 9)
    lhs = K(lhs, 3, 5, 7, 9)
    lhs = R(lhs, 4, 8, 9)
    lhs = R(lhs, 4, 5, 6)
    # K1234 K1678 R258 R269 K3579 R489 R456
    rhs = R(v, 4, 5, 6)
    rhs = R(rhs, 4, 8, 9)
    rhs = K(rhs, 3, 5, 7, 9)
    rhs = R(rhs, 2, 6, 9)
    rhs = R(rhs, 2, 5, 8)
    rhs = K(rhs, 1, 6, 7, 8)
    rhs = K(rhs, 1, 2, 3, 4)
    return _spot("3d-reflection", inp, out, lhs, rhs, t0)


# ---------------------------------------------------------------- 2D equations

_X = monomial(x=1)
_Y = monomial(y=1)
_PREPARED: dict = {}


def _s_matrix(family: str, n: int, s: int | None, sp: int | None) -> QMatrix:
    if family == "tr":
        return build_s_trace(n)
    return build_s_boundary(n, s, sp)


def _k_matrix(family: str, n: int, k: int | None, kp: int | None) -> QMatrix:
    if family == "tr":
        return build_k_trace(n)
    return build_k_boundary(n, k, kp)


def admissible(s_family: str, k_family: str, s=None, sp=None, k=None, kp=None) -> bool:
    """Pairings of S and K that solve the reflection equation together."""
    if s_family == "tr" or k_family == "tr":
        return s_family == k_family == "tr"
    return s <= k and sp <= kp


def _ybe_item(col):
    S12x, S13xy, S23y, n = (_PREPARED[k] for k in ("S12x", "S13xy", "S23y", "n"))
    v = {col: ONE}
    lhs = S12x.apply(S13xy.apply(S23y.apply(v, (1, 2)), (0, 2)), (0, 1))
    rhs = S23y.apply(S13xy.apply(S12x.apply(v, (0, 1)), (0, 2)), (1, 2))
    key = _diff(lhs, rhs)
    return None if key is None else f"input {_fmt(col, n)}: component {_fmt(key, n)}"


def _fmt(bits, n):
    s = "".join(map(str, bits))
    return ",".join(s[i:i + n] for i in range(0, len(s), n))


def check_ybe(family: str, n: int, s: int | None = None, sp: int | None = None,
              S: QMatrix | None = None, jobs: int | None = None) -> Certificate:
    """``S_12(x) S_13(xy) S_23(y) = S_23(y) S_13(xy) S_12(x)`` on ``V^{(x) 3}``.

    ``family`` is ``"tr"`` (all weight blocks at once) or ``"boundary"`` with
    ``(s, s')``.  A prebuilt ``S`` (for instance a perturbed one) overrides
    the construction.
    """
    S = _s_matrix(family, n, s, sp) if S is None else S
    _PREPARED.clear()
    _PREPARED.update(S12x=S.at(_X), S13xy=S.at(_X * _Y), S23y=S.at(_Y), n=n)
    items = [tuple(itertools.chain(a, b, c)) for a in _bits(n) for b in _bits(n) for c in _bits(n)]
    params = {"family": family, "n": n}
    if family != "tr":
        params.update(s=s, sp=sp)
    return _run("ybe", params, _ybe_item, items, jobs)


def _bits(n):
    return list(itertools.product((0, 1), repeat=n))


def _re_item(col):
    P = _PREPARED
    v = {col: ONE}
    # S_12(x/y) K_2(x) S_21(xy) K_1(y)
    lhs = P["K"](v, 0, "y")
    lhs = P["S_xy"].apply(lhs, (1, 0))
    lhs = P["K"](lhs, 1, "x")
    lhs = P["S_xdy"].apply(lhs, (0, 1))
    # K_1(y) S_12(xy) K_2(x) S_21(x/y)
    rhs = P["S_xdy"].apply(v, (1, 0))
    rhs = P["K"](rhs, 1, "x")
    rhs = P["S_xy"].apply(rhs, (0, 1))
    rhs = P["K"](rhs, 0, "y")
    key = _diff(lhs, rhs)
    n = P["n"]
    return None if key is None else f"input {_fmt(col, n)}: component {_fmt(key, n)}"


def check_re(s_family: str, k_family: str, n: int, s=None, sp=None, k=None, kp=None,
             S: QMatrix | None = None, K: QMatrix | None = None, jobs: int | None = None,
             x=None, y=None) -> Certificate:
    """``S_12(x/y) K_2(x) S_21(xy) K_1(y) = K_1(y) S_12(xy) K_2(x) S_21(x/y)``.

    ``S_21 = P S_12 P``.  Admissible pairings are ``(tr, tr)`` and boundary
    families with ``s <= k`` and ``s' <= k'``; anything else raises
    :class:`InadmissiblePair`.  ``x`` and ``y`` default to free variables.
    """
    if not admissible(s_family, k_family, s, sp, k, kp):
        raise InadmissiblePair(f"S={s_family}{(s, sp)} with K={k_family}{(k, kp)} is not a solution pair")
    S = _s_matrix(s_family, n, s, sp) if S is None else S
    K = _k_matrix(k_family, n, k, kp) if K is None else K
    xm = _X if x is None else x
    ym = _Y if y is None else y
    Ks = {"x": K.at(xm), "y": K.at(ym)}
    _PREPARED.clear()
    _PREPARED.update(S_xy=S.at(xm * ym), S_xdy=S.at(xm / ym), n=n,
                     K=lambda st, slot, which: Ks[which].apply(st, (slot,)))
    items = [a + b for a in _bits(n) for b in _bits(n)]
    params = {"s_family": s_family, "k_family": k_family, "n": n}
    if s_family != "tr":
        params.update(s=s, sp=sp, k=k, kp=kp)
    return _run("reflection", params, _re_item, items, jobs)
