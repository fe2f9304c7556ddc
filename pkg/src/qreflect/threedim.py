"""3D R and 3D K matrix elements and the local L and K matrices.

``R`` acts on ``F_q^{(x)3}``; its doubled version (``q -> q^2``) acts on
``F_{q^2}^{(x)3}``.  The 3D K acts on ``F_{q^2} (x) F_q (x) F_{q^2} (x) F_q``.
Matrix elements are finite sums and are memoized on their index tuples.
States of tensor products are dictionaries ``{index tuple: Scalar}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .qboson import DOUBLED, SINGLE, OperatorWord, word
from .scalar import ONE, ZERO, Scalar, monomial, qbinomial, qpoch_finite

__all__ = [
    "Element3D",
    "local_L",
    "local_K",
    "multinomial_symbol",
    "r3d_element",
    "k3d_element",
    "r3d_apply",
    "k3d_apply",
    "R3D_OUTPUTS",
]


def local_L(alpha: int, beta: int, gamma: int, delta: int) -> OperatorWord:
    """``L^{gamma delta}_{alpha beta}`` as a word in the doubled algebra."""
    table = {
        (0, 0, 0, 0): word(DOUBLED, ""),
        (1, 1, 1, 1): word(DOUBLED, ""),
        (0, 1, 0, 1): word(DOUBLED, "K"),
        (1, 0, 1, 0): word(DOUBLED, "K", -1),
        (0, 1, 1, 0): word(DOUBLED, "A+"),
        (1, 0, 0, 1): word(DOUBLED, "A-"),
    }
    return table.get((alpha, beta, gamma, delta), word(DOUBLED, "", 0))


def local_K(alpha: int, beta: int) -> OperatorWord:
    """``K^{beta}_{alpha}`` as a word in the single algebra."""
    table = {
        (0, 0): word(SINGLE, "a+"),
        (1, 0): word(SINGLE, "k", -1),
        (0, 1): word(SINGLE, "k"),
        (1, 1): word(SINGLE, "a-"),
    }
    return table[(alpha, beta)]


@lru_cache(maxsize=None)
def _qq(n: int, p: int = 1) -> Scalar:
    """``(q^{2p}; q^{2p})_n``."""
    return qpoch_finite(monomial(q=2 * p), 2 * p, n)


def multinomial_symbol(numerators, denominators, p: int = 1) -> Scalar:
    """``prod (q^2)_{i} / prod (q^2)_{j}``, or 0 if any argument is negative."""
    if any(x < 0 for x in numerators) or any(x < 0 for x in denominators):
        return ZERO
    out = ONE
    for x in numerators:
        out = out * _qq(x, p)
    for x in denominators:
        out = out / _qq(x, p)
    return out


def _qpow(e) -> Scalar:
    return Scalar.from_monomial(monomial(q=e))


@lru_cache(maxsize=None)
def r3d_element(a, b, c, i, j, k, doubled: bool = False) -> Scalar:
    """``R^{abc}_{ijk}``; with ``doubled=True`` the ``q -> q^2`` version."""
    if a + b != i + j or b + c != j + k or min(a, b, c, i, j, k) < 0:
        return ZERO
    p = 2 if doubled else 1
    total = ZERO
    for lam in range(0, min(b, j) + 1):
        mu = b - lam
        if mu > i:
            continue
        e = i * (c - j) + (k + 1) * lam + mu * (mu - k)
        term = (
            _qpow(p * e)
            * qpoch_finite(monomial(q=2 * p * (c + 1)), 2 * p, mu)
            * qbinomial(i, mu, 2 * p)
            * qbinomial(j, lam, 2 * p)
        )
        total = total + (-term if lam % 2 else term)
    return total


@lru_cache(maxsize=None)
def _k_rest(a, b, d, i, j, l) -> Scalar:
    """``K^{a,b,0,d}_{i,j,0,l}``."""
    if min(a, b, d, i, j, l) < 0 or a + b != i + j or b + d != j + l:
        return ZERO
    total = ZERO
    for lam in range(0, min(l, b) + 1):
        sym = multinomial_symbol((j, l), (lam, l - lam, b - lam, j - b + lam))
        if sym.is_zero():
            continue
        e = (i + a + 1) * (b + l - 2 * lam) + b - l
        term = _qq(a + lam, 2) / _qq(a, 2) * _qpow(e) * sym
        total = total + (-term if (b + lam) % 2 else term)
    return total


@lru_cache(maxsize=None)
def k3d_element(a, b, c, d, i, j, k, l) -> Scalar:
    """``K^{abcd}_{ijkl}`` of the 3D K."""
    if min(a, b, c, d, i, j, k, l) < 0:
        return ZERO
    if a + b + c != i + j + k or b + 2 * c + d != j + 2 * k + l:
        return ZERO
    if c == 0 and k == 0:
        return _k_rest(a, b, d, i, j, l)
    total = ZERO
    for al in range(0, min(b, d, k) + 1):
        for be in range(0, min(c, k - al) + 1):
            for ga in range(0, c - be + 1):
                sym = multinomial_symbol(
                    (k, c - be, j + k - al - be, k + l - al - be),
                    (al, be, ga, b - al, d - al, k - al - be, c - be - ga),
                )
                if sym.is_zero():
                    continue
                t = al + be + ga
                inner = _k_rest(i, j + k - t, l + k - t, a, b + c - t, c + d - t)
                if inner.is_zero():
                    continue
                e = (
                    al * (al + 2 * c - 2 * be - 1)
                    + (2 * be - c) * (b + c + d)
                    + ga * (ga - 1)
                    - k * (j + k + l)
                )
                term = _qpow(e) * inner * sym / _qq(c - be, 2)
                total = total + (-term if (al + ga) % 2 else term)
    return total * _qq(i, 2) / _qq(a, 2)


def R3D_OUTPUTS(i, j, k):
    """Output index triples allowed by the conservation laws."""
    for b in range(0, min(i + j, j + k) + 1):
        yield (i + j - b, b, j + k - b)


def _k_outputs(i, j, k, l):
    s1 = i + j + k
    s2 = j + 2 * k + l
    for c in range(0, min(s1, s2 // 2) + 1):
        for b in range(0, min(s1 - c, s2 - 2 * c) + 1):
            yield (s1 - b - c, b, c, s2 - b - 2 * c)


def _add(d: dict, key, v: Scalar):
    cur = d.get(key)
    cur = v if cur is None else cur + v
    if cur.is_zero():
        d.pop(key, None)
    else:
        d[key] = cur


def r3d_apply(state: Mapping[tuple, Scalar], doubled: bool = False, bound: int | None = None,
              slots=(0, 1, 2)) -> dict:
    """Apply R (or its doubled version) to the tensor slots ``slots`` of ``state``."""
    out: dict = {}
    s0, s1, s2 = slots
    for idx, c in state.items():
        i, j, k = idx[s0], idx[s1], idx[s2]
        for abc in R3D_OUTPUTS(i, j, k):
            v = r3d_element(*abc, i, j, k, doubled)
            if v.is_zero():
                continue
            new = list(idx)
            new[s0], new[s1], new[s2] = abc
            new = tuple(new)
            if bound is not None and sum(new) > bound:
                continue
            _add(out, new, c * v)
    return out


def k3d_apply(state: Mapping[tuple, Scalar], bound: int | None = None, slots=(0, 1, 2, 3)) -> dict:
    """Apply the 3D K to the tensor slots ``slots`` of ``state``."""
    out: dict = {}
    for idx, c in state.items():
        ijkl = tuple(idx[s] for s in slots)
        for abcd in _k_outputs(*ijkl):
            v = k3d_element(*abcd, *ijkl)
            if v.is_zero():
                continue
            new = list(idx)
            for s, x in zip(slots, abcd):
                new[s] = x
            new = tuple(new)
            if bound is not None and sum(new) > bound:
                continue
            _add(out, new, c * v)
    return out


@dataclass(frozen=True)
class Element3D:
    kind: str  # "R3D" | "K3D"
    out: tuple
    inp: tuple
    doubled: bool = False

    @property
    def value(self) -> Scalar:
        if self.kind == "R3D":
            return r3d_element(*self.out, *self.inp, self.doubled)
        if self.kind == "K3D":
            return k3d_element(*self.out, *self.inp)
        raise ValueError(f"unknown kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": {"out": list(self.out), "in": list(self.inp)},
                "value": self.value.to_str()}
