"""Brute-force truncated Fock sums used as an independent check.

Nothing here touches the normal-ordering code, the closed forms or the flint
backend.  Scalars are truncated Laurent series in ``s = q^(1/2)`` stored as
``{exponent: Fraction}``; the spectral parameter is a rational sample.

A sum over Fock levels is only a truncation in ``q`` when the word carries at
least one ``k`` letter, since then level ``m`` contributes at ``q``-order
growing like ``m``.  Both oracles insist on this.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .qboson import OperatorWord
from .scalar import Scalar, series_oracle

__all__ = ["trace_oracle", "boundary_oracle", "exact_series", "agree"]


def _mul(a: dict, b: dict, cap: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            e = i + j
            if e <= cap:
                out[e] = out.get(e, 0) + x * y
    return {e: c for e, c in out.items() if c}


def _inv_one_minus(e: int, cap: int) -> dict:
    """``1/(1 - s^e)`` for ``e > 0``."""
    return {k * e: Fraction(1) for k in range(cap // e + 1)}


def _mono_value(m, z0: Fraction) -> dict:
    """A MonomialArg evaluated at ``z = z0`` (and no other free variables)."""
    if m.coeff.imag:
        raise ValueError("oracle supports real coefficients only")
    if any(m.exps[2:]):
        raise ValueError("oracle supports monomials in q and z only")
    return {m.exps[0]: m.coeff.real * Fraction(z0) ** m.exps[1]}


def _scale_series(scale: Scalar, cap: int) -> dict:
    # the word's scale is a Laurent monomial or small polynomial in q
    coeffs = series_oracle(scale, "q", cap, start=-cap, half=True)
    return {e - cap: Fraction(c) for e, c in enumerate(coeffs) if c}


def _apply(word: OperatorWord, level: int, z0, cap: int):
    """Apply the letters right to left on ``|level>``; returns (level, series)."""
    g = word.step
    ser = {0: Fraction(1)}
    m = level
    for letter in reversed(word.letters):
        sp = letter.species
        if sp == "raise":
            m += 1
        elif sp == "lower":
            if m == 0:
                return None, {}
            ser = _mul(ser, {0: Fraction(1), 4 * g * m: Fraction(-1)}, cap)
            m -= 1
        elif sp == "kdiag":
            ser = _mul(ser, {g * (2 * m + 1): Fraction(1)}, cap)
        else:
            v = _mono_value(letter.base, z0)
            (e, c), = v.items()
            ser = _mul(ser, {e * m: c**m}, cap)
    return m, ser


def _levels(word: OperatorWord, cap: int) -> int:
    if word.count("kdiag") == 0:
        raise ValueError("the q-adic oracle needs a word containing k")
    return cap // 2 + len(word.letters) + 2


def trace_oracle(word: OperatorWord, z0, degree: int) -> dict:
    """``sum_m z0^m <m|w|m>/<m|m>`` as a series in ``s`` up to ``2*degree``."""
    cap = 2 * degree + 8
    total: dict = {}
    z0 = Fraction(z0)
    for m in range(_levels(word, cap) + 1):
        out, ser = _apply(word, m, z0, cap)
        if out != m:
            continue
        for e, c in ser.items():
            total[e] = total.get(e, 0) + c * z0**m
    total = _mul(total, _scale_series(word.scale, cap), cap)
    return {e: c for e, c in total.items() if e <= 2 * degree and c}


def _poch_inverse(e: int, m: int, cap: int) -> dict:
    """``1/(s^e; s^e)_m``."""
    out = {0: Fraction(1)}
    for i in range(1, m + 1):
        out = _mul(out, _inv_one_minus(e * i, cap), cap)
    return out


def _poch(e: int, m: int, cap: int) -> dict:
    out = {0: Fraction(1)}
    for i in range(1, m + 1):
        out = _mul(out, {0: Fraction(1), e * i: Fraction(-1)}, cap)
    return out


def boundary_oracle(word: OperatorWord, k: int, kp: int, z0, degree: int) -> dict:
    """``<eta_k| z0^h w |eta_kp>`` by summing over truncated boundary vectors."""
    g = word.step
    cap = 2 * degree + 8
    z0 = Fraction(z0)
    total: dict = {}
    for mp in range(_levels(word, cap) // kp + 1):
        level = kp * mp
        out, ser = _apply(word, level, z0, cap)
        if out is None or out % k:
            continue
        ket = _poch_inverse(2 * g * kp * kp, mp, cap)
        # <eta_k|out> = (b^2; b^2)_out / (b^{k^2}; b^{k^2})_{out/k}
        bra = _mul(_poch(4 * g, out, cap), _poch_inverse(2 * g * k * k, out // k, cap), cap)
        term = _mul(_mul(ser, ket, cap), bra, cap)
        for e, c in term.items():
            total[e] = total.get(e, 0) + c * z0**out
    total = _mul(total, _scale_series(word.scale, cap), cap)
    return {e: c for e, c in total.items() if e <= 2 * degree and c}


def exact_series(value: Scalar, z0, degree: int, start: int = -8) -> dict:
    """Series of an exact scalar in ``s = q^(1/2)`` at ``z = z0``."""
    lo = 2 * start
    coeffs = series_oracle(value, "q", 2 * degree, {"z": Fraction(z0)}, start=lo, half=True)
    return {lo + i: Fraction(c) for i, c in enumerate(coeffs) if c}


def agree(value: Scalar, oracle: Mapping[int, Fraction], z0, degree: int) -> bool:
    return exact_series(value, z0, degree) == dict(oracle)
