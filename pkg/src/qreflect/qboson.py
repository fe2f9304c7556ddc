"""q-boson algebras, normal ordering, traces and boundary-vector matrix elements.

Two algebras are supported.  The *single* algebra acts on ``F_q`` with base
``b = q``; the *doubled* algebra acts on ``F_{q^2}`` with ``b = q^2``.  All
formulas are written once in terms of ``b``:

    a+ |m> = |m+1>,   a- |m> = (1 - b^{2m}) |m-1>,   k |m> = b^{m+1/2} |m>,

and ``<m|m> = (b^2; b^2)_m``.  In the doubled algebra these are ``A+``, ``A-``
and ``K``.

Normal-ordered terms are ``(a+)^r (a-)^s u^h`` with ``u`` a monomial.  The
rewriting rules used by :func:`normal_order` (right multiplication by one
letter) are

    (r,s,u) . a+   = u (r+1,s,u) + u (1 - b^{2s}) b^{2-2s} (r,s-1,b^2 u)
    (r,s,u) . a-   = u^{-1} (r,s+1,u)
    (r,s,u) . k    = b^{1/2} (r,s,b u)
    (r,s,u) . v^h  = (r,s,u v)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .scalar import (
    ONE,
    ZERO,
    GaussianRational,
    MonomialArg,
    Scalar,
    monomial,
    qbinomial,
    qpoch_finite,
    qpoch_inf,
)

__all__ = [
    "SINGLE",
    "DOUBLED",
    "AlgebraMismatch",
    "NonTermination",
    "Generator",
    "RAISE",
    "LOWER",
    "KDIAG",
    "hpower",
    "OperatorWord",
    "word",
    "NormalForm",
    "TruncatedState",
    "normal_order",
    "apply_truncated",
    "level_action",
    "apply_normal_form",
    "trace_eval",
    "boundary_eval",
    "boundary_vector",
    "basis_norm",
]

SINGLE = "single"
DOUBLED = "doubled"
_STEP = {SINGLE: 1, DOUBLED: 2}


class AlgebraMismatch(ValueError):
    pass


class NonTermination(RuntimeError):
    pass


@dataclass(frozen=True)
class Generator:
    species: str  # raise | lower | kdiag | hpower
    base: MonomialArg | None = None

    def __str__(self):
        if self.species == "hpower":
            return f"({self.base})^h"
        return {"raise": "a+", "lower": "a-", "kdiag": "k"}[self.species]


RAISE = Generator("raise")
LOWER = Generator("lower")
KDIAG = Generator("kdiag")


def hpower(base: MonomialArg) -> Generator:
    return Generator("hpower", base)


_UNIT = monomial(1)


@dataclass(frozen=True)
class OperatorWord:
    algebra: str
    letters: tuple = ()
    scale: Scalar = ONE

    def __post_init__(self):
        if self.algebra not in _STEP:
            raise ValueError(f"unknown algebra {self.algebra!r}")

    @property
    def step(self) -> int:
        return _STEP[self.algebra]

    def is_zero(self) -> bool:
        return self.scale.is_zero()

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        if not isinstance(other, OperatorWord):
            return OperatorWord(self.algebra, self.letters, self.scale * other)
        if other.algebra != self.algebra:
            raise AlgebraMismatch("cannot concatenate words of different algebras")
        return OperatorWord(self.algebra, self.letters + other.letters, self.scale * other.scale)

    def __rmul__(self, c) -> "OperatorWord":
        return OperatorWord(self.algebra, self.letters, self.scale * c)

    def __neg__(self) -> "OperatorWord":
        return OperatorWord(self.algebra, self.letters, -self.scale)

    def reverse_bar(self) -> "OperatorWord":
        """Reverse the word and swap raising and lowering letters."""
        swap = {"raise": LOWER, "lower": RAISE}
        return OperatorWord(
            self.algebra,
            tuple(swap.get(g.species, g) for g in reversed(self.letters)),
            self.scale,
        )

    def count(self, species: str) -> int:
        return sum(1 for g in self.letters if g.species == species)

    def __str__(self):
        body = " ".join(str(g) for g in self.letters) or "1"
        return body if self.scale == ONE else f"({self.scale}) {body}"


def word(algebra: str, spec: str = "", scale=ONE) -> OperatorWord:
    """Build a word from a space separated string of ``a+ a- k``."""
    table = {"a+": RAISE, "a-": LOWER, "k": KDIAG, "A+": RAISE, "A-": LOWER, "K": KDIAG}
    letters = tuple(table[t] for t in spec.split())
    return OperatorWord(algebra, letters, Scalar.coerce(scale))


# ---------------------------------------------------------------- normal form


@dataclass
class NormalForm:
    algebra: str
    terms: dict = field(default_factory=dict)  # (r, s, hbase) -> Scalar

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))

    def __eq__(self, other):
        return (
            isinstance(other, NormalForm)
            and self.algebra == other.algebra
            and self.terms == other.terms
        )


def _add(d: dict, key, c: Scalar):
    v = d.get(key)
    v = c if v is None else v + c
    if v.is_zero():
        d.pop(key, None)
    else:
        d[key] = v


@lru_cache(maxsize=None)
def _b(step: int, mult=1) -> MonomialArg:
    """``b^mult`` as a monomial (``mult`` may be a half integer)."""
    return monomial(q=Fraction(step) * mult)


@lru_cache(maxsize=None)
def _mono(m: MonomialArg) -> Scalar:
    return Scalar.from_monomial(m)


@lru_cache(maxsize=None)
def _commutator_coeff(step: int, s: int) -> Scalar:
    # (1 - b^{2s}) b^{2-2s}
    return (ONE - _mono(_b(step, 2 * s))) * _mono(_b(step, 2 - 2 * s))


def normal_order(w: OperatorWord) -> NormalForm:
    g = w.step
    terms = {(0, 0, _UNIT): w.scale} if not w.scale.is_zero() else {}
    for letter in w.letters:
        new: dict = {}
        for (r, s, u), c in terms.items():
            sp = letter.species
            if sp == "raise":
                cu = c * _mono(u)
                _add(new, (r + 1, s, u), cu)
                if s > 0:
                    _add(new, (r, s - 1, u * _b(g, 2)), cu * _commutator_coeff(g, s))
            elif sp == "lower":
                _add(new, (r, s + 1, u), c / _mono(u))
            elif sp == "kdiag":
                _add(new, (r, s, u * _b(g)), c * _mono(_b(g, Fraction(1, 2))))
            elif sp == "hpower":
                _add(new, (r, s, u * letter.base), c)
            else:
                raise ValueError(f"unknown generator {sp}")
        terms = new
    return NormalForm(w.algebra, terms)


# ---------------------------------------------------------------- Fock states


@dataclass
class TruncatedState:
    algebra: str
    amps: dict = field(default_factory=dict)  # level -> Scalar

    @staticmethod
    def basis(algebra: str, m: int) -> "TruncatedState":
        return TruncatedState(algebra, {m: ONE})

    def __add__(self, o: "TruncatedState") -> "TruncatedState":
        if o.algebra != self.algebra:
            raise AlgebraMismatch("different algebras")
        d = dict(self.amps)
        for m, c in o.amps.items():
            _add(d, m, c)
        return TruncatedState(self.algebra, d)

    def scaled(self, c) -> "TruncatedState":
        c = Scalar.coerce(c)
        if c.is_zero():
            return TruncatedState(self.algebra, {})
        return TruncatedState(self.algebra, {m: v * c for m, v in self.amps.items()})

    def __eq__(self, o):
        return isinstance(o, TruncatedState) and o.algebra == self.algebra and o.amps == self.amps

    def inner(self, ket: "TruncatedState") -> Scalar:
        """Bilinear pairing ``<self|ket>`` with ``<m|m> = (b^2; b^2)_m``."""
        step = _STEP[self.algebra]
        total = ZERO
        for m, c in self.amps.items():
            d = ket.amps.get(m)
            if d is not None:
                total = total + c * d * basis_norm(self.algebra, m)
        return total


@lru_cache(maxsize=None)
def basis_norm(algebra: str, m: int) -> Scalar:
    g = _STEP[algebra]
    return qpoch_finite(monomial(q=2 * g), 2 * g, m)


@lru_cache(maxsize=None)
def _lower_coeff(step: int, m: int) -> Scalar:
    return ONE - _mono(_b(step, 2 * m))


@lru_cache(maxsize=None)
def _k_coeff(step: int, m: int) -> Scalar:
    return _mono(_b(step, Fraction(2 * m + 1, 2)))


def _letter_on_basis(letter: Generator, step: int, m: int):
    sp = letter.species
    if sp == "raise":
        return m + 1, ONE
    if sp == "lower":
        return (m - 1, _lower_coeff(step, m)) if m > 0 else (None, ZERO)
    if sp == "kdiag":
        return m, _k_coeff(step, m)
    return m, _mono(letter.base**m)


def apply_truncated(w: OperatorWord, v: TruncatedState) -> TruncatedState:
    if w.algebra != v.algebra:
        raise AlgebraMismatch("word and state live in different algebras")
    g = w.step
    amps = dict(v.amps)
    for letter in reversed(w.letters):
        new: dict = {}
        for m, c in amps.items():
            m2, f = _letter_on_basis(letter, g, m)
            if m2 is not None:
                _add(new, m2, c * f)
        amps = new
    return TruncatedState(v.algebra, amps).scaled(w.scale)


def level_action(w: OperatorWord, m: int):
    """``w |m> = c |m'>``; returns ``(m', c)`` or ``(None, 0)`` if it vanishes."""
    g = w.step
    c = w.scale
    for letter in reversed(w.letters):
        m, f = _letter_on_basis(letter, g, m)
        if m is None:
            return None, ZERO
        c = c * f
    return m, c


def apply_normal_form(nf: NormalForm, v: TruncatedState) -> TruncatedState:
    if nf.algebra != v.algebra:
        raise AlgebraMismatch("normal form and state live in different algebras")
    g = _STEP[nf.algebra]
    out: dict = {}
    for (r, s, u), c in nf.terms.items():
        for m, a in v.amps.items():
            if m < s:
                continue
            f = c * a * _mono(u**m)
            for i in range(s):
                f = f * _lower_coeff(g, m - i)
            _add(out, m - s + r, f)
    return TruncatedState(nf.algebra, out)


# ---------------------------------------------------------------- traces


def trace_eval(w: OperatorWord, zvar: MonomialArg) -> Scalar:
    """``Tr(z^h w) = sum_m <m|z^h w|m> / <m|m>`` in closed form.

    Only balanced terms ``(a+)^s (a-)^s u^h`` survive, and

        Tr(Z^h (a+)^s (a-)^s) = Z^s (b^2; b^2)_s / (Z; b^2)_{s+1},   Z = z u.
    """
    g = w.step
    total = ZERO
    for (r, s, u), c in normal_order(w).items():
        if r != s:
            continue
        Z = zvar * u
        val = _mono(Z**s) * qpoch_finite(_b(g, 2), 2 * g, s) / qpoch_finite(Z, 2 * g, s + 1)
        total = total + c * val
    return total


# ---------------------------------------------------------------- boundary vectors


def boundary_vector(kind: str, s: int, truncation: int) -> TruncatedState:
    """``eta_s`` (single algebra) or ``chi_s`` (doubled) truncated at level N."""
    if kind in ("eta", "η"):
        algebra, step = SINGLE, s * s
    elif kind in ("chi", "χ"):
        algebra, step = DOUBLED, 2 * s * s
    else:
        raise ValueError(f"unknown boundary vector {kind!r}")
    amps = {}
    for m in range(truncation // s + 1):
        amps[s * m] = qpoch_finite(monomial(q=step), step, m).inverse()
    return TruncatedState(algebra, amps)


_MAX_DEPTH = 10_000


def _ratio(g: int, Z2: MonomialArg, i: int) -> Scalar:
    # (-b^{2i+1} Z^2; b^2)_inf / (b^{2i} Z^2; b^2)_inf
    num = qpoch_inf(Z2.scaled(-1).with_q(g * (2 * i + 1)), 2 * g, 1)
    den = qpoch_inf(Z2.with_q(g * 2 * i), 2 * g, -1)
    return num * den


@lru_cache(maxsize=None)
def _pure_raise(k: int, kp: int, g: int, Z: MonomialArg, j: int) -> Scalar:
    """``<eta_k| Z^h (a+)^j |eta_kp>`` in base ``b = q^g``."""
    Zs = _mono(Z)
    if (k, kp) == (1, 1):
        return (
            Zs**j
            * qpoch_finite(monomial(-1, q=g), g, j)
            * qpoch_inf(Z.scaled(-1).with_q(g * (j + 1)), g, 1)
            * qpoch_inf(Z, g, -1)
        )
    if (k, kp) == (2, 2):
        if j % 2:
            return ZERO
        return (
            Zs**j
            * qpoch_finite(_b(g, 2), 4 * g, j // 2)
            * qpoch_inf((Z**2).with_q(g * (2 * j + 2)), 4 * g, 1)
            * qpoch_inf(Z**2, 4 * g, -1)
        )
    Z2 = Z**2
    total = ZERO
    for i in range(j + 1):
        if (k, kp) == (1, 2):
            pref = _mono(_b(g, Fraction(i * (i + 1), 2)))
        else:
            pref = _mono(_b(g, Fraction(i * (i + 1 - 2 * j), 2))) * (-1) ** i
        total = total + pref * qbinomial(j, i, g) * _ratio(g, Z2, i)
    return total * Zs**j if (k, kp) == (1, 2) else total


@lru_cache(maxsize=None)
def _boundary_term(k: int, kp: int, g: int, Z: MonomialArg, r: int, s: int, depth: int = 0) -> Scalar:
    """``<eta_k| Z^h (a+)^r (a-)^s |eta_kp>``.

    The lowering letter next to the ket is eliminated first.  Each step lowers
    ``s`` by at least one, so the recursion depth is at most ``s``.
    """
    if depth > _MAX_DEPTH:
        raise NonTermination("boundary elimination exceeded its depth bound")
    if s == 0:
        return _pure_raise(k, kp, g, Z, r)
    if kp == 1:
        # a- |eta_1> = (1 + b^{1/2} k) |eta_1>
        return _boundary_term(k, kp, g, Z, r, s - 1, depth + 1) + _mono(
            _b(g, s - r)
        ) * _boundary_term(k, kp, g, Z * _b(g), r, s - 1, depth + 1)
    # a- |eta_2> = a+ |eta_2>
    out = _boundary_term(k, kp, g, Z, r + 1, s - 1, depth + 1)
    t = s - 1
    if t >= 1:
        coeff = (ONE - _mono(_b(g, 2 * t))) * _mono(_b(g, -2 * r))
        out = out + coeff * _boundary_term(k, kp, g, Z * _b(g, 2), r, t - 1, depth + 1)
    return out


def boundary_eval(w: OperatorWord, k: int, kp: int, zvar: MonomialArg) -> Scalar:
    """``<eta_k| z^h w |eta_kp>`` (doubled algebra: ``<chi_k| ... |chi_kp>``)."""
    if k not in (1, 2) or kp not in (1, 2):
        raise ValueError("boundary indices must be 1 or 2")
    g = w.step
    total = ZERO
    for (r, s, u), c in normal_order(w).items():
        # (a+)^r (a-)^s u^h = u^{s-r} u^h (a+)^r (a-)^s
        total = total + c * _mono(u ** (s - r)) * _boundary_term(k, kp, g, zvar * u, r, s)
    return total
