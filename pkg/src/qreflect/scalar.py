"""Exact scalars: rational functions over Q(i) times infinite q-Pochhammer symbols.

Variables are ``q, z, x, y, w``.  Half-integer powers of ``q`` are allowed;
internally the polynomial ring uses ``s = q^(1/2)`` so every exponent is an
integer.  A scalar is stored as ``(nr + i*ni) / den`` with ``nr, ni, den``
integer polynomials in ``(s, z, x, y, w)`` and ``den`` real.  The canonical
form has ``gcd(nr, ni, den) = 1`` (including integer content) and a positive
lexicographically leading coefficient in ``den``.

Infinite products ``(u; q^g)_inf`` are kept as formal symbols.  Each symbol is
shift-reduced into a fixed window (the q-exponent of ``u`` lies in ``[0, g)``,
or ``(0, g]`` when ``u`` is a bare power of ``q``), and the finite products
that fall out of the shift are moved into the rational part.  Symbols that
belong to the same shift class therefore always share one representative,
and two scalars are equal exactly when their canonical data agree.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping, Union

import flint

__all__ = [
    "VARS",
    "GaussianRational",
    "MonomialArg",
    "Scalar",
    "IncompatibleSymbols",
    "DivisionByZero",
    "NonMonomialSubstitutionIntoSymbol",
    "PoleAtOrigin",
    "monomial",
    "var",
    "const",
    "qpoch_inf",
    "qpoch_finite",
    "qbinomial",
    "substitute",
    "series_oracle",
    "parse_scalar",
    "ZERO",
    "ONE",
    "I",
]

VARS = ("q", "z", "x", "y", "w")
_NV = len(VARS)
_CTX = flint.fmpz_mpoly_ctx.get(("s", "z", "x", "y", "w"), "lex")
_VIDX = {v: i for i, v in enumerate(VARS)}


class IncompatibleSymbols(ValueError):
    """Addition of scalars whose transcendental parts differ."""


class DivisionByZero(ZeroDivisionError):
    pass


class NonMonomialSubstitutionIntoSymbol(ValueError):
    pass


class PoleAtOrigin(ValueError):
    pass


# ---------------------------------------------------------------- Q(i)


@dataclass(frozen=True, order=True)
class GaussianRational:
    real: Fraction = Fraction(0)
    imag: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "real", Fraction(self.real))
        object.__setattr__(self, "imag", Fraction(self.imag))

    @staticmethod
    def of(v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            return GaussianRational(Fraction(v.real), Fraction(v.imag))
        return GaussianRational(Fraction(v), Fraction(0))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    def norm(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        n = o.norm()
        if n == 0:
            raise DivisionByZero("division by zero in Q(i)")
        p = self * o.conjugate()
        return GaussianRational(p.real / n, p.imag / n)

    def __rtruediv__(self, o):
        return GaussianRational.of(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        r = GaussianRational(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, o):
        try:
            o = GaussianRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def is_real(self) -> bool:
        return self.imag == 0

    def __str__(self):
        if self.imag == 0:
            return str(self.real)
        return f"({self.real}{'+' if self.imag >= 0 else '-'}{abs(self.imag)}i)"


_G1 = GaussianRational(1)


# ---------------------------------------------------------------- monomials


@dataclass(frozen=True, order=True)
class MonomialArg:
    """``coeff * q^(e_q) z^(e_z) ...``; ``exps`` holds the q exponent doubled."""

    coeff: GaussianRational
    exps: tuple

    def __post_init__(self):
        if not self.coeff:
            raise ValueError("monomial coefficient must be nonzero")

    @property
    def q_exp(self) -> Fraction:
        return Fraction(self.exps[0], 2)

    def exponent(self, v: str) -> Fraction:
        i = _VIDX[v]
        return Fraction(self.exps[0], 2) if i == 0 else Fraction(self.exps[i])

    def exps_map(self) -> dict:
        return {v: self.exponent(v) for v in VARS if self.exps[_VIDX[v]]}

    def __mul__(self, o: "MonomialArg") -> "MonomialArg":
        return MonomialArg(self.coeff * o.coeff, tuple(a + b for a, b in zip(self.exps, o.exps)))

    def __truediv__(self, o: "MonomialArg") -> "MonomialArg":
        return MonomialArg(self.coeff / o.coeff, tuple(a - b for a, b in zip(self.exps, o.exps)))

    def __pow__(self, k: int) -> "MonomialArg":
        return MonomialArg(self.coeff ** k, tuple(a * k for a in self.exps))

    def with_q(self, dq) -> "MonomialArg":
        """Multiply by ``q^dq`` (``dq`` may be a half integer)."""
        d2 = Fraction(dq) * 2
        if d2.denominator != 1:
            raise ValueError("q exponents must be half integers")
        return MonomialArg(self.coeff, (self.exps[0] + int(d2),) + self.exps[1:])

    def scaled(self, c) -> "MonomialArg":
        return MonomialArg(self.coeff * GaussianRational.of(c), self.exps)

    def is_one(self) -> bool:
        return self.coeff == _G1 and not any(self.exps)

    def to_scalar(self) -> "Scalar":
        return Scalar.from_monomial(self)

    def __str__(self):
        return _mono_str(self.coeff, self.exps)


def monomial(coeff=1, **exps) -> MonomialArg:
    """Build a monomial, e.g. ``monomial(-1, q=Fraction(1, 2), z=1)``."""
    e = [0] * _NV
    for k, v in exps.items():
        if k not in _VIDX:
            raise KeyError(f"unknown variable {k!r}")
        v = Fraction(v)
        if k == "q":
            v = v * 2
        if v.denominator != 1:
            raise ValueError(f"non-integral exponent for {k}")
        e[_VIDX[k]] = int(v)
    return MonomialArg(GaussianRational.of(coeff), tuple(e))


# ---------------------------------------------------------------- polynomials

def _terms(poly):
    return [(tuple(int(a) for a in e), int(c)) for e, c in poly.terms()]


_ZPOLY = _CTX.from_dict({})
_ONEPOLY = _CTX.from_dict({(0,) * _NV: 1})


def _poly_from_terms(terms: Mapping[tuple, int]):
    return _CTX.from_dict({k: v for k, v in terms.items() if v})


def _split_laurent(terms: Mapping[tuple, GaussianRational]):
    """Gaussian Laurent terms -> (nr, ni, den) with den an integer times a monomial."""
    if not terms:
        return _ZPOLY, _ZPOLY, _ONEPOLY
    lo = [min(e[i] for e in terms) for i in range(_NV)]
    shift = tuple(-m if m < 0 else 0 for m in lo)
    d = 1
    for c in terms.values():
        d = lcm(d, c.real.denominator, c.imag.denominator)
    rr, ii = {}, {}
    for e, c in terms.items():
        k = tuple(a + b for a, b in zip(e, shift))
        if c.real:
            rr[k] = int(c.real * d)
        if c.imag:
            ii[k] = int(c.imag * d)
    den = _CTX.from_dict({shift: d})
    return _poly_from_terms(rr), _poly_from_terms(ii), den


# ---------------------------------------------------------------- scalars

_Key = tuple  # (exps, coeff_real, coeff_imag, period)


class Scalar:
    """Immutable exact scalar in canonical form."""

    __slots__ = ("nr", "ni", "den", "syms", "_h")

    def __init__(self, nr, ni, den, syms=()):
        self.nr = nr
        self.ni = ni
        self.den = den
        self.syms = syms
        self._h = None

    # -- construction
    @staticmethod
    def make(nr, ni, den, syms=()) -> "Scalar":
        if nr.is_zero() and ni.is_zero():
            return ZERO
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not den.is_one():
            g = nr.gcd(den) if not nr.is_zero() else den
            if not ni.is_zero() and not g.is_one():
                g = g.gcd(ni)
            if not g.is_one():
                nr = nr / g
                ni = ni / g
                den = den / g
            if den.leading_coefficient() < 0:
                nr, ni, den = -nr, -ni, -den
        return Scalar(nr, ni, den, syms)

    @staticmethod
    def from_int(n) -> "Scalar":
        n = Fraction(n)
        if n == 0:
            return ZERO
        return Scalar.make(
            _CTX.from_dict({(0,) * _NV: n.numerator}), _ZPOLY, _CTX.from_dict({(0,) * _NV: n.denominator})
        )

    @staticmethod
    def from_gauss(c) -> "Scalar":
        c = GaussianRational.of(c)
        nr, ni, den = _split_laurent({(0,) * _NV: c} if c else {})
        return Scalar.make(nr, ni, den)

    @staticmethod
    def from_monomial(m: MonomialArg) -> "Scalar":
        nr, ni, den = _split_laurent({m.exps: m.coeff})
        return Scalar.make(nr, ni, den)

    @staticmethod
    def coerce(v) -> "Scalar":
        if isinstance(v, Scalar):
            return v
        if isinstance(v, MonomialArg):
            return Scalar.from_monomial(v)
        if isinstance(v, (int, Fraction)):
            return Scalar.from_int(v)
        if isinstance(v, (GaussianRational, complex)):
            return Scalar.from_gauss(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to Scalar")

    # -- predicates
    def is_zero(self) -> bool:
        return self.nr.is_zero() and self.ni.is_zero()

    def is_rational(self) -> bool:
        return not self.syms

    def is_real(self) -> bool:
        return self.ni.is_zero()

    def is_polynomial(self) -> bool:
        """True when the denominator is a monomial with unit coefficient."""
        if self.syms:
            return False
        t = _terms(self.den)
        return len(t) == 1 and int(t[0][1]) == 1

    def as_monomial(self) -> MonomialArg | None:
        """The scalar as a monomial, or None."""
        if self.syms or self.is_zero():
            return None
        dt = _terms(self.den)
        if len(dt) != 1:
            return None
        rt = _terms(self.nr)
        it = _terms(self.ni)
        exps = {e for e, _ in rt} | {e for e, _ in it}
        if len(exps) != 1:
            return None
        (e,) = exps
        cr = dict(rt).get(e, 0)
        ci = dict(it).get(e, 0)
        de, dc = dt[0]
        c = GaussianRational(Fraction(int(cr), int(dc)), Fraction(int(ci), int(dc)))
        return MonomialArg(c, tuple(a - b for a, b in zip(e, de)))

    # -- arithmetic
    def __add__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.syms != o.syms:
            raise IncompatibleSymbols(f"cannot add {self} and {o}")
        if self.den == o.den:
            return Scalar.make(self.nr + o.nr, self.ni + o.ni, self.den, self.syms)
        g = self.den.gcd(o.den)
        d1 = self.den / g
        d2 = o.den / g
        return Scalar.make(
            self.nr * d2 + o.nr * d1, self.ni * d2 + o.ni * d1, d1 * o.den, self.syms
        )

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return Scalar(-self.nr, -self.ni, self.den, self.syms)

    def __pos__(self):
        return self

    def __sub__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return ZERO
        syms = _merge_syms(self.syms, o.syms, 1)
        if self.ni.is_zero() and o.ni.is_zero():
            # cross-cancel before multiplying to keep gcds small
            g1 = self.nr.gcd(o.den)
            g2 = o.nr.gcd(self.den)
            nr = (self.nr / g1) * (o.nr / g2)
            den = (self.den / g2) * (o.den / g1)
            if den.leading_coefficient() < 0:
                nr, den = -nr, -den
            return Scalar(nr, _ZPOLY, den, syms)
        nr = self.nr * o.nr - self.ni * o.ni
        ni = self.nr * o.ni + self.ni * o.nr
        return Scalar.make(nr, ni, self.den * o.den, syms)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("division by zero")
        syms = tuple((k, -m) for k, m in self.syms)
        if self.ni.is_zero():
            nr, den = self.den, self.nr
            if den.leading_coefficient() < 0:
                nr, den = -nr, -den
            return Scalar(nr, _ZPOLY, den, syms)
        norm = self.nr * self.nr + self.ni * self.ni
        return Scalar.make(self.den * self.nr, -(self.den * self.ni), norm, syms)

    def __truediv__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers of scalars")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        if self.ni.is_zero():
            syms = tuple((key, m * k) for key, m in self.syms)
            return Scalar(self.nr**k, _ZPOLY, self.den**k, syms)
        r, b = ONE, self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def conjugate(self) -> "Scalar":
        if self.syms and any(key[2] for key, _ in self.syms):
            raise ValueError("conjugation of complex-argument symbols is not supported")
        return Scalar(self.nr, -self.ni, self.den, self.syms)

    # -- comparison
    def __eq__(self, o):
        o = _coerce_or_none(o)
        if o is None:
            return NotImplemented
        return (
            self.syms == o.syms and self.nr == o.nr and self.ni == o.ni and self.den == o.den
        )

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._h is None:
            self._h = hash((str(self.nr), str(self.ni), str(self.den), self.syms))
        return self._h

    # -- inspection
    def rational_part(self) -> "Scalar":
        return Scalar(self.nr, self.ni, self.den, ())

    def symbols(self) -> list:
        """List of ``(MonomialArg, step, multiplicity)``."""
        out = []
        for (exps, cr, ci, period), m in self.syms:
            out.append((MonomialArg(GaussianRational(cr, ci), exps), period // 2, m))
        return out

    def numerator_terms(self) -> dict:
        """Numerator as ``{exps: GaussianRational}`` (internal exponents)."""
        d = {}
        for e, c in _terms(self.nr):
            d[e] = GaussianRational(int(c))
        for e, c in _terms(self.ni):
            d[e] = d.get(e, GaussianRational()) + GaussianRational(0, int(c))
        return d

    def denominator_terms(self) -> dict:
        return {e: GaussianRational(c) for e, c in _terms(self.den)}

    def free_vars(self) -> set:
        used = set()
        for poly in (self.nr, self.ni, self.den):
            for e, _ in _terms(poly):
                used.update(VARS[i] for i in range(_NV) if e[i])
        for (exps, _, _, _), _ in self.syms:
            used.add("q")
            used.update(VARS[i] for i in range(1, _NV) if exps[i])
        return used

    def __repr__(self):
        return f"Scalar({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    def to_str(self) -> str:
        """Deterministic serialization ``num / den [* symbols]``."""
        if self.is_zero():
            return "0"
        num = _poly_str(self.numerator_terms())
        if self.den.is_one():
            out = num if len(self.numerator_terms()) == 1 else f"({num})"
        else:
            out = f"({num}) / ({_poly_str(self.denominator_terms())})"
        for (exps, cr, ci, period), m in self.syms:
            arg = _mono_str(GaussianRational(cr, ci), exps)
            out += f" * poch({arg}, {period // 2})^({m})"
        return out


def _coerce_or_none(o):
    if isinstance(o, Scalar):
        return o
    try:
        return Scalar.coerce(o)
    except TypeError:
        return None


def _merge_syms(a, b, sign):
    if not b:
        return a
    if not a and sign == 1:
        return b
    d = dict(a)
    for k, m in b:
        v = d.get(k, 0) + sign * m
        if v:
            d[k] = v
        else:
            d.pop(k, None)
    return tuple(sorted(d.items()))


ZERO = Scalar(_ZPOLY, _ZPOLY, _ONEPOLY)
ONE = Scalar(_ONEPOLY, _ZPOLY, _ONEPOLY)
I = Scalar(_ZPOLY, _ONEPOLY, _ONEPOLY)


def var(name: str) -> Scalar:
    return Scalar.from_monomial(monomial(1, **{name: 1}))


def const(c) -> Scalar:
    return Scalar.coerce(c)


# ---------------------------------------------------------------- printing


def _exp_str(i: int, e: int) -> str:
    if i == 0:
        f = Fraction(e, 2)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return str(e)


def _mono_factors(exps) -> str:
    return "*".join(f"{VARS[i]}^({_exp_str(i, e)})" for i, e in enumerate(exps) if e)


def _mono_str(c: GaussianRational, exps) -> str:
    f = _mono_factors(exps)
    cs = str(c)
    if not f:
        return cs
    if c == _G1:
        return f
    if c == GaussianRational(-1):
        return "-" + f
    return f"{cs}*{f}"


def _poly_str(terms: Mapping[tuple, GaussianRational]) -> str:
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        s = _mono_str(terms[e], e)
        if parts:
            parts.append(" - " + s[1:] if s.startswith("-") else " + " + s)
        else:
            parts.append(s)
    return "".join(parts)


# ---------------------------------------------------------------- Pochhammers


def _mono_minus(m: MonomialArg) -> Scalar:
    """``1 - m`` as a scalar."""
    return ONE - Scalar.from_monomial(m)


def qpoch_inf(arg: MonomialArg, step: int = 1, mult: int = 1) -> Scalar:
    """``(arg; q^step)_inf ** mult`` in canonical form."""
    if step <= 0:
        raise ValueError("step must be positive")
    if mult == 0:
        return ONE
    period = 2 * step
    e = arg.exps[0]
    pure = arg.coeff == _G1 and not any(arg.exps[1:])
    if pure:
        if e <= 0:
            raise ValueError("(q^e; q^g)_inf vanishes for e <= 0")
        e0 = (e - 1) % period + 1
    else:
        e0 = e % period
    t = (e - e0) // period
    base = MonomialArg(arg.coeff, (e0,) + arg.exps[1:])
    rat = ONE
    if t > 0:
        for k in range(t):
            rat = rat * _mono_minus(base.with_q(step * k))
        rat = rat.inverse()
    elif t < 0:
        for k in range(1, -t + 1):
            rat = rat * _mono_minus(base.with_q(-step * k))
    key = (base.exps, base.coeff.real, base.coeff.imag, period)
    sym = Scalar(_ONEPOLY, _ZPOLY, _ONEPOLY, ((key, mult),))
    return sym * rat**mult


def qpoch_finite(arg: MonomialArg, step: int, m: int) -> Scalar:
    """``prod_{k=1}^m (1 - arg q^{step (k-1)})``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _qpoch_finite_cached(arg, step, m)


@lru_cache(maxsize=None)
def _qpoch_finite_cached(arg: MonomialArg, step: int, m: int) -> Scalar:
    r = ONE
    for k in range(m):
        r = r * _mono_minus(arg.with_q(step * k))
    return r


@lru_cache(maxsize=None)
def _qfact(m: int, step: int) -> Scalar:
    return qpoch_finite(monomial(q=step), step, m)


@lru_cache(maxsize=None)
def qbinomial(m: int, k: int, step: int = 1) -> Scalar:
    """Gaussian binomial in base ``q^step``; zero outside ``0 <= k <= m``."""
    if k < 0 or k > m or m < 0:
        return ZERO
    return _qfact(m, step) / (_qfact(k, step) * _qfact(m - k, step))


# ---------------------------------------------------------------- substitution


def _binding_monomial(v) -> MonomialArg | None:
    if isinstance(v, MonomialArg):
        return v
    if isinstance(v, (int, Fraction, GaussianRational, complex)):
        c = GaussianRational.of(v)
        return MonomialArg(c, (0,) * _NV) if c else None
    if isinstance(v, Scalar):
        return v.as_monomial()
    raise TypeError(f"unsupported binding {v!r}")


def _eval_poly_monomial(terms, images):
    """Evaluate ``{exps: GaussianRational}`` under internal-variable monomial images."""
    out: dict = {}
    for e, c in terms.items():
        coeff = c
        ex = [0] * _NV
        for i, k in enumerate(e):
            if not k:
                continue
            im = images[i]
            if im is None:
                ex[i] += k
                continue
            if im.coeff != _G1:
                coeff = coeff * im.coeff**k
            for j in range(_NV):
                ex[j] += im.exps[j] * k
        ex = tuple(ex)
        out[ex] = out.get(ex, GaussianRational()) + coeff
    return {e: c for e, c in out.items() if c}


def _laurent_to_scalar(terms) -> Scalar:
    nr, ni, den = _split_laurent(terms)
    return Scalar.make(nr, ni, den)


def _eval_poly_general(terms, images: list) -> Scalar:
    total = ZERO
    cache: dict = {}
    for e, c in terms.items():
        t = Scalar.from_gauss(c)
        rest = [0] * _NV
        for i, k in enumerate(e):
            if not k:
                continue
            im = images[i]
            if im is None:
                rest[i] = k
                continue
            key = (i, k)
            if key not in cache:
                cache[key] = im**k
            t = t * cache[key]
        if any(rest):
            t = t * Scalar.from_monomial(MonomialArg(_G1, tuple(rest)))
        total = total + t
    return total


def substitute(s: Scalar, bindings: Mapping[str, object]) -> Scalar:
    """Substitute variables by monomials (or, outside symbols, by scalars).

    ``q`` may only be mapped to a pure positive power ``q^r``; the steps of all
    Pochhammer symbols are rescaled accordingly.
    """
    if not bindings:
        return s
    mono_images: list = [None] * _NV
    gen_images: list = [None] * _NV
    all_mono = True
    qpow = 1
    for name, v in bindings.items():
        i = _VIDX[name]
        m = _binding_monomial(v)
        if i == 0:
            if m is None or m.coeff != _G1 or any(m.exps[1:]) or m.exps[0] <= 0 or m.exps[0] % 2:
                raise ValueError("q may only be mapped to a positive integer power of q")
            qpow = m.exps[0] // 2
            # s = q^(1/2) maps to q^(r/2) = s^r
            mono_images[0] = MonomialArg(_G1, (qpow,) + (0,) * (_NV - 1))
            gen_images[0] = Scalar.from_monomial(mono_images[0])
            continue
        if m is None:
            all_mono = False
            gen_images[i] = Scalar.coerce(v)
        else:
            mono_images[i] = m
            gen_images[i] = Scalar.from_monomial(m)
    if all_mono:
        num = _laurent_to_scalar(_eval_poly_monomial(s.numerator_terms(), mono_images))
        den = _laurent_to_scalar(_eval_poly_monomial(s.denominator_terms(), mono_images))
    else:
        num = _eval_poly_general(s.numerator_terms(), gen_images)
        den = _eval_poly_general(s.denominator_terms(), gen_images)
    out = num / den
    for (exps, cr, ci, period), mult in s.syms:
        coeff = GaussianRational(cr, ci)
        ex = list(exps)
        for i in range(1, _NV):
            if not exps[i] or mono_images[i] is None and gen_images[i] is None:
                continue
            if mono_images[i] is None:
                raise NonMonomialSubstitutionIntoSymbol(
                    f"binding for {VARS[i]} is not a monomial but occurs in a symbol"
                )
        img = _eval_poly_monomial({tuple(ex): coeff}, mono_images)
        ((ne, nc),) = img.items()
        out = out * qpoch_inf(MonomialArg(nc, ne), (period // 2) * qpow, mult)
    return out


# ---------------------------------------------------------------- series oracle


def _ser_mul(a: list, b: list, n: int) -> list:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def _ser_inv(a: list, n: int) -> list:
    if not a or not a[0]:
        raise PoleAtOrigin("series has no constant term")
    inv0 = Fraction(1) / a[0]
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                acc += a[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def _num(c: GaussianRational):
    return c.real if c.imag == 0 else c


def _sparse_to_laurent(d: Mapping[int, object]):
    """``{exp: coeff}`` -> (valuation, dense coefficient list)."""
    d = {e: c for e, c in d.items() if c}
    if not d:
        return None
    v = min(d)
    top = max(d)
    return v, [d.get(v + k, 0) for k in range(top - v + 1)]


def series_oracle(
    s: Scalar,
    var: str,
    degree: int,
    samples: Mapping[str, object] | None = None,
    start: int = 0,
    half: bool = False,
) -> list:
    """Expand ``s`` as a formal series in ``var`` after sampling the other variables.

    Returns coefficients of ``var^start .. var^degree``.  For ``var='q'`` with
    ``half=True`` the list is indexed by half-steps of ``q``.  Infinite symbols
    are expanded as truncated products; this is only formal for ``var='q'``.
    """
    samples = dict(samples or {})
    iv = _VIDX[var]
    unit = 2 if (iv == 0 and not half) else 1
    bind = {k: GaussianRational.of(v) for k, v in samples.items()}
    missing = s.free_vars() - set(bind) - {var}
    if missing:
        raise ValueError(f"unsampled variables: {sorted(missing)}")
    if s.syms and iv != 0:
        raise ValueError("infinite products are only expandable in q")
    if "q" in bind:
        if s.syms:
            raise ValueError("cannot sample q in the presence of infinite products")
        # q is sampled through s = q^(1/2)
        qv = bind.pop("q")
        rt = _rational_sqrt(qv)
        t = substitute(s.rational_part(), bind) if bind else s.rational_part()
        t = _eval_poly_general(t.numerator_terms(), [Scalar.from_gauss(rt)] + [None] * 4) / _eval_poly_general(
            t.denominator_terms(), [Scalar.from_gauss(rt)] + [None] * 4
        )
        sub = t
        syms = []
    else:
        sub_full = substitute(s, bind) if bind else s
        sub = sub_full.rational_part()
        syms = sub_full.symbols()

    lo = start * unit
    hi = degree * unit

    def uni(terms):
        d: dict = {}
        for e, c in terms.items():
            d[e[iv]] = d.get(e[iv], GaussianRational()) + c
        return {k: _num(c) for k, c in d.items() if c}

    num = _sparse_to_laurent(uni(sub.numerator_terms()))
    if num is None:
        return [Fraction(0)] * (degree - start + 1)
    den = _sparse_to_laurent(uni(sub.denominator_terms()))
    # (valuation, dense list, power); tail factors have valuation 0
    factors = [(num[0], num[1], 1), (den[0], den[1], -1)]
    tails = []
    for arg, step, mult in syms:
        c = _num(arg.coeff)
        ek = arg.exps[0]
        while ek <= 0:
            if ek == 0:
                if c == 1:
                    raise PoleAtOrigin("degenerate symbol after sampling")
                factors.append((0, [1 - c], mult))
            else:
                factors.append((ek, [-c] + [0] * (-ek - 1) + [1], mult))
            ek += 2 * step
        tails.append((ek, 2 * step, c, mult))
    val = sum(v * p for v, _, p in factors)
    if val > hi:
        return [Fraction(0)] * (degree - start + 1)
    prec = hi - val + 1
    for ek, inc, c, mult in tails:
        while ek < prec:
            factors.append((0, [1] + [0] * (ek - 1) + [-c], mult))
            ek += inc
    acc = [1]
    for v, dense, p in factors:
        if p > 0:
            for _ in range(p):
                acc = _ser_mul(acc, dense, prec)
        else:
            inv = _ser_inv(dense, prec)
            for _ in range(-p):
                acc = _ser_mul(acc, inv, prec)
    # acc[k] is the coefficient of var^(val + k) in internal units
    if val < lo and any(acc[: lo - val]):
        raise PoleAtOrigin("series has terms below the requested start")
    out = []
    for ex in range(lo, hi + 1):
        k = ex - val
        out.append(acc[k] if 0 <= k < len(acc) else 0)
    if unit == 2:
        if any(out[1::2]):
            raise ValueError("half-integer powers of q present; use half=True")
        out = out[0::2]
    return [x if not isinstance(x, int) else Fraction(x) for x in out]


def _rational_sqrt(c: GaussianRational) -> GaussianRational:
    if c.imag:
        raise ValueError("q samples must be real")
    r = c.real
    from math import isqrt

    a, b = isqrt(r.numerator), isqrt(r.denominator)
    if a * a != r.numerator or b * b != r.denominator:
        raise ValueError("q samples must be rational squares (q^(1/2) is sampled)")
    return GaussianRational(Fraction(a, b))


# ---------------------------------------------------------------- parsing

_NAMES = {v: var(v) for v in VARS}


def _eval_number(node) -> Fraction:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval_number(node.left), _eval_number(node.right)
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
    raise ValueError("bad exponent")


def _power(base: Scalar, e: Fraction) -> Scalar:
    if e.denominator == 1:
        return base ** int(e)
    m = base.as_monomial()
    if m is None or m.coeff != _G1:
        raise ValueError("fractional powers only of bare monomials")
    ex = [Fraction(k) * e for k in m.exps]
    if any(x.denominator != 1 for x in ex):
        raise ValueError("fractional power not representable")
    return Scalar.from_monomial(MonomialArg(_G1, tuple(int(x) for x in ex)))


def _eval_ast(node) -> Scalar:
    if isinstance(node, ast.Expression):
        return _eval_ast(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Scalar.from_int(node.value)
    if isinstance(node, ast.Name):
        if node.id == "I":
            return I
        if node.id in _NAMES:
            return _NAMES[node.id]
        raise ValueError(f"unknown name {node.id}")
    if isinstance(node, ast.UnaryOp):
        v = _eval_ast(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return _power(_eval_ast(node.left), _eval_number(node.right))
        a, b = _eval_ast(node.left), _eval_ast(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "poch":
        arg = _eval_ast(node.args[0]).as_monomial()
        if arg is None:
            raise ValueError("poch argument must be a monomial")
        step = int(_eval_number(node.args[1]))
        return qpoch_inf(arg, step)
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


_IMAG_RE = re.compile(r"(\d)i\b")


def parse_scalar(text: str) -> Scalar:
    """Parse the serialization grammar (also accepts ordinary infix input)."""
    t = _IMAG_RE.sub(r"\1*I", text.strip()).replace("^", "**")
    return _eval_ast(ast.parse(t, mode="eval"))
