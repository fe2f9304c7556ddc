"""Quantum affine algebra representations and the intertwiner property.

The Chevalley generators ``e_j, f_j, k_j`` of ``U_p(g)`` act on ``V_l``
(type ``A``, the antisymmetric tensor representations) or on ``V`` and
``V^+-`` (the spin representations of types ``D2``, ``B``, ``Btilde``,
``D1``).  The parameter ``p`` is never a free variable: it is specialized to
``p = sign * i / q`` at construction time, which also realizes ``p^2 = -q^-2``
for the types that only see ``p^2``.

``check_intertwiner`` verifies ``Delta'_{x,y}(g) R = R Delta_{x,y}(g)`` for
every generator, where ``R`` is the matrix product solution at ``z = x/y``
(gauge transformed by ``I_+-`` outside type ``A``).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Mapping

from .matprod import QMatrix, bitstrings, build_s_boundary, build_s_trace, normalization_anchors, weight
from .scalar import ONE, ZERO, GaussianRational, Scalar, monomial
from .verify import Certificate

__all__ = [
    "AlgebraSpec",
    "RepAction",
    "SpecializationMismatch",
    "ALGEBRA_FOR",
    "SPECTRAL_POWER",
    "rep_generator",
    "coproduct_action",
    "gauge",
    "check_intertwiner",
    "check_weyl",
]

TYPES = ("A", "D2", "B", "Btilde", "D1")

# which matrix product solution belongs to which algebra
ALGEBRA_FOR = {"A": "tr", "D2": (1, 1), "B": (2, 1), "Btilde": (1, 2), "D1": (2, 2)}


SPECTRAL_POWER = {"A": 1, "D2": 1, "B": 2, "Btilde": 1, "D1": 2}


class SpecializationMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    type: str
    n: int
    sign: int = 1  # p = sign * i * q^-1

    def __post_init__(self):
        if self.type not in TYPES:
            raise ValueError(f"unknown type {self.type!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        least = {"A": 2, "D2": 1, "B": 2, "Btilde": 2, "D1": 2}[self.type]
        if self.n < least:
            raise ValueError(f"type {self.type} needs n >= {least}")

    @property
    def nodes(self) -> range:
        return range(self.n) if self.type == "A" else range(self.n + 1)

    def p(self) -> Scalar:
        return Scalar.from_gauss(GaussianRational(0, self.sign)) * Scalar.from_monomial(monomial(q=-1))

    def p_power(self, e: int) -> Scalar:
        return self.p() ** e

    def p_node_exp(self, j: int) -> int:
        """``p_j = p^{result}``."""
        t, n = self.type, self.n
        if t == "D2" and j in (0, n):
            return 1
        if t == "B" and j == n:
            return 1
        if t == "Btilde" and j == 0:
            return 1
        return 2


@dataclass
class RepAction:
    gen: str
    j: int
    matrix: QMatrix
    spectral: object


def _shift(alpha, plus=(), minus=()):
    a = list(alpha)
    for i in minus:
        a[i - 1] -= 1
    for i in plus:
        a[i - 1] += 1
    if any(x not in (0, 1) for x in a):
        return None
    return tuple(a)


def _node_rule(spec: AlgebraSpec, gen: str, j: int):
    """``alpha -> (alpha', z-power, p-exponent)`` for one generator, or None."""
    n, t = spec.n, spec.type

    def wrap(i):
        return n if i == 0 else i

    if t == "A" or 0 < j < n:
        a, b = (wrap(j), wrap(j + 1) if j + 1 <= n else 1) if t == "A" else (j, j + 1)
        zp = 1 if (t == "A" and j == 0) else 0
        if gen == "e":
            return lambda al: (_shift(al, (b,), (a,)), zp, 0)
        if gen == "f":
            return lambda al: (_shift(al, (a,), (b,)), -zp, 0)
        return lambda al: (al, 0, 2 * (al[b - 1] - al[a - 1]))
    if j == 0:
        if t in ("D2", "Btilde"):
            if gen == "e":
                return lambda al: (_shift(al, (1,)), 1, 0)
            if gen == "f":
                return lambda al: (_shift(al, (), (1,)), -1, 0)
            return lambda al: (al, 0, 2 * al[0] - 1)
        if gen == "e":
            return lambda al: (_shift(al, (1, 2)), 1, 0)
        if gen == "f":
            return lambda al: (_shift(al, (), (1, 2)), -1, 0)
        return lambda al: (al, 0, 2 * (al[0] + al[1] - 1))
    # j == n
    if t in ("D2", "B"):
        if gen == "e":
            return lambda al: (_shift(al, (), (n,)), 0, 0)
        if gen == "f":
            return lambda al: (_shift(al, (n,)), 0, 0)
        return lambda al: (al, 0, 1 - 2 * al[n - 1])
    if gen == "e":
        return lambda al: (_shift(al, (), (n - 1, n)), 0, 0)
    if gen == "f":
        return lambda al: (_shift(al, (n - 1, n)), 0, 0)
    return lambda al: (al, 0, 2 * (1 - al[n - 1] - al[n - 2]))


def rep_generator(spec: AlgebraSpec, gen: str, j: int, z=None) -> RepAction:
    """Matrix of ``pi_z(g)`` on ``V`` for ``g`` in ``e, f, k, kinv`` at node ``j``.

    ``z`` is a monomial (default the variable ``z``).  For type ``A`` the
    matrix acts on all of ``V`` and preserves each ``V_l``.
    """
    if j not in spec.nodes:
        raise ValueError(f"node {j} out of range for {spec.type}")
    if gen not in ("e", "f", "k", "kinv"):
        raise ValueError("generator must be e, f, k or kinv")
    zm = monomial(z=1) if z is None else z
    rule = _node_rule(spec, "k" if gen == "kinv" else gen, j)
    M = QMatrix(spec.n, "V", f"{spec.type}:{gen}{j}")
    for al in bitstrings(spec.n):
        out, zp, pe = rule(al)
        if out is None:
            continue
        if gen == "kinv":
            pe = -pe
        M.set(out, al, Scalar.from_monomial(zm ** zp) * spec.p_power(pe))
    return RepAction(gen, j, M, zm)


def coproduct_action(spec: AlgebraSpec, gen: str, j: int, x=None, y=None,
                     opposite: bool = False) -> Callable[[Mapping], dict]:
    """``Delta_{x,y}(g)`` (or ``Delta'``) as a function on states of ``V (x) V``.

    ``Delta e = 1 (x) e + e (x) k``, ``Delta f = f (x) 1 + k^-1 (x) f``,
    ``Delta k = k (x) k``; ``Delta'`` is the flipped coproduct.
    """
    x = monomial(x=1) if x is None else x
    y = monomial(y=1) if y is None else y
    n = spec.n

    def m(g, zz):
        return rep_generator(spec, g, j, zz).matrix

    def on(M, slot, st):
        return M.apply(st, (slot,), n)

    if gen == "k":
        kx, ky = m("k", x), m("k", y)
        return lambda st: on(kx, 0, on(ky, 1, st))
    if gen == "kinv":
        kx, ky = m("kinv", x), m("kinv", y)
        return lambda st: on(kx, 0, on(ky, 1, st))
    if gen == "e":
        ex, ey, kx, ky = m("e", x), m("e", y), m("k", x), m("k", y)
        if not opposite:
            return lambda st: _sum(on(ey, 1, st), on(ex, 0, on(ky, 1, st)))
        return lambda st: _sum(on(ex, 0, st), on(kx, 0, on(ey, 1, st)))
    if gen == "f":
        fx, fy, kix, kiy = m("f", x), m("f", y), m("kinv", x), m("kinv", y)
        if not opposite:
            return lambda st: _sum(on(fx, 0, st), on(kix, 0, on(fy, 1, st)))
        return lambda st: _sum(on(fy, 1, st), on(fx, 0, on(kiy, 1, st)))
    raise ValueError("generator must be e, f, k or kinv")


def _sum(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, ZERO) + v
        if w.is_zero():
            out.pop(k, None)
        else:
            out[k] = w
    return out


def gauge(S: QMatrix, sign: int) -> QMatrix:
    """``(I (x) 1) S (1 (x) I^-1)`` with ``I |a> = (sign i)^{|a|} |a>``.

    This inverts the gauge transformation relating ``S^{s,s'}`` to ``R``.
    """
    n = S.n
    unit = GaussianRational(0, sign)

    def ipow(e):
        return Scalar.from_gauss(unit ** e)

    out = QMatrix(n, S.space, S.family + f":gauge{'+' if sign > 0 else '-'}", S.block)
    for (r, c), v in S.entries.items():
        out.entries[(r, c)] = ipow(weight(r[:n])) * v * ipow(-weight(c[n:]))
    return out


def _domain(spec: AlgebraSpec, l=None, m=None, sigma=None, sigmap=None) -> list:
    n = spec.n
    A = bitstrings(n, l)
    B = bitstrings(n, m)
    if sigma is not None:
        A = [a for a in A if (-1) ** weight(a) == sigma]
    if sigmap is not None:
        B = [b for b in B if (-1) ** weight(b) == sigmap]
    return [a + b for a in A for b in B]


def check_intertwiner(spec: AlgebraSpec, S: QMatrix | None = None, l: int | None = None,
                      m: int | None = None, sigma: int | None = None, sigmap: int | None = None,
                      family=None) -> Certificate:
    """``Delta'_{x,y}(g) R = R Delta_{x,y}(g)`` for every Chevalley generator.

    Types ``B`` and ``D1`` use ``Delta_{x^2,y^2}`` (see ``SPECTRAL_POWER``).
    ``R`` is ``S^tr_{l,m}(x/y)`` for type ``A`` and the gauge transform of
    ``S^{s,s'}(x/y)`` (block ``(sigma, sigma')`` for ``D1``) otherwise.  The
    normalization is pinned separately through the anchor entries of ``S``.
    """
    t0 = time.perf_counter()
    want = ALGEBRA_FOR[spec.type]
    if family is not None and family != want:
        raise SpecializationMismatch(f"{family} does not belong to type {spec.type}")
    n = spec.n
    if spec.type == "A":
        if l is None or m is None:
            raise ValueError("type A needs the block (l, m)")
        S = build_s_trace(n, l, m) if S is None else S
    else:
        S = build_s_boundary(n, *want) if S is None else S
    x, y = monomial(x=1), monomial(y=1)
    R = S.at(x / y)
    if spec.type != "A":
        R = gauge(R, spec.sign)
    # node 0 of B and D1 adds two bits at once; those spin representations
    # match S(x/y) when evaluated at x^2, y^2
    e = SPECTRAL_POWER[spec.type]
    x, y = x ** e, y ** e
    domain = _domain(spec, l, m, sigma, sigmap)
    bad = []
    count = 0
    for gen in ("e", "f", "k"):
        for j in spec.nodes:
            D = coproduct_action(spec, gen, j, x, y)
            Dp = coproduct_action(spec, gen, j, x, y, opposite=True)
            for col in domain:
                v = {col: ONE}
                lhs = Dp(R.apply(v, (0, 1), n))
                rhs = R.apply(D(v), (0, 1), n)
                count += 1
                for key in sorted(set(lhs) | set(rhs)):
                    if lhs.get(key, ZERO) != rhs.get(key, ZERO):
                        bad.append(f"{gen}_{j} on |{''.join(map(str, col))}>: component {key}")
                        break
    anchors = normalization_anchors(S, l=l, m=m)
    bad.extend(f"anchor {a}" for a in anchors)
    params = {"type": spec.type, "n": n, "sign": spec.sign}
    for k, v in (("l", l), ("m", m), ("sigma", sigma), ("sigmap", sigmap)):
        if v is not None:
            params[k] = v
    return Certificate("intertwiner", params, "fail" if bad else "pass", bad[0] if bad else None,
                       time.perf_counter() - t0, count, len(bad))


def check_weyl(spec: AlgebraSpec) -> Certificate:
    """``k_j e_j k_j^-1 = p_j^2 e_j`` and ``[e_i, f_j] = delta_ij (k_i - k_i^-1)/(p_i - p_i^-1)``."""
    t0 = time.perf_counter()
    n = spec.n
    bad = []
    z = monomial(z=1)
    basis = bitstrings(n)

    def act(M, st):
        return M.apply(st, (0,), n)

    gens = {(g, j): rep_generator(spec, g, j, z).matrix for g in ("e", "f", "k", "kinv")
            for j in spec.nodes}
    count = 0
    for j in spec.nodes:
        pj = spec.p_power(spec.p_node_exp(j))
        for al in basis:
            v = {al: ONE}
            lhs = act(gens["k", j], act(gens["e", j], act(gens["kinv", j], v)))
            rhs = {k: c * pj * pj for k, c in act(gens["e", j], v).items()}
            count += 1
            if lhs != rhs:
                bad.append(f"k_{j} e_{j} k_{j}^-1 on |{al}>")
        for i in spec.nodes:
            for al in basis:
                v = {al: ONE}
                ef = act(gens["e", i], act(gens["f", j], v))
                fe = act(gens["f", j], act(gens["e", i], v))
                lhs = _sum(ef, {k: -c for k, c in fe.items()})
                if i == j:
                    pi = spec.p_power(spec.p_node_exp(i))
                    den = pi - pi.inverse()
                    kk = _sum(act(gens["k", i], v), {k: -c for k, c in act(gens["kinv", i], v).items()})
                    rhs = {k: c / den for k, c in kk.items()}
                else:
                    rhs = {}
                count += 1
                if lhs != rhs:
                    bad.append(f"[e_{i}, f_{j}] on |{al}>")
    return Certificate("weyl", {"type": spec.type, "n": n, "sign": spec.sign},
                       "fail" if bad else "pass", bad[0] if bad else None,
                       time.perf_counter() - t0, count, len(bad))
