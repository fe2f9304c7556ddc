"""Matrix product solutions of the Yang-Baxter and reflection equations.

Four families are built as exact matrices over ``V^{(x) n}``, ``V = C^2``:

* ``S^tr_{l,m}(z)``   traces of products of local L over ``F_{q^2}``
* ``S^{s,s'}(z)``     boundary vectors ``chi_s``, ``chi_s'`` of ``F_{q^2}``
* ``K^tr(z)``         traces of products of local K over ``F_q``
* ``K^{k,k'}(z)``     boundary vectors ``eta_k``, ``eta_k'`` of ``F_q``

Basis vectors are bit tuples, ordered big-endian (``(0,1,1)`` has index 3).
A matrix on ``V (x) V`` keys its rows and columns by the concatenation of the
two bit tuples, so ``|01,10>`` is ``(0, 1, 1, 0)``.  Entries are stored
sparsely as ``{(row, col): Scalar}`` with ``M |col> = sum_row M[row, col] |row>``.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .qboson import DOUBLED, SINGLE, OperatorWord, boundary_eval, trace_eval, word
from .scalar import ONE, ZERO, Scalar, monomial, parse_scalar, qpoch_inf, substitute
from .threedim import local_K, local_L

__all__ = [
    "CrossBlockEntry",
    "NonRationalEntry",
    "QMatrix",
    "bitstrings",
    "weight",
    "reverse",
    "complement",
    "bit_index",
    "rho_tr",
    "rho_boundary",
    "kappa_tr",
    "kappa_boundary",
    "build_s_trace",
    "build_s_boundary",
    "build_k_trace",
    "build_k_boundary",
    "build",
    "block_decompose",
    "symmetry_check",
    "closed_form_s_tr_min1",
    "normalization_anchors",
]

Z = monomial(z=1)


class CrossBlockEntry(ValueError):
    pass


class NonRationalEntry(ValueError):
    pass


# ---------------------------------------------------------------- bit strings


def bitstrings(n: int, wt: int | None = None) -> list:
    """All of ``{0,1}^n`` in big-endian order, optionally of fixed weight."""
    out = [b for b in itertools.product((0, 1), repeat=n)]
    return out if wt is None else [b for b in out if sum(b) == wt]


def weight(b) -> int:
    return sum(b)


def reverse(b) -> tuple:
    return tuple(reversed(b))


def complement(b) -> tuple:
    return tuple(1 - x for x in b)


def bit_index(b) -> int:
    v = 0
    for x in b:
        v = 2 * v + x
    return v


def format_bits(b, n: int | None = None) -> str:
    s = "".join(map(str, b))
    if n is not None and len(b) == 2 * n:
        return s[:n] + "," + s[n:]
    return s


# ---------------------------------------------------------------- matrices


@dataclass
class QMatrix:
    """Sparse exact matrix over ``V^{(x) n}`` (space ``"V"``) or its square (``"VV"``)."""

    n: int
    space: str
    family: str
    block: str = "all"
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self._cols = None

    @property
    def width(self) -> int:
        return self.n if self.space == "V" else 2 * self.n

    def __getitem__(self, key) -> Scalar:
        return self.entries.get(key, ZERO)

    def __eq__(self, o):
        return (isinstance(o, QMatrix) and self.n == o.n and self.space == o.space
                and self.entries == o.entries)

    def set(self, row, col, v: Scalar):
        self._cols = None
        if v.is_zero():
            self.entries.pop((row, col), None)
        else:
            self.entries[(row, col)] = v

    def columns(self) -> dict:
        """``{col: [(row, value), ...]}`` in row order."""
        if self._cols is None:
            cols: dict = {}
            for (r, c), v in sorted(self.entries.items()):
                cols.setdefault(c, []).append((r, v))
            self._cols = cols
        return self._cols

    def map(self, f) -> "QMatrix":
        out = QMatrix(self.n, self.space, self.family, self.block)
        for k, v in self.entries.items():
            w = f(v)
            if not w.is_zero():
                out.entries[k] = w
        return out

    def at(self, zimage) -> "QMatrix":
        """Substitute the spectral parameter ``z``."""
        return self.map(lambda v: substitute(v, {"z": zimage}))

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.entries.values())

    def restricted(self, pred, block: str) -> "QMatrix":
        out = QMatrix(self.n, self.space, self.family, block)
        out.entries = {k: v for k, v in self.entries.items() if pred(k[1])}
        return out

    def merged(self, other: "QMatrix", block: str = "all") -> "QMatrix":
        out = QMatrix(self.n, self.space, self.family, block)
        out.entries = dict(self.entries)
        for k, v in other.entries.items():
            if k in out.entries:
                raise ValueError(f"overlapping entry {k}")
            out.entries[k] = v
        return out

    def apply(self, state: Mapping, slots: tuple, n: int | None = None) -> dict:
        """Act on tensor factors ``slots`` of a state ``{bits: Scalar}``.

        The state's key is the concatenation of factors of ``n`` bits each;
        a ``VV`` matrix takes two slots ``(a, b)`` and may act on them in
        either order (``(b, a)`` gives the ``P S P`` version).
        """
        n = self.n if n is None else n
        cols = self.columns()
        out: dict = {}
        for key, c in state.items():
            inp = tuple(itertools.chain.from_iterable(key[s * n:(s + 1) * n] for s in slots))
            for row, v in cols.get(inp, ()):
                new = list(key)
                for i, s in enumerate(slots):
                    new[s * n:(s + 1) * n] = row[i * n:(i + 1) * n]
                new = tuple(new)
                cur = out.get(new)
                cur = c * v if cur is None else cur + c * v
                if cur.is_zero():
                    out.pop(new, None)
                else:
                    out[new] = cur
        return out

    # -- serialization
    def to_json(self) -> dict:
        rows = sorted(self.entries.items(), key=lambda kv: (bit_index(kv[0][1]), bit_index(kv[0][0])))
        return {
            "family": self.family,
            "n": self.n,
            "space": self.space,
            "block": self.block,
            "basis_order": "big-endian bits",
            "entries": [{"row": format_bits(r, self.n), "col": format_bits(c, self.n),
                         "value": v.to_str()} for (r, c), v in rows],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @staticmethod
    def from_json(d: Mapping) -> "QMatrix":
        m = QMatrix(d["n"], d["space"], d["family"], d.get("block", "all"))
        for e in d["entries"]:
            r = tuple(int(x) for x in e["row"].replace(",", ""))
            c = tuple(int(x) for x in e["col"].replace(",", ""))
            m.set(r, c, parse_scalar(e["value"]))
        return m

    def to_text(self) -> str:
        """One line per basis vector, ``|col> |-> sum value |row>``."""
        lines = []
        for col, rows in sorted(self.columns().items(), key=lambda kv: bit_index(kv[0])):
            terms = " + ".join(f"({v}) |{format_bits(r, self.n)}>" for r, v in rows)
            lines.append(f"|{format_bits(col, self.n)}> |-> {terms}")
        return "\n".join(lines)


# ---------------------------------------------------------------- normalizers


def _q(e) -> Scalar:
    return Scalar.from_monomial(monomial(q=e))


def rho_tr(l: int, m: int) -> Scalar:
    d = abs(l - m)
    return _q(-d) * (ONE - Scalar.from_monomial(monomial(q=2 * d, z=1)))


def rho_boundary(s: int, sp: int, sigma: int = 1, sigmap: int = 1) -> Scalar:
    """``rho^{s,s'}(z)``; for ``(2,2)`` the parity block ``(sigma, sigma')`` matters."""
    if (s, sp) != (2, 2):
        u = max(s, sp)
        g = 2 * s * sp
        return qpoch_inf(monomial(z=u), g) / qpoch_inf(monomial(-1, q=2, z=u), g)
    if sigma == sigmap:
        return qpoch_inf(monomial(z=2), 8) / qpoch_inf(monomial(q=4, z=2), 8)
    return qpoch_inf(monomial(q=4, z=2), 8) / (qpoch_inf(monomial(q=8, z=2), 8) * _q(1))


def kappa_tr(n: int, l: int) -> Scalar:
    return (Scalar.from_int((-1) ** l) * _q(Fraction(-n, 2))
            * (ONE - Scalar.from_monomial(monomial(q=n, z=1))))


def kappa_boundary(n: int, k: int, kp: int) -> Scalar:
    r, u = min(k, kp), max(k, kp)
    g = k * kp
    pref = _q(Fraction(-n, 2))
    return pref * qpoch_inf(monomial(q=n * u, z=u), g) / qpoch_inf(
        monomial((-1) ** r, q=r + n * u, z=u), g)


# ---------------------------------------------------------------- matrix product evaluation


@lru_cache(maxsize=None)
def _trace(letters: tuple, algebra: str) -> Scalar:
    return trace_eval(OperatorWord(algebra, letters), Z)


@lru_cache(maxsize=None)
def _bnd(letters: tuple, algebra: str, k: int, kp: int) -> Scalar:
    return boundary_eval(OperatorWord(algebra, letters), k, kp, Z)


def _product(ws: Iterable[OperatorWord], algebra: str) -> OperatorWord:
    out = word(algebra)
    for w in ws:
        out = out * w
        if out.is_zero():
            break
    return out


def _l_word(alpha, beta, gamma, delta) -> OperatorWord:
    return _product((local_L(a, b, c, d) for a, b, c, d in zip(alpha, beta, gamma, delta)), DOUBLED)


def _k_word(alpha, beta) -> OperatorWord:
    return _product((local_K(a, b) for a, b in zip(alpha, beta)), SINGLE)


def _outputs_vv(alpha, beta) -> Iterator[tuple]:
    """All ``(gamma, delta)`` with ``gamma + delta = alpha + beta``."""
    choices = []
    for a, b in zip(alpha, beta):
        choices.append(((0, 1), (1, 0)) if a + b == 1 else ((a, b),))
    for pick in itertools.product(*choices):
        yield tuple(p[0] for p in pick), tuple(p[1] for p in pick)


def _evaluate(w: OperatorWord, how) -> Scalar:
    if w.is_zero():
        return ZERO
    return w.scale * how(w.letters)


def _check_rational(M: QMatrix):
    for key, v in M.entries.items():
        if not v.is_rational():
            raise NonRationalEntry(f"{M.family}: entry {key} keeps transcendental factors")


def build_s_trace(n: int, l: int | None = None, m: int | None = None) -> QMatrix:
    """``S^tr_{l,m}(z)`` on ``V_l (x) V_m``; with ``l = m = None`` all blocks."""
    if l is None or m is None:
        M = QMatrix(n, "VV", "s-trace")
        for ll in range(n + 1):
            for mm in range(n + 1):
                M = M.merged(build_s_trace(n, ll, mm))
        return M
    if not (0 <= l <= n and 0 <= m <= n):
        raise ValueError("need 0 <= l, m <= n")
    M = QMatrix(n, "VV", "s-trace", f"{l},{m}")
    rho = rho_tr(l, m)
    how = lambda letters: _trace(letters, DOUBLED)
    for alpha in bitstrings(n, l):
        for beta in bitstrings(n, m):
            for gamma, delta in _outputs_vv(alpha, beta):
                if weight(gamma) != l:
                    continue
                v = _evaluate(_l_word(alpha, beta, gamma, delta), how)
                if not v.is_zero():
                    M.set(gamma + delta, alpha + beta, rho * v)
    _check_rational(M)
    return M


def build_s_boundary(n: int, s: int, sp: int) -> QMatrix:
    """``S^{s,s'}(z)`` on ``V (x) V``."""
    if s not in (1, 2) or sp not in (1, 2):
        raise ValueError("s, s' must be 1 or 2")
    M = QMatrix(n, "VV", f"s-boundary-{s},{sp}")
    how = lambda letters: _bnd(letters, DOUBLED, s, sp)
    rhos = {}
    for alpha in bitstrings(n):
        for beta in bitstrings(n):
            sig = ((-1) ** weight(alpha), (-1) ** weight(beta))
            if sig not in rhos:
                rhos[sig] = rho_boundary(s, sp, *sig)
            for gamma, delta in _outputs_vv(alpha, beta):
                v = _evaluate(_l_word(alpha, beta, gamma, delta), how)
                if not v.is_zero():
                    M.set(gamma + delta, alpha + beta, rhos[sig] * v)
    _check_rational(M)
    return M


def build_k_trace(n: int) -> QMatrix:
    """``K^tr(z)`` on ``V``; the block ``V_l -> V_{n-l}`` carries ``kappa^tr_l``."""
    M = QMatrix(n, "V", "k-trace")
    how = lambda letters: _trace(letters, SINGLE)
    for alpha in bitstrings(n):
        kap = kappa_tr(n, weight(alpha))
        for beta in bitstrings(n, n - weight(alpha)):
            v = _evaluate(_k_word(alpha, beta), how)
            if not v.is_zero():
                M.set(beta, alpha, kap * v)
    _check_rational(M)
    return M


def build_k_boundary(n: int, k: int, kp: int) -> QMatrix:
    """``K^{k,k'}(z)`` on ``V``."""
    if k not in (1, 2) or kp not in (1, 2):
        raise ValueError("k, k' must be 1 or 2")
    M = QMatrix(n, "V", f"k-boundary-{k},{kp}")
    kap = kappa_boundary(n, k, kp)
    how = lambda letters: _bnd(letters, SINGLE, k, kp)
    for alpha in bitstrings(n):
        for beta in bitstrings(n):
            v = _evaluate(_k_word(alpha, beta), how)
            if not v.is_zero():
                M.set(beta, alpha, kap * v)
    _check_rational(M)
    return M


def build(family: str, n: int, **kw) -> QMatrix:
    """Dispatch by family name: ``s-trace``, ``s-boundary``, ``k-trace``, ``k-boundary``."""
    if family == "s-trace":
        return build_s_trace(n, kw.get("l"), kw.get("m"))
    if family == "s-boundary":
        return build_s_boundary(n, kw["s"], kw["sp"])
    if family == "k-trace":
        return build_k_trace(n)
    if family == "k-boundary":
        return build_k_boundary(n, kw["k"], kw["kp"])
    raise ValueError(f"unknown family {family!r}")


def _first(n: int, l: int) -> tuple:
    return tuple(1 if i < l else 0 for i in range(n))


def normalization_anchors(M: QMatrix, l: int | None = None, m: int | None = None) -> list:
    """Anchor columns that fix the scalar normalization; returns the failures.

    For ``S`` the whole anchor column must equal the expected multiple of the
    input; for ``K`` only the leading coefficient is fixed.
    """
    n, fam = M.n, M.family
    cols = M.columns()
    bad = []

    def column(c):
        return {r: v for r, v in cols.get(c, ())}

    def expect_eigen(c, sign):
        got = column(c)
        want = {c: Scalar.from_int(sign)}
        if got != want:
            bad.append(f"{fam} |{format_bits(c, n)}>")

    if fam == "s-trace":
        if l is None and M.block and "," in M.block:
            l, m = map(int, M.block.split(","))
        ls = range(n + 1) if l is None else [l]
        ms = range(n + 1) if m is None else [m]
        for a in ls:
            for b in ms:
                expect_eigen(_first(n, a) + _first(n, b), (-1) ** max(a - b, 0))
    elif fam.startswith("s-boundary"):
        zero, e1 = _first(n, 0), _first(n, 1)
        expect_eigen(zero + zero, 1)
        if fam.endswith("2,2"):
            expect_eigen(e1 + e1, 1)
            expect_eigen(zero + e1, 1)
            expect_eigen(e1 + zero, -1)
    elif fam == "k-trace" or fam.startswith("k-boundary"):
        for a in range(n + 1):
            want = 1 if fam == "k-trace" else (-1) ** a
            c, r = _first(n, a), tuple(0 if i < a else 1 for i in range(n))
            if column(c).get(r) != Scalar.from_int(want):
                bad.append(f"{fam} |{format_bits(c, n)}> -> |{format_bits(r, n)}>")
    else:
        raise ValueError(f"no anchors for family {fam!r}")
    return bad


# ---------------------------------------------------------------- blocks and symmetries


def _grading(M: QMatrix):
    """``(col grade, row grade, expected row grade)`` for the family's selection rule."""
    n = M.n
    fam = M.family
    if fam == "s-trace":
        g = lambda b: (weight(b[:n]), weight(b[n:]))
        return g, g, lambda x: x
    if fam == "s-boundary-2,2":
        g = lambda b: (weight(b[:n]) % 2, weight(b[n:]) % 2)
        return g, g, lambda x: x
    if fam == "k-trace":
        return weight, weight, lambda l: n - l
    if fam == "k-boundary-2,2":
        g = lambda b: weight(b) % 2
        return g, g, lambda p: (p + n) % 2
    return None


def block_decompose(M: QMatrix) -> list:
    """Split into graded blocks; raise :class:`CrossBlockEntry` on a violation."""
    gr = _grading(M)
    if gr is None:
        return [M]
    gcol, grow, target = gr
    blocks: dict = {}
    for (r, c), v in sorted(M.entries.items()):
        src = gcol(c)
        if grow(r) != target(src):
            raise CrossBlockEntry(f"{M.family}: entry {(r, c)} leaves block {src}")
        blocks.setdefault(src, {})[(r, c)] = v
    out = []
    for src in sorted(blocks):
        if M.family.startswith("s-boundary") or M.family == "k-boundary-2,2":
            label = ",".join("+" if x == 0 else "-" for x in (src if isinstance(src, tuple) else (src,)))
        else:
            label = ",".join(map(str, src)) if isinstance(src, tuple) else str(src)
        B = QMatrix(M.n, M.space, M.family, label)
        B.entries = blocks[src]
        out.append(B)
    return out


def _all_blocks(M: QMatrix) -> list:
    """Every block label allowed by the grading, including empty ones."""
    n = M.n
    if M.family == "s-trace":
        return [f"{l},{m}" for l in range(n + 1) for m in range(n + 1)]
    return [B.block for B in block_decompose(M)]


@dataclass
class SymmetryReport:
    relation: str
    checked: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches


def symmetry_check(M: QMatrix, partner: QMatrix | None = None) -> SymmetryReport:
    """Reversal symmetries of S and K.

    For S: ``S^{gd}_{ab} = z^{|b|-|d|} S'^{a^v b^v}_{g^v d^v}`` where ``S'`` is
    ``S`` itself for ``S^tr`` and ``S^{s',s}`` for ``S^{s,s'}``.  For K:
    ``K^b_a = z^{n-|a|-|b|} K'^{e - a^v}_{e - b^v}``, ``K'`` = ``K^{k',k}``.
    Pass ``partner`` for the primed matrix; by default it is ``M`` itself.
    """
    P = M if partner is None else partner
    n = M.n
    bad = []
    z = Scalar.from_monomial(Z)
    if M.space == "VV":
        for (r, c), v in M.entries.items():
            gam, dlt, alp, bet = r[:n], r[n:], c[:n], c[n:]
            other = P[(reverse(alp) + reverse(bet), reverse(gam) + reverse(dlt))]
            if v != z ** (weight(bet) - weight(dlt)) * other:
                bad.append((r, c))
        rel = "S^{gd}_{ab} = z^{|b|-|d|} S'^{a^v b^v}_{g^v d^v}"
    else:
        for alp in bitstrings(n):
            for bet in bitstrings(n):
                v = M[(bet, alp)]
                other = P[(complement(reverse(alp)), complement(reverse(bet)))]
                if v != z ** (n - weight(alp) - weight(bet)) * other:
                    bad.append((bet, alp))
        rel = "K^b_a = z^{n-|a|-|b|} K'^{e-a^v}_{e-b^v}"
    # also run the partner's entries through, so missing entries are caught
    checked = len(M.entries)
    return SymmetryReport(rel, checked, sorted(bad))


# ---------------------------------------------------------------- closed forms


def _e(n: int, j: int) -> tuple:
    return tuple(1 if i == j else 0 for i in range(1, n + 1))


def closed_form_s_tr_min1(n: int, m: int, side: str = "m,1") -> QMatrix:
    """``S^tr_{m,1}(z)`` or ``S^tr_{1,m}(z)`` from the explicit element list.

    Independent of the matrix product route.  The diagonal elements of
    ``S^tr_{m,1}`` are assigned so that the ``m = 1`` case reproduces the
    six-vertex matrix and ``S^tr_{1,1}``; see the notes for the case labels.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    q2 = lambda e: _q(2 * e)
    z = Scalar.from_monomial(Z)
    den = ONE - Scalar.from_monomial(monomial(q=2 * m + 2, z=1))
    one_minus_q4 = ONE - _q(4)
    sgn = Scalar.from_int((-1) ** (m + 1))
    mixed = Scalar.from_int((-1) ** m) * _q(2) * (ONE - Scalar.from_monomial(monomial(q=2 * m - 2, z=1))) / den
    if side == "m,1":
        M = QMatrix(n, "VV", "s-trace", f"{m},1")
        for alpha in bitstrings(n, m):
            for j in range(1, n + 1):
                col = alpha + _e(n, j)
                # diagonal
                M.set(col, col, sgn if alpha[j - 1] == 1 else mixed)
                for k in range(1, n + 1):
                    if k == j or alpha[k - 1] != 1 or alpha[j - 1] != 0:
                        continue
                    gamma = list(alpha)
                    gamma[j - 1], gamma[k - 1] = 1, 0
                    if j < k:
                        v = sgn * z * one_minus_q4 / den * q2(m - sum(alpha[j:k]))
                    else:
                        v = sgn * one_minus_q4 / den * q2(sum(alpha[k:j]))
                    M.set(tuple(gamma) + _e(n, k), col, v)
        return M
    if side == "1,m":
        M = QMatrix(n, "VV", "s-trace", f"1,{m}")
        for beta in bitstrings(n, m):
            for j in range(1, n + 1):
                col = _e(n, j) + beta
                M.set(col, col, ONE if beta[j - 1] == 1 else
                      -_q(2) * (ONE - Scalar.from_monomial(monomial(q=2 * m - 2, z=1))) / den)
                for k in range(1, n + 1):
                    if k == j or beta[k - 1] != 1 or beta[j - 1] != 0:
                        continue
                    delta = list(beta)
                    delta[j - 1], delta[k - 1] = 1, 0
                    if j < k:
                        v = one_minus_q4 / den * q2(sum(delta[j:k]))
                    else:
                        v = z * one_minus_q4 / den * q2(m - sum(delta[k:j]))
                    M.set(_e(n, k) + tuple(delta), col, v)
        return M
    raise ValueError("side must be 'm,1' or '1,m'")
