"""Comparison against the embedded corpus of worked 3D elements and 2D matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .matprod import build, closed_form_s_tr_min1, build_s_trace
from .scalar import parse_scalar
from .threedim import k3d_element, r3d_element

__all__ = ["GoldenResult", "load", "check_3d", "check_2d", "check_closed_forms", "check_all"]


@dataclass
class GoldenResult:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.detail:
            d["detail"] = self.detail
        return d


@lru_cache(maxsize=None)
def load(which: str) -> dict:
    """``which`` is ``"3d"`` or ``"2d"``."""
    path = resources.files("qreflect") / "data" / f"goldens_{which}.json"
    return json.loads(path.read_text())


def check_3d() -> list:
    out = []
    for rec in load("3d")["records"]:
        o, i = tuple(rec["out"]), tuple(rec["in"])
        got = r3d_element(*o, *i) if rec["kind"] == "R3D" else k3d_element(*o, *i)
        want = parse_scalar(rec["value"])
        name = f"{rec['kind']} {o} <- {i}"
        out.append(GoldenResult(name, got.to_str() == want.to_str(),
                                "" if got == want else f"got {got}, expected {want}"))
    return out


def _bits(s: str) -> tuple:
    return tuple(int(c) for c in s.replace(",", ""))


def check_2d() -> list:
    out = []
    for rec in load("2d")["matrices"]:
        M = build(rec["family"], rec["n"], **rec["params"])
        bad = []
        for col, rows in rec["columns"].items():
            c = _bits(col)
            want = {_bits(r): parse_scalar(v) for r, v in rows.items()}
            got = {r: v for r, v in M.columns().get(c, ())}
            for r in sorted(set(want) | set(got)):
                a, b = got.get(r), want.get(r)
                if a is None or b is None or a.to_str() != b.to_str():
                    bad.append(f"|{col}> -> row {''.join(map(str, r))}: got {a}, expected {b}")
        out.append(GoldenResult(rec["name"], not bad, "; ".join(bad[:3])))
    return out


def check_closed_forms(nmax: int = 4) -> list:
    """Closed-form ``S^tr_{m,1}`` and ``S^tr_{1,m}`` against the matrix product route."""
    out = []
    for n in range(1, nmax + 1):
        for m in range(1, n + 1):
            for side, (l, mm) in (("m,1", (m, 1)), ("1,m", (1, m))):
                A = build_s_trace(n, l, mm)
                B = closed_form_s_tr_min1(n, m, side)
                keys = set(A.entries) | set(B.entries)
                bad = [k for k in keys if A[k].to_str() != B[k].to_str()]
                out.append(GoldenResult(f"closed form S^tr_{{{l},{mm}}} n={n}", not bad,
                                        f"{len(bad)} entries differ" if bad else ""))
    return out


def check_all() -> list:
    return check_3d() + check_2d() + check_closed_forms()
