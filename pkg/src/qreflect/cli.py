"""Command line front end.

Exit codes: 0 when everything passes, 1 on a verification failure, 2 on a
usage error.  Output is deterministic: certificates are written with sorted
keys and without timings unless ``--timings`` is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import goldens, matprod, uqrep, verify
from .threedim import Element3D

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cert_text(c: verify.Certificate, timings: bool) -> dict:
    d = c.to_json()
    if not timings:
        d.pop("seconds", None)
    return d


# ---------------------------------------------------------------- commands


def cmd_matrix(a) -> int:
    kw = {}
    if a.family == "s-trace":
        kw = {"l": a.l, "m": a.m}
    elif a.family == "s-boundary":
        kw = {"s": a.s, "sp": a.sp}
    elif a.family == "k-boundary":
        kw = {"k": a.k, "kp": a.kp}
    if any(v is None for k, v in kw.items() if k not in ("l", "m")):
        raise UsageError(f"--family {a.family} needs " + ", ".join(f"--{k}" for k in kw))
    M = matprod.build(a.family, a.n, **kw)
    _emit(M.dumps() if a.format == "json" else M.to_text(), a.out)
    return EXIT_OK


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError(f"--identity {a.identity} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _verify(a) -> list:
    ident, jobs = a.identity, a.jobs
    if ident == "ybe":
        _need(a, "n")
        fam = "tr" if a.family in (None, "tr") else "boundary"
        if fam == "boundary":
            _need(a, "s", "sp")
        return [verify.check_ybe(fam, a.n, a.s, a.sp, jobs=jobs)]
    if ident == "re":
        _need(a, "n")
        sf = "tr" if a.family in (None, "tr") else "boundary"
        kf = a.k_family or sf
        if sf == "boundary":
            _need(a, "s", "sp")
        if kf == "boundary":
            _need(a, "k", "kp")
        return [verify.check_re(sf, kf, a.n, a.s, a.sp, a.k, a.kp, jobs=jobs)]
    if ident == "qre":
        comps = a.components.split(",") if a.components else None
        return [verify.check_quantized_re(a.truncation, comps, jobs=jobs)]
    if ident == "qre-full":
        return [verify.check_quantized_re_full(a.truncation, jobs=jobs)]
    if ident == "rlll":
        return [verify.check_rlll(a.truncation, jobs=jobs)]
    if ident == "r-relations":
        return [verify.check_r_relations(a.truncation, jobs=jobs)]
    if ident == "eigen-r":
        return [verify.check_boundary_eigen("R", s, truncation=a.truncation, jobs=jobs)
                for s in ((a.s,) if a.s else (1, 2))]
    if ident == "eigen-k":
        pairs = [(a.s, a.k)] if a.s and a.k else [(1, 1), (1, 2), (2, 2)]
        return [verify.check_boundary_eigen("K", s, k, truncation=a.truncation, jobs=jobs)
                for s, k in pairs]
    if ident == "inversion":
        kinds = (a.kind,) if a.kind else ("R", "K")
        return [verify.check_inversion(k, a.truncation, a.l_max, jobs=jobs) for k in kinds]
    if ident == "tetra":
        _need(a, "inp")
        return [verify.check_tetra_spot(a.inp, a.outp)]
    if ident == "3dre":
        _need(a, "inp")
        return [verify.check_3dre_spot(a.inp, a.outp)]
    if ident in ("intertwiner", "weyl"):
        _need(a, "type", "n")
        spec = uqrep.AlgebraSpec(a.type, a.n, a.sign)
        if ident == "weyl":
            return [uqrep.check_weyl(spec)]
        if a.type == "A":
            blocks = [(a.l, a.m)] if a.l is not None and a.m is not None else \
                [(l, m) for l in range(a.n + 1) for m in range(a.n + 1)]
            return [uqrep.check_intertwiner(spec, l=l, m=m) for l, m in blocks]
        if a.type == "D1":
            blocks = [(a.sigma, a.sigmap)] if a.sigma and a.sigmap else \
                [(s, t) for s in (1, -1) for t in (1, -1)]
            return [uqrep.check_intertwiner(spec, sigma=s, sigmap=t) for s, t in blocks]
        return [uqrep.check_intertwiner(spec)]
    raise UsageError(f"unknown identity {ident!r}")


def cmd_verify(a) -> int:
    certs = _verify(a)
    body = [_cert_text(c, a.timings) for c in certs]
    if a.format == "json":
        _emit(json.dumps(body[0] if len(body) == 1 else body, indent=1, sort_keys=True), a.out)
    else:
        lines = []
        for c in certs:
            line = f"{c.identity} {json.dumps(c.params, sort_keys=True)}: {c.status.upper()} ({c.components} components)"
            if c.witness:
                line += f" witness: {c.witness}"
            lines.append(line)
        _emit("\n".join(lines), a.out)
    return EXIT_OK if all(c.passed for c in certs) else EXIT_FAIL


def cmd_goldens(a) -> int:
    res = goldens.check_all()
    if a.format == "json":
        _emit(json.dumps([r.to_json() for r in res], indent=1, sort_keys=True), a.out)
    else:
        lines = [f"{'PASS' if r.ok else 'FAIL'} {r.name}" + (f"  {r.detail}" if r.detail else "") for r in res]
        lines.append(f"{sum(r.ok for r in res)}/{len(res)} match")
        _emit("\n".join(lines), a.out)
    return EXIT_OK if all(r.ok for r in res) else EXIT_FAIL


def cmd_element(a) -> int:
    kind = {"r3d": "R3D", "k3d": "K3D"}[a.kind]
    want = 3 if kind == "R3D" else 4
    if len(a.outp) != want or len(a.inp) != want:
        raise UsageError(f"{a.kind} takes {want} indices for --out and --in")
    el = Element3D(kind, a.outp, a.inp, a.doubled)
    if a.format == "json":
        _emit(json.dumps(el.to_json(), sort_keys=True), a.out)
    else:
        _emit(el.value.to_str(), a.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qreflect", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $QREFLECT_JOBS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("matrix", parents=[common], help="build an S or K matrix")
    m.add_argument("--family", required=True, choices=("s-trace", "s-boundary", "k-trace", "k-boundary"))
    m.add_argument("--n", type=int, required=True)
    for name in ("s", "sp", "k", "kp"):
        m.add_argument(f"--{name}", type=int, choices=(1, 2))
    m.add_argument("--l", type=int)
    m.add_argument("--m", type=int)
    m.set_defaults(func=cmd_matrix)

    v = sub.add_parser("verify", parents=[common], help="run one verification and print its certificate")
    v.add_argument("--identity", required=True,
                   choices=("ybe", "re", "qre", "qre-full", "rlll", "r-relations", "eigen-r", "eigen-k", "inversion",
                            "tetra", "3dre", "intertwiner", "weyl"))
    v.add_argument("--family", choices=("tr", "boundary"), help="S family for ybe and re")
    v.add_argument("--k-family", choices=("tr", "boundary"), help="K family for re (default: --family)")
    v.add_argument("--n", type=int)
    for name in ("s", "sp", "k", "kp"):
        v.add_argument(f"--{name}", type=int, choices=(1, 2))
    v.add_argument("--truncation", type=int, default=3)
    v.add_argument("--components", help="comma separated quantized RE components, e.g. 0000,1110")
    v.add_argument("--kind", choices=("R", "K"), help="operator for inversion")
    v.add_argument("--l-max", type=int)
    v.add_argument("--in", dest="inp", type=_ints)
    v.add_argument("--out-index", dest="outp", type=_ints, help="single output component for spot checks")
    v.add_argument("--type", choices=uqrep.TYPES)
    v.add_argument("--sign", type=int, choices=(1, -1), default=1)
    v.add_argument("--l", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--sigma", type=int, choices=(1, -1))
    v.add_argument("--sigmap", type=int, choices=(1, -1))
    v.add_argument("--timings", action="store_true", help="include wall-clock seconds")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("goldens", parents=[common], help="compare against the embedded worked examples")
    g.set_defaults(func=cmd_goldens)

    e = sub.add_parser("element", help="one matrix element of the 3D R or 3D K")
    e.add_argument("--kind", required=True, choices=("r3d", "k3d"))
    e.add_argument("--out", dest="outp", required=True, type=_ints)
    e.add_argument("--in", dest="inp", required=True, type=_ints)
    e.add_argument("--doubled", action="store_true", help="3D R with q -> q^2")
    e.add_argument("--format", choices=("json", "text"), default="text")
    e.set_defaults(func=cmd_element, out=None, jobs=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if a.jobs is not None:
        if a.jobs < 1:
            parser.print_usage(sys.stderr)
            sys.stderr.write("qreflect: --jobs must be positive\n")
            return EXIT_USAGE
        os.environ["QREFLECT_JOBS"] = str(a.jobs)
    try:
        return a.func(a)
    except (UsageError, verify.InadmissiblePair, uqrep.SpecializationMismatch, ValueError) as exc:
        sys.stderr.write(f"qreflect: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
