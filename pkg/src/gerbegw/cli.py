"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 invalid input, 3 a cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import psi_integrals
from .character_table import character_table, table_from_json
from .cocycles import (TwoCocycleA, U1Cocycle, cocycle_from_json, extract_extension, holonomy_cyclic,
                       is_coboundary, normalize, push_by_character, validate_cocycle)
from .counting import SurfaceGroupInstance, degree, omega, omega_brute_force
from .errors import CapExceeded, GerbeError, InvalidInput, VerificationFailure
from .exact_arith import Cyclotomic
from .finite_group import DEFAULT_ORDER_CAP, FiniteGroup, build_group
from .gw_engine import GWQuery, gw_bg, verify_decomposition, verify_product
from .twisted_algebra import TwistedAlgebra

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    output: str = "-"
    order_cap: int = DEFAULT_ORDER_CAP
    enum_cap: int = 10 ** 8
    memo_cap: int = psi_integrals.DEFAULT_CACHE_CAP

    def __post_init__(self):
        if min(self.order_cap, self.enum_cap, self.memo_cap) <= 0:
            raise InvalidInput("caps must be positive")


# -- input helpers ---------------------------------------------------------------

def _load_json(text: str):
    try:
        if text.lstrip().startswith(("{", "[")):
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {text!r}: {exc}") from None


def load_group(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """``builtin:NAME``, a JSON file path, or inline JSON."""
    looks_like_path = spec.endswith(".json") or "/" in spec or Path(spec).exists()
    if spec.startswith("builtin:") or not (spec.lstrip().startswith(("{", "[")) or looks_like_path):
        return build_group(spec, order_cap=order_cap)
    return build_group(_load_json(spec), order_cap=order_cap)


def load_twist(spec: str | None):
    """A cocycle file/inline JSON, or ``center:builtin:NAME[:l1,l2,...]`` for a pushed extension class."""
    if spec is None:
        return None
    if spec.startswith("center:"):
        rest = spec[len("center:"):]
        parts = rest.split(":")
        if len(parts) >= 3:
            gspec, lam = ":".join(parts[:2]), parts[2]
        else:
            gspec, lam = rest, None
        G = load_group(gspec)
        nu = extract_extension(G, G.center()).cocycle
        lam_exps = _ints(lam) if lam else [1] * len(nu.orders)
        return push_by_character(nu, lam_exps)
    c = cocycle_from_json(_load_json(spec))
    if isinstance(c, TwoCocycleA):
        raise InvalidInput("twisting needs a u1 cocycle")
    return c


def _ints(text: str | None) -> list[int]:
    if text is None or text.strip() == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"expected a comma-separated list of integers, got {text!r}") from None


def _value(v) -> str | dict:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Cyclotomic):
        return str(v.to_rational()) if v.is_rational() else v.to_json()
    return v


@contextmanager
def _open_output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- commands --------------------------------------------------------------------

def cmd_group(cfg, out):
    G = load_group(cfg.args.group, cfg.order_cap)
    info = {"group": G.to_json(), "order": G.order,
            "classes": [list(c.members) for c in G.conjugacy_classes()],
            "center": list(G.center().elements), "exponent": G.exponent}
    out.write(_dumps(info) + "\n")
    return EXIT_OK


def cmd_chartable(cfg, out):
    G = load_group(cfg.args.group, cfg.order_cap)
    if cfg.args.check:
        T = table_from_json(_load_json(cfg.args.check), group=G)
    else:
        T = character_table(G)
    out.write(_dumps(T.to_json()) + "\n")
    return EXIT_OK


def cmd_cocycle(cfg, out):
    a = cfg.args
    if a.cocycle:
        data = _load_json(a.cocycle)
        G = build_group(data["group"], order_cap=cfg.order_cap)
        nu = TwoCocycleA(G, data["coeff"]["cyclic"], data["exponents"]) if "cyclic" in data["coeff"] \
            else U1Cocycle(G, data["coeff"]["u1"], data["exponents"])
        rep = validate_cocycle(nu)
        row = {"validation": rep.to_json()}
        if rep.is_cocycle:
            nu = normalize(nu)
    elif a.group:
        G = load_group(a.group, cfg.order_cap)
        ext = extract_extension(G, G.center())
        nu = ext.cocycle
        rep = validate_cocycle(nu)
        row = {"cocycle": nu.to_json(), "validation": rep.to_json()}
    else:
        raise InvalidInput("give --group or --cocycle")
    if rep.is_cocycle:
        cob, wit = is_coboundary(nu)
        row["coboundary"] = cob
        if wit is not None:
            row["witness"] = {"phi": [list(p) if isinstance(p, tuple) else p for p in wit.phi],
                              "modulus": wit.modulus}
        hol = {}
        for q in range(nu.group.order):
            h = holonomy_cyclic(nu, q)
            hol[str(q)] = list(h) if isinstance(h, tuple) else _value(h)
        row["holonomy"] = hol
    out.write(_dumps(row) + "\n")
    out.write(_dumps({"summary": True, "ok": rep.is_cocycle}) + "\n")
    return EXIT_OK if rep.is_cocycle else EXIT_VERIFY


def cmd_omega(cfg, out):
    a = cfg.args
    G = load_group(a.group, cfg.order_cap)
    inst = SurfaceGroupInstance(G, a.genus, _ints(a.classes), a.central)
    v = omega(inst)
    out.write(str(v) + "\n")
    if a.check_brute_force:
        b = omega_brute_force(inst, cap=cfg.enum_cap)
        if b != v:
            out.write(_dumps({"summary": True, "ok": False, "formula": str(v), "brute_force": str(b)}) + "\n")
            return EXIT_VERIFY
    return EXIT_OK


def cmd_degree(cfg, out):
    a = cfg.args
    G = load_group(a.group, cfg.order_cap)
    sels = [_ints(s) for s in a.selections.split(";")]
    out.write(str(degree(G, a.genus, sels, a.central)) + "\n")
    return EXIT_OK


def cmd_psi(cfg, out):
    psi_integrals.set_cache_cap(cfg.memo_cap)
    out.write(str(psi_integrals.psi_integral(cfg.args.g, _ints(cfg.args.a))) + "\n")
    return EXIT_OK


def cmd_gw(cfg, out):
    a = cfg.args
    twist = load_twist(a.twist)
    if twist is not None:
        A = TwistedAlgebra(twist.group, twist, order_cap=cfg.order_cap)
    else:
        A = TwistedAlgebra(load_group(a.group, cfg.order_cap), order_cap=cfg.order_cap)
    if a.insertions_json:
        data = _load_json(a.insertions_json)
        ins = [A.element_from_json(d) for d in data]
    else:
        basis = A.center_basis()
        idx = _ints(a.insertions)
        if any(not 0 <= i < len(basis) for i in idx):
            raise InvalidInput(f"insertion index out of range (the center has dimension {len(basis)})")
        ins = [basis[i] for i in idx]
    exps = _ints(a.exponents) if a.exponents else None
    v = gw_bg(GWQuery(A, a.genus, ins, exps))
    val = _value(v)
    out.write((val if isinstance(val, str) else _dumps(val)) + "\n")
    return EXIT_OK


def cmd_decompose(cfg, out):
    a = cfg.args
    G = load_group(a.group, cfg.order_cap)
    rep = verify_decomposition(G, a.max_genus, a.max_points, a.max_weight, keep_rows=not a.summary_only)
    for row in rep.rows:
        out.write(_dumps(row) + "\n")
    if a.summary_only:
        for row in rep.failures:
            out.write(_dumps(row) + "\n")
    out.write(_dumps(rep.summary()) + "\n")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_product(cfg, out):
    a = cfg.args
    c1, c2 = load_twist(a.twist1), load_twist(a.twist2)
    K1 = c1.group if c1 is not None else load_group(a.k1, cfg.order_cap)
    K2 = c2.group if c2 is not None else load_group(a.k2, cfg.order_cap)
    rep = verify_product(K1, c1, K2, c2, a.max_genus, a.max_points, a.max_weight)
    for f in rep.failures:
        out.write(_dumps(f) + "\n")
    out.write(_dumps({"summary": True, "ok": rep.ok, "checks": rep.checks,
                      "mixed_idempotent_tuples": rep.notes.get("mixed_idempotent_tuples", 0)}) + "\n")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_selftest(cfg, out):
    from .selftest import run_all
    selected = set(_ints(cfg.args.criteria)) if cfg.args.criteria else None
    ok = True
    count = 0
    for res in run_all(selected):
        out.write(_dumps(res.to_json()) + "\n")
        out.flush()
        ok &= res.ok
        count += 1
    out.write(_dumps({"summary": True, "ok": ok, "criteria": count}) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "group": cmd_group, "chartable": cmd_chartable, "cocycle": cmd_cocycle, "omega": cmd_omega,
    "degree": cmd_degree, "psi": cmd_psi, "gw": cmd_gw, "decompose": cmd_decompose,
    "product-check": cmd_product, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gerbegw", description="Exact invariants of finite groups, "
                                "twisted group algebras and classifying stacks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default="-", help="output path, '-' for standard output")
    common.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    common.add_argument("--enum-cap", type=int, default=10 ** 8)
    common.add_argument("--memo-cap", type=int, default=psi_integrals.DEFAULT_CACHE_CAP)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("group", parents=[common], help="describe a group")
    s.add_argument("--group", required=True)

    s = sub.add_parser("chartable", parents=[common], help="exact character table")
    s.add_argument("--group", required=True)
    s.add_argument("--check", help="verify this table JSON instead of computing one")

    s = sub.add_parser("cocycle", parents=[common], help="validate a cocycle or extract one from G/Z(G)")
    s.add_argument("--group")
    s.add_argument("--cocycle")

    s = sub.add_parser("omega", parents=[common], help="normalized surface-group count")
    s.add_argument("--group", required=True)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--classes", required=True)
    s.add_argument("--central", type=int, default=0)
    s.add_argument("--check-brute-force", action="store_true")

    s = sub.add_parser("degree", parents=[common], help="degree formula over class selections")
    s.add_argument("--group", required=True)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--selections", required=True, help="e.g. '0,1;2' for two marked points")
    s.add_argument("--central", type=int, default=0)

    s = sub.add_parser("psi", parents=[common], help="descendant integral")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--a", required=True)

    s = sub.add_parser("gw", parents=[common], help="twisted invariant of a classifying stack")
    s.add_argument("--group")
    s.add_argument("--twist")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--insertions", help="indices into the center basis")
    s.add_argument("--insertions-json")
    s.add_argument("--exponents")

    s = sub.add_parser("decompose", parents=[common], help="verify the decomposition for G over G/Z(G)")
    s.add_argument("--group", required=True)
    s.add_argument("--max-genus", type=int, default=1)
    s.add_argument("--max-points", type=int, default=3)
    s.add_argument("--max-weight", type=int, default=None, help="bound on 2g+n")
    s.add_argument("--summary-only", action="store_true")

    s = sub.add_parser("product-check", parents=[common], help="verify the product formula")
    s.add_argument("--k1")
    s.add_argument("--twist1")
    s.add_argument("--k2")
    s.add_argument("--twist2")
    s.add_argument("--max-genus", type=int, default=2)
    s.add_argument("--max-points", type=int, default=3)
    s.add_argument("--max-weight", type=int, default=None)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance matrix")
    s.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return p


def run(config: RunConfig) -> int:
    with _open_output(config.output) as out:
        return COMMANDS[config.command](config, out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.command, args, args.output, args.order_cap, args.enum_cap, args.memo_cap)
        return run(cfg)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (VerificationFailure, GerbeError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
