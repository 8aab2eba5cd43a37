"""polya-lab command line.

Exit codes: 0 success, 1 error (bad input, library error), 2 undecided or
uncertified result.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from sympy import factorint

from .dihedral import (
    NOT_POLYA,
    POLYA,
    SKIPPED,
    UNDECIDED,
    brumer_instance,
    brumer_quintic,
    certify_dihedral,
    divisibility_audit,
    lavallee_instance,
    lavallee_quintic,
    lavallee_sweep,
    make_instance,
)
from .errors import NotDihedral, PolyaLabError, RelationSearchIncomplete
from .numfield.classgroup import RelationEffort, class_group
from .numfield.field import NumberField, decompose_prime
from .poly import IntPoly, discriminant, is_irreducible_over_Q, squarefree_kernel
from .polya import DEFAULT_WINDOW, polya_group
from .quadratic import quad_class_group, quad_field, quad_polya_group
from .serialize import classgroup_to_dict, field_to_dict, jsonable, prime_to_dict

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2


@dataclass
class RunConfig:
    effort: int = 1
    bound: int | None = None
    window: int = DEFAULT_WINDOW
    samples: int = 200
    fmt: str = "json"
    seed: int = 1
    jobs: int = 1

    def relation_effort(self) -> RelationEffort:
        base = RelationEffort(seed=self.seed)
        return base.scaled(self.effort) if self.effort > 1 else base

    def to_dict(self) -> dict:
        return {
            "effort": self.effort,
            "bound": self.bound,
            "window": self.window,
            "samples": self.samples,
            "seed": self.seed,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _parse_poly(text: str) -> IntPoly:
    if not text or not text.strip():
        raise ValueError("empty polynomial")
    return IntPoly.from_text(text)


def _config(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("POLYA_LAB_SEED", "1"))
    return RunConfig(
        effort=args.effort,
        bound=getattr(args, "bound", None),
        window=getattr(args, "window", DEFAULT_WINDOW),
        samples=getattr(args, "samples", 200),
        fmt=args.format,
        seed=seed,
        jobs=getattr(args, "jobs", 1),
    )


def _emit(report: dict, cfg: RunConfig, out=None):
    out = out or sys.stdout
    report = dict(report)
    report["config"] = cfg.to_dict()
    data = jsonable(report)
    if cfg.fmt == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        for k, v in data.items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v)
            out.write(f"{k}: {v}\n")


# ---------------------------------------------------------------- commands


def cmd_field(args, cfg):
    K = NumberField(_parse_poly(args.poly))
    rep = field_to_dict(K)
    ram = sorted(factorint(abs(K.disc))) if abs(K.disc) > 1 else []
    rep["ramified_primes"] = [
        {"p": p, "factors": [prime_to_dict(P) for P in decompose_prime(K, p)]} for p in ram
    ]
    _emit(rep, cfg)
    return EXIT_OK


def _class_group_or_partial(K, cfg):
    try:
        return class_group(K, cfg.relation_effort())
    except RelationSearchIncomplete as exc:
        return exc.partial


def cmd_classgroup(args, cfg):
    K = NumberField(_parse_poly(args.poly))
    cg = _class_group_or_partial(K, cfg)
    rep = {"field": field_to_dict(K), "class_group": classgroup_to_dict(cg)}
    _emit(rep, cfg)
    return EXIT_OK if cg.certified else EXIT_UNDECIDED


def cmd_polya(args, cfg):
    K = NumberField(_parse_poly(args.poly))
    cg = _class_group_or_partial(K, cfg)
    rep = {"field_disc": str(K.disc), "h": cg.h, "class_invariants": cg.invariant_factors, "certified": cg.certified}
    if not cg.certified:
        rep["polya"] = None
        _emit(rep, cfg)
        return EXIT_UNDECIDED
    pg = polya_group(K, cg, B=cfg.bound, window=cfg.window, galois=True if args.galois else None)
    rep["polya"] = pg.to_dict()
    rep["is_polya"] = pg.is_trivial if pg.certified_complete or not pg.is_trivial else None
    _emit(rep, cfg)
    return EXIT_OK if (pg.certified_complete or not pg.is_trivial) else EXIT_UNDECIDED


def cmd_quad(args, cfg):
    d = args.d
    qf = quad_field(d)
    fcg = quad_class_group(d)
    qp = quad_polya_group(d, fcg)
    rep = {
        "d": d,
        "D": qf.D,
        "h": fcg.h,
        "invariant_factors": fcg.invariant_factors,
        "fundamental_unit": None
        if qf.fundamental_unit is None
        else {"x": qf.fundamental_unit[0], "y": qf.fundamental_unit[1], "denom": qf.fundamental_unit[2]},
        "unit_norm": qf.unit_norm,
        "s": qf.s_count,
        "polya_order": qp.order,
        "is_polya": qp.is_polya,
    }
    _emit(rep, cfg)
    return EXIT_OK


def cmd_brumer(args, cfg):
    f, r = brumer_quintic(args.s, args.t)
    rep = {"s": args.s, "t": args.t, "f": list(f.coeffs), "f_text": str(f), "radicand": r}
    if r == 0 or not is_irreducible_over_Q(f):
        rep["degenerate"] = True
        rep["radicand_kernel"] = None
    else:
        rep["degenerate"] = False
        rep["radicand_kernel"] = squarefree_kernel(r)
    _emit(rep, cfg)
    return EXIT_OK


def cmd_lavallee(args, cfg):
    f, D, r = lavallee_quintic(args.s)
    rep = {
        "s": args.s,
        "f": list(f.coeffs),
        "f_text": str(f),
        "D": D,
        "disc_f": discriminant(f),
        "radicand": r,
        "radicand_is_square": r >= 0 and math.isqrt(r) ** 2 == r,
    }
    _emit(rep, cfg)
    return EXIT_OK


def _instance(args, cfg):
    if args.brumer is not None:
        return brumer_instance(args.brumer[0], args.brumer[1], cfg.samples)
    if args.lavallee is not None:
        return lavallee_instance(args.lavallee, cfg.samples)
    if args.poly:
        return make_instance(_parse_poly(args.poly), args.radicand, "poly", cfg.samples)
    raise ValueError("one of --brumer, --lavallee or --poly is required")


def cmd_certify(args, cfg):
    inst = _instance(args, cfg)
    cert = certify_dihedral(inst, cfg.relation_effort())
    rep = cert.to_dict()
    rep["galois_evidence"] = inst.evidence.to_dict()
    rep["notes"] = cert.notes
    _emit(rep, cfg)
    return EXIT_UNDECIDED if cert.verdict == UNDECIDED else EXIT_OK


def read_expectation(path):
    """Parse an expected-list file with [polya] / [notpolya] sections."""
    expect = {}
    section = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.lower() in ("[polya]", "[notpolya]"):
                section = POLYA if line.lower() == "[polya]" else NOT_POLYA
                continue
            if section is None:
                raise ValueError(f"value {line!r} outside a section")
            expect[int(line)] = section
    return expect


def _sweep_one(s, samples):
    return lavallee_sweep([s], samples)[0]


def cmd_sweep(args, cfg):
    values = list(range(args.start, args.stop + 1))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            rows = list(ex.map(_sweep_one, values, [cfg.samples] * len(values)))
    else:
        rows = lavallee_sweep(values, cfg.samples)
    rep = {"rows": [r.to_dict() for r in rows]}
    rep["summary"] = {
        "polya": [r.s for r in rows if r.verdict == POLYA],
        "not_polya": [r.s for r in rows if r.verdict == NOT_POLYA],
        "skipped": [r.s for r in rows if r.verdict == SKIPPED],
        "undecided": [r.s for r in rows if r.verdict == UNDECIDED],
    }
    code = EXIT_OK
    if args.expect:
        expect = read_expectation(args.expect)
        got = {r.s: r.verdict for r in rows}
        # values outside the swept range are not compared
        diff = [{"s": s, "expected": v, "got": got[s]} for s, v in sorted(expect.items()) if s in got and got[s] != v]
        rep["diff"] = diff
        if diff:
            code = EXIT_UNDECIDED
    _emit(rep, cfg)
    return code


def _search_cubics(limit, min_t, samples):
    """Non-pure complex cubics X^3 + aX + b with at least ``min_t`` totally ramified primes."""
    for b in range(1, limit + 1):
        for a in range(-limit, limit + 1):
            f = IntPoly((b, a, 0, 1))
            if discriminant(f) >= 0 or not is_irreducible_over_Q(f):
                continue
            try:
                inst = make_instance(f, samples=samples)
            except NotDihedral:
                continue
            if inst.d_E != -3 and inst.t_K >= min_t:
                yield inst


def cmd_audit(args, cfg):
    if args.search_cubics:
        found = []
        for inst in _search_cubics(args.search_cubics, 2, min(cfg.samples, 60)):
            rep, _ = divisibility_audit(inst, cfg.relation_effort(), cfg.bound)
            found.append({"f": list(inst.poly.coeffs), "disc": inst.K.disc, "audit": rep.to_dict()})
            if len(found) >= args.max_hits:
                break
        _emit({"search": found}, cfg)
        return EXIT_OK
    inst = make_instance(_parse_poly(args.poly), args.radicand, "poly", cfg.samples)
    rep, pg = divisibility_audit(inst, cfg.relation_effort(), cfg.bound)
    out = rep.to_dict()
    out["conductor"] = inst.conductor
    out["polya"] = pg.to_dict()
    _emit(out, cfg)
    return EXIT_UNDECIDED if rep.status == "conditional" else EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--effort", type=_positive, default=1, help="relation-search effort multiplier")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $POLYA_LAB_SEED or 1)")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = _Parser(prog="polya-lab", description="Polya groups and dihedral Polya extensions of Q")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("field", parents=[common], help="integral basis, discriminant, ramified primes")
    s.add_argument("--poly", required=True, help="ascending coefficients, e.g. -19,0,0,1")

    s = sub.add_parser("classgroup", parents=[common], help="class group with certification flag")
    s.add_argument("--poly", required=True)

    s = sub.add_parser("polya", parents=[common], help="Polya group as a subgroup of the class group")
    s.add_argument("--poly", required=True)
    s.add_argument("--bound", type=_positive, default=None)
    s.add_argument("--window", type=_positive, default=DEFAULT_WINDOW)
    s.add_argument("--galois", action="store_true", help="declare K/Q Galois")

    s = sub.add_parser("quad", parents=[common], help="quadratic field summary")
    s.add_argument("-d", type=int, required=True, help="squarefree d")

    s = sub.add_parser("brumer", parents=[common], help="Brumer quintic and radicand")
    s.add_argument("s", type=int)
    s.add_argument("t", type=int)

    s = sub.add_parser("lavallee", parents=[common], help="Lavallee quintic and D(s)")
    s.add_argument("s", type=int)

    s = sub.add_parser("certify", parents=[common], help="Polya certificate for a D_l closure")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--brumer", type=int, nargs=2, metavar=("S", "T"))
    g.add_argument("--lavallee", type=int, metavar="S")
    g.add_argument("--poly")
    s.add_argument("--radicand", type=int, default=None)
    s.add_argument("--samples", type=_positive, default=200)

    s = sub.add_parser("sweep", parents=[common], help="Lavallee family sweep")
    s.add_argument("--from", dest="start", type=int, default=-17)
    s.add_argument("--to", dest="stop", type=int, default=17)
    s.add_argument("--expect", default=None, help="file with [polya] / [notpolya] sections")
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--samples", type=_positive, default=200)

    s = sub.add_parser("audit", parents=[common], help="divisibility of #Po(K) by l")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly")
    g.add_argument("--search-cubics", type=_positive, metavar="N", help="search X^3+aX+b with |a|, b <= N")
    s.add_argument("--radicand", type=int, default=None)
    s.add_argument("--bound", type=_positive, default=None)
    s.add_argument("--samples", type=_positive, default=200)
    s.add_argument("--max-hits", type=_positive, default=3)
    return p


COMMANDS = {
    "field": cmd_field,
    "classgroup": cmd_classgroup,
    "polya": cmd_polya,
    "quad": cmd_quad,
    "brumer": cmd_brumer,
    "lavallee": cmd_lavallee,
    "certify": cmd_certify,
    "sweep": cmd_sweep,
    "audit": cmd_audit,
}


_VALUE_FLAGS = ("--poly", "--radicand")


def _bind_values(argv):
    """Attach the token after --poly/--radicand so values like -19,0,0,1 parse."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_bind_values(argv))
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_ERROR
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (PolyaLabError, ValueError, OSError) as exc:
        print(f"polya-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
