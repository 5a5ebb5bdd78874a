"""Command line entry point: ``heytica <noun> <verb> [flags]``.

Payloads are JSON on stdout, logs go to stderr.  Exit status is 0 when all
verdicts hold, 1 when a verification verdict is false and 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Sequence

import jsonschema

from . import amalgam as amalgam_mod
from .amalgam import Diagram, random_configs, superamalgamate
from .catalog import Catalog, default_catalog
from .envelope import six_atom_witness
from .errors import AxiomError, FormatError, HeyticaError, IncompatibleOrders
from .heyting import (
    HAlg,
    Hom,
    RawTables,
    add_bottom,
    algebra_from_json,
    algebra_to_json,
    automorphisms,
    dual_poset,
    element_from_json,
    element_to_json,
    generated_subalgebra,
    validate_heyting_tables,
)
from .limit import Chain, break_join_irreducible, densify, new_chain, saturate, unsatisfied_tasks
from .orderings import (
    all_natural_orders,
    extend_order,
    is_admissible,
    kpt_witness,
    natural_order,
    order_forgetful_counterexample,
    ordered_amalgamate,
)
from .poset import PMorphism, canonical_form, poset_from_json, poset_to_dot, poset_to_json
from .report import WitnessReport
from .terms import eval_term, parse_term, star_term
from .verify import SUITES, Bounds, verify_all
from .witnesses import default_orbit_chain, infinite_orbit_witness, roelcke_family

log = logging.getLogger("heytica")


class UsageError(Exception):
    pass


# -- input helpers -----------------------------------------------------------


def _load_json(text: str | None, path: str | None = None) -> Any:
    if path:
        text = Path(path).read_text(encoding="utf-8")
    if text is None:
        raise UsageError("an input is required (--json TEXT or --file PATH)")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _algebra(args: argparse.Namespace) -> HAlg:
    obj = _load_json(args.json, args.file)
    if "dual" not in obj:
        raise UsageError('algebra JSON needs a "dual" poset')
    return algebra_from_json(obj)


def _tables(obj: dict) -> RawTables:
    try:
        return RawTables(obj["size"], obj["meet"], obj["join"], obj["imp"], obj["zero"], obj["one"])
    except KeyError as exc:
        raise UsageError(f"tables JSON lacks {exc}") from None


def _hom(obj: dict) -> Hom:
    src = algebra_from_json(obj["source"])
    tgt = algebra_from_json(obj["target"])
    return Hom(src, tgt, PMorphism(tgt.dual, src.dual, tuple(obj["dual_map"])))


def _diagram(obj: dict) -> Diagram:
    a, b, c = (algebra_from_json(obj[k]) for k in ("a", "b", "c"))
    e_b = Hom(a, b, PMorphism(b.dual, a.dual, tuple(obj["e_b"])))
    e_c = Hom(a, c, PMorphism(c.dual, a.dual, tuple(obj["e_c"])))
    return Diagram(a, b, c, e_b, e_c)


def _algebra_payload(h: HAlg) -> dict:
    out = algebra_to_json(h)
    out["size"] = h.size()
    out["code"] = canonical_form(h.dual).decode()
    return out


def _write_dot(path: str | None, parts: dict[str, HAlg]) -> None:
    if not path:
        return
    text = "".join(poset_to_dot(h.dual, name=k.replace("'", "p").replace("*", "s")) for k, h in parts.items())
    Path(path).write_text(text, encoding="utf-8")


def _report(rep: WitnessReport) -> tuple[dict, bool]:
    payload = rep.to_json()
    payload.update(rep.verdicts)
    return payload, rep.ok


# -- commands ----------------------------------------------------------------

Result = tuple[dict, bool]


def cmd_algebra(args: argparse.Namespace) -> Result:
    verb = args.verb
    if verb == "of-poset":
        p = poset_from_json(_load_json(args.json, args.file))
        h = HAlg(p)
        _write_dot(args.dot, {"dual": h})
        return _algebra_payload(h), True
    if verb == "dualize":
        obj = _load_json(args.json, args.file)
        h = validate_heyting_tables(_tables(obj)) if "meet" in obj else algebra_from_json(obj)
        d, _ = dual_poset(h)
        return {"dual": poset_to_json(d), "code": canonical_form(d).decode()}, True
    if verb == "validate":
        obj = _load_json(args.json, args.file)
        try:
            h = validate_heyting_tables(_tables(obj))
        except AxiomError as exc:
            return {"valid": False, "identity": exc.identity, "witness": list(exc.witness)}, False
        return {"valid": True, "algebra": _algebra_payload(h)}, True
    h = _algebra(args)
    if verb == "gen":
        gens = [element_from_json(h, g) for g in json.loads(args.gens or "[]")]
        sub, inc = generated_subalgebra(h, gens)
        return {
            "subalgebra": _algebra_payload(sub),
            "elements": [element_to_json(inc(x)) for x in sub.elements],
        }, True
    if verb == "star":
        hs, z0 = add_bottom(h)
        out: dict = {"star": _algebra_payload(hs), "old_zero": element_to_json(z0)}
        if args.term:
            x = element_from_json(h, json.loads(args.x or "[]"))
            t = parse_term(args.term)
            lhs = eval_term(star_term(t), hs, {"x": x | z0, "y": z0})
            rhs = eval_term(t, h, {"x": x}) | z0
            out.update({"term": str(t), "star_term": str(star_term(t)), "value": element_to_json(lhs), "agrees": lhs == rhs})
            return out, lhs == rhs
        return out, True
    if verb == "aut":
        auts = automorphisms(h)
        return {"count": len(auts), "dual_maps": [list(f.dual.map) for f in auts]}, True
    raise UsageError(f"unknown algebra verb {verb!r}")


def cmd_catalog(args: argparse.Namespace) -> Result:
    if args.verb == "build":
        cat = Catalog.build(args.n)
        if args.out:
            cat.save(args.out)
        return {"counts": cat.counts(), "path": args.out}, True
    if args.verb == "stats":
        if args.catalog:
            cat = Catalog.load(args.catalog)
        else:
            cat = default_catalog(args.n)
        return {"counts": cat.counts()}, True
    if args.verb == "iso":
        if len(args.paths) != 2:
            raise UsageError("catalog iso needs two algebra files")
        a, b = (algebra_from_json(_load_json(None, p)) for p in args.paths)
        same = canonical_form(a.dual) == canonical_form(b.dual)
        return {"isomorphic": same}, True
    raise UsageError(f"unknown catalog verb {args.verb!r}")


def cmd_amalgamate(args: argparse.Namespace) -> Result:
    d = _diagram(_load_json(args.json, args.diagram))
    am = superamalgamate(d)
    _write_dot(args.dot, {"amalgam": am.result})
    verdicts = {k: bool(v) for k, v in am.verdicts.items() if isinstance(v, bool)}
    payload = {
        "amalgam": _algebra_payload(am.result),
        "into_left": list(am.into_left.dual.map),
        "into_right": list(am.into_right.dual.map),
        "verdicts": verdicts,
    }
    return payload, all(verdicts.values())


def cmd_axioms(args: argparse.Namespace) -> Result:
    ch = saturate(new_chain(), 3, 2)
    host = ch.levels[min(2, ch.depth - 1)]
    rep = amalgam_mod.axiom_suite(random_configs(host, args.samples, args.seed), seed=args.seed)
    s = rep.summary()
    return {"samples": args.samples, "seed": args.seed, "axioms": s["axioms"], "failures": s["failures"][:20]}, rep.passed


def cmd_order(args: argparse.Namespace) -> Result:
    verb = args.verb
    if verb == "natural":
        h = _algebra(args)
        if args.primes:
            orders = [natural_order(h, json.loads(args.primes))]
        else:
            orders = all_natural_orders(h)
        return {"count": len(orders), "orders": [o.to_json() for o in orders]}, True
    if verb == "admissible":
        h = _algebra(args)
        els = h.elements
        order = [els[i] for i in json.loads(args.order or "[]")]
        ok = is_admissible(h, order)
        return {"admissible": ok}, True
    if verb == "extend":
        e = _hom(_load_json(args.json, args.file))
        o1 = natural_order(e.source, json.loads(args.primes)) if args.primes else all_natural_orders(e.source)[0]
        o2 = extend_order(e, o1)
        return {"order": o2.to_json()}, True
    if verb == "amalgamate":
        d = _diagram(_load_json(args.json, args.diagram))
        o1 = natural_order(d.b, json.loads(args.left)) if args.left else all_natural_orders(d.b)[0]
        o2 = natural_order(d.c, json.loads(args.right)) if args.right else all_natural_orders(d.c)[0]
        try:
            oa = ordered_amalgamate(d, o1, o2)
        except IncompatibleOrders as exc:
            return {"ordered": False, "reason": str(exc)}, False
        return {"amalgam": _algebra_payload(oa.amalgam.result), "order": oa.order.to_json(), "method": oa.method}, True
    raise UsageError(f"unknown order verb {verb!r}")


def cmd_witness(args: argparse.Namespace) -> Result:
    verb = args.verb
    builders: dict[str, Callable[[], WitnessReport]] = {
        "hneg": six_atom_witness,
        "amenability": kpt_witness,
        "forgetful": order_forgetful_counterexample,
        "roelcke": lambda: roelcke_family(args.n, args.bound or 5),
        "orbit": lambda: infinite_orbit_witness(default_orbit_chain() if args.saturated else None, [], args.k),
    }
    if verb not in builders:
        raise UsageError(f"unknown witness {verb!r}")
    rep = builders[verb]()
    _write_dot(args.dot, rep.stages)
    return _report(rep)


def _load_chain(path: str | None) -> Chain:
    if not path:
        return saturate(new_chain(), 3, 2)
    obj = _load_json(None, path)
    try:
        validate_payload("chain", obj)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"bad chain file: {exc.message}") from None
    return Chain.from_json(obj)


def cmd_limit(args: argparse.Namespace) -> Result:
    if args.verb == "grow":
        ch = saturate(new_chain(), args.bound or 3, args.rounds)
        obj = ch.to_json()
        validate_payload("chain", obj)
        if args.out:
            Path(args.out).write_text(json.dumps(obj, sort_keys=True) + "\n", encoding="utf-8")
        return {"levels": [lv.dual.n for lv in ch.levels], "realized": ch.realized, "skipped": ch.skipped, "path": args.out}, True
    if args.verb == "check":
        ch = _load_chain(args.chain)
        what = args.what or "extension"
        if what == "extension":
            bad = unsatisfied_tasks(ch, args.bound or 3, args.rounds)
            return {"check": what, "unsatisfied": len(bad)}, not bad
        import random

        rng = random.Random(args.seed)
        h = ch.top
        lv = ch.depth - 1
        ok = True
        for _ in range(args.samples):
            a = h.interior(rng.getrandbits(h.dual.n))
            if a == h.one:
                continue
            p = rng.choice([q for q in range(h.dual.n) if not (a >> q) & 1])
            b = a | h.dual.up[p]
            c = Chain(list(ch.levels), list(ch.maps))
            if what == "density":
                c, m = densify(c, a, b)
                la, lb = c.lift(a, lv), c.lift(b, lv)
                ok &= la & ~m == 0 and m & ~lb == 0 and m not in (la, lb)
            elif what == "irreducible":
                c, x, y = break_join_irreducible(c, b)
                lb = c.lift(b, lv)
                ok &= (x | y) == lb and lb not in (x, y)
            else:
                raise UsageError(f"unknown limit check {what!r}")
        return {"check": what, "samples": args.samples, "seed": args.seed, "ok": ok}, ok
    raise UsageError(f"unknown limit verb {args.verb!r}")


def cmd_verify(args: argparse.Namespace) -> Result:
    only = args.only.split(",") if args.only else None
    skip = args.skip.split(",") if args.skip else None
    for name in (only or []) + (skip or []):
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}")
    bounds = Bounds(dual=args.bound or 3, samples=args.samples, seed=args.seed)
    payload = verify_all(bounds, only, skip)
    for r in payload["suites"]:
        log.info("%-22s %s  %.2fs", r["suite"], "pass" if r["verdict"] else "FAIL", r["runtime"])
        if not args.timings:
            del r["runtime"]
    return payload, payload["ok"]


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace], Result], str]] = {
    "algebra": (cmd_algebra, "algebra"),
    "catalog": (cmd_catalog, "catalog"),
    "amalgamate": (cmd_amalgamate, "amalgam"),
    "axioms": (cmd_axioms, "axioms"),
    "order": (cmd_order, "payload"),
    "witness": (cmd_witness, "report"),
    "limit": (cmd_limit, "payload"),
    "verify": (cmd_verify, "verify"),
}


# -- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", help="input JSON text")
    p.add_argument("--file", help="input JSON file")
    p.add_argument("--dot", metavar="FILE", help="write DOT renderings of the duals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int)
    p.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heytica", description="Finite Heyting algebras, amalgams and limit approximations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="noun", required=True)

    p = sub.add_parser("algebra")
    p.add_argument("verb", choices=["of-poset", "dualize", "validate", "gen", "star", "aut"])
    p.add_argument("--gens", help="JSON list of elements (each a list of dual points)")
    p.add_argument("--term", help="term for `star`, e.g. '(-> x 0)'")
    p.add_argument("--x", help="element assigned to x for `star --term`")
    _common(p)

    p = sub.add_parser("catalog")
    p.add_argument("verb", choices=["build", "stats", "iso"])
    p.add_argument("paths", nargs="*")
    p.add_argument("-n", type=int, default=5)
    p.add_argument("-o", dest="out_file")
    p.add_argument("--catalog", help="catalog file (default: $HEYTICA_CATALOG or a fresh build)")
    _common(p)

    p = sub.add_parser("amalgamate")
    p.add_argument("--diagram", help="diagram JSON file")
    _common(p)

    p = sub.add_parser("axioms")
    p.add_argument("--samples", type=int, default=200)
    _common(p)

    p = sub.add_parser("order")
    p.add_argument("verb", choices=["natural", "admissible", "extend", "amalgamate"])
    p.add_argument("--primes", help="prime order as a JSON list of dual points, least first")
    p.add_argument("--order", help="element order as a JSON list of element indices")
    p.add_argument("--diagram")
    p.add_argument("--left")
    p.add_argument("--right")
    _common(p)

    p = sub.add_parser("witness")
    p.add_argument("verb", choices=["hneg", "amenability", "forgetful", "roelcke", "orbit"])
    p.add_argument("-n", type=int, default=4)
    p.add_argument("-k", type=int, default=4)
    p.add_argument("--saturated", action="store_true", help="orbit: start from a saturated chain")
    _common(p)

    p = sub.add_parser("limit")
    p.add_argument("verb", choices=["grow", "check"])
    p.add_argument("what", nargs="?", choices=["density", "irreducible", "extension"])
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--chain", help="chain JSON file")
    p.add_argument("--samples", type=int, default=50)
    _common(p)

    p = sub.add_parser("verify")
    p.add_argument("--only", help="comma-separated suite names")
    p.add_argument("--skip", help="comma-separated suite names")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--timings", action="store_true", help="include runtimes in the payload")
    _common(p)
    return parser


def _schema(name: str) -> dict:
    text = resources.files("heytica").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_payload(kind: str, payload: dict) -> None:
    jsonschema.validate(payload, _schema(kind))


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Dispatch ``argv``; returns the exit code and the stdout text."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 2), ""
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    if getattr(args, "out_file", None):
        args.out = args.out_file
    handler, kind = COMMANDS[args.noun]
    try:
        payload, ok = handler(args)
    except (UsageError, FormatError, OSError, KeyError, ValueError, TypeError) as exc:
        print(f"heytica: error: {exc}", file=sys.stderr)
        return 2, ""
    except HeyticaError as exc:
        print(f"heytica: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2, ""
    validate_payload(kind, payload)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    return (0 if ok else 1), text


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
