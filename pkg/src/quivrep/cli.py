"""Command line front end.

Every subcommand reads the workspace from the ``-i`` files, runs one library
operation and prints either DSL text (default) or the JSON envelope
(``--json``)::

    {"schema": 1, "command": ..., "status": "ok" | "error",
     "payload": {...}, "diagnostics": [{"severity", "location", "message"}]}

Exit status is 0 on success, 1 for a domain error (a non-commuting square, a
failed coalgebra axiom, ...) and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import coalg as _coalg
from . import dsl
from . import limits as _limits
from . import nquiver as _nq
from . import nrep as _nrep
from . import rep as _rep
from .errors import ArgumentError, DslError, QuivrepError, UnknownCommand
from .exactlin import Field, Matrix
from .quiver import enumerate_paths, path_count_matrix

SCHEMA = 1
MAX_SEED = 2**64 - 1


# serialization

def matrix_json(m: Matrix) -> list[list[str]]:
    return m.to_strings()


def rep_json(r: _rep.Representation) -> dict:
    return {
        "field": r.field.name,
        "dims": {v: r.dims[v] for v in r.quiver.vertices},
        "maps": {a.label: matrix_json(r.mats[a.label]) for a in r.quiver.arrows},
    }


def nrep_json(v: _nrep.NRepresentation) -> dict:
    return {
        "field": v.field.name,
        "levels": [q.name for q in v.quivers],
        "components": [{k: x for k, x in rep_json(c).items() if k != "field"} for c in v.comps],
        "links": [{"level": m, "from": g, "to": h, "matrix": matrix_json(mat)}
                  for (m, g, h), mat in v.links.items()],
    }


def object_json(o) -> dict:
    if isinstance(o, _nrep.NRepresentation):
        return {"kind": "nrep", **nrep_json(o)}
    return {"kind": "representation", "quiver": o.quiver.name, **rep_json(o)}


def morphism_json(f) -> dict:
    if isinstance(f, _nrep.NRepMorphism):
        return {"kind": "nrep", "levels": [
            {v: matrix_json(g.comps[v]) for v in g.quiver.vertices} for g in f.maps]}
    return {"kind": "representation", "comps": {v: matrix_json(f.comps[v]) for v in f.quiver.vertices}}


def _dims(o):
    if isinstance(o, _nrep.NRepresentation):
        return [list(d) for d in o.dim_vectors]
    return list(o.dim_vector)


# output text for computed objects

def object_text(o, name: str) -> str:
    if isinstance(o, _nrep.NRepresentation):
        return dsl.format_nrep(o, name)
    return dsl.format_representation(o, name)


def morphism_text(f, name: str, src: str, dst: str) -> str:
    return dsl.format_morphism(f, name, src, dst)


class Result:
    """What a handler produces: the JSON payload and the plain-text rendering."""

    def __init__(self, payload: dict, text: str):
        self.payload = payload
        self.text = text


# helpers

def _require(ws: dsl.Workspace, namespaces, name: str, what: str):
    if not any(ws.has(ns, name) for ns in namespaces):
        raise ArgumentError(f"no {what} named {name!r} in the workspace")


def _object(ws, name):
    _require(ws, ("representation", "nrep"), name, "representation or n-representation")
    return ws.object(name)


def _morphism(ws, name):
    _require(ws, ("morphism",), name, "morphism")
    return ws.morphism(name)


def _levels_from_args(ws, names):
    """Either one n-quiver name or two or more quiver names."""
    if len(names) == 1:
        _require(ws, ("quiver",), names[0], "quiver")
        d = ws.decl("quiver", names[0])
        if d.kind != "nquiver":
            raise ArgumentError(f"{names[0]!r} is a plain quiver; give an n-quiver or at least two quivers")
        return ws.nquiver(names[0])
    for n in names:
        _require(ws, ("quiver",), n, "quiver")
    return None


# handlers

def cmd_validate(ws, args) -> Result:
    if args.name:
        found = [d for d in ws.order if d.name == args.name]
        if not found:
            raise ArgumentError(f"nothing named {args.name!r} in the workspace")
    else:
        found = list(ws.order)
    entries, lines = [], []
    for d in found:
        obj = ws.build(d)
        entry = {"kind": d.kind, "name": d.name}
        if d.kind in ("quiver", "nquiver"):
            q = ws.quiver(d.name)
            entry.update(vertices=len(q.vertices), arrows=len(q.arrows),
                         acyclic=q.is_acyclic, connected=q.is_connected if q.vertices else False)
        elif d.kind in ("representation", "nrep"):
            entry["object"] = object_json(obj)
        elif d.kind == "morphism":
            entry["iso"] = obj.is_iso()
        elif d.kind == "diagram":
            entry["objects"] = len(obj.objects)
            entry["edges"] = len(obj.edges)
        entries.append(entry)
        lines.append(f"{d.kind} {d.name}: ok")
    return Result({"declarations": entries}, "\n".join(lines) + ("\n" if lines else ""))


def cmd_pathalg(ws, args) -> Result:
    _require(ws, ("quiver",), args.quiver, "quiver")
    q = ws.quiver(args.quiver)
    paths = enumerate_paths(q)
    table = path_count_matrix(q)
    payload = {"quiver": q.name, "dim": len(paths), "vertices": list(q.vertices), "table": table}
    if args.dim:
        return Result(payload, f"{len(paths)}\n")
    width = max([len(str(x)) for row in table for x in row] + [len(v) for v in q.vertices] + [1])
    out = [f"dim k{q.name} = {len(paths)}", " " * (width + 1) + " ".join(v.rjust(width) for v in q.vertices)]
    for v, row in zip(q.vertices, table):
        out.append(v.rjust(width) + " " + " ".join(str(x).rjust(width) for x in row))
    return Result(payload, "\n".join(out) + "\n")


def cmd_nquiver_build(ws, args) -> Result:
    for n in args.quivers:
        _require(ws, ("quiver",), n, "quiver")
    if len(args.quivers) < 2:
        raise ArgumentError("nquiver-build needs at least two quivers")
    nq = _nq.build_nquiver([ws.quiver(n) for n in args.quivers], name=args.name)
    origin = nq.origin_json()
    if args.origin:
        Path(args.origin).write_text(json.dumps(origin, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    text = dsl.format_quiver(nq.base)
    payload = {"quiver": nq.base.name, "levels": list(args.quivers), "dsl": text, "origin": origin,
               "vertices": len(nq.base.vertices), "arrows": len(nq.base.arrows),
               "connecting": len(nq.connecting_arrows)}
    return Result(payload, text)


def _nquiver_decl_text(ws, v) -> tuple[str, str]:
    """Name of an n-quiver for ``v``'s levels and any declaration needed for it."""
    levels = tuple(q.name for q in v.quivers)
    existing = ws.nquiver_for(levels)
    if existing:
        return existing, ""
    name = _nq.default_name(v.quivers)
    return name, f"nquiver {name} of ({', '.join(levels)})\n"


def cmd_glue(ws, args) -> Result:
    _require(ws, ("nrep",), args.nrep, "n-representation")
    v = ws.nrep(args.nrep)
    nq_name, decl = _nquiver_decl_text(ws, v)
    nq = ws.nquiver(nq_name) if ws.has("quiver", nq_name) else _nq.build_nquiver(v.quivers, name=nq_name)
    r = _nq.glue(v, nq)
    name = args.as_name or f"{args.nrep}_glued"
    text = (decl + "\n" if decl else "") + dsl.format_representation(r, name, nq_name)
    return Result({"nquiver": nq_name, "name": name, "object": object_json(r)}, text)


def cmd_decompose(ws, args) -> Result:
    _require(ws, ("representation",), args.rep, "representation")
    d = ws.decl("representation", args.rep)
    qname = d.header["quiver"]
    if ws.decl("quiver", qname).kind != "nquiver":
        raise ArgumentError(f"representation {args.rep!r} is over {qname!r}, which is not a declared n-quiver")
    nq = ws.nquiver(qname)
    v = _nq.decompose(ws.representation(args.rep), nq)
    if args.as_name:
        name = args.as_name
    elif args.rep.endswith("_glued"):
        name = args.rep[: -len("_glued")]
    else:
        name = f"{args.rep}_levels"
    return Result({"name": name, "object": object_json(v)}, dsl.format_nrep(v, name))


def _binary(ws, args, op, joiner) -> Result:
    a, b = _object(ws, args.a), _object(ws, args.b)
    if type(a) is not type(b):
        raise ArgumentError("cannot combine a representation with an n-representation")
    o = op(a, b)
    name = args.as_name or f"{args.a}{joiner}{args.b}"
    return Result({"name": name, "object": object_json(o)}, object_text(o, name))


def cmd_dsum(ws, args) -> Result:
    def op(a, b):
        bp = _nrep.nrep_direct_sum(a, b) if isinstance(a, _nrep.NRepresentation) else _rep.direct_sum(a, b)
        return bp.obj
    return _binary(ws, args, op, "_plus_")


def cmd_tensor(ws, args) -> Result:
    def op(a, b):
        return _nrep.nrep_tensor(a, b) if isinstance(a, _nrep.NRepresentation) else _rep.tensor(a, b)
    return _binary(ws, args, op, "_x_")


def cmd_hom_check(ws, args) -> Result:
    f = _morphism(ws, args.morphism)
    payload = {"morphism": args.morphism, "verdict": "ok", "iso": f.is_iso(), "zero": f.is_zero()}
    return Result(payload, f"{args.morphism}: ok\n")


def cmd_hom_space(ws, args) -> Result:
    a, b = _object(ws, args.a), _object(ws, args.b)
    if type(a) is not type(b):
        raise ArgumentError("hom-space needs two objects of the same kind")
    basis = _nrep.nrep_hom_space(a, b) if isinstance(a, _nrep.NRepresentation) else _rep.hom_space(a, b)
    text = [f"dim Hom({args.a}, {args.b}) = {len(basis)}"]
    for i, f in enumerate(basis):
        text.append(morphism_text(f, f"hom{i}", args.a, args.b).rstrip("\n"))
    return Result({"dim": len(basis), "basis": [morphism_json(f) for f in basis]}, "\n".join(text) + "\n")


def _kernel_like(ws, args, which) -> Result:
    f = _morphism(ws, args.morphism)
    d = ws.decl("morphism", args.morphism)
    if which == "kernel":
        obj, leg = _limits.kernel_nrep(f)
        name = args.as_name or f"ker_{args.morphism}"
        mtext = morphism_text(leg, f"{name}_incl", name, d.header["src"])
    else:
        obj, leg = _limits.cokernel_nrep(f)
        name = args.as_name or f"coker_{args.morphism}"
        mtext = morphism_text(leg, f"{name}_proj", d.header["dst"], name)
    payload = {"name": name, "object": object_json(obj), "dims": _dims(obj), "map": morphism_json(leg)}
    return Result(payload, object_text(obj, name) + "\n" + mtext)


def cmd_kernel(ws, args) -> Result:
    return _kernel_like(ws, args, "kernel")


def cmd_cokernel(ws, args) -> Result:
    return _kernel_like(ws, args, "cokernel")


def _cone_result(ws, args, kind) -> Result:
    _require(ws, ("diagram",), args.diagram, "diagram")
    dg = ws.diagram(args.diagram)
    cone = _limits.limit(dg) if kind == "limit" else _limits.colimit(dg)
    name = args.as_name or f"{kind}_{args.diagram}"
    payload = {
        "name": name,
        "object": object_json(cone.apex),
        "dims": _dims(cone.apex),
        "legs": {sv: morphism_json(f) for sv, f in cone.legs.items()},
    }
    if dg.is_nrep:
        other, iso = _limits.glued_comparison(cone)
        payload["glued_oracle"] = {"dims": _dims(other.apex), "iso": iso.is_iso()}
    text = [object_text(cone.apex, name)]
    for sv, f in cone.legs.items():
        obj = dg.objects[sv].name or sv
        src, dst = (name, obj) if kind == "limit" else (obj, name)
        text.append(morphism_text(f, f"{name}_leg_{sv}", src, dst))
    return Result(payload, "\n".join(text))


def cmd_limit(ws, args) -> Result:
    return _cone_result(ws, args, "limit")


def cmd_colimit(ws, args) -> Result:
    return _cone_result(ws, args, "colimit")


def cmd_fitting_split(ws, args) -> Result:
    o = _object(ws, args.rep)
    nq = None
    r = o
    if isinstance(o, _nrep.NRepresentation):
        nq = _nq.build_nquiver(o.quivers)
        r = _nq.glue(o, nq)
    res = _rep.fitting_split(r, trials=args.trials, seed=args.seed)
    if isinstance(res, _rep.ProbablyIndecomposable):
        payload = {"verdict": "probably-indecomposable", "trials": res.trials, "reason": res.reason,
                   "seed": args.seed}
        return Result(payload, f"{args.rep}: probably indecomposable after {res.trials} trials ({res.reason})\n")
    parts = [res.first, res.second]
    if nq is not None:
        parts = [_nq.decompose(p, nq) for p in parts]
    payload = {
        "verdict": "split",
        "trial": res.trial,
        "eigenvalue": r.field.fmt(res.eigenvalue),
        "seed": args.seed,
        "parts": [object_json(p) for p in parts],
        "dims": [_dims(p) for p in parts],
    }
    text = [f"# split found on trial {res.trial} with eigenvalue {r.field.fmt(res.eigenvalue)}"]
    text += [object_text(p, f"{args.rep}_part{i}") for i, p in enumerate(parts, start=1)]
    return Result(payload, "\n".join(text))


def cmd_coalg_check(ws, args) -> Result:
    _require(ws, ("coalgebra",), args.coalgebra, "coalgebra")
    c = ws.coalgebra(args.coalgebra)
    payload = {"coalgebra": args.coalgebra, "verdict": "ok"}
    if isinstance(c.carrier, _nrep.NRepresentation):
        g = _coalg.glue_coalgebra(c)
        payload["glued_verdict"] = _coalg.coalgebra_verdict(g.carrier, g.comult, g.counit)
    return Result(payload, f"{args.coalgebra}: ok\n")


def cmd_block_structure(ws, args) -> Result:
    nq = _levels_from_args(ws, args.quivers)
    if nq is None:
        nq = _nq.build_nquiver([ws.quiver(n) for n in args.quivers])
    bs = _nq.block_structure(nq)
    payload = {"quiver": nq.base.name, **bs._asdict()}
    text = f"lower {bs.lower}\nomega {bs.omega}\ntop {bs.top}\ntotal {bs.total}\n"
    return Result(payload, text)


COMMANDS = {
    "validate": cmd_validate,
    "pathalg": cmd_pathalg,
    "nquiver-build": cmd_nquiver_build,
    "glue": cmd_glue,
    "decompose": cmd_decompose,
    "dsum": cmd_dsum,
    "tensor": cmd_tensor,
    "hom-check": cmd_hom_check,
    "hom-space": cmd_hom_space,
    "kernel": cmd_kernel,
    "cokernel": cmd_cokernel,
    "limit": cmd_limit,
    "colimit": cmd_colimit,
    "fitting-split": cmd_fitting_split,
    "coalg-check": cmd_coalg_check,
    "block-structure": cmd_block_structure,
}


# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message and self.prog.split()[-1] == "quivrep":
            raise UnknownCommand(message)
        raise ArgumentError(message)


def _seed(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= n <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def _field(text: str) -> Field:
    try:
        return Field.parse(text)
    except (ValueError, QuivrepError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", action="append", default=[], metavar="FILE",
                        help="DSL file to load (repeatable)")
    common.add_argument("--json", action="store_true", help="emit the JSON envelope")
    common.add_argument("--seed", type=_seed, default=0, help="seed for randomized commands")
    common.add_argument("--field", type=_field, default=None, help="override the field: Q or F<p>")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = _Parser(prog="quivrep", description="Exact computations with quiver representations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    s = add("validate", "parse and check declarations")
    s.add_argument("name", nargs="?")
    s = add("pathalg", "path algebra dimension and path counts")
    s.add_argument("quiver")
    s.add_argument("--dim", action="store_true", help="print only the dimension")
    s = add("nquiver-build", "glue quivers into an n-quiver")
    s.add_argument("quivers", nargs="+")
    s.add_argument("--name")
    s.add_argument("--origin", metavar="PATH", help="write the origin map as JSON")
    s = add("glue", "n-representation to representation of the n-quiver")
    s.add_argument("nrep")
    s.add_argument("--as", dest="as_name")
    s = add("decompose", "representation of an n-quiver to n-representation")
    s.add_argument("rep")
    s.add_argument("--as", dest="as_name")
    for name, text in (("dsum", "direct sum"), ("tensor", "pointwise tensor product")):
        s = add(name, text)
        s.add_argument("a")
        s.add_argument("b")
        s.add_argument("--as", dest="as_name")
    s = add("hom-check", "verify a morphism")
    s.add_argument("morphism")
    s = add("hom-space", "basis of the space of morphisms")
    s.add_argument("a")
    s.add_argument("b")
    for name in ("kernel", "cokernel"):
        s = add(name, f"{name} of a morphism")
        s.add_argument("morphism")
        s.add_argument("--as", dest="as_name")
    for name in ("limit", "colimit"):
        s = add(name, f"{name} of a finite diagram")
        s.add_argument("diagram")
        s.add_argument("--as", dest="as_name")
    s = add("fitting-split", "look for a direct sum decomposition")
    s.add_argument("rep")
    s.add_argument("--trials", type=int, default=20)
    s = add("coalg-check", "check the coalgebra axioms")
    s.add_argument("coalgebra")
    s = add("block-structure", "block sizes of the n-quiver path algebra")
    s.add_argument("quivers", nargs="+")
    return p


# running

def _location(exc) -> dict:
    loc = getattr(exc, "location", None)
    if loc is not None:
        return loc.as_dict()
    if isinstance(exc, DslError) and exc.file is not None:
        return {"file": exc.file, "line": exc.line or 0, "col": exc.col or 0}
    return {"file": "<command line>", "line": 1, "col": 1}


def _diagnostic(exc) -> dict:
    message = exc.message if isinstance(exc, DslError) else str(exc)
    return {"severity": "error", "location": _location(exc), "message": f"{type(exc).__name__}: {message}"}


def run(argv: list[str]) -> tuple[int, dict, str]:
    """Run one command; return ``(exit code, envelope, text output)``."""
    command = next((a for a in argv if a in COMMANDS), argv[0] if argv else "")
    try:
        args = build_parser().parse_args(argv)
    except (ArgumentError, UnknownCommand) as exc:
        return 2, _envelope(command, None, [_diagnostic(exc)]), ""
    try:
        ws = dsl.parse(args.input, field_override=args.field)
    except dsl.ParseFailure as exc:
        return 2, _envelope(args.command, None, [_diagnostic(e) for e in exc.errors]), ""
    try:
        result = COMMANDS[args.command](ws, args)
    except (ArgumentError, dsl.ParseFailure) as exc:
        errs = exc.errors if isinstance(exc, dsl.ParseFailure) else [exc]
        return 2, _envelope(args.command, None, [_diagnostic(e) for e in errs]), ""
    except QuivrepError as exc:
        return 1, _envelope(args.command, None, [_diagnostic(exc)]), ""
    return 0, _envelope(args.command, result.payload, []), result.text


def _envelope(command, payload, diagnostics) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "status": "error" if diagnostics else "ok",
        "payload": payload if payload is not None else {},
        "diagnostics": diagnostics,
    }


def render_json(envelope: dict) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0 if argv else 2
    if argv[0] in COMMANDS and any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv[:1] + ["--help"])  # argparse prints and exits
    code, envelope, text = run(argv)
    want_json = "--json" in argv
    out_path = _out_path(argv)
    output = render_json(envelope) if want_json else text
    if output:
        if out_path and code == 0:
            Path(out_path).write_text(output, encoding="utf-8")
        elif code == 0 or want_json:
            sys.stdout.write(output)
    if code != 0 and not want_json:
        for d in envelope["diagnostics"]:
            loc = d["location"]
            sys.stderr.write(f"{loc['file']}:{loc['line']}:{loc['col']}: {d['severity']}: {d['message']}\n")
    return code


def _out_path(argv):
    for i, a in enumerate(argv):
        if a == "--out" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--out="):
            return a.split("=", 1)[1]
    return None


if __name__ == "__main__":
    sys.exit(main())
