"""Line-oriented description language for quivers, representations and friends.

Parsing is two-pass: the first pass checks syntax and collects declarations
from every file, the second checks names and cross-references, so
declaration order across files does not matter.  Objects are built lazily
when first requested; domain errors raised while building carry the
location of the offending line in ``exc.location``.

Grammar (``#`` starts a comment)::

    quiver <name>
    vertex <id> [<id> ...]
    arrow <label> : <src> -> <dst>

    nquiver <name> of (<q1>, ..., <qn>)

    representation <name> over <quiver> field Q|F<p>
    space <vertex> dim <d>
    map <arrow> = [[r, ...], ...]

    nrep <name> over (<q1>, ..., <qn>) field Q|F<p>
    component <m> = <representation>
    link <m> <arrow of q(m-1)> <arrow of qm> = [[...], ...]

    morphism <name> : <src> -> <dst>
    comp <vertex> = [[...]]          # between representations
    comp <m> <vertex> = [[...]]      # between n-representations

    diagram <name> shape <quiver>
    object <shape vertex> = <object>
    edge <shape arrow> = <morphism>

    coalgebra <name> on <carrier>
    comult [<m>] <vertex> = [[...]]
    counit [<m>] <vertex> = [[...]]

A matrix may continue over several lines until its brackets balance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import coalg as _coalg
from . import limits as _limits
from . import nquiver as _nq
from . import nrep as _nrep
from . import rep as _rep
from .errors import (
    DslError,
    DslSyntaxError,
    DuplicateName,
    MissingLink,
    NotCommuting,
    NotCommutingLink,
    QuivrepError,
    ShapeMismatch,
    UnresolvedReference,
)
from .exactlin import Field, Matrix
from .quiver import Quiver, build_quiver

IDENT = r"[A-Za-z0-9_][A-Za-z0-9_.']*"
FIELD = r"Q|F\d+"
_LIT = re.compile(r"[+-]?\d+(?:/\d+)?")

HEADERS = {
    "quiver": re.compile(rf"^quiver\s+(?P<name>{IDENT})$"),
    "nquiver": re.compile(rf"^nquiver\s+(?P<name>{IDENT})\s+of\s*\((?P<levels>[^)]*)\)$"),
    "representation": re.compile(
        rf"^representation\s+(?P<name>{IDENT})\s+over\s+(?P<quiver>{IDENT})\s+field\s+(?P<field>{FIELD})$"),
    "nrep": re.compile(
        rf"^nrep\s+(?P<name>{IDENT})\s+over\s*\((?P<levels>[^)]*)\)\s*field\s+(?P<field>{FIELD})$"),
    "morphism": re.compile(rf"^morphism\s+(?P<name>{IDENT})\s*:\s*(?P<src>{IDENT})\s*->\s*(?P<dst>{IDENT})$"),
    "diagram": re.compile(rf"^diagram\s+(?P<name>{IDENT})\s+shape\s+(?P<shape>{IDENT})$"),
    "coalgebra": re.compile(rf"^coalgebra\s+(?P<name>{IDENT})\s+on\s+(?P<carrier>{IDENT})$"),
}

BODY = {
    "quiver": {
        "vertex": re.compile(rf"^vertex((?:\s+{IDENT})+)$"),
        "arrow": re.compile(rf"^arrow\s+({IDENT})\s*:\s*({IDENT})\s*->\s*({IDENT})$"),
    },
    "nquiver": {},
    "representation": {
        "space": re.compile(rf"^space\s+({IDENT})\s+dim\s+(\d+)$"),
        "map": re.compile(rf"^map\s+({IDENT})\s*=\s*(?P<matrix>\[.*\])$"),
    },
    "nrep": {
        "component": re.compile(rf"^component\s+(\d+)\s*=\s*({IDENT})$"),
        "link": re.compile(rf"^link\s+(\d+)\s+({IDENT})\s+({IDENT})\s*=\s*(?P<matrix>\[.*\])$"),
    },
    "morphism": {
        "comp": re.compile(rf"^comp\s+({IDENT})(?:\s+({IDENT}))?\s*=\s*(?P<matrix>\[.*\])$"),
    },
    "diagram": {
        "object": re.compile(rf"^object\s+({IDENT})\s*=\s*({IDENT})$"),
        "edge": re.compile(rf"^edge\s+({IDENT})\s*=\s*({IDENT})$"),
    },
    "coalgebra": {
        "comult": re.compile(rf"^comult\s+({IDENT})(?:\s+({IDENT}))?\s*=\s*(?P<matrix>\[.*\])$"),
        "counit": re.compile(rf"^counit\s+({IDENT})(?:\s+({IDENT}))?\s*=\s*(?P<matrix>\[.*\])$"),
    },
}

# namespaces: an nquiver declares a quiver
NAMESPACE = {
    "quiver": "quiver", "nquiver": "quiver", "representation": "representation", "nrep": "nrep",
    "morphism": "morphism", "diagram": "diagram", "coalgebra": "coalgebra",
}


@dataclass(frozen=True)
class Location:
    file: str
    line: int
    col: int = 1

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"

    def as_dict(self):
        return {"file": self.file, "line": self.line, "col": self.col}


@dataclass
class Item:
    keyword: str
    args: tuple
    matrix: list | None
    loc: Location


@dataclass
class Decl:
    kind: str
    name: str
    header: dict
    loc: Location
    items: list = field(default_factory=list)


class ParseFailure(QuivrepError):
    """One or more located diagnostics from parsing or reference resolution."""

    def __init__(self, errors: list[DslError]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


def _split_names(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    return [p for p in parts if p]


def parse_matrix(text: str, loc: Location, col0: int) -> list[list[str]]:
    """Parse ``[[a, b], [c, d]]`` into rows of literal strings."""
    pos = 0

    def err(msg, at):
        raise DslSyntaxError(msg, loc.file, loc.line, col0 + at)

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= len(text) or text[pos] != ch:
            err(f"expected {ch!r}", pos)
        pos += 1

    def peek():
        skip()
        return text[pos] if pos < len(text) else ""

    rows = []
    expect("[")
    if peek() == "]":
        pos += 1
    else:
        while True:
            expect("[")
            row = []
            if peek() == "]":
                pos += 1
            else:
                while True:
                    skip()
                    m = _LIT.match(text, pos)
                    if not m:
                        err("expected a rational literal", pos)
                    lit = m.group(0)
                    if "/" in lit and int(lit.split("/")[1]) == 0:
                        err("zero denominator", pos)
                    row.append(lit)
                    pos = m.end()
                    c = peek()
                    if c == ",":
                        pos += 1
                        continue
                    if c == "]":
                        pos += 1
                        break
                    err("expected ',' or ']'", pos)
            rows.append(row)
            c = peek()
            if c == ",":
                pos += 1
                continue
            if c == "]":
                pos += 1
                break
            err("expected ',' or ']'", pos)
    skip()
    if pos != len(text):
        err("trailing characters after matrix", pos)
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        err("rows of different lengths", 0)
    return rows


def _logical_lines(text: str):
    """Yield ``(line_no, text)`` with comments stripped and bracket continuations joined."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        start = i
        cur = lines[i].split("#", 1)[0].rstrip()
        i += 1
        while cur.count("[") > cur.count("]") and i < len(lines):
            cur += " " + lines[i].split("#", 1)[0].strip()
            i += 1
        yield start + 1, cur


def parse_text(text: str, filename: str = "<string>") -> tuple[list[Decl], list[DslError]]:
    """First pass over one file: syntax only."""
    decls, errors = [], []
    current = None
    for lineno, raw in _logical_lines(text):
        line = raw.strip()
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        loc = Location(filename, lineno, col)
        keyword = line.split()[0]
        if keyword in HEADERS:
            m = HEADERS[keyword].match(line)
            if not m:
                errors.append(DslSyntaxError(f"malformed {keyword} header", filename, lineno, col))
                current = None
                continue
            header = {k: v for k, v in m.groupdict().items() if k != "name"}
            if "levels" in header:
                header["levels"] = _split_names(header["levels"])
                bad = [x for x in header["levels"] if not re.fullmatch(IDENT, x)]
                if bad or not header["levels"]:
                    errors.append(DslSyntaxError("malformed quiver tuple", filename, lineno, col))
                    current = None
                    continue
            current = Decl(keyword, m.group("name"), header, loc)
            decls.append(current)
            continue
        if current is None:
            errors.append(DslSyntaxError(f"statement {keyword!r} outside of a declaration", filename, lineno, col))
            continue
        patterns = BODY[current.kind]
        if keyword not in patterns:
            errors.append(DslSyntaxError(f"unexpected {keyword!r} in {current.kind} {current.name!r}",
                                         filename, lineno, col))
            continue
        m = patterns[keyword].match(line)
        if not m:
            errors.append(DslSyntaxError(f"malformed {keyword!r} statement", filename, lineno, col))
            continue
        matrix = None
        args = m.groups()
        if "matrix" in m.groupdict():
            args = args[:-1]
            try:
                matrix = parse_matrix(m.group("matrix"), loc, col + m.start("matrix"))
            except DslSyntaxError as exc:
                errors.append(exc)
                continue
        args = tuple(a for a in args if a is not None)
        if keyword == "vertex":
            args = tuple(args[0].split())
        current.items.append(Item(keyword, args, matrix, loc))
    return decls, errors


def _fmt_matrix_rows(rows: list[list[str]]) -> str:
    return "[" + ", ".join("[" + ", ".join(r) + "]" for r in rows) + "]"


def format_matrix(m: Matrix) -> str:
    return _fmt_matrix_rows(m.to_strings())


def format_decl(d: Decl) -> str:
    """Canonical text of one declaration."""
    h = d.header
    if d.kind == "quiver":
        head = f"quiver {d.name}"
    elif d.kind == "nquiver":
        head = f"nquiver {d.name} of ({', '.join(h['levels'])})"
    elif d.kind == "representation":
        head = f"representation {d.name} over {h['quiver']} field {h['field']}"
    elif d.kind == "nrep":
        head = f"nrep {d.name} over ({', '.join(h['levels'])}) field {h['field']}"
    elif d.kind == "morphism":
        head = f"morphism {d.name} : {h['src']} -> {h['dst']}"
    elif d.kind == "diagram":
        head = f"diagram {d.name} shape {h['shape']}"
    else:
        head = f"coalgebra {d.name} on {h['carrier']}"
    lines = [head]
    for it in d.items:
        a = it.args
        if it.keyword == "vertex":
            lines.append("vertex " + " ".join(a))
        elif it.keyword == "arrow":
            lines.append(f"arrow {a[0]} : {a[1]} -> {a[2]}")
        elif it.keyword == "space":
            lines.append(f"space {a[0]} dim {a[1]}")
        elif it.keyword == "component":
            lines.append(f"component {a[0]} = {a[1]}")
        elif it.keyword in ("object", "edge"):
            lines.append(f"{it.keyword} {a[0]} = {a[1]}")
        else:
            lines.append(f"{it.keyword} {' '.join(a)} = {_fmt_matrix_rows(it.matrix)}")
    return "\n".join(lines) + "\n"


# printers for computed objects

def format_quiver(q: Quiver, name: str | None = None) -> str:
    lines = [f"quiver {name or q.name}"]
    if q.vertices:
        lines.append("vertex " + " ".join(q.vertices))
    lines += [f"arrow {a.label} : {a.source} -> {a.target}" for a in q.arrows]
    return "\n".join(lines) + "\n"


def format_representation(r, name: str, quiver_name: str | None = None) -> str:
    lines = [f"representation {name} over {quiver_name or r.quiver.name} field {r.field.name}"]
    lines += [f"space {v} dim {r.dims[v]}" for v in r.quiver.vertices]
    lines += [f"map {a.label} = {format_matrix(r.mats[a.label])}" for a in r.quiver.arrows]
    return "\n".join(lines) + "\n"


def format_nrep(v, name: str) -> str:
    """The components as ``<name>.<m>`` followed by the n-representation block."""
    parts = [format_representation(c, f"{name}.{m}") for m, c in enumerate(v.comps, start=1)]
    lines = [f"nrep {name} over ({', '.join(q.name for q in v.quivers)}) field {v.field.name}"]
    lines += [f"component {m} = {name}.{m}" for m in range(1, v.n + 1)]
    for (m, g, h), mat in v.links.items():
        lines.append(f"link {m} {g} {h} = {format_matrix(mat)}")
    parts.append("\n".join(lines) + "\n")
    return "\n".join(parts)


def format_morphism(f, name: str, src: str, dst: str) -> str:
    lines = [f"morphism {name} : {src} -> {dst}"]
    if isinstance(f, _nrep.NRepMorphism):
        for m, g in enumerate(f.maps, start=1):
            lines += [f"comp {m} {v} = {format_matrix(g.comps[v])}" for v in g.quiver.vertices]
    else:
        lines += [f"comp {v} = {format_matrix(f.comps[v])}" for v in f.quiver.vertices]
    return "\n".join(lines) + "\n"


# second pass

class Workspace:
    """All declarations from a set of files, with lazily built objects."""

    def __init__(self, decls: Iterable[Decl], field_override: Field | None = None):
        self.decls: dict[tuple[str, str], Decl] = {}
        self.order: list[Decl] = []
        self.field_override = field_override
        self._cache: dict = {}
        errors = []
        for d in decls:
            key = (NAMESPACE[d.kind], d.name)
            if key in self.decls:
                prev = self.decls[key]
                errors.append(DuplicateName(f"{key[0]} {d.name!r} already declared at {prev.loc}",
                                            d.loc.file, d.loc.line, d.loc.col))
                continue
            self.decls[key] = d
            self.order.append(d)
        errors += self._check_references()
        if errors:
            raise ParseFailure(errors)

    # lookup helpers

    def has(self, ns: str, name: str) -> bool:
        return (ns, name) in self.decls

    def names(self, ns: str) -> list[str]:
        return [d.name for d in self.order if NAMESPACE[d.kind] == ns]

    def decl(self, ns: str, name: str) -> Decl:
        try:
            return self.decls[(ns, name)]
        except KeyError:
            raise UnresolvedReference(f"no {ns} named {name!r}") from None

    def _check_references(self) -> list[DslError]:
        errors = []

        def need(ns_options, name, loc):
            if not any(self.has(ns, name) for ns in ns_options):
                errors.append(UnresolvedReference(f"unresolved reference to {'/'.join(ns_options)} {name!r}",
                                                  loc.file, loc.line, loc.col))

        for d in self.order:
            h = d.header
            if d.kind == "nquiver":
                for q in h["levels"]:
                    need(["quiver"], q, d.loc)
            elif d.kind == "representation":
                need(["quiver"], h["quiver"], d.loc)
            elif d.kind == "nrep":
                for q in h["levels"]:
                    need(["quiver"], q, d.loc)
                for it in d.items:
                    if it.keyword == "component":
                        need(["representation"], it.args[1], it.loc)
            elif d.kind == "morphism":
                need(["representation", "nrep"], h["src"], d.loc)
                need(["representation", "nrep"], h["dst"], d.loc)
            elif d.kind == "diagram":
                need(["quiver"], h["shape"], d.loc)
                for it in d.items:
                    need(["representation", "nrep"] if it.keyword == "object" else ["morphism"], it.args[1], it.loc)
            elif d.kind == "coalgebra":
                need(["representation", "nrep"], h["carrier"], d.loc)
        return errors

    def _located(self, d: Decl, exc: QuivrepError, item: Item | None = None):
        if getattr(exc, "location", None) is None:
            exc.location = (item or d).loc
        return exc

    def _field(self, d: Decl) -> Field:
        return self.field_override or Field.parse(d.header["field"])

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # builders

    def quiver(self, name: str) -> Quiver:
        d = self.decl("quiver", name)
        if d.kind == "nquiver":
            return self.nquiver(name).base
        return self._memo(("quiver", name), lambda: self._build_quiver(d))

    def _build_quiver(self, d: Decl) -> Quiver:
        vertices, arrows = [], []
        for it in d.items:
            if it.keyword == "vertex":
                vertices.extend(it.args)
            else:
                arrows.append(it.args)
        try:
            return build_quiver(d.name, vertices, arrows)
        except QuivrepError as exc:
            raise self._located(d, exc)

    def nquiver(self, name: str) -> _nq.NQuiver:
        d = self.decl("quiver", name)
        if d.kind != "nquiver":
            raise UnresolvedReference(f"quiver {name!r} is not an n-quiver", d.loc.file, d.loc.line, d.loc.col)

        def build():
            try:
                return _nq.build_nquiver([self.quiver(q) for q in d.header["levels"]], name=d.name)
            except QuivrepError as exc:
                raise self._located(d, exc)

        return self._memo(("nquiver", name), build)

    def nquiver_for(self, levels: tuple[str, ...]) -> str | None:
        for d in self.order:
            if d.kind == "nquiver" and tuple(d.header["levels"]) == tuple(levels):
                return d.name
        return None

    def representation(self, name: str) -> _rep.Representation:
        d = self.decl("representation", name)
        return self._memo(("representation", name), lambda: self._build_rep(d))

    def _build_rep(self, d: Decl) -> _rep.Representation:
        q = self.quiver(d.header["quiver"])
        k = self._field(d)
        dims, mats, where = {}, {}, {}
        for it in d.items:
            if it.keyword == "space":
                dims[it.args[0]] = int(it.args[1])
            else:
                mats[it.args[0]] = it.matrix
            where[it.args[0]] = it
        try:
            return _rep.validate_rep(q, k, dims, {a: _literal_matrix(m, k) for a, m in mats.items()}, d.name)
        except ShapeMismatch as exc:
            raise self._located(d, exc, where.get(exc.where))
        except (QuivrepError, ValueError) as exc:
            raise self._located(d, _wrap(exc))

    def nrep(self, name: str) -> _nrep.NRepresentation:
        d = self.decl("nrep", name)
        return self._memo(("nrep", name), lambda: self._build_nrep(d))

    def _build_nrep(self, d: Decl) -> _nrep.NRepresentation:
        quivers = [self.quiver(q) for q in d.header["levels"]]
        k = self._field(d)
        comps, links, where = {}, {}, {}
        for it in d.items:
            if it.keyword == "component":
                comps[int(it.args[0])] = self.representation(it.args[1])
            else:
                key = (int(it.args[0]), it.args[1], it.args[2])
                links[key] = _literal_matrix(it.matrix, k)
                where[key] = it
        try:
            missing = [m for m in range(1, len(quivers) + 1) if m not in comps]
            if missing or set(comps) - set(range(1, len(quivers) + 1)):
                raise DslError(f"components must be given for levels 1..{len(quivers)}")
            for m, c in comps.items():
                if c.field != k:
                    raise DslError(f"component {m} is over {c.field.name}, the n-representation over {k.name}")
            return _nrep.validate_nrep(quivers, [comps[m] for m in sorted(comps)], links, d.name)
        except ShapeMismatch as exc:
            raise self._located(d, exc, where.get(exc.where))
        except (QuivrepError, ValueError) as exc:
            raise self._located(d, _wrap(exc))

    def object(self, name: str):
        """A representation or n-representation; n-representations win ties."""
        if self.has("nrep", name):
            return self.nrep(name)
        return self.representation(name)

    def morphism(self, name: str):
        d = self.decl("morphism", name)
        return self._memo(("morphism", name), lambda: self._build_morphism(d))

    def _endpoint(self, name: str, nrep_wanted: bool | None):
        if nrep_wanted is True and self.has("nrep", name):
            return self.nrep(name)
        if nrep_wanted is False and self.has("representation", name):
            return self.representation(name)
        return self.object(name)

    def _build_morphism(self, d: Decl):
        arities = {len(it.args) for it in d.items}
        wanted = None if not arities else (2 in arities)
        src = self._endpoint(d.header["src"], wanted)
        dst = self._endpoint(d.header["dst"], wanted)
        k = src.field
        try:
            if isinstance(src, _nrep.NRepresentation):
                levels = [{} for _ in range(src.n)]
                for it in d.items:
                    if len(it.args) != 2:
                        raise DslError("n-representation morphism components need a level: comp <m> <vertex>")
                    m = int(it.args[0])
                    if not 1 <= m <= src.n:
                        raise DslError(f"level {m} outside 1..{src.n}")
                    levels[m - 1][it.args[1]] = _literal_matrix(it.matrix, k)
                return _nrep.check_nrep_morphism(src, dst, levels, d.name)
            comps = {}
            for it in d.items:
                if len(it.args) != 1:
                    raise DslError("representation morphism components take no level: comp <vertex>")
                comps[it.args[0]] = _literal_matrix(it.matrix, k)
            return _rep.check_morphism(src, dst, comps, d.name)
        except (NotCommuting, NotCommutingLink, ShapeMismatch) as exc:
            raise self._located(d, exc)
        except (QuivrepError, ValueError) as exc:
            raise self._located(d, _wrap(exc))

    def diagram(self, name: str) -> _limits.Diagram:
        d = self.decl("diagram", name)

        def build():
            shape = self.quiver(d.header["shape"])
            objects, edges = {}, {}
            for it in d.items:
                if it.keyword == "object":
                    objects[it.args[0]] = self.object(it.args[1])
                else:
                    edges[it.args[0]] = self.morphism(it.args[1])
            try:
                return _limits.make_diagram(shape, objects, edges, d.name)
            except QuivrepError as exc:
                raise self._located(d, exc)

        return self._memo(("diagram", name), build)

    def coalgebra(self, name: str) -> _coalg.CoalgebraObject:
        d = self.decl("coalgebra", name)

        def build():
            carrier = self.object(d.header["carrier"])
            k = carrier.field
            n = carrier.n if isinstance(carrier, _nrep.NRepresentation) else 1
            comult = [{} for _ in range(n)]
            counit = [{} for _ in range(n)]
            try:
                for it in d.items:
                    if n > 1 or len(it.args) == 2:
                        if len(it.args) != 2:
                            raise DslError(f"{it.keyword} on an n-representation needs a level")
                        m, v = int(it.args[0]), it.args[1]
                    else:
                        m, v = 1, it.args[0]
                    if not 1 <= m <= n:
                        raise DslError(f"level {m} outside 1..{n}")
                    (comult if it.keyword == "comult" else counit)[m - 1][v] = _literal_matrix(it.matrix, k)
                return _coalg.check_coalgebra(carrier, comult, counit, d.name)
            except (QuivrepError, ValueError) as exc:
                raise self._located(d, _wrap(exc))

        return self._memo(("coalgebra", name), build)

    def build(self, d: Decl):
        ns = NAMESPACE[d.kind]
        getter = {
            "quiver": self.quiver, "representation": self.representation, "nrep": self.nrep,
            "morphism": self.morphism, "diagram": self.diagram, "coalgebra": self.coalgebra,
        }[ns]
        return getter(d.name)

    def canonical_text(self) -> str:
        return "\n".join(format_decl(d) for d in self.order)


def _wrap(exc: Exception) -> QuivrepError:
    if isinstance(exc, QuivrepError):
        return exc
    return DslError(str(exc))


def _literal_matrix(rows: list[list[str]] | None, k: Field):
    if rows is None:
        return None
    return Matrix.from_rows([[k(x) for x in r] for r in rows], k) if rows and rows[0] else rows


def parse(files: Iterable[str | Path], field_override: Field | None = None) -> Workspace:
    """Parse every file, then resolve names across all of them."""
    decls, errors = [], []
    for f in files:
        path = Path(f)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            errors.append(DslError(f"cannot read file: {exc.strerror}", str(path)))
            continue
        ds, es = parse_text(text, str(path))
        decls += ds
        errors += es
    if errors:
        raise ParseFailure(errors)
    return Workspace(decls, field_override)


def parse_string(text: str, filename: str = "<string>", field_override: Field | None = None) -> Workspace:
    decls, errors = parse_text(text, filename)
    if errors:
        raise ParseFailure(errors)
    return Workspace(decls, field_override)
