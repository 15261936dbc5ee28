"""Text formats for posets, maps and data, and the `finspace` command line.

File grammar (whitespace and newlines are interchangeable, `#` starts a comment):

    poset S1 { a b c d ; a<c a<d b<c b<d }
    map f : S1 -> pt { a:p b:p c:p d:p }
    data F on S1 { a: Z ; b: Z ; c: Z ; d: Z ; a->c: [1] ; a->d: [1] ; b->c: [1] ; b->d: [1] }

Group literals: `0`, `Z`, `Z/n`, `Z^k`, `Z^k/[[relation rows]]` and direct sums with `+`.
Matrices are row lists `[[1,0],[0,1]]`; a flat list `[1 2]` is a single row (or a
single column when the source stalk has one generator).  Points left out of a
data block get the zero stalk; restrictions are given on cover relations and
may be omitted only when one side is zero.

Exit codes: 0 on success, 1 when a verification finds a counterexample or a
failed precondition, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import classify as cl
from . import derived as dv
from . import duality as du
from .poset import MonotoneMap, Poset, barycentric, interval, point, pseudocircle, sphere_model
from .sheafdata import AbelianData, constant_data
from .zlin import FgAbGroup, IntMatrix, direct_sum, format_invariants

# ---------------------------------------------------------------------------
# errors and tokens


class InputError(Exception):
    """Bad input; carries the line number when it comes from a file."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.source is not None:
            where = f"{self.source}:"
        if self.line is not None:
            where += f"{self.line}:"
        return f"{where} {self.message}" if where else self.message


_TOKEN = re.compile(r"""
    (?P<space>[ \t\r\n]+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>-?\d+(?![A-Za-z0-9_.']))
  | (?P<word>[A-Za-z0-9_][A-Za-z0-9_.']*)
  | (?P<punct>[{}\[\];:<,+/^])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line = 0, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise InputError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        tok = m.group()
        if kind != "space":
            out.append(Token("punct" if kind == "arrow" else kind, tok, line))
        line += tok.count("\n")
        pos = m.end()
    return out


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    @property
    def line(self) -> int | None:
        t = self.peek()
        if t is None:
            return self.toks[-1].line if self.toks else None
        return t.line

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise InputError("unexpected end of input", self.line)
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.kind == "punct" and t.text == text

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.kind == "punct" and t.text == text or t.kind == "word" and t.text == text:
            return t
        raise InputError(f"expected {text!r}, found {t.text!r}", t.line)

    def name(self) -> Token:
        t = self.next()
        if t.kind not in ("word", "int"):
            raise InputError(f"expected a name, found {t.text!r}", t.line)
        return t

    def integer(self) -> int:
        t = self.next()
        if t.kind != "int":
            raise InputError(f"expected an integer, found {t.text!r}", t.line)
        return int(t.text)

    def done(self) -> bool:
        return self.peek() is None


# ---------------------------------------------------------------------------
# groups and matrices


def _parse_matrix(s: _Stream) -> list[list[int]]:
    s.expect("[")
    rows: list[list[int]] = []
    flat: list[int] = []
    while not s.at("]"):
        if s.at("["):
            s.next()
            row = []
            while not s.at("]"):
                row.append(s.integer())
                if s.at(","):
                    s.next()
            s.expect("]")
            rows.append(row)
        else:
            flat.append(s.integer())
        if s.at(","):
            s.next()
    s.expect("]")
    if rows and flat:
        raise InputError("matrix mixes rows and bare entries", s.line)
    if flat:
        return [flat]
    if len({len(r) for r in rows}) > 1:
        raise InputError("matrix rows have different lengths", s.line)
    return rows


def _parse_summand(s: _Stream) -> FgAbGroup:
    t = s.next()
    if t.kind == "int" and t.text == "0":
        return FgAbGroup.zero()
    if t.kind != "word" or t.text != "Z":
        raise InputError(f"expected a group literal, found {t.text!r}", t.line)
    k = 1
    if s.at("^"):
        s.next()
        k = s.integer()
        if k < 0:
            raise InputError("negative exponent in group literal", t.line)
    if s.at("/"):
        s.next()
        if s.at("["):
            rows = _parse_matrix(s)
            if len(rows) != k:
                raise InputError(f"relation matrix needs {k} rows", t.line)
            ncols = len(rows[0]) if rows else 0
            return FgAbGroup(k, IntMatrix(rows, ncols=ncols) if k else IntMatrix.zeros(0, 0))
        n = s.integer()
        if n < 0:
            raise InputError("negative order in group literal", t.line)
        return FgAbGroup.from_orders((n,) * k)
    return FgAbGroup.free(k)


def _parse_group(s: _Stream) -> FgAbGroup:
    parts = [_parse_summand(s)]
    while s.at("+"):
        s.next()
        parts.append(_parse_summand(s))
    return parts[0] if len(parts) == 1 else direct_sum(parts)


def parse_group(text: str) -> FgAbGroup:
    """A group literal such as `Z`, `Z/2 + Z^3` or `Z^2/[[2],[0]]`."""
    s = _Stream(tokenize(text))
    g = _parse_group(s)
    if not s.done():
        raise InputError(f"trailing text {s.peek().text!r} after group literal", s.line)
    return g


def format_group(g: FgAbGroup) -> str:
    """Literal that parses back to the same presentation."""
    if g.ngens == 0:
        return "0"
    if g.orders is not None and FgAbGroup.from_orders(g.orders).relations == g.relations:
        parts, run = [], 0
        for d in g.orders + (None,):
            if d == 0:
                run += 1
                continue
            if run:
                parts.append("Z" if run == 1 else f"Z^{run}")
                run = 0
            if d is not None:
                parts.append(f"Z/{d}")
        return " + ".join(parts)
    return f"Z^{g.ngens}/{format_matrix(g.relations)}"


def format_matrix(m: IntMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in m.rows) + "]"


# ---------------------------------------------------------------------------
# workspace


@dataclass
class Workspace:
    """Named posets, maps and data, with the line each was declared on."""

    posets: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    data_base: dict = field(default_factory=dict)
    map_ends: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    @classmethod
    def with_builtins(cls) -> Workspace:
        ws = cls()
        for name, x in [("pt", point()), ("Sigma", interval()), ("S1", pseudocircle()),
                        ("S2", sphere_model(2)), ("S3", sphere_model(3))]:
            ws.posets[name] = x
        return ws

    def poset(self, name: str, line: int | None = None) -> Poset:
        if name not in self.posets:
            raise InputError(f"unknown poset {name!r}", line)
        return self.posets[name]

    def map(self, name: str, line: int | None = None) -> MonotoneMap:
        if name not in self.maps:
            raise InputError(f"unknown map {name!r}", line)
        return self.maps[name]

    def coefficients(self, name: str, base: Poset) -> AbelianData:
        """Named data on `base`, or constant data when `name` is a group literal."""
        if name in self.data:
            f = self.data[name]
            if f.base != base:
                raise InputError(f"data {name!r} lives on {self.data_base[name]!r}, not on this space")
            return f
        try:
            g = parse_group(name)
        except InputError:
            raise InputError(f"unknown data {name!r} (not a group literal either)") from None
        return constant_data(base, g)


def _parse_poset_body(s: _Stream, name: str, line: int) -> Poset:
    s.expect("{")
    elems = []
    while not s.at(";") and not s.at("}"):
        elems.append(s.name().text)
    rels = []
    if s.at(";"):
        s.next()
        while not s.at("}"):
            chain = [s.name().text]
            s.expect("<")
            chain.append(s.name().text)
            while s.at("<"):
                s.next()
                chain.append(s.name().text)
            rels.extend(zip(chain, chain[1:]))
            if s.at(",") or s.at(";"):
                s.next()
    s.expect("}")
    try:
        return Poset(elems, rels, name=name)
    except ValueError as exc:
        raise InputError(f"poset {name}: {exc}", line) from None


def _parse_map_body(s: _Stream, name: str, x: Poset, y: Poset, line: int) -> MonotoneMap:
    s.expect("{")
    assign = {}
    while not s.at("}"):
        a = s.name()
        s.expect(":")
        b = s.name()
        if a.text in assign:
            raise InputError(f"map {name}: {a.text!r} assigned twice", a.line)
        if a.text not in x:
            raise InputError(f"map {name}: {a.text!r} is not a point of the source", a.line)
        if b.text not in y:
            raise InputError(f"map {name}: {b.text!r} is not a point of the target", b.line)
        assign[a.text] = b.text
        if s.at(",") or s.at(";"):
            s.next()
    s.expect("}")
    missing = [e for e in x.elements if e not in assign]
    if missing:
        raise InputError(f"map {name}: no image for {missing[0]!r}", line)
    try:
        return MonotoneMap(x, y, assign, name=name)
    except ValueError as exc:
        raise InputError(f"map {name}: {exc}", line) from None


def _parse_data_body(s: _Stream, name: str, x: Poset, line: int) -> AbelianData:
    s.expect("{")
    stalks: dict = {}
    mats: dict = {}
    while not s.at("}"):
        a = s.name()
        if s.at("->"):
            s.next()
            b = s.name()
            s.expect(":")
            mats[(a.text, b.text)] = (_parse_matrix(s), a.line)
        else:
            s.expect(":")
            if a.text in stalks:
                raise InputError(f"data {name}: stalk at {a.text!r} given twice", a.line)
            stalks[a.text] = (_parse_group(s), a.line)
        if s.at(";"):
            s.next()
        elif not s.at("}"):
            raise InputError(f"data {name}: expected ';' or '}}', found {s.peek().text!r}", s.line)
    s.expect("}")
    for p, (_, ln) in stalks.items():
        if p not in x:
            raise InputError(f"data {name}: {p!r} is not a point of the base", ln)
    groups = {p: stalks[p][0] if p in stalks else FgAbGroup.zero() for p in x.elements}
    covers = {(x.elements[i], x.elements[j]) for i, j in x.covers()}
    res = {}
    for (p, q), (rows, ln) in mats.items():
        if p not in x or q not in x:
            raise InputError(f"data {name}: unknown point in {p}->{q}", ln)
        if (p, q) not in covers:
            raise InputError(f"data {name}: {p} < {q} is not a cover relation", ln)
        src, tgt = groups[p].ngens, groups[q].ngens
        if len(rows) == 1 and tgt != 1 and src == 1:
            rows = [[v] for v in rows[0]]
        if not rows or not rows[0]:
            m = IntMatrix.zeros(tgt, src)
        else:
            m = IntMatrix(rows, ncols=len(rows[0]))
        if m.shape != (tgt, src):
            raise InputError(f"data {name}: matrix {p}->{q} has shape {m.shape}, "
                             f"expected {(tgt, src)}", ln)
        if groups[p].relations.ncols and not groups[q].contains(m @ groups[p].relations):
            raise InputError(f"data {name}: matrix {p}->{q} is not well defined on the stalks", ln)
        res[(p, q)] = m
    try:
        return AbelianData(x, groups, res)
    except ValueError as exc:
        raise InputError(f"data {name}: {exc}", line) from None


def parse_workspace(text: str, ws: Workspace | None = None, source: str | None = None) -> Workspace:
    """Read every declaration in `text` into a workspace (a fresh one with built-ins by default)."""
    ws = Workspace.with_builtins() if ws is None else ws
    try:
        s = _Stream(tokenize(text))
        while not s.done():
            kw = s.next()
            if kw.kind != "word" or kw.text not in ("poset", "map", "data"):
                raise InputError(f"expected 'poset', 'map' or 'data', found {kw.text!r}", kw.line)
            nm = s.name()
            if kw.text == "poset":
                ws.posets[nm.text] = _parse_poset_body(s, nm.text, kw.line)
            elif kw.text == "map":
                s.expect(":")
                a = s.name()
                s.expect("->")
                b = s.name()
                x, y = ws.poset(a.text, a.line), ws.poset(b.text, b.line)
                ws.maps[nm.text] = _parse_map_body(s, nm.text, x, y, kw.line)
                ws.map_ends[nm.text] = (a.text, b.text)
            else:
                s.expect("on")
                a = s.name()
                x = ws.poset(a.text, a.line)
                ws.data[nm.text] = _parse_data_body(s, nm.text, x, kw.line)
                ws.data_base[nm.text] = a.text
            ws.lines[nm.text] = kw.line
    except InputError as exc:
        exc.source = source
        raise
    return ws


def _single(text: str, kind: str, ws: Workspace | None):
    before = Workspace.with_builtins() if ws is None else ws
    names = set(getattr(before, kind))
    out = parse_workspace(text, before)
    new = [k for k in getattr(out, kind) if k not in names]
    if len(new) != 1:
        raise InputError(f"expected exactly one {kind[:-1] if kind != 'data' else 'data'} declaration")
    return getattr(out, kind)[new[0]]


def parse_poset(text: str) -> Poset:
    return _single(text, "posets", Workspace())


def parse_map(text: str, ws: Workspace | None = None) -> MonotoneMap:
    return _single(text, "maps", ws)


def parse_data(text: str, ws: Workspace | None = None) -> AbelianData:
    return _single(text, "data", ws)


def _label(e) -> str:
    if isinstance(e, tuple):
        return ".".join(map(str, e))
    return str(e)


def format_poset(x: Poset, name: str | None = None) -> str:
    name = name or x.name or "X"
    elems = " ".join(_label(e) for e in x.elements)
    rels = " ".join(f"{_label(a)}<{_label(b)}" for a, b in x.cover_relations())
    return f"poset {name} {{ {elems} ; {rels} }}" if rels else f"poset {name} {{ {elems} }}"


def format_map(f: MonotoneMap, name: str, source: str, target: str) -> str:
    body = " ".join(f"{_label(a)}:{_label(b)}" for a, b in f.assignment.items())
    return f"map {name} : {source} -> {target} {{ {body} }}"


def format_data(f: AbelianData, name: str, base: str) -> str:
    X = f.base
    parts = [f"{_label(p)}: {format_group(g)}" for p, g in zip(X.elements, f.stalks) if g.ngens]
    for i, j in X.covers():
        if f.stalk_at(i).ngens and f.stalk_at(j).ngens:
            parts.append(f"{_label(X.elements[i])}->{_label(X.elements[j])}: {format_matrix(f.res(i, j))}")
    return f"data {name} on {base} {{ " + " ; ".join(parts) + " }"


# ---------------------------------------------------------------------------
# reports


def _inv_json(inv) -> dict:
    r, t = inv
    return {"group": format_invariants(inv), "rank": r, "torsion": list(t)}


def _degree_table(table: dict, degrees) -> list[dict]:
    return [dict(degree=d, **_inv_json(table.get(d, (0, ())))) for d in degrees]


def _subset(x: Poset, text: str | None, line=None):
    if text is None:
        return None
    labels = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    for t in labels:
        if t not in x:
            raise InputError(f"{t!r} is not a point of the space")
    return labels


class Output:
    def __init__(self, as_json: bool, stream):
        self.as_json = as_json
        self.stream = stream

    def emit(self, payload: dict, lines: list[str]):
        if self.as_json:
            self.stream.write(json.dumps(payload, indent=2) + "\n")
        else:
            self.stream.write("\n".join(lines) + "\n")


def _cmd_cohomology(args, ws, out, homological: bool):
    x = ws.poset(args.space)
    f = ws.coefficients(args.data, x)
    sub = _subset(x, args.on)
    table = dv.homology_table(f, sub) if homological else dv.cohomology_table(f, sub)
    dim = x.dimension()
    degrees = range(0, dim + 1)
    rows = _degree_table(table, degrees)
    sym = "H_{}" if homological else "H^{}"
    where = args.space if sub is None else "{" + ",".join(sub) + "}"
    lines = [f"{sym.format(r['degree'])}({where}; {args.data}) = {r['group']}" for r in rows]
    out.emit({"command": "homology" if homological else "cohomology", "space": args.space,
              "data": args.data, "subset": sub, "degrees": rows}, lines)
    return 0


def _image_rows(x: Poset, cx) -> dict:
    return {d: {_label(p): inv for p, inv in row.items()} for d, row in cx.cohomology_invariants().items()}


def _cmd_image(args, ws, out, shriek: bool):
    f = ws.map(args.map)
    g = ws.coefficients(args.data, f.source)
    cx = dv.lshriek_image(f, g) if shriek else dv.rdirect_image(f, g)
    inv = _image_rows(f.target, cx)
    rows = []
    lines = []
    sym = "L_{} {}_! {}" if shriek else "R^{} {}_* {}"
    for d in sorted(inv, key=lambda d: -d if shriek else d):
        deg = -d if shriek else d
        stalks = {_label(p): _inv_json(inv[d].get(_label(p), (0, ())))
                  for p in f.target.elements}
        rows.append({"degree": deg, "stalks": stalks})
        body = ", ".join(f"{p}: {v['group']}" for p, v in stalks.items())
        lines.append(f"{sym.format(deg, args.map, args.data)}: {body}")
    if not lines:
        lines.append("all images vanish")
    out.emit({"command": "shriek-image" if shriek else "direct-image", "map": args.map,
              "data": args.data, "degrees": rows}, lines)
    return 0


def _cmd_local(args, ws, out):
    x = ws.poset(args.space)
    f = ws.coefficients(args.data, x)
    closed = _subset(x, args.closed)
    if not x.is_closed(closed):
        raise InputError("the --closed subset is not closed")
    c = dv.local_cohomology_complex(f, closed)
    table = c.invariants()
    degrees = range(0, x.dimension() + 2)
    rows = _degree_table(table, degrees)
    where = "{" + ",".join(closed) + "}"
    lines = [f"H^{r['degree']}_{where}({args.space}; {args.data}) = {r['group']}" for r in rows]
    out.emit({"command": "local-cohomology", "space": args.space, "data": args.data,
              "closed": closed, "degrees": rows}, lines)
    return 0


def _cmd_dualizing(args, ws, out, co: bool):
    x = ws.poset(args.space)
    k = du.codualizing_complex(x) if co else du.dualizing_complex(x)
    inv = _image_rows(x, k)
    rows, lines = [], []
    name = "D^X" if co else "D_X"
    for d in sorted(inv):
        stalks = {_label(p): _inv_json(inv[d].get(_label(p), (0, ()))) for p in x.elements}
        rows.append({"degree": d, "stalks": stalks})
        lines.append(f"H^{d}({name}): " + ", ".join(f"{p}: {v['group']}" for p, v in stalks.items()))
    out.emit({"command": "codualizing" if co else "dualizing", "space": args.space,
              "terms": {str(n): [g.ngens for g in k.term(n).stalks] for n in k.degrees()},
              "cohomology": rows}, lines)
    return 0


def _cmd_classify(args, ws, out):
    f = ws.map(args.map)
    c = cl.classify_map(f)
    d = c.as_dict()
    lines = [f"closed: {str(c.closed).lower()}", f"open: {str(c.open).lower()}",
             f"c_proper: {str(c.c_proper).lower()}", f"h_open: {str(c.h_open).lower()}"]
    for k, w in sorted(c.witnesses.items()):
        lines.append(f"witness[{k}]: {w}")
    out.emit({"command": "classify", "map": args.map, **d}, lines)
    return 0


def _family(args, f: MonotoneMap, ws: Workspace):
    if args.data:
        return [(n, ws.coefficients(n, f.source)) for n in args.data]
    if args.coeffs == "exhaustive":
        return cl.discriminating_family(f.source)
    return cl.discriminating_family(f.source, n_random=0)


def _side_lines(report: cl.TheoremReport) -> list[str]:
    lines = []
    for k, s in report.sides.items():
        verdict = "isomorphisms" if s.holds else "FAILS"
        exp = "" if s.expected is None else f" (classification predicts {'iso' if s.expected else 'failure'})"
        lines.append(f"{k}: {verdict} over {s.tested} comparisons{exp}")
        if s.witness:
            lines.append("  witness: " + json.dumps(s.witness))
    return lines


def _cmd_verify(args, ws, out):
    kind = args.what
    if kind in ("base-change", "supports", "fiber"):
        f = ws.map(args.target)
        if kind == "fiber":
            g = parse_group(args.coeffs if args.coeffs not in (None, "exhaustive") else "Z")
            rep = cl.verify_fiber_theorem(f, g, homological=not args.cohomological)
        elif kind == "base-change":
            rep = cl.verify_base_change_theorem(f, _family(args, f, ws))
        else:
            rep = cl.verify_support_commutation(f, _family(args, f, ws))
        lines = [f"{rep.check} for {args.target}: " +
                 ("precondition not met" if not rep.precondition else
                  "holds" if rep.holds else "counterexample found")]
        lines += _side_lines(rep) if rep.precondition else [json.dumps(rep.details)]
        if rep.precondition:
            lines.append("consistent with classification: " + str(rep.consistent).lower())
        out.emit({"command": "verify", "what": kind, "target": args.target, **rep.as_dict()}, lines)
        return 0 if rep.precondition and rep.holds and rep.consistent else 1
    x = ws.poset(args.target)
    data = None
    if args.data:
        data = ws.coefficients(args.data[0], x)
    if kind == "top-duality":
        reps = [du.verify_topological_duality(x, data)]
    else:
        reps = [du.verify_homology_cohomology_duality(x, data),
                du.verify_dualizing_pairing(x, data)]
        oracle = all(du.stalk_invariants(du.dualizing_complex(x), p) == du.dualizing_stalk_oracle(x, p)
                     and du.stalk_invariants(du.codualizing_complex(x), p) == du.codualizing_stalk_oracle(x, p)
                     for p in x.elements)
        reps.append(du.DualityReport("dualizing stalk oracles", oracle, {}, {}, {}))
    ok = all(r.holds for r in reps)
    lines = [f"{r.name}: {'holds' if r.holds else 'FAILS'}" for r in reps]
    out.emit({"command": "verify", "what": kind, "target": args.target, "holds": ok,
              "reports": [r.as_dict() for r in reps]}, lines)
    return 0 if ok else 1


def _cmd_sphere(args, ws, out):
    if args.n < 0:
        raise InputError("sphere dimension must be >= 0")
    x = sphere_model(args.n)
    name = args.name or f"S{args.n}"
    text = format_poset(x, name)
    out.emit({"command": "sphere", "n": args.n, "poset": text,
              "elements": list(x.elements), "covers": [list(c) for c in x.cover_relations()]}, [text])
    return 0


def _cmd_barycentric(args, ws, out):
    x = ws.poset(args.space)
    bx, pi = barycentric(x)
    relabel = {e: _label(e) for e in bx.elements}
    bx2 = bx.relabel(relabel)
    name = args.name or f"b{args.space}"
    pi2 = MonotoneMap(bx2, x, {relabel[e]: pi(e) for e in bx.elements})
    ptext = format_poset(bx2, name)
    mtext = format_map(pi2, f"pi_{name}", name, args.space)
    out.emit({"command": "barycentric", "space": args.space, "poset": ptext, "map": mtext}, [ptext, mtext])
    return 0


def build_parser() -> argparse.ArgumentParser:
    def options(default_files, default_json):
        o = argparse.ArgumentParser(add_help=False)
        o.add_argument("-f", "--file", action="append", default=default_files,
                       help="workspace file with poset/map/data declarations (repeatable)")
        o.add_argument("--json", action="store_true", default=default_json,
                       help="machine-readable output")
        return o

    # options may come before or after the command; the copy on the
    # subcommands must not overwrite values already parsed
    common = options(argparse.SUPPRESS, argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="finspace", parents=[options([], False)],
                                description="Sheaf (co)homology and base-change checks on finite spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    for cmd in ("cohomology", "homology"):
        s = sub.add_parser(cmd, parents=[common])
        s.add_argument("space")
        s.add_argument("data", nargs="?", default="Z", help="data name or group literal (default Z)")
        s.add_argument("--on", help="subspace, as comma separated points")
    for cmd in ("direct-image", "shriek-image"):
        s = sub.add_parser(cmd, parents=[common])
        s.add_argument("map")
        s.add_argument("data", nargs="?", default="Z")
    s = sub.add_parser("local-cohomology", parents=[common])
    s.add_argument("space")
    s.add_argument("data", nargs="?", default="Z")
    s.add_argument("--closed", required=True, help="closed subset, comma separated")
    for cmd in ("dualizing", "codualizing"):
        s = sub.add_parser(cmd, parents=[common])
        s.add_argument("space")
    s = sub.add_parser("classify", parents=[common])
    s.add_argument("map")
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("what", choices=["base-change", "supports", "fiber", "duality", "top-duality"])
    s.add_argument("target", help="map (base-change, supports, fiber) or space (duality checks)")
    s.add_argument("--coeffs", default=None,
                   help="'exhaustive' for the full test family, or a group literal for 'fiber'")
    s.add_argument("--data", action="append", default=[], help="test only these data (repeatable)")
    s.add_argument("--cohomological", action="store_true", help="fiber theorem for cohomology")
    s = sub.add_parser("sphere", parents=[common])
    s.add_argument("n", type=int)
    s.add_argument("--name")
    s = sub.add_parser("barycentric", parents=[common])
    s.add_argument("space")
    s.add_argument("--name")
    return p


_COMMANDS = {
    "cohomology": lambda a, w, o: _cmd_cohomology(a, w, o, False),
    "homology": lambda a, w, o: _cmd_cohomology(a, w, o, True),
    "direct-image": lambda a, w, o: _cmd_image(a, w, o, False),
    "shriek-image": lambda a, w, o: _cmd_image(a, w, o, True),
    "local-cohomology": _cmd_local,
    "dualizing": lambda a, w, o: _cmd_dualizing(a, w, o, False),
    "codualizing": lambda a, w, o: _cmd_dualizing(a, w, o, True),
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "sphere": _cmd_sphere,
    "barycentric": _cmd_barycentric,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        ws = Workspace.with_builtins()
        for path in args.file:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read {path}: {exc.strerror}") from None
            parse_workspace(text, ws, source=path)
        return _COMMANDS[args.command](args, ws, Output(args.json, stdout))
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
