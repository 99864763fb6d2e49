"""Line-oriented text formats for instances, solutions and lift data.

Every file starts with a ``<kind> 1`` header.  ``#`` starts a comment.
Errors carry the line and column of the offending token.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .model import InstanceError, Link, SrapInstance, build_instance
from .reduction import LiftData, ReductionError, SagInstance, ScapInstance, build_sag, build_scap

KINDS = ("srap", "scap", "sag", "solution", "lift")


class FormatError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass
class _Tok:
    text: str
    line: int
    col: int

    def int(self, lo=None, what="value") -> int:
        try:
            v = int(self.text)
        except ValueError:
            raise FormatError(self.line, self.col, f"expected an integer {what}, got {self.text!r}") from None
        if lo is not None and v < lo:
            raise FormatError(self.line, self.col, f"{what} must be at least {lo}, got {v}")
        return v


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append(_Tok(part, no, col + 1))
            col += len(part)
        if toks:
            yield no, toks


def _parse(text: str, kind: str, arity: dict, repeatable: set):
    """Return (directive -> list of token lists, header line)."""
    out = {}
    header = None
    for no, toks in _lines(text):
        if header is None:
            if toks[0].text != kind:
                raise FormatError(no, toks[0].col, f"expected header {kind!r}, got {toks[0].text!r}")
            if len(toks) != 2 or toks[1].text != "1":
                raise FormatError(no, toks[0].col, f"unsupported {kind} format version")
            header = no
            continue
        name = toks[0].text
        if name not in arity:
            raise FormatError(no, toks[0].col, f"unknown directive {name!r}")
        args = toks[1:]
        want = arity[name]
        if want is not None and len(args) != want:
            raise FormatError(no, toks[0].col, f"{name} takes {want} arguments, got {len(args)}")
        if name in out and name not in repeatable:
            raise FormatError(no, toks[0].col, f"duplicate directive {name!r}")
        out.setdefault(name, []).append((toks[0], args))
    if header is None:
        raise FormatError(1, 1, f"empty file; expected header {kind!r}")
    return out, header


def _require(d, name, header):
    if name not in d:
        raise FormatError(header, 1, f"missing directive {name!r}")
    return d[name][0]


def _terminal_list(tok, args, limit, what="vertex"):
    if not args:
        raise FormatError(tok.line, tok.col, "terminals needs a count")
    count = args[0].int(0, "terminal count")
    ids = args[1:]
    if len(ids) != count:
        raise FormatError(tok.line, tok.col, f"terminal count {count} but {len(ids)} ids given")
    out = []
    for t in ids:
        v = t.int(0, "terminal")
        if v >= limit:
            raise FormatError(t.line, t.col, f"terminal {v} is not a {what} (0..{limit - 1})")
        if v in out:
            raise FormatError(t.line, t.col, f"terminal {v} listed twice")
        out.append(v)
    return out


def _pairs(d, name, limit, with_cost):
    out = []
    seen = set()
    for tok, args in d.get(name, []):
        u = args[0].int(0, "endpoint")
        v = args[1].int(0, "endpoint")
        for t, x in ((args[0], u), (args[1], v)):
            if x >= limit:
                raise FormatError(t.line, t.col, f"endpoint {x} out of range 0..{limit - 1}")
        if u == v:
            raise FormatError(tok.line, tok.col, f"{name} {u} {v} is a loop")
        if with_cost:
            c = args[2].int(0, "cost")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise FormatError(tok.line, tok.col, f"duplicate link {key}")
            seen.add(key)
            out.append(Link(u, v, c))
        else:
            out.append((u, v))
    return out


# --- SRAP ---------------------------------------------------------------------

def parse_srap(text: str) -> SrapInstance:
    d, header = _parse(text, "srap", {"ring": 1, "outside": 1, "terminals": None, "link": 3}, {"link"})
    n = _require(d, "ring", header)[1][0].int(3, "ring size")
    m = _require(d, "outside", header)[1][0].int(0, "outside count")
    tok, args = _require(d, "terminals", header)
    terms = _terminal_list(tok, args, n, "ring vertex")
    if 0 not in terms:
        raise FormatError(tok.line, tok.col, "root 0 must be a terminal")
    links = _pairs(d, "link", n + m, True)
    try:
        return build_instance(n, m, terms, links)
    except InstanceError as exc:
        raise FormatError(header, 1, str(exc)) from None


def serialize_srap(inst: SrapInstance) -> str:
    lines = ["srap 1", f"ring {inst.n}", f"outside {inst.m}",
             " ".join(["terminals", str(len(inst.terminals))] + [str(t) for t in sorted(inst.terminals)])]
    lines += [f"link {l.u} {l.v} {l.cost}" for l in sorted(inst.links)]
    return "\n".join(lines) + "\n"


# --- SCAP ---------------------------------------------------------------------

def parse_scap(text: str) -> ScapInstance:
    d, header = _parse(text, "scap", {"vertices": 1, "terminals": None, "edge": 2, "link": 3}, {"edge", "link"})
    N = _require(d, "vertices", header)[1][0].int(1, "vertex count")
    tok, args = _require(d, "terminals", header)
    terms = _terminal_list(tok, args, N)
    edges = _pairs(d, "edge", N, False)
    links = _pairs(d, "link", N, True)
    try:
        return build_scap(N, edges, terms, links, 2)
    except ReductionError as exc:
        raise FormatError(header, 1, str(exc)) from None


def serialize_scap(inst: ScapInstance) -> str:
    lines = ["scap 1", f"vertices {inst.num_vertices}",
             " ".join(["terminals", str(len(inst.terminals))] + [str(t) for t in sorted(inst.terminals)])]
    lines += [f"edge {u} {v}" for u, v in sorted(inst.edges)]
    lines += [f"link {l.u} {l.v} {l.cost}" for l in sorted(inst.links)]
    return "\n".join(lines) + "\n"


# --- SAG ----------------------------------------------------------------------

def parse_sag(text: str) -> SagInstance:
    d, header = _parse(text, "sag", {"k": 1, "h_vertices": 1, "extra_vertices": 1, "edge": 2, "link": 3},
                       {"edge", "link"})
    k = _require(d, "k", header)[1][0].int(1, "k")
    h = _require(d, "h_vertices", header)[1][0].int(2, "h_vertices")
    extra = _require(d, "extra_vertices", header)[1][0].int(0, "extra_vertices")
    edges = _pairs(d, "edge", h, False)
    links = _pairs(d, "link", h + extra, True)
    try:
        return build_sag(k, h, extra, edges, links)
    except ReductionError as exc:
        raise FormatError(header, 1, str(exc)) from None


def serialize_sag(inst: SagInstance) -> str:
    lines = ["sag 1", f"k {inst.k}", f"h_vertices {inst.h_vertices}", f"extra_vertices {inst.extra_vertices}"]
    lines += [f"edge {u} {v}" for u, v in sorted(inst.edges)]
    lines += [f"link {l.u} {l.v} {l.cost}" for l in sorted(inst.links)]
    return "\n".join(lines) + "\n"


# --- solutions ----------------------------------------------------------------

@dataclass
class Solution:
    cost: int
    pairs: list  # sorted (u, v)


def parse_solution(text: str) -> Solution:
    d, header = _parse(text, "solution", {"cost": 1, "link": 2}, {"link"})
    cost = _require(d, "cost", header)[1][0].int(0, "cost")
    pairs = []
    for tok, args in d.get("link", []):
        u, v = args[0].int(0, "endpoint"), args[1].int(0, "endpoint")
        if u == v:
            raise FormatError(tok.line, tok.col, "loop link")
        pairs.append((min(u, v), max(u, v)))
    return Solution(cost, sorted(set(pairs)))


def serialize_solution(links) -> str:
    links = sorted(links)
    lines = ["solution 1", f"cost {sum(l.cost for l in links)}"]
    lines += [f"link {l.u} {l.v}" for l in links]
    return "\n".join(lines) + "\n"


def resolve_solution(sol: Solution, links) -> list[Link]:
    """Attach costs from the instance's link list; unknown pairs are errors."""
    by_pair = {l.pair: l for l in links}
    out = []
    for p in sol.pairs:
        if p not in by_pair:
            raise ValueError(f"solution link {p} is not a link of the instance")
        out.append(by_pair[p])
    return out


# --- lift data ----------------------------------------------------------------

def parse_lift(text: str) -> LiftData:
    d, header = _parse(text, "lift", {"k": 1, "zero": 2, "map": 5}, {"zero", "map"})
    k = _require(d, "k", header)[1][0].int(1, "k")
    zero = set()
    for tok, args in d.get("zero", []):
        u, v = args[0].int(0, "endpoint"), args[1].int(0, "endpoint")
        zero.add((min(u, v), max(u, v)))
    origin = {}
    for tok, args in d.get("map", []):
        u, v, ou, ov, c = (a.int(0, "value") for a in args)
        origin[(min(u, v), max(u, v))] = Link(ou, ov, c)
    return LiftData(k, frozenset(zero), origin)


def serialize_lift(lift: LiftData) -> str:
    lines = ["lift 1", f"k {lift.k}"]
    lines += [f"zero {u} {v}" for u, v in sorted(lift.zero_pairs)]
    lines += [f"map {u} {v} {l.u} {l.v} {l.cost}" for (u, v), l in sorted(lift.origin.items())]
    return "\n".join(lines) + "\n"


# --- dispatch -----------------------------------------------------------------

def sniff(text: str) -> str:
    for no, toks in _lines(text):
        if toks[0].text in KINDS:
            return toks[0].text
        raise FormatError(no, toks[0].col, f"unknown file kind {toks[0].text!r}")
    raise FormatError(1, 1, "empty file")


PARSERS = {"srap": parse_srap, "scap": parse_scap, "sag": parse_sag}
SERIALIZERS = {SrapInstance: serialize_srap, ScapInstance: serialize_scap, SagInstance: serialize_sag}


def parse_instance(text: str):
    kind = sniff(text)
    if kind not in PARSERS:
        raise FormatError(1, 1, f"{kind} file is not an instance")
    return PARSERS[kind](text)


def serialize_instance(inst) -> str:
    return SERIALIZERS[type(inst)](inst)


def digest(inst) -> str:
    return hashlib.sha256(serialize_instance(inst).encode()).hexdigest()[:16]
