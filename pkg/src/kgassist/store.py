"""In-memory typed triple store with pattern matching and flat-file persistence.

The store keeps a set of subject/relation/object triples indexed three ways,
answers conjunctive basic-graph-pattern queries with filters, grouping and
frequency ranking, and round-trips through a line-oriented N-Triples-style
file format.

Concurrency contract: reads are safe to share across threads; any mutation
requires exclusive access. Use :meth:`Graph.copy` to take a snapshot for
concurrent readers.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

VALID_DATATYPES = ("string", "integer", "float", "boolean")

# Characters that would break the flat-file syntax; stricter than plain
# "no whitespace" so every storable IRI is also serialisable.
_IRI_FORBIDDEN = re.compile(r'[\s<>"\\]')


class StoreError(Exception):
    """Base class for store failures."""


class TermError(StoreError):
    """A term violates its well-formedness rules."""


class TripleError(StoreError):
    """A triple is malformed. ``position`` names the offending field."""

    def __init__(self, position: str, message: str):
        self.position = position
        super().__init__(f"{position}: {message}")


class ParseError(StoreError):
    """A persisted line could not be parsed. ``line_no`` is 1-based."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class PatternError(StoreError):
    """A query pattern is structurally invalid."""


def _check_lexical(value: str, datatype: str) -> None:
    try:
        if datatype == "integer":
            int(value)
        elif datatype == "float":
            float(value)
        elif datatype == "boolean":
            if value not in ("true", "false"):
                raise ValueError(value)
    except ValueError:
        raise TermError(
            f"literal {value!r} does not parse as {datatype}"
        ) from None


@dataclass(frozen=True)
class Term:
    """An IRI or a typed literal.

    IRIs are non-empty and contain no whitespace (nor ``<>"\\``, so they
    serialise). Literal values must parse under their declared datatype.
    """

    kind: str
    value: str
    datatype: Optional[str] = None

    def __post_init__(self):
        if self.kind == "iri":
            if not self.value or _IRI_FORBIDDEN.search(self.value):
                raise TermError(
                    f"IRI must be non-empty without whitespace or <>\"\\: {self.value!r}"
                )
            if self.datatype is not None:
                raise TermError("IRI terms carry no datatype")
        elif self.kind == "literal":
            if self.datatype not in VALID_DATATYPES:
                raise TermError(f"unknown literal datatype: {self.datatype!r}")
            _check_lexical(self.value, self.datatype)
        else:
            raise TermError(f"unknown term kind: {self.kind!r}")

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    @property
    def is_literal(self) -> bool:
        return self.kind == "literal"

    def as_python(self):
        """The natural Python value (int/float/bool/str; IRIs give their string)."""
        if self.kind == "iri" or self.datatype == "string":
            return self.value
        if self.datatype == "integer":
            return int(self.value)
        if self.datatype == "float":
            return float(self.value)
        return self.value == "true"

    def sort_key(self):
        return (self.kind, self.value, self.datatype or "")

    def __repr__(self):
        if self.is_iri:
            return f"<{self.value}>"
        return f'"{self.value}"^^{self.datatype}'


def iri(value: str) -> Term:
    return Term("iri", value)


def lit(value, datatype: Optional[str] = None) -> Term:
    """Build a literal term, inferring the datatype from the Python type."""
    if datatype is not None:
        return Term("literal", str(value), datatype)
    if isinstance(value, bool):
        return Term("literal", "true" if value else "false", "boolean")
    if isinstance(value, int):
        return Term("literal", str(value), "integer")
    if isinstance(value, float):
        return Term("literal", repr(value), "float")
    if isinstance(value, str):
        return Term("literal", value, "string")
    raise TermError(f"cannot infer literal datatype for {type(value).__name__}")


# Core vocabulary shared by the schema layer and subclass-aware lookups.
RDF_TYPE = iri("rdf:type")
RDFS_SUBCLASS_OF = iri("rdfs:subClassOf")


@dataclass(frozen=True)
class Triple:
    subject: Term
    relation: Term
    object: Term

    def __post_init__(self):
        for position, term in (("subject", self.subject), ("relation", self.relation)):
            if not isinstance(term, Term):
                raise TripleError(position, f"expected a Term, got {type(term).__name__}")
            if not term.is_iri:
                raise TripleError(position, "must be an IRI term")
        if not isinstance(self.object, Term):
            raise TripleError("object", f"expected a Term, got {type(self.object).__name__}")

    def sort_key(self):
        return (self.subject.sort_key(), self.relation.sort_key(), self.object.sort_key())

    def __repr__(self):
        return f"({self.subject!r} {self.relation!r} {self.object!r})"


def triple(s: Term, r: Term, o: Term) -> Triple:
    return Triple(s, r, o)


@dataclass(frozen=True)
class Var:
    """A named variable inside a query pattern."""

    name: str

    def __repr__(self):
        return f"?{self.name}"


_COMPARATORS = ("==", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Filter:
    var: Var
    op: str
    term: Term

    def __post_init__(self):
        if self.op not in _COMPARATORS:
            raise PatternError(f"unknown comparator {self.op!r}")


Atom = tuple  # (s, r, o), each a Term or Var


@dataclass(frozen=True)
class Pattern:
    """A conjunctive basic graph pattern with filters, grouping and a limit."""

    atoms: tuple
    filters: tuple = ()
    group_var: Optional[Var] = None
    limit: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(tuple(a) for a in self.atoms))
        object.__setattr__(self, "filters", tuple(self.filters))
        if self.limit is not None and self.limit <= 0:
            raise PatternError("limit must be positive")
        in_atoms = self.variables()
        for f in self.filters:
            if f.var not in in_atoms:
                raise PatternError(f"filter variable {f.var!r} appears in no atom")
        if self.group_var is not None and self.group_var not in in_atoms:
            raise PatternError(f"group variable {self.group_var!r} appears in no atom")

    def variables(self) -> set:
        out = set()
        for atom in self.atoms:
            for pos in atom:
                if isinstance(pos, Var):
                    out.add(pos)
        return out

    def to_json(self) -> dict:
        def enc(pos):
            if isinstance(pos, Var):
                return {"var": pos.name}
            if pos.is_iri:
                return {"iri": pos.value}
            return {"literal": pos.value, "datatype": pos.datatype}

        return {
            "atoms": [[enc(p) for p in atom] for atom in self.atoms],
            "filters": [
                {"var": f.var.name, "op": f.op, **enc(f.term)} for f in self.filters
            ],
            "group_var": self.group_var.name if self.group_var else None,
            "limit": self.limit,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Pattern":
        def dec(pos):
            if "var" in pos:
                return Var(pos["var"])
            if "iri" in pos:
                return iri(pos["iri"])
            return Term("literal", pos["literal"], pos["datatype"])

        filters = tuple(
            Filter(Var(f["var"]), f["op"], dec({k: v for k, v in f.items() if k not in ("var", "op")}))
            for f in data.get("filters", ())
        )
        group = data.get("group_var")
        return cls(
            atoms=tuple(tuple(dec(p) for p in atom) for atom in data["atoms"]),
            filters=filters,
            group_var=Var(group) if group else None,
            limit=data.get("limit"),
        )


def _compare(a: Term, op: str, b: Term) -> bool:
    numeric = ("integer", "float")
    if (
        a.is_literal
        and b.is_literal
        and a.datatype in numeric
        and b.datatype in numeric
    ):
        x, y = float(a.value), float(b.value)
    else:
        x, y = a.value, b.value
    if op == "==":
        return x == y
    if op == "!=":
        return x != y
    if op == "<":
        return x < y
    if op == "<=":
        return x <= y
    if op == ">":
        return x > y
    return x >= y


Binding = dict  # Var -> Term


class Graph:
    """A set of triples with by-subject, by-relation and by-object indexes.

    Duplicate adds are no-ops (set semantics); every index entry always
    corresponds to exactly one stored triple.
    """

    __slots__ = ("_triples", "_by_s", "_by_r", "_by_o")

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set = set()
        self._by_s: dict = {}
        self._by_r: dict = {}
        self._by_o: dict = {}
        for t in triples:
            self.add(t)

    # -- mutation -----------------------------------------------------------

    def add(self, t: Triple) -> "Graph":
        if not isinstance(t, Triple):
            raise TripleError("triple", f"expected a Triple, got {type(t).__name__}")
        if t in self._triples:
            return self
        self._triples.add(t)
        self._by_s.setdefault(t.subject, set()).add(t)
        self._by_r.setdefault(t.relation, set()).add(t)
        self._by_o.setdefault(t.object, set()).add(t)
        return self

    def add_all(self, triples: Iterable[Triple]) -> "Graph":
        for t in triples:
            self.add(t)
        return self

    def discard(self, t: Triple) -> "Graph":
        if t not in self._triples:
            return self
        self._triples.discard(t)
        for index, key in ((self._by_s, t.subject), (self._by_r, t.relation), (self._by_o, t.object)):
            bucket = index[key]
            bucket.discard(t)
            if not bucket:
                del index[key]
        return self

    def copy(self) -> "Graph":
        return Graph(self._triples)

    # -- inspection ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def sorted_triples(self) -> list:
        return sorted(self._triples, key=Triple.sort_key)

    def subjects(self) -> set:
        return set(self._by_s)

    def relations(self) -> set:
        return set(self._by_r)

    def objects(self) -> set:
        return set(self._by_o)

    def entities(self) -> set:
        """All IRIs appearing in subject or object position."""
        return set(self._by_s) | {o for o in self._by_o if o.is_iri}

    def triples(
        self,
        s: Optional[Term] = None,
        r: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Triples matching the given ground positions, via the smallest index."""
        candidates = None
        for index, key in ((self._by_s, s), (self._by_r, r), (self._by_o, o)):
            if key is None:
                continue
            bucket = index.get(key)
            if not bucket:
                return iter(())
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            candidates = self._triples
        return (
            t
            for t in candidates
            if (s is None or t.subject == s)
            and (r is None or t.relation == r)
            and (o is None or t.object == o)
        )

    def value(self, s: Term, r: Term) -> Optional[Term]:
        """The unique object of (s, r, ·), or None. Raises if several exist."""
        objs = [t.object for t in self.triples(s=s, r=r)]
        if not objs:
            return None
        if len(objs) > 1:
            raise StoreError(f"multiple objects for ({s!r}, {r!r})")
        return objs[0]

    # -- querying -----------------------------------------------------------

    def match(self, pattern: Pattern) -> list:
        """All variable bindings satisfying the pattern's atoms and filters.

        Bindings are returned in a deterministic order: sorted by the bound
        terms taken in variable-name order, then truncated to the limit.
        A fully ground pattern yields one empty binding iff all its atoms
        are stored.
        """
        bindings: list = [dict()]
        for atom in pattern.atoms:
            if not bindings:
                break
            new_bindings = []
            for binding in bindings:
                resolved = [
                    binding.get(pos) if isinstance(pos, Var) else pos for pos in atom
                ]
                qs, qr, qo = resolved
                for t in self.triples(s=qs, r=qr, o=qo):
                    extended = self._unify(binding, atom, t)
                    if extended is not None:
                        new_bindings.append(extended)
            bindings = new_bindings
        for f in pattern.filters:
            bindings = [b for b in bindings if _compare(b[f.var], f.op, f.term)]
        order = sorted(pattern.variables(), key=lambda v: v.name)
        bindings.sort(key=lambda b: tuple(b[v].sort_key() for v in order))
        if pattern.limit is not None:
            bindings = bindings[: pattern.limit]
        return bindings

    @staticmethod
    def _unify(binding: Binding, atom, t: Triple) -> Optional[Binding]:
        values = (t.subject, t.relation, t.object)
        out = None
        for pos, val in zip(atom, values):
            if isinstance(pos, Var):
                bound = (out or binding).get(pos)
                if bound is None:
                    if out is None:
                        out = dict(binding)
                    out[pos] = val
                elif bound != val:
                    return None
            elif pos != val:
                return None
        return out if out is not None else dict(binding)

    def rank_by_frequency(self, pattern: Pattern, var: Var, k: int) -> list:
        """Top-k (term, count) pairs of ``var`` over the pattern's matches.

        Sorted by count descending, ties broken by term ordering ascending.
        An empty match list gives an empty ranking, not an error.
        """
        if var not in pattern.variables():
            raise PatternError(f"ranking variable {var!r} appears in no atom")
        if k <= 0:
            raise PatternError("k must be positive")
        counts = Counter(b[var] for b in self.match(pattern))
        ranked = sorted(counts.items(), key=lambda tc: (-tc[1], tc[0].sort_key()))
        return ranked[:k]

    def subclass_closure(self, cls: Term) -> set:
        """``cls`` plus all transitive subclasses under rdfs:subClassOf."""
        closure = {cls}
        frontier = [cls]
        while frontier:
            parent = frontier.pop()
            for t in self.triples(r=RDFS_SUBCLASS_OF, o=parent):
                if t.subject not in closure:
                    closure.add(t.subject)
                    frontier.append(t.subject)
        return closure

    def instances_of(self, cls: Term) -> set:
        """Entities typed as ``cls`` or any transitive subclass of it."""
        if not isinstance(cls, Term) or not cls.is_iri:
            raise TermError("instances_of expects a class IRI")
        out: set = set()
        for c in self.subclass_closure(cls):
            out.update(t.subject for t in self.triples(r=RDF_TYPE, o=c))
        return out


# -- persistence -------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}

_LINE_RE = re.compile(r"^\s*<([^<>\s]+)>\s+<([^<>\s]+)>\s+(.+?)\s+\.\s*$")
_LITERAL_RE = re.compile(r'^"((?:[^"\\]|\\.)*)"(?:\^\^<([A-Za-z]+)>)?$')
_IRI_OBJ_RE = re.compile(r"^<([^<>\s]+)>$")


def _escape(value: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in value)


def _unescape(value: str, line_no: int) -> str:
    out = []
    it = iter(range(len(value)))
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\":
            if i + 1 >= len(value):
                raise ParseError(line_no, "dangling escape")
            nxt = value[i + 1]
            if nxt not in _UNESCAPES:
                raise ParseError(line_no, f"unknown escape \\{nxt}")
            out.append(_UNESCAPES[nxt])
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def format_term(t: Term) -> str:
    if t.is_iri:
        return f"<{t.value}>"
    body = f'"{_escape(t.value)}"'
    if t.datatype == "string":
        return body
    return f"{body}^^<{t.datatype}>"


def format_triple(t: Triple) -> str:
    return f"{format_term(t.subject)} {format_term(t.relation)} {format_term(t.object)} ."


def save_ntriples(g: Graph, path) -> None:
    """Write one triple per line, sorted, each line terminated by `` .``."""
    lines = sorted(format_triple(t) for t in g)
    text = "\n".join(lines)
    if lines:
        text += "\n"
    Path(path).write_text(text, encoding="utf-8")


def _parse_object(raw: str, line_no: int) -> Term:
    m = _IRI_OBJ_RE.match(raw)
    if m:
        return iri(m.group(1))
    m = _LITERAL_RE.match(raw)
    if m:
        value = _unescape(m.group(1), line_no)
        datatype = m.group(2) or "string"
        try:
            return Term("literal", value, datatype)
        except TermError as e:
            raise ParseError(line_no, str(e)) from None
    raise ParseError(line_no, f"unparseable object term: {raw!r}")


def parse_ntriples(text: str) -> Graph:
    g = Graph()
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ParseError(line_no, f"unparseable triple line: {line!r}")
        try:
            s = iri(m.group(1))
            r = iri(m.group(2))
        except TermError as e:
            raise ParseError(line_no, str(e)) from None
        o = _parse_object(m.group(3), line_no)
        g.add(Triple(s, r, o))
    return g


def load_ntriples(path) -> Graph:
    """Parse a flat triple file; parse errors carry the 1-based line number."""
    return parse_ntriples(Path(path).read_text(encoding="utf-8"))
