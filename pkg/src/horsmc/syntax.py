"""Text formats for schemes and automata.

Scheme files::

    -- comment
    %start S.            (optional; default is the first declaration)
    %maxpriority 2.      (optional; default is the largest priority used)
    S : o.
    F : (o -> o) -> o -> o.
    S -> F G S.
    F f x -> [E 1, f x, [A 2, x]].

Parity constructors are ``[E p, ..]`` / ``[A p, ..]``; plain ones are
``[name, ..]``.  Automaton files use ``%alphabet``, ``%states``,
``%existential``, ``%initial``, ``%delta q a l -> (p,c) .. .`` and
``%priority q a -> n .``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .automaton import Apt, MissingTransition
from .core import (
    NT,
    O,
    Arrow,
    Node,
    ParityLabel,
    Player,
    RecursionScheme,
    Rule,
    SchemeError,
    SimpleType,
    Term,
    Var,
    app,
    check_scheme,
    render_term,
    subterms,
)


class ParseError(SchemeError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


IDENT = r"[A-Za-z_][A-Za-z0-9_'#@]*(?:\$\[[0-9,]*\][A-Za-z0-9_'#@]*)*"

_TOKEN = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<arrow>->)
  | (?P<int>[0-9]+)
  | (?P<ident>{IDENT})
  | (?P<directive>%[a-z]+)
  | (?P<punct>[:()\[\],.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind if kind != "punct" else tok, tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def take(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            want = {"ident": "a name", "int": "a number", "arrow": "'->'"}.get(kind, repr(kind))
            got = repr(tok.text) if tok.text else "end of input"
            self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            self.i += 1
            return self.toks[self.i - 1]
        return None

    # types -----------------------------------------------------------

    def type_(self) -> SimpleType:
        left = self.type_atom()
        if self.accept("arrow"):
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> SimpleType:
        if self.accept("("):
            t = self.type_()
            self.take(")")
            return t
        tok = self.take("ident")
        if tok.text != "o":
            self.error(f"unknown type {tok.text!r}", tok)
        return O

    # terms -----------------------------------------------------------

    def term(self, params: set[str]) -> Term:
        head = self.atom(params)
        args = []
        while self.tok.kind in ("ident", "(", "["):
            args.append(self.atom(params))
        return app(head, *args)

    def atom(self, params: set[str]) -> Term:
        if self.accept("("):
            t = self.term(params)
            self.take(")")
            return t
        if self.tok.kind == "[":
            return self.node(params)
        tok = self.take("ident")
        return Var(tok.text) if tok.text in params else NT(tok.text)

    def node(self, params: set[str]) -> Node:
        self.take("[")
        tok = self.take("ident")
        if tok.text in ("E", "A") and self.tok.kind == "int":
            label = ParityLabel(Player(tok.text), int(self.take("int").text))
        else:
            label = tok.text
        children = []
        while self.accept(","):
            children.append(self.term(params))
        self.take("]")
        return Node(label, tuple(children))


def parse_scheme(text: str) -> RecursionScheme:
    """Parse and type-check a scheme; see the module docstring for the grammar."""
    p = _Parser(text)
    types: dict[str, SimpleType] = {}
    rules: dict[str, Rule] = {}
    start: Optional[str] = None
    declared_d: Optional[int] = None
    while p.tok.kind != "eof":
        if p.tok.kind == "directive":
            d = p.take("directive")
            if d.text == "%start":
                start = p.take("ident").text
            elif d.text == "%maxpriority":
                declared_d = int(p.take("int").text)
            else:
                p.error(f"unknown directive {d.text}", d)
            p.take(".")
            continue
        name_tok = p.take("ident")
        name = name_tok.text
        if p.accept(":"):
            if name in types:
                p.error(f"{name} declared twice", name_tok)
            types[name] = p.type_()
            p.take(".")
            continue
        params = []
        while p.tok.kind == "ident":
            params.append(p.take("ident").text)
        p.take("arrow")
        if name in rules:
            p.error(f"second rule for {name}", name_tok)
        if name not in types:
            p.error(f"rule for {name} has no type declaration", name_tok)
        body = p.term(set(params))
        p.take(".")
        rules[name] = Rule(tuple(params), body)
    if not types:
        raise ParseError("no declarations", 1, 1)
    if start is None:
        start = next(iter(types))
    d = declared_d
    prios = [
        lab.priority
        for r in rules.values()
        for lab in _labels(r.body)
        if isinstance(lab, ParityLabel)
    ]
    if prios and d is None:
        d = max(prios)
    ordered = {n: rules[n] for n in types if n in rules}
    ordered.update(rules)
    g = RecursionScheme(types, ordered, start, d)
    check_scheme(g)
    return g


def _labels(t: Term):
    for s in subterms(t):
        if isinstance(s, Node):
            yield s.label


def render_type(t: SimpleType) -> str:
    return str(t)


def render_scheme(g: RecursionScheme) -> str:
    """Render ``g`` so that ``parse_scheme`` gives it back unchanged."""
    lines = [f"%start {g.start}."]
    if g.max_priority is not None:
        lines.append(f"%maxpriority {g.max_priority}.")
    for name, t in g.types.items():
        lines.append(f"{name} : {render_type(t)}.")
    for name, r in g.rules.items():
        lhs = " ".join((name,) + r.params)
        lines.append(f"{lhs} -> {render_term(r.body)}.")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# automata


def parse_automaton(text: str) -> Apt:
    p = _Parser(text)
    alphabet: dict[str, int] = {}
    states: list[str] = []
    existential: list[str] = []
    initial: Optional[str] = None
    delta: dict = {}
    eta: dict = {}
    seen_omega: set[str] = set()
    while p.tok.kind != "eof":
        d = p.take("directive")
        if d.text == "%alphabet":
            while p.tok.kind == "ident":
                a = p.take("ident").text
                p.take(":")
                alphabet[a] = int(p.take("int").text)
        elif d.text == "%states":
            while p.tok.kind == "ident":
                states.append(p.take("ident").text)
        elif d.text == "%existential":
            while p.tok.kind == "ident":
                existential.append(p.take("ident").text)
        elif d.text == "%initial":
            initial = p.take("ident").text
        elif d.text == "%delta":
            q = p.take("ident").text
            a_tok = p.take("ident")
            ell = int(p.take("int").text)
            p.take("arrow")
            moves = []
            while p.accept("("):
                s = p.take("ident").text
                p.take(",")
                c = int(p.take("int").text)
                p.take(")")
                moves.append((s, c))
            p.take(".")
            key = (q, a_tok.text, ell)
            if key in delta:
                p.error(f"duplicate transition for {key}", a_tok)
            delta[key] = tuple(moves)
            if a_tok.text == "_omega" and ell == 0:
                seen_omega.add(q)
        elif d.text == "%priority":
            q = p.take("ident").text
            a = p.take("ident").text
            p.take("arrow")
            eta[(q, a)] = int(p.take("int").text)
            p.take(".")
        else:
            p.error(f"unknown section {d.text}", d)
    if initial is None:
        raise ParseError("missing %initial", p.tok.line, p.tok.col)
    missing = [q for q in states if q not in seen_omega]
    if missing:
        raise MissingTransition(f"no _omega transition for state(s) {', '.join(missing)}")
    for a in alphabet:
        if a.startswith("_"):
            raise SchemeError(f"label {a!r} is reserved")
    return Apt(alphabet, max(alphabet.values(), default=0), tuple(states),
               frozenset(existential), initial, delta, eta)


def render_automaton(a: Apt) -> str:
    lines = [
        "%alphabet " + " ".join(f"{k}:{v}" for k, v in a.alphabet.items()),
        "%states " + " ".join(a.states),
        "%existential " + " ".join(q for q in a.states if q in a.existential),
        f"%initial {a.initial}",
    ]
    for (q, lab, ell), moves in a.delta.items():
        ms = " ".join(f"({p},{c})" for p, c in moves)
        lines.append(f"%delta {q} {lab} {ell} -> {ms} .")
    for (q, lab), n in a.eta.items():
        lines.append(f"%priority {q} {lab} -> {n} .")
    return "\n".join(lines) + "\n"
